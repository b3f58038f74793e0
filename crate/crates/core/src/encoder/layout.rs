use serde::Serialize;

use crate::bddl::{GameDomain, GameInstance, Side};
use crate::circuit::{Circuit, Quant, VarId};
use crate::semantics::Move;

/// Bits needed to write every value in `0..count`, i.e. `⌈log2 count⌉`.
pub fn index_width(count: usize) -> usize {
    if count <= 1 {
        0
    } else {
        (usize::BITS - (count - 1).leading_zeros()) as usize
    }
}

/// Bits for a 1-based coordinate up to `size`, i.e. `⌈log2(size+1)⌉`.
pub fn coord_width(size: u32) -> usize {
    (u32::BITS - size.leading_zeros()) as usize
}

/// Variables of one ply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepVars {
    pub side: Side,
    pub action: Vec<VarId>,
    pub x: Vec<VarId>,
    pub y: Vec<VarId>,
    /// Absent at the last ply.
    pub gamestop: Option<VarId>,
    /// White plies only.
    pub legal: Option<VarId>,
    pub pre_flags: Vec<VarId>,
}

/// Where every variable of the encoding lives. Step `i` (1-based) is
/// `steps[i - 1]`; the state bits of time `i` are `open[i - 1]` and
/// `white[i - 1]` for `i` in `1..=d+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarLayout {
    pub steps: Vec<StepVars>,
    pub b_x: Vec<VarId>,
    pub b_y: Vec<VarId>,
    pub b_c: Vec<VarId>,
    pub w_x: Vec<VarId>,
    pub w_y: Vec<VarId>,
    pub w_c: Vec<VarId>,
    pub w_ce: Vec<VarId>,
    pub s_x: Vec<VarId>,
    pub s_y: Vec<VarId>,
    pub open: Vec<VarId>,
    pub white: Vec<VarId>,
}

/// Sizes the encoding depends on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EncodingMeta {
    pub width: u32,
    pub height: u32,
    pub depth: u32,
    pub black_actions: Vec<String>,
    pub white_actions: Vec<String>,
    /// Largest White precondition count.
    pub pmax: usize,
    /// Largest White goal sub-condition count.
    pub pmax_goal: usize,
}

impl EncodingMeta {
    pub fn of(dom: &GameDomain, inst: &GameInstance) -> Self {
        let names = |side| dom.actions(side).iter().map(|a| a.name.clone()).collect();
        EncodingMeta {
            width: inst.width,
            height: inst.height,
            depth: inst.depth,
            black_actions: names(Side::Black),
            white_actions: names(Side::White),
            pmax: dom.white_actions.iter().map(|a| a.pre.len()).max().unwrap_or(0),
            pmax_goal: inst.white_goals.iter().map(|g| g.len()).max().unwrap_or(0),
        }
    }
}

impl VarLayout {
    /// Allocate all variables in prefix order and push the quantifier
    /// blocks onto `c`.
    pub(crate) fn allocate(c: &mut Circuit, meta: &EncodingMeta, goals: (usize, usize)) -> Self {
        let d = meta.depth;
        let (wx, wy) = (coord_width(meta.width), coord_width(meta.height));
        let mut steps = Vec::with_capacity(d as usize);
        for i in 1..=d {
            let side = Side::of_ply(i);
            let actions = match side {
                Side::Black => meta.black_actions.len(),
                Side::White => meta.white_actions.len(),
            };
            let action = c.add_vars(&format!("a{i}_"), index_width(actions));
            let x = c.add_vars(&format!("x{i}_"), wx);
            let y = c.add_vars(&format!("y{i}_"), wy);
            let gamestop = (i < d).then(|| c.add_var(format!("gs{i}")));
            let mut block: Vec<VarId> = action.iter().chain(&x).chain(&y).copied().collect();
            block.extend(gamestop);
            let (legal, pre_flags) = match side {
                Side::Black => {
                    c.push_block(Quant::Exists, format!("black move {i}"), block);
                    (None, Vec::new())
                }
                Side::White => {
                    c.push_block(Quant::Forall, format!("white move {i}"), block);
                    let legal = c.add_var(format!("l{i}"));
                    let flags = c.add_vars(&format!("p{i}_"), meta.pmax);
                    let mut ind = vec![legal];
                    ind.extend(&flags);
                    c.push_block(Quant::Exists, format!("white indicators {i}"), ind);
                    (Some(legal), flags)
                }
            };
            steps.push(StepVars {
                side,
                action,
                x,
                y,
                gamestop,
                legal,
                pre_flags,
            });
        }

        let b_x = c.add_vars("bx", wx);
        let b_y = c.add_vars("by", wy);
        let b_c = c.add_vars("bc", index_width(goals.0));
        c.push_block(Quant::Exists, "black goal", [b_x.as_slice(), &b_y, &b_c].concat());
        let w_x = c.add_vars("wx", wx);
        let w_y = c.add_vars("wy", wy);
        let w_c = c.add_vars("wc", index_width(goals.1));
        c.push_block(Quant::Forall, "white goal", [w_x.as_slice(), &w_y, &w_c].concat());
        let w_ce = c.add_vars("wce", index_width(meta.pmax_goal));
        c.push_block(Quant::Exists, "white counter-example", w_ce.clone());
        let s_x = c.add_vars("sx", wx);
        let s_y = c.add_vars("sy", wy);
        c.push_block(Quant::Forall, "symbolic position", [s_x.as_slice(), &s_y].concat());
        let mut open = Vec::new();
        let mut white = Vec::new();
        let mut state = Vec::new();
        for i in 1..=d + 1 {
            let o = c.add_var(format!("o{i}"));
            let w = c.add_var(format!("w{i}"));
            open.push(o);
            white.push(w);
            state.extend([o, w]);
        }
        c.push_block(Quant::Exists, "state", state);

        VarLayout {
            steps,
            b_x,
            b_y,
            b_c,
            w_x,
            w_y,
            w_c,
            w_ce,
            s_x,
            s_y,
            open,
            white,
        }
    }

    pub fn step(&self, i: u32) -> &StepVars {
        &self.steps[i as usize - 1]
    }

    /// Write `mv` into the move variables of step `i`.
    pub fn assign_move(&self, asg: &mut [bool], i: u32, mv: &Move) {
        let s = self.step(i);
        write_bits(asg, &s.action, mv.action as u64);
        write_bits(asg, &s.x, u64::from(mv.x));
        write_bits(asg, &s.y, u64::from(mv.y));
    }
}

/// Store `value` LSB-first into `vars`.
pub fn write_bits(asg: &mut [bool], vars: &[VarId], value: u64) {
    for (k, v) in vars.iter().enumerate() {
        asg[v.index()] = k < 64 && (value >> k) & 1 == 1;
    }
}

/// `(var, value)` pairs for `value` written LSB-first into `vars`.
pub fn bit_values(vars: &[VarId], value: u64) -> impl Iterator<Item = (VarId, bool)> + '_ {
    vars.iter()
        .enumerate()
        .map(move |(k, &v)| (v, k < 64 && (value >> k) & 1 == 1))
}
