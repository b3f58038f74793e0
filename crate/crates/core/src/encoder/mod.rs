//! Lifted QBF encoding of "Black wins within `d` plies".
//!
//! Moves are chosen by binary action and position variables; the board is
//! never enumerated. A universally quantified symbolic position `(S_x,S_y)`
//! splits the matrix into one branch per cell, and the state bits `o^i,w^i`
//! describe that one cell at every time step (`o` open, `w` white).

mod layout;

pub use layout::{bit_values, coord_width, index_width, write_bits, EncodingMeta, StepVars, VarLayout};

use crate::bddl::{
    Axis, Bounds, Condition, GameDomain, GameInstance, Predicate, Side, SubCondition,
};
use crate::circuit::{compute, equality, less_than, BitVec, Circuit, CircuitError, Lit, Operand};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("{side} action '{action}' has a negated effect, which has no functional reading")]
    NegatedEffect { side: Side, action: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// The finished formula with its variable map.
#[derive(Debug, Clone)]
pub struct EncodedInstance {
    pub circuit: Circuit,
    pub layout: VarLayout,
    pub meta: EncodingMeta,
}

pub fn encode(dom: &GameDomain, inst: &GameInstance) -> Result<EncodedInstance, EncodeError> {
    let mut enc = Encoder::new(dom, inst)?;
    let out = enc.build_matrix()?;
    Ok(enc.finish(out))
}

/// Builds the sub-circuits of the encoding over one shared [`Circuit`].
///
/// Time steps are 1-based: step `i` is the `i`-th ply and state `i` is the
/// board before it, so state `d+1` is the board after the last ply.
#[derive(Debug, Clone)]
pub struct Encoder<'a> {
    dom: &'a GameDomain,
    inst: &'a GameInstance,
    c: Circuit,
    layout: VarLayout,
    meta: EncodingMeta,
}

impl<'a> Encoder<'a> {
    pub fn new(dom: &'a GameDomain, inst: &'a GameInstance) -> Result<Self, EncodeError> {
        if inst.depth == 0 {
            return Err(EncodeError::ZeroDepth);
        }
        for side in [Side::Black, Side::White] {
            if let Some(a) = dom.actions(side).iter().find(|a| a.eff.iter().any(|c| c.negated)) {
                return Err(EncodeError::NegatedEffect {
                    side,
                    action: a.name.clone(),
                });
            }
        }
        let meta = EncodingMeta::of(dom, inst);
        let mut c = Circuit::new();
        let goals = (inst.black_goals.len(), inst.white_goals.len());
        let layout = VarLayout::allocate(&mut c, &meta, goals);
        Ok(Encoder {
            dom,
            inst,
            c,
            layout,
            meta,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.c
    }

    pub fn circuit_mut(&mut self) -> &mut Circuit {
        &mut self.c
    }

    pub fn layout(&self) -> &VarLayout {
        &self.layout
    }

    pub fn finish(mut self, out: Lit) -> EncodedInstance {
        self.c.set_output(out);
        EncodedInstance {
            circuit: self.c,
            layout: self.layout,
            meta: self.meta,
        }
    }

    fn bits(&self, vars: &[crate::circuit::VarId]) -> BitVec {
        BitVec::of_vars(&self.c, vars)
    }

    fn o(&self, i: u32) -> Lit {
        self.c.lit(self.layout.open[i as usize - 1])
    }

    fn w(&self, i: u32) -> Lit {
        self.c.lit(self.layout.white[i as usize - 1])
    }

    fn last(&self) -> u32 {
        self.inst.depth + 1
    }

    /// True in the symbolic branch naming the cell `c` refers to from the
    /// anchor `(vx, vy)`.
    pub fn build_symbimp(&mut self, vx: &BitVec, vy: &BitVec, c: &SubCondition) -> Result<Lit, CircuitError> {
        let (m, n) = (self.inst.width, self.inst.height);
        let px = compute(&mut self.c, vx, Axis::X, &c.x, m)?;
        let py = compute(&mut self.c, vy, Axis::Y, &c.y, n)?;
        let sx = self.bits(&self.layout.s_x.clone());
        let sy = self.bits(&self.layout.s_y.clone());
        let ex = equality(&mut self.c, &px.into(), &sx.into());
        let ey = equality(&mut self.c, &py.into(), &sy.into());
        Ok(self.c.and([ex, ey]))
    }

    /// The predicate of `c` on state `i` of the symbolic cell.
    pub fn build_subcon(&mut self, c: &SubCondition, i: u32) -> Lit {
        let (o, w) = (self.o(i), self.w(i));
        let lit = match c.predicate {
            Predicate::Black => self.c.and([!o, !w]),
            Predicate::White => self.c.and([!o, w]),
            Predicate::Open => o,
        };
        if c.negated {
            !lit
        } else {
            lit
        }
    }

    /// `(vx, vy)` lies in `b`; false for an empty interval.
    pub fn build_bound(&mut self, vx: &BitVec, vy: &BitVec, b: &Bounds) -> Lit {
        if b.is_empty() {
            return Lit::FALSE;
        }
        let k = |v: i64| v.max(0) as u64;
        let lx = less_than(&mut self.c, vx, k(b.lx));
        let ux = less_than(&mut self.c, vx, k(b.ux + 1));
        let ly = less_than(&mut self.c, vy, k(b.ly));
        let uy = less_than(&mut self.c, vy, k(b.uy + 1));
        self.c.and([!lx, ux, !ly, uy])
    }

    fn bounds_of<'s>(&self, subs: impl IntoIterator<Item = &'s SubCondition>) -> Bounds {
        Bounds::of_subconditions(subs, self.inst.width, self.inst.height)
    }

    fn symbolic_at(&mut self, x: u32, y: u32) -> Lit {
        let sx = self.bits(&self.layout.s_x.clone());
        let sy = self.bits(&self.layout.s_y.clone());
        let ex = equality(&mut self.c, &sx.into(), &Operand::Const(u64::from(x)));
        let ey = equality(&mut self.c, &sy.into(), &Operand::Const(u64::from(y)));
        self.c.and([ex, ey])
    }

    pub fn build_initial(&mut self) -> Lit {
        let init = self.inst.init.clone();
        let matches = |e: &mut Self, side: Side| -> Vec<Lit> {
            init.iter()
                .filter(|p| p.side == side)
                .map(|p| e.symbolic_at(p.x, p.y))
                .collect()
        };
        let black = matches(self, Side::Black);
        let white = matches(self, Side::White);
        let (o, w) = (self.o(1), self.w(1));
        let any_black = self.c.or(black);
        let any_white = self.c.or(white);
        let is_black = self.c.and([!o, !w]);
        let is_white = self.c.and([!o, w]);
        let any = self.c.or([any_black, any_white]);
        let a = self.c.implies(any_black, is_black);
        let b = self.c.implies(any_white, is_white);
        let rest = self.c.implies(!any, o);
        self.c.and([a, b, rest])
    }

    /// Both state bits carry over from step `i` to step `j`.
    fn copy(&mut self, i: u32, j: u32) -> Lit {
        let (oi, oj, wi, wj) = (self.o(i), self.o(j), self.w(i), self.w(j));
        let a = self.c.iff(oi, oj);
        let b = self.c.iff(wi, wj);
        self.c.and([a, b])
    }

    /// Effects of `eff` at step `i+1` plus the frame for unnamed cells.
    fn transition(&mut self, vx: &BitVec, vy: &BitVec, eff: &Condition, i: u32) -> Result<Lit, CircuitError> {
        let mut parts = Vec::new();
        let mut hits = Vec::new();
        for c in eff.iter() {
            let hit = self.build_symbimp(vx, vy, c)?;
            let holds = self.build_subcon(c, i + 1);
            parts.push(self.c.implies(hit, holds));
            hits.push(hit);
        }
        let touched = self.c.or(hits);
        let frame = self.copy(i, i + 1);
        parts.push(self.c.implies(!touched, frame));
        Ok(self.c.and(parts))
    }

    fn action_index(&mut self, vars: &[crate::circuit::VarId], j: usize) -> Lit {
        let a = self.bits(vars);
        equality(&mut self.c, &a.into(), &Operand::Const(j as u64))
    }

    pub fn build_black_move(&mut self, i: u32) -> Result<Lit, CircuitError> {
        let step = self.layout.step(i).clone();
        let (vx, vy) = (self.bits(&step.x), self.bits(&step.y));
        let a = self.bits(&step.action);
        let actions = &self.dom.black_actions;
        let mut parts = vec![less_than(&mut self.c, &a, actions.len() as u64)];
        for (j, act) in actions.iter().enumerate() {
            let chosen = self.action_index(&step.action, j);
            let b = self.bounds_of(act.all_subconditions());
            let body = if b.is_empty() {
                Lit::FALSE
            } else {
                let mut body = vec![self.build_bound(&vx, &vy, &b)];
                for c in act.pre.iter() {
                    let hit = self.build_symbimp(&vx, &vy, c)?;
                    let holds = self.build_subcon(c, i);
                    body.push(self.c.implies(hit, holds));
                }
                body.push(self.transition(&vx, &vy, &act.eff, i)?);
                self.c.and(body)
            };
            parts.push(self.c.implies(chosen, body));
        }
        Ok(self.c.and(parts))
    }

    /// Some pair of effects of `eff` writes different values to one cell.
    fn effect_clash(&mut self, vx: &BitVec, vy: &BitVec, eff: &Condition) -> Result<Lit, CircuitError> {
        let (m, n) = (self.inst.width, self.inst.height);
        let subs: Vec<&SubCondition> = eff.iter().collect();
        let mut clashes = Vec::new();
        for (k, a) in subs.iter().enumerate() {
            for b in &subs[k + 1..] {
                if a.predicate == b.predicate {
                    continue;
                }
                let ax = compute(&mut self.c, vx, Axis::X, &a.x, m)?;
                let bx = compute(&mut self.c, vx, Axis::X, &b.x, m)?;
                let ay = compute(&mut self.c, vy, Axis::Y, &a.y, n)?;
                let by = compute(&mut self.c, vy, Axis::Y, &b.y, n)?;
                let ex = equality(&mut self.c, &ax.into(), &bx.into());
                let ey = equality(&mut self.c, &ay.into(), &by.into());
                clashes.push(self.c.and([ex, ey]));
            }
        }
        Ok(self.c.or(clashes))
    }

    /// `L^i ∧ ⋀P^i`: White's move at step `i` is legal.
    pub fn white_legal(&mut self, i: u32) -> Lit {
        let step = self.layout.step(i);
        let mut lits = vec![self.c.lit(step.legal.expect("white step"))];
        lits.extend(step.pre_flags.iter().map(|&p| self.c.lit(p)));
        self.c.and(lits)
    }

    pub fn build_white_move(&mut self, i: u32) -> Result<Lit, CircuitError> {
        let step = self.layout.step(i).clone();
        let (vx, vy) = (self.bits(&step.x), self.bits(&step.y));
        let a = self.bits(&step.action);
        let actions = &self.dom.white_actions;
        let in_range = less_than(&mut self.c, &a, actions.len() as u64);
        let flags: Vec<Lit> = step.pre_flags.iter().map(|&p| self.c.lit(p)).collect();
        let mut playable = Vec::new();
        let mut flag_parts = Vec::new();
        let mut effects = Vec::new();
        for (j, act) in actions.iter().enumerate() {
            let chosen = self.action_index(&step.action, j);
            let b = self.bounds_of(act.all_subconditions());
            // Out-of-bounds actions never reach their offsets, which may not
            // even fit the coordinate width.
            if b.is_empty() {
                continue;
            }
            let bound = self.build_bound(&vx, &vy, &b);
            let clash = self.effect_clash(&vx, &vy, &act.eff)?;
            playable.push(self.c.and([chosen, bound, !clash]));
            for (k, &flag) in flags.iter().enumerate() {
                let part = match act.pre.subs.get(k) {
                    Some(c) => {
                        let hit = self.build_symbimp(&vx, &vy, c)?;
                        let guard = self.c.and([chosen, hit]);
                        let holds = self.build_subcon(c, i);
                        let same = self.c.iff(holds, flag);
                        self.c.implies(guard, same)
                    }
                    None => self.c.implies(chosen, flag),
                };
                flag_parts.push(part);
            }
            let t = self.transition(&vx, &vy, &act.eff, i)?;
            effects.push(self.c.implies(chosen, t));
        }
        let any = self.c.or(playable);
        let legal_def = self.c.and([in_range, any]);
        let l = self.c.lit(step.legal.expect("white step"));
        let mut parts = vec![self.c.iff(l, legal_def)];
        parts.extend(flag_parts);
        let legal = self.white_legal(i);
        let eff = self.c.and(effects);
        parts.push(self.c.implies(legal, eff));
        Ok(self.c.and(parts))
    }

    pub fn build_black_goal(&mut self, i: u32) -> Result<Lit, CircuitError> {
        let goals = &self.inst.black_goals;
        if goals.is_empty() {
            return Ok(Lit::FALSE);
        }
        let l = self.layout.clone();
        let (vx, vy, bc) = (self.bits(&l.b_x), self.bits(&l.b_y), self.bits(&l.b_c));
        let last = self.last();
        let mut parts = vec![less_than(&mut self.c, &bc, goals.len() as u64)];
        if i != last {
            parts.push(self.copy(i, last));
        }
        for (j, g) in goals.iter().enumerate() {
            let chosen = self.action_index(&l.b_c, j);
            let b = self.bounds_of(g.iter());
            let body = if b.is_empty() {
                Lit::FALSE
            } else {
                let mut body = vec![self.build_bound(&vx, &vy, &b)];
                for c in g.iter() {
                    let hit = self.build_symbimp(&vx, &vy, c)?;
                    let holds = self.build_subcon(c, last);
                    body.push(self.c.implies(hit, holds));
                }
                self.c.and(body)
            };
            parts.push(self.c.implies(chosen, body));
        }
        Ok(self.c.and(parts))
    }

    /// True when the state at step `i` does not satisfy any White goal.
    pub fn build_white_goal(&mut self, i: u32) -> Result<Lit, CircuitError> {
        let goals = &self.inst.white_goals;
        if goals.is_empty() {
            return Ok(Lit::TRUE);
        }
        let l = self.layout.clone();
        let (vx, vy, ce) = (self.bits(&l.w_x), self.bits(&l.w_y), self.bits(&l.w_ce));
        let last = self.last();
        let mut parts = Vec::new();
        if i != last {
            parts.push(self.copy(i, last));
        }
        for (j, g) in goals.iter().enumerate() {
            let b = self.bounds_of(g.iter());
            if b.is_empty() {
                continue;
            }
            let chosen = self.action_index(&l.w_c, j);
            let bound = self.build_bound(&vx, &vy, &b);
            let guard = self.c.and([chosen, bound]);
            let mut body = vec![less_than(&mut self.c, &ce, g.len() as u64)];
            for (k, c) in g.iter().enumerate() {
                let hit = self.build_symbimp(&vx, &vy, c)?;
                let picked = self.action_index(&l.w_ce, k);
                let at = self.c.and([hit, picked]);
                let holds = self.build_subcon(c, last);
                body.push(self.c.implies(at, !holds));
            }
            let body = self.c.and(body);
            parts.push(self.c.implies(guard, body));
        }
        Ok(self.c.and(parts))
    }

    /// The formula from step `i` on, Black to move when `i` is odd.
    pub fn build_turn(&mut self, i: u32) -> Result<Lit, CircuitError> {
        // Built from the last step backwards so the recursion stays shallow.
        let d = self.inst.depth;
        let mut next = Lit::TRUE;
        for k in (i..=d).rev() {
            next = self.turn_at(k, next)?;
        }
        Ok(next)
    }

    fn turn_at(&mut self, i: u32, next: Lit) -> Result<Lit, CircuitError> {
        let d = self.inst.depth;
        let step = self.layout.step(i).clone();
        match step.side {
            Side::Black => {
                let mv = self.build_black_move(i)?;
                let goal = self.build_black_goal(i + 1)?;
                match step.gamestop {
                    None => Ok(self.c.and([mv, goal])),
                    Some(gs) => {
                        let gs = self.c.lit(gs);
                        let stop = self.c.implies(gs, goal);
                        let go = self.c.implies(!gs, next);
                        Ok(self.c.and([mv, stop, go]))
                    }
                }
            }
            Side::White => {
                let mv = self.build_white_move(i)?;
                let legal = self.white_legal(i);
                if i == d {
                    return Ok(self.c.and([mv, !legal]));
                }
                let gs = self.c.lit(step.gamestop.expect("inner step"));
                let goal = self.build_white_goal(i + 1)?;
                let stop = self.c.implies(gs, goal);
                let go = self.c.implies(!gs, next);
                let then = self.c.and([stop, go]);
                let guarded = self.c.implies(legal, then);
                Ok(self.c.and([mv, guarded]))
            }
        }
    }

    pub fn build_matrix(&mut self) -> Result<Lit, CircuitError> {
        let init = self.build_initial();
        let play = self.build_turn(1)?;
        Ok(self.c.and([init, play]))
    }
}
