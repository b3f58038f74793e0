//! Truth value of a closed QBF circuit by expansion.
//!
//! The outer prefix is searched variable by variable. The innermost
//! universal block (up to 64 variables of it) is expanded as bit-parallel
//! lanes, and the existential block after it is solved per lane. Every node
//! of the search runs a three-valued evaluation where unassigned inputs are
//! unknown; a lane that is false regardless of the unknowns refutes the
//! node, and all lanes true proves it. Innermost existential variables are
//! probed both ways to find values forced in each lane, and outer variables
//! that no undecided gate depends on are skipped.

use super::{Circuit, CircuitError, GateKind, Node, Quant, VarId};

const MAX_LANE_VARS: usize = 6;

#[derive(Debug, Clone, Copy)]
enum Kind {
    Const,
    Input,
    And,
    Or,
}

/// Three-valued lane vector: bits known true, bits known false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Tri {
    t: u64,
    f: u64,
}

#[derive(Debug, Clone)]
pub struct Expansion {
    kinds: Vec<Kind>,
    start: Vec<u32>,
    children: Vec<u32>,
    output: u32,
    /// Compact node of each circuit variable, if reachable.
    slot: Vec<Option<u32>>,
    inputs: Vec<(u32, Role)>,
    outer: Vec<(VarId, Quant)>,
    outer_value: Vec<Option<bool>>,
    lane_vars: Vec<VarId>,
    inner: Vec<VarId>,
    full: u64,
    values: Vec<Tri>,
    nodes: u64,
}

#[derive(Debug, Clone, Copy)]
enum Role {
    Outer(usize),
    Lane(usize),
    Inner(usize),
}

/// Per-lane knowledge about the innermost existential variables.
type InnerState = Vec<Tri>;

impl Expansion {
    pub fn new(c: &Circuit) -> Result<Self, CircuitError> {
        c.check_prefix()?;
        let reachable = c.reachable();
        let mut compact = vec![u32::MAX; c.node_count()];
        let mut kinds = Vec::with_capacity(reachable.len());
        let mut start = Vec::with_capacity(reachable.len() + 1);
        let mut children = Vec::new();
        let mut slot = vec![None; c.var_count()];
        for &i in &reachable {
            let k = kinds.len() as u32;
            compact[i] = k;
            start.push(children.len() as u32);
            match c.node(i) {
                Node::True => kinds.push(Kind::Const),
                Node::Var(v) => {
                    slot[v.index()] = Some(k);
                    kinds.push(Kind::Input);
                }
                Node::Gate(kind, cs) => {
                    kinds.push(match kind {
                        GateKind::And => Kind::And,
                        GateKind::Or => Kind::Or,
                    });
                    for l in cs.iter() {
                        children.push((compact[l.node()] << 1) | u32::from(l.is_negated()));
                    }
                }
            }
        }
        start.push(children.len() as u32);
        let out = c.output();
        let output = (compact[out.node()] << 1) | u32::from(out.is_negated());

        let mut blocks = c.merged_prefix();
        let inner = match blocks.last() {
            Some((Quant::Exists, _)) => blocks.pop().map(|b| b.1).unwrap_or_default(),
            _ => Vec::new(),
        };
        let mut lane_vars = match blocks.last() {
            Some((Quant::Forall, _)) => blocks.pop().map(|b| b.1).unwrap_or_default(),
            _ => Vec::new(),
        };
        let mut outer: Vec<(VarId, Quant)> = blocks
            .iter()
            .flat_map(|(q, vs)| vs.iter().map(move |&v| (v, *q)))
            .collect();
        if lane_vars.len() > MAX_LANE_VARS {
            let rest = lane_vars.split_off(lane_vars.len() - MAX_LANE_VARS);
            outer.extend(lane_vars.into_iter().map(|v| (v, Quant::Forall)));
            lane_vars = rest;
        }
        let lanes = 1u32 << lane_vars.len();
        let full = if lanes == 64 {
            u64::MAX
        } else {
            (1u64 << lanes) - 1
        };
        let mut role = vec![None; c.var_count()];
        for (p, &(v, _)) in outer.iter().enumerate() {
            role[v.index()] = Some(Role::Outer(p));
        }
        for (k, &v) in lane_vars.iter().enumerate() {
            role[v.index()] = Some(Role::Lane(k));
        }
        for (u, &v) in inner.iter().enumerate() {
            role[v.index()] = Some(Role::Inner(u));
        }
        let inputs = slot
            .iter()
            .zip(&role)
            .filter_map(|(s, r)| Some((((*s)?), (*r)?)))
            .collect();
        let n = kinds.len();
        let outer_len = outer.len();
        Ok(Expansion {
            kinds,
            start,
            children,
            output,
            slot,
            inputs,
            outer,
            outer_value: vec![None; outer_len],
            lane_vars,
            inner,
            full,
            values: vec![Tri::default(); n],
            nodes: 0,
        })
    }

    /// Universal variables expanded as lanes; lane `l` sets variable `k` to
    /// bit `k` of `l`.
    pub fn lane_vars(&self) -> &[VarId] {
        &self.lane_vars
    }

    pub fn inner_vars(&self) -> &[VarId] {
        &self.inner
    }

    pub fn lane_count(&self) -> usize {
        1 << self.lane_vars.len()
    }

    pub fn nodes_searched(&self) -> u64 {
        self.nodes
    }

    /// Fix an outer variable before solving.
    pub fn fix(&mut self, v: VarId, value: bool) -> bool {
        match self.outer.iter().position(|&(w, _)| w == v) {
            Some(p) => {
                self.outer_value[p] = Some(value);
                true
            }
            None => false,
        }
    }

    /// Truth value under the fixed outer values.
    pub fn solve(&mut self) -> bool {
        let inner = vec![Tri::default(); self.inner.len()];
        self.search(0, inner)
    }

    /// Values of the innermost existential variables forced in each lane by
    /// the fixed outer values, as `(var, lanes true, lanes false)`. `None`
    /// if some lane is already refuted.
    pub fn forced_inner(&mut self) -> Option<Vec<(VarId, u64, u64)>> {
        let mut inner = vec![Tri::default(); self.inner.len()];
        if self.analyze(&mut inner) == Some(false) {
            return None;
        }
        Some(
            self.inner
                .iter()
                .zip(&inner)
                .map(|(&v, t)| (v, t.t, t.f))
                .collect(),
        )
    }

    fn search(&mut self, pos: usize, mut inner: InnerState) -> bool {
        self.nodes += 1;
        if let Some(v) = self.analyze(&mut inner) {
            return v;
        }
        let relevant = self.relevant_inputs();
        let mut p = pos;
        while p < self.outer.len() {
            let (v, _) = self.outer[p];
            let needed = self.outer_value[p].is_none()
                && self.slot[v.index()].is_some_and(|s| relevant[s as usize]);
            if needed {
                break;
            }
            p += 1;
        }
        if p == self.outer.len() {
            let saved = self.outer_value.clone();
            for val in self.outer_value.iter_mut() {
                val.get_or_insert(false);
            }
            let sat = self.leaf(&inner, self.full);
            self.outer_value = saved;
            return sat == self.full;
        }
        let quant = self.outer[p].1;
        let mut result = quant == Quant::Forall;
        for value in [false, true] {
            self.outer_value[p] = Some(value);
            let r = self.search(p + 1, inner.clone());
            if r != result {
                result = r;
                break;
            }
        }
        self.outer_value[p] = None;
        result
    }

    /// Lanes (within `lanes`) that have a satisfying inner assignment.
    fn leaf(&mut self, inner: &InnerState, lanes: u64) -> u64 {
        let out = self.eval(inner);
        let sat = out.t & lanes;
        let rest = lanes & !(out.t | out.f);
        if rest == 0 {
            return sat;
        }
        let Some(u) = (0..inner.len()).find(|&u| rest & !(inner[u].t | inner[u].f) != 0) else {
            return sat;
        };
        let open = rest & !(inner[u].t | inner[u].f);
        let mut with0 = inner.clone();
        with0[u].f |= open;
        let r0 = self.leaf(&with0, rest);
        let rem = rest & !r0;
        let r1 = if rem != 0 {
            let mut with1 = inner.clone();
            with1[u].t |= open & rem;
            self.leaf(&with1, rem)
        } else {
            0
        };
        sat | r0 | r1
    }

    /// Decide the node if possible, tightening `inner` by probing.
    fn analyze(&mut self, inner: &mut InnerState) -> Option<bool> {
        let out = self.eval(inner);
        if out.f != 0 {
            return Some(false);
        }
        if out.t == self.full {
            return Some(true);
        }
        let mut active = self.full & !out.t;
        let mut probed = false;
        for u in 0..inner.len() {
            let open = active & !(inner[u].t | inner[u].f);
            if open == 0 {
                continue;
            }
            probed = true;
            let saved = inner[u];
            inner[u].t |= open;
            let one = self.eval(inner);
            inner[u] = saved;
            inner[u].f |= open;
            let zero = self.eval(inner);
            inner[u] = saved;
            let no_one = one.f & open;
            let no_zero = zero.f & open;
            if no_one & no_zero != 0 {
                return Some(false);
            }
            if no_one | no_zero != 0 {
                inner[u].f |= no_one;
                inner[u].t |= no_zero;
                active &= !(one.t & zero.t);
            }
        }
        // Leave the base values in place for the relevance pass.
        if probed {
            let out = self.eval(inner);
            if out.f != 0 {
                return Some(false);
            }
            if out.t == self.full {
                return Some(true);
            }
        }
        None
    }

    fn input_value(&self, role: Role, inner: &InnerState) -> Tri {
        match role {
            Role::Outer(p) => match self.outer_value[p] {
                Some(true) => Tri {
                    t: self.full,
                    f: 0,
                },
                Some(false) => Tri {
                    t: 0,
                    f: self.full,
                },
                None => Tri::default(),
            },
            Role::Lane(k) => {
                let pattern = lane_pattern(k) & self.full;
                Tri {
                    t: pattern,
                    f: self.full & !pattern,
                }
            }
            Role::Inner(u) => inner[u],
        }
    }

    fn eval(&mut self, inner: &InnerState) -> Tri {
        self.set_inputs(inner);
        let full = self.full;
        for i in 0..self.kinds.len() {
            let (a, b) = (self.start[i] as usize, self.start[i + 1] as usize);
            let v = match self.kinds[i] {
                Kind::Const => Tri { t: full, f: 0 },
                Kind::Input => continue,
                Kind::And => {
                    let mut t = full;
                    let mut f = 0;
                    for &c in &self.children[a..b] {
                        let x = lit_value(&self.values, c);
                        t &= x.t;
                        f |= x.f;
                    }
                    Tri { t, f }
                }
                Kind::Or => {
                    let mut t = 0;
                    let mut f = full;
                    for &c in &self.children[a..b] {
                        let x = lit_value(&self.values, c);
                        t |= x.t;
                        f &= x.f;
                    }
                    Tri { t, f }
                }
            };
            self.values[i] = v;
        }
        lit_value(&self.values, self.output)
    }

    fn set_inputs(&mut self, inner: &InnerState) {
        for k in 0..self.inputs.len() {
            let (slot, role) = self.inputs[k];
            self.values[slot as usize] = self.input_value(role, inner);
        }
    }

    /// Nodes reachable from the output through gates that are undecided in
    /// some lane, using the values of the last evaluation.
    fn relevant_inputs(&self) -> Vec<bool> {
        let n = self.kinds.len();
        let mut mark = vec![false; n];
        let out = (self.output >> 1) as usize;
        let settled = |i: usize| (self.values[i].t | self.values[i].f) == self.full;
        if !settled(out) {
            mark[out] = true;
        }
        for i in (0..n).rev() {
            if !mark[i] {
                continue;
            }
            let (a, b) = (self.start[i] as usize, self.start[i + 1] as usize);
            for &c in &self.children[a..b] {
                let j = (c >> 1) as usize;
                if !settled(j) {
                    mark[j] = true;
                }
            }
        }
        mark
    }
}

fn lane_pattern(k: usize) -> u64 {
    let mut p = 0u64;
    for lane in 0..64u32 {
        if (lane >> k) & 1 == 1 {
            p |= 1 << lane;
        }
    }
    p
}

#[inline]
fn lit_value(values: &[Tri], lit: u32) -> Tri {
    let v = values[(lit >> 1) as usize];
    if lit & 1 == 1 {
        Tri { t: v.f, f: v.t }
    } else {
        v
    }
}

/// Truth value of a closed circuit by expansion.
pub fn solve_qbf(c: &Circuit) -> Result<bool, CircuitError> {
    Ok(Expansion::new(c)?.solve())
}

/// Exhaustive two-valued expansion over the whole prefix. Exponential in
/// the number of variables; meant as a reference for small circuits.
pub fn naive_qbf(c: &Circuit) -> Result<bool, CircuitError> {
    c.check_prefix()?;
    let order: Vec<(VarId, Quant)> = c
        .merged_prefix()
        .into_iter()
        .flat_map(|(q, vs)| vs.into_iter().map(move |v| (v, q)))
        .collect();
    let mut asg = vec![false; c.var_count()];
    fn go(c: &Circuit, order: &[(VarId, Quant)], asg: &mut [bool]) -> bool {
        let Some((&(v, q), rest)) = order.split_first() else {
            return c.evaluate(asg).expect("sized assignment");
        };
        let mut results = [false; 2];
        for (k, value) in [false, true].into_iter().enumerate() {
            asg[v.index()] = value;
            results[k] = go(c, rest, asg);
        }
        match q {
            Quant::Exists => results[0] || results[1],
            Quant::Forall => results[0] && results[1],
        }
    }
    Ok(go(c, &order, &mut asg))
}
