//! Boolean circuits with a quantifier prefix.
//!
//! Nodes are constant true, input variables, and `and`/`or` gates over
//! signed references. Construction goes through [`Circuit::and`] and
//! [`Circuit::or`], which fold constants and share structurally equal gates,
//! or through [`Circuit::add_gate`], which keeps the gate exactly as given.

pub mod arith;
pub mod qbf;
pub mod qcir;
pub mod qdimacs;

pub use arith::{adder, compute, equality, less_than, subtractor, BitVec, Operand};

use std::fmt;
use std::ops::Not;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

/// Handle of a declared input variable. Serialized as `index + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// 1-based number used in QCIR and QDIMACS.
    pub fn number(self) -> u32 {
        self.0 + 1
    }
}

/// Signed reference to a node: `node << 1 | negated`. Node 0 is true.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub const TRUE: Lit = Lit(0);
    pub const FALSE: Lit = Lit(1);

    fn new(node: u32, negated: bool) -> Lit {
        Lit((node << 1) | u32::from(negated))
    }

    pub fn node(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn is_const(self) -> bool {
        self.node() == 0
    }

    pub fn constant(value: bool) -> Lit {
        if value {
            Lit::TRUE
        } else {
            Lit::FALSE
        }
    }

    /// The same node, positive.
    pub fn positive(self) -> Lit {
        Lit(self.0 & !1)
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quant {
    Exists,
    Forall,
}

impl Quant {
    pub fn keyword(self) -> &'static str {
        match self {
            Quant::Exists => "exists",
            Quant::Forall => "forall",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantBlock {
    pub quant: Quant,
    pub vars: Vec<VarId>,
    /// Diagnostic only.
    pub label: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    True,
    Var(VarId),
    Gate(GateKind, Box<[Lit]>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("constant {k} does not fit in {width} bits")]
    ConstantTooWide { k: u64, width: usize },
    #[error("expression {expr} belongs to the other axis")]
    CrossAxis { expr: String },
    #[error("assignment has {got} values, circuit has {expected} variables")]
    AssignmentSize { got: usize, expected: usize },
    #[error("variable {0} is quantified more than once")]
    DuplicateQuantifier(u32),
    #[error("variable {0} is not quantified")]
    Unquantified(u32),
}

/// A gate graph, its quantifier prefix and one output.
#[derive(Debug, Clone)]
pub struct Circuit {
    nodes: Vec<Node>,
    var_nodes: Vec<u32>,
    var_names: Vec<String>,
    prefix: Vec<QuantBlock>,
    output: Lit,
    shared: FxHashMap<(GateKind, Box<[Lit]>), u32>,
}

impl Default for Circuit {
    fn default() -> Self {
        Self::new()
    }
}

impl Circuit {
    pub fn new() -> Self {
        Circuit {
            nodes: vec![Node::True],
            var_nodes: Vec::new(),
            var_names: Vec::new(),
            prefix: Vec::new(),
            output: Lit::TRUE,
            shared: FxHashMap::default(),
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>) -> VarId {
        let id = VarId(self.var_nodes.len() as u32);
        self.var_nodes.push(self.nodes.len() as u32);
        self.nodes.push(Node::Var(id));
        self.var_names.push(name.into());
        id
    }

    pub fn add_vars(&mut self, prefix: &str, count: usize) -> Vec<VarId> {
        (0..count)
            .map(|k| self.add_var(format!("{prefix}[{k}]")))
            .collect()
    }

    pub fn lit(&self, v: VarId) -> Lit {
        Lit::new(self.var_nodes[v.index()], false)
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.var_names[v.index()]
    }

    pub fn var_count(&self) -> usize {
        self.var_nodes.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        (0..self.var_nodes.len() as u32).map(VarId)
    }

    /// Append a quantifier block. Empty blocks are kept here and dropped on
    /// serialization.
    pub fn push_block(&mut self, quant: Quant, label: impl Into<String>, vars: Vec<VarId>) {
        self.prefix.push(QuantBlock {
            quant,
            vars,
            label: label.into(),
        });
    }

    pub fn prefix(&self) -> &[QuantBlock] {
        &self.prefix
    }

    /// Non-empty blocks with adjacent equal quantifiers merged.
    pub fn merged_prefix(&self) -> Vec<(Quant, Vec<VarId>)> {
        let mut out: Vec<(Quant, Vec<VarId>)> = Vec::new();
        for b in self.prefix.iter().filter(|b| !b.vars.is_empty()) {
            match out.last_mut() {
                Some((q, vars)) if *q == b.quant => vars.extend(&b.vars),
                _ => out.push((b.quant, b.vars.clone())),
            }
        }
        out
    }

    /// Every variable must sit in exactly one block.
    pub fn check_prefix(&self) -> Result<(), CircuitError> {
        let mut seen = vec![false; self.var_count()];
        for v in self.prefix.iter().flat_map(|b| &b.vars) {
            if std::mem::replace(&mut seen[v.index()], true) {
                return Err(CircuitError::DuplicateQuantifier(v.number()));
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(CircuitError::Unquantified(i as u32 + 1)),
            None => Ok(()),
        }
    }

    pub fn set_output(&mut self, out: Lit) {
        self.output = out;
    }

    pub fn output(&self) -> Lit {
        self.output
    }

    pub fn node(&self, index: usize) -> &Node {
        &self.nodes[index]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Gate exactly as given: no folding, no sharing.
    pub fn add_gate(&mut self, kind: GateKind, children: Vec<Lit>) -> Lit {
        self.push_gate(kind, children.into_boxed_slice())
    }

    fn push_gate(&mut self, kind: GateKind, children: Box<[Lit]>) -> Lit {
        let index = self.nodes.len() as u32;
        self.nodes.push(Node::Gate(kind, children));
        Lit::new(index, false)
    }

    fn shared_gate(&mut self, kind: GateKind, children: Vec<Lit>) -> Lit {
        let key = (kind, children.into_boxed_slice());
        if let Some(&index) = self.shared.get(&key) {
            return Lit::new(index, false);
        }
        let lit = self.push_gate(kind, key.1.clone());
        self.shared.insert(key, lit.node() as u32);
        lit
    }

    /// Conjunction with constant folding, duplicate removal and sharing.
    pub fn and(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let mut v: Vec<Lit> = Vec::new();
        for l in lits {
            if l == Lit::FALSE {
                return Lit::FALSE;
            }
            if l != Lit::TRUE {
                v.push(l);
            }
        }
        v.sort_unstable();
        v.dedup();
        if v.windows(2).any(|w| w[0] == !w[1]) {
            return Lit::FALSE;
        }
        match v.len() {
            0 => Lit::TRUE,
            1 => v[0],
            _ => self.shared_gate(GateKind::And, v),
        }
    }

    /// Disjunction, dual to [`Circuit::and`].
    pub fn or(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let mut v: Vec<Lit> = Vec::new();
        for l in lits {
            if l == Lit::TRUE {
                return Lit::TRUE;
            }
            if l != Lit::FALSE {
                v.push(l);
            }
        }
        v.sort_unstable();
        v.dedup();
        if v.windows(2).any(|w| w[0] == !w[1]) {
            return Lit::TRUE;
        }
        match v.len() {
            0 => Lit::FALSE,
            1 => v[0],
            _ => self.shared_gate(GateKind::Or, v),
        }
    }

    pub fn implies(&mut self, a: Lit, b: Lit) -> Lit {
        self.or([!a, b])
    }

    pub fn iff(&mut self, a: Lit, b: Lit) -> Lit {
        let ab = self.or([!a, b]);
        let ba = self.or([a, !b]);
        self.and([ab, ba])
    }

    pub fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        !self.iff(a, b)
    }

    /// Nodes the output depends on, children before parents.
    pub fn reachable(&self) -> Vec<usize> {
        let mut mark = vec![false; self.nodes.len()];
        mark[self.output.node()] = true;
        for i in (0..self.nodes.len()).rev() {
            if mark[i] {
                if let Node::Gate(_, children) = &self.nodes[i] {
                    for c in children.iter() {
                        mark[c.node()] = true;
                    }
                }
            }
        }
        (0..self.nodes.len()).filter(|&i| mark[i]).collect()
    }

    /// Gates the output depends on.
    pub fn gate_count(&self) -> usize {
        self.reachable()
            .into_iter()
            .filter(|&i| matches!(self.nodes[i], Node::Gate(..)))
            .count()
    }

    /// Value of `lit` under a total assignment indexed by [`VarId::index`].
    pub fn evaluate_lit(&self, lit: Lit, assignment: &[bool]) -> Result<bool, CircuitError> {
        if assignment.len() != self.var_count() {
            return Err(CircuitError::AssignmentSize {
                got: assignment.len(),
                expected: self.var_count(),
            });
        }
        let mut value = vec![false; lit.node() + 1];
        for (i, node) in self.nodes.iter().enumerate().take(lit.node() + 1) {
            value[i] = match node {
                Node::True => true,
                Node::Var(v) => assignment[v.index()],
                Node::Gate(kind, children) => {
                    let mut it = children
                        .iter()
                        .map(|c| value[c.node()] != c.is_negated());
                    match kind {
                        GateKind::And => it.all(|b| b),
                        GateKind::Or => it.any(|b| b),
                    }
                }
            };
        }
        Ok(value[lit.node()] != lit.is_negated())
    }

    /// Value of the output under a total assignment.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, CircuitError> {
        self.evaluate_lit(self.output, assignment)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CircuitStats {
    pub vars: usize,
    pub gates: usize,
    pub blocks: usize,
}

impl Circuit {
    pub fn stats(&self) -> CircuitStats {
        CircuitStats {
            vars: self.var_count(),
            gates: self.gate_count(),
            blocks: self.merged_prefix().len(),
        }
    }
}

impl fmt::Display for CircuitStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} variables, {} gates, {} quantifier blocks",
            self.vars, self.gates, self.blocks
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_output() {
        let c = Circuit::new();
        assert!(c.evaluate(&[]).unwrap());
    }

    #[test]
    fn contradiction_is_false() {
        let mut c = Circuit::new();
        let x = c.add_var("x");
        let xl = c.lit(x);
        assert_eq!(c.and([xl, !xl]), Lit::FALSE);
        let g = c.add_gate(GateKind::And, vec![xl, !xl]);
        c.set_output(g);
        for v in [false, true] {
            assert!(!c.evaluate(&[v]).unwrap());
        }
    }

    #[test]
    fn folding_and_sharing() {
        let mut c = Circuit::new();
        let a = c.add_var("a");
        let b = c.add_var("b");
        let (a, b) = (c.lit(a), c.lit(b));
        assert_eq!(c.and([a, Lit::TRUE]), a);
        assert_eq!(c.or([a, Lit::TRUE]), Lit::TRUE);
        assert_eq!(c.and([]), Lit::TRUE);
        assert_eq!(c.or([]), Lit::FALSE);
        let g1 = c.and([a, b]);
        let g2 = c.and([b, a, b]);
        assert_eq!(g1, g2);
        assert_ne!(c.or([a, b]), g1);
    }

    #[test]
    fn gate_truth_tables() {
        let mut c = Circuit::new();
        let a = c.add_var("a");
        let b = c.add_var("b");
        let (la, lb) = (c.lit(a), c.lit(b));
        let ops = [
            (c.implies(la, lb), [true, true, false, true]),
            (c.iff(la, lb), [true, false, false, true]),
            (c.xor(la, lb), [false, true, true, false]),
        ];
        for (lit, table) in ops {
            for (k, expected) in table.iter().enumerate() {
                let asg = [k & 2 != 0, k & 1 != 0];
                assert_eq!(c.evaluate_lit(lit, &asg).unwrap(), *expected);
            }
        }
    }

    #[test]
    fn missing_assignment() {
        let mut c = Circuit::new();
        c.add_var("x");
        assert!(matches!(
            c.evaluate(&[]),
            Err(CircuitError::AssignmentSize { got: 0, expected: 1 })
        ));
    }

    #[test]
    fn prefix_merging_and_checks() {
        let mut c = Circuit::new();
        let v = c.add_vars("v", 4);
        c.push_block(Quant::Exists, "a", vec![v[0]]);
        c.push_block(Quant::Forall, "empty", vec![]);
        c.push_block(Quant::Exists, "b", vec![v[1]]);
        c.push_block(Quant::Forall, "c", vec![v[2], v[3]]);
        assert_eq!(
            c.merged_prefix(),
            vec![
                (Quant::Exists, vec![v[0], v[1]]),
                (Quant::Forall, vec![v[2], v[3]])
            ]
        );
        assert!(c.check_prefix().is_ok());
        c.push_block(Quant::Exists, "dup", vec![v[0]]);
        assert_eq!(c.check_prefix(), Err(CircuitError::DuplicateQuantifier(1)));
    }
}
