//! Tseitin lowering to QDIMACS.
//!
//! Each reachable gate gets a fresh variable, appended to the innermost
//! existential block (a new one is opened if the prefix ends universally),
//! together with the clauses of `g <-> op(children)`. A unit clause asserts
//! the output.

use std::io::{self, Write};

use super::{Circuit, GateKind, Lit, Node, Quant};

/// Clause form of a circuit, before printing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub prefix: Vec<(Quant, Vec<u32>)>,
    pub clauses: Vec<Vec<i64>>,
}

pub fn tseitin(c: &Circuit) -> Cnf {
    let mut prefix: Vec<(Quant, Vec<u32>)> = c
        .merged_prefix()
        .into_iter()
        .map(|(q, vars)| (q, vars.iter().map(|v| v.number()).collect()))
        .collect();
    let mut next = c.var_count() as u32 + 1;
    let mut fresh: Vec<u32> = Vec::new();
    let mut clauses: Vec<Vec<i64>> = Vec::new();

    let reachable = c.reachable();
    let mut id = vec![0u32; c.node_count()];
    let needs_true = reachable.iter().any(|&i| match c.node(i) {
        Node::Gate(_, children) => children.iter().any(|l| l.is_const()),
        _ => false,
    });
    if needs_true {
        id[0] = next;
        fresh.push(next);
        clauses.push(vec![i64::from(next)]);
        next += 1;
    }
    for &i in &reachable {
        match c.node(i) {
            Node::Var(v) => id[i] = v.number(),
            Node::Gate(..) => {
                id[i] = next;
                fresh.push(next);
                next += 1;
            }
            Node::True => {}
        }
    }
    let lit = |l: Lit| -> i64 {
        let v = i64::from(id[l.node()]);
        if l.is_negated() {
            -v
        } else {
            v
        }
    };

    for &i in &reachable {
        let Node::Gate(kind, children) = c.node(i) else {
            continue;
        };
        let g = i64::from(id[i]);
        let kids: Vec<i64> = children.iter().map(|&l| lit(l)).collect();
        // and: g -> each child, all children -> g. or is the dual.
        let sign = match kind {
            GateKind::And => 1,
            GateKind::Or => -1,
        };
        for &k in &kids {
            clauses.push(vec![-sign * g, sign * k]);
        }
        let mut big = vec![sign * g];
        big.extend(kids.iter().map(|&k| -sign * k));
        big.dedup();
        clauses.push(big);
    }

    let out = c.output();
    if out == Lit::FALSE {
        fresh.push(next);
        clauses.push(vec![i64::from(next)]);
        clauses.push(vec![-i64::from(next)]);
        next += 1;
    } else if out != Lit::TRUE {
        clauses.push(vec![lit(out)]);
    }

    if !fresh.is_empty() {
        match prefix.last_mut() {
            Some((Quant::Exists, vars)) => vars.extend(fresh),
            _ => prefix.push((Quant::Exists, fresh)),
        }
    }
    Cnf {
        num_vars: next - 1,
        prefix,
        clauses,
    }
}

pub fn write_qdimacs(c: &Circuit, out: &mut impl Write) -> io::Result<()> {
    let cnf = tseitin(c);
    writeln!(out, "p cnf {} {}", cnf.num_vars, cnf.clauses.len())?;
    for (q, vars) in &cnf.prefix {
        let tag = match q {
            Quant::Exists => 'e',
            Quant::Forall => 'a',
        };
        write!(out, "{tag}")?;
        for v in vars {
            write!(out, " {v}")?;
        }
        writeln!(out, " 0")?;
    }
    for clause in &cnf.clauses {
        for l in clause {
            write!(out, "{l} ")?;
        }
        writeln!(out, "0")?;
    }
    Ok(())
}

pub fn to_qdimacs_string(c: &Circuit) -> String {
    let mut buf = Vec::new();
    write_qdimacs(c, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
