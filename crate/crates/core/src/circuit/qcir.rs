//! QCIR-G14 text: writer and reader.
//!
//! Variables are numbered `1..=V` in declaration order. Reachable gates
//! follow densely as `V+1, V+2, ...` in topological order. A variable or
//! constant output is wrapped in an `and` gate, since `output(...)` must
//! name a gate.

use std::collections::HashMap;
use std::io::{self, Write};

use super::{Circuit, GateKind, Lit, Node, Quant};

pub fn write_qcir(c: &Circuit, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "#QCIR-G14")?;
    for (quant, vars) in c.merged_prefix() {
        let list: Vec<String> = vars.iter().map(|v| v.number().to_string()).collect();
        writeln!(out, "{}({})", quant.keyword(), list.join(", "))?;
    }

    let base = c.var_count() as u32;
    let reachable = c.reachable();
    // Raw gates may hold constant children; they refer to a leading `and()`.
    let needs_true = reachable.iter().any(|&i| match c.node(i) {
        Node::Gate(_, children) => children.iter().any(|l| l.is_const()),
        _ => false,
    });
    let mut next = base + 1;
    let true_id = needs_true.then(|| {
        next += 1;
        next - 1
    });
    let mut ids: HashMap<usize, u32> = HashMap::new();
    let mut gates: Vec<usize> = Vec::new();
    for i in reachable {
        if let Node::Gate(..) = c.node(i) {
            ids.insert(i, next);
            next += 1;
            gates.push(i);
        }
    }
    let name = |l: Lit| -> String {
        let id = match c.node(l.node()) {
            Node::Var(v) => v.number(),
            Node::Gate(..) => ids[&l.node()],
            Node::True => true_id.expect("constant child without a true gate"),
        };
        if l.is_negated() {
            format!("-{id}")
        } else {
            id.to_string()
        }
    };

    let output = c.output();
    let wrapper = next;
    match c.node(output.node()) {
        Node::Gate(..) => writeln!(out, "output({})", name(output))?,
        _ => {
            let sign = if output.is_negated() { "-" } else { "" };
            writeln!(out, "output({sign}{wrapper})")?;
        }
    }

    if let Some(t) = true_id {
        writeln!(out, "{t} = and()")?;
    }
    for &i in &gates {
        let Node::Gate(kind, children) = c.node(i) else {
            unreachable!()
        };
        let args: Vec<String> = children.iter().map(|&l| name(l)).collect();
        let kw = match kind {
            GateKind::And => "and",
            GateKind::Or => "or",
        };
        writeln!(out, "{} = {kw}({})", ids[&i], args.join(", "))?;
    }
    match c.node(output.node()) {
        Node::Var(v) => writeln!(out, "{wrapper} = and({})", v.number())?,
        Node::True => writeln!(out, "{wrapper} = and()")?,
        Node::Gate(..) => {}
    }
    Ok(())
}

pub fn to_qcir_string(c: &Circuit) -> String {
    let mut buf = Vec::new();
    write_qcir(c, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("QCIR line {line}: {message}")]
pub struct QcirError {
    pub line: usize,
    pub message: String,
}

/// Parse QCIR-G14 into a circuit. Gates keep their exact shape; `xor` and
/// `ite` are expanded into `and`/`or` gates.
pub fn parse_qcir(text: &str) -> Result<Circuit, QcirError> {
    let mut c = Circuit::new();
    let mut names: HashMap<String, Lit> = HashMap::new();
    let mut pending_output: Option<(usize, String)> = None;
    let mut saw_header = false;

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let err = |message: String| QcirError {
            line: line_no,
            message,
        };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if !line.starts_with("#QCIR-G14") {
                return Err(err("missing #QCIR-G14 header".into()));
            }
            saw_header = true;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let (head, args) = split_call(line).ok_or_else(|| err(format!("cannot read '{line}'")))?;
        match head.as_str() {
            "exists" | "forall" | "free" => {
                if pending_output.is_some() {
                    return Err(err("quantifier after output".into()));
                }
                let quant = if head == "forall" {
                    Quant::Forall
                } else {
                    Quant::Exists
                };
                let mut vars = Vec::new();
                for a in args {
                    if names.contains_key(&a) {
                        return Err(err(format!("variable '{a}' declared twice")));
                    }
                    check_name(&a).map_err(err)?;
                    let v = c.add_var(a.clone());
                    names.insert(a, c.lit(v));
                    vars.push(v);
                }
                c.push_block(quant, head, vars);
            }
            "output" => {
                if args.len() != 1 {
                    return Err(err("output takes one literal".into()));
                }
                pending_output = Some((line_no, args[0].clone()));
            }
            _ => {
                let (id, kind) = head
                    .split_once('=')
                    .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                    .ok_or_else(|| err(format!("unknown statement '{head}'")))?;
                check_name(&id).map_err(err)?;
                if names.contains_key(&id) {
                    return Err(err(format!("'{id}' defined twice")));
                }
                let lits: Vec<Lit> = args
                    .iter()
                    .map(|a| lookup(&names, a).ok_or_else(|| err(format!("undefined '{a}'"))))
                    .collect::<Result<_, _>>()?;
                let lit = match kind.as_str() {
                    "and" => c.add_gate(GateKind::And, lits),
                    "or" => c.add_gate(GateKind::Or, lits),
                    "xor" if lits.len() == 2 => {
                        let a = c.add_gate(GateKind::And, vec![lits[0], !lits[1]]);
                        let b = c.add_gate(GateKind::And, vec![!lits[0], lits[1]]);
                        c.add_gate(GateKind::Or, vec![a, b])
                    }
                    "ite" if lits.len() == 3 => {
                        let a = c.add_gate(GateKind::And, vec![lits[0], lits[1]]);
                        let b = c.add_gate(GateKind::And, vec![!lits[0], lits[2]]);
                        c.add_gate(GateKind::Or, vec![a, b])
                    }
                    other => return Err(err(format!("unsupported gate '{other}'"))),
                };
                names.insert(id, lit);
            }
        }
    }
    if !saw_header {
        return Err(QcirError {
            line: 0,
            message: "empty input".into(),
        });
    }
    let (line, out) = pending_output.ok_or(QcirError {
        line: 0,
        message: "no output line".into(),
    })?;
    let lit = lookup(&names, &out).ok_or(QcirError {
        line,
        message: format!("undefined output '{out}'"),
    })?;
    c.set_output(lit);
    Ok(c)
}

fn check_name(s: &str) -> Result<(), String> {
    if !s.is_empty() && s.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_') {
        Ok(())
    } else {
        Err(format!("bad identifier '{s}'"))
    }
}

fn lookup(names: &HashMap<String, Lit>, a: &str) -> Option<Lit> {
    match a.strip_prefix('-') {
        Some(rest) => names.get(rest.trim()).map(|&l| !l),
        None => names.get(a).copied(),
    }
}

/// `head(a, b, c)` into the head and trimmed, non-empty arguments.
fn split_call(line: &str) -> Option<(String, Vec<String>)> {
    let open = line.find('(')?;
    let close = line.rfind(')')?;
    if close < open || !line[close + 1..].trim().is_empty() {
        return None;
    }
    let head = line[..open].trim().to_string();
    let args = line[open + 1..close]
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    Some((head, args))
}
