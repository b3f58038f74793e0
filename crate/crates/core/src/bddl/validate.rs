use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Bounds, Condition, CoordExpr, GameDomain, GameInstance, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Note,
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn new(severity: Severity, message: impl Into<String>) -> Self {
        Diagnostic {
            severity,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Note => "note",
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

/// Static checks of a domain against a concrete instance.
pub fn validate_instance(dom: &GameDomain, inst: &GameInstance) -> Vec<Diagnostic> {
    let (m, n) = (inst.width, inst.height);
    let mut out = Vec::new();

    for side in [Side::Black, Side::White] {
        for action in dom.actions(side) {
            let bounds = Bounds::of_subconditions(action.all_subconditions(), m, n);
            if bounds.is_empty() {
                out.push(Diagnostic::new(
                    Severity::Warning,
                    format!(
                        "empty action bounds: {side} action '{}' can never be played on a {m}x{n} board",
                        action.name
                    ),
                ));
            }
            if action.eff.iter().any(|c| c.negated) {
                out.push(Diagnostic::new(
                    Severity::Warning,
                    format!(
                        "{side} action '{}' has a negated effect; the game oracle rejects such models",
                        action.name
                    ),
                ));
            }
            if has_conflicting_effects(&action.eff) {
                out.push(Diagnostic::new(
                    Severity::Warning,
                    format!(
                        "{side} action '{}' assigns different predicates to the same cell",
                        action.name
                    ),
                ));
            }
        }
    }

    for side in [Side::Black, Side::White] {
        for (k, goal) in inst.goals(side).iter().enumerate() {
            if Bounds::of_condition(goal, m, n).is_empty() {
                out.push(Diagnostic::new(
                    Severity::Warning,
                    format!("{side} goal #{} has empty bounds and can never hold", k + 1),
                ));
            }
            for sub in goal.iter() {
                let off_x = absolute_off_board(&sub.x, m);
                let off_y = absolute_off_board(&sub.y, n);
                if off_x || off_y {
                    out.push(Diagnostic::new(
                        Severity::Error,
                        format!(
                            "{side} goal #{} refers to {sub}, which is outside the {m}x{n} board",
                            k + 1
                        ),
                    ));
                }
            }
        }
    }

    if inst.depth.is_multiple_of(2) {
        out.push(Diagnostic::new(
            Severity::Note,
            format!(
                "depth {} is even: the last ply is White's, so Black can only win there by leaving White without a legal move",
                inst.depth
            ),
        ));
    }
    out
}

fn absolute_off_board(e: &CoordExpr, size: u32) -> bool {
    match e.base {
        super::CoordBase::Const(c) => c > size,
        _ => false,
    }
}

/// Two positive effect literals naming the same relative cell with different
/// predicates. Negated effects are reported separately.
fn has_conflicting_effects(eff: &Condition) -> bool {
    let mut seen: HashMap<(CoordExpr, CoordExpr), super::Predicate> = HashMap::new();
    for c in eff.iter().filter(|c| !c.negated) {
        if let Some(prev) = seen.insert((c.x, c.y), c.predicate) {
            if prev != c.predicate {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bddl::{parse_domain, parse_problem};
    use crate::models;

    #[test]
    fn tic_is_clean() {
        let dom = parse_domain(models::POSITIONAL_DOMAIN).unwrap();
        let inst = parse_problem(models::TIC_5X4_PROBLEM).unwrap();
        assert!(validate_instance(&dom, &inst).is_empty());
    }

    #[test]
    fn empty_action_bounds() {
        let dom = parse_domain(
            "#blackactions\n:action far\n:parameters (?x,?y)\n:precondition (open(?x-9,?y))\n:effect (black(?x,?y))\n#whiteactions\n:action occupy\n:parameters (?x,?y)\n:precondition (open(?x,?y))\n:effect (white(?x,?y))\n",
        )
        .unwrap();
        let inst = parse_problem(models::TIC_5X4_PROBLEM).unwrap();
        let diags = validate_instance(&dom, &inst);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.starts_with("empty action bounds"));
        assert_eq!(diags[0].severity, Severity::Warning);
    }

    #[test]
    fn breakthrough_has_no_negated_effect_warning() {
        let dom = parse_domain(models::BREAKTHROUGH_DOMAIN).unwrap();
        let inst = parse_problem(models::BREAKTHROUGH_2X4_PROBLEM).unwrap();
        assert!(validate_instance(&dom, &inst)
            .iter()
            .all(|d| !d.message.contains("negated")));
    }

    #[test]
    fn negated_effect_is_flagged() {
        let dom = parse_domain(
            "#blackactions\n:action clear\n:parameters (?x,?y)\n:precondition ()\n:effect (NOT(white(?x,?y)))\n#whiteactions\n:action occupy\n:parameters (?x,?y)\n:precondition (open(?x,?y))\n:effect (white(?x,?y))\n",
        )
        .unwrap();
        let inst = parse_problem(models::TIC_5X4_PROBLEM).unwrap();
        let diags = validate_instance(&dom, &inst);
        assert!(diags.iter().any(|d| d.message.contains("negated effect")));
    }

    #[test]
    fn even_depth_note_and_off_board_goal() {
        let dom = parse_domain(models::DOMINEERING_DOMAIN).unwrap();
        let inst = parse_problem(models::DOMINEERING_2X2_PROBLEM).unwrap();
        let diags = validate_instance(&dom, &inst);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Note);

        let inst = parse_problem(
            "#boardsize 2 2\n#init\n#depth 3\n#blackgoals\n(black(3,1))\n#whitegoals\n",
        )
        .unwrap();
        let diags = validate_instance(&dom, &inst);
        assert!(diags.iter().any(|d| d.severity == Severity::Error));
    }
}
