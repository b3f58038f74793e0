use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::bddl::Side;

use super::{BoardState, Rules};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "witness", rename_all = "snake_case")]
pub enum SanityOutcome {
    Pass,
    Violation(String),
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SanityReport {
    pub outcome: SanityOutcome,
    pub states_explored: usize,
}

impl SanityReport {
    pub fn passed(&self) -> bool {
        self.outcome == SanityOutcome::Pass
    }
}

/// Check that no player starts in a won state and that a player's goal can
/// only become true through its own move.
///
/// The transition conditions are checked on every state reachable within
/// the instance depth, stopping once `budget` states have been expanded.
pub fn check_sanity(rules: &Rules, budget: usize) -> SanityReport {
    let s0 = rules.initial_state();
    for side in [Side::Black, Side::White] {
        if rules.won_by(&s0, side) {
            return SanityReport {
                outcome: SanityOutcome::Violation(format!("s0 ∈ win_{}", side_letter(side))),
                states_explored: 0,
            };
        }
    }

    let mut seen: FxHashSet<(BoardState, Side)> = FxHashSet::default();
    let mut layer = vec![s0];
    seen.insert((s0, Side::Black));
    let mut explored = 0;
    for ply in 1..=rules.depth() {
        let mover = Side::of_ply(ply);
        let other = mover.opponent();
        let mut next = Vec::new();
        for s in &layer {
            if explored == budget {
                return SanityReport {
                    outcome: SanityOutcome::BudgetExhausted,
                    states_explored: explored,
                };
            }
            explored += 1;
            let already = rules.won_by(s, other);
            for (mv, t) in rules.legal_moves(s, mover) {
                if !already && rules.won_by(&t, other) {
                    let name = &rules.action_names(mover)[mv.action];
                    return SanityReport {
                        outcome: SanityOutcome::Violation(format!(
                            "{mover} move {name}({},{}) makes the position won by {other}:\n{s}->\n{t}",
                            mv.x, mv.y
                        )),
                        states_explored: explored,
                    };
                }
                if seen.insert((t, other)) {
                    next.push(t);
                }
            }
        }
        layer = next;
    }
    SanityReport {
        outcome: SanityOutcome::Pass,
        states_explored: explored,
    }
}

fn side_letter(side: Side) -> char {
    match side {
        Side::Black => 'b',
        Side::White => 'w',
    }
}
