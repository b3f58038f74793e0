use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::bddl::{GameDomain, GameInstance, Side};

use super::{BoardState, Move, Rules, SemanticsError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub black_wins: bool,
    /// Lowest winning first move under `(action, x, y)` order.
    pub principal_move: Option<Move>,
    pub nodes_expanded: u64,
}

type Key = (u128, u128, u32);

/// Bounded win/loss search with a transposition table keyed on
/// `(state, plies remaining, side to move)`.
///
/// Black moves first. After a Black move a Black goal ends the game, after
/// a White move a White goal does, and a side without a legal move loses.
/// When the plies run out without a Black win, Black has not won.
#[derive(Debug, Clone)]
pub struct Oracle {
    rules: Arc<Rules>,
    memo: FxHashMap<Key, bool>,
    nodes: u64,
}

impl Oracle {
    pub fn new(rules: Arc<Rules>) -> Self {
        Oracle {
            rules,
            memo: FxHashMap::default(),
            nodes: 0,
        }
    }

    pub fn rules(&self) -> &Arc<Rules> {
        &self.rules
    }

    pub fn nodes_expanded(&self) -> u64 {
        self.nodes
    }

    /// Black to move in `s` forces a win within `plies` plies.
    pub fn black_to_move_wins(&mut self, s: &BoardState, plies: u32) -> bool {
        plies > 0 && self.black_node(s.black, s.white, plies)
    }

    /// White to move in `s`, and Black still forces a win within `plies`.
    pub fn white_to_move_black_wins(&mut self, s: &BoardState, plies: u32) -> bool {
        plies > 0 && self.white_node(s.black, s.white, plies)
    }

    /// Lowest Black move that keeps the win: its successor is won outright or
    /// winning with `plies - 1` remaining and White to move.
    pub fn strategy_move(&mut self, s: &BoardState, plies: u32) -> Result<Move, SemanticsError> {
        if plies > 0 {
            let candidates: Vec<(Move, u128, u128)> = self
                .rules
                .ground(Side::Black)
                .iter()
                .filter(|g| g.pre.matches(s.black, s.white))
                .map(|g| {
                    let (b, w) = g.apply(s.black, s.white);
                    (g.mv, b, w)
                })
                .collect();
            for (mv, b, w) in candidates {
                if self.won(Side::Black, b, w) || (plies > 1 && self.white_node(b, w, plies - 1)) {
                    return Ok(mv);
                }
            }
        }
        Err(SemanticsError::NotWinning { plies })
    }

    /// Decide the instance from its initial state at its own depth.
    pub fn solve(&mut self) -> OracleResult {
        let s0 = self.rules.initial_state();
        let d = self.rules.depth();
        let black_wins = self.black_to_move_wins(&s0, d);
        let principal_move = if black_wins {
            self.strategy_move(&s0, d).ok()
        } else {
            None
        };
        OracleResult {
            black_wins,
            principal_move,
            nodes_expanded: self.nodes,
        }
    }

    fn won(&self, side: Side, black: u128, white: u128) -> bool {
        self.rules
            .goal_patterns(side)
            .iter()
            .any(|p| p.matches(black, white))
    }

    fn successors(&self, side: Side, black: u128, white: u128) -> Vec<(u128, u128)> {
        self.rules
            .ground(side)
            .iter()
            .filter(|g| g.pre.matches(black, white))
            .map(|g| g.apply(black, white))
            .collect()
    }

    fn black_node(&mut self, black: u128, white: u128, plies: u32) -> bool {
        let key = (black, white, plies << 1);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        self.nodes += 1;
        let mut succ = self.successors(Side::Black, black, white);
        let value = if succ.iter().any(|&(b, w)| self.won(Side::Black, b, w)) {
            true
        } else if plies == 1 {
            false
        } else {
            succ.sort_unstable();
            succ.dedup();
            succ.into_iter()
                .any(|(b, w)| self.white_node(b, w, plies - 1))
        };
        self.memo.insert(key, value);
        value
    }

    fn white_node(&mut self, black: u128, white: u128, plies: u32) -> bool {
        let key = (black, white, (plies << 1) | 1);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        self.nodes += 1;
        let mut succ = self.successors(Side::White, black, white);
        let value = if succ.is_empty() {
            true
        } else if plies == 1 || succ.iter().any(|&(b, w)| self.won(Side::White, b, w)) {
            false
        } else {
            succ.sort_unstable();
            succ.dedup();
            succ.into_iter()
                .all(|(b, w)| self.black_node(b, w, plies - 1))
        };
        self.memo.insert(key, value);
        value
    }
}

/// Decide `s0 ∈ WIN_d` for an instance, using the parallel search when the
/// `parallel` feature is enabled.
pub fn solve(dom: &GameDomain, inst: &GameInstance) -> Result<OracleResult, SemanticsError> {
    let rules = Arc::new(Rules::new(dom, inst)?);
    #[cfg(feature = "parallel")]
    {
        Ok(solve_parallel(&rules))
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(solve_sequential(&rules))
    }
}

pub fn solve_sequential(rules: &Arc<Rules>) -> OracleResult {
    Oracle::new(Arc::clone(rules)).solve()
}

/// Root moves are searched on the rayon pool, each with its own table.
/// A root is skipped once a lower-indexed root is known to win, so the
/// verdict and principal move equal the sequential ones; only the node
/// count differs.
#[cfg(feature = "parallel")]
pub fn solve_parallel(rules: &Arc<Rules>) -> OracleResult {
    use std::sync::atomic::{AtomicUsize, AtomicU64, Ordering};

    use rayon::prelude::*;

    let s0 = rules.initial_state();
    let d = rules.depth();
    let roots = rules.legal_moves(&s0, Side::Black);
    let best = AtomicUsize::new(usize::MAX);
    let nodes = AtomicU64::new(1);
    roots.par_iter().enumerate().for_each(|(i, (_, t))| {
        if i > best.load(Ordering::Relaxed) {
            return;
        }
        let win = rules.won_by(t, Side::Black) || {
            let mut oracle = Oracle::new(Arc::clone(rules));
            let win = oracle.white_to_move_black_wins(t, d - 1);
            nodes.fetch_add(oracle.nodes, Ordering::Relaxed);
            win
        };
        if win {
            best.fetch_min(i, Ordering::Relaxed);
        }
    });
    let principal_move = roots.get(best.into_inner()).map(|(mv, _)| *mv);
    OracleResult {
        black_wins: principal_move.is_some(),
        principal_move,
        nodes_expanded: nodes.into_inner(),
    }
}
