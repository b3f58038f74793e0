//! Explicit-state game semantics: board states, grounded transitions, goal
//! tests, sanity checking and the bounded win/loss oracle.

mod oracle;
mod rules;
mod sanity;

pub use oracle::{solve, solve_sequential, Oracle, OracleResult};
#[cfg(feature = "parallel")]
pub use oracle::solve_parallel;
pub use rules::Rules;
pub use sanity::{check_sanity, SanityOutcome, SanityReport};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bddl::{Bounds, Condition, GameInstance, Predicate, Side, SubCondition};

/// Largest board the semantics layer handles (two `u128` bitboards).
pub const MAX_CELLS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("board has {cells} cells; at most {MAX_CELLS} are supported")]
    BoardTooLarge { cells: usize },
    #[error("{side} action '{action}' has a negated effect, which has no functional reading")]
    NegatedEffect { side: Side, action: String },
    #[error("position is not winning for black within {plies} plies")]
    NotWinning { plies: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    Open,
    Black,
    White,
}

impl Cell {
    pub fn symbol(self) -> char {
        match self {
            Cell::Open => '.',
            Cell::Black => 'B',
            Cell::White => 'W',
        }
    }

    pub fn satisfies(self, p: Predicate) -> bool {
        matches!(
            (self, p),
            (Cell::Open, Predicate::Open)
                | (Cell::Black, Predicate::Black)
                | (Cell::White, Predicate::White)
        )
    }

    fn of_predicate(p: Predicate) -> Cell {
        match p {
            Predicate::Open => Cell::Open,
            Predicate::Black => Cell::Black,
            Predicate::White => Cell::White,
        }
    }
}

/// Total map from `[1..m] x [1..n]` to cells, packed into two bitboards.
///
/// Cell `(x,y)` sits at bit `(y-1)*m + (x-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoardState {
    width: u32,
    height: u32,
    pub(crate) black: u128,
    pub(crate) white: u128,
}

impl BoardState {
    /// All-open board. Panics above [`MAX_CELLS`]; [`Rules::new`] reports
    /// that case as an error first.
    pub fn empty(width: u32, height: u32) -> Self {
        assert!(
            (width as usize) * (height as usize) <= MAX_CELLS,
            "board too large"
        );
        BoardState {
            width,
            height,
            black: 0,
            white: 0,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn on_board(&self, x: i64, y: i64) -> bool {
        (1..=i64::from(self.width)).contains(&x) && (1..=i64::from(self.height)).contains(&y)
    }

    pub(crate) fn bit(&self, x: u32, y: u32) -> u128 {
        debug_assert!(self.on_board(x.into(), y.into()));
        1u128 << ((y - 1) * self.width + (x - 1))
    }

    pub fn get(&self, x: u32, y: u32) -> Cell {
        let b = self.bit(x, y);
        if self.black & b != 0 {
            Cell::Black
        } else if self.white & b != 0 {
            Cell::White
        } else {
            Cell::Open
        }
    }

    pub fn set(&mut self, x: u32, y: u32, cell: Cell) {
        let b = self.bit(x, y);
        self.black &= !b;
        self.white &= !b;
        match cell {
            Cell::Black => self.black |= b,
            Cell::White => self.white |= b,
            Cell::Open => {}
        }
    }

    pub fn count(&self, cell: Cell) -> usize {
        match cell {
            Cell::Black => self.black.count_ones() as usize,
            Cell::White => self.white.count_ones() as usize,
            Cell::Open => {
                self.width as usize * self.height as usize
                    - (self.black | self.white).count_ones() as usize
            }
        }
    }

    /// Rows top to bottom (`y = 1` first), each a list of columns.
    pub fn rows(&self) -> Vec<Vec<Cell>> {
        (1..=self.height)
            .map(|y| (1..=self.width).map(|x| self.get(x, y)).collect())
            .collect()
    }
}

impl fmt::Display for BoardState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: String = row.iter().map(|c| c.symbol()).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// A move: an action of one side anchored at `(x,y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub side: Side,
    pub action: usize,
    pub x: u32,
    pub y: u32,
}

/// Terminal classification of a play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    BlackWinsByGoal,
    WhiteWinsByGoal,
    BlackWinsOpponentStuck,
    WhiteWinsOpponentStuck,
    /// White attempted a move that is not legal, ending a validation play.
    BlackWinsIllegalMove,
    Undecided,
}

impl Verdict {
    pub fn black_wins(self) -> bool {
        matches!(
            self,
            Verdict::BlackWinsByGoal | Verdict::BlackWinsOpponentStuck | Verdict::BlackWinsIllegalMove
        )
    }

    pub fn describe(self) -> &'static str {
        match self {
            Verdict::BlackWinsByGoal => "Black wins: goal reached",
            Verdict::WhiteWinsByGoal => "White wins: goal reached",
            Verdict::BlackWinsOpponentStuck => "Black wins: White cannot move",
            Verdict::WhiteWinsOpponentStuck => "White wins: Black cannot move",
            Verdict::BlackWinsIllegalMove => "Black wins: White played an illegal move",
            Verdict::Undecided => "Undecided: depth exhausted without a Black win",
        }
    }
}

/// `s0` of the instance, straight from the init list.
pub fn initial_state(inst: &GameInstance) -> BoardState {
    let mut s = BoardState::empty(inst.width, inst.height);
    for e in &inst.init {
        let cell = match e.side {
            Side::Black => Cell::Black,
            Side::White => Cell::White,
        };
        s.set(e.x, e.y, cell);
    }
    s
}

/// `s,(i,j) |= c`. The anchor must lie within `bounds(c)`.
pub fn holds_at(s: &BoardState, c: &SubCondition, i: i64, j: i64) -> bool {
    let x = c.x.resolve(i, s.width);
    let y = c.y.resolve(j, s.height);
    assert!(
        s.on_board(x, y),
        "anchor ({i},{j}) outside the bounds of {c}"
    );
    s.get(x as u32, y as u32).satisfies(c.predicate) != c.negated
}

/// `s,(i,j) |= C` for an anchor within `bounds(C)`.
pub fn condition_holds_at(s: &BoardState, c: &Condition, i: i64, j: i64) -> bool {
    c.iter().all(|sub| holds_at(s, sub, i, j))
}

/// Some goal holds at some in-bounds anchor.
pub fn state_won_by(s: &BoardState, goals: &[Condition]) -> bool {
    goals.iter().any(|g| {
        Bounds::of_condition(g, s.width, s.height)
            .anchors()
            .any(|(i, j)| condition_holds_at(s, g, i, j))
    })
}

/// Cell written by a positive effect literal at anchor `(i,j)`.
pub(crate) fn effect_target(s: &BoardState, c: &SubCondition, i: i64, j: i64) -> (u32, u32, Cell) {
    let x = c.x.resolve(i, s.width) as u32;
    let y = c.y.resolve(j, s.height) as u32;
    (x, y, Cell::of_predicate(c.predicate))
}
