//! BDDL syntax: typed domain and problem objects, the parser that produces
//! them, implicit bounds, and static validation.
//!
//! A domain file lists the actions of both players. Every action is written
//! against the fixed parameters `(?x,?y)` and consists of a precondition and
//! an effect, each a conjunction of sub-conditions such as `open(?x,?y+1)`
//! or `NOT(black(?x-1,?y))`. A problem file fixes the board size, the initial
//! placement, the depth bound and the goal conditions of both players.

mod bounds;
mod lexer;
mod parser;
mod print;
mod validate;

pub use bounds::Bounds;
pub use parser::{parse_domain, parse_problem};
pub use validate::{validate_instance, Diagnostic, Severity};

use std::fmt;

use serde::{Deserialize, Serialize};

/// Location of a token in the source text, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: Span, message: String },
    #[error("error at {span}: {message}")]
    Semantic { span: Span, message: String },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. } | ParseError::Semantic { span, .. } => *span,
        }
    }
}

/// Board axis. `x` runs over columns `1..=m`, `y` over rows `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

/// What a coordinate expression is anchored on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoordBase {
    VarX,
    VarY,
    Const(u32),
    XMin,
    XMax,
    YMin,
    YMax,
}

/// One coordinate of a sub-condition: `?x`, `?x+2`, `?y-1`, `3`, `xmax`, ...
///
/// `offset` is only ever non-zero for the parameter bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoordExpr {
    pub base: CoordBase,
    pub offset: i32,
}

impl CoordExpr {
    pub const fn var(axis: Axis, offset: i32) -> Self {
        let base = match axis {
            Axis::X => CoordBase::VarX,
            Axis::Y => CoordBase::VarY,
        };
        CoordExpr { base, offset }
    }

    pub const fn constant(value: u32) -> Self {
        CoordExpr {
            base: CoordBase::Const(value),
            offset: 0,
        }
    }

    /// Axis this expression is tied to, `None` for plain integers.
    pub fn axis(&self) -> Option<Axis> {
        match self.base {
            CoordBase::VarX | CoordBase::XMin | CoordBase::XMax => Some(Axis::X),
            CoordBase::VarY | CoordBase::YMin | CoordBase::YMax => Some(Axis::Y),
            CoordBase::Const(_) => None,
        }
    }

    pub fn is_relative(&self) -> bool {
        matches!(self.base, CoordBase::VarX | CoordBase::VarY)
    }

    /// Value after substituting the parameter by `anchor` and the extreme
    /// symbols by `1` and `size`. May fall off the board; callers check.
    pub fn resolve(&self, anchor: i64, size: u32) -> i64 {
        match self.base {
            CoordBase::VarX | CoordBase::VarY => anchor + i64::from(self.offset),
            CoordBase::Const(c) => i64::from(c),
            CoordBase::XMin | CoordBase::YMin => 1,
            CoordBase::XMax | CoordBase::YMax => i64::from(size),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Predicate {
    Black,
    White,
    Open,
}

impl Predicate {
    pub fn keyword(self) -> &'static str {
        match self {
            Predicate::Black => "black",
            Predicate::White => "white",
            Predicate::Open => "open",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubCondition {
    pub predicate: Predicate,
    pub x: CoordExpr,
    pub y: CoordExpr,
    pub negated: bool,
}

impl SubCondition {
    pub fn new(predicate: Predicate, x: CoordExpr, y: CoordExpr) -> Self {
        SubCondition {
            predicate,
            x,
            y,
            negated: false,
        }
    }

    pub fn negate(mut self) -> Self {
        self.negated = !self.negated;
        self
    }
}

/// Conjunction of sub-conditions; the empty condition is true.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Condition {
    pub subs: Vec<SubCondition>,
}

impl Condition {
    pub fn new(subs: Vec<SubCondition>) -> Self {
        Condition { subs }
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SubCondition> {
        self.subs.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDef {
    pub name: String,
    pub pre: Condition,
    pub eff: Condition,
}

impl ActionDef {
    /// Precondition and effect together (`all(a)`), used for joint bounds.
    pub fn all_subconditions(&self) -> impl Iterator<Item = &SubCondition> {
        self.pre.iter().chain(self.eff.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Black,
    White,
}

impl Side {
    pub fn opponent(self) -> Side {
        match self {
            Side::Black => Side::White,
            Side::White => Side::Black,
        }
    }

    /// Side making ply `ply` (1-based); Black makes the odd plies.
    pub fn of_ply(ply: u32) -> Side {
        if ply % 2 == 1 {
            Side::Black
        } else {
            Side::White
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Black => "black",
            Side::White => "white",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameDomain {
    pub black_actions: Vec<ActionDef>,
    pub white_actions: Vec<ActionDef>,
}

impl GameDomain {
    pub fn actions(&self, side: Side) -> &[ActionDef] {
        match side {
            Side::Black => &self.black_actions,
            Side::White => &self.white_actions,
        }
    }
}

/// One `black(i,j)` / `white(i,j)` entry of `#init`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InitEntry {
    pub side: Side,
    pub x: u32,
    pub y: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameInstance {
    pub width: u32,
    pub height: u32,
    pub init: Vec<InitEntry>,
    pub black_goals: Vec<Condition>,
    pub white_goals: Vec<Condition>,
    pub depth: u32,
}

impl GameInstance {
    pub fn goals(&self, side: Side) -> &[Condition] {
        match side {
            Side::Black => &self.black_goals,
            Side::White => &self.white_goals,
        }
    }

    pub fn size(&self, axis: Axis) -> u32 {
        match axis {
            Axis::X => self.width,
            Axis::Y => self.height,
        }
    }

    pub fn cell_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Same instance, different depth bound.
    pub fn with_depth(&self, depth: u32) -> GameInstance {
        GameInstance {
            depth,
            ..self.clone()
        }
    }
}
