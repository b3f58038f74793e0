//! Winning-strategy validation by play: a human (or a test) moves for White
//! against a strategy provider for Black, one ply at a time.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bddl::Side;
use crate::semantics::{BoardState, Move, Oracle, Rules, SemanticsError, Verdict};

/// Chooses Black's moves.
///
/// Implementations should only answer for positions they can certify as
/// winning; the session treats `None` as a failed strategy.
pub trait StrategyProvider: Send {
    fn name(&self) -> &str;

    /// Black's move in `state` with `plies` plies left, Black to move.
    fn black_move(&mut self, state: &BoardState, plies: u32) -> Option<Move>;
}

/// The explicit-state oracle as a strategy.
pub struct OracleStrategy {
    oracle: Oracle,
}

impl OracleStrategy {
    pub fn new(rules: Arc<Rules>) -> Self {
        OracleStrategy {
            oracle: Oracle::new(rules),
        }
    }

    pub fn wins(&mut self, state: &BoardState, plies: u32) -> bool {
        self.oracle.black_to_move_wins(state, plies)
    }
}

impl StrategyProvider for OracleStrategy {
    fn name(&self) -> &str {
        "oracle"
    }

    fn black_move(&mut self, state: &BoardState, plies: u32) -> Option<Move> {
        self.oracle.strategy_move(state, plies).ok()
    }
}

/// Plays a fixed list of moves, whatever the position. For tests.
pub struct ScriptedStrategy {
    moves: std::collections::VecDeque<Move>,
}

impl ScriptedStrategy {
    pub fn new(moves: impl IntoIterator<Item = Move>) -> Self {
        ScriptedStrategy {
            moves: moves.into_iter().collect(),
        }
    }
}

impl StrategyProvider for ScriptedStrategy {
    fn name(&self) -> &str {
        "scripted"
    }

    fn black_move(&mut self, _: &BoardState, _: u32) -> Option<Move> {
        self.moves.pop_front()
    }
}

/// What an illegal White attempt does to the session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// The play ends as a Black win, as in the encoding.
    #[default]
    Validation,
    /// The attempt is rejected and White moves again.
    Interactive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "verdict", rename_all = "snake_case")]
pub enum Status {
    AwaitingWhite,
    BlackThinking,
    Finished(Verdict),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlyKind {
    Played,
    IllegalAttempt,
}

/// One entry of the history; `state` is the board after it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlyRecord {
    pub ply: u32,
    pub kind: PlyKind,
    #[serde(rename = "move")]
    pub mv: Move,
    #[serde(serialize_with = "board_rows")]
    pub state: BoardState,
}

/// A White submission turned away without touching the session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub ply: u32,
    #[serde(rename = "move")]
    pub mv: Move,
    pub reason: String,
}

fn board_rows<S: serde::Serializer>(s: &BoardState, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_seq(render_rows(s))
}

/// Rows top-down as strings of `B`, `W` and `.`.
pub fn render_rows(s: &BoardState) -> Vec<String> {
    s.rows()
        .iter()
        .map(|r| r.iter().map(|c| c.symbol()).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlayError {
    #[error("no winning strategy at depth {depth}: nothing to validate")]
    NoWinningStrategy { depth: u32 },
    #[error("malformed move: {0}")]
    Malformed(String),
    #[error("illegal move: {0}")]
    Illegal(String),
    #[error("it is not White's turn")]
    NotWhitesTurn,
    #[error("the session is still running")]
    NotFinished,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// The replayable record of a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub strategy: String,
    pub mode: Mode,
    pub width: u32,
    pub height: u32,
    pub depth: u32,
    #[serde(serialize_with = "board_rows")]
    pub initial: BoardState,
    pub history: Vec<PlyRecord>,
    pub rejected: Vec<Rejection>,
    /// Every White submission in order, accepted or not.
    pub white_inputs: Vec<Move>,
    pub status: Status,
}

impl Transcript {
    pub fn final_state(&self) -> BoardState {
        self.history.last().map_or(self.initial, |r| r.state)
    }
}

pub struct PlaySession {
    rules: Arc<Rules>,
    provider: Box<dyn StrategyProvider>,
    mode: Mode,
    /// Next ply to be played, 1-based.
    ply: u32,
    state: BoardState,
    history: Vec<PlyRecord>,
    rejected: Vec<Rejection>,
    white_inputs: Vec<Move>,
    status: Status,
}

impl std::fmt::Debug for PlaySession {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PlaySession")
            .field("provider", &self.provider.name())
            .field("mode", &self.mode)
            .field("ply", &self.ply)
            .field("status", &self.status)
            .finish_non_exhaustive()
    }
}

impl PlaySession {
    /// Open a session against the oracle strategy, refusing instances Black
    /// cannot win.
    pub fn start(rules: Arc<Rules>, mode: Mode) -> Result<Self, PlayError> {
        let mut provider = OracleStrategy::new(rules.clone());
        if !provider.wins(&rules.initial_state(), rules.depth()) {
            return Err(PlayError::NoWinningStrategy {
                depth: rules.depth(),
            });
        }
        Ok(Self::with_provider(rules, mode, Box::new(provider)))
    }

    /// Open a session with any provider, without the winning check. Black's
    /// first move is played before this returns.
    pub fn with_provider(rules: Arc<Rules>, mode: Mode, provider: Box<dyn StrategyProvider>) -> Self {
        let state = rules.initial_state();
        let mut s = PlaySession {
            rules,
            provider,
            mode,
            ply: 1,
            state,
            history: Vec::new(),
            rejected: Vec::new(),
            white_inputs: Vec::new(),
            status: Status::BlackThinking,
        };
        s.advance();
        s
    }

    pub fn rules(&self) -> &Arc<Rules> {
        &self.rules
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn ply(&self) -> u32 {
        self.ply
    }

    pub fn depth(&self) -> u32 {
        self.rules.depth()
    }

    pub fn state(&self) -> &BoardState {
        &self.state
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn history(&self) -> &[PlyRecord] {
        &self.history
    }

    pub fn rejected(&self) -> &[Rejection] {
        &self.rejected
    }

    pub fn verdict(&self) -> Option<Verdict> {
        match self.status {
            Status::Finished(v) => Some(v),
            _ => None,
        }
    }

    /// White's legal moves now; empty unless White is to move.
    pub fn legal_white_moves(&self) -> Vec<Move> {
        if self.status != Status::AwaitingWhite {
            return Vec::new();
        }
        self.rules
            .legal_moves(&self.state, Side::White)
            .into_iter()
            .map(|(m, _)| m)
            .collect()
    }

    fn finish(&mut self, v: Verdict) {
        self.status = Status::Finished(v);
    }

    /// Let Black move if it is Black's turn. Black claims a win as soon as
    /// its goal holds.
    pub fn advance(&mut self) {
        if self.status != Status::BlackThinking {
            return;
        }
        let d = self.depth();
        if self.ply > d {
            return self.finish(Verdict::Undecided);
        }
        if !self.rules.has_legal_move(&self.state, Side::Black) {
            return self.finish(Verdict::WhiteWinsOpponentStuck);
        }
        let plies = d - self.ply + 1;
        let next = self
            .provider
            .black_move(&self.state, plies)
            .and_then(|mv| Some((mv, self.rules.apply(&self.state, &mv)?)));
        let Some((mv, next)) = next else {
            // The strategy has no (legal) answer: the play is lost for it.
            return self.finish(Verdict::Undecided);
        };
        self.state = next;
        self.history.push(PlyRecord {
            ply: self.ply,
            kind: PlyKind::Played,
            mv,
            state: next,
        });
        self.ply += 1;
        if self.rules.won_by(&next, Side::Black) {
            return self.finish(Verdict::BlackWinsByGoal);
        }
        if self.ply > d {
            return self.finish(Verdict::Undecided);
        }
        if !self.rules.has_legal_move(&next, Side::White) {
            return self.finish(Verdict::BlackWinsOpponentStuck);
        }
        self.status = Status::AwaitingWhite;
    }

    /// Check that `mv` names a White action and a cell of the board.
    fn well_formed(&self, mv: &Move) -> Result<(), String> {
        let names = self.rules.action_names(Side::White);
        if mv.side != Side::White {
            return Err("moves must be White's".into());
        }
        if mv.action >= names.len() {
            return Err(format!(
                "action index {} out of range: White has {} action(s)",
                mv.action,
                names.len()
            ));
        }
        let (m, n) = (self.rules.width(), self.rules.height());
        if !(1..=m).contains(&mv.x) || !(1..=n).contains(&mv.y) {
            return Err(format!("({},{}) is off the {m}x{n} board", mv.x, mv.y));
        }
        Ok(())
    }

    /// Apply White's move without letting Black answer yet. On success the
    /// status is `BlackThinking` or `Finished`.
    pub fn play_white(&mut self, mv: Move) -> Result<(), PlayError> {
        if self.status != Status::AwaitingWhite {
            return Err(PlayError::NotWhitesTurn);
        }
        self.white_inputs.push(mv);
        if let Err(reason) = self.well_formed(&mv) {
            self.rejected.push(Rejection {
                ply: self.ply,
                mv,
                reason: reason.clone(),
            });
            return Err(PlayError::Malformed(reason));
        }
        let Some(next) = self.rules.apply(&self.state, &mv) else {
            let name = &self.rules.action_names(Side::White)[mv.action];
            let reason = format!("{name} at ({},{}) does not apply here", mv.x, mv.y);
            return match self.mode {
                Mode::Validation => {
                    self.history.push(PlyRecord {
                        ply: self.ply,
                        kind: PlyKind::IllegalAttempt,
                        mv,
                        state: self.state,
                    });
                    self.finish(Verdict::BlackWinsIllegalMove);
                    Ok(())
                }
                Mode::Interactive => {
                    self.rejected.push(Rejection {
                        ply: self.ply,
                        mv,
                        reason: reason.clone(),
                    });
                    Err(PlayError::Illegal(reason))
                }
            };
        };
        self.state = next;
        self.history.push(PlyRecord {
            ply: self.ply,
            kind: PlyKind::Played,
            mv,
            state: next,
        });
        self.ply += 1;
        if self.rules.won_by(&next, Side::White) {
            self.finish(Verdict::WhiteWinsByGoal);
        } else {
            self.status = Status::BlackThinking;
        }
        Ok(())
    }

    /// White moves, then Black replies.
    pub fn submit_white_move(&mut self, mv: Move) -> Result<(), PlayError> {
        self.play_white(mv)?;
        self.advance();
        Ok(())
    }

    pub fn transcript(&self) -> Transcript {
        Transcript {
            strategy: self.provider.name().to_string(),
            mode: self.mode,
            width: self.rules.width(),
            height: self.rules.height(),
            depth: self.depth(),
            initial: self.rules.initial_state(),
            history: self.history.clone(),
            rejected: self.rejected.clone(),
            white_inputs: self.white_inputs.clone(),
            status: self.status,
        }
    }

    /// Verdict and transcript of a finished session.
    pub fn session_verdict(&self) -> Result<(Verdict, Transcript), PlayError> {
        self.verdict()
            .map(|v| (v, self.transcript()))
            .ok_or(PlayError::NotFinished)
    }

    /// Parse `"x y"`, `"action x y"` or `"index x y"` as a White move.
    pub fn parse_move(&self, text: &str) -> Result<Move, PlayError> {
        let words: Vec<&str> = text.split_whitespace().collect();
        let names = self.rules.action_names(Side::White);
        let coord = |w: &str| {
            w.parse::<u32>()
                .map_err(|_| PlayError::Malformed(format!("'{w}' is not a coordinate")))
        };
        let (action, x, y) = match words.as_slice() {
            [x, y] if names.len() == 1 => (0, coord(x)?, coord(y)?),
            [_, _] => {
                return Err(PlayError::Malformed(format!(
                    "name one of the actions: {}",
                    names.join(", ")
                )))
            }
            [a, x, y] => {
                let action = match names.iter().position(|n| n == a) {
                    Some(i) => i,
                    None => a.parse::<usize>().map_err(|_| {
                        PlayError::Malformed(format!("unknown action '{a}'"))
                    })?,
                };
                (action, coord(x)?, coord(y)?)
            }
            _ => return Err(PlayError::Malformed("expected [action] x y".into())),
        };
        Ok(Move {
            side: Side::White,
            action,
            x,
            y,
        })
    }

    /// Short text for a move, with the action's name.
    pub fn describe_move(&self, mv: &Move) -> String {
        let name = self
            .rules
            .action_names(mv.side)
            .get(mv.action)
            .map_or("?", String::as_str);
        format!("{} {name} ({},{})", mv.side, mv.x, mv.y)
    }
}

/// Feed `white` to a fresh session, in order. Rejected submissions are
/// replayed too, so the transcripts match.
pub fn replay(
    rules: Arc<Rules>,
    mode: Mode,
    provider: Box<dyn StrategyProvider>,
    white: &[Move],
) -> PlaySession {
    let mut s = PlaySession::with_provider(rules, mode, provider);
    for &mv in white {
        if s.status() != Status::AwaitingWhite {
            break;
        }
        let _ = s.submit_white_move(mv);
    }
    s
}

/// Banner and grid, row 1 on top.
pub fn render_board(session: &PlaySession) -> String {
    let mut out = String::new();
    let banner = match session.status() {
        Status::AwaitingWhite => format!("ply {} of {}: White to move", session.ply(), session.depth()),
        Status::BlackThinking => format!("ply {} of {}: Black to move", session.ply(), session.depth()),
        Status::Finished(v) => format!("finished after {} plies: {}", session.ply() - 1, v.describe()),
    };
    let _ = writeln!(out, "{banner}");
    out.push_str(&session.state().to_string());
    out
}
