use crate::bddl::{Bounds, Condition, GameDomain, GameInstance, Predicate, Side, SubCondition};

use super::{effect_target, initial_state, BoardState, Cell, Move, SemanticsError, MAX_CELLS};

/// A grounded conjunction: which cells must (not) carry which predicate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Pattern {
    black: u128,
    white: u128,
    open: u128,
    not_black: u128,
    not_white: u128,
    occupied: u128,
}

impl Pattern {
    fn require(&mut self, bit: u128, c: &SubCondition) {
        match (c.predicate, c.negated) {
            (Predicate::Black, false) => self.black |= bit,
            (Predicate::White, false) => self.white |= bit,
            (Predicate::Open, false) => self.open |= bit,
            (Predicate::Black, true) => self.not_black |= bit,
            (Predicate::White, true) => self.not_white |= bit,
            (Predicate::Open, true) => self.occupied |= bit,
        }
    }

    #[inline]
    pub(crate) fn matches(&self, black: u128, white: u128) -> bool {
        let taken = black | white;
        (self.black & !black)
            | (self.white & !white)
            | (self.open & taken)
            | (self.occupied & !taken)
            | (self.not_black & black)
            | (self.not_white & white)
            == 0
    }
}

#[derive(Debug, Clone)]
pub(crate) struct GroundMove {
    pub mv: Move,
    pub pre: Pattern,
    set_black: u128,
    set_white: u128,
    clear: u128,
}

impl GroundMove {
    #[inline]
    pub(crate) fn apply(&self, black: u128, white: u128) -> (u128, u128) {
        (
            (black & !self.clear) | self.set_black,
            (white & !self.clear) | self.set_white,
        )
    }
}

/// Domain and instance compiled to bitboard patterns.
///
/// Moves are listed in `(action, x, y)` order, `x` outer, which is also the
/// tie-break order of the oracle.
#[derive(Debug, Clone)]
pub struct Rules {
    width: u32,
    height: u32,
    depth: u32,
    initial: BoardState,
    moves: [Vec<GroundMove>; 2],
    goals: [Vec<Pattern>; 2],
    action_names: [Vec<String>; 2],
}

fn side_index(side: Side) -> usize {
    match side {
        Side::Black => 0,
        Side::White => 1,
    }
}

impl Rules {
    pub fn new(dom: &GameDomain, inst: &GameInstance) -> Result<Rules, SemanticsError> {
        let cells = inst.cell_count();
        if cells > MAX_CELLS {
            return Err(SemanticsError::BoardTooLarge { cells });
        }
        let proto = BoardState::empty(inst.width, inst.height);
        let mut moves: [Vec<GroundMove>; 2] = [Vec::new(), Vec::new()];
        let mut action_names: [Vec<String>; 2] = [Vec::new(), Vec::new()];
        for side in [Side::Black, Side::White] {
            for (index, action) in dom.actions(side).iter().enumerate() {
                if action.eff.iter().any(|c| c.negated) {
                    return Err(SemanticsError::NegatedEffect {
                        side,
                        action: action.name.clone(),
                    });
                }
                action_names[side_index(side)].push(action.name.clone());
                let bounds =
                    Bounds::of_subconditions(action.all_subconditions(), inst.width, inst.height);
                for (i, j) in bounds.anchors() {
                    let mv = Move {
                        side,
                        action: index,
                        x: i as u32,
                        y: j as u32,
                    };
                    if let Some(g) = ground_move(&proto, mv, &action.pre, &action.eff) {
                        moves[side_index(side)].push(g);
                    }
                }
            }
        }
        let goals = [Side::Black, Side::White].map(|side| {
            inst.goals(side)
                .iter()
                .flat_map(|g| {
                    Bounds::of_condition(g, inst.width, inst.height)
                        .anchors()
                        .map(|(i, j)| ground_pattern(&proto, g, i, j))
                        .collect::<Vec<_>>()
                })
                .collect()
        });
        Ok(Rules {
            width: inst.width,
            height: inst.height,
            depth: inst.depth,
            initial: initial_state(inst),
            moves,
            goals,
            action_names,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn initial_state(&self) -> BoardState {
        self.initial
    }

    pub fn action_names(&self, side: Side) -> &[String] {
        &self.action_names[side_index(side)]
    }

    pub(crate) fn ground(&self, side: Side) -> &[GroundMove] {
        &self.moves[side_index(side)]
    }

    pub(crate) fn goal_patterns(&self, side: Side) -> &[Pattern] {
        &self.goals[side_index(side)]
    }

    /// Every `(move, successor)` available to `side`, in tie-break order.
    pub fn legal_moves(&self, s: &BoardState, side: Side) -> Vec<(Move, BoardState)> {
        self.ground(side)
            .iter()
            .filter(|g| g.pre.matches(s.black, s.white))
            .map(|g| (g.mv, self.successor(s, g)))
            .collect()
    }

    pub fn has_legal_move(&self, s: &BoardState, side: Side) -> bool {
        self.ground(side)
            .iter()
            .any(|g| g.pre.matches(s.black, s.white))
    }

    /// Successor of `mv`, or `None` if it is not legal in `s`.
    pub fn apply(&self, s: &BoardState, mv: &Move) -> Option<BoardState> {
        self.ground(mv.side)
            .iter()
            .find(|g| g.mv == *mv)
            .filter(|g| g.pre.matches(s.black, s.white))
            .map(|g| self.successor(s, g))
    }

    pub fn won_by(&self, s: &BoardState, side: Side) -> bool {
        self.goal_patterns(side)
            .iter()
            .any(|p| p.matches(s.black, s.white))
    }

    fn successor(&self, s: &BoardState, g: &GroundMove) -> BoardState {
        let (black, white) = g.apply(s.black, s.white);
        BoardState { black, white, ..*s }
    }
}

fn ground_pattern(proto: &BoardState, c: &Condition, i: i64, j: i64) -> Pattern {
    let mut p = Pattern::default();
    for sub in c.iter() {
        let x = sub.x.resolve(i, proto.width());
        let y = sub.y.resolve(j, proto.height());
        p.require(proto.bit(x as u32, y as u32), sub);
    }
    p
}

/// `None` when two effect literals write different values to one cell: no
/// successor can satisfy the effect, so the move never applies.
fn ground_move(proto: &BoardState, mv: Move, pre: &Condition, eff: &Condition) -> Option<GroundMove> {
    let (i, j) = (i64::from(mv.x), i64::from(mv.y));
    let mut targets: Vec<(u32, u32, Cell)> = Vec::new();
    for c in eff.iter() {
        let t = effect_target(proto, c, i, j);
        if targets.iter().any(|&(x, y, v)| (x, y) == (t.0, t.1) && v != t.2) {
            return None;
        }
        targets.push(t);
    }
    let mut g = GroundMove {
        mv,
        pre: ground_pattern(proto, pre, i, j),
        set_black: 0,
        set_white: 0,
        clear: 0,
    };
    for (x, y, cell) in targets {
        let bit = proto.bit(x, y);
        g.clear |= bit;
        match cell {
            Cell::Black => g.set_black |= bit,
            Cell::White => g.set_white |= bit,
            Cell::Open => {}
        }
    }
    Some(g)
}
