//! Reference implementations shared by the property and acceptance suites.
//! Each one is written from the definitions, without any of the crate's
//! precomputed tables.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;

use bddl_core::bddl::{
    parse_domain, parse_problem, Axis, Bounds, Condition, CoordExpr, GameDomain, GameInstance,
    Predicate, Side, SubCondition,
};
use bddl_core::circuit::arith::{adder, compute, equality, less_than, subtractor, BitVec, Operand};
use bddl_core::circuit::qdimacs::Cnf;
use bddl_core::circuit::{Circuit, Quant};
use bddl_core::models;
use std::sync::Arc;

use bddl_core::play::{replay, Mode, OracleStrategy, Status};
use bddl_core::semantics::{initial_state, BoardState, Cell, Move, Rules};

pub struct Game {
    pub name: &'static str,
    pub dom: GameDomain,
    pub inst: GameInstance,
}

/// Bundled models with at most `cells` cells.
pub fn small_models(cells: usize) -> Vec<Game> {
    models::all()
        .into_iter()
        .map(|m| Game {
            name: m.name,
            dom: parse_domain(m.domain).unwrap(),
            inst: parse_problem(m.problem).unwrap(),
        })
        .filter(|g| g.inst.cell_count() <= cells)
        .collect()
}

// ---- arithmetic -----------------------------------------------------------

fn read(c: &Circuit, v: &BitVec, asg: &[bool]) -> u64 {
    v.bits
        .iter()
        .enumerate()
        .map(|(i, &b)| u64::from(c.evaluate_lit(b, asg).unwrap()) << i)
        .sum()
}

fn bits(value: u64, w: usize) -> Vec<bool> {
    (0..w).map(|i| (value >> i) & 1 == 1).collect()
}

/// Check adder, subtractor, comparator, equality and coordinate
/// computation on every input of every width up to `max_width`.
/// Returns the number of cases checked.
pub fn arithmetic_exhaustive(max_width: usize) -> Result<usize, String> {
    let mut cases = 0;
    for w in 1..=max_width {
        let top = 1u64 << w;
        let mut c = Circuit::new();
        let p = c.add_vars("p", w);
        let q = c.add_vars("q", w);
        let (vp, vq) = (BitVec::of_vars(&c, &p), BitVec::of_vars(&c, &q));
        let sums: Vec<_> = (0..top).map(|k| adder(&mut c, &vp, k).unwrap()).collect();
        let diffs: Vec<_> = (0..top).map(|k| subtractor(&mut c, &vp, k).unwrap()).collect();
        let lts: Vec<_> = (0..=2 * top).map(|k| less_than(&mut c, &vp, k)).collect();
        let eq_bits = equality(&mut c, &Operand::Bits(vp.clone()), &Operand::Bits(vq.clone()));
        let eq_consts: Vec<_> = (0..=2 * top)
            .map(|k| equality(&mut c, &Operand::Bits(vp.clone()), &Operand::Const(k)))
            .collect();
        let offsets: Vec<i32> = (-(top as i32) + 1..top as i32).collect();
        let computed: Vec<_> = offsets
            .iter()
            .map(|&o| compute(&mut c, &vp, Axis::X, &CoordExpr::var(Axis::X, o), top as u32).unwrap())
            .collect();
        for a in 0..top {
            for b in 0..top {
                let mut asg = bits(a, w);
                asg.extend(bits(b, w));
                let eval = |l| c.evaluate_lit(l, &asg).unwrap();
                if eval(eq_bits) != (a == b) {
                    return Err(format!("w={w}: eq({a},{b})"));
                }
                cases += 1;
                if b > 0 {
                    continue;
                }
                for k in 0..top {
                    if read(&c, &sums[k as usize], &asg) != (a + k) % top {
                        return Err(format!("w={w}: {a}+{k}"));
                    }
                    if read(&c, &diffs[k as usize], &asg) != (a + top - k) % top {
                        return Err(format!("w={w}: {a}-{k}"));
                    }
                    cases += 2;
                }
                for k in 0..=2 * top {
                    if eval(lts[k as usize]) != (a < k) {
                        return Err(format!("w={w}: {a}<{k}"));
                    }
                    if eval(eq_consts[k as usize]) != (a == k) {
                        return Err(format!("w={w}: {a}=={k}"));
                    }
                    cases += 2;
                }
                for (o, v) in offsets.iter().zip(&computed) {
                    let want = (a as i64 + i64::from(*o)).rem_euclid(top as i64) as u64;
                    if read(&c, v, &asg) != want {
                        return Err(format!("w={w}: {a}{o:+}"));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok(cases)
}

// ---- bounds -----------------------------------------------------------------

fn random_coord(rng: &mut impl Rng, axis: Axis, size: u32) -> CoordExpr {
    match rng.random_range(0..10) {
        0 => CoordExpr::constant(rng.random_range(1..=size)),
        1 => CoordExpr {
            base: match (axis, rng.random_bool(0.5)) {
                (Axis::X, true) => bddl_core::bddl::CoordBase::XMin,
                (Axis::X, false) => bddl_core::bddl::CoordBase::XMax,
                (Axis::Y, true) => bddl_core::bddl::CoordBase::YMin,
                (Axis::Y, false) => bddl_core::bddl::CoordBase::YMax,
            },
            offset: 0,
        },
        _ => CoordExpr::var(axis, rng.random_range(-4..=4)),
    }
}

pub fn random_condition(rng: &mut impl Rng, width: u32, height: u32) -> Condition {
    let n = rng.random_range(0..=4);
    Condition::new(
        (0..n)
            .map(|_| {
                let p = [Predicate::Black, Predicate::White, Predicate::Open][rng.random_range(0..3)];
                let sub = SubCondition::new(p, random_coord(rng, Axis::X, width), random_coord(rng, Axis::Y, height));
                if rng.random_bool(0.2) {
                    sub.negate()
                } else {
                    sub
                }
            })
            .collect(),
    )
}

/// Anchors (over a margin around the board) whose every coordinate lands
/// on the board, against the interval the crate computes.
pub fn bounds_match(c: &Condition, width: u32, height: u32) -> Result<(), String> {
    let b = Bounds::of_condition(c, width, height);
    for i in -6..=i64::from(width) + 6 {
        for j in -6..=i64::from(height) + 6 {
            let on = c.iter().all(|s| {
                let x = s.x.resolve(i, width);
                let y = s.y.resolve(j, height);
                (1..=i64::from(width)).contains(&x) && (1..=i64::from(height)).contains(&y)
            });
            let in_board = (1..=i64::from(width)).contains(&i) && (1..=i64::from(height)).contains(&j);
            if (on && in_board) != b.contains(i, j) {
                return Err(format!("{c:?} on {width}x{height}: anchor ({i},{j}) vs {b:?}"));
            }
        }
    }
    if b.anchor_count() != b.anchors().count() {
        return Err(format!("anchor count of {b:?}"));
    }
    Ok(())
}

// ---- game reference ---------------------------------------------------------

fn cell_at(s: &BoardState, sub: &SubCondition, i: i64, j: i64) -> Option<(u32, u32)> {
    let x = sub.x.resolve(i, s.width());
    let y = sub.y.resolve(j, s.height());
    s.on_board(x, y).then_some((x as u32, y as u32))
}

fn satisfied(s: &BoardState, c: &Condition, i: i64, j: i64) -> Option<bool> {
    let mut ok = true;
    for sub in c.iter() {
        let (x, y) = cell_at(s, sub, i, j)?;
        let cell = s.get(x, y);
        let want = match sub.predicate {
            Predicate::Black => Cell::Black,
            Predicate::White => Cell::White,
            Predicate::Open => Cell::Open,
        };
        ok &= (cell == want) != sub.negated;
    }
    Some(ok)
}

/// Successors straight from the action definitions, in `(action, x, y)`
/// order. Moves whose effects write two different values to one cell are
/// not moves.
pub fn successors(dom: &GameDomain, s: &BoardState, side: Side) -> Vec<(Move, BoardState)> {
    let mut out = Vec::new();
    for (a, act) in dom.actions(side).iter().enumerate() {
        for x in 1..=s.width() {
            for y in 1..=s.height() {
                let (i, j) = (i64::from(x), i64::from(y));
                if satisfied(s, &act.pre, i, j) != Some(true) || satisfied(s, &act.eff, i, j).is_none() {
                    continue;
                }
                let mut t = *s;
                let mut written: Vec<(u32, u32, Cell)> = Vec::new();
                let mut clash = false;
                for e in act.eff.iter() {
                    let (ex, ey) = cell_at(s, e, i, j).unwrap();
                    let v = match e.predicate {
                        Predicate::Black => Cell::Black,
                        Predicate::White => Cell::White,
                        Predicate::Open => Cell::Open,
                    };
                    clash |= written.iter().any(|&(wx, wy, wv)| (wx, wy) == (ex, ey) && wv != v);
                    written.push((ex, ey, v));
                    t.set(ex, ey, v);
                }
                if !clash {
                    out.push((Move { side, action: a, x, y }, t));
                }
            }
        }
    }
    out.sort_by_key(|(m, _)| (m.action, m.x, m.y));
    out
}

pub fn won(goals: &[Condition], s: &BoardState) -> bool {
    goals.iter().any(|g| {
        (1..=i64::from(s.width()))
            .any(|i| (1..=i64::from(s.height())).any(|j| satisfied(s, g, i, j) == Some(true)))
    })
}

/// Plain minimax without a table: does Black win from `s` with `plies`
/// plies left and `side` to move?
pub fn black_wins(dom: &GameDomain, inst: &GameInstance, s: &BoardState, plies: u32, side: Side) -> bool {
    if plies == 0 {
        return false;
    }
    let next = successors(dom, s, side);
    match side {
        Side::Black => next.iter().any(|(_, t)| {
            won(&inst.black_goals, t) || black_wins(dom, inst, t, plies - 1, Side::White)
        }),
        Side::White => next.iter().all(|(_, t)| {
            !won(&inst.white_goals, t) && black_wins(dom, inst, t, plies - 1, Side::Black)
        }),
    }
}

pub fn initial(inst: &GameInstance) -> BoardState {
    initial_state(inst)
}

/// A position after `plies` random plies from the start, stopping early at
/// a goal or a stuck side. Returns the position and the side to move.
pub fn random_position(rng: &mut impl Rng, g: &Game, plies: u32) -> (BoardState, Side) {
    let mut s = initial(&g.inst);
    let mut side = Side::Black;
    for _ in 0..plies {
        let next = successors(&g.dom, &s, side);
        if next.is_empty() {
            break;
        }
        let t = next[rng.random_range(0..next.len())].1;
        if won(g.inst.goals(side), &t) {
            break;
        }
        s = t;
        side = side.opponent();
    }
    (s, side)
}

// ---- circuits ---------------------------------------------------------------

/// A random circuit over `vars` inputs with up to `gates` gates and a random
/// prefix covering every input.
pub fn random_circuit(rng: &mut StdRng, vars: usize, gates: usize) -> Circuit {
    let mut c = Circuit::new();
    let vs = c.add_vars("v", vars);
    let mut pool: Vec<_> = vs.iter().map(|&v| c.lit(v)).collect();
    for _ in 0..rng.random_range(1..=gates) {
        let pick = |rng: &mut StdRng, pool: &[bddl_core::circuit::Lit]| {
            let l = pool[rng.random_range(0..pool.len())];
            if rng.random_bool(0.4) {
                !l
            } else {
                l
            }
        };
        let a = pick(rng, &pool);
        let b = pick(rng, &pool);
        let g = match rng.random_range(0..4) {
            0 => c.and([a, b]),
            1 => c.or([a, b]),
            2 => c.xor(a, b),
            _ => {
                let d = pick(rng, &pool);
                c.and([a, b, d])
            }
        };
        pool.push(g);
    }
    let out = *pool.last().unwrap();
    c.set_output(if rng.random_bool(0.3) { !out } else { out });
    let mut start = 0;
    while start < vars {
        let len = rng.random_range(1..=vars - start);
        let q = if rng.random_bool(0.5) { Quant::Exists } else { Quant::Forall };
        c.push_block(q, format!("b{start}"), vs[start..start + len].to_vec());
        start += len;
    }
    c
}

/// Truth of a prenex CNF by enumeration; unlisted variables are existential
/// and innermost.
pub fn cnf_value(cnf: &Cnf) -> bool {
    let mut order: Vec<(Quant, u32)> = cnf
        .prefix
        .iter()
        .flat_map(|(q, vs)| vs.iter().map(move |&v| (*q, v)))
        .collect();
    for v in 1..=cnf.num_vars {
        if !order.iter().any(|&(_, u)| u == v) {
            order.push((Quant::Exists, v));
        }
    }
    let mut asg = vec![false; cnf.num_vars as usize + 1];
    fn go(cnf: &Cnf, order: &[(Quant, u32)], asg: &mut Vec<bool>) -> bool {
        let Some((&(q, v), rest)) = order.split_first() else {
            return cnf
                .clauses
                .iter()
                .all(|cl| cl.iter().any(|&l| asg[l.unsigned_abs() as usize] == (l > 0)));
        };
        let mut vals = [false, true].into_iter().map(|b| {
            asg[v as usize] = b;
            go(cnf, rest, asg)
        });
        match q {
            Quant::Exists => vals.any(|x| x),
            Quant::Forall => vals.all(|x| x),
        }
    }
    go(cnf, &order, &mut asg)
}

// ---- adversary --------------------------------------------------------------

/// Play every White line against the oracle strategy, plus one illegal
/// attempt per position, replaying from the start each time. Returns the
/// number of finished plays, or the first line Black did not win.
pub fn every_white_line(r: &Arc<Rules>) -> Result<usize, String> {
    fn walk(r: &Arc<Rules>, prefix: &mut Vec<Move>) -> Result<usize, String> {
        let s = replay(r.clone(), Mode::Validation, Box::new(OracleStrategy::new(r.clone())), prefix);
        match s.status() {
            Status::Finished(v) if v.black_wins() => Ok(1),
            Status::AwaitingWhite => {
                let mut leaves = 0;
                for mv in s.legal_white_moves() {
                    prefix.push(mv);
                    leaves += walk(r, prefix)?;
                    prefix.pop();
                }
                if let Some(bad) = illegal_white_move(r, s.state()) {
                    prefix.push(bad);
                    leaves += walk(r, prefix)?;
                    prefix.pop();
                }
                Ok(leaves)
            }
            other => Err(format!("{other:?} after White line {prefix:?}")),
        }
    }
    walk(r, &mut Vec::new())
}

fn illegal_white_move(r: &Rules, s: &BoardState) -> Option<Move> {
    let actions = r.action_names(Side::White).len();
    (0..actions).find_map(|action| {
        (1..=r.height()).find_map(|y| {
            (1..=r.width()).find_map(|x| {
                let mv = Move { side: Side::White, action, x, y };
                r.apply(s, &mv).is_none().then_some(mv)
            })
        })
    })
}
