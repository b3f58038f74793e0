use bddl_core::bddl::{parse_domain, parse_problem, GameDomain, GameInstance, Side};
use bddl_core::circuit::qbf::Expansion;
use bddl_core::circuit::{Lit, Quant, VarId};
use bddl_core::encoder::{encode, write_bits, Encoder};
use bddl_core::models;
use bddl_core::semantics::{BoardState, Cell, Move, Rules};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn load(name: &str) -> (GameDomain, GameInstance) {
    let m = models::find(name).unwrap();
    (parse_domain(m.domain).unwrap(), parse_problem(m.problem).unwrap())
}

fn clog2(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (k as f64).log2().ceil() as usize
    }
}

fn decode(bits: (bool, bool)) -> Cell {
    match bits {
        (true, _) => Cell::Open,
        (false, false) => Cell::Black,
        (false, true) => Cell::White,
    }
}

fn on_board(s: &BoardState, x: u64, y: u64) -> bool {
    (1..=u64::from(s.width())).contains(&x) && (1..=u64::from(s.height())).contains(&y)
}

struct Harness<'a> {
    e: Encoder<'a>,
    asg: Vec<bool>,
}

impl<'a> Harness<'a> {
    fn new(dom: &'a GameDomain, inst: &'a GameInstance) -> Self {
        let e = Encoder::new(dom, inst).unwrap();
        let asg = vec![false; e.circuit().var_count()];
        Harness { e, asg }
    }

    fn branches(&self) -> Vec<(u64, u64)> {
        let l = self.e.layout();
        let (nx, ny) = (1u64 << l.s_x.len(), 1u64 << l.s_y.len());
        (0..nx).flat_map(|x| (0..ny).map(move |y| (x, y))).collect()
    }

    fn branch(&mut self, sx: u64, sy: u64) {
        let l = self.e.layout().clone();
        write_bits(&mut self.asg, &l.s_x, sx);
        write_bits(&mut self.asg, &l.s_y, sy);
    }

    fn state(&mut self, i: u32, bits: (bool, bool)) {
        let l = self.e.layout();
        self.asg[l.open[i as usize - 1].index()] = bits.0;
        self.asg[l.white[i as usize - 1].index()] = bits.1;
    }

    fn eval(&self, g: Lit) -> bool {
        self.e.circuit().evaluate_lit(g, &self.asg).unwrap()
    }

    /// Bit patterns of state `i` accepted by `g`, other bits as they are.
    fn accepted(&mut self, g: Lit, i: u32) -> Vec<(bool, bool)> {
        let mut ok = Vec::new();
        for bits in [(false, false), (false, true), (true, false), (true, true)] {
            self.state(i, bits);
            if self.eval(g) {
                ok.push(bits);
            }
        }
        ok
    }
}

/// `nb` Black and `nw` White actions; action `k` checks `k mod 3` extra
/// cells to the right.
fn synthetic_domain(nb: usize, nw: usize) -> String {
    let action = |name: String, k: usize, colour: &str| {
        let mut pre = String::from("open(?x,?y)");
        for j in 1..=k {
            pre.push_str(&format!(" open(?x+{j},?y)"));
        }
        format!(":action {name}\n:parameters (?x,?y)\n:precondition ({pre})\n:effect ({colour}(?x,?y))\n")
    };
    let mut s = String::from("#blackactions\n");
    for k in 0..nb {
        s.push_str(&action(format!("b{k}"), k % 3, "black"));
    }
    s.push_str("#whiteactions\n");
    for k in 0..nw {
        s.push_str(&action(format!("w{k}"), k % 3, "white"));
    }
    s
}

fn synthetic_problem(m: u32, n: u32, d: u32, gb: &[usize], gw: &[usize]) -> String {
    let goal = |len: usize, colour: &str| {
        let subs: Vec<String> = (0..len).map(|j| format!("{colour}(?x,?y+{j})")).collect();
        format!("({})\n", subs.join(" "))
    };
    let mut s = format!("#boardsize {m} {n}\n#init ()\n#depth {d}\n#blackgoals\n");
    for &len in gb {
        s.push_str(&goal(len, "black"));
    }
    s.push_str("#whitegoals\n");
    for &len in gw {
        s.push_str(&goal(len, "white"));
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn prefix_matches_the_variable_table(
        m in 1u32..10,
        n in 1u32..10,
        nb in 1usize..6,
        nw in 1usize..6,
        gb in prop::collection::vec(1usize..5, 0..5),
        gw in prop::collection::vec(1usize..5, 0..5),
        d in 1u32..10,
    ) {
        let dom = parse_domain(&synthetic_domain(nb, nw)).unwrap();
        let inst = parse_problem(&synthetic_problem(m, n, d, &gb, &gw)).unwrap();
        let enc = encode(&dom, &inst).unwrap();
        let (xw, yw) = (clog2(m as usize + 1), clog2(n as usize + 1));
        let pmax = dom.white_actions.iter().map(|a| a.pre.len()).max().unwrap();
        let pmax_goal = gw.iter().copied().max().unwrap_or(0);

        let mut expected: Vec<(Quant, usize)> = Vec::new();
        for i in 1..=d {
            let stop = usize::from(i < d);
            if i % 2 == 1 {
                expected.push((Quant::Exists, clog2(nb) + xw + yw + stop));
            } else {
                expected.push((Quant::Forall, clog2(nw) + xw + yw + stop));
                expected.push((Quant::Exists, 1 + pmax));
            }
        }
        expected.push((Quant::Exists, xw + yw + clog2(gb.len())));
        expected.push((Quant::Forall, xw + yw + clog2(gw.len())));
        expected.push((Quant::Exists, clog2(pmax_goal)));
        expected.push((Quant::Forall, xw + yw));
        expected.push((Quant::Exists, 2 * (d as usize + 1)));

        let got: Vec<(Quant, usize)> = enc.circuit.prefix().iter().map(|b| (b.quant, b.vars.len())).collect();
        prop_assert_eq!(got, expected);
        prop_assert!(enc.circuit.check_prefix().is_ok());
        // Variables are numbered in prefix order.
        let order: Vec<u32> = enc.circuit.prefix().iter().flat_map(|b| b.vars.iter().map(|v| v.number())).collect();
        prop_assert_eq!(order, (1..=enc.circuit.var_count() as u32).collect::<Vec<_>>());
    }
}

/// A random play from the initial state, stopped at the first goal or at
/// `len` plies. `None` if a side runs out of moves first.
fn random_play(rules: &Rules, len: u32, rng: &mut StdRng) -> Option<(Vec<Move>, Vec<BoardState>)> {
    let mut s = rules.initial_state();
    let mut moves = Vec::new();
    let mut states = vec![s];
    for ply in 1..=len {
        let side = Side::of_ply(ply);
        let options = rules.legal_moves(&s, side);
        if options.is_empty() {
            return None;
        }
        let (mv, next) = options[rng.random_range(0..options.len())];
        moves.push(mv);
        states.push(next);
        s = next;
        if rules.won_by(&s, side) {
            break;
        }
    }
    Some((moves, states))
}

const SMALL: [&str; 10] = [
    "tic_3x3",
    "domino_3x3",
    "ell_3x3",
    "connect2_2x2",
    "connect2_3x3",
    "connect3_3x3",
    "domineering_2x2",
    "domineering_2x3",
    "domineering_3x2",
    "domineering_3x3",
];

#[test]
fn play_traces_force_the_oracle_trajectory() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    for name in SMALL {
        let (dom, base) = load(name);
        for d in [1, 3, 5] {
            let inst = base.with_depth(d);
            let rules = Rules::new(&dom, &inst).unwrap();
            for _ in 0..6 {
                let Some((moves, states)) = random_play(&rules, d, &mut rng) else {
                    continue;
                };
                let t = moves.len() as u32;
                let last_side = Side::of_ply(t);
                let decided = rules.won_by(&states[t as usize], last_side);
                // A play cut short on a White ply says nothing about Black.
                if last_side == Side::White && !decided {
                    continue;
                }
                check_trace(&dom, &inst, &moves, &states);
                check_truth(&dom, &inst, &moves, last_side == Side::Black && decided);
                checked += 1;
            }
        }
    }
    assert!(checked >= 60, "only {checked} plays checked");
}

fn check_trace(dom: &GameDomain, inst: &GameInstance, moves: &[Move], states: &[BoardState]) {
    let mut h = Harness::new(dom, inst);
    let init = h.e.build_initial();
    let mut gates = Vec::new();
    let layout = h.e.layout().clone();
    for (k, mv) in moves.iter().enumerate() {
        let i = k as u32 + 1;
        layout.assign_move(&mut h.asg, i, mv);
        let step = layout.step(i);
        let g = match mv.side {
            Side::Black => h.e.build_black_move(i).unwrap(),
            Side::White => {
                h.asg[step.legal.unwrap().index()] = true;
                for p in &step.pre_flags {
                    h.asg[p.index()] = true;
                }
                h.e.build_white_move(i).unwrap()
            }
        };
        gates.push(g);
    }
    h.asg.resize(h.e.circuit().var_count(), false);
    for (sx, sy) in h.branches() {
        h.branch(sx, sy);
        let cell = |s: &BoardState| if on_board(s, sx, sy) { s.get(sx as u32, sy as u32) } else { Cell::Open };
        let mut ok = h.accepted(init, 1);
        assert!(ok.iter().all(|&b| decode(b) == cell(&states[0])) && !ok.is_empty());
        for (k, &g) in gates.iter().enumerate() {
            let i = k as u32 + 1;
            h.state(i, ok[0]);
            ok = h.accepted(g, i + 1);
            let want = cell(&states[k + 1]);
            assert!(
                !ok.is_empty() && ok.iter().all(|&b| decode(b) == want),
                "{moves:?}: step {} branch ({sx},{sy}) gave {ok:?}, expected {want:?}",
                i + 1
            );
        }
    }
}

fn check_truth(dom: &GameDomain, inst: &GameInstance, moves: &[Move], black_wins: bool) {
    let enc = encode(dom, inst).unwrap();
    let mut x = Expansion::new(&enc.circuit).unwrap();
    let mut fix = |v: VarId, b: bool| assert!(x.fix(v, b));
    let t = moves.len();
    for (k, mv) in moves.iter().enumerate() {
        let step = enc.layout.step(k as u32 + 1);
        let mut asg = vec![false; enc.circuit.var_count()];
        enc.layout.assign_move(&mut asg, k as u32 + 1, mv);
        for v in step.action.iter().chain(&step.x).chain(&step.y) {
            fix(*v, asg[v.index()]);
        }
        if let Some(gs) = step.gamestop {
            fix(gs, k + 1 == t);
        }
        if let Some(l) = step.legal {
            fix(l, true);
            for &p in &step.pre_flags {
                fix(p, true);
            }
        }
    }
    assert_eq!(x.solve(), black_wins, "{moves:?}");
}

#[test]
fn illegal_white_moves_are_vacuous() {
    let mut rng = StdRng::seed_from_u64(11);
    for name in ["tic_3x3", "connect3_3x3", "domineering_3x3", "ell_3x3"] {
        let (dom, base) = load(name);
        let inst = base.with_depth(3);
        let rules = Rules::new(&dom, &inst).unwrap();
        let s0 = rules.initial_state();
        let black = rules.legal_moves(&s0, Side::Black);
        let (_, s) = black[rng.random_range(0..black.len())];
        let mut h = Harness::new(&dom, &inst);
        let mw = h.e.build_white_move(2).unwrap();
        let turn = h.e.build_turn(2).unwrap();
        let legal = h.e.white_legal(2);
        h.asg.resize(h.e.circuit().var_count(), false);
        let layout = h.e.layout().clone();
        let step = layout.step(2).clone();
        let indicators: Vec<VarId> = std::iter::once(step.legal.unwrap()).chain(step.pre_flags.iter().copied()).collect();
        let cell_bits = |sx: u64, sy: u64| match on_board(&s, sx, sy).then(|| s.get(sx as u32, sy as u32)) {
            Some(Cell::Black) => (false, false),
            Some(Cell::White) => (false, true),
            _ => (true, false),
        };
        let (na, nx, ny) = (1u32 << step.action.len(), 1u32 << step.x.len(), 1u32 << step.y.len());
        let mut illegal = 0;
        for a in 0..na {
            for x in 0..nx {
                for y in 0..ny {
                    let mv = Move { side: Side::White, action: a as usize, x, y };
                    if rules.apply(&s, &mv).is_some() {
                        continue;
                    }
                    illegal += 1;
                    layout.assign_move(&mut h.asg, 2, &mv);
                    let mut consistent = 0;
                    for combo in 0..1u64 << indicators.len() {
                        write_bits(&mut h.asg, &indicators, combo);
                        let fits = h.branches().into_iter().all(|(sx, sy)| {
                            h.branch(sx, sy);
                            h.state(2, cell_bits(sx, sy));
                            !h.accepted(mw, 3).is_empty()
                        });
                        if !fits {
                            continue;
                        }
                        consistent += 1;
                        assert!(!h.eval(legal), "{name}: {mv:?} looks legal");
                        for (sx, sy) in h.branches() {
                            for _ in 0..8 {
                                for v in 0..h.asg.len() {
                                    if !indicators.iter().chain(&step.action).chain(&step.x).chain(&step.y).any(|w| w.index() == v) {
                                        h.asg[v] = rng.random();
                                    }
                                }
                                h.branch(sx, sy);
                                h.state(2, cell_bits(sx, sy));
                                assert!(h.eval(turn), "{name}: {mv:?} in branch ({sx},{sy})");
                            }
                        }
                    }
                    assert!(consistent > 0, "{name}: no indicator values fit {mv:?}");
                }
            }
        }
        assert!(illegal > 0);
    }
}

#[test]
fn encoding_grows_linearly_with_depth() {
    let (dom, inst) = load("tic_5x4");
    let counts: Vec<(usize, usize)> = [3, 5, 7, 9]
        .iter()
        .map(|&d| {
            let enc = encode(&dom, &inst.with_depth(d)).unwrap();
            (enc.circuit.gate_count(), enc.circuit.var_count())
        })
        .collect();
    let gate_steps: Vec<i64> = counts.windows(2).map(|w| w[1].0 as i64 - w[0].0 as i64).collect();
    let var_steps: Vec<i64> = counts.windows(2).map(|w| w[1].1 as i64 - w[0].1 as i64).collect();
    assert!(gate_steps.iter().all(|&s| s == gate_steps[0] && s > 0), "{counts:?}");
    assert!(var_steps.iter().all(|&s| s == var_steps[0] && s > 0), "{counts:?}");
}

#[test]
fn small_instances_agree_with_the_oracle() {
    for name in ["domineering_2x2", "connect2_2x2", "domino_3x3"] {
        let (dom, base) = load(name);
        for d in 1..=4 {
            let inst = base.with_depth(d);
            let oracle = bddl_core::semantics::solve(&dom, &inst).unwrap().black_wins;
            let enc = encode(&dom, &inst).unwrap();
            let qbf = bddl_core::circuit::qbf::solve_qbf(&enc.circuit).unwrap();
            assert_eq!(qbf, oracle, "{name} at depth {d}");
        }
    }
}
