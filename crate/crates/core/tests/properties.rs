mod common;

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use bddl_core::bddl::{Bounds, Side};
use bddl_core::circuit::arith::{adder, less_than, subtractor, BitVec};
use bddl_core::circuit::qbf::{naive_qbf, solve_qbf};
use bddl_core::circuit::qcir::{parse_qcir, to_qcir_string};
use bddl_core::circuit::qdimacs::tseitin;
use bddl_core::circuit::Circuit;
use bddl_core::semantics::{Oracle, Rules};

use common::Game;

#[test]
fn arithmetic_is_exact_up_to_width_four() {
    let cases = common::arithmetic_exhaustive(4).unwrap();
    assert!(cases > 3000, "{cases}");
}

fn value(c: &Circuit, v: &BitVec, asg: &[bool]) -> u64 {
    v.bits
        .iter()
        .enumerate()
        .map(|(i, &b)| u64::from(c.evaluate_lit(b, asg).unwrap()) << i)
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arithmetic_on_wide_vectors(w in 5usize..=16, a in any::<u64>(), k in any::<u64>()) {
        let top = 1u64 << w;
        let (a, k) = (a % top, k % top);
        let mut c = Circuit::new();
        let vars = c.add_vars("v", w);
        let v = BitVec::of_vars(&c, &vars);
        let sum = adder(&mut c, &v, k).unwrap();
        let diff = subtractor(&mut c, &v, k).unwrap();
        let lt = less_than(&mut c, &v, k);
        let asg: Vec<bool> = (0..w).map(|i| (a >> i) & 1 == 1).collect();
        prop_assert_eq!(value(&c, &sum, &asg), (a + k) % top);
        prop_assert_eq!(value(&c, &diff, &asg), (a + top - k) % top);
        prop_assert_eq!(c.evaluate_lit(lt, &asg).unwrap(), a < k);
    }

    #[test]
    fn bounds_are_exactly_the_safe_anchors(seed in any::<u64>(), w in 1u32..=9, h in 1u32..=9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let c = common::random_condition(&mut rng, w, h);
        prop_assert!(common::bounds_match(&c, w, h).is_ok(), "{:?}", common::bounds_match(&c, w, h));
    }

    #[test]
    fn bound_intersection_is_containment(seed in any::<u64>(), w in 1u32..=9, h in 1u32..=9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = Bounds::of_condition(&common::random_condition(&mut rng, w, h), w, h);
        let b = Bounds::of_condition(&common::random_condition(&mut rng, w, h), w, h);
        let both = a.intersect(&b);
        prop_assert!(both.is_within(&a) || both.is_empty());
        for (i, j) in Bounds::full(w, h).anchors() {
            prop_assert_eq!(both.contains(i, j), a.contains(i, j) && b.contains(i, j));
        }
    }

    #[test]
    fn qcir_round_trip_keeps_truth_tables(seed in any::<u64>(), vars in 1usize..=6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let c = common::random_circuit(&mut rng, vars, 8);
        let back = parse_qcir(&to_qcir_string(&c)).unwrap();
        let index: Vec<usize> = c
            .vars()
            .map(|v| back.vars().find(|u| back.var_name(*u) == v.number().to_string()).unwrap().index())
            .collect();
        let n = back.var_count();
        for bits in 0..1u32 << vars {
            let asg: Vec<bool> = (0..vars).map(|i| (bits >> i) & 1 == 1).collect();
            let mut asg_back = vec![false; n];
            for (i, &b) in asg.iter().enumerate() {
                asg_back[index[i]] = b;
            }
            prop_assert_eq!(c.evaluate(&asg).unwrap(), back.evaluate(&asg_back).unwrap());
        }
        prop_assert_eq!(naive_qbf(&c).unwrap(), naive_qbf(&back).unwrap());
    }

    #[test]
    fn expansion_matches_naive_evaluation(seed in any::<u64>(), vars in 1usize..=8) {
        let mut rng = StdRng::seed_from_u64(seed);
        let c = common::random_circuit(&mut rng, vars, 12);
        prop_assert_eq!(solve_qbf(&c).unwrap(), naive_qbf(&c).unwrap());
    }

    #[test]
    fn tseitin_is_equisatisfiable(seed in any::<u64>(), vars in 1usize..=5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let c = common::random_circuit(&mut rng, vars, 6);
        let cnf = tseitin(&c);
        prop_assume!(cnf.num_vars <= 16);
        prop_assert_eq!(common::cnf_value(&cnf), naive_qbf(&c).unwrap());
    }
}

fn games() -> &'static [Game] {
    static GAMES: OnceLock<Vec<Game>> = OnceLock::new();
    GAMES.get_or_init(|| common::small_models(12))
}

fn rules_at(g: &Game, depth: u32) -> Arc<Rules> {
    Arc::new(Rules::new(&g.dom, &g.inst.with_depth(depth)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    /// Moves only touch the cells their effects name, and match the
    /// definitions cell for cell.
    #[test]
    fn transitions_follow_the_definitions(seed in any::<u64>(), pick in any::<prop::sample::Index>(), plies in 0u32..6) {
        let games = games();
        let g = &games[pick.index(games.len())];
        let mut rng = StdRng::seed_from_u64(seed);
        let (s, side) = common::random_position(&mut rng, g, plies);
        let r = rules_at(g, 1);
        let ours = r.legal_moves(&s, side);
        let reference = common::successors(&g.dom, &s, side);
        prop_assert_eq!(&ours, &reference, "{}", g.name);
        prop_assert_eq!(r.won_by(&s, Side::Black), common::won(&g.inst.black_goals, &s));
        prop_assert_eq!(r.won_by(&s, Side::White), common::won(&g.inst.white_goals, &s));
        for (mv, t) in ours {
            let act = &g.dom.actions(side)[mv.action];
            let touched: Vec<(i64, i64)> = act
                .eff
                .iter()
                .map(|e| (e.x.resolve(i64::from(mv.x), s.width()), e.y.resolve(i64::from(mv.y), s.height())))
                .collect();
            for x in 1..=s.width() {
                for y in 1..=s.height() {
                    if !touched.contains(&(i64::from(x), i64::from(y))) {
                        prop_assert_eq!(s.get(x, y), t.get(x, y));
                    }
                }
            }
        }
    }

    /// The oracle agrees with plain minimax, and a win at depth d stays a
    /// win at every larger depth.
    #[test]
    fn oracle_matches_minimax_and_is_monotone(seed in any::<u64>(), pick in any::<prop::sample::Index>(), plies in 0u32..4, d in 1u32..=5) {
        let games: Vec<&Game> = games().iter().filter(|g| g.inst.cell_count() <= 9).collect();
        let g = games[pick.index(games.len())];
        let mut rng = StdRng::seed_from_u64(seed);
        let (s, side) = common::random_position(&mut rng, g, plies);
        let mut oracle = Oracle::new(rules_at(g, d));
        let ours = match side {
            Side::Black => oracle.black_to_move_wins(&s, d),
            Side::White => oracle.white_to_move_black_wins(&s, d),
        };
        prop_assert_eq!(ours, common::black_wins(&g.dom, &g.inst, &s, d, side), "{} d={}", g.name, d);
        let longer = match side {
            Side::Black => oracle.black_to_move_wins(&s, d + 1),
            Side::White => oracle.white_to_move_black_wins(&s, d + 1),
        };
        prop_assert!(!ours || longer);
    }
}
