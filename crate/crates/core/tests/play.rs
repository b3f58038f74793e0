mod common;

use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use bddl_core::bddl::{parse_domain, parse_problem, Side};
use bddl_core::models;
use bddl_core::play::{replay, Mode, OracleStrategy, PlaySession, Status, StrategyProvider};
use bddl_core::semantics::{BoardState, Move, Rules};

fn rules(domain: &str, problem: &str, depth: u32) -> Arc<Rules> {
    let dom = parse_domain(domain).unwrap();
    let inst = parse_problem(problem).unwrap().with_depth(depth);
    Arc::new(Rules::new(&dom, &inst).unwrap())
}

#[test]
fn oracle_strategy_beats_every_white_line() {
    let cases = [
        ("domineering_2x2", models::DOMINEERING_DOMAIN, models::DOMINEERING_2X2_PROBLEM, 2),
        // Three rows by two columns.
        ("domineering_2x3", models::DOMINEERING_DOMAIN, models::DOMINEERING_2X3_PROBLEM, 4),
        ("connect2_2x2", models::CONNECT_DOMAIN, models::CONNECT2_2X2_PROBLEM, 3),
        ("domino_3x3", models::POSITIONAL_DOMAIN, models::DOMINO_3X3_PROBLEM, 3),
        ("ell_3x3", models::POSITIONAL_DOMAIN, models::ELL_3X3_PROBLEM, 5),
        ("tic_5x4", models::POSITIONAL_DOMAIN, models::TIC_5X4_PROBLEM, 5),
    ];
    for (name, dom, prob, d) in cases {
        let r = rules(dom, prob, d);
        assert!(PlaySession::start(r.clone(), Mode::Validation).is_ok(), "{name}");
        let leaves = common::every_white_line(&r).unwrap();
        assert!(leaves > 0, "{name}");
    }
}

/// Black plays uniformly at random among its legal moves.
struct RandomBlack {
    rules: Arc<Rules>,
    rng: StdRng,
}

impl StrategyProvider for RandomBlack {
    fn name(&self) -> &str {
        "random"
    }

    fn black_move(&mut self, s: &BoardState, _: u32) -> Option<Move> {
        let moves = self.rules.legal_moves(s, Side::Black);
        (!moves.is_empty()).then(|| moves[self.rng.random_range(0..moves.len())].0)
    }
}

#[test]
fn session_legality_matches_the_rules() {
    let mut rng = StdRng::seed_from_u64(11);
    for m in models::all() {
        let dom = parse_domain(m.domain).unwrap();
        let inst = parse_problem(m.problem).unwrap();
        let depth = inst.depth.max(2);
        let r = Arc::new(Rules::new(&dom, &inst.with_depth(depth)).unwrap());
        let actions = r.action_names(Side::White).len();
        let mut attempts = 0;
        // Some instances end before White ever moves.
        for _ in 0..2000 {
            if attempts >= 1000 {
                break;
            }
            let provider = RandomBlack { rules: r.clone(), rng: StdRng::seed_from_u64(rng.random()) };
            let mut s = PlaySession::with_provider(r.clone(), Mode::Interactive, Box::new(provider));
            while s.status() == Status::AwaitingWhite && attempts < 1000 {
                attempts += 1;
                let legal = s.legal_white_moves();
                let before = *s.state();
                // Mostly in range, sometimes off the board or out of the action list.
                let mv = Move {
                    side: Side::White,
                    action: rng.random_range(0..=actions),
                    x: rng.random_range(0..=r.width() + 1),
                    y: rng.random_range(0..=r.height() + 1),
                };
                let accepted = s.submit_white_move(mv).is_ok();
                assert_eq!(accepted, legal.contains(&mv), "{}: {mv:?}", m.name);
                if !accepted {
                    assert_eq!(*s.state(), before);
                    // Keep the play going with a legal move.
                    let pick = legal[rng.random_range(0..legal.len())];
                    s.submit_white_move(pick).unwrap();
                }
            }
        }
    }
}

#[test]
fn replay_reproduces_the_transcript() {
    let r = rules(models::POSITIONAL_DOMAIN, models::TIC_5X4_PROBLEM, 5);
    let mut rng = StdRng::seed_from_u64(3);
    for mode in [Mode::Validation, Mode::Interactive] {
        for _ in 0..20 {
            let mut s = PlaySession::start(r.clone(), mode).unwrap();
            while s.status() == Status::AwaitingWhite {
                let mv = Move {
                    side: Side::White,
                    action: 0,
                    x: rng.random_range(1..=5),
                    y: rng.random_range(1..=4),
                };
                let _ = s.submit_white_move(mv);
            }
            let t = s.transcript();
            let again = replay(r.clone(), mode, Box::new(OracleStrategy::new(r.clone())), &t.white_inputs);
            assert_eq!(again.transcript(), t);
            assert!(t.status != Status::AwaitingWhite);
            assert_eq!(t.final_state(), *s.state());
        }
    }
}

#[test]
fn transcript_serialises_boards_as_rows() {
    let r = rules(models::POSITIONAL_DOMAIN, models::TIC_5X4_PROBLEM, 5);
    let s = PlaySession::start(r, Mode::Validation).unwrap();
    let json = serde_json::to_value(s.transcript()).unwrap();
    assert_eq!(json["initial"][0], ".....");
    assert_eq!(json["status"]["kind"], "awaiting_white");
    assert_eq!(json["history"][0]["kind"], "played");
    assert_eq!(json["history"][0]["move"]["side"], serde_json::json!(Side::Black));
}
