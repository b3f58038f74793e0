//! The bundled model corpus, embedded at compile time.

pub const BREAKTHROUGH_DOMAIN: &str = include_str!("../../../models/breakthrough.domain.bddl");
pub const CONNECT_DOMAIN: &str = include_str!("../../../models/connect.domain.bddl");
pub const DOMINEERING_DOMAIN: &str = include_str!("../../../models/domineering.domain.bddl");
pub const EVADER_PURSUER_DOMAIN: &str = include_str!("../../../models/evader_pursuer.domain.bddl");
pub const KNIGHTTHROUGH_DOMAIN: &str = include_str!("../../../models/knightthrough.domain.bddl");
pub const POSITIONAL_DOMAIN: &str = include_str!("../../../models/positional.domain.bddl");

pub const BREAKTHROUGH_2X4_PROBLEM: &str =
    include_str!("../../../models/breakthrough_2x4.problem.bddl");
pub const CONNECT2_2X2_PROBLEM: &str = include_str!("../../../models/connect2_2x2.problem.bddl");
pub const CONNECT2_3X3_PROBLEM: &str = include_str!("../../../models/connect2_3x3.problem.bddl");
pub const CONNECT2_4X4_PROBLEM: &str = include_str!("../../../models/connect2_4x4.problem.bddl");
pub const CONNECT3_3X3_PROBLEM: &str = include_str!("../../../models/connect3_3x3.problem.bddl");
pub const CONNECT3_4X4_PROBLEM: &str = include_str!("../../../models/connect3_4x4.problem.bddl");
pub const CONNECT4_4X4_PROBLEM: &str = include_str!("../../../models/connect4_4x4.problem.bddl");
pub const CONNECT4_7X6_PROBLEM: &str = include_str!("../../../models/connect4_7x6.problem.bddl");
pub const DOMINEERING_2X2_PROBLEM: &str =
    include_str!("../../../models/domineering_2x2.problem.bddl");
pub const DOMINEERING_2X3_PROBLEM: &str =
    include_str!("../../../models/domineering_2x3.problem.bddl");
pub const DOMINEERING_2X4_PROBLEM: &str =
    include_str!("../../../models/domineering_2x4.problem.bddl");
pub const DOMINEERING_3X2_PROBLEM: &str =
    include_str!("../../../models/domineering_3x2.problem.bddl");
pub const DOMINEERING_3X3_PROBLEM: &str =
    include_str!("../../../models/domineering_3x3.problem.bddl");
pub const DOMINEERING_3X4_PROBLEM: &str =
    include_str!("../../../models/domineering_3x4.problem.bddl");
pub const DOMINEERING_4X4_PROBLEM: &str =
    include_str!("../../../models/domineering_4x4.problem.bddl");
pub const DOMINEERING_6X6_PROBLEM: &str =
    include_str!("../../../models/domineering_6x6.problem.bddl");
pub const DOMINO_3X3_PROBLEM: &str = include_str!("../../../models/domino_3x3.problem.bddl");
pub const ELL_3X3_PROBLEM: &str = include_str!("../../../models/ell_3x3.problem.bddl");
pub const EVADER_PURSUER_4X4_P2_3_PROBLEM: &str =
    include_str!("../../../models/evader_pursuer_4x4_p2_3.problem.bddl");
pub const EVADER_PURSUER_8X8_P2_3_PROBLEM: &str =
    include_str!("../../../models/evader_pursuer_8x8_p2_3.problem.bddl");
pub const EVADER_PURSUER_8X8_P3_4_PROBLEM: &str =
    include_str!("../../../models/evader_pursuer_8x8_p3_4.problem.bddl");
pub const KNIGHTTHROUGH_3X4_PROBLEM: &str =
    include_str!("../../../models/knightthrough_3x4.problem.bddl");
pub const TIC_3X3_PROBLEM: &str = include_str!("../../../models/tic_3x3.problem.bddl");
pub const TIC_5X4_PROBLEM: &str = include_str!("../../../models/tic_5x4.problem.bddl");

/// A named domain/problem pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Model {
    pub name: &'static str,
    pub domain: &'static str,
    pub problem: &'static str,
}

pub fn all() -> Vec<Model> {
    vec![
        Model {
            name: "breakthrough_2x4",
            domain: BREAKTHROUGH_DOMAIN,
            problem: BREAKTHROUGH_2X4_PROBLEM,
        },
        Model {
            name: "connect2_2x2",
            domain: CONNECT_DOMAIN,
            problem: CONNECT2_2X2_PROBLEM,
        },
        Model {
            name: "connect2_3x3",
            domain: CONNECT_DOMAIN,
            problem: CONNECT2_3X3_PROBLEM,
        },
        Model {
            name: "connect2_4x4",
            domain: CONNECT_DOMAIN,
            problem: CONNECT2_4X4_PROBLEM,
        },
        Model {
            name: "connect3_3x3",
            domain: CONNECT_DOMAIN,
            problem: CONNECT3_3X3_PROBLEM,
        },
        Model {
            name: "connect3_4x4",
            domain: CONNECT_DOMAIN,
            problem: CONNECT3_4X4_PROBLEM,
        },
        Model {
            name: "connect4_4x4",
            domain: CONNECT_DOMAIN,
            problem: CONNECT4_4X4_PROBLEM,
        },
        Model {
            name: "connect4_7x6",
            domain: CONNECT_DOMAIN,
            problem: CONNECT4_7X6_PROBLEM,
        },
        Model {
            name: "domineering_2x2",
            domain: DOMINEERING_DOMAIN,
            problem: DOMINEERING_2X2_PROBLEM,
        },
        Model {
            name: "domineering_2x3",
            domain: DOMINEERING_DOMAIN,
            problem: DOMINEERING_2X3_PROBLEM,
        },
        Model {
            name: "domineering_2x4",
            domain: DOMINEERING_DOMAIN,
            problem: DOMINEERING_2X4_PROBLEM,
        },
        Model {
            name: "domineering_3x2",
            domain: DOMINEERING_DOMAIN,
            problem: DOMINEERING_3X2_PROBLEM,
        },
        Model {
            name: "domineering_3x3",
            domain: DOMINEERING_DOMAIN,
            problem: DOMINEERING_3X3_PROBLEM,
        },
        Model {
            name: "domineering_3x4",
            domain: DOMINEERING_DOMAIN,
            problem: DOMINEERING_3X4_PROBLEM,
        },
        Model {
            name: "domineering_4x4",
            domain: DOMINEERING_DOMAIN,
            problem: DOMINEERING_4X4_PROBLEM,
        },
        Model {
            name: "domineering_6x6",
            domain: DOMINEERING_DOMAIN,
            problem: DOMINEERING_6X6_PROBLEM,
        },
        Model {
            name: "domino_3x3",
            domain: POSITIONAL_DOMAIN,
            problem: DOMINO_3X3_PROBLEM,
        },
        Model {
            name: "ell_3x3",
            domain: POSITIONAL_DOMAIN,
            problem: ELL_3X3_PROBLEM,
        },
        Model {
            name: "evader_pursuer_4x4_p2_3",
            domain: EVADER_PURSUER_DOMAIN,
            problem: EVADER_PURSUER_4X4_P2_3_PROBLEM,
        },
        Model {
            name: "evader_pursuer_8x8_p2_3",
            domain: EVADER_PURSUER_DOMAIN,
            problem: EVADER_PURSUER_8X8_P2_3_PROBLEM,
        },
        Model {
            name: "evader_pursuer_8x8_p3_4",
            domain: EVADER_PURSUER_DOMAIN,
            problem: EVADER_PURSUER_8X8_P3_4_PROBLEM,
        },
        Model {
            name: "knightthrough_3x4",
            domain: KNIGHTTHROUGH_DOMAIN,
            problem: KNIGHTTHROUGH_3X4_PROBLEM,
        },
        Model {
            name: "tic_3x3",
            domain: POSITIONAL_DOMAIN,
            problem: TIC_3X3_PROBLEM,
        },
        Model {
            name: "tic_5x4",
            domain: POSITIONAL_DOMAIN,
            problem: TIC_5X4_PROBLEM,
        },
    ]
}

pub fn find(name: &str) -> Option<Model> {
    all().into_iter().find(|m| m.name == name)
}
