//! BDDL board-game models: parsing, an explicit-state game oracle, a lifted
//! QBF encoder with QCIR and QDIMACS output, solver plumbing and a play service.

pub mod bddl;
pub mod circuit;
pub mod encoder;
pub mod models;
pub mod play;
pub mod semantics;
pub mod solver;
