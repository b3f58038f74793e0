//! Pieces of the `bddl` binary that tests drive directly.

pub mod server;
pub mod source;
