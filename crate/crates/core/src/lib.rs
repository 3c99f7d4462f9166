//! Resolution-based satisfiability checking for Coalition Logic.

pub mod bench;
pub mod cli;
pub mod engine;
pub mod formula;
pub mod semantics;
pub mod snf;
