//! Satisfiability checking for linear temporal logic over finite traces
//! modulo first-order theories.

pub mod bench;
pub mod encoder;
pub mod formula;
pub mod parser;
pub mod semantics;
pub mod smt;
pub mod solver;
pub mod tableau;
