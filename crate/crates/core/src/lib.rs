//! Exact evaluation of phase-free ZH diagrams, together with the formula
//! encodings and counting reductions that target them.

pub mod encoder;
pub mod evaluator;
pub mod formula;
pub mod graph;
pub mod random;
pub mod reductions;
pub mod scalar;
pub mod solvers;
