//! Exact invariants of plane curve singularities: resolution dual graphs,
//! their discriminants, local Zariski decompositions, and the numerical
//! inequalities they impose on plane curves.

pub mod check;
pub mod cli;
pub mod exact;
pub mod generate;
pub mod inequalities;
pub mod puiseux;
pub mod resolution;
pub mod wtree;
pub mod zariski;
