//! Exact computations for coloured fermionic vertex models, LLT polynomials
//! and the colour-sequence Markov chain attached to their Plancherel limit.

pub mod qfield;
pub mod model;
pub mod lattice;
pub mod colour;
pub mod arrays;
pub mod gue;
