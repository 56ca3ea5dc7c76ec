//! Exact-arithmetic toolkit for central complex hyperplane arrangements.
//!
//! The library builds intersection lattices over cyclotomic fields Q(zeta_n)
//! and decides combinatorial structure on top of them: supersolvability,
//! nice (factored) partitions, inductive factorizations, and inductive
//! freeness. There is no floating point anywhere; every rank, every lattice
//! membership, and every verdict is computed in exact arithmetic.

pub mod arrangement;
pub mod catalog;
pub mod cli;
pub mod exactfield;
pub mod factorization;
