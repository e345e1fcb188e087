//! Cusp combinatorics of Hilbert modular varieties of level `Gamma_1(n)` over
//! real quadratic fields, in exact arithmetic.

pub mod arith;
pub mod field;
pub mod ideal;
pub mod lattice;
pub mod abelian;
pub mod cyclotomic;
pub mod classgroup;
pub mod hecke;
pub mod cusps;
pub mod const_terms;
pub mod rigidity;
pub mod cli;
