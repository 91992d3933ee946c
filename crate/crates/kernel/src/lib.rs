//! Exact kernel for Lie algebras graded by a rank-2 lattice and coordinatized
//! by Jordan tori: scalar tower, torus multiplication data, graded operators,
//! derivations and central extensions, root-space dimensions, and integral
//! basis verification.

pub mod chevalley;
pub mod eala;
pub mod jordan;
pub mod lattice;
pub mod linalg;
pub mod operator;
pub mod scalar;
pub mod tkk;
