//! Exact-arithmetic verification toolkit for a family of elliptic K3
//! surfaces: weighted polynomials, elimination, integral lattices and
//! Weierstrass fibrations.

#![allow(clippy::needless_range_loop)]

pub mod eliminate;
pub mod exactalg;
pub mod families;
pub mod lattice;
pub mod par;
pub mod report;
pub mod rng;
pub mod verify;
pub mod weierstrass;
pub mod wpoly;
