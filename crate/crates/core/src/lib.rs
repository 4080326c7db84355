//! Exact computations on trinomial varieties and their torus actions of complexity one.

pub mod lattice;
pub mod linalg;
pub mod lnd;
pub mod orbit;
pub mod poly;
pub mod rigidity;
pub mod variety;
