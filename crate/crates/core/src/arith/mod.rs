//! Exact coefficient arithmetic: cyclotomic scalars, Laurent polynomials in
//! the square root `v` of `q`, multivariate Laurent polynomials over the
//! cocharacter lattice, and their fraction field.

mod bfrac;
mod bpoly;
mod cyclotomic;
mod vlaurent;

pub use bfrac::BFrac;
pub use bpoly::{split_coord, BMonomial, BPoly};
pub use cyclotomic::{
    cyc_is_composite, cyclotomic_poly, euler_phi, rat, rat_int, CycScalar, Rational,
};
pub use vlaurent::VLaurent;
