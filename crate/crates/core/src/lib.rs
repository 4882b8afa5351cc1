//! Symbolic construction of the intertwining algebra attached to the cuspidal
//! support of a classical p-adic group, realized as an affine Hecke algebra
//! with explicit (possibly unequal) parameters.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`langlands`] reads a combinatorial descriptor of the cuspidal support
//!    (group type, general-linear blocks with their orbit data, Jordan-block
//!    multiset of the anchor parameter) and classifies each block, computing
//!    the integers that drive reducibility.
//! 2. [`rootdatum`] turns the classification into a based root datum on the
//!    cocharacter lattice together with the parameter exponents carried by
//!    each simple root.
//! 3. [`weyl`] implements the finite reflection group of the datum as
//!    blockwise signed permutations, split into its Coxeter part and the
//!    diagram-automorphism part.
//! 4. [`hecke`] builds the algebra itself: elements in the normal form
//!    `coefficient * phi_chi * J_r * T_w`, exact normal-form multiplication,
//!    defining-relation verification, central idempotents, and the `q -> 1`
//!    degeneration onto a twisted group algebra.
//!
//! All arithmetic is exact, over cyclotomic extensions of the rationals with
//! a formal square root `v` of the residue cardinality `q` ([`arith`]).

pub mod arith;
pub mod hecke;
pub mod langlands;
pub mod rootdatum;
pub mod weyl;
