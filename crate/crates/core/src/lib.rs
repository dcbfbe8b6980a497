//! Exact-arithmetic kernel for Frobenius phenomena on surface singularities.
//!
//! The crate is organized around five computational pillars:
//!
//! * [`graph`]: resolution dual graphs with exact intersection theory
//!   (negative definiteness, lattice determinants, discrepancies).
//! * [`classify`]: shape detection for the catalogue of graphs that occur
//!   for strongly F-regular surfaces, the strong F-regularity verdict,
//!   geometric-reducedness diagnosis, and tame quotient decomposition plans.
//! * [`p1`]: Frobenius-splitting tests for pairs on the projective line,
//!   both as closed-form tables and as an exact polynomial-coefficient
//!   oracle, together with the one-parameter supersingularity test.
//! * [`cartier`]: graded Cartier-operator calculus on truncated de Rham
//!   complexes of polynomial rings over a finite field.
//! * [`campana`]: counting combinatorics for sheaves of orbifold
//!   differentials attached to fractional boundary divisors.
//! * [`rdp`]: integrality certificates that exclude small residue
//!   characteristics via intersection inequalities against rational
//!   double point configurations.
//!
//! Everything is exact: field arithmetic is table-free modular arithmetic,
//! lattice computations use arbitrary-precision rationals, and no floating
//! point appears anywhere.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod campana;
pub mod cartier;
pub mod classify;
pub mod corpus;
pub mod exact;
pub mod gf;
pub mod graph;
pub mod linalg;
pub mod p1;
pub mod rdp;

pub use classify::{
    ClassifyError, GeomReducedness, ShapeClass, SfrVerdict, TamePlan, TameStep,
};
pub use graph::{DualGraph, GraphError, Vertex};
pub use p1::{P1Error, SplitAnswer};
