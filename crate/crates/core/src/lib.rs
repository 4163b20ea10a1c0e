//! Exact-arithmetic log minimal model program for surfaces.
//!
//! A surface is described combinatorially: a rational intersection lattice
//! modelling `Num(X)`, a canonical class, a reference ample class, and a
//! declared list of irreducible curves. Every positivity statement is made
//! relative to that list (the *closed world*): the declared curves are taken
//! to generate the cone of curves.
//!
//! All arithmetic is exact over `BigRational`; there are no tolerances.

// Matrix code reads best with explicit index loops.
#![allow(clippy::needless_range_loop)]

pub mod birational;
pub mod citation;
mod error;
pub mod files;
mod linalg;
pub mod lattice;
mod lp;
pub mod mmp;
pub mod positivity;
pub mod rational;
pub mod singularities;
pub mod surface;

pub use citation::Citation;
pub use error::{Error, Result};
pub use lattice::{GramMatrix, QVec, QuotientProjection, Signature};
pub use rational::Rational;
pub use surface::{
    BoundaryDivisor, CurveRecord, FieldMode, LogSurface, NsLattice, RoundedDivisor, Violation,
};
