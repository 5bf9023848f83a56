//! Exact-arithmetic toolkit for deciding finiteness of finitely generated
//! matrix groups.
//!
//! The crate provides:
//!
//! * [`exactnum`] — arbitrary-precision rationals, prime fields F_p, rational
//!   function fields F_p(t), and their discrete valuations;
//! * [`linalg`] — dense exact linear algebra over all three fields, including
//!   a division-free characteristic polynomial;
//! * [`grouporder`] — exact matrix orders (eigenvalue orders over splitting
//!   fields in characteristic p, cyclotomic analysis over Q) and BFS group
//!   closure;
//! * [`kronecker`] — the finite set of monic integer polynomials with all
//!   roots on the unit circle, enumerated by two independent methods;
//! * [`building`] — a lattice-class model of the affine building attached to
//!   GL_d(Q) with a p-adic valuation: vertices, types, balls, group actions
//!   and fixed-vertex search;
//! * [`certify`] — the finiteness-certification pipeline tying it together.
//!
//! Everything is exact: there is no floating point anywhere in this crate.

#![forbid(unsafe_code)]

pub mod building;
pub mod certify;
mod error;
pub mod exactnum;
pub mod grouporder;
pub mod kronecker;
pub mod linalg;
pub mod selftest;

pub use error::{Error, Result};
pub use exactnum::{Field, PrimeFieldElem, RationalFunction, Scalar, Valuation};
pub use linalg::{MonicIntPoly, SquareMatrix};
