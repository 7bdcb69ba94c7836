//! Exact symbolic computation for q-deformed Clifford algebras.
//!
//! This crate implements, over an exact coefficient field ℚ(q, c)(s) with
//! s² = q + q⁻¹ (or its rational specializations), the family of
//! finite-dimensional q-deformed Clifford algebras attached to the standard
//! R-matrix of orthogonal type, together with:
//!
//! * normal-form rewriting and structure maps of the algebra
//!   ([`clifford`]),
//! * the braid/Birman–Wenzl–Murakami operators, antisymmetrizers and the
//!   q-exterior calculus on tensor powers ([`braid`], [`exterior`]),
//! * the quantum orthogonal group: its generators realized inside the
//!   Clifford algebra, relation verification, adjoint action, and spin
//!   representations ([`uq`]),
//! * cross-cutting verification suites used by the test-bed and the CLI
//!   ([`suites`]).
//!
//! Everything is exact: arbitrary-precision integers underneath, no
//! floating point anywhere. The intended working range is small rank
//! (N = 3…6), where all identities can be checked symbolically or at
//! exact rational specializations.

pub mod braid;
pub mod clifford;
pub mod error;
pub mod exterior;
pub(crate) mod linalg;
pub mod report;
pub mod scalar;
pub mod suites;
pub mod uq;

pub use error::{Error, Result};
pub use report::{CheckItem, CheckReport};
pub use scalar::{evaluate, CoeffCtx, EvalPoint, Field, NumCtx, QNum, Scalar, SymCtx};
