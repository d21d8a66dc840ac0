//! Exact arithmetic and verification machinery for Rankin–Selberg type
//! Dirichlet series of half-integral weight forms in the Kohnen plus space.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: Bernoulli numbers, Kronecker symbols, discriminants, divisor functions.
//! - [`qexp`]: dense truncated q-expansions with exact rational coefficients.
//! - [`laurent`]: multivariate Laurent polynomials and rational functions.
//! - [`modforms`]: level-one Eisenstein series, Δ, Miller bases, Hecke operators, eigenforms.
//! - [`halfint`]: Cohen's H-function, index-one Jacobi forms and the plus space.
//! - [`maass`]: the index-shift operator algebra, Ψ polynomials and local Euler factor checks.
//! - [`analytic`]: floating-point evaluation of both sides of the Dirichlet series identity.
//! - [`report`]: verification reports shared by the verifiers and the CLI.

pub mod analytic;
pub mod arith;
pub mod error;
pub mod halfint;
pub mod laurent;
pub mod maass;
pub mod modforms;
pub mod qexp;
pub mod report;
pub mod serial;

pub use error::{Error, Result};

/// Arbitrary precision rational used throughout the exact layers.
pub type Rational = num_rational::BigRational;
