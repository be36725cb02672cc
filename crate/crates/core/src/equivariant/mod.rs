//! Equivariant cohomology in localization form.
//!
//! Every torus weight is evaluated at `ε·λ₀` for a fixed generic
//! `λ₀ ∈ ℚⁿ`, so a class restricted to a fixed point becomes a rational
//! function of `α` with coefficients in `ℚ[x, ε]`. The `ε⁰` slice of a
//! final scalar is its nonequivariant limit.

pub mod alpha;
pub mod class;
pub mod factored;
pub mod sample;
pub mod scalar;

use thiserror::Error;

pub use alpha::{AlphaLaurent, AlphaPoly, AlphaRational};
pub use class::{
    class_from_divisor_poly, euler_t, integrate, integrate_expansions, nonequiv_limit,
    nonequiv_limit_scalar, DivisorPoly, LocalizedClass,
};
pub use factored::Factored;
pub use sample::WeightSample;
pub use scalar::ScalarPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquivError {
    #[error("degenerate weight sample: {0}")]
    DegenerateSample(String),
    #[error("negative ε powers survive (lowest exponent {0})")]
    EpsilonPoleResidue(i32),
    #[error("cannot expand in 1/α: leading denominator coefficient is not a monomial")]
    NonMonomialLeading,
}
