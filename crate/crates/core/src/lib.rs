//! Exact rational calculus of `n`-complements.
//!
//! - [`rounding`]: the operator `⌈x⌉ₙ` and condition (1) of an `n`-complement;
//! - [`hyperstandard`]: the sets `Φ(ℜ)`, `Γ(N, Φ)` and low approximations;
//! - [`adjunction`]: the affine correspondence of multiplicities `(r, l)`;
//! - [`indices`]: selection of complementary indices `n` with approximations `v_n`;
//! - [`dim1`]: complements and thresholds on curves;
//! - [`suites`]: seeded randomized property suites.
//!
//! All arithmetic is exact. Algorithms are generic over [`ExactScalar`];
//! [`Rat`] is the arbitrary-precision instance used by default.

pub mod adjunction;
pub mod dim1;
pub mod hyperstandard;
pub mod indices;
pub mod rounding;
pub mod scalar;
pub mod suites;

pub use scalar::{ExactScalar, ParseRatError};

/// Arbitrary-precision exact rational.
pub type Rat = num_rational::BigRational;
/// Word-sized rational for small, bounded inputs.
pub type Rat64 = num_rational::Ratio<i64>;
pub type Rat128 = num_rational::Ratio<i128>;

pub use rounding::MultiplicityVector;
pub type Multiplicities = MultiplicityVector<Rat>;
pub type Spec = hyperstandard::HyperstandardSpec<Rat>;
pub type Constants = adjunction::AdjunctionConstants<Rat>;
