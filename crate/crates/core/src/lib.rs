//! Exact arithmetic for Weierstrass elliptic curves over Q.
//!
//! The crate provides, entirely in exact rational arithmetic (with
//! arbitrary-precision enclosures for logarithmic quantities):
//!
//! - places of Q, normalized absolute values and the product formula
//!   ([`places`]);
//! - sparse multivariate polynomials with local heights, lengths and
//!   Gauss-Weil heights ([`poly`]);
//! - the projective group law on `Y^2 Z = 4 X^3 - g2 X Z^2 - g3 Z^3` through a
//!   complete system of three bidegree-(2,2) form families ([`curve`]);
//! - division polynomials and the degree-`n^2` form families representing
//!   multiplication by `n` ([`divpoly`]);
//! - the local power-series parametrization of the curve with its dual
//!   coefficient recurrences ([`series`]);
//! - projective v-adic distances, naive Weil heights and the Néron-Tate
//!   height with an explicit comparison band ([`heights`]);
//! - lattice-point counting in weighted simplices, cone coverings, bounded
//!   Néron-Tate enumeration and a Siegel-lemma kernel solver ([`counting`]);
//! - closed-form evaluation of the explicit point-counting bounds, parameter
//!   optimizers, approximation-system predicates and consistency censuses
//!   ([`bounds`]).

pub mod bounds;
pub mod counting;
pub mod curve;
pub mod divpoly;
pub mod error;
pub mod heights;
pub mod places;
pub mod poly;
pub mod real;
pub mod series;

pub use error::{Error, Result};
pub use places::{Place, Rational};
pub use real::{LogValue, Real, DEFAULT_PRECISION};
