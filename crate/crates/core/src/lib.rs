//! Computable arithmetic dynamics for the cubic polynomial family
//!
//! ```text
//! P_{c,a}(z) = z^3/3 - (c/2) z^2 + a^3
//! ```
//!
//! parameterized by `(c, a)` in the affine plane. The family has the two
//! marked critical points `c0 = 0` and `c1 = c`. This crate makes the
//! standard objects attached to the family computable, in three evaluation
//! contexts (exact over the real quadratic field Q(w) with w^2 = 1/3,
//! complex floating point, and p-adic valuations):
//!
//! * exact polynomial, series and resultant arithmetic ([`exactalg`]),
//! * orbits, cycles and multipliers ([`dynamics`]),
//! * escape-rate (Green) functions, local and global heights ([`green`]),
//! * the Boettcher coordinate at infinity, its symbolic coefficients and
//!   their integrality bounds ([`boettcher`]),
//! * dynatomic polynomials and the `Per_m(lambda)` loci ([`periodic`]),
//! * post-critically finite parameter solving and certification ([`pcf`]),
//! * special-curve identities: symmetry locus, critical-orbit collisions,
//!   `Z(q, m, zeta)` probes and branch growth at infinity ([`classify`]),
//! * Newton polygons and multiplier valuations for unicritical maps
//!   ([`padicval`]),
//! * a desk-scale equidistribution experiment ([`equidist`]).
//!
//! Grid-shaped workloads run data-parallel through [`exec`] when the
//! `parallel` feature (default) is enabled, with a sequential fallback
//! otherwise; results are bit-identical either way.

pub mod error;
pub mod exec;
pub mod exactalg;
pub mod roots;
pub mod dynamics;
pub mod green;
pub mod boettcher;
pub mod periodic;
pub mod pcf;
pub mod classify;
pub mod padicval;
pub mod equidist;
pub mod selftest;

pub use error::{Error, Result};
pub use exactalg::qomega::{QOmega, Rat};
pub use exactalg::bipoly::BiPoly;
pub use exactalg::unipoly::UniPoly;
pub use exactalg::series::PuiseuxSeries;
pub use dynamics::CubicParam;
