//! Exact arithmetic kernel: big rationals, the real quadratic field Q(w)
//! with w^2 = 1/3, sparse bivariate polynomials in (c, a) with resultants
//! and curve-ideal reduction, univariate polynomial towers, and formal
//! Laurent/Puiseux series with composition, inversion, roots and
//! Newton-Puiseux expansion of curve branches at infinity.

pub mod qomega;
pub mod ring;
pub mod unipoly;
pub mod bipoly;
pub mod laurent;
pub mod series;
pub mod puiseux;

pub use qomega::{QOmega, Rat};
pub use ring::{Ring, Scalar};
pub use unipoly::UniPoly;
pub use bipoly::{BiPoly, CPoly, Var};
pub use laurent::Laurent;
pub use series::PuiseuxSeries;
pub use puiseux::{newton_puiseux, Branch, BranchCoeffs, InfinityCenter};

/// A place of Q: the Archimedean absolute value or a p-adic one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Place {
    Archimedean,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Self {
        assert!(is_prime(p), "finite place requires a prime, got {p}");
        Place::Finite(p)
    }
}

/// Trial-division primality, adequate for the word-sized primes used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
