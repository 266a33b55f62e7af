//! Coefficient abstractions shared by the polynomial and series towers.
//!
//! [`Ring`] is the minimal interface for subresultant sequences and exact
//! division; [`Scalar`] extends it with field inversion and a complex
//! embedding so series and polynomial code can run over exact Q(w)
//! coefficients and over `Complex64` through one code path.

use num_complex::Complex64;
use num_traits::Zero;

use super::qomega::QOmega;

/// Commutative ring with exact division.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact quotient `self / rhs` if it exists in the ring.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
}

/// Field scalars usable as series/polynomial coefficients in both the exact
/// and the floating mode.
pub trait Scalar: Ring {
    fn inv(&self) -> Option<Self>;
    fn from_int(n: i64) -> Self;
    fn from_frac(n: i64, d: i64) -> Self;
    /// Embedding into the complex numbers (w -> 1/sqrt(3)).
    fn to_complex(&self) -> Complex64;
    /// Designated k-th root if available in the domain. Exact scalars may
    /// return `None` (root leaves the field); complex scalars use the
    /// principal branch and only fail at zero divisor corner cases.
    fn kth_root(&self, k: u32) -> Option<Self>;
    /// True for exact coefficient domains (drives exactness flags).
    const EXACT: bool;
}

impl Ring for QOmega {
    fn zero() -> Self {
        QOmega::zero()
    }
    fn one() -> Self {
        QOmega::one()
    }
    fn is_zero(&self) -> bool {
        QOmega::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self * &i)
    }
}

impl Scalar for QOmega {
    fn inv(&self) -> Option<Self> {
        QOmega::inv(self)
    }
    fn from_int(n: i64) -> Self {
        QOmega::from_int(n)
    }
    fn from_frac(n: i64, d: i64) -> Self {
        QOmega::from_frac(n, d)
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
    fn kth_root(&self, k: u32) -> Option<Self> {
        QOmega::kth_root(self, k)
    }
    const EXACT: bool = true;
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::ZERO
    }
    fn one() -> Self {
        Complex64::ONE
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
}

impl Scalar for Complex64 {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_frac(n: i64, d: i64) -> Self {
        Complex64::new(n as f64 / d as f64, 0.0)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn kth_root(&self, k: u32) -> Option<Self> {
        if Zero::is_zero(self) {
            return Some(Complex64::ZERO);
        }
        Some(self.powf(1.0 / k as f64))
    }
    const EXACT: bool = false;
}
