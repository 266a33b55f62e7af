//! Puiseux series and the three series lemmas used throughout: formal
//! inversion (`beta(alpha(t)) = t`), k-th roots (`beta^k = alpha`) and
//! right roots (`alpha(beta(t)) = t^k`). All three run over any coefficient
//! [`Scalar`], exact or complex, and propagate truncation orders.

use crate::error::{Error, Result};

use super::laurent::Laurent;
use super::qomega::QOmega;
use super::ring::Scalar;

/// Fractional-exponent formal series: exponent `e` of the inner Laurent
/// series stands for `t^(e/ram)`.
#[derive(Clone, PartialEq)]
pub struct PuiseuxSeries<K: Scalar> {
    pub ram: u32,
    pub inner: Laurent<K>,
}

impl<K: Scalar> std::fmt::Debug for PuiseuxSeries<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ram {}: {:?}", self.ram, self.inner)
    }
}

impl<K: Scalar> PuiseuxSeries<K> {
    pub fn new(ram: u32, inner: Laurent<K>) -> Self {
        assert!(ram >= 1);
        PuiseuxSeries { ram, inner }
    }

    pub fn from_laurent(inner: Laurent<K>) -> Self {
        PuiseuxSeries { ram: 1, inner }
    }

    pub fn zero(trunc: i64) -> Self {
        Self::from_laurent(Laurent::zero(trunc))
    }

    /// Monomial `c * t^(num/den)`; den must divide the ramification chosen.
    pub fn term(c: K, num: i64, den: u32, trunc_num: i64) -> Self {
        PuiseuxSeries { ram: den, inner: Laurent::term(c, num, trunc_num) }
    }

    /// Order as a rational (num, den) pair; `None` while zero to truncation.
    pub fn order(&self) -> Option<(i64, u32)> {
        self.inner.order().map(|e| (e, self.ram))
    }

    pub fn is_zero_to_trunc(&self) -> bool {
        self.inner.is_zero_to_trunc()
    }

    /// Rescale to a common ramification (must be a multiple of the current
    /// one).
    pub fn with_ram(&self, ram: u32) -> Self {
        assert!(ram % self.ram == 0);
        let f = (ram / self.ram) as i64;
        if f == 1 {
            return self.clone();
        }
        let trunc = self.inner.trunc().saturating_mul(f);
        let mut out = Laurent::zero(trunc);
        for (e, c) in self.inner.iter() {
            out = out.add(&Laurent::term(c.clone(), e * f, trunc));
        }
        PuiseuxSeries { ram, inner: out }
    }

    fn lift_pair(&self, rhs: &Self) -> (Laurent<K>, Laurent<K>, u32) {
        let ram = lcm(self.ram, rhs.ram);
        (self.with_ram(ram).inner, rhs.with_ram(ram).inner, ram)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (a, b, ram) = self.lift_pair(rhs);
        PuiseuxSeries { ram, inner: a.add(&b) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let (a, b, ram) = self.lift_pair(rhs);
        PuiseuxSeries { ram, inner: a.sub(&b) }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (a, b, ram) = self.lift_pair(rhs);
        PuiseuxSeries { ram, inner: a.mul(&b) }
    }

    pub fn scale(&self, c: &K) -> Self {
        PuiseuxSeries { ram: self.ram, inner: self.inner.scale(c) }
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries { ram: self.ram, inner: self.inner.neg() }
    }

    pub fn pow(&self, e: u32) -> Self {
        PuiseuxSeries { ram: self.ram, inner: self.inner.pow(e) }
    }

    pub fn inv(&self) -> Option<Self> {
        Some(PuiseuxSeries { ram: self.ram, inner: self.inner.inv()? })
    }

    pub fn map<L: Scalar>(&self, f: impl Fn(&K) -> L) -> PuiseuxSeries<L> {
        PuiseuxSeries { ram: self.ram, inner: self.inner.map(f) }
    }
}

impl PuiseuxSeries<QOmega> {
    pub fn to_complex(&self) -> PuiseuxSeries<num_complex::Complex64> {
        self.map(|c| c.to_complex())
    }

    /// Canonical JSON: Laurent terms plus ramification and lowest exponent.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .inner
            .iter()
            .map(|(e, c)| serde_json::json!([e, c.x.to_string(), c.y.to_string()]))
            .collect();
        serde_json::json!({
            "ram": self.ram,
            "lo": self.inner.order().unwrap_or(0),
            "trunc": self.inner.trunc(),
            "terms": terms,
        })
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// --- the three series lemmas ------------------------------------------------

/// Compositional inverse: given `alpha` with `alpha(0) = 0` and
/// `alpha'(0) != 0`, returns `beta` with `beta(alpha(t)) = t` (equivalently
/// `alpha(beta(t)) = t`) to the propagated truncation order.
///
/// The coefficient denominators only involve the linear coefficient of
/// `alpha` and denominators already present in its coefficients.
pub fn series_inverse<K: Scalar>(alpha: &Laurent<K>) -> Result<Laurent<K>> {
    match alpha.order() {
        Some(1) => {}
        Some(o) if o <= 0 => {
            return Err(Error::InvalidInput(format!("inverse needs order 1, got {o}")))
        }
        _ => return Err(Error::ZeroLinearTerm),
    }
    let a1 = alpha.coeff(1);
    let a1_inv = a1.inv().ok_or(Error::ZeroLinearTerm)?;
    let n_max = alpha.trunc();
    // b_n a_1^n + sum_{1 <= k < n} b_k [alpha^k]_n = 0
    let mut beta = Laurent::term(a1_inv.clone(), 1, n_max);
    let mut alpha_pows: Vec<Laurent<K>> = vec![alpha.clone()];
    let mut a1_pow = a1.clone();
    for n in 2..n_max {
        let prev = alpha_pows.last().unwrap().mul(alpha);
        alpha_pows.push(prev);
        a1_pow = a1_pow.mul(&a1);
        let mut s = K::zero();
        for (k, apow) in alpha_pows.iter().take(n as usize - 1).enumerate() {
            let bk = beta.coeff(k as i64 + 1);
            if !bk.is_zero() {
                s = s.add(&bk.mul(&apow.coeff(n)));
            }
        }
        let bn = s.neg().mul(&a1_pow.inv().expect("unit"));
        if !bn.is_zero() {
            beta = beta.add(&Laurent::term(bn, n, n_max));
        }
    }
    Ok(beta)
}

/// Formal k-th root: `beta` with `beta^k = alpha`, requiring `k | ord(alpha)`
/// and a designated k-th root of the leading coefficient in the scalar
/// domain (positive-real preference over Q(w); principal branch over C).
pub fn series_kth_root<K: Scalar>(alpha: &Laurent<K>, k: u32) -> Result<Laurent<K>> {
    assert!(k >= 1);
    let (lead, ord) = match alpha.leading() {
        Some((l, o)) => (l.clone(), o),
        None => return Ok(Laurent::zero(alpha.trunc())),
    };
    if ord.rem_euclid(k as i64) != 0 {
        return Err(Error::OrderMismatch { expected: k, found: ord });
    }
    let b0 = lead.kth_root(k).ok_or(Error::LeadingRootUnavailable)?;
    // alpha = lead * t^ord * (1 + w); beta = b0 t^(ord/k) (1+w)^(1/k).
    let unit = alpha
        .mul_term(&lead.inv().ok_or(Error::LeadingRootUnavailable)?, -ord)
        .sub(&Laurent::one(alpha.trunc() - ord));
    let width = unit.trunc();
    let mut acc = Laurent::one(width);
    let mut wpow = Laurent::one(width);
    let mut binom = K::one();
    for j in 1..width.max(1) {
        // binom *= (1/k - (j-1)) / j
        let num = K::from_int(1).sub(&K::from_int(k as i64).mul(&K::from_int(j - 1)));
        let denom = K::from_int(k as i64).mul(&K::from_int(j));
        binom = binom.mul(&num).mul(&denom.inv().expect("nonzero"));
        wpow = wpow.mul(&unit);
        if wpow.is_zero_to_trunc() {
            break;
        }
        acc = acc.add(&wpow.scale(&binom));
    }
    Ok(acc.mul_term(&b0, ord / (k as i64)))
}

/// Right root: `beta = t + O(t^2)` with `alpha(beta(t)) = t^k`, for `alpha`
/// of exact order `k`. `beta` is the unique tangent-to-identity solution
/// when the leading coefficient of `alpha` is 1.
pub fn series_right_root<K: Scalar>(alpha: &Laurent<K>, k: u32) -> Result<Laurent<K>> {
    assert!(k >= 1);
    let (lead, ord) = match alpha.leading() {
        Some((l, o)) => (l.clone(), o),
        None => return Err(Error::OrderMismatch { expected: k, found: i64::MAX }),
    };
    if ord != k as i64 {
        return Err(Error::OrderMismatch { expected: k, found: ord });
    }
    let b1 = lead
        .inv()
        .and_then(|li| li.kth_root(k))
        .ok_or(Error::LeadingRootUnavailable)?;
    let out_trunc = alpha.trunc() - k as i64 + 1;
    // The partial beta is a polynomial, hence exact: carry it at the full
    // truncation of alpha so residual coefficients below trunc(alpha) stay
    // readable, and restrict to the honest order at the end.
    let work_trunc = alpha.trunc();
    let mut beta = Laurent::term(b1.clone(), 1, work_trunc);
    // Correction scale: d/d(beta_n) [alpha(beta)]_{k+n-1} = k * lead * b1^(k-1)
    let mut b1_pow = K::one();
    for _ in 0..k - 1 {
        b1_pow = b1_pow.mul(&b1);
    }
    let slope = K::from_int(k as i64).mul(&lead).mul(&b1_pow);
    let slope_inv = slope.inv().ok_or(Error::LeadingRootUnavailable)?;
    for n in 2..out_trunc {
        let resid = alpha.compose(&beta);
        let r = resid.coeff(k as i64 + n - 1);
        if !r.is_zero() {
            beta = beta.add(&Laurent::term(r.neg().mul(&slope_inv), n, work_trunc));
        }
    }
    Ok(beta.truncate(out_trunc))
}
