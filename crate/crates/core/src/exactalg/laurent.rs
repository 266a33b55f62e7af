//! Truncated formal Laurent series over a [`Ring`].
//!
//! A value represents `sum_{e >= min_exp} coeffs[e - min_exp] * t^e` plus
//! an unknown tail `O(t^trunc)`. Every operation propagates the guaranteed
//! truncation order: binary operations take the minimum, multiplication
//! accounts for the order shift of the partner series, so precision is
//! never silently overstated.

use super::ring::{Ring, Scalar};

#[derive(Clone, PartialEq)]
pub struct Laurent<C: Ring> {
    min_exp: i64,
    coeffs: Vec<C>,
    trunc: i64,
}

impl<C: Ring> std::fmt::Debug for Laurent<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (e, c) in self.iter() {
            if !c.is_zero() {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({c:?})t^{e}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.trunc)
    }
}

impl<C: Ring> Laurent<C> {
    pub fn new(min_exp: i64, coeffs: Vec<C>, trunc: i64) -> Self {
        let mut s = Laurent { min_exp, coeffs, trunc };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        // Drop terms at or beyond the truncation order.
        if self.min_exp < self.trunc {
            let keep = (self.trunc - self.min_exp) as usize;
            self.coeffs.truncate(keep);
        } else {
            self.coeffs.clear();
        }
        // Strip leading zeros.
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i64;
        }
        while self.coeffs.last().is_some_and(C::is_zero) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.min_exp = 0;
        }
    }

    pub fn zero(trunc: i64) -> Self {
        Laurent { min_exp: 0, coeffs: Vec::new(), trunc }
    }

    pub fn term(c: C, exp: i64, trunc: i64) -> Self {
        Self::new(exp, vec![c], trunc)
    }

    pub fn one(trunc: i64) -> Self {
        Self::term(C::one(), 0, trunc)
    }

    /// The variable `t`.
    pub fn t(trunc: i64) -> Self {
        Self::term(C::one(), 1, trunc)
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// True when no nonzero coefficient is known (the series may still have
    /// a tail beyond the truncation order).
    pub fn is_zero_to_trunc(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact order of the series, when a nonzero coefficient is known.
    pub fn order(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.min_exp)
        }
    }

    /// Lower bound for the order usable in truncation bookkeeping.
    pub fn order_lb(&self) -> i64 {
        self.order().unwrap_or(self.trunc)
    }

    pub fn coeff(&self, e: i64) -> C {
        if e < self.min_exp {
            return C::zero();
        }
        let i = (e - self.min_exp) as usize;
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading(&self) -> Option<(&C, i64)> {
        self.coeffs.first().map(|c| (c, self.min_exp))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().enumerate().map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    /// Restrict to a (possibly smaller) truncation order.
    pub fn truncate(&self, trunc: i64) -> Self {
        Self::new(self.min_exp, self.coeffs.clone(), self.trunc.min(trunc))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        if self.coeffs.is_empty() {
            return rhs.truncate(trunc);
        }
        if rhs.coeffs.is_empty() {
            return self.truncate(trunc);
        }
        let lo = self.min_exp.min(rhs.min_exp);
        let hi = (self.min_exp + self.coeffs.len() as i64).max(rhs.min_exp + rhs.coeffs.len() as i64);
        let mut out = Vec::with_capacity((hi - lo) as usize);
        for e in lo..hi {
            out.push(self.coeff(e).add(&rhs.coeff(e)));
        }
        Self::new(lo, out, trunc)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Laurent {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(C::neg).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.min_exp, self.coeffs.iter().map(|x| x.mul(c)).collect(), self.trunc)
    }

    /// Multiply by `c * t^e`.
    pub fn mul_term(&self, c: &C, e: i64) -> Self {
        Self::new(
            self.min_exp + e,
            self.coeffs.iter().map(|x| x.mul(c)).collect(),
            self.trunc.saturating_add(e),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        // The unknown tail of one factor enters at its truncation order
        // shifted by the order of the other factor.
        let trunc = (self.trunc.saturating_add(rhs.order_lb()))
            .min(rhs.trunc.saturating_add(self.order_lb()));
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero(trunc);
        }
        let lo = self.min_exp + rhs.min_exp;
        let n = ((trunc - lo).max(0)) as usize;
        let mut out = vec![C::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(lo, out, trunc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(i64::MAX);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; requires a known leading coefficient that is
    /// invertible in the ring.
    pub fn inv(&self) -> Option<Self> {
        let (lead, ord) = self.leading()?;
        let lead_inv = C::one().exact_div(lead)?;
        // Normalize to a unit power series u = 1 + v, invert, shift back.
        let width = (self.trunc - ord) as usize;
        let mut u = vec![C::zero(); width];
        for (i, c) in self.coeffs.iter().enumerate() {
            u[i] = c.mul(&lead_inv);
        }
        let mut b = vec![C::zero(); width];
        b[0] = C::one();
        for n in 1..width {
            let mut s = C::zero();
            for k in 1..=n {
                if !u[k].is_zero() && !b[n - k].is_zero() {
                    s = s.add(&u[k].mul(&b[n - k]));
                }
            }
            b[n] = s.neg();
        }
        let coeffs: Vec<C> = b.into_iter().map(|c| c.mul(&lead_inv)).collect();
        Some(Self::new(-ord, coeffs, self.trunc - 2 * ord))
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Laurent<D> {
        Laurent::new(self.min_exp, self.coeffs.iter().map(f).collect(), self.trunc)
    }
}

impl<C: Scalar> Laurent<C> {
    /// Compose `self(g)` where `ord(g) >= 1` and `self` has no negative
    /// exponents.
    pub fn compose(&self, g: &Self) -> Self {
        assert!(self.min_exp >= 0 || self.coeffs.is_empty(), "composition needs a power series");
        assert!(g.order_lb() >= 1, "inner series must vanish at 0");
        let gord = g.order_lb();
        // Unknown tail of self enters at exponent >= trunc(self) * ord(g);
        // unknown tail of g enters at >= trunc(g) through the linear term.
        let trunc = g.trunc.min(self.trunc.saturating_mul(gord.max(1)));
        let mut out = Self::zero(trunc);
        let mut pw = Self::one(trunc);
        let mut prev_e = 0i64;
        for (e, c) in self.iter() {
            for _ in prev_e..e {
                pw = pw.mul(g);
            }
            prev_e = e;
            out = out.add(&pw.scale(c));
        }
        out
    }

    pub fn to_complex(&self) -> Laurent<num_complex::Complex64> {
        self.map(|c| c.to_complex())
    }
}
