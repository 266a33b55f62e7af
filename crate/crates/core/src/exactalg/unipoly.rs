//! Dense univariate polynomials over a [`Ring`], the carrier for
//! eliminations: pseudo-division, exact division, subresultant-PRS
//! resultants and gcds.
//!
//! Coefficients are stored by ascending degree with a nonzero leading
//! coefficient (the zero polynomial has no coefficients).

use super::qomega::QOmega;
use super::ring::{Ring, Scalar};

#[derive(Clone, PartialEq)]
pub struct UniPoly<R: Ring> {
    pub coeffs: Vec<R>,
}

impl<R: Ring> std::fmt::Debug for UniPoly<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs)
    }
}

impl<R: Ring> UniPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(R::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly { coeffs: vec![R::one()] }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: R, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![R::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    pub fn x() -> Self {
        Self::monomial(R::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn lc(&self) -> &R {
        self.coeffs.last().expect("lc of zero polynomial")
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add(&rhs.coeff(k)));
        }
        Self::new(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).sub(&rhs.coeff(k)));
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(R::neg).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let mut term = R::zero();
            for _ in 0..k {
                term = term.add(c);
            }
            out.push(term);
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Substitute another polynomial: `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Pseudo-division: returns `(q, r, e)` with
    /// `lc(d)^e * self = q * d + r`, `deg r < deg d`, and `e = deg self -
    /// deg d + 1` (or 0 when `deg self < deg d`).
    pub fn pseudo_div(&self, d: &Self) -> (Self, Self, u32) {
        assert!(!d.is_zero(), "pseudo-division by zero");
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return (Self::zero(), self.clone(), 0);
        }
        let e = (self.deg() - dd + 1) as u32;
        let lc = d.lc().clone();
        let mut rem = self.clone();
        let mut quo = Self::zero();
        let mut steps = 0u32;
        while !rem.is_zero() && rem.deg() >= dd {
            let k = rem.deg() - dd;
            let t = Self::monomial(rem.lc().clone(), k);
            quo = quo.scale(&lc).add(&t);
            rem = rem.scale(&lc).sub(&t.mul(d));
            steps += 1;
        }
        // Pad so the identity holds with exponent exactly e.
        for _ in steps..e {
            quo = quo.scale(&lc);
            rem = rem.scale(&lc);
        }
        (quo, rem, e)
    }

    /// Exact division; `None` if the quotient does not exist over `R`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let mut rem = self.clone();
        let mut quo = vec![R::zero(); self.deg() - d.deg() + 1];
        while !rem.is_zero() && rem.deg() >= d.deg() {
            let k = rem.deg() - d.deg();
            let c = rem.lc().exact_div(d.lc())?;
            quo[k] = c.clone();
            rem = rem.sub(&Self::monomial(c, k).mul(d));
        }
        if rem.is_zero() {
            Some(Self::new(quo))
        } else {
            None
        }
    }

    /// Divide every coefficient exactly by a ring element.
    pub fn exact_div_scalar(&self, c: &R) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.exact_div(c)?);
        }
        Some(Self::new(out))
    }

    /// Resultant by the subresultant pseudo-remainder sequence
    /// (Cohen, Algorithm 3.3.7). Returns 0 when the inputs share a factor.
    pub fn resultant(&self, other: &Self) -> R {
        if self.is_zero() || other.is_zero() {
            return R::zero();
        }
        let (mut a, mut b, mut sign_flip) = if self.deg() >= other.deg() {
            (self.clone(), other.clone(), false)
        } else {
            let flip = (self.deg() * other.deg()) % 2 == 1;
            (other.clone(), self.clone(), flip)
        };
        if b.is_constant() {
            let mut r = b.lc().clone();
            r = pow_ring(&r, a.deg() as u32);
            return if sign_flip { r.neg() } else { r };
        }
        let mut g = R::one();
        let mut h = R::one();
        loop {
            let delta = (a.deg() - b.deg()) as u32;
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                sign_flip = !sign_flip;
            }
            let (_, r, _) = a.pseudo_div(&b);
            if r.is_zero() {
                return R::zero();
            }
            let denom = g.mul(&pow_ring(&h, delta));
            let b_next = r
                .exact_div_scalar(&denom)
                .expect("subresultant PRS division must be exact");
            a = b;
            b = b_next;
            g = a.lc().clone();
            h = if delta == 0 {
                h
            } else {
                // h <- g^delta / h^(delta-1), exact in the ring
                pow_ring(&g, delta)
                    .exact_div(&pow_ring(&h, delta - 1))
                    .expect("subresultant h-update must be exact")
            };
            if b.is_constant() {
                break;
            }
        }
        // Final step: res = lc(b)^(deg a) / h^(deg a - 1), with sign.
        let da = a.deg() as u32;
        let num = pow_ring(b.lc(), da);
        let res = num
            .exact_div(&pow_ring(&h, da.saturating_sub(1)))
            .expect("final subresultant division must be exact");
        if sign_flip {
            res.neg()
        } else {
            res
        }
    }
}

fn pow_ring<R: Ring>(x: &R, e: u32) -> R {
    let mut acc = R::one();
    for _ in 0..e {
        acc = acc.mul(x);
    }
    acc
}

impl<R: Ring> Ring for UniPoly<R> {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::one()
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        UniPoly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        UniPoly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        UniPoly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        UniPoly::neg(self)
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        UniPoly::exact_div(self, rhs)
    }
}

// --- gcd layer -------------------------------------------------------------

impl<F: Scalar> UniPoly<F> {
    /// Make the leading coefficient one (field coefficients).
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().inv().expect("nonzero lc");
        self.scale(&inv)
    }

    /// Euclidean gcd over a field, returned monic.
    pub fn gcd_field(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let b_monic = b.monic();
            let (_, r, _) = a.pseudo_div(&b_monic);
            a = b_monic;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Evaluate through the complex embedding.
    pub fn eval_complex(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_complex();
        }
        acc
    }

    /// Coefficients embedded into Complex64, ascending degree.
    pub fn to_complex_coeffs(&self) -> Vec<num_complex::Complex64> {
        self.coeffs.iter().map(|c| c.to_complex()).collect()
    }
}

impl UniPoly<UniPoly<QOmega>> {
    /// Content: gcd of the coefficients (a polynomial in the inner
    /// variable), monic.
    pub fn content(&self) -> UniPoly<QOmega> {
        let mut g = UniPoly::<QOmega>::zero();
        for c in &self.coeffs {
            g = g.gcd_field(c);
            if !g.is_zero() && g.deg() == 0 {
                return UniPoly::one();
            }
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let cont = self.content();
        self.exact_div_scalar(&cont).expect("content divides")
    }

    /// Bivariate gcd via the primitive pseudo-remainder sequence.
    pub fn gcd_bi(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let cont = self.content().gcd_field(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.is_zero() {
                break;
            }
            if b.deg() == 0 {
                a = Self::one();
                break;
            }
            let (_, r, _) = a.pseudo_div(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        let pp = a.primitive_part();
        pp.scale(&cont)
    }
}
