//! Sparse bivariate polynomials in `(c, a)`.
//!
//! Terms live in a `BTreeMap` keyed by `(deg_c, deg_a)`, which fixes the
//! canonical serialization order (deg_c, then deg_a, ascending) and keeps
//! every operation deterministic. No zero coefficients are stored.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::qomega::QOmega;
use super::ring::{Ring, Scalar};
use super::unipoly::UniPoly;

/// The two parameter variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    C,
    A,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::C => Var::A,
            Var::A => Var::C,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct Poly2<K: Scalar> {
    terms: BTreeMap<(u32, u32), K>,
}

/// Exact bivariate polynomials over Q(w).
pub type BiPoly = Poly2<QOmega>;
/// Complex-coefficient bivariate polynomials (numeric fallback).
pub type CPoly = Poly2<Complex64>;

impl<K: Scalar> std::fmt::Debug for Poly2<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((dc, da), coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff:?})")?;
            if *dc > 0 {
                write!(f, "*c^{dc}")?;
            }
            if *da > 0 {
                write!(f, "*a^{da}")?;
            }
        }
        Ok(())
    }
}

impl<K: Scalar> Poly2<K> {
    pub fn zero() -> Self {
        Poly2 { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(k: K) -> Self {
        let mut t = BTreeMap::new();
        if !k.is_zero() {
            t.insert((0, 0), k);
        }
        Poly2 { terms: t }
    }

    pub fn monomial(dc: u32, da: u32, k: K) -> Self {
        let mut t = BTreeMap::new();
        if !k.is_zero() {
            t.insert((dc, da), k);
        }
        Poly2 { terms: t }
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::C => Self::monomial(1, 0, K::one()),
            Var::A => Self::monomial(0, 1, K::one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&(0, 0)))
    }

    pub fn constant_value(&self) -> Option<&K> {
        if self.is_constant() {
            self.terms.get(&(0, 0))
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &K)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, dc: u32, da: u32) -> K {
        self.terms.get(&(dc, da)).cloned().unwrap_or_else(K::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(dc, da)| dc + da).max().unwrap_or(0)
    }

    pub fn deg_var(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|&(dc, da)| match v {
                Var::C => dc,
                Var::A => da,
            })
            .max()
            .unwrap_or(0)
    }

    fn insert_add(&mut self, key: (u32, u32), val: K) {
        if val.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.add(&val);
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, val);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.insert_add(*k, v.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.insert_add(*k, v.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly2 { terms: self.terms.iter().map(|(k, v)| (*k, v.neg())).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for ((dc1, da1), v1) in &self.terms {
            for ((dc2, da2), v2) in &rhs.terms {
                out.insert_add((dc1 + dc2, da1 + da2), v1.mul(v2));
            }
        }
        out
    }

    pub fn scale(&self, k: &K) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Poly2 { terms: self.terms.iter().map(|(key, v)| (*key, v.mul(k))).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, c: &K, a: &K) -> K {
        // Cached powers keep this linear in the support.
        let max_c = self.deg_var(Var::C) as usize;
        let max_a = self.deg_var(Var::A) as usize;
        let mut cpow = Vec::with_capacity(max_c + 1);
        let mut apow = Vec::with_capacity(max_a + 1);
        cpow.push(K::one());
        for i in 1..=max_c {
            cpow.push(cpow[i - 1].mul(c));
        }
        apow.push(K::one());
        for i in 1..=max_a {
            apow.push(apow[i - 1].mul(a));
        }
        let mut acc = K::zero();
        for ((dc, da), v) in &self.terms {
            acc = acc.add(&v.mul(&cpow[*dc as usize]).mul(&apow[*da as usize]));
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for ((dc, da), coeff) in &self.terms {
            let (e, key) = match v {
                Var::C => (*dc, (dc.wrapping_sub(1), *da)),
                Var::A => (*da, (*dc, da.wrapping_sub(1))),
            };
            if e == 0 {
                continue;
            }
            let mut val = K::zero();
            for _ in 0..e {
                val = val.add(coeff);
            }
            out.insert_add(key, val);
        }
        out
    }

    /// Top-degree homogeneous part.
    pub fn leading_form(&self) -> Self {
        let d = self.total_degree();
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|((dc, da), _)| dc + da == d)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// View as a univariate polynomial in `main` whose coefficients are
    /// univariate polynomials in the other variable.
    pub fn as_unipoly(&self, main: Var) -> UniPoly<UniPoly<K>> {
        let dm = self.deg_var(main) as usize;
        let other_deg = self.deg_var(main.other()) as usize;
        let mut rows: Vec<Vec<K>> = vec![vec![K::zero(); other_deg + 1]; dm + 1];
        for ((dc, da), v) in &self.terms {
            let (m, o) = match main {
                Var::C => (*dc as usize, *da as usize),
                Var::A => (*da as usize, *dc as usize),
            };
            rows[m][o] = v.clone();
        }
        UniPoly::new(rows.into_iter().map(UniPoly::new).collect())
    }

    pub fn from_unipoly(p: &UniPoly<UniPoly<K>>, main: Var) -> Self {
        let mut out = Self::zero();
        for (m, inner) in p.coeffs.iter().enumerate() {
            for (o, v) in inner.coeffs.iter().enumerate() {
                let key = match main {
                    Var::C => (m as u32, o as u32),
                    Var::A => (o as u32, m as u32),
                };
                out.insert_add(key, v.clone());
            }
        }
        out
    }

    /// Specialize one variable to a scalar, leaving a univariate polynomial
    /// in the other.
    pub fn specialize(&self, v: Var, value: &K) -> UniPoly<K> {
        let keep_deg = self.deg_var(v.other()) as usize;
        let mut coeffs = vec![K::zero(); keep_deg + 1];
        let max_spec = self.deg_var(v) as usize;
        let mut pows = Vec::with_capacity(max_spec + 1);
        pows.push(K::one());
        for i in 1..=max_spec {
            pows.push(pows[i - 1].mul(value));
        }
        for ((dc, da), coeff) in &self.terms {
            let (sdeg, kdeg) = match v {
                Var::C => (*dc as usize, *da as usize),
                Var::A => (*da as usize, *dc as usize),
            };
            coeffs[kdeg] = coeffs[kdeg].add(&coeff.mul(&pows[sdeg]));
        }
        UniPoly::new(coeffs)
    }

    /// Leading term in degree-lexicographic order (deg, then dc).
    fn deglex_leading(&self) -> Option<((u32, u32), &K)> {
        self.terms
            .iter()
            .max_by_key(|((dc, da), _)| (dc + da, *dc))
            .map(|(k, v)| (*k, v))
    }

    /// Exact division by leading-term reduction in deglex order.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let ((ldc, lda), lcoeff) = d.deglex_leading().unwrap();
        let mut rem = self.clone();
        let mut quo = Self::zero();
        while let Some(((rc, ra), rcoeff)) = rem.deglex_leading() {
            if rc < ldc || ra < lda {
                return None;
            }
            let q = rcoeff.exact_div(lcoeff)?;
            let mono = Self::monomial(rc - ldc, ra - lda, q);
            quo = quo.add(&mono);
            rem = rem.sub(&mono.mul(d));
        }
        Some(quo)
    }

    /// Pseudo-remainder of `self` by `curve` in the given variable:
    /// returns `(r, e)` with `lc^e * self = q*curve + r`,
    /// `deg_v(r) < deg_v(curve)`, `lc` the leading coefficient of the curve
    /// in that variable. `r = 0` certifies that `self` vanishes on
    /// `{curve = 0}` away from `{lc = 0}`.
    pub fn pseudo_rem_mod(&self, curve: &Self, v: Var) -> (Self, u32) {
        assert!(curve.deg_var(v) > 0, "curve must involve the reduction variable");
        let f = self.as_unipoly(v);
        let g = curve.as_unipoly(v);
        let (_, r, e) = f.pseudo_div(&g);
        (Self::from_unipoly(&r, v), e)
    }

    /// Embed coefficients into the complex numbers.
    pub fn to_cpoly(&self) -> CPoly {
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v.to_complex()))
                .filter(|(_, v)| !Ring::is_zero(v))
                .collect(),
        }
    }
}

impl BiPoly {
    /// gcd of two exact bivariate polynomials (primitive-PRS based),
    /// normalized so the deglex-leading coefficient is 1.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        // Reduce in the variable that appears in both; fall back to A.
        let v = if self.deg_var(Var::A) > 0 && other.deg_var(Var::A) > 0 {
            Var::A
        } else if self.deg_var(Var::C) > 0 && other.deg_var(Var::C) > 0 {
            Var::C
        } else {
            // One is univariate in C, the other in A (or constants):
            // the only common divisors are constants.
            return Self::one();
        };
        let g = self.as_unipoly(v).gcd_bi(&other.as_unipoly(v));
        Self::from_unipoly(&g, v).normalized()
    }

    /// Scale so the deglex-leading coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.deglex_leading() {
            None => Self::zero(),
            Some((_, lc)) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// True if the two polynomials agree up to a nonzero scalar.
    pub fn is_associate(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.normalized() == other.normalized()
    }

    /// Squarefree part with respect to the given variable (divide by
    /// gcd(f, df/dv)), normalized. Note: components free of `v` are
    /// divided out entirely; use [`BiPoly::squarefree_part_full`] to
    /// preserve the whole zero set.
    pub fn squarefree_part(&self, v: Var) -> Self {
        let d = self.derivative(v);
        if d.is_zero() {
            return self.normalized();
        }
        let g = self.gcd(&d);
        if g.is_constant() {
            return self.normalized();
        }
        self.exact_div(&g).map(|q| q.normalized()).unwrap_or_else(|| self.normalized())
    }

    /// True squarefree part: `f / gcd(f, df/da, df/dc)`, which keeps one
    /// copy of every irreducible component (same zero set, simple
    /// everywhere).
    pub fn squarefree_part_full(&self) -> Self {
        if self.is_zero() || self.is_constant() {
            return self.normalized();
        }
        let mut g = self.clone();
        for v in [Var::A, Var::C] {
            let d = self.derivative(v);
            if !d.is_zero() {
                g = g.gcd(&d);
            }
        }
        if g.is_constant() {
            return self.normalized();
        }
        self.exact_div(&g).map(|q| q.normalized()).unwrap_or_else(|| self.normalized())
    }

    pub fn eval_complex(&self, c: Complex64, a: Complex64) -> Complex64 {
        self.to_cpoly().eval(&c, &a)
    }

    /// Canonical JSON form: `{"terms": [[dc, da, "x", "y"], ...]}` with the
    /// basis coordinates as exact decimal strings of rationals.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|((dc, da), v)| {
                serde_json::json!([dc, da, v.x.to_string(), v.y.to_string()])
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }
}

impl<K: Scalar> Ring for Poly2<K> {
    fn zero() -> Self {
        Poly2::zero()
    }
    fn one() -> Self {
        Poly2::one()
    }
    fn is_zero(&self) -> bool {
        Poly2::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Poly2::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Poly2::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Poly2::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        Poly2::neg(self)
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        Poly2::exact_div(self, rhs)
    }
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::qomega::QOmega;

    fn c() -> BiPoly {
        BiPoly::var(Var::C)
    }
    fn a() -> BiPoly {
        BiPoly::var(Var::A)
    }
    fn int(n: i64) -> BiPoly {
        BiPoly::constant(QOmega::from_int(n))
    }

    /// 12a^3 - c^3 - 6c
    fn symmetry() -> BiPoly {
        a().pow(3).scale(&QOmega::from_int(12)).sub(&c().pow(3)).sub(&c().scale(&QOmega::from_int(6)))
    }

    #[test]
    fn arithmetic_and_eval() {
        let f = symmetry();
        assert_eq!(f.eval(&QOmega::from_int(0), &QOmega::from_int(0)), QOmega::zero());
        // Generic point (1,1): 12 - 1 - 6 = 5
        assert_eq!(f.eval(&QOmega::from_int(1), &QOmega::from_int(1)), QOmega::from_int(5));
        assert_eq!(f.total_degree(), 3);
        assert_eq!(f.deg_var(Var::A), 3);
    }

    #[test]
    fn exact_division() {
        let f = symmetry();
        let g = c().pow(2).add(&a().scale(&QOmega::from_int(3))).add(&int(1));
        let prod = f.mul(&g);
        assert_eq!(prod.exact_div(&f).unwrap(), g);
        assert_eq!(prod.exact_div(&g).unwrap(), f);
        assert_eq!(prod.add(&int(1)).exact_div(&f), None);
    }

    #[test]
    fn pseudo_remainder_on_curve() {
        let curve = symmetry();
        // p = curve -> remainder 0
        let (r, _) = curve.pseudo_rem_mod(&curve, Var::A);
        assert!(r.is_zero());
        // p = a*curve + 1 -> constant times lc power
        let p = a().mul(&curve).add(&int(1));
        let (r, e) = p.pseudo_rem_mod(&curve, Var::A);
        assert!(!r.is_zero());
        assert_eq!(r.deg_var(Var::A), 0);
        assert!(e >= 1);
    }

    #[test]
    fn gcd_and_associates() {
        let f = symmetry();
        let g = f.scale(&QOmega::from_frac(-7, 3));
        assert!(f.is_associate(&g));
        let prod = f.mul(&c().add(&int(1)));
        let gg = prod.gcd(&f.mul(&a()));
        assert!(gg.is_associate(&f));
        // squarefree part of c^3 is c
        let c3 = c().pow(3);
        assert!(c3.squarefree_part(Var::C).is_associate(&c()));
    }

    #[test]
    fn unipoly_views_roundtrip() {
        let f = symmetry().mul(&a().add(&c()));
        for v in [Var::A, Var::C] {
            let u = f.as_unipoly(v);
            assert_eq!(BiPoly::from_unipoly(&u, v), f);
        }
    }

    #[test]
    fn specialization() {
        let f = symmetry();
        // at a = 1: 12 - c^3 - 6c
        let u = f.specialize(Var::A, &QOmega::from_int(1));
        assert_eq!(u.coeff(0), QOmega::from_int(12));
        assert_eq!(u.coeff(1), QOmega::from_int(-6));
        assert_eq!(u.coeff(3), QOmega::from_int(-1));
    }

    #[test]
    fn json_is_canonical() {
        let f = symmetry();
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(
            j,
            r#"{"terms":[[0,3,"12","0"],[1,0,"-6","0"],[3,0,"-1","0"]]}"#
        );
    }
}
