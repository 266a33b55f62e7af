//! The coefficient field Q(w), w^2 = 1/3, over big rationals.
//!
//! Elements are stored as `x + y*w` with `x, y` reduced big rationals.
//! Multiplication follows from w^2 = 1/3, inversion from the field norm
//! `N(x + y*w) = x^2 - y^2/3` (nonzero for nonzero elements since 1/3 is
//! not a rational square), and `1/w = 3*w`. The Archimedean embedding sends
//! w to the positive root `1/sqrt(3)`, which makes the field totally real
//! and gives every element an exact sign and total order.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational; the reduced-fraction invariant is
/// maintained by `num_rational`.
pub type Rat = num_rational::BigRational;

/// Parse helpers for `Rat`.
pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0);
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// p-adic valuation of a nonzero rational; `None` for zero.
pub fn vp_rat(r: &Rat, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    Some(vp_int(r.numer(), &p) - vp_int(r.denom(), &p))
}

fn vp_int(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut k = 0i64;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(p);
        if r.is_zero() {
            k += 1;
            m = q;
        } else {
            return k;
        }
    }
}

/// Floor of the integer k-th root of `n`.
pub fn int_nth_root(n: &BigUint, k: u32) -> BigUint {
    n.nth_root(k)
}

/// Exact k-th root of a rational if one exists in Q. For even k the input
/// must be non-negative and the non-negative root is returned.
pub fn rat_kth_root(r: &Rat, k: u32) -> Option<Rat> {
    assert!(k >= 1);
    if r.is_zero() {
        return Some(Rat::zero());
    }
    if k == 1 {
        return Some(r.clone());
    }
    let neg = r.is_negative();
    if neg && k % 2 == 0 {
        return None;
    }
    let num = r.numer().abs().to_biguint().unwrap();
    let den = r.denom().to_biguint().unwrap();
    let rn = num.nth_root(k);
    let rd = den.nth_root(k);
    if rn.clone().pow(k) != num || rd.clone().pow(k) != den {
        return None;
    }
    let mut root = Rat::new(BigInt::from(rn), BigInt::from(rd));
    if neg {
        root = -root;
    }
    Some(root)
}

/// Element x + y*w of Q(w), w^2 = 1/3.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QOmega {
    pub x: Rat,
    pub y: Rat,
}

impl QOmega {
    pub fn new(x: Rat, y: Rat) -> Self {
        QOmega { x, y }
    }

    pub fn zero() -> Self {
        QOmega { x: Rat::zero(), y: Rat::zero() }
    }

    pub fn one() -> Self {
        QOmega { x: Rat::one(), y: Rat::zero() }
    }

    /// The generator w itself.
    pub fn omega() -> Self {
        QOmega { x: Rat::zero(), y: Rat::one() }
    }

    pub fn from_rat(x: Rat) -> Self {
        QOmega { x, y: Rat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_i64(n))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rat(rat(n, d))
    }

    /// `n/d * w`.
    pub fn omega_frac(n: i64, d: i64) -> Self {
        QOmega { x: Rat::zero(), y: rat(n, d) }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    /// Ring conjugation x + y*w -> x - y*w.
    pub fn conj(&self) -> Self {
        QOmega { x: self.x.clone(), y: -self.y.clone() }
    }

    /// Field norm to Q: x^2 - y^2/3. Zero only at zero.
    pub fn norm(&self) -> Rat {
        &self.x * &self.x - &self.y * &self.y / rat_i64(3)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        debug_assert!(!n.is_zero());
        Some(QOmega { x: &self.x / &n, y: -(&self.y / &n) })
    }

    /// Exact sign under the embedding w -> +1/sqrt(3).
    pub fn sign(&self) -> Ordering {
        let sx = rat_sign(&self.x);
        let sy = rat_sign(&self.y);
        match (sx, sy) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            _ => {
                // x and y have opposite signs: compare x^2 against y^2/3.
                let lhs = &self.x * &self.x;
                let rhs = &self.y * &self.y / rat_i64(3);
                match lhs.cmp(&rhs) {
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Greater => sx,
                    Ordering::Less => sy,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    /// Archimedean embedding (w -> 1/sqrt(3)) as a double.
    pub fn to_f64(&self) -> f64 {
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        let y = self.y.to_f64().unwrap_or(f64::NAN);
        x + y / 3.0f64.sqrt()
    }

    /// Exact k-th root within Q(w) if available, preferring the
    /// positive-real root (determinism). Recognition runs numerically and
    /// verifies exactly, so a `Some` answer is always correct; `None` may
    /// also mean "not recognized".
    pub fn kth_root(&self, k: u32) -> Option<Self> {
        assert!(k >= 1);
        if self.is_zero() {
            return Some(Self::zero());
        }
        if k == 1 {
            return Some(self.clone());
        }
        if self.y.is_zero() {
            if let Some(r) = rat_kth_root(&self.x, k) {
                return Some(Self::from_rat(r));
            }
        }
        // Roots with a genuine w-part: recognize from both real embeddings
        // (w -> +1/sqrt(3) and w -> -1/sqrt(3)), verify exactly.
        let e1 = self.to_f64();
        let e2 = self.conj().to_f64();
        if !e1.is_finite() || !e2.is_finite() {
            return None;
        }
        let real_root = |v: f64| -> Option<f64> {
            if v >= 0.0 {
                Some(v.powf(1.0 / k as f64))
            } else if k % 2 == 1 {
                Some(-(-v).powf(1.0 / k as f64))
            } else {
                None
            }
        };
        let r1 = real_root(e1)?;
        let r2 = real_root(e2)?;
        let signs: &[f64] = if k % 2 == 0 { &[1.0, -1.0] } else { &[1.0] };
        for &s2 in signs {
            for denom_bound in [64u64, 4096, 1 << 20] {
                if let Some(cand) = recognize_qomega_embeddings(r1, s2 * r2, denom_bound) {
                    if cand.pow(k) == *self {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Largest exponent e with 2^e dividing every denominator... more
    /// precisely: p-adic valuation data of the basis coordinates, used by
    /// the coefficient-bound reports.
    pub fn vp_coords(&self, p: u64) -> (Option<i64>, Option<i64>) {
        (vp_rat(&self.x, p), vp_rat(&self.y, p))
    }
}

/// Recognize a pair of values under the two real embeddings of Q(w):
/// `v1 ~ x + y/sqrt(3)`, `v2 ~ x - y/sqrt(3)`. The candidate is unverified;
/// callers must check it exactly.
pub fn recognize_qomega_embeddings(v1: f64, v2: f64, denom_bound: u64) -> Option<QOmega> {
    let x = recognize_rat((v1 + v2) / 2.0, denom_bound)?;
    let y = recognize_rat((v1 - v2) / 2.0 * 3.0f64.sqrt(), denom_bound)?;
    Some(QOmega::new(x, y))
}

/// Recognize a single double as an element of Q(w). Pure rationals come
/// from continued fractions; genuine w-parts need both embeddings, so this
/// single-value form only attempts rational and small half-integer
/// multiples of w. Unverified.
pub fn recognize_qomega(v: f64, denom_bound: u64) -> Option<QOmega> {
    if let Some(x) = recognize_rat(v, denom_bound) {
        return Some(QOmega::from_rat(x));
    }
    let y = v * 3.0f64.sqrt();
    if let Some(y) = recognize_rat(y, denom_bound) {
        return Some(QOmega::new(Rat::zero(), y));
    }
    None
}

/// Continued-fraction rational reconstruction with a denominator bound and
/// a relative acceptance tolerance.
pub fn recognize_rat(v: f64, denom_bound: u64) -> Option<Rat> {
    if !v.is_finite() {
        return None;
    }
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::from(v.floor() as i64), BigInt::one());
    let mut frac = v - v.floor();
    let bound = BigInt::from(denom_bound);
    for _ in 0..64 {
        let cand = Rat::new(p1.clone(), q1.clone());
        let cf = rat_to_f64(&cand);
        if (cf - v).abs() <= 1e-11 * (1.0 + v.abs()) {
            return Some(cand);
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if !a.is_finite() || a.abs() > 9e15 {
            break;
        }
        frac = inv - a;
        let ab = BigInt::from(a as i64);
        let p2 = &ab * &p1 + &p0;
        let q2 = &ab * &q1 + &q0;
        if q2 > bound {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    let cand = Rat::new(p1, q1);
    if (rat_to_f64(&cand) - v).abs() <= 1e-11 * (1.0 + v.abs()) {
        Some(cand)
    } else {
        None
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn rat_sign(r: &Rat) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl PartialOrd for QOmega {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QOmega {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }
}

impl fmt::Debug for QOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QOmega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        if self.x.is_zero() {
            return write!(f, "{}*w", self.y);
        }
        if self.y.is_positive() {
            write!(f, "{}+{}*w", self.x, self.y)
        } else {
            write!(f, "{}{}*w", self.x, self.y)
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for QOmega {
            type Output = QOmega;
            fn $method(self, rhs: QOmega) -> QOmega {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QOmega> for QOmega {
            type Output = QOmega;
            fn $method(self, rhs: &QOmega) -> QOmega {
                (&self).$method(rhs)
            }
        }
        impl $trait<QOmega> for &QOmega {
            type Output = QOmega;
            fn $method(self, rhs: QOmega) -> QOmega {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&QOmega> for &QOmega {
    type Output = QOmega;
    fn add(self, rhs: &QOmega) -> QOmega {
        QOmega { x: &self.x + &rhs.x, y: &self.y + &rhs.y }
    }
}
forward_binop!(Add, add);

impl Sub<&QOmega> for &QOmega {
    type Output = QOmega;
    fn sub(self, rhs: &QOmega) -> QOmega {
        QOmega { x: &self.x - &rhs.x, y: &self.y - &rhs.y }
    }
}
forward_binop!(Sub, sub);

impl Mul<&QOmega> for &QOmega {
    type Output = QOmega;
    fn mul(self, rhs: &QOmega) -> QOmega {
        // (x1 + y1 w)(x2 + y2 w) = x1 x2 + y1 y2 / 3 + (x1 y2 + x2 y1) w
        let third = rat(1, 3);
        QOmega {
            x: &self.x * &rhs.x + &self.y * &rhs.y * &third,
            y: &self.x * &rhs.y + &self.y * &rhs.x,
        }
    }
}
forward_binop!(Mul, mul);

impl Div<&QOmega> for &QOmega {
    type Output = QOmega;
    fn div(self, rhs: &QOmega) -> QOmega {
        self * &rhs.inv().expect("division by zero in Q(w)")
    }
}
forward_binop!(Div, div);

impl Neg for QOmega {
    type Output = QOmega;
    fn neg(self) -> QOmega {
        QOmega { x: -self.x, y: -self.y }
    }
}

impl Neg for &QOmega {
    type Output = QOmega;
    fn neg(self) -> QOmega {
        QOmega { x: -self.x.clone(), y: -self.y.clone() }
    }
}

impl AddAssign<&QOmega> for QOmega {
    fn add_assign(&mut self, rhs: &QOmega) {
        self.x += &rhs.x;
        self.y += &rhs.y;
    }
}

impl SubAssign<&QOmega> for QOmega {
    fn sub_assign(&mut self, rhs: &QOmega) {
        self.x -= &rhs.x;
        self.y -= &rhs.y;
    }
}

impl MulAssign<&QOmega> for QOmega {
    fn mul_assign(&mut self, rhs: &QOmega) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn splitmix(state: &mut u64) -> u64 {
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn rand_qomega(state: &mut u64) -> QOmega {
        let pick = |s: &mut u64| {
            let n = (splitmix(s) % 41) as i64 - 20;
            let d = (splitmix(s) % 7 + 1) as i64;
            rat(n, d)
        };
        QOmega::new(pick(state), pick(state))
    }

    #[test]
    fn omega_squared_is_one_third() {
        let w = QOmega::omega();
        assert_eq!(&w * &w, QOmega::from_frac(1, 3));
        // 1/w = 3w
        assert_eq!(w.inv().unwrap(), QOmega::omega_frac(3, 1));
    }

    #[test]
    fn conjugation_is_ring_automorphism() {
        let mut s = 7u64;
        for _ in 0..200 {
            let a = rand_qomega(&mut s);
            let b = rand_qomega(&mut s);
            assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        }
    }

    #[test]
    fn ring_axioms_randomized() {
        // Associativity and distributivity on 1000 random triples.
        let mut s = 42u64;
        for _ in 0..1000 {
            let a = rand_qomega(&mut s);
            let b = rand_qomega(&mut s);
            let c = rand_qomega(&mut s);
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        }
    }

    #[test]
    fn field_inverse() {
        let mut s = 11u64;
        for _ in 0..200 {
            let a = rand_qomega(&mut s);
            if a.is_zero() {
                continue;
            }
            assert_eq!(&a * &a.inv().unwrap(), QOmega::one());
        }
    }

    #[test]
    fn exact_sign_matches_embedding() {
        let mut s = 3u64;
        for _ in 0..500 {
            let a = rand_qomega(&mut s);
            let f = a.to_f64();
            if f.abs() > 1e-9 {
                assert_eq!(a.is_positive(), f > 0.0, "sign mismatch for {a}");
            }
        }
    }

    #[test]
    fn kth_root_recognition() {
        // (1 + 2w)^3 recovered exactly.
        let base = QOmega::new(rat_i64(1), rat_i64(2));
        let cube = base.pow(3);
        assert_eq!(cube.kth_root(3), Some(base));
        // 4 has no cube root in Q(w).
        assert_eq!(QOmega::from_int(4).kth_root(3), None);
        // Positive root preferred for even k.
        assert_eq!(QOmega::from_int(9).kth_root(2), Some(QOmega::from_int(3)));
        // w^2 = 1/3: sqrt(1/3) = w itself.
        assert_eq!(QOmega::from_frac(1, 3).kth_root(2), Some(QOmega::omega()));
    }

    #[test]
    fn vp_valuations() {
        assert_eq!(vp_rat(&rat(8, 3), 2), Some(3));
        assert_eq!(vp_rat(&rat(8, 3), 3), Some(-1));
        assert_eq!(vp_rat(&rat(0, 1), 5), None);
        assert_eq!(vp_rat(&rat(-50, 7), 5), Some(2));
    }
}
