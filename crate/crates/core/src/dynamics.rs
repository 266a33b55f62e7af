//! The cubic family itself: evaluation, orbits, cycles and multipliers.
//!
//! `P(z) = z^3/3 - (c/2) z^2 + a^3` with critical points `c0 = 0` and
//! `c1 = c` (the labeling used by the explicit computations; `P'(z) =
//! z(z - c)`). Everything is generic over the coefficient scalar so exact
//! and complex evaluation share one code path.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::ring::Scalar;
use crate::exactalg::unipoly::UniPoly;
use crate::roots::poly_roots;

/// A parameter `(c, a)` of the cubic family over some scalar context.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicParam<K: Scalar = Complex64> {
    pub c: K,
    pub a: K,
}

pub type ExactParam = CubicParam<crate::QOmega>;
pub type ComplexParam = CubicParam<Complex64>;

impl<K: Scalar> CubicParam<K> {
    pub fn new(c: K, a: K) -> Self {
        CubicParam { c, a }
    }

    /// The two critical points `(0, c)`, the roots of `P'(z) = z^2 - cz`.
    pub fn critical_points(&self) -> (K, K) {
        (K::zero(), self.c.clone())
    }

    /// `P(z) = z^3/3 - (c/2) z^2 + a^3`, Horner form.
    pub fn eval(&self, z: &K) -> K {
        let third = K::from_frac(1, 3);
        let half_c = self.c.mul(&K::from_frac(1, 2));
        let a3 = self.a.mul(&self.a).mul(&self.a);
        z.mul(&third).sub(&half_c).mul(z).mul(z).add(&a3)
    }

    /// `P'(z) = z (z - c)`.
    pub fn eval_deriv(&self, z: &K) -> K {
        z.mul(&z.sub(&self.c))
    }

    /// n-fold iterate.
    pub fn eval_n(&self, z: &K, n: u32) -> K {
        let mut w = z.clone();
        for _ in 0..n {
            w = self.eval(&w);
        }
        w
    }

    /// The map as a univariate polynomial over the scalar ring.
    pub fn as_poly(&self) -> UniPoly<K> {
        let a3 = self.a.mul(&self.a).mul(&self.a);
        UniPoly::new(vec![
            a3,
            K::zero(),
            self.c.mul(&K::from_frac(-1, 2)),
            K::from_frac(1, 3),
        ])
    }

    /// `P^n` as a polynomial (degree `3^n`).
    pub fn iterate_poly(&self, n: u32) -> UniPoly<K> {
        let p = self.as_poly();
        let mut acc = UniPoly::x();
        for _ in 0..n {
            acc = p.compose(&acc);
        }
        acc
    }

    pub fn to_complex(&self) -> ComplexParam {
        CubicParam { c: self.c.to_complex(), a: self.a.to_complex() }
    }
}

impl ComplexParam {
    /// Iterate with an escape bound; `Err(Overflow)` signals certified
    /// escape before `n` steps.
    pub fn eval_n_bounded(&self, z: Complex64, n: u32, bound: f64) -> Result<Complex64> {
        let mut w = z;
        for _ in 0..n {
            if w.norm() > bound {
                return Err(Error::Overflow);
            }
            w = self.eval(&w);
        }
        Ok(w)
    }
}

/// A periodic cycle: ordered points, exact period, multiplier.
#[derive(Debug, Clone, Serialize)]
pub struct Cycle {
    pub points: Vec<(f64, f64)>,
    pub period: u32,
    pub multiplier: (f64, f64),
}

impl Cycle {
    pub fn multiplier_c(&self) -> Complex64 {
        Complex64::new(self.multiplier.0, self.multiplier.1)
    }
    pub fn points_c(&self) -> Vec<Complex64> {
        self.points.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
    }
}

const DEFAULT_PERIOD_CAP: u32 = 6;
const REFINE_TARGET: f64 = 1e-12;

/// The roots of the specialized dynatomic polynomial `Phi*_m` at a numeric
/// parameter: all points of exact period `m` (plus possibly parabolic
/// degenerations, absent at generic parameters). Found as roots of
/// `P^m(z) - z`, Newton-polished, then filtered by exact period.
/// Reconstructing the dynatomic polynomial itself from these roots is
/// numerically meaningless at higher periods (17 orders of coefficient
/// dynamic range by m = 4), so consumers work with the root list.
pub fn exact_period_points(p: &ComplexParam, m: u32) -> Result<Vec<Complex64>> {
    let x = UniPoly::<Complex64>::x();
    let full = p.iterate_poly(m).sub(&x);
    let mut roots = poly_roots(&full.coeffs)?;
    for r in roots.iter_mut() {
        *r = refine_periodic_point(p, *r, m);
    }
    let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let divisors: Vec<u32> = (1..m).filter(|k| m % k == 0).collect();
    roots.retain(|r| {
        !divisors
            .iter()
            .any(|&k| (p.eval_n(r, k) - r).norm() < 1e-7 * scale)
    });
    roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(roots)
}

/// Multiplier of the orbit through `z` under `P^m` (chain product).
pub fn multiplier_at(p: &ComplexParam, z: Complex64, m: u32) -> Complex64 {
    let mut w = z;
    let mut d = Complex64::ONE;
    for _ in 0..m {
        d *= p.eval_deriv(&w);
        w = p.eval(&w);
    }
    d
}

pub fn moebius(n: u32) -> i32 {
    let mut n = n;
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            count += 1;
        }
        p += 1;
    }
    if n > 1 {
        count += 1;
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All cycles of exact period `m`, found as roots of the specialized
/// dynatomic polynomial, with exactness of period re-verified by direct
/// iteration and each point polished by local Newton iteration.
pub fn find_cycles(p: &ComplexParam, m: u32) -> Result<Vec<Cycle>> {
    if m == 0 || m > DEFAULT_PERIOD_CAP {
        return Err(Error::InvalidInput(format!(
            "period must be in 1..={DEFAULT_PERIOD_CAP}"
        )));
    }
    let roots = exact_period_points(p, m)?;
    let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let match_tol = 1e-5 * scale;

    let mut used = vec![false; roots.len()];
    let mut cycles = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let start = refine_periodic_point(p, roots[i], m);
        // Collect the orbit and mark the matching roots as consumed.
        let mut orbit = vec![start];
        used[i] = true;
        let mut w = p.eval(&start);
        let mut ok = true;
        for _ in 1..m {
            let mut best: Option<(usize, f64)> = None;
            for (j, r) in roots.iter().enumerate() {
                if used[j] {
                    continue;
                }
                let d = (r - w).norm();
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
            match best {
                Some((j, d)) if d < match_tol => {
                    used[j] = true;
                    orbit.push(refine_periodic_point(p, w, m));
                    w = p.eval(&w);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        // Exact period check by direct iteration.
        let mut exact = true;
        let mut z = start;
        for _ in 1..m {
            z = p.eval(&z);
            if (z - start).norm() < 1e-8 * scale {
                exact = false;
                break;
            }
        }
        if !exact {
            continue; // parabolic degeneration: period divides m strictly
        }
        let closure = (p.eval_n(&start, m) - start).norm();
        if closure > 1e-9 * scale {
            continue;
        }
        let multiplier: Complex64 = orbit.iter().map(|zi| p.eval_deriv(zi)).product();
        // Canonical rotation: start the cycle at its lexicographic minimum.
        let min_idx = (0..orbit.len())
            .min_by(|&i, &j| {
                orbit[i]
                    .re
                    .total_cmp(&orbit[j].re)
                    .then(orbit[i].im.total_cmp(&orbit[j].im))
            })
            .unwrap();
        let rotated: Vec<Complex64> = (0..orbit.len())
            .map(|k| orbit[(min_idx + k) % orbit.len()])
            .collect();
        cycles.push(Cycle {
            points: rotated.iter().map(|z| (z.re, z.im)).collect(),
            period: m,
            multiplier: (multiplier.re, multiplier.im),
        });
    }
    cycles.sort_by(|x, y| {
        x.points[0]
            .0
            .total_cmp(&y.points[0].0)
            .then(x.points[0].1.total_cmp(&y.points[0].1))
    });
    Ok(cycles)
}

/// A few Newton steps on `P^m(z) - z`.
fn refine_periodic_point(p: &ComplexParam, z0: Complex64, m: u32) -> Complex64 {
    let mut z = z0;
    for _ in 0..40 {
        // g(z) = P^m(z) - z; g'(z) = (P^m)'(z) - 1 by the chain rule.
        let mut w = z;
        let mut deriv = Complex64::ONE;
        for _ in 0..m {
            deriv *= p.eval_deriv(&w);
            w = p.eval(&w);
        }
        let g = w - z;
        let dg = deriv - Complex64::ONE;
        if g.norm() < REFINE_TARGET {
            break;
        }
        if dg.norm() < 1e-14 {
            break; // parabolic: Newton step undefined
        }
        z -= g / dg;
    }
    z
}
