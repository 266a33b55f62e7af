//! Newton polygons over Q_p and the multiplier-valuation checks for
//! unicritical post-critically finite maps `Q(z) = z^d + t`.
//!
//! The multiplier polynomial is produced by the double elimination
//! `Res_t(minpoly(t), Res_z(Phi*_m(z; t), x - (Q^m)'(z; t)))`: its roots
//! are the period-m multipliers across all conjugates of `t` (with the
//! harmless multiplicity-m inflation left in place). The expected
//! valuation pattern: every root has `v_p > 0` when `p | d` and `v_p = 0`
//! when `p` is prime to `d`, read off the polygon slopes.
//!
//! The cubic family connects through the exact conjugacy
//! `w P_{0,a}(z) = Q(w z)` with `Q(y) = y^3 + t`, `t = w a^3` (`w^3 = w/3`
//! makes the leading terms match), so unicritical PCF parameters found by
//! the solver transport to minimal polynomials of `t`.

use serde::Serialize;

use crate::dynamics::moebius;
use crate::error::{Error, Result};
use crate::exactalg::bipoly::{BiPoly, Var};
use crate::exactalg::qomega::{vp_rat, QOmega};
use crate::exactalg::unipoly::UniPoly;

/// Lower Newton polygon of a rational-coefficient polynomial at `p`.
#[derive(Debug, Clone, Serialize)]
pub struct NewtonPolygon {
    pub prime: u64,
    /// `(i, v_p(a_i))` for nonzero coefficients, ascending in `i`.
    pub points: Vec<(i64, i64)>,
    /// Lower-hull segments as `(slope_num, slope_den, length)` with
    /// weakly increasing slopes; the roots over the p-adic closure have
    /// valuation `-slope` with multiplicity `length`.
    pub segments: Vec<(i64, i64, i64)>,
    /// Order of vanishing at 0 (zero roots carry no segment).
    pub zero_roots: i64,
}

/// Build the polygon. Coefficients must be rational (no w-part).
pub fn newton_polygon(f: &UniPoly<QOmega>, p: u64) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::InvalidInput("newton polygon of zero polynomial".into()));
    }
    let mut points = Vec::new();
    let mut zero_roots = -1i64;
    for (i, coeff) in f.coeffs.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        if !coeff.is_rational() {
            return Err(Error::InvalidInput(
                "newton polygon needs rational coefficients".into(),
            ));
        }
        if zero_roots < 0 {
            zero_roots = i as i64;
        }
        let v = vp_rat(&coeff.x, p).expect("nonzero");
        points.push((i as i64, v));
    }
    // Lower convex hull, left to right.
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (pt.0 - a.0) * (b.1 - a.1);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut segments = Vec::new();
    for w in hull.windows(2) {
        let (i0, v0) = w[0];
        let (i1, v1) = w[1];
        let num = v1 - v0;
        let den = i1 - i0;
        let g = if num == 0 { den } else { gcd64(num.abs(), den) };
        segments.push((num / g, den / g, den));
    }
    Ok(NewtonPolygon { prime: p, points, segments, zero_roots })
}

fn gcd64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a.max(1)
}

/// Root-valuation multiset `(v_num, v_den, multiplicity)` from the polygon
/// (valuation = -slope).
pub fn root_valuations(np: &NewtonPolygon) -> Vec<(i64, i64, i64)> {
    np.segments.iter().map(|&(n, d, len)| (-n, d, len)).collect()
}

/// Specification of a unicritical multiplier computation.
#[derive(Debug, Clone)]
pub struct MultiplierSpec {
    pub d: u32,
    /// Minimal polynomial of the PCF parameter `t` over Q (rational
    /// coefficients).
    pub t_minpoly: UniPoly<QOmega>,
    pub m: u32,
}

pub const MULTIPLIER_DEGREE_CAP: u64 = 200;

/// `Q_t(z) = z^d + t` over the ring Q[t, x] (the `Var::C` slot carries `t`,
/// `Var::A` carries the multiplier variable `x`).
fn q_poly(d: u32) -> UniPoly<BiPoly> {
    let mut coeffs = vec![BiPoly::zero(); d as usize + 1];
    coeffs[0] = BiPoly::var(Var::C);
    coeffs[d as usize] = BiPoly::one();
    UniPoly::new(coeffs)
}

fn q_iterate(d: u32, n: u32) -> UniPoly<BiPoly> {
    let q = q_poly(d);
    let mut acc = UniPoly::x();
    for _ in 0..n {
        acc = q.compose(&acc);
    }
    acc
}

/// Exact-period-m dynatomic polynomial of `z^d + t` by Moebius product
/// with exact division.
pub fn unicritical_dynatomic(d: u32, m: u32) -> Result<UniPoly<BiPoly>> {
    let x = UniPoly::<BiPoly>::x();
    let mut num = UniPoly::<BiPoly>::one();
    let mut den = UniPoly::<BiPoly>::one();
    for k in 1..=m {
        if m % k != 0 {
            continue;
        }
        let factor = q_iterate(d, k).sub(&x);
        match moebius(m / k) {
            1 => num = num.mul(&factor),
            -1 => den = den.mul(&factor),
            _ => {}
        }
    }
    if den.is_constant() && den.deg() == 0 && den.lc() == &BiPoly::one() {
        return Ok(num);
    }
    num.exact_div(&den)
        .ok_or_else(|| Error::InvalidInput("unicritical dynatomic division not exact".into()))
}

/// Multiplier polynomial: roots are all period-m multipliers across the
/// conjugates of `t` (each cycle contributing its multiplier m times).
#[derive(Debug, Clone)]
pub struct MultiplierPoly {
    pub spec_d: u32,
    pub m: u32,
    /// Polynomial in the multiplier variable, zero roots stripped.
    pub poly: UniPoly<QOmega>,
    /// Multiplicity of the stripped zero root (super-attracting cycles).
    pub zero_multiplicity: usize,
}

pub fn multiplier_poly(spec: &MultiplierSpec) -> Result<MultiplierPoly> {
    if spec.d < 2 || spec.m == 0 {
        return Err(Error::InvalidInput("need d >= 2 and m >= 1".into()));
    }
    if spec.t_minpoly.is_zero() || spec.t_minpoly.deg() == 0 {
        return Err(Error::InvalidInput("t_minpoly must be nonconstant".into()));
    }
    let total = (spec.d as u64).pow(spec.m) * spec.t_minpoly.deg() as u64;
    if total > MULTIPLIER_DEGREE_CAP {
        return Err(Error::DegreeCapExceeded { requested: total, cap: MULTIPLIER_DEGREE_CAP });
    }
    let phi = unicritical_dynatomic(spec.d, spec.m)?;
    // (Q^m)'(z) = prod_j d * (Q^j(z))^(d-1), via the chain rule.
    let mut deriv = UniPoly::<BiPoly>::one();
    for j in 0..spec.m {
        let qj = q_iterate(spec.d, j);
        let dq = qj
            .pow(spec.d as usize - 1)
            .scale(&BiPoly::constant(QOmega::from_int(spec.d as i64)));
        deriv = deriv.mul(&dq);
    }
    // x - (Q^m)' with x in the Var::A slot.
    let g = UniPoly::constant(BiPoly::var(Var::A)).sub(&deriv);
    let r1: BiPoly = phi.resultant(&g);
    if r1.is_zero() {
        return Err(Error::ZeroResultant);
    }
    // Eliminate t: view r1 in t (Var::C) with x-polynomial coefficients.
    let r1_t = r1.as_unipoly(Var::C);
    let minpoly_t: UniPoly<UniPoly<QOmega>> = UniPoly::new(
        spec.t_minpoly
            .coeffs
            .iter()
            .map(|c| UniPoly::constant(c.clone()))
            .collect(),
    );
    let lambda_poly: UniPoly<QOmega> = minpoly_t.resultant(&r1_t);
    if lambda_poly.is_zero() {
        return Err(Error::ZeroResultant);
    }
    // Strip zero roots (x^k factor).
    let zero_multiplicity = lambda_poly.coeffs.iter().take_while(|c| c.is_zero()).count();
    let stripped = UniPoly::new(lambda_poly.coeffs[zero_multiplicity..].to_vec());
    Ok(MultiplierPoly { spec_d: spec.d, m: spec.m, poly: stripped, zero_multiplicity })
}

/// Per-prime verdict of the valuation pattern.
#[derive(Debug, Clone, Serialize)]
pub struct ValuationRow {
    pub prime: u64,
    pub divides_d: bool,
    /// Root valuations `(num, den, multiplicity)` from the polygon.
    pub valuations: Vec<(i64, i64, i64)>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplierReport {
    pub d: u32,
    pub m: u32,
    pub zero_multiplicity: usize,
    /// True when no nonzero multipliers exist (all cycles of this period
    /// super-attracting): every valuation row passes vacuously.
    pub vacuous: bool,
    pub rows: Vec<ValuationRow>,
    pub pass: bool,
}

/// Verify: every nonzero period-m multiplier has `v_p > 0` when `p | d`
/// and `v_p = 0` when `p` is prime to `d`.
pub fn verify_prop_multiplier(spec: &MultiplierSpec, primes: &[u64]) -> Result<MultiplierReport> {
    let mp = multiplier_poly(spec)?;
    let vacuous = mp.poly.is_constant();
    let mut rows = Vec::new();
    for &p in primes {
        let divides = spec.d as u64 % p == 0;
        let (valuations, pass) = if vacuous {
            (Vec::new(), true)
        } else {
            let np = newton_polygon(&mp.poly, p)?;
            let vals = root_valuations(&np);
            let ok = if divides {
                vals.iter().all(|&(n, d, _)| n > 0 && d > 0)
            } else {
                vals.iter().all(|&(n, _, _)| n == 0)
            };
            (vals, ok)
        };
        rows.push(ValuationRow { prime: p, divides_d: divides, valuations, pass });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(MultiplierReport {
        d: spec.d,
        m: spec.m,
        zero_multiplicity: mp.zero_multiplicity,
        vacuous,
        rows,
        pass,
    })
}

/// The affine bridge from the unicritical line of the cubic family to
/// `y^3 + t`: both sides of `w P_{0,a}(z) = Q(w z)` as polynomials in `z`
/// (`Q(y) = y^3 + w a^3`); they agree exactly because `w^3 = w/3`.
pub fn cubic_unicritical_bridge() -> (UniPoly<BiPoly>, UniPoly<BiPoly>) {
    let w = QOmega::omega();
    let a3 = BiPoly::var(Var::A).pow(3);
    let lhs = UniPoly::new(vec![
        a3.scale(&w),
        BiPoly::zero(),
        BiPoly::zero(),
        BiPoly::constant(&w * &QOmega::from_frac(1, 3)),
    ]);
    let rhs = UniPoly::new(vec![
        a3.scale(&w),
        BiPoly::zero(),
        BiPoly::zero(),
        BiPoly::constant(w.pow(3)),
    ]);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::qomega::Rat;

    fn qp(coeffs: &[i64]) -> UniPoly<QOmega> {
        UniPoly::new(coeffs.iter().map(|&n| QOmega::from_int(n)).collect())
    }

    fn is_associate_uni(f: &UniPoly<QOmega>, g: &UniPoly<QOmega>) -> bool {
        if f.is_zero() || g.is_zero() {
            return f.is_zero() && g.is_zero();
        }
        f.monic() == g.monic()
    }

    #[test]
    fn polygon_hand_examples() {
        // x^2 - 2x - 4 at p = 2: hull (0,2)-(2,0), slope -1: both roots
        // have v_2 = 1.
        let f = qp(&[-4, -2, 1]);
        let np = newton_polygon(&f, 2).unwrap();
        assert_eq!(np.segments, vec![(-1, 1, 2)]);
        assert_eq!(root_valuations(&np), vec![(1, 1, 2)]);
        // Same f at p = 5: v_5(-4) = 0, slope 0.
        let np = newton_polygon(&f, 5).unwrap();
        assert_eq!(root_valuations(&np), vec![(0, 1, 2)]);
        // Degenerate x^k: all mass at zero.
        let f = qp(&[0, 0, 0, 7]);
        let np = newton_polygon(&f, 3).unwrap();
        assert_eq!(np.zero_roots, 3);
        assert!(np.segments.is_empty());
    }

    #[test]
    fn polygon_matches_constructed_valuations() {
        // 50 random products of (x - p^e u) with unit u: slope multiset
        // equals the constructed valuation multiset.
        let mut seed = 314u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            seed >> 33
        };
        for trial in 0..50 {
            let p = [2u64, 3, 5, 7][trial % 4];
            let k = 2 + (next() % 4) as usize;
            let mut f = UniPoly::<QOmega>::one();
            let mut expect: Vec<i64> = Vec::new();
            for _ in 0..k {
                let e = (next() % 5) as i64 - 2;
                let mut u = (next() % 9 + 1) as i64;
                while u % p as i64 == 0 {
                    u += 1;
                }
                let root = QOmega::from_rat(Rat::new(
                    num_bigint::BigInt::from(u)
                        * num_bigint::BigInt::from(p as i64).pow(e.max(0) as u32),
                    num_bigint::BigInt::from(p as i64).pow((-e).max(0) as u32),
                ));
                expect.push(e);
                f = f.mul(&UniPoly::new(vec![-&root, QOmega::one()]));
            }
            let np = newton_polygon(&f, p).unwrap();
            let mut got: Vec<i64> = Vec::new();
            for (vn, vd, len) in root_valuations(&np) {
                assert_eq!(vd, 1, "integral valuations expected");
                for _ in 0..len {
                    got.push(vn);
                }
            }
            expect.sort_unstable();
            got.sort_unstable();
            assert_eq!(got, expect, "p={p} trial={trial}");
        }
    }

    #[test]
    fn multiplier_poly_basilica_m1() {
        // d=2, t=-1, m=1: fixed points of z^2 - 1 solve z^2 - z - 1 = 0,
        // lambda = 2z: lambda-poly ~ lambda^2 - 2 lambda - 4.
        let spec = MultiplierSpec { d: 2, t_minpoly: qp(&[1, 1]), m: 1 };
        let mp = multiplier_poly(&spec).unwrap();
        let expect = qp(&[-4, -2, 1]);
        assert!(is_associate_uni(&mp.poly, &expect), "{:?}", mp.poly);
        assert_eq!(mp.zero_multiplicity, 0);
    }

    #[test]
    fn multiplier_poly_monomial_cubic() {
        // d=3, t=0, m=1: nonzero multipliers are 3 (double).
        let spec = MultiplierSpec { d: 3, t_minpoly: qp(&[0, 1]), m: 1 };
        let mp = multiplier_poly(&spec).unwrap();
        let expect = qp(&[-3, 1]).mul(&qp(&[-3, 1]));
        assert!(is_associate_uni(&mp.poly, &expect), "{:?}", mp.poly);
        assert!(mp.zero_multiplicity >= 1);
    }

    #[test]
    fn multiplier_poly_chebyshev_like() {
        // d=2, t=-2, m=1: fixed points (z-2)(z+1), lambda in {4, -2}.
        let spec = MultiplierSpec { d: 2, t_minpoly: qp(&[2, 1]), m: 1 };
        let mp = multiplier_poly(&spec).unwrap();
        let expect = qp(&[-4, 1]).mul(&qp(&[2, 1]));
        assert!(is_associate_uni(&mp.poly, &expect), "{:?}", mp.poly);
    }

    #[test]
    fn superattracting_cycle_is_vacuous() {
        // d=2, t=-1, m=2: the 2-cycle {0,-1} is the critical orbit,
        // multiplier 0: nothing survives the zero-strip.
        let spec = MultiplierSpec { d: 2, t_minpoly: qp(&[1, 1]), m: 2 };
        let rep = verify_prop_multiplier(&spec, &[2, 3, 5, 7, 11]).unwrap();
        assert!(rep.vacuous);
        assert!(rep.pass);
    }

    #[test]
    fn valuation_pattern_suite() {
        let primes = [2u64, 3, 5, 7, 11];
        // d=2: t in {0, -1, -2}, m in {1, 2}.
        for t in [0i64, -1, -2] {
            for m in [1u32, 2] {
                let spec = MultiplierSpec { d: 2, t_minpoly: qp(&[-t, 1]), m };
                let rep = verify_prop_multiplier(&spec, &primes).unwrap();
                assert!(rep.pass, "d=2 t={t} m={m}: {rep:?}");
            }
        }
        // d=3, t=0 and the period-2 cubic parameter t^2 + 1 = 0.
        for (tp, m) in [(qp(&[0, 1]), 1u32), (qp(&[1, 0, 1]), 1), (qp(&[1, 0, 1]), 2)] {
            let spec = MultiplierSpec { d: 3, t_minpoly: tp.clone(), m };
            let rep = verify_prop_multiplier(&spec, &primes).unwrap();
            assert!(rep.pass, "d=3 minpoly={tp:?} m={m}: {rep:?}");
        }
    }

    #[test]
    fn bridge_identity_and_parameter_transport() {
        // w P_{0,a}(z) = (w z)^3 + w a^3 exactly (w^3 = w/3).
        let (lhs, rhs) = cubic_unicritical_bridge();
        assert_eq!(lhs, rhs);
        // Unicritical period-2 parameters: P^2(0)=0, P(0)!=0 at c=0 gives
        // a^3 (a^6/3 + 1); under t = w a^3 the second factor is t^2 + 1.
        let rel = crate::pcf::orbit_relation(0, 0, 2).unwrap();
        let at_c0 = rel.poly.specialize(Var::C, &QOmega::zero());
        let cubed = UniPoly::monomial(QOmega::one(), 3);
        let quotient = at_c0.exact_div(&cubed).unwrap();
        let mut t2p1 = vec![QOmega::zero(); 7];
        t2p1[0] = QOmega::from_int(1);
        t2p1[6] = QOmega::omega().pow(2);
        assert_eq!(quotient, UniPoly::new(t2p1));
    }
}
