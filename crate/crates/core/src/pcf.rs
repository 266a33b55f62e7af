//! Post-critically finite parameters: the orbit-relation systems, their
//! resultant-based solver, certification, and enumeration.
//!
//! A parameter is PCF when both critical orbits are finite, which is cut
//! out by pairs of orbit relations `P^(n+k)(c_i) = P^n(c_i)`. The solver
//! eliminates `a` by a resultant, localizes candidates numerically, and
//! then certifies them. Certification is exact whenever the system
//! triangularizes over Q(w): with one coordinate recognized exactly, both
//! relations specialize to univariate polynomials whose gcd `d` vanishes
//! identically on the candidate, so every root of `d` is a genuine PCF
//! parameter and the numeric coordinate is polished against `d` itself.
//! Points that resist exact recognition fall back to a Krawczyk interval
//! Newton step on the square system (disk arithmetic with outward slop);
//! anything still unresolved is reported uncertified rather than silently
//! accepted.

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::CubicParam;
use crate::error::{Error, Result};
use crate::exactalg::bipoly::{BiPoly, Var};
use crate::exactalg::qomega::{recognize_rat, QOmega};
use crate::exactalg::ring::{Ring, Scalar};
use crate::exactalg::unipoly::UniPoly;
use crate::periodic::critical_value_poly;
use crate::roots::poly_roots;

/// `P^(n+k)(c_i) - P^n(c_i)` as an exact polynomial in `(c, a)`.
#[derive(Debug, Clone)]
pub struct OrbitRelation {
    pub critical_index: usize,
    pub preperiod: u32,
    pub period: u32,
    pub poly: BiPoly,
}

pub const DEFAULT_DEGREE_CAP: u64 = 81; // 3^4

pub fn orbit_relation(i: usize, n: u32, k: u32) -> Result<OrbitRelation> {
    assert!(i <= 1);
    if k == 0 {
        return Err(Error::InvalidInput("period must be positive".into()));
    }
    let deg = 3u64.pow(n + k);
    if deg > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCapExceeded { requested: deg, cap: DEFAULT_DEGREE_CAP });
    }
    let poly = critical_value_poly(i, n + k).sub(&critical_value_poly(i, n));
    Ok(OrbitRelation { critical_index: i, preperiod: n, period: k, poly })
}

/// A solved PCF parameter with its witness and certification status.
#[derive(Debug, Clone, Serialize)]
pub struct PcfPoint {
    pub c: (f64, f64),
    pub a: (f64, f64),
    /// `(i, n, k)` data of the two witnessing relations.
    pub witness: ((usize, u32, u32), (usize, u32, u32)),
    pub certified: bool,
    /// How the point was certified: "exact", "triangular", "krawczyk",
    /// or "none".
    pub certificate: &'static str,
}

impl PcfPoint {
    pub fn c_complex(&self) -> Complex64 {
        Complex64::new(self.c.0, self.c.1)
    }
    pub fn a_complex(&self) -> Complex64 {
        Complex64::new(self.a.0, self.a.1)
    }
}

/// Outcome of solving a relation pair.
#[derive(Debug, Clone)]
pub enum PcfSolveOutcome {
    Points(Vec<PcfPoint>),
    /// The two relations share a positive-dimensional component.
    Curve(BiPoly),
}

/// Solve the intersection of two orbit relations.
pub fn pcf_solve(rel0: &OrbitRelation, rel1: &OrbitRelation) -> Result<PcfSolveOutcome> {
    if rel0.poly.is_zero() || rel1.poly.is_zero() {
        return Err(Error::InvalidInput("zero relation polynomial".into()));
    }
    let shared = rel0.poly.gcd(&rel1.poly);
    if !shared.is_constant() {
        return Ok(PcfSolveOutcome::Curve(shared));
    }
    // Solve on the squarefree parts: the zero set is unchanged and the
    // candidates become simple roots (a multiplicity-6 factor such as a^6
    // crushes residuals so hard that backward-error rejection of nearby
    // non-solutions is impossible).
    let sf0 = OrbitRelation { poly: rel0.poly.squarefree_part_full(), ..rel0.clone() };
    let sf1 = OrbitRelation { poly: rel1.poly.squarefree_part_full(), ..rel1.clone() };
    // Eliminate a.
    let f = sf0.poly.as_unipoly(Var::A);
    let g = sf1.poly.as_unipoly(Var::A);
    let res_c: UniPoly<QOmega> = f.resultant(&g);
    if res_c.is_zero() {
        // gcd said no common factor; a vanishing resultant then means the
        // leading coefficients in `a` share roots. Fall back to eliminating
        // the other way.
        let rc: UniPoly<QOmega> =
            sf0.poly.as_unipoly(Var::C).resultant(&sf1.poly.as_unipoly(Var::C));
        if rc.is_zero() {
            return Ok(PcfSolveOutcome::Curve(shared));
        }
        return solve_from_resultant(&sf0, &sf1, &rc, Var::A);
    }
    solve_from_resultant(&sf0, &sf1, &res_c, Var::C)
}

/// `eliminated_along = Var::C` means the resultant is a polynomial in `c`
/// (with `a` eliminated) and vice versa.
fn solve_from_resultant(
    rel0: &OrbitRelation,
    rel1: &OrbitRelation,
    res: &UniPoly<QOmega>,
    first_var: Var,
) -> Result<PcfSolveOutcome> {
    let witness = (
        (rel0.critical_index, rel0.preperiod, rel0.period),
        (rel1.critical_index, rel1.preperiod, rel1.period),
    );
    let roots = clustered_roots(res)?;
    let mut points: Vec<PcfPoint> = Vec::new();
    for first in roots {
        // Back-substitute: common roots in the other variable.
        let spec_var = first_var;
        let other = first_var.other();
        let p0 = specialize_complex(&rel0.poly, spec_var, first);
        let p1 = specialize_complex(&rel1.poly, spec_var, first);
        let roots0 = poly_roots(&p0.coeffs).unwrap_or_default();
        let roots1 = poly_roots(&p1.coeffs).unwrap_or_default();
        // Take the union of candidate roots from both specializations:
        // clustered multiple roots of the resultant localize the first
        // coordinate only coarsely, so intersecting the root sets with a
        // tight tolerance can drop genuine solutions. Certification (which
        // refines coordinates against exact witnesses) and the residual
        // filter reject the spurious combinations.
        let mut seconds: Vec<Complex64> = Vec::new();
        let zero0 = p0.is_zero() || p0.coeffs.iter().all(|x| x.norm() < 1e-12);
        let zero1 = p1.is_zero() || p1.coeffs.iter().all(|x| x.norm() < 1e-12);
        if zero0 && zero1 {
            continue; // degenerate: handled by the gcd path
        }
        if !zero0 {
            seconds.extend(&roots0);
        }
        if !zero1 {
            seconds.extend(&roots1);
        }
        seconds.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        seconds.dedup_by(|x, y| (*x - *y).norm() < 1e-9);
        for second in seconds {
            let (cv, av) = match first_var {
                Var::C => (first, second),
                Var::A => (second, first),
            };
            let _ = other;
            if let Some(pt) = certify_candidate(rel0, rel1, cv, av, witness) {
                points.push(pt);
            }
        }
    }
    dedupe_points(&mut points);
    Ok(PcfSolveOutcome::Points(points))
}

fn specialize_complex(p: &BiPoly, v: Var, value: Complex64) -> UniPoly<Complex64> {
    let cp = p.to_cpoly();
    cp.specialize(v, &value)
}

/// Exact squarefree part: `p / gcd(p, p')`, monic.
pub fn squarefree_uni(p: &UniPoly<QOmega>) -> UniPoly<QOmega> {
    if p.is_zero() || p.deg() == 0 {
        return p.clone();
    }
    let d = p.derivative();
    let g = p.gcd_field(&d);
    if g.deg() == 0 {
        return p.monic();
    }
    p.exact_div(&g).map(|q| q.monic()).unwrap_or_else(|| p.monic())
}

/// Numeric roots of an exact polynomial: reduce to the squarefree part
/// exactly (multiple roots stall the simultaneous iteration), then solve
/// and lightly deduplicate.
fn clustered_roots(p: &UniPoly<QOmega>) -> Result<Vec<Complex64>> {
    let sf = squarefree_uni(p);
    let roots = poly_roots(&sf.to_complex_coeffs())?;
    let mut out: Vec<Complex64> = Vec::new();
    'outer: for r in roots {
        for c in &out {
            if (*c - r).norm() < 1e-9 * (1.0 + r.norm()) {
                continue 'outer;
            }
        }
        out.push(r);
    }
    Ok(out)
}

/// Certify a numeric candidate, refining its coordinates in the process.
fn certify_candidate(
    rel0: &OrbitRelation,
    rel1: &OrbitRelation,
    cv: Complex64,
    av: Complex64,
    witness: ((usize, u32, u32), (usize, u32, u32)),
) -> Option<PcfPoint> {
    // (1) Both coordinates exactly recognized.
    if let (Some(ce), Some(ae)) = (recognize_real_qomega(cv), recognize_real_qomega(av)) {
        if rel0.poly.eval(&ce, &ae).is_zero() && rel1.poly.eval(&ce, &ae).is_zero() {
            return Some(PcfPoint {
                c: (ce.to_f64(), 0.0),
                a: (ae.to_f64(), 0.0),
                witness,
                certified: true,
                certificate: "exact",
            });
        }
    }
    // (2) Triangular certificates: one coordinate exact, the other a root
    // of the exact gcd of the two specialized relations.
    for (var, val) in [(Var::A, av), (Var::C, cv)] {
        if let Some(exact) = recognize_real_qomega(val) {
            let v0 = rel0.poly.specialize(var, &exact);
            let v1 = rel1.poly.specialize(var, &exact);
            let d = match (v0.is_zero(), v1.is_zero()) {
                (true, true) => continue, // both vanish identically: curve case
                (true, false) => v1,
                (false, true) => v0,
                (false, false) => v0.gcd_field(&v1),
            };
            if d.is_zero() || d.deg() == 0 {
                continue;
            }
            let d = squarefree_uni(&d);
            let target = if var == Var::A { cv } else { av };
            if let Some(refined) = newton_refine_univariate(&d, target) {
                let (cc, aa) = if var == Var::A {
                    (refined, Complex64::new(exact.to_f64(), 0.0))
                } else {
                    (Complex64::new(exact.to_f64(), 0.0), refined)
                };
                return Some(PcfPoint {
                    c: (cc.re, cc.im),
                    a: (aa.re, aa.im),
                    witness,
                    certified: true,
                    certificate: "triangular",
                });
            }
        }
    }
    // (3) Krawczyk interval Newton on the square system.
    let refined = newton_refine_system(&rel0.poly, &rel1.poly, cv, av);
    let (cv, av) = refined.unwrap_or((cv, av));
    let certified = krawczyk_certify(&rel0.poly, &rel1.poly, cv, av);
    // Backward-error rejection of non-solutions (NaN-safe: any non-finite
    // value fails the acceptance comparison).
    if !cv.is_finite() || !av.is_finite() {
        return None;
    }
    let r0 = rel0.poly.eval_complex(cv, av).norm();
    let r1 = rel1.poly.eval_complex(cv, av).norm();
    let ok0 = r0 <= 1e-9 * abs_gauge(&rel0.poly, cv, av);
    let ok1 = r1 <= 1e-9 * abs_gauge(&rel1.poly, cv, av);
    if !ok0 || !ok1 {
        return None;
    }
    Some(PcfPoint {
        c: (cv.re, cv.im),
        a: (av.re, av.im),
        witness,
        certified,
        certificate: if certified { "krawczyk" } else { "none" },
    })
}

/// Gauge for backward-error tests: `sum |coeff| max(1,|c|)^i max(1,|a|)^j`,
/// the residual scale a rounding-level perturbation of the coefficients
/// can produce (clamped at 1 so it never degenerates at small points).
fn abs_gauge(p: &BiPoly, cv: Complex64, av: Complex64) -> f64 {
    let cb = cv.norm().max(1.0);
    let ab = av.norm().max(1.0);
    let mut acc = 0.0f64;
    for ((i, j), coeff) in p.terms() {
        acc += coeff.to_complex().norm() * cb.powi(*i as i32) * ab.powi(*j as i32);
    }
    acc.max(1e-300)
}

/// Recognize a numeric value as a real element of Q(w), verified only to
/// double precision here; exactness is established by the caller through
/// exact substitution.
fn recognize_real_qomega(v: Complex64) -> Option<QOmega> {
    if v.im.abs() > 1e-9 * (1.0 + v.norm()) {
        return None;
    }
    if v.re.abs() < 1e-9 {
        return Some(QOmega::zero());
    }
    let r = recognize_rat(v.re, 1 << 16)?;
    Some(QOmega::from_rat(r))
}

fn newton_refine_univariate(p: &UniPoly<QOmega>, z0: Complex64) -> Option<Complex64> {
    let cs = p.to_complex_coeffs();
    let deriv: Vec<Complex64> =
        cs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    let eval = |coeffs: &[Complex64], x: Complex64| {
        let mut acc = Complex64::ZERO;
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let mut z = z0;
    for _ in 0..60 {
        let f = eval(&cs, z);
        let df = eval(&deriv, z);
        if df.norm() < 1e-280 {
            return None;
        }
        let step = f / df;
        z -= step;
        if step.norm() < 1e-14 * (1.0 + z.norm()) {
            break;
        }
    }
    let resid = eval(&cs, z).norm();
    let gauge = cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    // Require genuine convergence to a root of d near the candidate.
    if resid < 1e-8 * gauge.max(1.0) && (z - z0).norm() < 1e-3 * (1.0 + z0.norm()) {
        Some(z)
    } else {
        None
    }
}

/// Joint Newton iteration on `(f, g) = 0` in two complex variables.
pub fn newton_refine_system(
    f: &BiPoly,
    g: &BiPoly,
    cv: Complex64,
    av: Complex64,
) -> Option<(Complex64, Complex64)> {
    let sys = NewtonSystem::new(f, g);
    sys.refine(cv, av)
}

/// Precompiled complex form of a square polynomial system, for repeated
/// Newton runs (grid oracles).
pub struct NewtonSystem {
    f: crate::exactalg::bipoly::CPoly,
    g: crate::exactalg::bipoly::CPoly,
    fc: crate::exactalg::bipoly::CPoly,
    fa: crate::exactalg::bipoly::CPoly,
    gc: crate::exactalg::bipoly::CPoly,
    ga: crate::exactalg::bipoly::CPoly,
}

impl NewtonSystem {
    pub fn new(f: &BiPoly, g: &BiPoly) -> Self {
        NewtonSystem {
            f: f.to_cpoly(),
            g: g.to_cpoly(),
            fc: f.derivative(Var::C).to_cpoly(),
            fa: f.derivative(Var::A).to_cpoly(),
            gc: g.derivative(Var::C).to_cpoly(),
            ga: g.derivative(Var::A).to_cpoly(),
        }
    }

    pub fn refine(&self, mut cv: Complex64, mut av: Complex64) -> Option<(Complex64, Complex64)> {
        for _ in 0..60 {
            let fv = self.f.eval(&cv, &av);
            let gv = self.g.eval(&cv, &av);
            let j11 = self.fc.eval(&cv, &av);
            let j12 = self.fa.eval(&cv, &av);
            let j21 = self.gc.eval(&cv, &av);
            let j22 = self.ga.eval(&cv, &av);
            let det = j11 * j22 - j12 * j21;
            if det.norm() < 1e-200 {
                return None;
            }
            let dc = (fv * j22 - gv * j12) / det;
            let da = (gv * j11 - fv * j21) / det;
            cv -= dc;
            av -= da;
            if !cv.is_finite() || !av.is_finite() || cv.norm() + av.norm() > 1e12 {
                return None;
            }
            if dc.norm() + da.norm() < 1e-14 * (1.0 + cv.norm() + av.norm()) {
                return Some((cv, av));
            }
        }
        Some((cv, av))
    }
}

// --- Krawczyk disk arithmetic ------------------------------------------------

/// Complex disk `{z : |z - center| <= radius}` with outward-sloped ops.
#[derive(Debug, Clone, Copy)]
struct CDisk {
    c: Complex64,
    r: f64,
}

const SLOP: f64 = 1e-14;

impl CDisk {
    fn point(c: Complex64) -> Self {
        CDisk { c, r: 0.0 }
    }
    fn add(self, o: CDisk) -> CDisk {
        let c = self.c + o.c;
        CDisk { c, r: (self.r + o.r) * (1.0 + SLOP) + SLOP * c.norm() }
    }
    fn mul(self, o: CDisk) -> CDisk {
        let c = self.c * o.c;
        let r = self.c.norm() * o.r + o.c.norm() * self.r + self.r * o.r;
        CDisk { c, r: r * (1.0 + SLOP) + SLOP * c.norm() }
    }
    fn norm_upper(self) -> f64 {
        self.c.norm() + self.r
    }
}

fn eval_disk(p: &BiPoly, c: CDisk, a: CDisk) -> CDisk {
    let dc = p.deg_var(Var::C) as usize;
    let da = p.deg_var(Var::A) as usize;
    let mut cpow = vec![CDisk::point(Complex64::ONE)];
    for i in 1..=dc {
        cpow.push(cpow[i - 1].mul(c));
    }
    let mut apow = vec![CDisk::point(Complex64::ONE)];
    for i in 1..=da {
        apow.push(apow[i - 1].mul(a));
    }
    let mut acc = CDisk::point(Complex64::ZERO);
    for ((i, j), coeff) in p.terms() {
        let term = cpow[*i as usize]
            .mul(apow[*j as usize])
            .mul(CDisk::point(coeff.to_complex()));
        acc = acc.add(term);
    }
    acc
}

/// Krawczyk existence test for the system `(f, g) = 0` on a small disk
/// pair around `(cv, av)`. Returns true only if the Krawczyk image lands
/// strictly inside the input box, which proves a genuine zero nearby.
fn krawczyk_certify(f: &BiPoly, g: &BiPoly, cv: Complex64, av: Complex64) -> bool {
    let r = 1e-6 * (1.0 + cv.norm().max(av.norm()));
    let xc = CDisk { c: cv, r };
    let xa = CDisk { c: av, r };
    let fc = f.derivative(Var::C);
    let fa = f.derivative(Var::A);
    let gc = g.derivative(Var::C);
    let ga = g.derivative(Var::A);
    // Midpoint Jacobian inverse Y.
    let j11 = fc.eval_complex(cv, av);
    let j12 = fa.eval_complex(cv, av);
    let j21 = gc.eval_complex(cv, av);
    let j22 = ga.eval_complex(cv, av);
    let det = j11 * j22 - j12 * j21;
    if det.norm() < 1e-200 {
        return false;
    }
    let y11 = j22 / det;
    let y12 = -j12 / det;
    let y21 = -j21 / det;
    let y22 = j11 / det;
    // Interval Jacobian on the box.
    let jj11 = eval_disk(&fc, xc, xa);
    let jj12 = eval_disk(&fa, xc, xa);
    let jj21 = eval_disk(&gc, xc, xa);
    let jj22 = eval_disk(&ga, xc, xa);
    // M = I - Y * J(X); bound its operator norm (max row sum of upper
    // bounds).
    let m11 = CDisk::point(Complex64::ONE).add(
        CDisk::point(y11).mul(jj11).add(CDisk::point(y12).mul(jj21)).mul(CDisk::point(-Complex64::ONE)),
    );
    let m12 = CDisk::point(y11)
        .mul(jj12)
        .add(CDisk::point(y12).mul(jj22))
        .mul(CDisk::point(-Complex64::ONE));
    let m21 = CDisk::point(y21)
        .mul(jj11)
        .add(CDisk::point(y22).mul(jj21))
        .mul(CDisk::point(-Complex64::ONE));
    let m22 = CDisk::point(Complex64::ONE).add(
        CDisk::point(y21).mul(jj12).add(CDisk::point(y22).mul(jj22)).mul(CDisk::point(-Complex64::ONE)),
    );
    let mnorm = (m11.norm_upper() + m12.norm_upper()).max(m21.norm_upper() + m22.norm_upper());
    // Newton correction at the midpoint.
    let fv = f.eval_complex(cv, av);
    let gv = g.eval_complex(cv, av);
    let n1 = (y11 * fv + y12 * gv).norm();
    let n2 = (y21 * fv + y22 * gv).norm();
    // K(X) - mid has radius bound |Y F| + |M| * r; containment needs < r.
    n1.max(n2) + mnorm * r < r
}

fn cert_rank(p: &PcfPoint) -> u8 {
    match p.certificate {
        "exact" => 3,
        "triangular" => 2,
        "krawczyk" => 1,
        _ => 0,
    }
}

/// Dust radius of double-precision root localization at a multiplicity-6
/// singular intersection (eps^(1/6)): uncertified candidates this close to
/// a certified point are its numerical shadow, not a separate solution.
const SINGULAR_DUST_RADIUS: f64 = 2e-3;

/// Cluster near-identical points, keeping the best-certified
/// representative of each cluster, and absorb uncertified dust around
/// certified singular intersections.
fn dedupe_points(points: &mut Vec<PcfPoint>) {
    let mut reps: Vec<PcfPoint> = Vec::new();
    for p in points.drain(..) {
        match reps.iter_mut().find(|r| {
            (r.c_complex() - p.c_complex()).norm() < 1e-6
                && (r.a_complex() - p.a_complex()).norm() < 1e-6
        }) {
            Some(r) => {
                if cert_rank(&p) > cert_rank(r) {
                    *r = p;
                }
            }
            None => reps.push(p),
        }
    }
    let certified: Vec<(Complex64, Complex64)> = reps
        .iter()
        .filter(|p| p.certified)
        .map(|p| (p.c_complex(), p.a_complex()))
        .collect();
    reps.retain(|p| {
        p.certified
            || !certified.iter().any(|(cv, av)| {
                (cv - p.c_complex()).norm() < SINGULAR_DUST_RADIUS
                    && (av - p.a_complex()).norm() < SINGULAR_DUST_RADIUS
            })
    });
    reps.sort_by(|p, q| {
        p.c.0
            .total_cmp(&q.c.0)
            .then(p.c.1.total_cmp(&q.c.1))
            .then(p.a.0.total_cmp(&q.a.0))
            .then(p.a.1.total_cmp(&q.a.1))
    });
    *points = reps;
}

// --- exact certification of a given parameter --------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CertifyOutcome {
    /// Both critical orbits revisit a previous point within the cap.
    Pcf,
    /// An orbit exceeded the escape radius (certified non-PCF).
    Escapes,
    Undecided,
}

/// Exact PCF certification of a Q(w)-parameter by direct orbit iteration:
/// revisits are exact equalities, escape is certified by the exact order
/// comparison `|z| > max(10, 4(1 + |c| + |a|))`.
pub fn certify_pcf(c: &QOmega, a: &QOmega, orbit_cap: u32) -> CertifyOutcome {
    assert!(orbit_cap >= 1);
    let param = CubicParam::new(c.clone(), a.clone());
    let abs = |x: &QOmega| if x.is_positive() { x.clone() } else { x.neg() };
    let radius = QOmega::from_int(10).max(
        QOmega::from_int(4).mul(&QOmega::one().add(&abs(c)).add(&abs(a))),
    );
    let mut all_finite = true;
    for start in [QOmega::zero(), c.clone()] {
        let mut orbit = vec![start.clone()];
        let mut z = start;
        let mut resolved = false;
        for _ in 0..orbit_cap {
            z = param.eval(&z);
            if orbit.contains(&z) {
                resolved = true; // finite orbit
                break;
            }
            if abs(&z) > radius {
                return CertifyOutcome::Escapes;
            }
            orbit.push(z.clone());
        }
        if !resolved {
            all_finite = false;
        }
    }
    if all_finite {
        CertifyOutcome::Pcf
    } else {
        CertifyOutcome::Undecided
    }
}

// --- enumeration --------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct PcfEnumeration {
    pub points: Vec<PcfPoint>,
    /// Pairs that degenerated to a shared curve (by witness data).
    pub curve_pairs: usize,
    /// All points satisfied `max(|c|, |a|) <= box_radius`.
    pub box_radius: f64,
    pub all_in_box: bool,
}

/// Deduplicated union of `pcf_solve` over all relation pairs within the
/// degree cap (`3^(n+k) <= maxdeg` per critical point).
pub fn pcf_enumerate(maxdeg: u64) -> Result<PcfEnumeration> {
    let mut rels0 = Vec::new();
    let mut rels1 = Vec::new();
    for n in 0..6u32 {
        for k in 1..=6u32 {
            if 3u64.pow(n + k) <= maxdeg {
                rels0.push(orbit_relation(0, n, k)?);
                rels1.push(orbit_relation(1, n, k)?);
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..rels0.len())
        .flat_map(|i| (0..rels1.len()).map(move |j| (i, j)))
        .collect();
    let solved: Vec<Result<PcfSolveOutcome>> =
        crate::exec::map(&pairs, |&(i, j)| pcf_solve(&rels0[i], &rels1[j]));
    let mut points = Vec::new();
    let mut curve_pairs = 0;
    for outcome in solved {
        match outcome? {
            PcfSolveOutcome::Points(ps) => points.extend(ps),
            PcfSolveOutcome::Curve(_) => curve_pairs += 1,
        }
    }
    dedupe_points(&mut points);
    let box_radius = 10.0;
    let all_in_box = points
        .iter()
        .all(|p| p.c_complex().norm().max(p.a_complex().norm()) <= box_radius);
    Ok(PcfEnumeration { points, curve_pairs, box_radius, all_in_box })
}

/// Independent oracle: dense multi-start Newton on the square system over
/// complex seed grids, deduplicated. Slower but structurally unrelated to
/// the resultant path.
pub fn pcf_grid_oracle(
    rel0: &OrbitRelation,
    rel1: &OrbitRelation,
    grid_n: usize,
    a_seeds: usize,
    box_radius: f64,
) -> Vec<(Complex64, Complex64)> {
    let mut seeds = Vec::new();
    for i in 0..grid_n {
        for j in 0..grid_n {
            let re = -box_radius + 2.0 * box_radius * (i as f64 + 0.5) / grid_n as f64;
            let im = -box_radius + 2.0 * box_radius * (j as f64 + 0.5) / grid_n as f64;
            seeds.push(Complex64::new(re, im));
        }
    }
    let a_grid: Vec<Complex64> = (0..a_seeds)
        .flat_map(|i| {
            (0..a_seeds).map(move |j| {
                Complex64::new(
                    -box_radius + 2.0 * box_radius * (i as f64 + 0.5) / a_seeds as f64,
                    -box_radius + 2.0 * box_radius * (j as f64 + 0.5) / a_seeds as f64,
                )
            })
        })
        .collect();
    // Same squarefree reduction as the solver: simple roots converge fast
    // and reject cleanly.
    let p0 = rel0.poly.squarefree_part_full();
    let p1 = rel1.poly.squarefree_part_full();
    let sys = NewtonSystem::new(&p0, &p1);
    let found: Vec<Vec<(Complex64, Complex64)>> = crate::exec::map(&seeds, |&cseed| {
        let mut local = Vec::new();
        for &aseed in &a_grid {
            if let Some((cv, av)) = sys.refine(cseed, aseed) {
                if cv.norm() > 3.0 * box_radius || av.norm() > 3.0 * box_radius {
                    continue;
                }
                let r0 = p0.eval_complex(cv, av).norm();
                let r1 = p1.eval_complex(cv, av).norm();
                if r0 < 1e-10 * abs_gauge(&p0, cv, av) && r1 < 1e-10 * abs_gauge(&p1, cv, av) {
                    local.push((cv, av));
                }
            }
        }
        local
    });
    let mut sols: Vec<(Complex64, Complex64)> = Vec::new();
    for group in found {
        'cand: for (cv, av) in group {
            for (c0, a0) in &sols {
                if (c0 - cv).norm() < 1e-7 && (a0 - av).norm() < 1e-7 {
                    continue 'cand;
                }
            }
            sols.push((cv, av));
        }
    }
    sols.sort_by(|x, y| {
        x.0.re
            .total_cmp(&y.0.re)
            .then(x.0.im.total_cmp(&y.0.im))
            .then(x.1.re.total_cmp(&y.1.re))
            .then(x.1.im.total_cmp(&y.1.im))
    });
    sols
}

/// Height check for a solved point: genuinely rational coordinates
/// (verified against the witness relations exactly) take the full
/// canonical height over all places; certified algebraic points have
/// exactly vanishing finite contributions (their orbits are finite sets,
/// bounded at every place), so the Archimedean part is the whole height.
pub fn point_height(p: &PcfPoint, s0: u32, s1: u32, tol: f64) -> Result<f64> {
    let cv = p.c_complex();
    let av = p.a_complex();
    if cv.im == 0.0 && av.im == 0.0 {
        if let (Some(cr), Some(ar)) =
            (recognize_rat(cv.re, 1 << 20), recognize_rat(av.re, 1 << 20))
        {
            // Accept the rational reading only when it satisfies the
            // witness relations exactly; a nearby irrational PCF point
            // would otherwise be charged the huge finite-place height of
            // its continued-fraction shadow.
            let ((i0, n0, k0), (i1, n1, k1)) = p.witness;
            let exact_c = QOmega::from_rat(cr.clone());
            let exact_a = QOmega::from_rat(ar.clone());
            let rel0 = orbit_relation(i0, n0, k0)?;
            let rel1 = orbit_relation(i1, n1, k1)?;
            if rel0.poly.eval(&exact_c, &exact_a).is_zero()
                && rel1.poly.eval(&exact_c, &exact_a).is_zero()
            {
                return crate::green::canonical_height(&cr, &ar, s0, s1, tol);
            }
        }
    }
    if !p.certified {
        return Err(Error::Undecided(
            "height shortcut needs a certified finite orbit".into(),
        ));
    }
    crate::green::weighted_arch_height(&CubicParam::new(cv, av), s0, s1, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::qomega::rat;

    fn a() -> BiPoly {
        BiPoly::var(Var::A)
    }
    fn c() -> BiPoly {
        BiPoly::var(Var::C)
    }

    #[test]
    fn orbit_relation_polynomials() {
        // (i=0, n=0, k=1): P(0) - 0 = a^3.
        let r = orbit_relation(0, 0, 1).unwrap();
        assert_eq!(r.poly, a().pow(3));
        // (i=1, n=0, k=1): P(c) - c = a^3 - c^3/6 - c.
        let r = orbit_relation(1, 0, 1).unwrap();
        let expect = a()
            .pow(3)
            .sub(&c().pow(3).scale(&QOmega::from_frac(1, 6)))
            .sub(&c());
        assert_eq!(r.poly, expect);
        // (i=0, n=0, k=2): P^2(0) = a^9/3 - c a^6/2 + a^3.
        let r = orbit_relation(0, 0, 2).unwrap();
        let expect = a()
            .pow(9)
            .scale(&QOmega::from_frac(1, 3))
            .sub(&c().mul(&a().pow(6)).scale(&QOmega::from_frac(1, 2)))
            .add(&a().pow(3));
        assert_eq!(r.poly, expect);
        // degree = 3^(n+k) for i = 0.
        for (n, k) in [(0u32, 1u32), (0, 2), (1, 1), (0, 3), (2, 1)] {
            let r = orbit_relation(0, n, k).unwrap();
            assert_eq!(r.poly.total_degree(), 3u32.pow(n + k));
        }
        // Cap enforcement.
        assert!(matches!(
            orbit_relation(0, 3, 2),
            Err(Error::DegreeCapExceeded { .. })
        ));
    }

    #[test]
    fn solve_basic_pair() {
        // rel0 = (0,(0,1)), rel1 = (1,(0,1)): solutions (0,0), (+-i sqrt6, 0).
        let r0 = orbit_relation(0, 0, 1).unwrap();
        let r1 = orbit_relation(1, 0, 1).unwrap();
        let PcfSolveOutcome::Points(pts) = pcf_solve(&r0, &r1).unwrap() else {
            panic!("expected points");
        };
        assert_eq!(pts.len(), 3, "{pts:?}");
        let sqrt6 = 6.0f64.sqrt();
        let expect = [
            Complex64::new(0.0, -sqrt6),
            Complex64::ZERO,
            Complex64::new(0.0, sqrt6),
        ];
        for ec in expect {
            let matches: Vec<_> = pts
                .iter()
                .filter(|pt| (pt.c_complex() - ec).norm() < 1e-10)
                .collect();
            assert_eq!(matches.len(), 1, "expected one point at c={ec}: {pts:?}");
            assert!(matches[0].a_complex().norm() < 1e-10);
            assert!(matches[0].certified, "{:?}", matches[0]);
        }
    }

    #[test]
    fn solve_detects_shared_curve() {
        let r0 = orbit_relation(0, 0, 1).unwrap();
        let outcome = pcf_solve(&r0, &r0.clone()).unwrap();
        match outcome {
            PcfSolveOutcome::Curve(g) => assert!(g.is_associate(&a().pow(3))),
            _ => panic!("expected curve"),
        }
    }

    #[test]
    fn unicritical_preperiod_check() {
        // {c = 0} with P^2(0) = 0, P(0) != 0: a^6 = -3. Verify via the
        // relation algebra: P^2(0) = a^3 (a^6/3 + 1) at c=0.
        let rel = orbit_relation(0, 0, 2).unwrap();
        let at_c0 = rel.poly.specialize(Var::C, &QOmega::zero());
        // = a^9/3 + a^3
        let mut expect = vec![QOmega::zero(); 10];
        expect[3] = QOmega::from_int(1);
        expect[9] = QOmega::from_frac(1, 3);
        assert_eq!(at_c0, UniPoly::new(expect));
    }

    #[test]
    fn certify_exact_cases() {
        // (0,0): both critical orbits fixed.
        assert_eq!(
            certify_pcf(&QOmega::zero(), &QOmega::zero(), 4),
            CertifyOutcome::Pcf
        );
        // (0,1): orbit of 0 grows and escapes with certificate.
        assert_eq!(
            certify_pcf(&QOmega::zero(), &QOmega::from_int(1), 24),
            CertifyOutcome::Escapes
        );
        // Small cap leaves it undecided.
        assert_eq!(
            certify_pcf(&QOmega::zero(), &QOmega::from_int(1), 2),
            CertifyOutcome::Undecided
        );
    }

    #[test]
    fn grid_oracle_agrees_on_basic_pair() {
        let r0 = orbit_relation(0, 0, 1).unwrap();
        let r1 = orbit_relation(1, 0, 1).unwrap();
        let oracle = pcf_grid_oracle(&r0, &r1, 24, 4, 4.0);
        assert_eq!(oracle.len(), 3, "{oracle:?}");
        let PcfSolveOutcome::Points(pts) = pcf_solve(&r0, &r1).unwrap() else {
            panic!();
        };
        for pt in &pts {
            assert!(
                oracle
                    .iter()
                    .any(|(cv, av)| (cv - pt.c_complex()).norm() < 1e-8
                        && (av - pt.a_complex()).norm() < 1e-8),
                "solver point {pt:?} missing from oracle"
            );
        }
    }

    #[test]
    fn enumerate_small_cap() {
        let res = pcf_enumerate(9).unwrap();
        assert!(res.all_in_box);
        assert!(!res.points.is_empty());
        // (0,0) shows up.
        assert!(res
            .points
            .iter()
            .any(|p| p.c_complex().norm() < 1e-9 && p.a_complex().norm() < 1e-9));
        // Every output is height-zero material: G(c,a) < 0.01 numerically.
        for p in &res.points {
            let param = CubicParam::new(p.c_complex(), p.a_complex());
            let (_, _, g) = crate::green::g0g1g(&param, 1e-9).unwrap();
            assert!(g.value < 0.01, "G = {} at {p:?}", g.value);
        }
        // Certified points have small Archimedean height.
        for p in res.points.iter().filter(|p| p.certified) {
            let h = point_height(p, 1, 1, 1e-8).unwrap();
            assert!(h < 1e-6, "height {h} at {p:?}");
        }
    }

    #[test]
    fn multiplicity_pair_solves_without_junk() {
        // Relations (i=0,(1,1)) x (i=1,(0,1)): rel0 = a^6 (a^3/3 - c/2)
        // carries a multiplicity-6 component whose crushed residuals used
        // to let near-(0,0) non-solutions through; the squarefree solve
        // must deliver exactly the 9 true intersection points.
        let r0 = orbit_relation(0, 1, 1).unwrap();
        let r1 = orbit_relation(1, 0, 1).unwrap();
        let PcfSolveOutcome::Points(pts) = pcf_solve(&r0, &r1).unwrap() else {
            panic!("expected points");
        };
        assert_eq!(pts.len(), 9, "{pts:?}");
        // a = 0 branch: c in {0, +-i sqrt6}; a^3 = 3c/2 branch: c in
        // {+-sqrt3} with three cube roots each.
        let sqrt3 = 3.0f64.sqrt();
        let sqrt6 = 6.0f64.sqrt();
        for ec in [
            Complex64::ZERO,
            Complex64::new(0.0, sqrt6),
            Complex64::new(0.0, -sqrt6),
        ] {
            assert!(
                pts.iter().any(|p| (p.c_complex() - ec).norm() < 1e-9
                    && p.a_complex().norm() < 1e-9),
                "missing a=0 point at c={ec}"
            );
        }
        for sign in [1.0f64, -1.0] {
            let count = pts
                .iter()
                .filter(|p| (p.c_complex() - Complex64::new(sign * sqrt3, 0.0)).norm() < 1e-9)
                .count();
            assert_eq!(count, 3, "three cube roots over c = {sign} sqrt3");
        }
    }

    #[test]
    fn second_pair_count_matches_grid_oracle() {
        // Relations (i=0,(0,2)) x (i=1,(0,1)): every intersection is
        // transversal, so the dense Newton oracle resolves the full set:
        // 3 points with a = 0 and 18 with a^6 = -3.
        let r0 = orbit_relation(0, 0, 2).unwrap();
        let r1 = orbit_relation(1, 0, 1).unwrap();
        let PcfSolveOutcome::Points(pts) = pcf_solve(&r0, &r1).unwrap() else {
            panic!("expected points");
        };
        assert_eq!(pts.len(), 21, "{pts:?}");
        let oracle = pcf_grid_oracle(&r0, &r1, 48, 6, 4.0);
        assert_eq!(oracle.len(), 21, "oracle {oracle:?}");
        for pt in &pts {
            assert!(
                oracle.iter().any(|(cv, av)| (cv - pt.c_complex()).norm() < 1e-7
                    && (av - pt.a_complex()).norm() < 1e-7),
                "missing {pt:?}"
            );
        }
    }

    #[test]
    fn krawczyk_accepts_simple_roots_and_rejects_fakes() {
        // f = c - 1, g = a - 2: simple zero at (1,2).
        let f = c().sub(&BiPoly::one());
        let g = a().sub(&BiPoly::constant(QOmega::from_int(2)));
        assert!(krawczyk_certify(
            &f,
            &g,
            Complex64::ONE,
            Complex64::new(2.0, 0.0)
        ));
        // Far from the zero it must refuse.
        assert!(!krawczyk_certify(
            &f,
            &g,
            Complex64::new(1.1, 0.0),
            Complex64::new(2.0, 0.0)
        ));
    }

    #[test]
    fn relation_coefficients_live_in_z_half_sixth() {
        // Denominators only involve 2 and 3.
        let rel = orbit_relation(1, 1, 2).unwrap();
        for (_, coeff) in rel.poly.terms() {
            for part in [&coeff.x, &coeff.y] {
                let mut d = part.denom().magnitude().clone();
                for p in [2u32, 3] {
                    let pb = num_bigint::BigUint::from(p);
                    while (&d % &pb) == num_bigint::BigUint::ZERO {
                        d /= &pb;
                    }
                }
                assert!(d <= num_bigint::BigUint::from(1u32));
            }
        }
        let _ = rat(1, 2);
    }
}
