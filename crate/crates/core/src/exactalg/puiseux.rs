//! Newton-Puiseux expansion of the branches at infinity of a curve in the
//! `(c, a)` parameter plane.
//!
//! The projective closure of `{F(c, a) = 0}` meets the line at infinity in
//! centers `[1 : s : 0]` (roots of the degree form on the chart `c != 0`)
//! and possibly `[0 : 1 : 0]`. At a center the curve is pulled back to a
//! local equation `Q(tau, alpha) = 0` with `Q(0, 0) = 0`, and the classical
//! Newton-polygon recursion produces the Puiseux branches `alpha(tau)`.
//! After the base change `tau = t^n` every branch is normalized to
//!
//! ```text
//! c(t) = t^-n,   a(t) = t^-n (s + alpha(t))        (center [1 : s : 0])
//! a(t) = t^-n,   c(t) = t^-n gamma(t)              (center [0 : 1 : 0])
//! ```
//!
//! with integer exponents, matching the parameterization used for the
//! t-adic growth statistics.
//!
//! Characteristic roots are found exactly in Q(w) when possible (numeric
//! localization followed by exact verification); a branch whose
//! coefficients leave Q(w) is recomputed with complex coefficients and
//! flagged, so exactness loss is always explicit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots::poly_roots;

use super::bipoly::{BiPoly, Poly2, Var};
use super::laurent::Laurent;
use super::qomega::{recognize_qomega_embeddings, QOmega};
use super::ring::{Ring, Scalar};
use super::series::PuiseuxSeries;
use super::unipoly::UniPoly;

/// Where a branch sits on the line at infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum InfinityCenter {
    /// `[1 : s : 0]`: the `c`-coordinate dominates, `a/c -> s`.
    COverA { s: Complex64, exact: Option<QOmega> },
    /// `[0 : 1 : 0]`: the `a`-coordinate dominates, `c/a -> 0`.
    AOverC,
}

/// Branch coefficients, exact when the expansion stays in Q(w).
#[derive(Debug, Clone)]
pub enum BranchCoeffs {
    Exact { c: PuiseuxSeries<QOmega>, a: PuiseuxSeries<QOmega> },
    Numeric { c: PuiseuxSeries<Complex64>, a: PuiseuxSeries<Complex64> },
}

/// One branch at infinity: `c(t), a(t)` Laurent pair with the pole order
/// `n` of the dominating coordinate.
#[derive(Debug, Clone)]
pub struct Branch {
    pub center: InfinityCenter,
    pub n: u32,
    pub coeffs: BranchCoeffs,
}

impl Branch {
    pub fn is_exact(&self) -> bool {
        matches!(self.coeffs, BranchCoeffs::Exact { .. })
    }

    /// Complex view of the pair, for numeric consumers.
    pub fn complex_pair(&self) -> (PuiseuxSeries<Complex64>, PuiseuxSeries<Complex64>) {
        match &self.coeffs {
            BranchCoeffs::Exact { c, a } => (c.to_complex(), a.to_complex()),
            BranchCoeffs::Numeric { c, a } => (c.clone(), a.clone()),
        }
    }

    /// Substitute the pair into a curve; the result should vanish to its
    /// truncation order when the branch lies on the curve.
    pub fn residual(&self, curve: &BiPoly) -> ResidualReport {
        match &self.coeffs {
            BranchCoeffs::Exact { c, a } => {
                let r = subst_curve(curve, c, a);
                ResidualReport {
                    vanishes: r.is_zero_to_trunc(),
                    checked_to: r.inner.trunc(),
                    max_coeff_norm: 0.0,
                }
            }
            BranchCoeffs::Numeric { c, a } => {
                let r = subst_curve_k(&curve.to_cpoly(), c, a);
                let scale: f64 = r
                    .inner
                    .iter()
                    .map(|(_, v)| v.norm())
                    .fold(0.0, f64::max);
                // Compare against the size of the largest intermediate term.
                let gauge: f64 = curve
                    .to_cpoly()
                    .terms()
                    .map(|(_, v)| v.norm())
                    .fold(1.0, f64::max);
                ResidualReport {
                    vanishes: scale <= 1e-7 * gauge.max(1.0),
                    checked_to: r.inner.trunc(),
                    max_coeff_norm: scale,
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub vanishes: bool,
    pub checked_to: i64,
    pub max_coeff_norm: f64,
}

/// Substitute an exact series pair into an exact curve.
pub fn subst_curve(
    curve: &BiPoly,
    c: &PuiseuxSeries<QOmega>,
    a: &PuiseuxSeries<QOmega>,
) -> PuiseuxSeries<QOmega> {
    subst_curve_generic(curve, c, a)
}

pub fn subst_curve_k<K: Scalar>(
    curve: &Poly2<K>,
    c: &PuiseuxSeries<K>,
    a: &PuiseuxSeries<K>,
) -> PuiseuxSeries<K> {
    subst_curve_generic(curve, c, a)
}

fn subst_curve_generic<K: Scalar>(
    curve: &Poly2<K>,
    c: &PuiseuxSeries<K>,
    a: &PuiseuxSeries<K>,
) -> PuiseuxSeries<K> {
    let dc = curve.deg_var(Var::C);
    let da = curve.deg_var(Var::A);
    let mut cpows = Vec::with_capacity(dc as usize + 1);
    let mut apows = Vec::with_capacity(da as usize + 1);
    let one = PuiseuxSeries::term(K::one(), 0, 1, i64::MAX);
    cpows.push(one.clone());
    for i in 1..=dc as usize {
        cpows.push(cpows[i - 1].mul(c));
    }
    apows.push(one);
    for i in 1..=da as usize {
        apows.push(apows[i - 1].mul(a));
    }
    let mut acc: Option<PuiseuxSeries<K>> = None;
    for ((i, j), coeff) in curve.terms() {
        let term = cpows[*i as usize].mul(&apows[*j as usize]).scale(coeff);
        acc = Some(match acc {
            None => term,
            Some(prev) => prev.add(&term),
        });
    }
    acc.unwrap_or_else(|| PuiseuxSeries::zero(0))
}

/// All branches at infinity of `curve`, each expanded so that at least
/// `order` coefficients beyond the leading one are known.
pub fn newton_puiseux(curve: &BiPoly, order: usize) -> Result<Vec<Branch>> {
    if curve.is_zero() || curve.is_constant() {
        return Err(Error::InvalidInput("curve must be nonconstant".into()));
    }
    let mut branches = Vec::new();
    for center in centers_at_infinity(curve)? {
        branches.extend(expand_center(curve, &center, order)?);
    }
    Ok(branches)
}

/// The branches over one chosen center.
pub fn newton_puiseux_at(
    curve: &BiPoly,
    center: &InfinityCenter,
    order: usize,
) -> Result<Vec<Branch>> {
    if curve.is_zero() || curve.is_constant() {
        return Err(Error::InvalidInput("curve must be nonconstant".into()));
    }
    expand_center(curve, center, order)
}

/// The centers on the line at infinity hit by the closure of the curve.
pub fn centers_at_infinity(curve: &BiPoly) -> Result<Vec<InfinityCenter>> {
    let form = curve.leading_form();
    let d = curve.total_degree();
    let mut centers = Vec::new();
    // Chart c != 0: roots of sum_j f_{d-j, j} s^j.
    let mut coeffs = Vec::with_capacity(d as usize + 1);
    for j in 0..=d {
        coeffs.push(form.coeff(d - j, j));
    }
    let p = UniPoly::new(coeffs);
    if !p.is_constant() {
        let complex: Vec<Complex64> = p.to_complex_coeffs();
        let roots = poly_roots(&complex)?;
        let mut taken: Vec<Complex64> = Vec::new();
        for r in roots {
            if taken.iter().any(|t| (t - r).norm() < 1e-8 * (1.0 + r.norm())) {
                continue; // multiple root: one center, multiplicity handled by the polygon
            }
            taken.push(r);
            let exact = recognize_verified_root(&p, r);
            centers.push(InfinityCenter::COverA { s: r, exact });
        }
    }
    // [0:1:0] lies on the closure iff the pure a^d coefficient vanishes.
    if form.coeff(0, d).is_zero() {
        centers.push(InfinityCenter::AOverC);
    }
    Ok(centers)
}

/// Try to recognize a numeric root of an exact polynomial as an element of
/// Q(w). A root x + y*w pairs with the root x - y*w of the conjugated
/// polynomial (the other real embedding), which reduces recognition to two
/// one-dimensional continued fractions. Any answer is verified exactly.
fn recognize_verified_root(p: &UniPoly<QOmega>, r: Complex64) -> Option<QOmega> {
    if r.im.abs() > 1e-9 * (1.0 + r.norm()) {
        return None; // Q(w) is real
    }
    let conj_p = UniPoly::new(p.coeffs.iter().map(QOmega::conj).collect());
    let conj_embed: Vec<Complex64> = conj_p.to_complex_coeffs();
    let conj_roots = poly_roots(&conj_embed).ok()?;
    for r2 in conj_roots {
        if r2.im.abs() > 1e-9 * (1.0 + r2.norm()) {
            continue;
        }
        for bound in [64u64, 4096, 1 << 20] {
            if let Some(cand) = recognize_qomega_embeddings(r.re, r2.re, bound) {
                if p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn expand_center(curve: &BiPoly, center: &InfinityCenter, order: usize) -> Result<Vec<Branch>> {
    match center {
        InfinityCenter::AOverC => {
            // a = 1/tau, c = gamma/tau: Q(tau, gamma) = tau^d F(gamma/tau, 1/tau)
            let d = curve.total_degree();
            let mut q = UniPoly::<UniPoly<QOmega>>::zero();
            for ((i, j), coeff) in curve.terms() {
                // gamma^i tau^(d-i-j)
                let tau_pow = UniPoly::monomial(coeff.clone(), (d - i - j) as usize);
                q = q.add(&UniPoly::monomial(tau_pow, *i as usize));
            }
            match np_expand_all(&q, order) {
                Ok(sols) => Ok(sols
                    .into_iter()
                    .map(|sol| {
                        let n = sol.ram;
                        let a = Laurent::term(QOmega::one(), -(n as i64), sol.series.trunc() - n as i64);
                        let c = sol.series.mul_term(&QOmega::one(), -(n as i64));
                        Branch {
                            center: InfinityCenter::AOverC,
                            n,
                            coeffs: BranchCoeffs::Exact {
                                c: PuiseuxSeries::from_laurent(c),
                                a: PuiseuxSeries::from_laurent(a),
                            },
                        }
                    })
                    .collect()),
                Err(Error::ExtensionRequired(_)) => {
                    let qc = q_to_complex(&q);
                    let sols = np_expand_all(&qc, order)?;
                    Ok(sols
                        .into_iter()
                        .map(|sol| {
                            let n = sol.ram;
                            let a = Laurent::term(Complex64::ONE, -(n as i64), sol.series.trunc() - n as i64);
                            let c = sol.series.mul_term(&Complex64::ONE, -(n as i64));
                            Branch {
                                center: InfinityCenter::AOverC,
                                n,
                                coeffs: BranchCoeffs::Numeric {
                                    c: PuiseuxSeries::from_laurent(c),
                                    a: PuiseuxSeries::from_laurent(a),
                                },
                            }
                        })
                        .collect())
                }
                Err(e) => Err(e),
            }
        }
        InfinityCenter::COverA { s, exact } => {
            if let Some(s_exact) = exact {
                let q = chart_c_poly(curve, s_exact);
                match np_expand_all(&q, order) {
                    Ok(sols) => {
                        return Ok(sols
                            .into_iter()
                            .map(|sol| {
                                let n = sol.ram;
                                let c = Laurent::term(
                                    QOmega::one(),
                                    -(n as i64),
                                    sol.series.trunc() - n as i64,
                                );
                                let a = sol
                                    .series
                                    .add(&Laurent::term(s_exact.clone(), 0, sol.series.trunc()))
                                    .mul_term(&QOmega::one(), -(n as i64));
                                Branch {
                                    center: center.clone(),
                                    n,
                                    coeffs: BranchCoeffs::Exact {
                                        c: PuiseuxSeries::from_laurent(c),
                                        a: PuiseuxSeries::from_laurent(a),
                                    },
                                }
                            })
                            .collect());
                    }
                    Err(Error::ExtensionRequired(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            // Numeric fallback (irrational center or exact expansion failed).
            let q = chart_c_poly_complex(&curve.to_cpoly(), s);
            let sols = np_expand_all(&q, order)?;
            Ok(sols
                .into_iter()
                .map(|sol| {
                    let n = sol.ram;
                    let c = Laurent::term(Complex64::ONE, -(n as i64), sol.series.trunc() - n as i64);
                    let a = sol
                        .series
                        .add(&Laurent::term(*s, 0, sol.series.trunc()))
                        .mul_term(&Complex64::ONE, -(n as i64));
                    Branch {
                        center: center.clone(),
                        n,
                        coeffs: BranchCoeffs::Numeric {
                            c: PuiseuxSeries::from_laurent(c),
                            a: PuiseuxSeries::from_laurent(a),
                        },
                    }
                })
                .collect())
        }
    }
}

/// Local equation at `[1 : s : 0]`: `Q(tau, alpha) = tau^d F(1/tau, (s+alpha)/tau)`.
fn chart_c_poly(curve: &BiPoly, s: &QOmega) -> UniPoly<UniPoly<QOmega>> {
    let d = curve.total_degree();
    let mut q = UniPoly::<UniPoly<QOmega>>::zero();
    let shift = UniPoly::new(vec![
        UniPoly::constant(s.clone()),
        UniPoly::<QOmega>::one(),
    ]); // s + alpha, constants in tau
    for ((i, j), coeff) in curve.terms() {
        // coeff * tau^(d-i-j) * (s+alpha)^j
        let tau_pow: UniPoly<QOmega> = UniPoly::monomial(coeff.clone(), (d - i - j) as usize);
        let term = shift.pow(*j as usize).scale(&tau_pow);
        q = q.add(&term);
    }
    q
}

fn chart_c_poly_complex(curve: &Poly2<Complex64>, s: &Complex64) -> UniPoly<UniPoly<Complex64>> {
    let d = curve.total_degree();
    let mut q = UniPoly::<UniPoly<Complex64>>::zero();
    let shift = UniPoly::new(vec![UniPoly::constant(*s), UniPoly::<Complex64>::one()]);
    for ((i, j), coeff) in curve.terms() {
        let tau_pow: UniPoly<Complex64> = UniPoly::monomial(*coeff, (d - i - j) as usize);
        let term = shift.pow(*j as usize).scale(&tau_pow);
        q = q.add(&term);
    }
    q
}

fn q_to_complex(q: &UniPoly<UniPoly<QOmega>>) -> UniPoly<UniPoly<Complex64>> {
    UniPoly::new(
        q.coeffs
            .iter()
            .map(|inner| UniPoly::new(inner.coeffs.iter().map(|c| c.to_complex()).collect()))
            .collect(),
    )
}

/// A solved local branch: the series lives in `t` with `tau = t^ram`.
struct LocalSolution<K: Scalar> {
    ram: u32,
    /// `alpha(t)`, integer exponents, positive order.
    series: Laurent<K>,
}

/// Root extraction abstraction: exact-verified over Q(w), clustered Aberth
/// over the complex numbers.
trait CharRoots: Scalar {
    fn char_roots(p: &UniPoly<Self>) -> Result<Vec<(Self, usize)>>;

    /// Scrub representation noise from a local equation. Exact
    /// coefficients pass through; floating coefficients drop terms tiny
    /// relative to the largest one (cancellation residue such as
    /// `gamma^3 - 1/6` evaluated in doubles), which would otherwise fake
    /// polygon vertices.
    fn clean_poly(q: &UniPoly<UniPoly<Self>>) -> UniPoly<UniPoly<Self>> {
        q.clone()
    }
}

impl CharRoots for QOmega {
    fn char_roots(p: &UniPoly<QOmega>) -> Result<Vec<(QOmega, usize)>> {
        let complex = p.to_complex_coeffs();
        let roots = poly_roots(&complex)?;
        let mut clusters: Vec<(Complex64, usize)> = Vec::new();
        'outer: for r in roots {
            for (center, count) in clusters.iter_mut() {
                if (*center - r).norm() < 1e-7 * (1.0 + r.norm()) {
                    *count += 1;
                    continue 'outer;
                }
            }
            clusters.push((r, 1));
        }
        let mut out = Vec::new();
        for (r, mult) in clusters {
            if r.norm() < 1e-10 {
                continue; // zero roots handled by the alpha-divides step
            }
            match recognize_verified_root(p, r) {
                Some(exact) => out.push((exact, mult)),
                None => {
                    return Err(Error::ExtensionRequired(format!(
                        "characteristic root near {r} not in Q(w)"
                    )))
                }
            }
        }
        Ok(out)
    }
}

impl CharRoots for Complex64 {
    fn clean_poly(q: &UniPoly<UniPoly<Complex64>>) -> UniPoly<UniPoly<Complex64>> {
        let scale = q
            .coeffs
            .iter()
            .flat_map(|c| c.coeffs.iter())
            .map(|v| v.norm())
            .fold(0.0f64, f64::max);
        if scale == 0.0 {
            return q.clone();
        }
        let eps = 1e-10 * scale;
        UniPoly::new(
            q.coeffs
                .iter()
                .map(|c| {
                    UniPoly::new(
                        c.coeffs
                            .iter()
                            .map(|v| if v.norm() < eps { Complex64::ZERO } else { *v })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    fn char_roots(p: &UniPoly<Complex64>) -> Result<Vec<(Complex64, usize)>> {
        let roots = poly_roots(&p.coeffs)?;
        let mut clusters: Vec<(Complex64, usize)> = Vec::new();
        'outer: for r in roots {
            if r.norm() < 1e-10 {
                continue;
            }
            for (center, count) in clusters.iter_mut() {
                if (*center - r).norm() < 1e-7 * (1.0 + r.norm()) {
                    *count += 1;
                    continue 'outer;
                }
            }
            clusters.push((r, 1));
        }
        Ok(clusters)
    }
}

/// All Puiseux solutions `alpha(tau) -> 0` of `Q(tau, alpha) = 0`.
fn np_expand_all<K: CharRoots>(
    q: &UniPoly<UniPoly<K>>,
    order: usize,
) -> Result<Vec<LocalSolution<K>>> {
    let mut out = Vec::new();
    np_expand(q, order, 0, &mut out)?;
    Ok(out)
}

fn np_expand<K: CharRoots>(
    q: &UniPoly<UniPoly<K>>,
    order: usize,
    depth: usize,
    out: &mut Vec<LocalSolution<K>>,
) -> Result<()> {
    if depth > 16 {
        return Err(Error::PrecisionLoss("Newton-Puiseux recursion too deep".into()));
    }
    if q.is_zero() {
        return Err(Error::InvalidInput("zero local equation".into()));
    }
    let mut q = K::clean_poly(q);
    // alpha | Q: the zero series is a branch; strip all alpha factors.
    if q.coeffs[0].is_zero() {
        let k = q.coeffs.iter().take_while(|c| c.is_zero()).count();
        out.push(LocalSolution {
            ram: 1,
            series: Laurent::zero(order as i64 + 1),
        });
        q = UniPoly::new(q.coeffs[k..].to_vec());
        if q.is_constant() {
            return Ok(());
        }
    }
    if q.is_constant() {
        return Ok(());
    }

    // Newton polygon: lower hull of (i, ord_tau(q_i)).
    let pts: Vec<(i64, i64)> = q
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, ord_unipoly(c)))
        .collect();
    let hull = lower_hull(&pts);

    for seg in hull.windows(2) {
        let (i0, v0) = seg[0];
        let (i1, v1) = seg[1];
        // alpha ~ gamma tau^mu with mu = (v0 - v1)/(i1 - i0) > 0.
        let num = v0 - v1;
        let den = i1 - i0;
        if num <= 0 {
            continue;
        }
        let g = gcd64(num, den);
        let (p, qden) = (num / g, den / g);
        // Characteristic polynomial from the points on this segment.
        let mut char_coeffs = vec![K::zero(); (i1 - i0) as usize + 1];
        for (i, c) in q.coeffs.iter().enumerate() {
            let i = i as i64;
            if i < i0 || i > i1 || c.is_zero() {
                continue;
            }
            // On the segment: v = v0 - mu (i - i0); integer check via cross mult.
            let lhs = (v0 * den) - num * (i - i0);
            if lhs % den != 0 {
                continue;
            }
            let v = lhs / den;
            if v >= 0 && (v as usize) < c.coeffs.len() {
                let coeff = c.coeff(v as usize);
                if !Ring::is_zero(&coeff) {
                    char_coeffs[(i - i0) as usize] = coeff;
                }
            }
        }
        let char_poly = UniPoly::new(char_coeffs);
        if char_poly.is_constant() {
            continue;
        }
        for (gamma, mult) in K::char_roots(&char_poly)? {
            // Substitute tau -> sigma^qden, alpha -> sigma^p (gamma + alpha').
            let q2 = substitute(&q, qden as u32, p, &gamma);
            if mult == 1 {
                let tail = regular_solve(&q2, order)?;
                // alpha(sigma) = sigma^p (gamma + tail)
                let series = tail
                    .add(&Laurent::term(gamma.clone(), 0, tail.trunc()))
                    .mul_term(&K::one(), p);
                out.push(LocalSolution { ram: qden as u32, series });
            } else {
                let mut sub = Vec::new();
                np_expand(&q2, order, depth + 1, &mut sub)?;
                for s in sub {
                    // alpha(sigma') with sigma = sigma'^(s.ram)
                    let inner = s
                        .series
                        .add(&Laurent::term(gamma.clone(), 0, s.series.trunc()))
                        .mul_term(&K::one(), p * s.ram as i64);
                    out.push(LocalSolution { ram: qden as u32 * s.ram, series: inner });
                }
            }
        }
    }
    Ok(())
}

/// `Q2(sigma, y) = Q(sigma^qden, sigma^p (gamma + y)) / sigma^nu`.
fn substitute<K: Scalar>(
    q: &UniPoly<UniPoly<K>>,
    qden: u32,
    p: i64,
    gamma: &K,
) -> UniPoly<UniPoly<K>> {
    // Scale tau exponents, multiply in sigma^(p i), shift alpha by gamma.
    let shifted: Vec<UniPoly<UniPoly<K>>> = q
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let scaled = scale_exponents(c, qden);
            let with_pow = scaled.shift_up((p as usize) * i);
            UniPoly::monomial(with_pow, i)
        })
        .collect();
    let mut total = UniPoly::<UniPoly<K>>::zero();
    for t in shifted {
        total = total.add(&t);
    }
    // alpha = gamma + y via composition with (gamma + y).
    let comp = total.compose(&UniPoly::new(vec![
        UniPoly::constant(gamma.clone()),
        UniPoly::<K>::one(),
    ]));
    // Divide out the content power sigma^nu.
    let nu = comp
        .coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .map(ord_unipoly)
        .min()
        .unwrap_or(0);
    if nu <= 0 {
        return comp;
    }
    UniPoly::new(
        comp.coeffs
            .iter()
            .map(|c| {
                if c.is_zero() {
                    UniPoly::zero()
                } else {
                    UniPoly::new(c.coeffs[nu as usize..].to_vec())
                }
            })
            .collect(),
    )
}

fn scale_exponents<K: Scalar>(c: &UniPoly<K>, factor: u32) -> UniPoly<K> {
    if c.is_zero() || factor == 1 {
        return c.clone();
    }
    let mut out = vec![K::zero(); (c.deg() * factor as usize) + 1];
    for (e, v) in c.coeffs.iter().enumerate() {
        if !v.is_zero() {
            out[e * factor as usize] = v.clone();
        }
    }
    UniPoly::new(out)
}

fn ord_unipoly<K: Scalar>(c: &UniPoly<K>) -> i64 {
    c.coeffs
        .iter()
        .position(|x| !x.is_zero())
        .map(|p| p as i64)
        .unwrap_or(i64::MAX)
}

/// Solve `R(sigma, y(sigma)) = 0` with `y(0) = 0` at a regular point:
/// the coefficient `e0` of `y^1 sigma^0` is a unit.
fn regular_solve<K: Scalar>(r: &UniPoly<UniPoly<K>>, order: usize) -> Result<Laurent<K>> {
    let e0 = r.coeff(1).coeff(0);
    if e0.is_zero() {
        return Err(Error::ExtensionRequired(
            "regular solve hit a singular tangent (zero linear unit)".into(),
        ));
    }
    let e0_inv = e0.inv().ok_or(Error::LeadingRootUnavailable)?;
    let trunc = order as i64 + 1;
    let mut y = Laurent::zero(trunc);
    for n in 1..trunc {
        // residual = R(sigma, y)
        let mut resid = Laurent::<K>::zero(trunc);
        let mut ypow = Laurent::one(trunc);
        for c in r.coeffs.iter() {
            if !c.is_zero() {
                let cs = Laurent::new(0, c.coeffs.clone(), trunc);
                resid = resid.add(&cs.mul(&ypow));
            }
            ypow = ypow.mul(&y.clone().add(&Laurent::zero(trunc)));
        }
        let rn = resid.coeff(n);
        if !rn.is_zero() {
            y = y.add(&Laurent::term(rn.neg().mul(&e0_inv), n, trunc));
        }
    }
    Ok(y)
}

fn lower_hull(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = pts.to_vec();
    pts.sort();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Keep the hull lower-convex: drop b if it lies on or above (a, p).
            let cross = (b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
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
