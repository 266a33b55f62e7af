//! Executable special-curve checks: the symmetry locus, commutator
//! reduction on curves, critical-orbit collision curves, membership and
//! structure probes for the symmetry sets `Z(q, m, zeta)`, the critical-set
//! permutation identity, and the t-adic growth dichotomy along branches at
//! infinity.
//!
//! The defining data: `Q(z) = zeta P^m(z) + (1 - zeta) c/2`, required to
//! commute with every iterate `P^k` with `zeta^(3^k) = zeta`, together
//! with one of the two crossed orbit relations `Q(P^q(c_0)) = P^q(c_1)` or
//! `Q(P^q(c_1)) = P^q(c_0)`. For `zeta = +-1` everything runs in exact
//! arithmetic over Q(w); other roots of unity run numerically.

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{ComplexParam, CubicParam};
use crate::error::{Error, Result};
use crate::exactalg::bipoly::{BiPoly, Var};
use crate::exactalg::laurent::Laurent;
use crate::exactalg::puiseux::{newton_puiseux, Branch, BranchCoeffs};
use crate::exactalg::qomega::{QOmega, Rat};
use crate::exactalg::ring::Scalar;
use crate::exactalg::unipoly::UniPoly;
use crate::periodic::{critical_value_poly, p_iterate_symbolic};
use crate::roots::poly_roots;

/// The symmetry locus `12 a^3 - c^3 - 6c = 0`: exactly the parameters where
/// the affine involution `z -> -z + c` commutes with `P`.
pub fn symmetry_curve() -> BiPoly {
    BiPoly::var(Var::A)
        .pow(3)
        .scale(&QOmega::from_int(12))
        .sub(&BiPoly::var(Var::C).pow(3))
        .sub(&BiPoly::var(Var::C).scale(&QOmega::from_int(6)))
}

/// Root of unity parameterizing the symmetry candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Zeta {
    One,
    MinusOne,
    Numeric(Complex64),
}

impl Zeta {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Zeta::One => Complex64::ONE,
            Zeta::MinusOne => -Complex64::ONE,
            Zeta::Numeric(z) => z,
        }
    }

    pub fn exact(self) -> Option<QOmega> {
        match self {
            Zeta::One => Some(QOmega::from_int(1)),
            Zeta::MinusOne => Some(QOmega::from_int(-1)),
            Zeta::Numeric(_) => None,
        }
    }

    /// Least `k >= 1` with `zeta^(3^k) = zeta` (1 for `zeta = +-1`).
    pub fn commuting_exponent(self) -> Result<u32> {
        match self {
            Zeta::One | Zeta::MinusOne => Ok(1),
            Zeta::Numeric(z) => {
                let mut w = z;
                for k in 1..=12u32 {
                    w = w * w * w;
                    if (w - z).norm() < 1e-9 {
                        return Ok(k);
                    }
                }
                Err(Error::InvalidInput(
                    "zeta is not a root of unity of small 3-power order".into(),
                ))
            }
        }
    }
}

/// `Q = zeta P^m + (1 - zeta) c/2` as a polynomial in `z` over the
/// parameter ring (exact zeta only).
pub fn symmetry_q_poly(m: u32, zeta: &QOmega) -> UniPoly<BiPoly> {
    let pm = if m == 0 { UniPoly::x() } else { p_iterate_symbolic(m) };
    let shift =
        BiPoly::var(Var::C).scale(&((QOmega::one() - zeta) * QOmega::from_frac(1, 2)));
    pm.scale(&BiPoly::constant(zeta.clone())).add(&UniPoly::constant(shift))
}

/// Apply `Q` to a parameter-ring value (a polynomial in `(c, a)`).
pub fn apply_q(m: u32, zeta: &QOmega, w: &BiPoly) -> BiPoly {
    let mut z = w.clone();
    let half_c = BiPoly::var(Var::C).scale(&QOmega::from_frac(-1, 2));
    let a3 = BiPoly::var(Var::A).pow(3);
    let third = QOmega::from_frac(1, 3);
    for _ in 0..m {
        let z2 = z.mul(&z);
        z = z2.mul(&z).scale(&third).add(&z2.mul(&half_c)).add(&a3);
    }
    let shift =
        BiPoly::var(Var::C).scale(&((QOmega::one() - zeta) * QOmega::from_frac(1, 2)));
    z.scale(zeta).add(&shift)
}

/// Commutator `Q(P^k) - P^k(Q)` expanded in `z`; the coefficients are the
/// commutation constraints on `(c, a)`.
pub fn commutator_coefficients(m: u32, zeta: &QOmega, k: u32) -> Vec<BiPoly> {
    let q = symmetry_q_poly(m, zeta);
    let pk = p_iterate_symbolic(k);
    let lhs = q.compose(&pk);
    let rhs = pk.compose(&q);
    lhs.sub(&rhs).coeffs
}

/// Reduction of every commutator coefficient modulo a curve: the returned
/// remainders are all zero exactly when the commutation identity holds on
/// `{curve = 0}` (away from the vanishing of the curve's leading
/// coefficient, whose pseudo-division power is reported).
#[derive(Debug, Clone)]
pub struct CommutatorReport {
    pub m: u32,
    pub k: u32,
    pub remainders: Vec<BiPoly>,
    pub lc_powers: Vec<u32>,
    pub all_zero: bool,
}

pub fn commutator_on_curve(
    m: u32,
    zeta: &QOmega,
    curve: &BiPoly,
    principal: Var,
) -> CommutatorReport {
    let k = 1u32; // zeta = +-1: zeta^3 = zeta
    let coeffs = commutator_coefficients(m, zeta, k);
    let mut remainders = Vec::new();
    let mut lc_powers = Vec::new();
    for coeff in &coeffs {
        if coeff.is_zero() {
            continue;
        }
        if curve.deg_var(principal) == 0 {
            remainders.push(coeff.clone());
            lc_powers.push(0);
            continue;
        }
        let (r, e) = coeff.pseudo_rem_mod(curve, principal);
        remainders.push(r);
        lc_powers.push(e);
    }
    let all_zero = remainders.iter().all(BiPoly::is_zero);
    CommutatorReport { m, k, remainders, lc_powers, all_zero }
}

/// Collision curve `P^m(c_1) - P^k(c_0)` with the `(1,1)` exclusion
/// flagged rather than refused (that locus reappears as `{c = 0}`).
#[derive(Debug, Clone)]
pub struct CollisionCurve {
    pub m: u32,
    pub k: u32,
    pub poly: BiPoly,
    pub excluded_pair: bool,
}

pub const COLLISION_DEGREE_CAP: u32 = 4;

pub fn collision_curve(m: u32, k: u32) -> Result<CollisionCurve> {
    if m.max(k) > COLLISION_DEGREE_CAP {
        return Err(Error::DegreeCapExceeded {
            requested: m.max(k) as u64,
            cap: COLLISION_DEGREE_CAP as u64,
        });
    }
    let poly = critical_value_poly(1, m).sub(&critical_value_poly(0, k));
    Ok(CollisionCurve { m, k, poly, excluded_pair: (m, k) == (1, 1) })
}

// --- Z(q, m, zeta) membership and probes -------------------------------------

/// The two crossed orbit-relation polynomials `Q(P^q(c_i)) - P^q(c_j)` for
/// `(i, j) in {(0,1), (1,0)}` (exact zeta).
pub fn orbit_relation_polys(q: u32, m: u32, zeta: &QOmega) -> [(usize, usize, BiPoly); 2] {
    let v0 = critical_value_poly(0, q);
    let v1 = critical_value_poly(1, q);
    let r01 = apply_q(m, zeta, &v0).sub(&v1);
    let r10 = apply_q(m, zeta, &v1).sub(&v0);
    [(0, 1, r01), (1, 0, r10)]
}

#[derive(Debug, Clone, Serialize)]
pub struct ZMembership {
    pub member: bool,
    /// Commuting iterate exponent used.
    pub k: u32,
    /// Which crossed relation held, when membership holds.
    pub witness: Option<(usize, usize)>,
    pub commutes: bool,
}

/// Exact membership test for `zeta = +-1` at an exact parameter.
pub fn z_membership_exact(
    q: u32,
    m: u32,
    zeta: Zeta,
    c: &QOmega,
    a: &QOmega,
) -> Result<ZMembership> {
    let ze = zeta
        .exact()
        .ok_or_else(|| Error::InvalidInput("exact mode requires zeta = +-1".into()))?;
    let k = zeta.commuting_exponent()?;
    let commutes = commutator_coefficients(m, &ze, k)
        .iter()
        .all(|p| p.eval(c, a).is_zero());
    let mut witness = None;
    if commutes {
        for (i, j, rel) in orbit_relation_polys(q, m, &ze) {
            if rel.eval(c, a).is_zero() {
                witness = Some((i, j));
                break;
            }
        }
    }
    Ok(ZMembership { member: commutes && witness.is_some(), k, witness, commutes })
}

/// Numeric membership test (any root of unity): commutation is sampled on
/// 30 test points, the orbit relations checked to 1e-9 relative accuracy.
pub fn z_membership_numeric(
    q: u32,
    m: u32,
    zeta: Zeta,
    c: Complex64,
    a: Complex64,
) -> Result<ZMembership> {
    let k = zeta.commuting_exponent()?;
    let zc = zeta.to_complex();
    let p = CubicParam::new(c, a);
    let qmap = |w: Complex64| zc * p.eval_n(&w, m) + (Complex64::ONE - zc) * c / 2.0;
    let scale = 1.0 + c.norm().max(a.norm());
    let mut commutes = true;
    for t in 0..30 {
        let theta = 0.7 + t as f64 * 0.37;
        let z = Complex64::from_polar(0.3 + 0.05 * t as f64, theta) * scale;
        let lhs = qmap(p.eval_n(&z, k));
        let rhs = p.eval_n(&qmap(z), k);
        let gauge = 1.0 + lhs.norm().max(rhs.norm());
        if (lhs - rhs).norm() > 1e-9 * gauge {
            commutes = false;
            break;
        }
    }
    let mut witness = None;
    if commutes {
        let (c0, c1) = p.critical_points();
        let o0 = p.eval_n(&c0, q);
        let o1 = p.eval_n(&c1, q);
        let r01 = qmap(o0) - o1;
        let r10 = qmap(o1) - o0;
        let gauge = 1.0 + o0.norm().max(o1.norm());
        if r01.norm() <= 1e-9 * gauge {
            witness = Some((0, 1));
        } else if r10.norm() <= 1e-9 * gauge {
            witness = Some((1, 0));
        }
    }
    Ok(ZMembership { member: commutes && witness.is_some(), k, witness, commutes })
}

/// Structure of a `Z(q, m, zeta)` probe.
#[derive(Debug, Clone)]
pub enum ZProbeOutcome {
    /// A positive-dimensional component: the defining polynomial (as
    /// computed, possibly with multiplicity) and its squarefree-reduced
    /// normalized form.
    Curve { poly: BiPoly, reduced: BiPoly },
    /// Zero-dimensional part: solved candidate points.
    Finite { points: Vec<(Complex64, Complex64)> },
}

/// Exact probe for `zeta = +-1`: intersect the commutation constraints
/// with each crossed orbit relation and classify.
pub fn z_probe(q: u32, m: u32, zeta: Zeta) -> Result<Vec<ZProbeOutcome>> {
    let ze = zeta
        .exact()
        .ok_or_else(|| Error::InvalidInput("exact probe requires zeta = +-1".into()))?;
    let k = zeta.commuting_exponent()?;
    let comm: Vec<BiPoly> = commutator_coefficients(m, &ze, k)
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect();
    let g_comm = comm
        .iter()
        .fold(BiPoly::zero(), |acc, p| if acc.is_zero() { p.clone() } else { acc.gcd(p) });
    let mut outcomes = Vec::new();
    for (_, _, rel) in orbit_relation_polys(q, m, &ze) {
        let constraint = if comm.is_empty() {
            // Commutation holds identically; the relation is the whole
            // story.
            rel.clone()
        } else if rel.is_zero() {
            g_comm.clone()
        } else {
            g_comm.gcd(&rel)
        };
        if constraint.is_zero() {
            // No constraint at all: the probe degenerates to the plane.
            outcomes.push(ZProbeOutcome::Curve { poly: BiPoly::zero(), reduced: BiPoly::zero() });
            continue;
        }
        if !constraint.is_constant() {
            let var = if constraint.deg_var(Var::A) > 0 { Var::A } else { Var::C };
            let reduced = constraint.squarefree_part(var);
            outcomes.push(ZProbeOutcome::Curve { poly: constraint, reduced });
        } else {
            // Zero-dimensional: solve the pair (lowest-degree commutation
            // constraint, relation) and filter against everything.
            let mut points = Vec::new();
            if !comm.is_empty() && !rel.is_zero() {
                let base = comm.iter().min_by_key(|p| p.total_degree()).unwrap().clone();
                points = solve_pair_numeric(&base, &rel, &comm)?;
            }
            outcomes.push(ZProbeOutcome::Finite { points });
        }
    }
    Ok(outcomes)
}

/// Numeric finiteness probe for general roots of unity: checks that the
/// eliminants of the constraint system are nonzero in both directions,
/// which bounds `Z(q, m, zeta)` to a finite set.
#[derive(Debug, Clone, Serialize)]
pub struct FinitenessEvidence {
    pub eliminant_c_nonzero: bool,
    pub eliminant_a_nonzero: bool,
    pub finite: bool,
}

pub fn z_finiteness_probe(_q: u32, m: u32, zeta: Zeta) -> Result<FinitenessEvidence> {
    let zc = zeta.to_complex();
    let k = zeta.commuting_exponent()?;
    let lift = |p: &UniPoly<BiPoly>| -> UniPoly<crate::exactalg::bipoly::CPoly> {
        UniPoly::new(p.coeffs.iter().map(|c| c.to_cpoly()).collect())
    };
    let pk = lift(&p_iterate_symbolic(k));
    let pm = lift(&if m == 0 { UniPoly::x() } else { p_iterate_symbolic(m) });
    let shift =
        crate::exactalg::bipoly::CPoly::var(Var::C).scale(&((Complex64::ONE - zc) / 2.0));
    let qpoly = pm
        .scale(&crate::exactalg::bipoly::CPoly::constant(zc))
        .add(&UniPoly::constant(shift));
    let diff = qpoly.compose(&pk).sub(&pk.compose(&qpoly));
    let mut constraints: Vec<crate::exactalg::bipoly::CPoly> = diff
        .coeffs
        .into_iter()
        .filter(|p| {
            let scale = p.terms().map(|(_, v)| v.norm()).fold(0.0, f64::max);
            scale > 1e-9
        })
        .collect();
    constraints.sort_by_key(|p| p.total_degree());
    if constraints.len() < 2 {
        return Ok(FinitenessEvidence {
            eliminant_c_nonzero: false,
            eliminant_a_nonzero: false,
            finite: false,
        });
    }
    // Generic-fiber emptiness: if the constraints share no common root in
    // the remaining variable over a generic specialization, the variety
    // misses a generic fiber in that direction, hence is finite in it.
    let fiber_empty = |spec_var: Var| -> bool {
        'nodes: for t in 0..5 {
            let node = Complex64::from_polar(0.9 + 0.13 * t as f64, 0.31 + t as f64);
            let specs: Vec<UniPoly<Complex64>> = constraints
                .iter()
                .map(|p| p.specialize(spec_var, &node))
                .filter(|u| !u.is_zero())
                .collect();
            let Some(first) = specs.first() else { continue };
            if first.deg() == 0 {
                return true; // a nonzero constant constraint: empty fiber
            }
            let Ok(roots) = poly_roots(&first.coeffs) else { continue };
            'roots: for r in roots {
                for other in specs.iter().skip(1) {
                    let gauge: f64 = other
                        .coeffs
                        .iter()
                        .enumerate()
                        .map(|(k, c)| c.norm() * r.norm().max(1.0).powi(k as i32))
                        .sum();
                    if other.eval(&r).norm() > 1e-6 * gauge.max(1.0) {
                        continue 'roots; // this root fails some constraint
                    }
                }
                continue 'nodes; // common root found: fiber not empty
            }
            return true;
        }
        false
    };
    let ec = fiber_empty(Var::C);
    let ea = fiber_empty(Var::A);
    Ok(FinitenessEvidence { eliminant_c_nonzero: ec, eliminant_a_nonzero: ea, finite: ec && ea })
}

fn solve_pair_numeric(
    f: &BiPoly,
    g: &BiPoly,
    all_constraints: &[BiPoly],
) -> Result<Vec<(Complex64, Complex64)>> {
    let rel_f = crate::pcf::OrbitRelation {
        critical_index: 0,
        preperiod: 0,
        period: 1,
        poly: f.clone(),
    };
    let rel_g = crate::pcf::OrbitRelation {
        critical_index: 1,
        preperiod: 0,
        period: 1,
        poly: g.clone(),
    };
    match crate::pcf::pcf_solve(&rel_f, &rel_g)? {
        crate::pcf::PcfSolveOutcome::Curve(_) => Ok(Vec::new()),
        crate::pcf::PcfSolveOutcome::Points(pts) => Ok(pts
            .into_iter()
            .map(|p| (p.c_complex(), p.a_complex()))
            .filter(|&(cv, av)| {
                all_constraints
                    .iter()
                    .all(|p| p.eval_complex(cv, av).norm() <= 1e-6 * (1.0 + cv.norm() + av.norm()))
            })
            .collect()),
    }
}

// --- critical-set permutation -------------------------------------------------

/// Numeric critical set of `P^j`: union of the preimages `P^-i({0, c})`
/// for `i < j` (the roots of `(P^j)'`).
pub fn critical_set(p: &ComplexParam, j: u32) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for i in 0..j {
        let iter = p.iterate_poly(i);
        for target in [Complex64::ZERO, p.c] {
            let shifted = iter.sub(&UniPoly::constant(target));
            out.extend(poly_roots(&shifted.coeffs)?);
        }
    }
    Ok(out)
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one_sided = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0f64, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Check `Q(crit(P^(k+m))) = Q(crit(P^m)) union crit(P^k)` as sets, to a
/// Hausdorff tolerance of 1e-7.
pub fn critical_set_permutation_check(
    p: &ComplexParam,
    m: u32,
    k: u32,
    zeta: Zeta,
) -> Result<bool> {
    let zc = zeta.to_complex();
    let qmap = |w: Complex64| zc * p.eval_n(&w, m) + (Complex64::ONE - zc) * p.c / 2.0;
    let lhs: Vec<Complex64> = critical_set(p, k + m)?.into_iter().map(qmap).collect();
    let mut rhs: Vec<Complex64> = critical_set(p, m)?.into_iter().map(qmap).collect();
    rhs.extend(critical_set(p, k)?);
    Ok(hausdorff(&lhs, &rhs) < 1e-7)
}

// --- t-adic branch growth ------------------------------------------------------

/// Classification of the Green growth of one critical orbit along a branch
/// at infinity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GrowthClass {
    /// The orbit stays t-adically bounded through the branch.
    Bounded,
    /// `ord_t(P^q(c_i))` eventually triples: the escape rate
    /// `a = lim -ord_t(P^q(c_i)) / 3^q` is a positive rational.
    Escaping { rate_num: i64, rate_den: i64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchGrowth {
    /// `ord_t(P^q(c_i))` for q = 1..Q; `None` marks an exact zero (the
    /// orbit sits at a persistently vanishing series).
    pub orders: Vec<Option<i64>>,
    pub class: GrowthClass,
}

/// Compute the growth data of critical point `i` along a branch.
pub fn branch_growth(branch: &Branch, i: usize, q_max: u32) -> Result<BranchGrowth> {
    assert!(i <= 1);
    if q_max < 3 || q_max > 10 {
        return Err(Error::InvalidInput("q_max must be in 3..=10".into()));
    }
    match &branch.coeffs {
        BranchCoeffs::Exact { c, a } => {
            growth_from_series(&c.inner, &a.inner, i, q_max, |l: &Laurent<QOmega>| l.clone())
        }
        BranchCoeffs::Numeric { c, a } => {
            growth_from_series(&c.inner, &a.inner, i, q_max, clean_numeric)
        }
    }
}

fn clean_numeric(l: &Laurent<Complex64>) -> Laurent<Complex64> {
    let scale = l.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return l.clone();
    }
    l.map(|v| if v.norm() < 1e-9 * scale { Complex64::ZERO } else { *v })
}

fn growth_from_series<K: Scalar>(
    c: &Laurent<K>,
    a: &Laurent<K>,
    i: usize,
    q_max: u32,
    clean: impl Fn(&Laurent<K>) -> Laurent<K>,
) -> Result<BranchGrowth> {
    let trunc = c.trunc().min(a.trunc());
    let half = K::from_frac(-1, 2);
    let third = K::from_frac(1, 3);
    let half_c = c.scale(&half);
    let a3 = a.pow(3);
    let mut z = if i == 0 { Laurent::zero(trunc) } else { c.clone() };
    let mut orders: Vec<Option<i64>> = Vec::new();
    let ord_c = c.order();
    let ord_a3 = a3.order();
    while orders.len() < q_max as usize {
        // Once the cubic term strictly t-adically dominates the other two
        // and the order is negative, ord(P(z)) = 3 ord(z) holds exactly
        // from here on (the domination is self-reinforcing); extrapolate
        // instead of iterating into coefficient underflow.
        if let Some(o) = z.order() {
            let o3 = 3 * o;
            let oc = ord_c.map(|v| v + 2 * o).unwrap_or(i64::MAX);
            let oa = ord_a3.unwrap_or(i64::MAX);
            if o < 0 && o3 < oc && o3 < oa {
                let mut cur = o;
                while orders.len() < q_max as usize {
                    cur = cur.checked_mul(3).ok_or_else(|| {
                        Error::PrecisionLoss("order overflow during extrapolation".into())
                    })?;
                    orders.push(Some(cur));
                }
                break;
            }
        }
        let z2 = z.mul(&z);
        let z3 = z2.mul(&z);
        z = clean(&z3.scale(&third).add(&z2.mul(&half_c)).add(&a3));
        if z.trunc() <= z.order_lb() && !z.is_zero_to_trunc() {
            return Err(Error::PrecisionLoss(
                "branch truncation exhausted during orbit iteration".into(),
            ));
        }
        orders.push(z.order());
    }
    // Classify on the last three steps.
    let tail = &orders[orders.len() - 3..];
    let class = if tail.iter().all(|o| o.is_none()) {
        GrowthClass::Bounded
    } else if tail.iter().all(|o| o.is_some()) {
        let rates: Vec<Rat> = tail
            .iter()
            .enumerate()
            .map(|(idx, o)| {
                let q = orders.len() - 3 + idx + 1;
                Rat::new((-o.unwrap()).into(), num_bigint::BigInt::from(3i64).pow(q as u32))
            })
            .collect();
        if rates[0] == rates[1] && rates[1] == rates[2] && rates[0] > Rat::new(0.into(), 1.into())
        {
            let num = rates[0].numer();
            let den = rates[0].denom();
            GrowthClass::Escaping {
                rate_num: i64::try_from(num).unwrap_or(i64::MAX),
                rate_den: i64::try_from(den).unwrap_or(i64::MAX),
            }
        } else if tail.windows(2).all(|w| w[1].unwrap() >= w[0].unwrap()) {
            GrowthClass::Bounded
        } else {
            return Err(Error::Undecided(
                "order sequence neither stabilized nor bounded".into(),
            ));
        }
    } else {
        GrowthClass::Bounded
    };
    Ok(BranchGrowth { orders, class })
}

/// Convenience: expand the curve's branches and classify both critical
/// orbits along each.
pub fn branch_growth_all(curve: &BiPoly, q_max: u32) -> Result<Vec<(Branch, [BranchGrowth; 2])>> {
    let branches = newton_puiseux(curve, 4 * q_max as usize + 8)?;
    let mut out = Vec::new();
    for b in branches {
        let g0 = branch_growth(&b, 0, q_max)?;
        let g1 = branch_growth(&b, 1, q_max)?;
        out.push((b, [g0, g1]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::g0g1g;

    fn a() -> BiPoly {
        BiPoly::var(Var::A)
    }
    fn c() -> BiPoly {
        BiPoly::var(Var::C)
    }

    #[test]
    fn symmetry_curve_values() {
        let s = symmetry_curve();
        assert!(s.eval(&QOmega::zero(), &QOmega::zero()).is_zero());
        assert_eq!(s.eval(&QOmega::from_int(1), &QOmega::from_int(1)), QOmega::from_int(5));
    }

    #[test]
    fn involution_commutes_exactly_on_symmetry_curve() {
        // Q = -z + c commutes with P exactly on {12a^3 - c^3 - 6c = 0}.
        let rep = commutator_on_curve(0, &QOmega::from_int(-1), &symmetry_curve(), Var::A);
        assert!(rep.all_zero, "{rep:?}");
        // Negative control: reduction mod {a = 0} leaves a c-term.
        let rep = commutator_on_curve(0, &QOmega::from_int(-1), &a(), Var::A);
        assert!(!rep.all_zero);
        // Q = P commutes with P identically (m = 1, zeta = 1).
        let rep = commutator_on_curve(1, &QOmega::from_int(1), &a(), Var::A);
        assert!(rep.all_zero);
    }

    #[test]
    fn commutator_is_symmetry_curve() {
        // The commutation constraint for (m=0, zeta=-1) is associate to
        // the symmetry curve.
        let coeffs = commutator_coefficients(0, &QOmega::from_int(-1), 1);
        let nonzero: Vec<&BiPoly> = coeffs.iter().filter(|p| !p.is_zero()).collect();
        assert_eq!(nonzero.len(), 1);
        assert!(nonzero[0].is_associate(&symmetry_curve()));
    }

    #[test]
    fn collision_curves() {
        // (1,1): P(c) - P(0) = -c^3/6, zero set {c = 0}, flagged.
        let col = collision_curve(1, 1).unwrap();
        assert!(col.excluded_pair);
        assert!(col.poly.is_associate(&c().pow(3)));
        // (2,1): degree 9; at (0, a): P^2(c) - P(0) becomes a^9/3.
        let col = collision_curve(2, 1).unwrap();
        assert_eq!(col.poly.total_degree(), 9);
        let at = col.poly.specialize(Var::C, &QOmega::zero());
        let mut expect = vec![QOmega::zero(); 10];
        expect[9] = QOmega::from_frac(1, 3);
        assert_eq!(at, UniPoly::new(expect));
    }

    #[test]
    fn z_membership_cases() {
        // (0,0,-1) at (0,0) (a symmetry-curve point): witness (0,1).
        let m =
            z_membership_exact(0, 0, Zeta::MinusOne, &QOmega::zero(), &QOmega::zero()).unwrap();
        assert!(m.member);
        assert_eq!(m.witness, Some((0, 1)));
        // Generic point (1,1): not a member.
        let m = z_membership_exact(0, 0, Zeta::MinusOne, &QOmega::from_int(1), &QOmega::from_int(1))
            .unwrap();
        assert!(!m.member);
        assert!(!m.commutes);
        // (1,0,1) at (0, a): P(c_0) = P(c_1) when c = 0.
        let m = z_membership_exact(1, 0, Zeta::One, &QOmega::zero(), &QOmega::from_int(2)).unwrap();
        assert!(m.member, "{m:?}");
        // Numeric mode agrees on a sampled symmetry-curve point.
        let cv = Complex64::new(1.3, 0.0);
        let av = Complex64::new(((1.3f64.powi(3) + 6.0 * 1.3) / 12.0).cbrt(), 0.0);
        let m = z_membership_numeric(0, 0, Zeta::MinusOne, cv, av).unwrap();
        assert!(m.member, "{m:?}");
    }

    #[test]
    fn z_probe_symmetry_cases() {
        // Z(0,0,-1) and Z(1,0,-1): curve associate to 12a^3 - c^3 - 6c.
        for q in [0u32, 1] {
            let outcomes = z_probe(q, 0, Zeta::MinusOne).unwrap();
            let found = outcomes.iter().any(|o| match o {
                ZProbeOutcome::Curve { reduced, .. } => {
                    reduced.is_associate(&symmetry_curve())
                }
                _ => false,
            });
            assert!(found, "q={q}: {outcomes:?}");
        }
        // Z(1,0,1): {c = 0} (c^3 up to multiplicity; reduced form c).
        let outcomes = z_probe(1, 0, Zeta::One).unwrap();
        let found = outcomes.iter().any(|o| match o {
            ZProbeOutcome::Curve { poly, reduced } => {
                poly.is_associate(&c().pow(3)) && reduced.is_associate(&c())
            }
            _ => false,
        });
        assert!(found, "{outcomes:?}");
        // Z(0,1,1) (q=0, m=1, zeta=1): relations P(c_i) = c_j, the
        // collision-type loci.
        let outcomes = z_probe(0, 1, Zeta::One).unwrap();
        for o in &outcomes {
            match o {
                ZProbeOutcome::Curve { poly, .. } => {
                    let is01 = poly.is_associate(&critical_value_poly(0, 1).sub(&c()));
                    let is10 = poly.is_associate(&critical_value_poly(1, 1));
                    assert!(is01 || is10, "{poly:?}");
                }
                _ => panic!("expected curves"),
            }
        }
    }

    #[test]
    fn finiteness_probe_for_complex_zeta() {
        // zeta = i (zeta^2 != 1): Z(q, m, zeta) is finite; the numeric
        // eliminants in both directions are nonzero.
        let ev = z_finiteness_probe(0, 1, Zeta::Numeric(Complex64::I)).unwrap();
        assert!(ev.finite, "{ev:?}");
    }

    #[test]
    fn permutation_check_on_symmetry_curve() {
        // A real point of the symmetry curve: c = 1.3.
        let cv = 1.3f64;
        let av = ((cv.powi(3) + 6.0 * cv) / 12.0).cbrt();
        let p = CubicParam::new(Complex64::new(cv, 0.0), Complex64::new(av, 0.0));
        assert!(critical_set_permutation_check(&p, 0, 1, Zeta::MinusOne).unwrap());
        assert!(critical_set_permutation_check(&p, 0, 2, Zeta::MinusOne).unwrap());
        // m=1, zeta=1 (Q = P) at a generic parameter.
        let p = CubicParam::new(Complex64::new(0.4, 0.1), Complex64::new(0.8, -0.3));
        assert!(critical_set_permutation_check(&p, 1, 1, Zeta::One).unwrap());
        // Cardinality with multiplicity: |crit(P^j)| = 3^j - 1.
        let cs = critical_set(&p, 3).unwrap();
        assert_eq!(cs.len(), 3usize.pow(3) - 1);
    }

    #[test]
    fn branch_growth_dichotomy() {
        // {a = 0}: c_0 = 0 is fixed (Bounded); c_1 escapes at rate 1.
        let rows = branch_growth_all(&a(), 8).unwrap();
        assert_eq!(rows.len(), 1);
        let [g0, g1] = &rows[0].1;
        assert_eq!(g0.class, GrowthClass::Bounded);
        assert_eq!(g1.class, GrowthClass::Escaping { rate_num: 1, rate_den: 1 });
        // ord(P^q(c_1)) = -3^q.
        for (idx, o) in g1.orders.iter().enumerate() {
            assert_eq!(*o, Some(-(3i64.pow(idx as u32 + 1))));
        }
        // {c = 0}: both critical orbits escape at rate 1.
        let rows = branch_growth_all(&c(), 8).unwrap();
        assert_eq!(rows.len(), 1);
        let [g0, g1] = &rows[0].1;
        assert_eq!(g0.class, GrowthClass::Escaping { rate_num: 1, rate_den: 1 });
        assert_eq!(g1.class, GrowthClass::Escaping { rate_num: 1, rate_den: 1 });
        // Stability from Q=6 to Q=8.
        for qm in [6u32, 7, 8] {
            let rows = branch_growth_all(&a(), qm).unwrap();
            assert_eq!(rows[0].1[0].class, GrowthClass::Bounded);
            assert_eq!(
                rows[0].1[1].class,
                GrowthClass::Escaping { rate_num: 1, rate_den: 1 }
            );
        }
    }

    #[test]
    fn growth_rate_positive_on_numeric_branch() {
        // Per_1(0) second factor: a^3 - c^3/6 - c (irrational centers, so
        // numeric branches). All escaping rates must be positive.
        let curve = a()
            .pow(3)
            .sub(&c().pow(3).scale(&QOmega::from_frac(1, 6)))
            .sub(&c());
        let rows = branch_growth_all(&curve, 6).unwrap();
        assert_eq!(rows.len(), 3);
        for (_, [g0, g1]) in &rows {
            for g in [g0, g1] {
                if let GrowthClass::Escaping { rate_num, rate_den } = g.class {
                    assert!(rate_num > 0 && rate_den > 0);
                }
            }
        }
    }

    #[test]
    fn green_proportionality_on_symmetry_curve() {
        // g0 = g1 on the symmetry curve (weights (1,1)).
        let mut checked = 0;
        for t in 0..40 {
            if checked >= 20 {
                break;
            }
            let cv = 1.0 + 0.25 * t as f64;
            let av = ((cv.powi(3) + 6.0 * cv) / 12.0).cbrt();
            let p = CubicParam::new(Complex64::new(cv, 0.0), Complex64::new(av, 0.0));
            let (g0, g1, g) = g0g1g(&p, 1e-10).unwrap();
            if g.value <= 0.0 {
                continue;
            }
            assert!(
                (g0.value - g1.value).abs() < 1e-7,
                "c={cv}: g0={} g1={}",
                g0.value,
                g1.value
            );
            checked += 1;
        }
        assert!(checked >= 10, "not enough escaping samples");
    }

    /// Sample escaping points of a collision curve (the (1,1) case is the
    /// a-free curve {c=0}: sweep a directly there).
    fn collision_points(col: &CollisionCurve, want: usize) -> Vec<ComplexParam> {
        let mut out = Vec::new();
        for t in 0..80 {
            if out.len() >= want {
                break;
            }
            if col.poly.deg_var(Var::A) == 0 {
                let av = Complex64::new(1.4 + 0.21 * t as f64, 0.3);
                out.push(CubicParam::new(Complex64::ZERO, av));
                continue;
            }
            let cv = Complex64::new(1.8 + 0.31 * t as f64, 0.4);
            let spec = col.poly.to_cpoly().specialize(Var::C, &cv);
            let Ok(roots) = poly_roots(&spec.coeffs) else { continue };
            for av in roots {
                out.push(CubicParam::new(cv, av));
            }
        }
        out
    }

    #[test]
    fn collision_green_relation() {
        // On {P^m(c_1) = P^k(c_0)}: 3^m g1 = 3^k g0.
        for (m, k) in [(1u32, 1u32), (2, 1)] {
            let col = collision_curve(m, k).unwrap();
            let mut checked = 0;
            for p in collision_points(&col, 60) {
                if checked >= 10 {
                    break;
                }
                let (g0, g1, g) = g0g1g(&p, 1e-9).unwrap();
                if g.value < 0.05 {
                    continue;
                }
                let lhs = 3f64.powi(m as i32) * g1.value;
                let rhs = 3f64.powi(k as i32) * g0.value;
                assert!(
                    (lhs - rhs).abs() < 1e-6,
                    "(m,k)=({m},{k}) c={:?} a={:?}: {lhs} vs {rhs}",
                    p.c,
                    p.a
                );
                checked += 1;
            }
            assert!(checked >= 10, "(m,k)=({m},{k}): only {checked} escaping samples");
        }
    }
}
