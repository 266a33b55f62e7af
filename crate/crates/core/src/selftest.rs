//! The acceptance suite: fifteen pass/fail criteria with pinned tolerances,
//! runnable from the CLI (`selftest`) and from the integration tests.
//!
//! Every criterion reports one line. The canonical render excludes wall
//! times, so reports are byte-identical across runs with the same seed and
//! any thread count (all parallel maps are order-preserving and every
//! reduction is sequential).

use num_complex::Complex64;

use crate::boettcher::{
    bottcher_coeffs, bottcher_eval, coefficient_bounds_report, verify_functional_equation_with,
};
use crate::classify::{
    branch_growth_all, collision_curve, commutator_on_curve, symmetry_curve, z_probe,
    GrowthClass, ZProbeOutcome, Zeta,
};
use crate::dynamics::CubicParam;
use crate::equidist::{equidistribution_trend, Line, Window};
use crate::exactalg::bipoly::{BiPoly, Var};
use crate::exactalg::qomega::{rat_to_f64, QOmega, Rat};
use crate::green::{
    canonical_height, finite_growth_formula, g0g1g, green_finite, GreenBounds, GROWTH_C,
};
use crate::padicval::{verify_prop_multiplier, MultiplierSpec};
use crate::pcf::{orbit_relation, pcf_grid_oracle, pcf_solve, point_height, PcfSolveOutcome};
use crate::periodic::{perm_poly, LambdaSpec, PermPoly};
use crate::roots::poly_roots;

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    /// Wall time, excluded from the canonical render.
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub seed: u64,
    pub results: Vec<CriterionResult>,
}

impl SelftestReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    /// Canonical, timing-free report (byte-identical for a fixed seed).
    pub fn render_canonical(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("selftest seed={}\n", self.seed));
        for r in &self.results {
            out.push_str(&format!(
                "[{}] criterion {:>2} {:<34} {}\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.id,
                r.name,
                r.detail
            ));
        }
        out.push_str(&format!(
            "result: {}/{} criteria passed\n",
            self.results.iter().filter(|r| r.pass).count(),
            self.results.len()
        ));
        out
    }
}

struct Prng(u64);

impl Prng {
    fn next_u64(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
    fn int(&mut self, m: u64) -> u64 {
        self.next_u64() % m
    }
}

fn timed<F: FnOnce() -> (bool, String)>(
    id: u32,
    name: &'static str,
    f: F,
) -> CriterionResult {
    let start = std::time::Instant::now();
    let (pass, detail) = f();
    CriterionResult { id, name, pass, detail, elapsed_ms: start.elapsed().as_millis() }
}

/// Run the full acceptance suite.
pub fn run_selftest(seed: u64) -> SelftestReport {
    let results = vec![
        timed(1, "boettcher closed forms", criterion_01),
        timed(2, "functional equation K=12", criterion_02),
        timed(3, "degree law deg a_k = k+1", criterion_03),
        timed(4, "2-/3-adic coefficient bounds", criterion_04),
        timed(5, "g = log|phi| identity", move || criterion_05(seed)),
        timed(6, "growth envelope + finite places", move || criterion_06(seed)),
        timed(7, "symmetry curve identities", criterion_07),
        timed(8, "collision green relation", criterion_08),
        timed(9, "pcf solver vs oracle", criterion_09),
        timed(10, "Per_1(0) factorization", criterion_10),
        timed(11, "multiplier valuation table", criterion_11),
        timed(12, "Z-set probes", criterion_12),
        timed(13, "branch growth dichotomy", criterion_13),
        timed(14, "equidistribution trend", criterion_14),
        timed(15, "parallel determinism", criterion_15),
    ];
    SelftestReport { seed, results }
}

fn criterion_01() -> (bool, String) {
    let start = std::time::Instant::now();
    let exp = bottcher_coeffs(2);
    let a1 = BiPoly::var(Var::C).pow(2).scale(&QOmega::omega_frac(-1, 4));
    let a2 = BiPoly::var(Var::C)
        .pow(3)
        .scale(&QOmega::omega_frac(-5, 24))
        .add(
            &BiPoly::var(Var::A)
                .pow(3)
                .sub(&BiPoly::var(Var::C).scale(&QOmega::from_frac(1, 2)))
                .scale(&QOmega::omega()),
        );
    let exact = exp.coeffs[0] == a1 && exp.coeffs[1] == a2;
    let in_time = start.elapsed().as_secs_f64() < 1.0;
    (exact && in_time, format!("a1,a2 exact={exact} within 1s={in_time}"))
}

fn criterion_02() -> (bool, String) {
    let start = std::time::Instant::now();
    let exp = bottcher_coeffs(12);
    let rep = verify_functional_equation_with(&exp);
    let in_time = start.elapsed().as_secs_f64() < 60.0;
    (
        rep.pass && in_time,
        format!(
            "residual window z^j, j>={}: all zero={} within 60s={in_time}",
            rep.window_low, rep.pass
        ),
    )
}

fn criterion_03() -> (bool, String) {
    let exp = bottcher_coeffs(12);
    let rep = coefficient_bounds_report(&exp);
    let ok = rep.rows.iter().all(|r| r.degree_ok);
    let degs: Vec<u32> = rep.rows.iter().map(|r| r.degree).collect();
    (ok, format!("degrees {degs:?}"))
}

fn criterion_04() -> (bool, String) {
    let exp = bottcher_coeffs(12);
    let rep = coefficient_bounds_report(&exp);
    let two = rep.rows.iter().all(|r| r.two_adic_ok);
    let three = rep.rows.iter().all(|r| r.three_adic_ok);
    let field = rep.rows.iter().all(|r| r.three_adic_field_ok);
    let denom = rep.rows.iter().all(|r| r.denominators_ok);
    (
        two && three && field && denom,
        format!(
            "2-adic<=2^(k+1)={two} 3-adic(basis)<=3^(k/2)={three} 3-adic(field)<=3^((k+1)/2)={field} denominators in {{2,3}}={denom}"
        ),
    )
}

fn criterion_05(seed: u64) -> (bool, String) {
    let exp = bottcher_coeffs(24);
    let mut rng = Prng(seed ^ 0x05);
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 100 {
        let p = CubicParam::new(
            Complex64::new(rng.uniform(-2.0, 2.0), 0.0),
            Complex64::new(rng.uniform(-2.0, 2.0), 0.0),
        );
        let bounds = GreenBounds::archimedean(&p);
        let (_, _, g) = match g0g1g(&p, 1e-12) {
            Ok(v) => v,
            Err(_) => continue,
        };
        // Radius beyond the guard with margin.
        let radius = (bounds.rho + g.value + 0.7).exp().max(9.0 * (1.0 + p.c.norm().max(p.a.norm())));
        let theta = rng.uniform(0.0, std::f64::consts::TAU);
        let z = Complex64::from_polar(radius, theta);
        let (phi, tail) = match bottcher_eval(&exp, &p, z, 1e-13) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let gz = match crate::green::green_arch(&p, z, 1e-13) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let resid = (phi.norm().ln() - gz.value).abs();
        let _ = tail;
        worst = worst.max(resid);
        n += 1;
    }
    (worst < 1e-9, format!("max |g - log|phi|| = {worst:.3e} over 100 samples (< 1e-9)"))
}

fn criterion_06(seed: u64) -> (bool, String) {
    // Envelope on the 50x50 grid in [-10,10]^2.
    let mut worst = 0.0f64;
    let cells: Vec<usize> = (0..2500).collect();
    let devs: Vec<f64> = crate::exec::map(&cells, |&idx| {
        let i = idx / 50;
        let j = idx % 50;
        let cv = -10.0 + 20.0 * (i as f64 + 0.5) / 50.0;
        let av = -10.0 + 20.0 * (j as f64 + 0.5) / 50.0;
        let p = CubicParam::new(Complex64::new(cv, 0.0), Complex64::new(av, 0.0));
        match g0g1g(&p, 1e-9) {
            Ok((_, _, g)) => {
                let target = cv.abs().max(av.abs()).max(1.0).ln();
                (g.value - target).abs()
            }
            Err(_) => f64::INFINITY,
        }
    });
    for d in devs {
        worst = worst.max(d);
    }
    let envelope_ok = worst <= GROWTH_C;
    // Exact finite-place equality for p in {5,7,11} on 50 rational params.
    let mut rng = Prng(seed ^ 0x06);
    let mut exact_ok = true;
    for _ in 0..50 {
        let c = Rat::new(
            (rng.int(41) as i64 - 20).into(),
            (rng.int(24) as i64 + 1).into(),
        );
        let a = Rat::new(
            (rng.int(41) as i64 - 20).into(),
            (rng.int(24) as i64 + 1).into(),
        );
        for p in [5u64, 7, 11] {
            match green_finite(p, &c, &a) {
                Ok(g) => {
                    if g.coeff != finite_growth_formula(p, &c, &a).coeff {
                        exact_ok = false;
                    }
                }
                Err(_) => exact_ok = false,
            }
        }
    }
    (
        envelope_ok && exact_ok,
        format!("max |G - log+max| = {worst:.4} (<= {GROWTH_C}); finite-place formula exact={exact_ok}"),
    )
}

fn criterion_07() -> (bool, String) {
    let curve = symmetry_curve();
    let on_curve = commutator_on_curve(0, &QOmega::from_int(-1), &curve, Var::A).all_zero;
    let off_curve = !commutator_on_curve(0, &QOmega::from_int(-1), &BiPoly::var(Var::A), Var::A)
        .all_zero;
    // 20 escaping points of the curve: g0 = g1 to 1e-7.
    let mut checked = 0;
    let mut worst = 0.0f64;
    let mut t = 0;
    while checked < 20 && t < 200 {
        let cv = 1.0 + 0.21 * t as f64;
        t += 1;
        let av = ((cv.powi(3) + 6.0 * cv) / 12.0).cbrt();
        let p = CubicParam::new(Complex64::new(cv, 0.0), Complex64::new(av, 0.0));
        let Ok((g0, g1, g)) = g0g1g(&p, 1e-10) else { continue };
        if g.value <= 1e-6 {
            continue;
        }
        worst = worst.max((g0.value - g1.value).abs());
        checked += 1;
    }
    let greens_ok = checked >= 20 && worst < 1e-7;
    (
        on_curve && off_curve && greens_ok,
        format!(
            "commutator=0 mod curve={on_curve}, !=0 mod a={off_curve}, max|g0-g1|={worst:.2e} over {checked} pts"
        ),
    )
}

fn criterion_08() -> (bool, String) {
    let mut details = Vec::new();
    let mut all_ok = true;
    for (m, k) in [(1u32, 1u32), (2, 1)] {
        let col = collision_curve(m, k).expect("cap");
        let mut checked = 0;
        let mut worst = 0.0f64;
        let mut t = 0;
        while checked < 20 && t < 200 {
            t += 1;
            let points: Vec<CubicParam<Complex64>> = if col.poly.deg_var(Var::A) == 0 {
                vec![CubicParam::new(
                    Complex64::ZERO,
                    Complex64::new(1.3 + 0.17 * t as f64, 0.2),
                )]
            } else {
                let cv = Complex64::new(1.7 + 0.29 * t as f64, 0.4);
                let spec = col.poly.to_cpoly().specialize(Var::C, &cv);
                match poly_roots(&spec.coeffs) {
                    Ok(roots) => roots.into_iter().map(|av| CubicParam::new(cv, av)).collect(),
                    Err(_) => continue,
                }
            };
            for p in points {
                if checked >= 20 {
                    break;
                }
                let Ok((g0, g1, g)) = g0g1g(&p, 1e-9) else { continue };
                if g.value < 0.05 {
                    continue;
                }
                let d = (3f64.powi(m as i32) * g1.value - 3f64.powi(k as i32) * g0.value).abs();
                worst = worst.max(d);
                checked += 1;
            }
        }
        let ok = checked >= 20 && worst < 1e-6;
        all_ok &= ok;
        details.push(format!("(m,k)=({m},{k}): max|3^m g1 - 3^k g0|={worst:.2e} over {checked}"));
    }
    (all_ok, details.join("; "))
}

fn criterion_09() -> (bool, String) {
    let r0 = orbit_relation(0, 0, 1).expect("cap");
    let r1 = orbit_relation(1, 0, 1).expect("cap");
    let PcfSolveOutcome::Points(pts) = pcf_solve(&r0, &r1).expect("solve") else {
        return (false, "solver returned a curve".into());
    };
    let sqrt6 = 6.0f64.sqrt();
    let expect = [
        Complex64::new(0.0, -sqrt6),
        Complex64::ZERO,
        Complex64::new(0.0, sqrt6),
    ];
    let mut solver_ok = pts.len() == 3;
    let mut worst = 0.0f64;
    for ec in expect {
        let best = pts
            .iter()
            .map(|p| (p.c_complex() - ec).norm().max(p.a_complex().norm()))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
        solver_ok &= best < 1e-10;
    }
    // Independent oracle: 200x200 complex c-grid, 5x5 a-seeds.
    let oracle = pcf_grid_oracle(&r0, &r1, 200, 5, 4.0);
    let oracle_ok = oracle.len() == 3
        && pts.iter().all(|p| {
            oracle
                .iter()
                .any(|(cv, av)| (cv - p.c_complex()).norm() < 1e-8 && (av - p.a_complex()).norm() < 1e-8)
        });
    // Heights.
    let mut hmax = 0.0f64;
    let mut heights_ok = true;
    for p in &pts {
        match point_height(p, 1, 1, 1e-8) {
            Ok(h) => hmax = hmax.max(h),
            Err(_) => heights_ok = false,
        }
    }
    heights_ok &= hmax < 1e-6;
    (
        solver_ok && oracle_ok && heights_ok,
        format!(
            "3 points within {worst:.1e} of {{(0,0),(+-i sqrt6,0)}}; oracle match={oracle_ok}; max height={hmax:.2e}"
        ),
    )
}

fn criterion_10() -> (bool, String) {
    let pp = perm_poly(1, &LambdaSpec::Exact(QOmega::zero())).expect("perm");
    let PermPoly::Exact { poly, .. } = pp else {
        return (false, "unexpected symbolic form".into());
    };
    let f0 = BiPoly::var(Var::A).pow(3);
    let f1 = BiPoly::var(Var::A)
        .pow(3)
        .sub(&BiPoly::var(Var::C).pow(3).scale(&QOmega::from_frac(1, 6)))
        .sub(&BiPoly::var(Var::C));
    let ok = poly.is_associate(&f0.mul(&f1));
    (ok, format!("Res_z(P - z, -P') associate to a^3 (a^3 - c^3/6 - c): {ok}"))
}

fn criterion_11() -> (bool, String) {
    let primes = [2u64, 3, 5, 7, 11];
    let q = |coeffs: &[i64]| {
        crate::exactalg::unipoly::UniPoly::new(
            coeffs.iter().map(|&n| QOmega::from_int(n)).collect(),
        )
    };
    let mut cases: Vec<(u32, crate::exactalg::unipoly::UniPoly<QOmega>, u32)> = Vec::new();
    for t in [0i64, -1, -2] {
        for m in [1u32, 2] {
            cases.push((2, q(&[-t, 1]), m));
        }
    }
    cases.push((3, q(&[0, 1]), 1));
    cases.push((3, q(&[0, 1]), 2));
    // Nontrivial cubic unicritical PCF parameter (period 2): t^2 + 1.
    cases.push((3, q(&[1, 0, 1]), 1));
    cases.push((3, q(&[1, 0, 1]), 2));
    let mut all = true;
    let mut rows = 0;
    for (d, tp, m) in &cases {
        let spec = MultiplierSpec { d: *d, t_minpoly: tp.clone(), m: *m };
        match verify_prop_multiplier(&spec, &primes) {
            Ok(rep) => {
                all &= rep.pass;
                rows += rep.rows.len();
            }
            Err(_) => all = false,
        }
    }
    (all, format!("{} cases x {} primes: all valuation rows pass={all} ({rows} rows)", cases.len(), primes.len()))
}

fn criterion_12() -> (bool, String) {
    let sym = symmetry_curve();
    let mut ok_sym = true;
    for q in [0u32, 1] {
        let outcomes = z_probe(q, 0, Zeta::MinusOne).unwrap_or_default();
        ok_sym &= outcomes.iter().any(|o| match o {
            ZProbeOutcome::Curve { reduced, .. } => reduced.is_associate(&sym),
            _ => false,
        });
    }
    let outcomes = z_probe(1, 0, Zeta::One).unwrap_or_default();
    let ok_line = outcomes.iter().any(|o| match o {
        ZProbeOutcome::Curve { reduced, .. } => reduced.is_associate(&BiPoly::var(Var::C)),
        _ => false,
    });
    (
        ok_sym && ok_line,
        format!("Z(0|1,0,-1) = symmetry curve: {ok_sym}; Z(1,0,1) = {{c=0}}: {ok_line}"),
    )
}

fn criterion_13() -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for qm in [6u32, 8] {
        let rows_a = branch_growth_all(&BiPoly::var(Var::A), qm).unwrap_or_default();
        let a_ok = rows_a.len() == 1
            && rows_a[0].1[0].class == GrowthClass::Bounded
            && rows_a[0].1[1].class == GrowthClass::Escaping { rate_num: 1, rate_den: 1 };
        let rows_c = branch_growth_all(&BiPoly::var(Var::C), qm).unwrap_or_default();
        let c_ok = rows_c.len() == 1
            && rows_c[0].1[0].class == GrowthClass::Escaping { rate_num: 1, rate_den: 1 }
            && rows_c[0].1[1].class == GrowthClass::Escaping { rate_num: 1, rate_den: 1 };
        ok &= a_ok && c_ok;
        detail.push(format!("Q={qm}: a=0 (Bounded, rate 1)={a_ok}; c=0 (rate 1, rate 1)={c_ok}"));
    }
    (ok, detail.join("; "))
}

fn criterion_14() -> (bool, String) {
    let start = std::time::Instant::now();
    let window = Window::square(1.4);
    match equidistribution_trend(Line::CZero, &[2, 3, 4], window, 512) {
        Ok(rep) => {
            let in_time = start.elapsed().as_secs_f64() < 600.0;
            (
                rep.monotone_decreasing && in_time,
                format!(
                    "distances {:?} monotone={} within 10min={in_time}",
                    rep.distances
                        .iter()
                        .map(|d| format!("{d:.6}"))
                        .collect::<Vec<_>>(),
                    rep.monotone_decreasing
                ),
            )
        }
        Err(e) => (false, format!("trend failed: {e}")),
    }
}

fn criterion_15() -> (bool, String) {
    // Run a representative parallel workload under two thread counts and
    // require byte-identical serialized output.
    let work = || -> String {
        let window = Window::square(1.2);
        let nu = crate::equidist::bifurcation_density(Line::CZero, window, 128).expect("density");
        let mu = crate::equidist::pcf_on_line(Line::CZero, 3).expect("atoms");
        let d = crate::equidist::compare(&mu, &nu);
        let r0 = orbit_relation(0, 0, 1).unwrap();
        let r1 = orbit_relation(1, 0, 1).unwrap();
        let oracle = pcf_grid_oracle(&r0, &r1, 48, 4, 4.0);
        let mut s = format!("d={d:.17e};n={};", mu.atoms.len());
        for (cv, av) in oracle {
            s.push_str(&format!("({:.17e},{:.17e},{:.17e},{:.17e})", cv.re, cv.im, av.re, av.im));
        }
        let h = canonical_height(&Rat::new(3.into(), 2.into()), &Rat::new((-7).into(), 5.into()), 2, 3, 1e-10)
            .expect("height");
        s.push_str(&format!("h={h:.17e};g={:.17e}", rat_to_f64(&Rat::new(1.into(), 3.into()))));
        s
    };
    #[cfg(feature = "parallel")]
    {
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().expect("pool");
        let out1 = pool1.install(work);
        let out4 = pool4.install(work);
        let ok = out1 == out4;
        (ok, format!("1-thread vs 4-thread outputs identical: {ok}"))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let a = work();
        let b = work();
        let ok = a == b;
        (ok, format!("sequential reruns identical: {ok}"))
    }
}
