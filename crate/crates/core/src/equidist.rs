//! Desk-scale equidistribution experiment: empirical measures of PCF
//! parameters on a line through parameter space against the discrete
//! bifurcation density obtained from the Green function.
//!
//! On a line the bifurcation current restricts to (a multiple of) the
//! Laplacian of `g_0`; the experiment compares the uniform measure on the
//! PCF parameters of orbit complexity up to a cap with the clipped,
//! normalized 5-point discrete Laplacian of `g_0` on a grid, through a
//! fixed dictionary of 64 tensor Gaussians at two scales. The quantity of
//! interest is the monotone decrease of the distance as the cap grows.

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::CubicParam;
use crate::error::{Error, Result};
use crate::exactalg::bipoly::Var;
use crate::exactalg::qomega::QOmega;
use crate::green::green_arch;
use crate::pcf::orbit_relation;
use crate::roots::poly_roots;

/// Which line of parameter space the experiment runs on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Line {
    /// `{c = 0}`: the unicritical line, coordinate `a`.
    CZero,
    /// `{a = 0}`: coordinate `c` (the critical point 0 is fixed there).
    AZero,
}

impl Line {
    pub fn param(self, w: Complex64) -> CubicParam<Complex64> {
        match self {
            Line::CZero => CubicParam::new(Complex64::ZERO, w),
            Line::AZero => CubicParam::new(w, Complex64::ZERO),
        }
    }
}

/// Uniform probability measure on finitely many atoms in the line
/// coordinate.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalMeasure {
    pub atoms: Vec<(f64, f64)>,
}

impl EmpiricalMeasure {
    pub fn atoms_c(&self) -> Vec<Complex64> {
        self.atoms.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
    }
}

/// All parameters on the line whose marked critical orbit satisfies a
/// relation `P^(n+k) = P^n` with `n + k <= max_orbit`: the univariate
/// restrictions of the orbit relations, solved and deduplicated.
pub fn pcf_on_line(line: Line, max_orbit: u32) -> Result<EmpiricalMeasure> {
    if max_orbit == 0 || 3u64.pow(max_orbit) > crate::pcf::DEFAULT_DEGREE_CAP {
        return Err(Error::InvalidInput("orbit cap out of range".into()));
    }
    // On {c=0} both critical points coincide with 0; on {a=0} the point 0
    // is fixed and only the orbit of c constrains.
    let crit_index = match line {
        Line::CZero => 0,
        Line::AZero => 1,
    };
    let (spec_var, _keep) = match line {
        Line::CZero => (Var::C, Var::A),
        Line::AZero => (Var::A, Var::C),
    };
    let mut atoms: Vec<Complex64> = Vec::new();
    for n in 0..max_orbit {
        for k in 1..=(max_orbit - n) {
            let rel = orbit_relation(crit_index, n, k)?;
            let restricted = rel.poly.specialize(spec_var, &QOmega::zero());
            if restricted.is_zero() {
                continue;
            }
            let roots = poly_roots(&restricted.to_complex_coeffs())?;
            for r in roots {
                if !atoms.iter().any(|u| (u - r).norm() < 1e-8 * (1.0 + r.norm())) {
                    atoms.push(r);
                }
            }
        }
    }
    atoms.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(EmpiricalMeasure { atoms: atoms.iter().map(|z| (z.re, z.im)).collect() })
}

/// Rectangular window in the line coordinate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn square(half: f64) -> Self {
        Window { re_min: -half, re_max: half, im_min: -half, im_max: half }
    }
    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }
    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }
    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }
}

/// Discrete bifurcation density on a grid: clipped 5-point Laplacian of
/// `g_0` along the line, normalized to total mass 1.
#[derive(Debug, Clone, Serialize)]
pub struct DensityGrid {
    pub window: Window,
    pub resolution: usize,
    /// Row-major, `values[iy * resolution + ix]`, non-negative, sums to 1.
    pub values: Vec<f64>,
    /// Unnormalized total mass of the clipped Laplacian.
    pub raw_mass: f64,
    /// Fraction of cells masked by Undecided Green evaluations.
    pub masked_fraction: f64,
}

impl DensityGrid {
    pub fn cell_center(&self, ix: usize, iy: usize) -> Complex64 {
        let hx = self.window.width() / self.resolution as f64;
        let hy = self.window.height() / self.resolution as f64;
        Complex64::new(
            self.window.re_min + (ix as f64 + 0.5) * hx,
            self.window.im_min + (iy as f64 + 0.5) * hy,
        )
    }
}

pub const MAX_RESOLUTION: usize = 2048;

pub fn bifurcation_density(line: Line, window: Window, resolution: usize) -> Result<DensityGrid> {
    if resolution < 8 || resolution > MAX_RESOLUTION {
        return Err(Error::InvalidInput(format!(
            "resolution must be in 8..={MAX_RESOLUTION}"
        )));
    }
    let n = resolution;
    let hx = window.width() / n as f64;
    let hy = window.height() / n as f64;
    // Green values on the (n+2)^2 grid of cell centers with a one-cell
    // halo; tolerance tied to the grid spacing squared.
    let tol = (hx.min(hy)).powi(2) * 1e-4;
    let rows: Vec<Vec<Option<f64>>> = crate::exec::map_range(n + 2, |iy| {
        let mut row = Vec::with_capacity(n + 2);
        for ix in 0..n + 2 {
            let w = Complex64::new(
                window.re_min + (ix as f64 - 0.5) * hx,
                window.im_min + (iy as f64 - 0.5) * hy,
            );
            let p = line.param(w);
            let (c0, _) = p.critical_points();
            row.push(green_arch(&p, c0, tol).ok().map(|g| g.value));
        }
        row
    });
    let mut values = vec![0.0f64; n * n];
    let mut masked = 0usize;
    for iy in 0..n {
        for ix in 0..n {
            let get = |dx: i64, dy: i64| -> Option<f64> {
                rows[(iy as i64 + 1 + dy) as usize][(ix as i64 + 1 + dx) as usize]
            };
            match (get(0, 0), get(1, 0), get(-1, 0), get(0, 1), get(0, -1)) {
                (Some(center), Some(e), Some(w), Some(no), Some(s)) => {
                    let lap = (e + w - 2.0 * center) / (hx * hx)
                        + (no + s - 2.0 * center) / (hy * hy);
                    // The limit object is a positive measure: negative
                    // cells are discretization noise.
                    values[iy * n + ix] = lap.max(0.0) * hx * hy;
                }
                _ => {
                    masked += 1;
                }
            }
        }
    }
    let raw_mass: f64 = values.iter().sum();
    if raw_mass <= 0.0 {
        return Err(Error::Undecided("density grid carries no mass".into()));
    }
    for v in values.iter_mut() {
        *v /= raw_mass;
    }
    Ok(DensityGrid {
        window,
        resolution: n,
        values,
        raw_mass,
        masked_fraction: masked as f64 / (n * n) as f64,
    })
}

/// The fixed, versioned test-function dictionary: tensor Gaussians at two
/// scales (window/4 and window/8) centered on 8x4 grids; 64 functions.
pub const DICTIONARY_VERSION: u32 = 1;

fn dictionary(window: &Window) -> Vec<(Complex64, f64)> {
    let mut out = Vec::with_capacity(64);
    for (scale_div, nx, ny) in [(4.0, 8usize, 4usize), (8.0, 8, 4)] {
        let sigma = window.width().max(window.height()) / scale_div;
        for i in 0..nx {
            for j in 0..ny {
                let x = window.re_min + window.width() * (i as f64 + 0.5) / nx as f64;
                let y = window.im_min + window.height() * (j as f64 + 0.5) / ny as f64;
                out.push((Complex64::new(x, y), sigma));
            }
        }
    }
    out
}

fn gaussian(z: Complex64, center: Complex64, sigma: f64) -> f64 {
    let d = z - center;
    (-(d.norm_sqr()) / (2.0 * sigma * sigma)).exp()
}

/// Weak-convergence surrogate distance: max over the dictionary of
/// `|int f dmu - int f dnu|`.
pub fn compare(mu: &EmpiricalMeasure, nu: &DensityGrid) -> f64 {
    let atoms = mu.atoms_c();
    let dict = dictionary(&nu.window);
    let mut dist = 0.0f64;
    for (center, sigma) in dict {
        let mut int_mu = 0.0;
        for z in &atoms {
            int_mu += gaussian(*z, center, sigma);
        }
        if !atoms.is_empty() {
            int_mu /= atoms.len() as f64;
        }
        let mut int_nu = 0.0;
        for iy in 0..nu.resolution {
            for ix in 0..nu.resolution {
                let v = nu.values[iy * nu.resolution + ix];
                if v > 0.0 {
                    int_nu += v * gaussian(nu.cell_center(ix, iy), center, sigma);
                }
            }
        }
        dist = dist.max((int_mu - int_nu).abs());
    }
    dist
}

/// The experiment: distances for a sequence of orbit caps.
#[derive(Debug, Clone, Serialize)]
pub struct TrendReport {
    pub line: Line,
    pub caps: Vec<u32>,
    pub atom_counts: Vec<usize>,
    pub distances: Vec<f64>,
    pub monotone_decreasing: bool,
    pub masked_fraction: f64,
}

pub fn equidistribution_trend(
    line: Line,
    caps: &[u32],
    window: Window,
    resolution: usize,
) -> Result<TrendReport> {
    let nu = bifurcation_density(line, window, resolution)?;
    let mut distances = Vec::new();
    let mut atom_counts = Vec::new();
    for &cap in caps {
        let mu = pcf_on_line(line, cap)?;
        atom_counts.push(mu.atoms.len());
        distances.push(compare(&mu, &nu));
    }
    let monotone_decreasing = distances.windows(2).all(|w| w[1] < w[0]);
    Ok(TrendReport {
        line,
        caps: caps.to_vec(),
        atom_counts,
        distances,
        monotone_decreasing,
        masked_fraction: nu.masked_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_on_unicritical_line() {
        // cap 1: only the relation P(0) = 0, i.e. a^3 = 0: atom at 0.
        let mu = pcf_on_line(Line::CZero, 1).unwrap();
        assert_eq!(mu.atoms.len(), 1);
        assert!(mu.atoms_c()[0].norm() < 1e-9);
        // cap 2 adds a^6 = -3 (six atoms) from P^2(0) = 0.
        let mu = pcf_on_line(Line::CZero, 2).unwrap();
        assert_eq!(mu.atoms.len(), 7, "{:?}", mu.atoms);
        let r = 3.0f64.powf(1.0 / 6.0);
        for z in mu.atoms_c() {
            if z.norm() > 1e-9 {
                assert!((z.norm() - r).abs() < 1e-9);
                assert!((z.powu(6) + Complex64::new(3.0, 0.0)).norm() < 1e-8);
            }
        }
        // Atom count grows strictly with the cap (1 -> 2 -> 3).
        let n1 = pcf_on_line(Line::CZero, 1).unwrap().atoms.len();
        let n2 = pcf_on_line(Line::CZero, 2).unwrap().atoms.len();
        let n3 = pcf_on_line(Line::CZero, 3).unwrap().atoms.len();
        assert!(n1 < n2 && n2 < n3, "{n1} {n2} {n3}");
    }

    #[test]
    fn density_grid_properties() {
        let window = Window::square(1.4);
        let nu = bifurcation_density(Line::CZero, window, 64).unwrap();
        let total: f64 = nu.values.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(nu.values.iter().all(|v| *v >= 0.0));
        assert!(nu.masked_fraction < 0.05, "masked {}", nu.masked_fraction);
        // Cells deep inside the escape region are harmonic: tiny density.
        // (corner of the window escapes fast)
        let corner = nu.values[0];
        assert!(corner < 1e-6, "corner density {corner}");
        // Cells deep inside the bounded region: g = 0 identically.
        let mid = nu.values[(nu.resolution / 2) * nu.resolution + nu.resolution / 2];
        assert!(mid < 1e-9, "center density {mid}");
    }

    #[test]
    fn compare_separates_and_vanishes() {
        // mu sampled from nu itself: tiny distance; a translate: large.
        let window = Window::square(1.0);
        let nu = bifurcation_density(Line::CZero, window, 48).unwrap();
        // Build an empirical measure by sampling the density's own cells
        // proportionally (deterministic largest-cells choice).
        let mut cells: Vec<(usize, f64)> = nu.values.iter().cloned().enumerate().collect();
        cells.sort_by(|a, b| b.1.total_cmp(&a.1));
        let atoms: Vec<(f64, f64)> = cells
            .iter()
            .take(400)
            .flat_map(|&(idx, w)| {
                let z = nu.cell_center(idx % nu.resolution, idx / nu.resolution);
                let copies = (w * 4000.0).round() as usize;
                std::iter::repeat((z.re, z.im)).take(copies)
            })
            .collect();
        let mu = EmpiricalMeasure { atoms: atoms.clone() };
        let close = compare(&mu, &nu);
        let shifted = EmpiricalMeasure {
            atoms: atoms.iter().map(|&(x, y)| (x + 2.0, y)).collect(),
        };
        let far = compare(&shifted, &nu);
        assert!(close < 0.05, "self distance {close}");
        assert!(far > 10.0 * close, "close={close} far={far}");
    }

    #[test]
    fn mass_stabilizes_as_window_grows() {
        // The limit measure has compact support: with the cell size held
        // fixed, the unnormalized mass of the clipped Laplacian changes
        // little once the window contains the support.
        let h = 2.8 / 96.0;
        let masses: Vec<f64> = [1.4f64, 1.75, 2.1]
            .iter()
            .map(|&half| {
                let res = (2.0 * half / h).round() as usize;
                bifurcation_density(Line::CZero, Window::square(half), res)
                    .unwrap()
                    .raw_mass
            })
            .collect();
        for w in masses.windows(2) {
            let rel = (w[1] - w[0]).abs() / w[0];
            assert!(rel < 0.05, "mass jump {rel} across windows: {masses:?}");
        }
    }

    #[test]
    fn renormalization_invariance() {
        // Scaling all g-values by s scales the raw mass by s and leaves
        // the normalized grid unchanged; emulate by scaling the values.
        let window = Window::square(1.2);
        let nu = bifurcation_density(Line::CZero, window, 32).unwrap();
        let scaled: Vec<f64> = nu.values.iter().map(|v| v * 7.5).collect();
        let total: f64 = scaled.iter().sum();
        let renorm: Vec<f64> = scaled.iter().map(|v| v / total).collect();
        for (u, v) in nu.values.iter().zip(renorm.iter()) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn trend_runs_small() {
        let window = Window::square(1.4);
        let rep = equidistribution_trend(Line::CZero, &[2, 3], window, 96).unwrap();
        assert_eq!(rep.distances.len(), 2);
        assert!(rep.distances[1] < rep.distances[0], "{rep:?}");
    }
}
