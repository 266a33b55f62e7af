//! Numeric polynomial root finding: Aberth-Ehrlich simultaneous iteration
//! on the monic polynomial (no deflation), plus small complex linear
//! algebra helpers (LU determinant, Newton interpolation) used by the
//! interpolated resultants.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITERS: usize = 200;

/// All complex roots of `sum coeffs[k] x^k` (ascending, any leading zeros
/// tolerated). Exact zero roots from vanishing low-order coefficients are
/// returned exactly.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut cs: Vec<Complex64> = coeffs.to_vec();
    while cs.last().is_some_and(|c| c.norm() == 0.0) {
        cs.pop();
    }
    if cs.len() <= 1 {
        return Ok(Vec::new());
    }
    // Factor out exact zero roots.
    let mut zeros = 0usize;
    while cs.first().is_some_and(|c| c.norm() == 0.0) {
        cs.remove(0);
        zeros += 1;
    }
    let mut roots = vec![Complex64::ZERO; zeros];
    let deg = cs.len() - 1;
    if deg == 0 {
        return Ok(roots);
    }
    // Monic normalization.
    let lc = *cs.last().unwrap();
    for c in cs.iter_mut() {
        *c /= lc;
    }
    match deg {
        1 => roots.push(-cs[0]),
        2 => {
            let (b, c) = (cs[1], cs[0]);
            let disc = (b * b - 4.0 * c).sqrt();
            // Stable variant: use the larger-magnitude sum.
            let q = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
            if q.norm() == 0.0 {
                roots.extend([Complex64::ZERO, Complex64::ZERO]);
            } else {
                let r1 = -q / 2.0;
                let r2 = c / r1;
                roots.extend([r1, r2]);
            }
        }
        _ => roots.extend(aberth(&cs)?),
    }
    Ok(roots)
}

/// Fujiwara's root bound `2 max_k |a_(n-k) / a_n|^(1/k)` for a monic
/// polynomial (ascending coefficients, `a_n = 1`).
fn fujiwara_bound(monic: &[Complex64]) -> f64 {
    let n = monic.len() - 1;
    let mut bound = 0.0f64;
    for k in 1..=n {
        let a = monic[n - k].norm();
        if a > 0.0 {
            bound = bound.max(a.powf(1.0 / k as f64));
        }
    }
    2.0 * bound
}

fn aberth(monic: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = monic.len() - 1;
    let deriv: Vec<Complex64> = monic
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();

    // Initial guesses on a circle of the Fujiwara-bound radius (robust to
    // the huge leading-coefficient ratios of iterated polynomials), with
    // an irrational angular offset to break symmetries.
    let radius = fujiwara_bound(monic).max(1e-3);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * (i as f64 / deg as f64) + 0.41;
            Complex64::from_polar(radius * 0.8, theta)
        })
        .collect();

    let eval = |cs: &[Complex64], x: Complex64| {
        let mut acc = Complex64::ZERO;
        for c in cs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };

    let mut converged = false;
    for _ in 0..MAX_ITERS {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let fz = eval(monic, z[i]);
            let dfz = eval(&deriv, z[i]);
            if !fz.is_finite() || !dfz.is_finite() {
                // Overflowed far outside the root disk: pull back inward.
                z[i] *= 0.5;
                max_step = 1.0;
                continue;
            }
            let newton = if dfz.norm() > 0.0 { fz / dfz } else { fz };
            let mut sum = Complex64::ZERO;
            for j in 0..deg {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 1e-300 {
                        sum += 1.0 / d;
                    }
                }
            }
            let denom = 1.0 - newton * sum;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[i] -= step;
            let rel = step.norm() / (1.0 + z[i].norm());
            max_step = max_step.max(rel);
        }
        if max_step < 1e-14 {
            converged = true;
            break;
        }
    }
    // Polish with plain Newton; multiple roots stop improving, which is fine.
    for zi in z.iter_mut() {
        for _ in 0..4 {
            let fz = eval(monic, *zi);
            let dfz = eval(&deriv, *zi);
            if dfz.norm() < 1e-300 {
                break;
            }
            *zi -= fz / dfz;
        }
    }
    if !converged {
        // Accept on small backward error: |f(z)| against sum |a_k| |z|^k
        // (clustered roots converge slowly in step size but are exact
        // roots of a tiny coefficient perturbation).
        let ok = z.iter().all(|&zi| {
            let mut gauge = 0.0f64;
            let mut zpow = 1.0f64;
            for c in monic.iter() {
                gauge += c.norm() * zpow;
                zpow *= zi.norm();
            }
            eval(monic, zi).norm() <= 1e-10 * gauge.max(1.0)
        });
        if !ok {
            return Err(Error::RootFindingFailure(format!(
                "Aberth did not converge at degree {deg}"
            )));
        }
    }
    Ok(z)
}

/// Determinant of a complex matrix via LU with partial pivoting.
pub fn complex_det(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::ONE;
    for k in 0..n {
        let (pivot_row, pivot_norm) = (k..n)
            .map(|r| (r, m[r][k].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if pivot_norm == 0.0 {
            return Complex64::ZERO;
        }
        if pivot_row != k {
            m.swap(pivot_row, k);
            det = -det;
        }
        det *= m[k][k];
        for r in k + 1..n {
            let f = m[r][k] / m[k][k];
            for c in k..n {
                let sub = f * m[k][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Interpolate the polynomial of degree < n through `(nodes[i], values[i])`
/// (Newton divided differences). Returns ascending coefficients.
pub fn interpolate(nodes: &[Complex64], values: &[Complex64]) -> Vec<Complex64> {
    let n = nodes.len();
    assert_eq!(n, values.len());
    // Divided-difference table.
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
        }
    }
    // Expand Newton form to monomial coefficients.
    let mut coeffs = vec![Complex64::ZERO; n];
    let mut basis = vec![Complex64::ZERO; n]; // prod (x - nodes[j<i])
    basis[0] = Complex64::ONE;
    let mut basis_len = 1;
    for (i, &c) in dd.iter().enumerate() {
        for (slot, b) in basis.iter().take(basis_len).enumerate() {
            coeffs[slot] += c * b;
        }
        if i + 1 < n {
            // basis *= (x - nodes[i])
            let node = nodes[i];
            let mut next = vec![Complex64::ZERO; basis_len + 1];
            for (j, &b) in basis.iter().take(basis_len).enumerate() {
                next[j + 1] += b;
                next[j] -= node * b;
            }
            basis_len += 1;
            basis[..basis_len].copy_from_slice(&next);
        }
    }
    coeffs
}

/// Deterministic interpolation nodes: scaled roots of unity with an
/// irrational twist (avoids symmetry collisions with real-coefficient
/// structure).
pub fn interpolation_nodes(n: usize, radius: f64) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64 + 0.1234567;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn roots_of_known_polynomials() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let cs: Vec<Complex64> = [-6.0, 11.0, -6.0, 1.0]
            .iter()
            .map(|&r| Complex64::new(r, 0.0))
            .collect();
        let roots = sorted_by_re(poly_roots(&cs).unwrap());
        for (r, expect) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - Complex64::new(expect, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_roots_exact() {
        // x^2 (x - 5)
        let cs: Vec<Complex64> = [0.0, 0.0, -5.0, 1.0]
            .iter()
            .map(|&r| Complex64::new(r, 0.0))
            .collect();
        let roots = poly_roots(&cs).unwrap();
        assert_eq!(roots.iter().filter(|r| r.norm() == 0.0).count(), 2);
        assert!(roots.iter().any(|r| (r - Complex64::new(5.0, 0.0)).norm() < 1e-10));
    }

    #[test]
    fn high_degree_roots_of_unity() {
        // x^24 - 1: all roots on the unit circle.
        let mut cs = vec![Complex64::ZERO; 25];
        cs[0] = Complex64::new(-1.0, 0.0);
        cs[24] = Complex64::ONE;
        let roots = poly_roots(&cs).unwrap();
        assert_eq!(roots.len(), 24);
        for r in roots {
            assert!((r.norm() - 1.0).abs() < 1e-9);
            assert!((r.powu(24) - Complex64::ONE).norm() < 1e-8);
        }
    }

    #[test]
    fn determinant_and_interpolation() {
        let i = Complex64::I;
        let m = vec![
            vec![Complex64::ONE, 2.0 * i],
            vec![3.0 * Complex64::ONE, 4.0 * Complex64::ONE + i],
        ];
        let d = complex_det(m);
        // det = 1*(4+i) - 2i*3 = 4 + i - 6i = 4 - 5i
        assert!((d - Complex64::new(4.0, -5.0)).norm() < 1e-12);

        // Interpolate x^3 - 2x + 1 through 4 nodes.
        let nodes = interpolation_nodes(4, 1.5);
        let f = |x: Complex64| x * x * x - 2.0 * x + 1.0;
        let values: Vec<Complex64> = nodes.iter().map(|&x| f(x)).collect();
        let coeffs = interpolate(&nodes, &values);
        let expect = [1.0, -2.0, 0.0, 1.0];
        for (c, e) in coeffs.iter().zip(expect) {
            assert!((c - Complex64::new(e, 0.0)).norm() < 1e-10, "{coeffs:?}");
        }
    }
}
