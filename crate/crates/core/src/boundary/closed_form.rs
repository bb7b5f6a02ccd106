//! Explicit droplet for `Φ = C·s^b` and `P(z) = K·z`.

use num_complex::Complex64;

use super::map::{closed_form_map, ConformalMap, ThetaCoefficients};
use super::BoundaryError;

const GRID: usize = 1024;

#[derive(Debug, Clone)]
pub struct ClosedForm {
    pub c: f64,
    pub b: f64,
    pub k: f64,
    pub a: f64,
    pub beta: f64,
    pub map: ConformalMap,
}

impl ClosedForm {
    /// `θ = Cb·a^{−2b}·(1 + βζ)(1 + βζ⁻¹)`.
    pub fn theta(&self) -> ThetaCoefficients {
        let amp = self.c * self.b * self.a.powf(-2.0 * self.b);
        ThetaCoefficients::new(vec![
            Complex64::new(amp * (1.0 + self.beta * self.beta), 0.0),
            Complex64::new(amp * self.beta, 0.0),
        ])
        .expect("finite closed-form coefficients")
    }

    /// `Cb·β·a^{1−2b} − K`.
    pub fn residue_defect(&self) -> f64 {
        self.c * self.b * self.beta * self.a.powf(1.0 - 2.0 * self.b) - self.k
    }

    /// `Cb·a^{−2b}(1 + β²(1 − 1/b)) − 1`.
    pub fn area_defect(&self) -> f64 {
        self.c * self.b * self.a.powf(-2.0 * self.b) * (1.0 + self.beta * self.beta * (1.0 - 1.0 / self.b))
            - 1.0
    }

    /// Map rebuilt on a different grid.
    pub fn map_with_grid(&self, grid_size: usize) -> Result<ConformalMap, BoundaryError> {
        closed_form_map(self.b, self.a, &roots(self.beta), grid_size)
    }
}

fn roots(beta: f64) -> Vec<Complex64> {
    if beta == 0.0 {
        Vec::new()
    } else {
        vec![Complex64::new(-1.0 / beta, 0.0)]
    }
}

/// Solves `Cb·a^{−2b} + K²(1 − 1/b)/(Cb)·a^{2b−2} = 1` on the branch that
/// starts from the disk at `K = 0`, then sets `β = K·a^{2b−1}/(Cb)`.
pub fn closed_form_power(c: f64, b: f64, k: f64) -> Result<ClosedForm, BoundaryError> {
    if !(c.is_finite() && b.is_finite() && k.is_finite()) {
        return Err(BoundaryError::NonFinite("closed_form_power"));
    }
    if !(c > 0.0 && b > 0.0) {
        return Err(BoundaryError::InvalidArgument(format!("need C, b > 0, got C = {c}, b = {b}")));
    }
    let cb = c * b;
    let q = k * k * (1.0 - 1.0 / b) / cb;
    let f = |a: f64| cb * a.powf(-2.0 * b) + q * a.powf(2.0 * b - 2.0) - 1.0;
    let df = |a: f64| -2.0 * b * cb * a.powf(-2.0 * b - 1.0) + q * (2.0 * b - 2.0) * a.powf(2.0 * b - 3.0);

    let a0 = cb.powf(0.5 / b);
    let f0 = f(a0);
    let a = if f0 == 0.0 {
        a0
    } else {
        // f decreases in a near a0 (first term dominates), so f0 > 0 means walk up.
        let factor = if f0 > 0.0 { 1.05 } else { 1.0 / 1.05 };
        let (mut lo, mut flo) = (a0, f0);
        let mut hi = a0;
        let mut found = false;
        for _ in 0..4000 {
            hi = lo * factor;
            let fhi = f(hi);
            if !fhi.is_finite() {
                break;
            }
            if fhi.signum() != flo.signum() || fhi == 0.0 {
                found = true;
                break;
            }
            if fhi.abs() >= flo.abs() {
                break;
            }
            lo = hi;
            flo = fhi;
        }
        if !found {
            return Err(BoundaryError::NoRealRoot);
        }
        let (mut x0, mut x1) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (x0 + x1);
            if (f(mid) > 0.0) == (flo > 0.0) {
                x0 = mid;
            } else {
                x1 = mid;
            }
            if (x1 - x0).abs() <= 1e-16 * mid {
                break;
            }
        }
        let mut a = 0.5 * (x0 + x1);
        for _ in 0..3 {
            let d = df(a);
            if d != 0.0 {
                let next = a - f(a) / d;
                if next > x0.min(x1) && next < x0.max(x1) {
                    a = next;
                }
            }
        }
        a
    };
    let beta = k * a.powf(2.0 * b - 1.0) / cb;
    if beta.abs() >= 1.0 {
        return Err(BoundaryError::NoRealRoot);
    }
    let map = closed_form_map(b, a, &roots(beta), GRID)?;
    Ok(ClosedForm { c, b, k, a, beta, map })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent root: plain bisection on a wide log-spaced bracket.
    fn bisect_oracle(c: f64, b: f64, k: f64) -> f64 {
        let cb = c * b;
        let f = |a: f64| cb * a.powf(-2.0 * b) + k * k * (1.0 - 1.0 / b) / cb * a.powf(2.0 * b - 2.0) - 1.0;
        let a0 = cb.powf(0.5 / b);
        let grid: Vec<f64> = (0..=400).map(|i| a0 * 10f64.powf(-1.0 + i as f64 / 200.0)).collect();
        let (mut best, mut lo, mut hi) = (f64::INFINITY, 0.0, 0.0);
        for w in grid.windows(2) {
            if f(w[0]).signum() != f(w[1]).signum() {
                let dist = (w[0] / a0).ln().abs();
                if dist < best {
                    best = dist;
                    lo = w[0];
                    hi = w[1];
                }
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid).signum() == f(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn trivial_cases() {
        let cf = closed_form_power(1.0, 1.0, 0.0).unwrap();
        assert_eq!((cf.a, cf.beta), (1.0, 0.0));
        let cf = closed_form_power(1.0, 1.0, 0.2).unwrap();
        assert!((cf.a - 1.0).abs() < 1e-14);
        assert!((cf.beta - 0.2).abs() < 1e-14);
    }

    #[test]
    fn matches_bisection_oracle() {
        for &(c, b, k) in &[(1.0, 2.0, 0.3), (0.5, 2.0, 0.1), (1.0, 0.7, 0.2), (2.0, 1.5, -0.25)] {
            let cf = closed_form_power(c, b, k).unwrap();
            let a = bisect_oracle(c, b, k);
            assert!((cf.a - a).abs() < 1e-12 * a, "{c} {b} {k}: {} vs {a}", cf.a);
            assert!(cf.residue_defect().abs() < 1e-12);
            assert!(cf.area_defect().abs() < 1e-12);
        }
    }

    #[test]
    fn theta_has_expected_residue() {
        let cf = closed_form_power(1.0, 2.0, 0.3).unwrap();
        let th = cf.theta();
        // residue of θ at 0 equals K/a, the residue of K·f
        assert!((th.coeff(-1).re - 0.3 / cf.a).abs() < 1e-12);
    }

    #[test]
    fn critical_strength_has_no_root() {
        assert!(matches!(closed_form_power(1.0, 1.0, 1.2), Err(BoundaryError::NoRealRoot)));
        assert!(matches!(closed_form_power(1.0, 2.0, 5.0), Err(BoundaryError::NoRealRoot)));
        assert!(closed_form_power(-1.0, 1.0, 0.0).is_err());
    }
}
