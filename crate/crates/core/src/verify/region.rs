//! The droplet as a region: polygon sampling of the exact boundary plus
//! ray crossings refined on the map itself.

use num_complex::Complex64;

use crate::boundary::ConformalMap;
use crate::geometry;

#[derive(Debug, Clone)]
pub struct Region {
    map: ConformalMap,
    phis: Vec<f64>,
    pub poly: Vec<Complex64>,
    pub centroid: Complex64,
    pub area: f64,
    /// Radius of the disk with the same area.
    pub scale: f64,
}

impl Region {
    pub fn new(map: &ConformalMap, n: usize) -> Self {
        let phis: Vec<f64> = (0..n).map(|k| std::f64::consts::TAU * k as f64 / n as f64).collect();
        let poly: Vec<Complex64> = phis.iter().map(|&p| map.eval(Complex64::from_polar(1.0, p))).collect();
        let area = geometry::signed_area(&poly).abs();
        Self {
            map: map.clone(),
            centroid: geometry::centroid(&poly),
            scale: (area / std::f64::consts::PI).sqrt(),
            area,
            phis,
            poly,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        geometry::contains(&self.poly, z)
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        geometry::distance_to_polyline(&self.poly, z)
    }

    fn boundary(&self, phi: f64) -> Complex64 {
        self.map.eval(Complex64::from_polar(1.0, phi))
    }

    /// Distances `ρ > 0` at which `c + ρ·e` meets the boundary, ascending.
    pub fn crossings(&self, c: Complex64, e: Complex64) -> Vec<f64> {
        let n = self.poly.len();
        let side = |p: Complex64| (e.conj() * (p - c)).im;
        let mut out = Vec::new();
        for k in 0..n {
            let (p, q) = (self.poly[k], self.poly[(k + 1) % n]);
            let (hp, hq) = (side(p), side(q));
            if (hp >= 0.0) == (hq >= 0.0) {
                continue;
            }
            let t = hp / (hp - hq);
            let along = (e.conj() * (p + (q - p) * t - c)).re;
            if along <= 0.0 {
                continue;
            }
            let (a, b) = (self.phis[k], if k + 1 == n { std::f64::consts::TAU } else { self.phis[k + 1] });
            let phi = self.refine(a, b, hp, hq, |p| side(p));
            let rho = (e.conj() * (self.boundary(phi) - c)).re;
            if rho > 0.0 {
                out.push(rho);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Illinois iteration for the sign change of `h(f(e^{iφ}))` on `[a, b]`.
    fn refine<H: Fn(Complex64) -> f64>(&self, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, h: H) -> f64 {
        let mut side = 0;
        for _ in 0..80 {
            let x = (a * fb - b * fa) / (fb - fa);
            let fx = h(self.boundary(x));
            if fx == 0.0 || (b - a).abs() < 1e-15 {
                return x;
            }
            if (fx > 0.0) == (fa > 0.0) {
                a = x;
                fa = fx;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            } else {
                b = x;
                fb = fx;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            }
        }
        0.5 * (a + b)
    }

    /// Farthest boundary crossing along `c + ρ·e`.
    pub fn reach(&self, c: Complex64, e: Complex64) -> Option<f64> {
        self.crossings(c, e).last().copied()
    }

    pub fn bounding_box(&self) -> (Complex64, Complex64) {
        let (mut lo, mut hi) = (self.poly[0], self.poly[0]);
        for p in &self.poly {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        (lo, hi)
    }
}
