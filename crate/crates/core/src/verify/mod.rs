//! Independent checks of a boundary solution: the equilibrium potential
//! `U(z) = W(z) − 2∬_E log|z − w| g(|w|²) d²w` by direct quadrature, the
//! contour Cauchy-transform identity, a 2D mass quadrature, and comparison
//! of the predicted support with sampled eigenvalues.

mod quadrature;
mod region;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::boundary::{BoundaryError, BoundarySolution, CircleGrid};
use crate::gas::Snapshot;
use crate::geometry;
use crate::potential::{Potential, RadialProfile};

pub use quadrature::{adaptive, gk15, graded_toward_end, graded_toward_start, halton};
pub use region::Region;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("quadrature at {z} missed its error target (estimate {err:e})")]
    QuadratureFailure { z: Complex64, err: f64 },
    #[error("{z} is {distance:e} from the contour")]
    PoleProximity { z: Complex64, distance: f64 },
    #[error("no samples")]
    EmptyInput,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

pub type Result<T> = std::result::Result<T, VerifyError>;

/// Points of the region polygon used for ray crossings.
const REGION_POINTS: usize = 1024;
/// Relative width of the innermost graded radial panel.
const RADIAL_FLOOR: f64 = 1e-10;
const ANGULAR_PANELS: usize = 32;
const ANGULAR_TOL: f64 = 1e-9;
const MAX_PANELS: usize = 4096;
/// Absolute error target of a single potential evaluation.
const QUADRATURE_TARGET: f64 = 1e-4;
const INTERIOR_PROBES: usize = 128;
const CONTOUR_PROBES: usize = 20;
const PROBE_MARGIN: f64 = 0.03;
const EXTERIOR_ANGLES: usize = 24;
const DILATIONS: [f64; 5] = [1.1, 1.2, 1.3, 1.4, 1.5];

pub const CONTOUR_TOL: f64 = 1e-6;
pub const MASS_TOL: f64 = 1e-6;
pub const SELFCONS_TOL: f64 = 1e-8;

/// `∫_a^b f` with graded panels at every point of `specials` in `[a, b]`.
fn radial_segment<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, specials: &[f64]) -> (f64, f64) {
    let mut pts = vec![a];
    pts.extend(specials.iter().copied().filter(|&s| s > a && s < b));
    pts.push(b);
    pts.sort_by(f64::total_cmp);
    let special = |x: f64| specials.contains(&x);
    let (mut value, mut err) = (0.0, 0.0);
    for w in pts.windows(2) {
        let (u, v) = (w[0], w[1]);
        let (vv, ee) = match (special(u), special(v)) {
            (true, true) => {
                let m = 0.5 * (u + v);
                let (v1, e1) = graded_toward_start(f, u, m, RADIAL_FLOOR);
                let (v2, e2) = graded_toward_end(f, m, v, RADIAL_FLOOR);
                (v1 + v2, e1 + e2)
            }
            (true, false) => graded_toward_start(f, u, v, RADIAL_FLOOR),
            (false, true) => graded_toward_end(f, u, v, RADIAL_FLOOR),
            (false, false) => {
                let h = (v - u) / 4.0;
                (0..4).fold((0.0, 0.0), |(s, e), k| {
                    let (x, y) = gk15(f, u + k as f64 * h, u + (k + 1) as f64 * h);
                    (s + x, e + y)
                })
            }
        };
        value += vv;
        err += ee;
    }
    (value, err)
}

/// Radial intervals of `E` along `c + ρe`, given whether `c` is inside.
fn intervals(region: &Region, c: Complex64, e: Complex64, inside: bool) -> Vec<(f64, f64)> {
    let mut cr = region.crossings(c, e);
    if inside {
        cr.insert(0, 0.0);
    }
    cr.chunks_exact(2).map(|w| (w[0], w[1])).collect()
}

fn density(profile: &RadialProfile, s: f64) -> f64 {
    profile.density(s).unwrap_or(f64::NAN)
}

/// Angular integral over `[ψ₀, ψ₀ + 2π]`.
fn angular<F: FnMut(f64) -> f64>(f: F, psi0: f64, z: Complex64) -> Result<f64> {
    let (v, err) = adaptive(f, &[psi0, psi0 + std::f64::consts::TAU], ANGULAR_PANELS, ANGULAR_TOL, MAX_PANELS);
    if !(err <= QUADRATURE_TARGET) || !v.is_finite() {
        return Err(VerifyError::QuadratureFailure { z, err });
    }
    Ok(v)
}

/// `∬_E log|z − w| g(|w|²) d²w`.
fn log_potential(region: &Region, profile: &RadialProfile, z: Complex64) -> Result<f64> {
    let singular = profile.singular_at_origin();
    let origin_inside = region.contains(Complex64::new(0.0, 0.0));
    if region.contains(z) {
        // polar about z; the ray through the origin is put at the panel ends
        let psi0 = if z.norm() > 0.0 { (-z).arg() } else { 0.0 };
        let f = |psi: f64| {
            let e = Complex64::from_polar(1.0, psi);
            let closest = -(e.conj() * z).re;
            let specials = if singular && closest > 0.0 { vec![0.0, closest] } else { vec![0.0] };
            let mut radial = |rho: f64| rho * rho.ln() * density(profile, (z + e * rho).norm_sqr());
            intervals(region, z, e, true)
                .iter()
                .map(|&(a, b)| radial_segment(&mut radial, a, b, &specials).0)
                .sum::<f64>()
        };
        angular(f, psi0, z)
    } else {
        let f = |psi: f64| {
            let e = Complex64::from_polar(1.0, psi);
            let closest = (e.conj() * z).re;
            let specials = if closest > 0.0 { vec![0.0, closest] } else { vec![0.0] };
            let mut radial = |rho: f64| rho * density(profile, rho * rho) * (z - e * rho).norm().ln();
            intervals(region, Complex64::new(0.0, 0.0), e, origin_inside)
                .iter()
                .map(|&(a, b)| radial_segment(&mut radial, a, b, &specials).0)
                .sum::<f64>()
        };
        angular(f, z.arg(), z)
    }
}

fn potential_at(region: &Region, pot: &Potential, z: Complex64) -> Result<f64> {
    Ok(pot.w(z) - 2.0 * log_potential(region, &pot.radial, z)?)
}

/// `(z, U(z))` for each probe.
pub fn variational_field(sol: &BoundarySolution, pot: &Potential, probes: &[Complex64]) -> Result<Vec<(Complex64, f64)>> {
    if probes.is_empty() {
        return Ok(Vec::new());
    }
    let region = Region::new(&sol.map, REGION_POINTS);
    probes.par_iter().map(|&z| Ok((z, potential_at(&region, pot, z)?))).collect()
}

/// `∬_E g(|w|²) d²w` by polar quadrature about the origin.
pub fn mass_oracle(sol: &BoundarySolution, pot: &Potential) -> Result<f64> {
    let region = Region::new(&sol.map, REGION_POINTS);
    let origin = Complex64::new(0.0, 0.0);
    let inside = region.contains(origin);
    let profile = &pot.radial;
    let f = |psi: f64| {
        let e = Complex64::from_polar(1.0, psi);
        let mut radial = |rho: f64| rho * density(profile, rho * rho);
        intervals(&region, origin, e, inside)
            .iter()
            .map(|&(a, b)| {
                let (v, _) = radial_segment(&mut radial, a, b, &[0.0]);
                // the skipped sliver [0, ε] holds I(ε²)/2π exactly
                let sliver = if a == 0.0 { profile.moment((RADIAL_FLOOR * b).powi(2)) / std::f64::consts::TAU } else { 0.0 };
                v + sliver
            })
            .sum::<f64>()
    };
    angular(f, 0.0, origin)
}

/// `(2πi)⁻¹∮_{∂E} I(|w|²)/(w(w − z)) dw` by the trapezoid rule on twice the
/// map's grid.
pub fn contour_cauchy(sol: &BoundarySolution, profile: &RadialProfile, z: Complex64) -> Result<Complex64> {
    let grid = CircleGrid::new(2 * sol.map.grid_size)?;
    let f = sol.map.on_grid(&grid, 1.0);
    let dlog = sol.map.zeta_log_derivative_on_grid(&grid);
    let distance = f.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
    if distance < 1e-3 * sol.conformal_radius() {
        return Err(VerifyError::PoleProximity { z, distance });
    }
    let sum: Complex64 = f.iter().zip(&dlog).map(|(w, d)| profile.moment(w.norm_sqr()) * d / (w - z)).sum();
    Ok(-sum / grid.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub inside: f64,
    pub outside: f64,
    pub contour: f64,
    pub mass: f64,
    pub selfcons: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_outside: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PassFlags {
    pub inside: bool,
    pub outside: bool,
    pub contour: bool,
    pub mass: bool,
    pub selfcons: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<bool>,
    pub overall: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    /// `max |U − Ĉ|` over interior probes.
    pub variational_inside_dev: f64,
    /// `min (U − Ĉ)` over exterior probes.
    pub variational_outside_margin: f64,
    /// Ĉ, the mean of `U` over interior probes.
    pub interior_constant: f64,
    pub contour_max_err: f64,
    /// Worst of `|mass₂D − 1|` and `|mass₂D − mass_contour|`.
    pub mass_err: f64,
    pub selfcons_err: f64,
    pub sample_outside_fraction: Option<f64>,
    pub interior_probes: usize,
    pub exterior_probes: usize,
    pub quadrature_failures: usize,
    pub tolerances: Tolerances,
    pub pass: PassFlags,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.pass.overall
    }

    /// Adds a sample comparison; the check passes when the fraction is at
    /// most `max_fraction`.
    pub fn record_samples(&mut self, fraction: f64, max_fraction: f64) {
        self.sample_outside_fraction = Some(fraction);
        self.tolerances.sample_outside = Some(max_fraction);
        self.pass.samples = Some(fraction <= max_fraction);
        self.pass.overall = self.pass.overall && fraction <= max_fraction;
    }
}

/// Halton points inside the region at least `PROBE_MARGIN·scale` from the
/// boundary.
pub fn interior_probes(region: &Region, count: usize) -> Vec<Complex64> {
    let (lo, hi) = region.bounding_box();
    let mut out = Vec::with_capacity(count);
    for i in 1..200_000u64 {
        if out.len() == count {
            break;
        }
        let (u, v) = halton(i);
        let z = Complex64::new(lo.re + u * (hi.re - lo.re), lo.im + v * (hi.im - lo.im));
        if region.contains(z) && region.distance(z) >= PROBE_MARGIN * region.scale {
            out.push(z);
        }
    }
    out
}

/// Points on dilations of the boundary about its centroid, kept inside the
/// domain disk.
pub fn exterior_probes(region: &Region, domain_radius: f64) -> Vec<Complex64> {
    let c = region.centroid;
    let mut out = Vec::new();
    for k in 0..EXTERIOR_ANGLES {
        let e = Complex64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.5) / EXTERIOR_ANGLES as f64);
        let Some(r) = region.reach(c, e) else { continue };
        for s in DILATIONS {
            let z = c + e * (s * r);
            if z.norm() <= domain_radius && !region.contains(z) && region.distance(z) >= PROBE_MARGIN * region.scale {
                out.push(z);
            }
        }
    }
    out
}

/// Runs every check on `sol` against `pot`. Quadrature failures count as
/// failed probes rather than errors.
pub fn check_equilibrium(sol: &BoundarySolution, pot: &Potential, tol_inside: f64, tol_outside: f64) -> VerificationReport {
    let region = Region::new(&sol.map, REGION_POINTS);
    let inner = interior_probes(&region, INTERIOR_PROBES);
    let outer = exterior_probes(&region, pot.domain_radius);

    let eval = |z: &Complex64| potential_at(&region, pot, *z).ok();
    let u_in: Vec<Option<f64>> = inner.par_iter().map(eval).collect();
    let u_out: Vec<Option<f64>> = outer.par_iter().map(eval).collect();
    let failures = u_in.iter().chain(&u_out).filter(|u| u.is_none()).count();
    let u_in: Vec<f64> = u_in.into_iter().flatten().collect();
    let u_out: Vec<f64> = u_out.into_iter().flatten().collect();

    let c_hat = if u_in.is_empty() { f64::NAN } else { u_in.iter().sum::<f64>() / u_in.len() as f64 };
    let inside_dev = if u_in.is_empty() { f64::INFINITY } else { u_in.iter().map(|u| (u - c_hat).abs()).fold(0.0, f64::max) };
    let outside_margin = u_out.iter().map(|u| u - c_hat).fold(f64::INFINITY, f64::min);

    let contour_max_err = inner
        .par_iter()
        .take(CONTOUR_PROBES)
        .map(|&z| match contour_cauchy(sol, &pot.radial, z) {
            Ok(h) => (h - pot.p_prime(z)).norm(),
            Err(_) => f64::INFINITY,
        })
        .reduce(|| 0.0, f64::max);
    let contour_max_err = if inner.is_empty() { f64::INFINITY } else { contour_max_err };

    let mass_err = match mass_oracle(sol, pot) {
        Ok(m) => (m - 1.0).abs().max((m - sol.mass()).abs()),
        Err(_) => f64::INFINITY,
    };
    let selfcons_err = crate::boundary::self_consistency(&sol.map, &sol.theta, &pot.radial);

    let ok = |v: f64, tol: f64| v <= tol;
    let inside = failures == 0 && ok(inside_dev, tol_inside);
    let outside = failures == 0 && outside_margin >= -tol_outside;
    let contour = ok(contour_max_err, CONTOUR_TOL);
    let mass = ok(mass_err, MASS_TOL);
    let selfcons = ok(selfcons_err, SELFCONS_TOL);
    VerificationReport {
        variational_inside_dev: inside_dev,
        variational_outside_margin: outside_margin,
        interior_constant: c_hat,
        contour_max_err,
        mass_err,
        selfcons_err,
        sample_outside_fraction: None,
        interior_probes: inner.len(),
        exterior_probes: outer.len(),
        quadrature_failures: failures,
        tolerances: Tolerances {
            inside: tol_inside,
            outside: tol_outside,
            contour: CONTOUR_TOL,
            mass: MASS_TOL,
            selfcons: SELFCONS_TOL,
            sample_outside: None,
        },
        pass: PassFlags { inside, outside, contour, mass, selfcons, samples: None, overall: inside && outside && contour && mass && selfcons },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportComparison {
    /// Fraction of pooled eigenvalues outside the `(1 + ε)`-dilated region.
    pub outside_fraction: f64,
    /// Directed distance from the sample hull to the curve over the
    /// curve scale.
    pub directed_distance: f64,
}

/// Fraction of the pooled points outside the region dilated by `1 + eps`
/// about its centroid.
pub fn outside_fraction(region: &Region, points: &[Complex64], eps: f64) -> f64 {
    let c = region.centroid;
    let out = points.iter().filter(|&&p| !region.contains(c + (p - c) / (1.0 + eps))).count();
    out as f64 / points.len() as f64
}

pub fn support_compare<'a, I>(sol: &BoundarySolution, snapshots: I, eps: f64) -> Result<SupportComparison>
where
    I: IntoIterator<Item = &'a Snapshot>,
{
    if !(eps >= 0.0) {
        return Err(VerifyError::InvalidArgument(format!("dilation must be non-negative, got {eps}")));
    }
    let points: Vec<Complex64> = snapshots.into_iter().flat_map(|s| s.z.iter().copied()).collect();
    if points.is_empty() {
        return Err(VerifyError::EmptyInput);
    }
    let region = Region::new(&sol.map, REGION_POINTS);
    let outside_fraction = outside_fraction(&region, &points, eps);

    let c = region.centroid;
    let mut by_distance = points;
    by_distance.sort_by(|p, q| (p - c).norm().total_cmp(&(q - c).norm()));
    let keep = ((by_distance.len() as f64 * 0.99).ceil() as usize).max(1);
    by_distance.truncate(keep);
    let hull = geometry::convex_hull(&by_distance);
    let directed = hull.iter().map(|&p| geometry::distance_to_polyline(&region.poly, p)).fold(0.0, f64::max);
    Ok(SupportComparison { outside_fraction, directed_distance: directed / region.scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{closed_form_map, closed_form_power, solve, SolveOptions, ThetaCoefficients};

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    fn gaussian(poly: Vec<Complex64>) -> Potential {
        Potential::with_default_domain(RadialProfile::power(1.0, 1.0).unwrap(), poly).unwrap()
    }

    fn unit_disk() -> (BoundarySolution, Potential) {
        let pot = gaussian(vec![]);
        (solve(&pot, &SolveOptions::default()).unwrap(), pot)
    }

    /// Potential of the unit-mass uniform disk of radius 1 at the origin:
    /// `1` inside and `|z|² − 2 log|z|` outside.
    fn disk_oracle(z: Complex64) -> f64 {
        let r = z.norm();
        if r <= 1.0 {
            1.0
        } else {
            r * r - 2.0 * r.ln()
        }
    }

    #[test]
    fn unit_disk_potential_matches_closed_form() {
        let (sol, pot) = unit_disk();
        let probes = [c(0.0, 0.0), c(0.5, 0.0), c(-0.3, 0.6), c(1.5, 0.0), c(0.0, -1.3)];
        let field = variational_field(&sol, &pot, &probes).unwrap();
        for (z, u) in field {
            assert!((u - disk_oracle(z)).abs() < 1e-6, "U({z}) = {u}");
        }
        let field = variational_field(&sol, &pot, &[c(0.0, 0.0), c(1.5, 0.0)]).unwrap();
        assert!(field[1].1 - field[0].1 > 0.0);
        assert!(variational_field(&sol, &pot, &[]).unwrap().is_empty());
    }

    #[test]
    fn singular_profile_disk_is_flat() {
        // b = 1/2: g ∝ |w|^{-1}, still a disk with constant interior potential
        let pot = Potential::with_default_domain(RadialProfile::power(1.0, 0.5).unwrap(), vec![]).unwrap();
        let sol = solve(&pot, &SolveOptions::default()).unwrap();
        let field = variational_field(&sol, &pot, &[c(0.0, 0.0), c(0.3, 0.2), c(-0.6, 0.1)]).unwrap();
        for (_, u) in &field[1..] {
            assert!((u - field[0].1).abs() < 1e-5, "{field:?}");
        }
    }

    #[test]
    fn mass_oracle_agrees_with_contour_mass() {
        let (sol, pot) = unit_disk();
        assert!((mass_oracle(&sol, &pot).unwrap() - 1.0).abs() < 1e-8);
        let pot = gaussian(vec![c(0.2, 0.0), c(0.1, 0.0)]);
        let sol = solve(&pot, &SolveOptions::default()).unwrap();
        assert!((mass_oracle(&sol, &pot).unwrap() - sol.mass()).abs() < 1e-7);
    }

    #[test]
    fn contour_identity() {
        let (sol, pot) = unit_disk();
        for z in [c(0.0, 0.0), c(0.4, -0.2)] {
            assert!(contour_cauchy(&sol, &pot.radial, z).unwrap().norm() < 1e-10);
        }
        let cf = closed_form_power(1.0, 1.0, 0.2).unwrap();
        let pot = gaussian(vec![c(0.2, 0.0)]);
        let sol = BoundarySolution::from_parts(cf.theta(), cf.map.clone(), &pot).unwrap();
        for z in [c(0.0, 0.0), c(0.5, 0.0)] {
            assert!((contour_cauchy(&sol, &pot.radial, z).unwrap() - 0.2).norm() < 1e-8);
        }
        let edge = sol.map.eval(c(1.0, 0.0));
        assert!(matches!(contour_cauchy(&sol, &pot.radial, edge), Err(VerifyError::PoleProximity { .. })));
    }

    #[test]
    fn gaussian_disk_passes() {
        let (sol, pot) = unit_disk();
        let rep = check_equilibrium(&sol, &pot, 5e-3, 5e-3);
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.interior_probes >= 100);
        assert!(rep.exterior_probes > 0);
    }

    #[test]
    fn shifted_case_passes() {
        let pot = gaussian(vec![c(0.2, 0.0)]);
        let sol = solve(&pot, &SolveOptions::default()).unwrap();
        let rep = check_equilibrium(&sol, &pot, 5e-3, 5e-3);
        assert!(rep.passed(), "{rep:?}");
        // the droplet is the unit disk about 0.2, so U has the closed form
        let z = c(0.7, 0.4);
        let u = variational_field(&sol, &pot, &[z]).unwrap()[0].1;
        assert!((u - rep.interior_constant).abs() < 1e-6);
    }

    #[test]
    fn wrong_radius_disk_fails_on_mass() {
        let pot = gaussian(vec![]);
        let map = closed_form_map(1.0, 1.0 / 1.1, &[], 1024).unwrap();
        let sol = BoundarySolution::from_parts(ThetaCoefficients::constant(1.21), map, &pot).unwrap();
        let rep = check_equilibrium(&sol, &pot, 5e-3, 5e-3);
        assert!(!rep.passed());
        assert!(!rep.pass.mass);
        assert!((rep.mass_err - 0.21).abs() < 1e-6);
        // uniform density on any centered disk gives a flat interior potential
        assert!(rep.pass.inside);
    }

    #[test]
    fn wrong_center_disk_fails_inside() {
        let pot = gaussian(vec![]);
        let beta = 0.3;
        let map = closed_form_map(1.0, 1.0, &[c(-1.0 / beta, 0.0)], 1024).unwrap();
        let theta = ThetaCoefficients::new(vec![c(1.0 + beta * beta, 0.0), c(beta, 0.0)]).unwrap();
        let sol = BoundarySolution::from_parts(theta, map, &pot).unwrap();
        let rep = check_equilibrium(&sol, &pot, 5e-3, 5e-3);
        assert!(!rep.pass.inside);
        assert!(rep.variational_inside_dev > 1e-2);
        assert!(!rep.passed());
    }

    #[test]
    fn support_comparison() {
        let (sol, _) = unit_disk();
        let snap = Snapshot { sweep: 1, z: sol.curve.clone() };
        let cmp = support_compare(&sol, [&snap], 0.01).unwrap();
        assert_eq!(cmp.outside_fraction, 0.0);
        assert!(cmp.directed_distance < 1e-3);
        assert!(matches!(support_compare(&sol, [&snap], -0.1), Err(VerifyError::InvalidArgument(_))));
        assert!(matches!(support_compare(&sol, std::iter::empty(), 0.1), Err(VerifyError::EmptyInput)));

        let far = Snapshot { sweep: 1, z: vec![c(0.0, 0.0), c(1.2, 0.0)] };
        let cmp = support_compare(&sol, [&far], 0.1).unwrap();
        assert_eq!(cmp.outside_fraction, 0.5);
        let cmp = support_compare(&sol, [&far], 0.3).unwrap();
        assert_eq!(cmp.outside_fraction, 0.0);
    }

    #[test]
    fn outside_fraction_is_monotone_in_dilation() {
        let (sol, _) = unit_disk();
        let region = Region::new(&sol.map, REGION_POINTS);
        let pts: Vec<Complex64> = (1..400).map(|i| {
            let (u, v) = halton(i);
            c(3.0 * u - 1.5, 3.0 * v - 1.5)
        }).collect();
        let mut last = 1.0;
        for k in 0..20 {
            let f = outside_fraction(&region, &pts, 0.05 * k as f64);
            assert!(f <= last);
            last = f;
        }
    }

    #[test]
    fn nonuniform_density_droplet_passes() {
        let gen = RadialProfile::generalized(vec![-1.0, 1.0], 1.0).unwrap();
        let pot = Potential::with_default_domain(gen, vec![c(0.1, 0.0)]).unwrap();
        let sol = solve(&pot, &SolveOptions::default()).unwrap();
        let rep = check_equilibrium(&sol, &pot, 1e-6, 1e-6);
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.variational_outside_margin > 0.0);
    }
}
