//! Pole cancellation, mass condition and the continuation Newton solver.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::fourier::CircleGrid;
use super::map::{build_map, ConformalMap, ThetaCoefficients};
use super::BoundaryError;
use crate::geometry;
use crate::potential::{Potential, RadialProfile};

const PROBE_RADII: [f64; 3] = [0.5, 0.3, 0.7];
const CURVE_POINTS: usize = 1024;
/// θ min/max ratio below which a failed solve is reported as breakdown.
const BREAKDOWN_RATIO: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub grid_size: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub continuation_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { grid_size: 1024, tol: 1e-10, max_iter: 50, continuation_steps: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// ∞-norm over the real and imaginary parts of the pole mismatch.
    pub mismatch: f64,
    /// `|mass − 1|`.
    pub mass: f64,
    /// Imaginary part of the mass quadrature.
    pub mass_imag: f64,
    pub self_consistency: f64,
}

#[derive(Debug, Clone)]
pub struct BoundarySolution {
    pub theta: ThetaCoefficients,
    pub map: ConformalMap,
    pub residuals: Residuals,
    /// Counterclockwise boundary polyline.
    pub curve: Vec<Complex64>,
    pub potential: Potential,
    pub newton_iterations: usize,
}

impl BoundarySolution {
    /// Packages a candidate `(θ, f)` pair for `pot`, computing its
    /// residuals and curve. Nothing is solved.
    pub fn from_parts(theta: ThetaCoefficients, map: ConformalMap, pot: &Potential) -> Result<Self, BoundaryError> {
        let grid = grid_for(&map);
        let mismatch = mismatch_on(&theta, &map, pot, &grid)?
            .iter()
            .fold(0.0f64, |m, v| m.max(v.re.abs()).max(v.im.abs()));
        let mc = mass_on(&theta, &map, &grid);
        let residuals = Residuals {
            mismatch,
            mass: (mc.re - 1.0).abs(),
            mass_imag: mc.im,
            self_consistency: self_consistency(&map, &theta, &pot.radial),
        };
        let curve = boundary_curve(&map, CURVE_POINTS)?;
        Ok(Self { theta, map, residuals, curve, potential: pot.clone(), newton_iterations: 0 })
    }

    pub fn a(&self) -> f64 {
        self.map.a
    }

    pub fn conformal_radius(&self) -> f64 {
        self.map.conformal_radius()
    }

    pub fn mass(&self) -> f64 {
        mass(&self.theta, &self.map)
    }
}

fn grid_for(map: &ConformalMap) -> CircleGrid {
    CircleGrid::new(map.grid_size).expect("map grids are validated on construction")
}

/// Coefficients of `ζ^{−d}..ζ^{−1}` in `θ − f·P′(f)`.
pub fn singular_mismatch(
    theta: &ThetaCoefficients,
    map: &ConformalMap,
    pot: &Potential,
) -> Result<Vec<Complex64>, BoundaryError> {
    mismatch_on(theta, map, pot, &grid_for(map))
}

fn mismatch_on(
    theta: &ThetaCoefficients,
    map: &ConformalMap,
    pot: &Potential,
    grid: &CircleGrid,
) -> Result<Vec<Complex64>, BoundaryError> {
    let d = pot.degree();
    if d == 0 {
        return Ok(Vec::new());
    }
    for rho in PROBE_RADII {
        let f = map.on_grid(grid, rho);
        let samples: Vec<Complex64> = f
            .iter()
            .enumerate()
            .map(|(j, &fz)| (grid.node(j) * rho).powu(d as u32) * fz * pot.p_prime(fz))
            .collect();
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            continue;
        }
        let hat = grid.coefficients(&samples);
        let mut out = Vec::with_capacity(d);
        let mut rn = 1.0;
        for (n, h) in hat.iter().take(d).enumerate() {
            out.push(theta.coeff(n as isize - d as isize) - h / rn);
            rn *= rho;
        }
        return Ok(out);
    }
    Err(BoundaryError::EvaluationOverflow)
}

/// `−(2πi)⁻¹∮ θ(u)·f′(u)/f(u) du` by the trapezoid rule on the map's grid.
pub fn mass_complex(theta: &ThetaCoefficients, map: &ConformalMap) -> Complex64 {
    mass_on(theta, map, &grid_for(map))
}

fn mass_on(theta: &ThetaCoefficients, map: &ConformalMap, grid: &CircleGrid) -> Complex64 {
    let th = theta.sample(grid);
    let dlog = map.zeta_log_derivative_on_grid(grid);
    -th.iter().zip(&dlog).map(|(t, d)| d * t).sum::<Complex64>() / grid.len() as f64
}

pub fn mass(theta: &ThetaCoefficients, map: &ConformalMap) -> f64 {
    mass_complex(theta, map).re
}

/// `max |f(ζ)·conj f(ζ) − I⁻¹(θ(ζ))|` over the unit-circle grid.
pub fn self_consistency(map: &ConformalMap, theta: &ThetaCoefficients, profile: &RadialProfile) -> f64 {
    let grid = grid_for(map);
    let f = map.on_grid(&grid, 1.0);
    theta
        .sample(&grid)
        .iter()
        .zip(&f)
        .map(|(&t, fz)| match profile.moment_inverse(t) {
            Ok(s) => (fz.norm_sqr() - s).abs(),
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

/// `f(e^{−2πik/n})`, oriented counterclockwise.
pub fn boundary_curve(map: &ConformalMap, n: usize) -> Result<Vec<Complex64>, BoundaryError> {
    if n == 0 {
        return Err(BoundaryError::InvalidArgument("curve needs at least one point".into()));
    }
    let mut curve: Vec<Complex64> = (0..n)
        .map(|k| map.eval(Complex64::from_polar(1.0, -std::f64::consts::TAU * k as f64 / n as f64)))
        .collect();
    if curve.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(BoundaryError::NonFinite("boundary curve"));
    }
    if geometry::signed_area(&curve) < 0.0 {
        curve[1..].reverse();
    }
    if !geometry::is_simple(&curve) {
        return Err(BoundaryError::SelfIntersection { curve });
    }
    Ok(curve)
}

struct System<'a> {
    pot: Potential,
    radial: &'a RadialProfile,
    grid: &'a CircleGrid,
}

struct Eval {
    r: Vec<f64>,
    norm: f64,
    theta: ThetaCoefficients,
    map: ConformalMap,
}

impl System<'_> {
    fn eval(&self, x: &[f64]) -> Result<Eval, BoundaryError> {
        let theta = ThetaCoefficients::from_unknowns(x);
        let map = build_map(&theta, self.radial, self.grid)?;
        let mism = mismatch_on(&theta, &map, &self.pot, self.grid)?;
        let mut r = Vec::with_capacity(x.len());
        for v in &mism {
            r.push(v.re);
            r.push(v.im);
        }
        r.push(mass_on(&theta, &map, self.grid).re - 1.0);
        if r.iter().any(|v| !v.is_finite()) {
            return Err(BoundaryError::NonFinite("residual"));
        }
        let norm = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Eval { r, norm, theta, map })
    }
}

fn theta_ratio(x: &[f64], grid: &CircleGrid) -> f64 {
    let vals = ThetaCoefficients::from_unknowns(x).sample(grid);
    let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    if hi > 0.0 {
        lo / hi
    } else {
        f64::NEG_INFINITY
    }
}

enum StepOutcome {
    Accepted(Vec<f64>, Eval),
    Stalled { hit_floor: bool },
}

fn newton_step(sys: &System, x: &[f64], cur: &Eval) -> StepOutcome {
    let n = x.len();
    let mut hit_floor = false;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let h = 1e-7 * (1.0 + x[i].abs());
        let mut xp = x.to_vec();
        xp[i] += h;
        match sys.eval(&xp) {
            Ok(e) => {
                for (k, v) in e.r.iter().enumerate() {
                    jac[(k, i)] = (v - cur.r[k]) / h;
                }
            }
            Err(err) => {
                hit_floor |= matches!(err, BoundaryError::ThetaNonPositive { .. });
                return StepOutcome::Stalled { hit_floor };
            }
        }
    }
    let rhs = -DVector::from_column_slice(&cur.r);
    let Some(dx) = jac.lu().solve(&rhs) else {
        return StepOutcome::Stalled { hit_floor };
    };
    let mut lambda = 1.0;
    for _ in 0..=20 {
        let trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, d)| a + lambda * d).collect();
        match sys.eval(&trial) {
            Ok(e) if e.norm < (1.0 - 1e-4 * lambda) * cur.norm => return StepOutcome::Accepted(trial, e),
            Ok(_) => {}
            Err(err) => hit_floor |= matches!(err, BoundaryError::ThetaNonPositive { .. }),
        }
        lambda *= 0.5;
    }
    StepOutcome::Stalled { hit_floor }
}

/// Continuation in the strength of `P` from the equilibrium disk, with a
/// damped Newton corrector at every step.
pub fn solve(pot: &Potential, opts: &SolveOptions) -> Result<BoundarySolution, BoundaryError> {
    if !(opts.tol > 0.0) || opts.max_iter == 0 || opts.continuation_steps == 0 {
        return Err(BoundaryError::InvalidArgument(format!("bad solver options {opts:?}")));
    }
    let grid = CircleGrid::new(opts.grid_size)?;
    let d = pot.degree();
    if 2 * d + 2 > opts.grid_size / 2 {
        return Err(BoundaryError::InvalidArgument(format!("grid {} too small for degree {d}", opts.grid_size)));
    }
    let mut x = vec![0.0; 2 * d + 1];
    x[0] = 1.0;
    let mut iterations = 0;
    let mut last = None;
    let steps = if d == 0 { 1 } else { opts.continuation_steps };
    for step in 1..=steps {
        let t = step as f64 / steps as f64;
        let sys = System { pot: pot.scaled(t), radial: &pot.radial, grid: &grid };
        let fail = |x: &[f64], hit_floor: bool, residual: f64| {
            let ratio = theta_ratio(x, &grid);
            if hit_floor || ratio < BREAKDOWN_RATIO {
                BoundaryError::BoundaryBreakdown { t, ratio }
            } else {
                BoundaryError::NoConvergence { t, residual }
            }
        };
        let mut cur = match sys.eval(&x) {
            Ok(e) => e,
            Err(BoundaryError::ThetaNonPositive { .. }) => return Err(fail(&x, true, f64::INFINITY)),
            Err(e) => return Err(e),
        };
        let mut converged = cur.norm < opts.tol;
        let mut it = 0;
        while !converged && it < opts.max_iter {
            it += 1;
            match newton_step(&sys, &x, &cur) {
                StepOutcome::Accepted(nx, e) => {
                    x = nx;
                    cur = e;
                    converged = cur.norm < opts.tol;
                }
                StepOutcome::Stalled { hit_floor } => return Err(fail(&x, hit_floor, cur.norm)),
            }
        }
        if !converged {
            return Err(fail(&x, false, cur.norm));
        }
        if step == steps {
            for _ in 0..3 {
                match newton_step(&sys, &x, &cur) {
                    StepOutcome::Accepted(nx, e) => {
                        x = nx;
                        cur = e;
                    }
                    StepOutcome::Stalled { .. } => break,
                }
            }
        }
        iterations += it;
        last = Some(cur);
    }
    let Eval { theta, map, .. } = last.expect("at least one continuation step");
    let mut sol = BoundarySolution::from_parts(theta, map, pot)?;
    sol.newton_iterations = iterations;
    Ok(sol)
}
