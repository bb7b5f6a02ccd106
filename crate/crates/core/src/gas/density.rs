//! Histogram and radial-CDF estimators over pooled snapshots.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{GasError, Result, Snapshot};

/// Square window `center ± half_width` split into `n × n` cells.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub center: Complex64,
    pub half_width: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || !(self.half_width > 0.0) || !self.center.re.is_finite() || !self.center.im.is_finite() {
            return Err(GasError::InvalidArgument(format!("bad grid {self:?}")));
        }
        Ok(())
    }

    pub fn cell_width(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn cell_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let h = self.cell_width();
        let fx = (z.re - self.center.re + self.half_width) / h;
        let fy = (z.im - self.center.im + self.half_width) / h;
        if fx < 0.0 || fy < 0.0 || !(fx < self.n as f64) || !(fy < self.n as f64) {
            return None;
        }
        Some((fx as usize, fy as usize))
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Complex64 {
        let h = self.cell_width();
        self.center - Complex64::new(self.half_width, self.half_width)
            + Complex64::new((ix as f64 + 0.5) * h, (iy as f64 + 0.5) * h)
    }
}

/// Counts per cell; `total` includes points that fell outside the window,
/// so the normalized histogram integrates to the fraction inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub spec: GridSpec,
    /// Row-major in `y`, then `x`.
    pub counts: Vec<u64>,
    pub total: u64,
    pub snapshots: u64,
}

impl DensityGrid {
    pub fn empty(spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec, counts: vec![0; spec.n * spec.n], total: 0, snapshots: 0 })
    }

    pub fn add(&mut self, snap: &Snapshot) {
        for &z in &snap.z {
            if let Some((ix, iy)) = self.spec.cell_of(z) {
                self.counts[iy * self.spec.n + ix] += 1;
            }
        }
        self.total += snap.z.len() as u64;
        self.snapshots += 1;
    }

    pub fn merge(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(GasError::InvalidArgument("cannot merge grids with different layouts".into()));
        }
        Ok(Self {
            spec: self.spec,
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
            total: self.total + other.total,
            snapshots: self.snapshots + other.snapshots,
        })
    }

    pub fn density(&self, ix: usize, iy: usize) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let h = self.spec.cell_width();
        self.counts[iy * self.spec.n + ix] as f64 / (self.total as f64 * h * h)
    }

    pub fn mass(&self) -> f64 {
        let h = self.spec.cell_width();
        (0..self.spec.n)
            .flat_map(|iy| (0..self.spec.n).map(move |ix| (ix, iy)))
            .map(|(ix, iy)| self.density(ix, iy) * h * h)
            .sum()
    }

    /// `x,y,density` rows at cell centers.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,density\n");
        for iy in 0..self.spec.n {
            for ix in 0..self.spec.n {
                let c = self.spec.cell_center(ix, iy);
                writeln!(out, "{},{},{}", c.re, c.im, self.density(ix, iy)).expect("write to String");
            }
        }
        out
    }
}

pub fn estimate_density<'a, I>(snapshots: I, spec: GridSpec) -> Result<DensityGrid>
where
    I: IntoIterator<Item = &'a Snapshot>,
{
    let mut grid = DensityGrid::empty(spec)?;
    for s in snapshots {
        grid.add(s);
    }
    if grid.snapshots == 0 {
        return Err(GasError::EmptyInput);
    }
    Ok(grid)
}

/// Sorted pooled moduli.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialCdf {
    pub radii: Vec<f64>,
}

impl RadialCdf {
    pub fn eval(&self, r: f64) -> f64 {
        self.radii.partition_point(|&x| x <= r) as f64 / self.radii.len() as f64
    }

    /// `(r, F(r))` at `k` equally spaced quantile levels.
    pub fn knots(&self, k: usize) -> Vec<(f64, f64)> {
        let n = self.radii.len();
        (1..=k)
            .map(|i| {
                let idx = ((i as f64 / k as f64) * n as f64).ceil() as usize;
                let r = self.radii[idx.clamp(1, n) - 1];
                (r, self.eval(r))
            })
            .collect()
    }
}

pub fn radial_cdf<'a, I>(snapshots: I) -> Result<RadialCdf>
where
    I: IntoIterator<Item = &'a Snapshot>,
{
    let mut radii: Vec<f64> = snapshots.into_iter().flat_map(|s| s.z.iter().map(|z| z.norm())).collect();
    if radii.is_empty() {
        return Err(GasError::EmptyInput);
    }
    radii.sort_by(f64::total_cmp);
    Ok(RadialCdf { radii })
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a − F_b|`.
pub fn ks_distance(a: &RadialCdf, b: &RadialCdf) -> f64 {
    let (na, nb) = (a.radii.len() as f64, b.radii.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut best = 0.0f64;
    while i < a.radii.len() && j < b.radii.len() {
        let x = a.radii[i].min(b.radii[j]);
        while i < a.radii.len() && a.radii[i] <= x {
            i += 1;
        }
        while j < b.radii.len() && b.radii[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / na - j as f64 / nb).abs());
    }
    best
}
