//! Generalized normal matrices with a cyclic block structure.
//!
//! `A` is `mN × mN` with `N × N` blocks `A_i` at block position `(i, i+1 mod m)`
//! and `[A, A†] = diag(λ₁I, …, λ_mI)`. Up to the `U(N)^m` action
//! `A_i ↦ S_i A_i S_{i+1}†`, such a matrix is determined by `N` points on
//! the surface `|z|² = Q(x)`.

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::potential::{BlockPolynomial, PotentialError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenmatError {
    #[error("invalid surface point: {0}")]
    InvalidSurfacePoint(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("could not separate the spectrum of A₁A₁†")]
    DegenerateSpectrum,
    #[error("block {0} is singular, phases cannot be recovered")]
    SingularBlock(usize),
    #[error("x = {0} is outside the domain of Q")]
    OutOfDomain(f64),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

pub type Result<T> = std::result::Result<T, GenmatError>;

type CMat = DMatrix<Complex64>;

/// `(z, x)` with per-factor phases; `z = ∏ √(x + αᵢ)·e^{iθᵢ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    pub z: Complex64,
    pub x: f64,
    pub phases: Vec<f64>,
}

impl SurfacePoint {
    /// Point from `x` and the `m` phases.
    pub fn from_phases(x: f64, phases: Vec<f64>, alphas: &[f64]) -> Result<Self> {
        if phases.len() != alphas.len() {
            return Err(GenmatError::DimensionMismatch(format!(
                "{} phases for {} blocks",
                phases.len(),
                alphas.len()
            )));
        }
        check_x(x, alphas)?;
        let z = alphas
            .iter()
            .zip(&phases)
            .fold(Complex64::new(1.0, 0.0), |acc, (a, t)| acc * Complex64::from_polar((x + a).sqrt(), *t));
        Ok(Self { z, x, phases: phases.into_iter().map(wrap).collect() })
    }

    /// Point from `(z, x)` in the gauge `θ₁ = arg z`, `θ₂ = … = θ_m = 0`.
    pub fn new(z: Complex64, x: f64, alphas: &[f64]) -> Result<Self> {
        let p = Self { z, x, phases: gauge_phases(z, alphas.len()) };
        p.validate(alphas)?;
        Ok(p)
    }

    pub fn validate(&self, alphas: &[f64]) -> Result<()> {
        if self.phases.len() != alphas.len() {
            return Err(GenmatError::DimensionMismatch(format!(
                "{} phases for {} blocks",
                self.phases.len(),
                alphas.len()
            )));
        }
        check_x(self.x, alphas)?;
        let q: f64 = alphas.iter().map(|a| self.x + a).product();
        let z2 = self.z.norm_sqr();
        if !((z2 - q).abs() <= 1e-12 * q.max(1.0)) {
            return Err(GenmatError::InvalidSurfacePoint(format!("|z|² = {z2} but Q(x) = {q}")));
        }
        let phase: f64 = self.phases.iter().sum();
        if q > 0.0 && (Complex64::from_polar(1.0, phase) - self.z / self.z.norm()).norm() > 1e-9 {
            return Err(GenmatError::InvalidSurfacePoint("phases do not add up to arg z".into()));
        }
        Ok(())
    }

    /// Factor `z^i = √(x + αᵢ)·e^{iθᵢ}`.
    pub fn factor(&self, i: usize, alphas: &[f64]) -> Complex64 {
        Complex64::from_polar((self.x + alphas[i]).max(0.0).sqrt(), self.phases[i])
    }
}

fn wrap(t: f64) -> f64 {
    t.rem_euclid(std::f64::consts::TAU)
}

fn gauge_phases(z: Complex64, m: usize) -> Vec<f64> {
    let mut p = vec![0.0; m];
    if m > 0 {
        p[0] = wrap(z.arg());
    }
    p
}

fn check_x(x: f64, alphas: &[f64]) -> Result<()> {
    if !x.is_finite() {
        return Err(GenmatError::InvalidSurfacePoint(format!("x = {x}")));
    }
    if let Some(a) = alphas.iter().find(|a| x + *a < 0.0) {
        return Err(GenmatError::InvalidSurfacePoint(format!("x + α = {} < 0", x + a)));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedMatrix {
    pub alphas: Vec<f64>,
    pub blocks: Vec<CMat>,
}

impl GeneralizedMatrix {
    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.nrows())
    }

    /// `λᵢ = αᵢ − αᵢ₋₁` (cyclic).
    pub fn lambdas(&self) -> Vec<f64> {
        let m = self.alphas.len();
        (0..m).map(|i| self.alphas[i] - self.alphas[(i + m - 1) % m]).collect()
    }

    pub fn full(&self) -> CMat {
        let (m, n) = (self.m(), self.n());
        let mut a = CMat::zeros(m * n, m * n);
        for (i, b) in self.blocks.iter().enumerate() {
            let j = (i + 1) % m;
            a.view_mut((i * n, j * n), (n, n)).copy_from(b);
        }
        a
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum::<f64>().sqrt()
    }

    /// `A₁A₂⋯A_m`.
    pub fn monodromy(&self) -> CMat {
        let n = self.n();
        self.blocks.iter().fold(CMat::identity(n, n), |acc, b| acc * b)
    }
}

/// `‖[A, A†] − diag(λᵢ I)‖_F` from the full matrix.
pub fn commutator_defect(a: &GeneralizedMatrix) -> f64 {
    let full = a.full();
    let adj = full.adjoint();
    let mut c = &full * &adj - &adj * &full;
    let n = a.n();
    for (i, l) in a.lambdas().iter().enumerate() {
        for k in 0..n {
            c[(i * n + k, i * n + k)] -= *l;
        }
    }
    c.norm()
}

/// Eigenvalues of a square complex matrix via complex Schur form.
fn eigenvalues(t: &CMat) -> Vec<Complex64> {
    let n = t.nrows();
    if n == 0 {
        return Vec::new();
    }
    let schur = Schur::try_new(t.clone(), 1e-15, 10_000).unwrap_or_else(|| Schur::new(t.clone()));
    let (_, tri) = schur.unpack();
    (0..n).map(|i| tri[(i, i)]).collect()
}

pub fn monodromy_spectrum(a: &GeneralizedMatrix) -> Vec<Complex64> {
    eigenvalues(&a.monodromy())
}

/// `A_i = S_i·D_i·S_{i+1}†` with `D_i = diag(z^i_1, …, z^i_N)`.
pub fn build_from_eigendata(
    points: &[SurfacePoint],
    alphas: &[f64],
    rotations: Option<&[CMat]>,
) -> Result<GeneralizedMatrix> {
    let m = alphas.len();
    let n = points.len();
    if m == 0 {
        return Err(GenmatError::DimensionMismatch("need at least one block".into()));
    }
    for p in points {
        p.validate(alphas)?;
    }
    if let Some(rots) = rotations {
        if rots.len() != m || rots.iter().any(|s| s.nrows() != n || s.ncols() != n) {
            return Err(GenmatError::DimensionMismatch(format!("expected {m} unitaries of size {n}")));
        }
    }
    let blocks = (0..m)
        .map(|i| {
            let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                n,
                points.iter().map(|p| p.factor(i, alphas)),
            ));
            match rotations {
                Some(s) => &s[i] * d * s[(i + 1) % m].adjoint(),
                None => d,
            }
        })
        .collect();
    Ok(GeneralizedMatrix { alphas: alphas.to_vec(), blocks })
}

/// Recovers the surface points and unitaries `S_i` with
/// `A_i = S_i·D_i·S_{i+1}†`, phases in the gauge `θ₂ = … = θ_m = 0`.
pub fn block_diagonalize(a: &GeneralizedMatrix) -> Result<(Vec<SurfacePoint>, Vec<CMat>)> {
    let (m, n) = (a.m(), a.n());
    let alphas = &a.alphas;
    if alphas.len() != m {
        return Err(GenmatError::DimensionMismatch("alphas and blocks differ in length".into()));
    }
    let h1 = &a.blocks[0] * a.blocks[0].adjoint();
    let eig = SymmetricEigen::new(h1.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let nus: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>());

    let scale = h1.norm().max(f64::MIN_POSITIVE);
    let monodromy = a.monodromy();
    let mut s1 = CMat::zeros(n, n);
    let mut zs = vec![Complex64::new(0.0, 0.0); n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && nus[end] - nus[end - 1] <= 1e-8 * scale {
            end += 1;
        }
        let basis = vecs.columns(start, end - start).into_owned();
        if end - start == 1 {
            s1.set_column(start, &basis.column(0));
            zs[start] = (basis.adjoint() * &monodromy * &basis)[(0, 0)];
        } else {
            let restricted = basis.adjoint() * &monodromy * &basis;
            let schur = Schur::try_new(restricted, 1e-15, 10_000).ok_or(GenmatError::DegenerateSpectrum)?;
            let (q, tri) = schur.unpack();
            let off: f64 = (0..tri.nrows())
                .flat_map(|i| (i + 1..tri.ncols()).map(move |j| (i, j)))
                .map(|(i, j)| tri[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off > 1e-6 * (1.0 + tri.norm()) {
                return Err(GenmatError::DegenerateSpectrum);
            }
            let cols = basis * q;
            for k in 0..end - start {
                s1.set_column(start + k, &cols.column(k));
                zs[start + k] = tri[(k, k)];
            }
        }
        start = end;
    }

    let points: Vec<SurfacePoint> = nus
        .iter()
        .zip(&zs)
        .map(|(nu, z)| {
            let x = (nu - alphas[0]).max(-alphas.iter().cloned().fold(f64::INFINITY, f64::min));
            SurfacePoint { z: *z, x, phases: gauge_phases(*z, m) }
        })
        .collect();

    let mut rots = vec![s1];
    for i in 0..m - 1 {
        let mut next = a.blocks[i].adjoint() * &rots[i];
        for (j, p) in points.iter().enumerate() {
            let d = p.factor(i, alphas);
            if d.norm() <= 1e-14 * scale.sqrt() {
                return Err(GenmatError::SingularBlock(i + 1));
            }
            let inv = d.conj().inv();
            for r in 0..n {
                next[(r, j)] *= inv;
            }
        }
        rots.push(next);
    }
    Ok((points, rots))
}

/// `det` of the `m×m` cyclic bidiagonal matrix with diagonal `z_j^s`,
/// superdiagonal `−z_i^s` and corner `(m, 1)` entry `−z_i^m`.
pub fn vandermonde_block_det(zi: &[Complex64], zj: &[Complex64]) -> Result<Complex64> {
    let m = zi.len();
    if m == 0 || zj.len() != m {
        return Err(GenmatError::DimensionMismatch(format!("factor lists of length {m} and {}", zj.len())));
    }
    let mut mat = CMat::zeros(m, m);
    for s in 0..m {
        mat[(s, s)] += zj[s];
        mat[(s, (s + 1) % m)] -= zi[s];
    }
    Ok(mat.determinant())
}

/// `Σ ½·log Q′(xᵢ)`, the log of the eigenvalue-coordinate Jacobian factor.
pub fn jacobian_weight(xs: &[f64], q: &BlockPolynomial) -> Result<f64> {
    xs.iter()
        .map(|&x| {
            if !(x > q.x_min()) {
                return Err(GenmatError::OutOfDomain(x));
            }
            Ok(0.5 * q.prime(x).ln())
        })
        .sum()
}

/// Haar-random unitary from the QR factorization of a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..n {
            q[(row, k)] *= ph;
        }
    }
    q
}

/// `n` surface points with `x` uniform in `[x_min + 0.1, x_min + 2.1]` and
/// uniform phases.
pub fn random_points<R: Rng + ?Sized>(n: usize, alphas: &[f64], rng: &mut R) -> Vec<SurfacePoint> {
    let x_min = -alphas.iter().cloned().fold(f64::INFINITY, f64::min);
    (0..n)
        .map(|_| {
            let x = x_min + 0.1 + 2.0 * rng.random::<f64>();
            let phases = (0..alphas.len()).map(|_| std::f64::consts::TAU * rng.random::<f64>()).collect();
            SurfacePoint::from_phases(x, phases, alphas).expect("x above every −α")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    /// Leibniz expansion, independent of the LU used above.
    fn leibniz(mat: &CMat) -> Complex64 {
        fn perms(k: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in 0..k {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    perms(k, used, cur, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let n = mat.nrows();
        let mut all = Vec::new();
        perms(n, &mut vec![false; n], &mut Vec::new(), &mut all);
        all.iter()
            .map(|p| {
                let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                (0..n).map(|r| mat[(r, p[r])]).product::<Complex64>() * sign
            })
            .sum()
    }

    #[test]
    fn single_block_examples() {
        let p = SurfacePoint::new(c(1.0, 0.0), 1.0, &[0.0, 0.0]).unwrap();
        let a = build_from_eigendata(&[p], &[0.0, 0.0], None).unwrap();
        assert_eq!(a.blocks[0][(0, 0)], c(1.0, 0.0));
        assert_eq!(a.blocks[1][(0, 0)], c(1.0, 0.0));
        assert_eq!(commutator_defect(&a), 0.0);

        let alphas = [-1.0, 1.0];
        let p = SurfacePoint::from_phases(2.0, vec![0.0, 0.0], &alphas).unwrap();
        let a = build_from_eigendata(&[p], &alphas, None).unwrap();
        assert!((a.blocks[0][(0, 0)] - 1.0).norm() < 1e-15);
        assert!((a.blocks[1][(0, 0)] - 3f64.sqrt()).norm() < 1e-15);
        assert_eq!(a.lambdas(), vec![-2.0, 2.0]);
        assert!(commutator_defect(&a) < 1e-14);
    }

    #[test]
    fn invalid_point_rejected() {
        let bad = SurfacePoint { z: c(2.0, 0.0), x: 1.0, phases: vec![0.0, 0.0] };
        assert!(matches!(
            build_from_eigendata(&[bad], &[0.0, 0.0], None),
            Err(GenmatError::InvalidSurfacePoint(_))
        ));
    }

    #[test]
    fn zero_matrix_and_perturbation() {
        let a = GeneralizedMatrix { alphas: vec![0.0, 0.0], blocks: vec![CMat::zeros(2, 2), CMat::zeros(2, 2)] };
        assert_eq!(commutator_defect(&a), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let alphas = [-0.5, 0.2, 0.3];
        let pts = random_points(2, &alphas, &mut rng);
        let mut b = build_from_eigendata(&pts, &alphas, None).unwrap();
        b.blocks[1][(0, 1)] += 1e-3;
        let d = commutator_defect(&b);
        assert!(d > 1e-6 && d < 1e-1, "{d}");
    }

    #[test]
    fn monodromy_examples() {
        let alphas = [0.0, 0.0];
        let pts = vec![SurfacePoint::new(c(1.0, 0.0), 1.0, &alphas).unwrap(), SurfacePoint::new(c(0.0, 1.0), 1.0, &alphas).unwrap()];
        let a = build_from_eigendata(&pts, &alphas, None).unwrap();
        let mut spec = monodromy_spectrum(&a);
        spec.sort_by(|u, v| u.im.total_cmp(&v.im));
        assert!((spec[0] - 1.0).norm() < 1e-14 && (spec[1] - c(0.0, 1.0)).norm() < 1e-14);

        let alphas = [1.0, 4.0, 9.0];
        let p = SurfacePoint::from_phases(0.0, vec![0.0, 0.0, std::f64::consts::PI], &alphas).unwrap();
        let a = build_from_eigendata(&[p], &alphas, None).unwrap();
        assert!((monodromy_spectrum(&a)[0] - c(-6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn vandermonde_examples() {
        let zero = [c(0.0, 0.0); 3];
        let w = [c(1.0, 1.0), c(0.5, 0.0), c(2.0, -1.0)];
        let prod: Complex64 = w.iter().product();
        assert!((vandermonde_block_det(&zero, &w).unwrap() - prod).norm() < 1e-15);
        assert!(vandermonde_block_det(&w, &w).unwrap().norm() < 1e-14);
        let one = vandermonde_block_det(&[c(0.3, 0.0)], &[c(1.0, 0.2)]).unwrap();
        assert!((one - c(0.7, 0.2)).norm() < 1e-15);
    }

    #[test]
    fn vandermonde_matches_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let m = 4;
            let mut draw = || c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0);
            let zi: Vec<Complex64> = (0..m).map(|_| draw()).collect();
            let zj: Vec<Complex64> = (0..m).map(|_| draw()).collect();
            let mut mat = CMat::zeros(m, m);
            for s in 0..m {
                mat[(s, s)] = zj[s];
                mat[(s, (s + 1) % m)] = -zi[s];
            }
            let det = vandermonde_block_det(&zi, &zj).unwrap();
            assert!((det - leibniz(&mat)).norm() < 1e-12);
            let expected = zj.iter().product::<Complex64>() - zi.iter().product::<Complex64>();
            assert!((det - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn jacobian_weight_examples() {
        let q = BlockPolynomial::new(vec![0.0, 0.0]).unwrap();
        assert!((jacobian_weight(&[1.0], &q).unwrap() - 0.5 * 2f64.ln()).abs() < 1e-15);
        let q = BlockPolynomial::new(vec![-1.0, 1.0]).unwrap();
        assert!((jacobian_weight(&[2.0, 2.0], &q).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert!(matches!(jacobian_weight(&[0.5], &q), Err(GenmatError::OutOfDomain(_))));
        let q = BlockPolynomial::new(vec![0.0]).unwrap();
        assert_eq!(jacobian_weight(&[0.3, 1.7, 5.0], &q).unwrap(), 0.0);
    }

    #[test]
    fn round_trip_recovers_points_and_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let alphas = [-0.7, 0.1, 0.6];
        let pts = random_points(4, &alphas, &mut rng);
        let rots: Vec<CMat> = (0..3).map(|_| random_unitary(4, &mut rng)).collect();
        let a = build_from_eigendata(&pts, &alphas, Some(&rots)).unwrap();
        let (got, s) = block_diagonalize(&a).unwrap();
        let mut want = pts.clone();
        want.sort_by(|p, q| p.x.total_cmp(&q.x));
        for (g, w) in got.iter().zip(&want) {
            assert!((g.x - w.x).abs() < 1e-8 && (g.z - w.z).norm() < 1e-8);
        }
        let back = build_from_eigendata(&got, &alphas, Some(&s)).unwrap();
        for (b, o) in back.blocks.iter().zip(&a.blocks) {
            assert!((b - o).norm() < 1e-8);
        }
        for u in &s {
            assert!((u.adjoint() * u - CMat::identity(4, 4)).norm() < 1e-10);
        }
    }

    #[test]
    fn degenerate_x_splits_by_monodromy() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let alphas = [-0.5, 0.5];
        let pts: Vec<SurfacePoint> = (0..3)
            .map(|k| SurfacePoint::from_phases(1.0, vec![1.1 * k as f64, 0.4], &alphas).unwrap())
            .collect();
        let rots: Vec<CMat> = (0..2).map(|_| random_unitary(3, &mut rng)).collect();
        let a = build_from_eigendata(&pts, &alphas, Some(&rots)).unwrap();
        let (got, s) = block_diagonalize(&a).unwrap();
        let mut spec = monodromy_spectrum(&a);
        for p in &got {
            assert!((p.x - 1.0).abs() < 1e-8);
            let (k, _) = spec.iter().enumerate().min_by(|u, v| (u.1 - p.z).norm().total_cmp(&(v.1 - p.z).norm())).unwrap();
            assert!((spec.remove(k) - p.z).norm() < 1e-8);
        }
        let back = build_from_eigendata(&got, &alphas, Some(&s)).unwrap();
        assert!((back.blocks[1].clone() - &a.blocks[1]).norm() < 1e-8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn built_matrices_satisfy_structure(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alphas: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let pts = random_points(n, &alphas, &mut rng);
            let rots: Vec<CMat> = (0..m).map(|_| random_unitary(n, &mut rng)).collect();
            let plain = build_from_eigendata(&pts, &alphas, None).unwrap();
            let a = build_from_eigendata(&pts, &alphas, Some(&rots)).unwrap();
            let scale = 1.0 + a.frobenius_norm().powi(2);
            prop_assert!(commutator_defect(&a) < 1e-10 * scale);
            prop_assert!((commutator_defect(&plain) - commutator_defect(&a)).abs() < 1e-10 * scale);

            // gauge invariance of the monodromy spectrum
            let mut s1 = monodromy_spectrum(&a);
            for p in &pts {
                let k = s1.iter().enumerate().min_by(|u, v| (u.1 - p.z).norm().total_cmp(&(v.1 - p.z).norm())).unwrap().0;
                prop_assert!((s1.remove(k) - p.z).norm() < 1e-10 * scale);
            }

            // A_{i−1}A_{i−1}† and A_iA_i† − λ_i share a spectrum
            let lam = a.lambdas();
            for i in 0..m {
                let prev = &a.blocks[(i + m - 1) % m];
                let mut e1: Vec<f64> = (prev * prev.adjoint()).symmetric_eigenvalues().iter().cloned().collect();
                let mut e2: Vec<f64> = (&a.blocks[i] * a.blocks[i].adjoint()).symmetric_eigenvalues().iter().map(|v| v - lam[i]).collect();
                e1.sort_by(f64::total_cmp);
                e2.sort_by(f64::total_cmp);
                for (u, v) in e1.iter().zip(&e2) {
                    prop_assert!((u - v).abs() < 1e-10 * scale);
                }
            }
        }
    }
}
