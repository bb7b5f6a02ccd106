//! The `nmat` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{self, BoundaryError, BoundarySolution, ConformalMap, ThetaCoefficients};
use crate::config::{PotentialConfig, RadialConfig, RunConfig};
use crate::gas::{self, EigenConfiguration, GridSpec, Snapshot};
use crate::genmat;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "nmat", version, about = "Eigenvalue droplets of normal and generalized normal matrix models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the droplet boundary and write boundary JSON.
    Boundary(BoundaryArgs),
    /// Run Metropolis chains and write JSONL snapshots.
    Sample(SampleArgs),
    /// Histogram snapshots into an `x,y,density` CSV.
    Density(DensityArgs),
    /// Check a boundary against the variational, contour and mass oracles.
    Verify(VerifyArgs),
    /// Compare sampled eigenvalues with a predicted boundary.
    Compare(CompareArgs),
    /// Explicit droplet for a power profile with a linear term.
    ClosedForm(ClosedFormArgs),
    /// Build a generalized normal matrix from random eigendata and print diagnostics.
    GenmatDemo(GenmatArgs),
}

#[derive(Debug, Args)]
struct BoundaryArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    chains: Option<u64>,
    #[arg(long)]
    sweeps: Option<u64>,
    /// Directory for per-chain checkpoints.
    #[arg(long)]
    checkpoint_dir: Option<PathBuf>,
    /// Continue each chain from its checkpoint when one exists.
    #[arg(long)]
    resume: bool,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long)]
    snapshots: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cells per side.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    center_x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    center_y: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    boundary: PathBuf,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance on the interior deviation and exterior margin.
    #[arg(long, default_value_t = 5e-3)]
    tol: f64,
    #[arg(long)]
    snapshots: Option<PathBuf>,
    #[arg(long, default_value_t = 0.15)]
    eps: f64,
    /// Largest admissible fraction of samples outside the dilated droplet.
    #[arg(long, default_value_t = 0.02)]
    max_outside: f64,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    boundary: PathBuf,
    #[arg(long)]
    snapshots: PathBuf,
    #[arg(long, default_value_t = 0.15)]
    eps: f64,
    /// Largest admissible outside fraction.
    #[arg(long, default_value_t = 0.02)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClosedFormArgs {
    #[arg(long = "C")]
    c: f64,
    #[arg(long)]
    b: f64,
    #[arg(long = "K", allow_hyphen_values = true)]
    k: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenmatArgs {
    /// Block parameters; taken from a generalized config when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alphas: Option<Vec<f64>>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(n) = thread_cap() {
        // an already-initialized global pool keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = match cli.command {
        Command::Boundary(a) => cmd_boundary(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Density(a) => cmd_density(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Compare(a) => cmd_compare(a),
        Command::ClosedForm(a) => cmd_closed_form(a),
        Command::GenmatDemo(a) => cmd_genmat(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var("NMAT_THREADS").ok()?.parse().ok().filter(|&n| n > 0)
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(path, &text)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualsFile {
    pub mismatch: f64,
    pub mass: f64,
    pub mass_imag: f64,
    pub self_consistency: f64,
}

/// Contents of `boundary.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryFile {
    pub a: f64,
    pub conformal_radius: f64,
    pub grid_size: usize,
    pub newton_iterations: usize,
    /// `[j, re, im]` of θ's coefficient of `ζ^j`, `j ≥ 0`.
    pub theta: Vec<(usize, f64, f64)>,
    /// `[k, re, im]` of `c_k` in `f(ζ) = a·ζ⁻¹·exp(Σ c_k ζ^k)`, `a = e^{−c₀/2}`.
    pub fourier: Vec<(usize, f64, f64)>,
    pub curve: Vec<[f64; 2]>,
    pub residuals: ResidualsFile,
    pub potential: PotentialConfig,
    pub config_fingerprint: String,
}

impl BoundaryFile {
    pub fn new(sol: &BoundarySolution, potential: &PotentialConfig, fingerprint: &str) -> Self {
        let r = sol.residuals;
        Self {
            a: sol.a(),
            conformal_radius: sol.conformal_radius(),
            grid_size: sol.map.grid_size,
            newton_iterations: sol.newton_iterations,
            theta: sol.theta.nonnegative().iter().enumerate().map(|(j, v)| (j, v.re, v.im)).collect(),
            fourier: sol.map.c.iter().enumerate().map(|(k, v)| (k, v.re, v.im)).collect(),
            curve: sol.curve.iter().map(|&z| pair(z)).collect(),
            residuals: ResidualsFile {
                mismatch: r.mismatch,
                mass: r.mass,
                mass_imag: r.mass_imag,
                self_consistency: r.self_consistency,
            },
            potential: potential.clone(),
            config_fingerprint: fingerprint.to_string(),
        }
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Rebuilds the solution from the stored coefficients.
    pub fn solution(&self) -> anyhow::Result<BoundarySolution> {
        let pot = self.potential.build()?;
        let theta = ThetaCoefficients::new(self.theta.iter().map(|&(_, re, im)| Complex64::new(re, im)).collect())?;
        let map = ConformalMap::from_coefficients(
            self.fourier.iter().map(|&(_, re, im)| Complex64::new(re, im)).collect(),
            self.grid_size,
        )?;
        Ok(BoundarySolution::from_parts(theta, map, &pot)?)
    }
}

/// One JSONL line of `nmat sample`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub sweep: u64,
    pub z: Vec<[f64; 2]>,
    pub chain: u64,
    pub fingerprint: String,
}

pub fn read_snapshots(path: &Path) -> anyhow::Result<Vec<SnapshotRecord>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("{}:{}", path.display(), i + 1)))
        .collect()
}

fn to_snapshots(records: &[SnapshotRecord]) -> Vec<Snapshot> {
    records.iter().map(|r| Snapshot { sweep: r.sweep, z: r.z.iter().map(|&p| unpair(p)).collect() }).collect()
}

/// Flat SVG of a curve and an optional point cloud, `y` up.
pub fn render_svg(curve: &[Complex64], points: &[Complex64], fingerprint: Option<&str>) -> String {
    let extent = curve
        .iter()
        .chain(points)
        .map(|z| z.re.abs().max(z.im.abs()))
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let half = (extent * 1.1).ceil().max(1.0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="600">"#,
        -half,
        -half,
        2.0 * half,
        2.0 * half
    );
    if let Some(fp) = fingerprint {
        let _ = writeln!(s, "<!-- config_fingerprint {fp} -->");
    }
    let _ = writeln!(s, r#"<g transform="scale(1,-1)">"#);
    let dot = 0.004 * half;
    for p in points {
        let _ = writeln!(s, r##"<circle cx="{:.6}" cy="{:.6}" r="{dot:.6}" fill="#1f77b4" fill-opacity="0.3"/>"##, p.re, p.im);
    }
    if !curve.is_empty() {
        let pts: Vec<String> = curve.iter().chain(curve.first()).map(|z| format!("{:.6},{:.6}", z.re, z.im)).collect();
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="{:.6}"/>"##,
            pts.join(" "),
            0.006 * half
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn cmd_boundary(a: BoundaryArgs) -> anyhow::Result<i32> {
    let cfg = RunConfig::load(&a.config)?;
    let pot = cfg.potential.build()?;
    let sol = match boundary::solve(&pot, &cfg.solver.options()) {
        Ok(s) => s,
        Err(e) if e.is_breakdown() => {
            eprintln!("boundary breakdown: {e}");
            return Ok(EXIT_SOLVER);
        }
        Err(e @ BoundaryError::NoConvergence { .. }) => {
            eprintln!("no convergence: {e}");
            return Ok(EXIT_SOLVER);
        }
        Err(e) => return Err(e.into()),
    };
    let out = a.out.or(cfg.output.boundary.as_ref().map(PathBuf::from)).unwrap_or_else(|| "boundary.json".into());
    write_json(&out, &BoundaryFile::new(&sol, &cfg.potential, &cfg.fingerprint()))?;
    if let Some(svg) = a.svg {
        write_file(&svg, &render_svg(&sol.curve, &[], Some(&cfg.fingerprint())))?;
    }
    eprintln!(
        "a = {}, conformal radius = {}, mismatch = {:e}, |mass − 1| = {:e}",
        sol.a(),
        sol.conformal_radius(),
        sol.residuals.mismatch,
        sol.residuals.mass
    );
    Ok(EXIT_OK)
}

fn cmd_sample(a: SampleArgs) -> anyhow::Result<i32> {
    let mut cfg = RunConfig::load(&a.config)?;
    if let Some(s) = a.seed {
        cfg.sampler.seed = s;
    }
    if let Some(c) = a.chains {
        cfg.sampler.chains = c;
    }
    if let Some(s) = a.sweeps {
        cfg.sampler.sweeps = s;
    }
    cfg.validate()?;
    let pot = cfg.potential.build()?;
    let spec = cfg.sampler.chain_spec();
    let fingerprint = cfg.fingerprint();
    let ckpt_dir = a.checkpoint_dir.or(cfg.output.checkpoint_dir.as_ref().map(PathBuf::from));
    if let Some(dir) = &ckpt_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let every = cfg.sampler.checkpoint_every;

    let job = |chain: u64| -> anyhow::Result<(u64, Vec<Snapshot>, f64)> {
        let path = ckpt_dir.as_ref().map(|d| d.join(format!("chain-{chain}.ckpt")));
        let state = match &path {
            Some(p) if a.resume && p.exists() => {
                let bytes = std::fs::read(p).with_context(|| format!("reading {}", p.display()))?;
                EigenConfiguration::from_checkpoint(&bytes, &pot, &spec, chain)?
            }
            _ => EigenConfiguration::new(&pot, &spec, chain)?,
        };
        let mut snaps = Vec::new();
        let fin = gas::run_chain(state, &spec, path.as_deref().map(|p| (p, every)), |s| {
            snaps.push(s);
            Ok(())
        })?;
        Ok((chain, snaps, fin.acceptance()))
    };
    let results: Vec<_> = (0..cfg.sampler.chains).into_par_iter().map(job).collect::<anyhow::Result<_>>()?;

    let mut records: Vec<(u64, u64, &Snapshot)> =
        results.iter().flat_map(|(c, snaps, _)| snaps.iter().map(move |s| (s.sweep, *c, s))).collect();
    records.sort_by_key(|&(sweep, chain, _)| (sweep, chain));
    let mut text = String::new();
    for (sweep, chain, s) in records {
        let rec = SnapshotRecord { sweep, z: s.z.iter().map(|&z| pair(z)).collect(), chain, fingerprint: fingerprint.clone() };
        text.push_str(&serde_json::to_string(&rec)?);
        text.push('\n');
    }
    let out = a.out.or(cfg.output.snapshots.as_ref().map(PathBuf::from)).unwrap_or_else(|| "snapshots.jsonl".into());
    write_file(&out, &text)?;
    for (chain, snaps, acc) in &results {
        eprintln!("chain {chain}: {} snapshots, acceptance {acc:.3}", snaps.len());
    }
    Ok(EXIT_OK)
}

fn cmd_density(a: DensityArgs) -> anyhow::Result<i32> {
    let snaps = to_snapshots(&read_snapshots(&a.snapshots)?);
    let pts: Vec<Complex64> = snaps.iter().flat_map(|s| s.z.iter().copied()).collect();
    if pts.is_empty() {
        bail!("no samples in {}", a.snapshots.display());
    }
    let mean = pts.iter().sum::<Complex64>() / pts.len() as f64;
    let center = Complex64::new(a.center_x.unwrap_or(mean.re), a.center_y.unwrap_or(mean.im));
    let half_width = a.half_width.unwrap_or_else(|| 1.05 * pts.iter().map(|z| (z - center).norm()).fold(0.0, f64::max));
    let grid = gas::estimate_density(&snaps, GridSpec { center, half_width, n: a.grid })?;
    match a.out {
        Some(p) => write_file(&p, &grid.to_csv())?,
        None => std::io::stdout().write_all(grid.to_csv().as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<i32> {
    let cfg = RunConfig::load(&a.config)?;
    let file = BoundaryFile::load(&a.boundary)?;
    let fp = cfg.fingerprint();
    if file.config_fingerprint != fp {
        bail!(
            "{} was produced by config {} but {} has fingerprint {fp}",
            a.boundary.display(),
            file.config_fingerprint,
            a.config.display()
        );
    }
    let pot = cfg.potential.build()?;
    let sol = file.solution()?;
    let mut report = verify::check_equilibrium(&sol, &pot, a.tol, a.tol);
    if let Some(path) = &a.snapshots {
        let snaps = to_snapshots(&read_snapshots(path)?);
        let cmp = verify::support_compare(&sol, &snaps, a.eps)?;
        report.record_samples(cmp.outside_fraction, a.max_outside);
    }
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match a.out {
        Some(p) => write_file(&p, &text)?,
        None => print!("{text}"),
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY })
}

#[derive(Debug, Serialize)]
struct CompareReport {
    eps: f64,
    outside_fraction: f64,
    directed_distance: f64,
    tol: f64,
    pass: bool,
    samples: usize,
    boundary_fingerprint: String,
    snapshots_fingerprint: Option<String>,
}

fn cmd_compare(a: CompareArgs) -> anyhow::Result<i32> {
    let file = BoundaryFile::load(&a.boundary)?;
    let sol = file.solution()?;
    let records = read_snapshots(&a.snapshots)?;
    let snaps = to_snapshots(&records);
    let cmp = verify::support_compare(&sol, &snaps, a.eps)?;
    let report = CompareReport {
        eps: a.eps,
        outside_fraction: cmp.outside_fraction,
        directed_distance: cmp.directed_distance,
        tol: a.tol,
        pass: cmp.outside_fraction <= a.tol,
        samples: snaps.iter().map(|s| s.z.len()).sum(),
        boundary_fingerprint: file.config_fingerprint.clone(),
        snapshots_fingerprint: records.first().map(|r| r.fingerprint.clone()),
    };
    let text = serde_json::to_string_pretty(&report)? + "\n";
    match a.out {
        Some(p) => write_file(&p, &text)?,
        None => print!("{text}"),
    }
    if let Some(svg) = a.svg {
        let pts: Vec<Complex64> = snaps.iter().flat_map(|s| s.z.iter().copied()).collect();
        write_file(&svg, &render_svg(&sol.curve, &pts, Some(&file.config_fingerprint)))?;
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY })
}

#[derive(Debug, Serialize)]
struct ClosedFormFile {
    #[serde(rename = "C")]
    c: f64,
    b: f64,
    #[serde(rename = "K")]
    k: f64,
    a: f64,
    beta: f64,
    curve: Vec<[f64; 2]>,
}

fn cmd_closed_form(a: ClosedFormArgs) -> anyhow::Result<i32> {
    let cf = match boundary::closed_form_power(a.c, a.b, a.k) {
        Ok(cf) => cf,
        Err(e) if e.is_breakdown() => {
            eprintln!("boundary breakdown: {e}");
            return Ok(EXIT_SOLVER);
        }
        Err(e) => return Err(e.into()),
    };
    println!("{}", serde_json::json!({ "a": cf.a, "beta": cf.beta }));
    let curve = boundary::boundary_curve(&cf.map, 1024)?;
    if let Some(out) = a.out {
        let file = ClosedFormFile { c: a.c, b: a.b, k: a.k, a: cf.a, beta: cf.beta, curve: curve.iter().map(|&z| pair(z)).collect() };
        write_json(&out, &file)?;
    }
    if let Some(svg) = a.svg {
        write_file(&svg, &render_svg(&curve, &[], None))?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct GenmatReport {
    alphas: Vec<f64>,
    n: usize,
    lambdas: Vec<f64>,
    commutator_defect: f64,
    /// Largest distance from a monodromy eigenvalue to the nearest input `z_j`.
    spectrum_err: f64,
    /// Largest `|z|` or `x` error after block diagonalization.
    round_trip_err: f64,
}

fn cmd_genmat(a: GenmatArgs) -> anyhow::Result<i32> {
    let alphas = match (a.alphas, a.config) {
        (Some(al), _) => al,
        (None, Some(path)) => match RunConfig::load(&path)?.potential.radial {
            RadialConfig::Generalized { alphas, .. } => alphas,
            RadialConfig::Power { .. } => bail!("{} has no generalized profile; pass --alphas", path.display()),
        },
        (None, None) => vec![0.0, 0.0],
    };
    if alphas.is_empty() || a.n == 0 {
        bail!("need at least one alpha and one eigenvalue");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let points = genmat::random_points(a.n, &alphas, &mut rng);
    let rots: Vec<_> = (0..alphas.len()).map(|_| genmat::random_unitary(a.n, &mut rng)).collect();
    let mat = genmat::build_from_eigendata(&points, &alphas, Some(&rots))?;
    let nearest = |w: Complex64, set: &mut dyn Iterator<Item = Complex64>| set.map(|z| (z - w).norm()).fold(f64::INFINITY, f64::min);
    let spectrum_err = genmat::monodromy_spectrum(&mat)
        .into_iter()
        .map(|w| nearest(w, &mut points.iter().map(|p| p.z)))
        .fold(0.0, f64::max);
    let (back, _) = genmat::block_diagonalize(&mat)?;
    let round_trip_err = points
        .iter()
        .map(|p| {
            back.iter()
                .map(|q| (q.z - p.z).norm().max((q.x - p.x).abs()))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    let report = GenmatReport {
        n: a.n,
        lambdas: mat.lambdas(),
        commutator_defect: genmat::commutator_defect(&mat),
        spectrum_err,
        round_trip_err,
        alphas,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(EXIT_OK)
}
