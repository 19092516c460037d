//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 I/O or internal failure, 2 usage or invalid input,
//! 3 violated precondition, 4 tolerance exceeded, 5 size limit.

use crate::circuit::{square_to_triangle, triangle_to_square, Circuit, Frame, OpLog, SquareCircuit, TriangleCircuit};
use crate::compress::{compress_time_dependent, compress_time_independent, CompressionReport};
use crate::error::{Error, Result};
use crate::gates::{ChainGate, PauliAxis, TfxyGate, TwoAxisGate};
use crate::io::{CircuitFile, Metadata};
use crate::models::{full_trotter_circuit, random_schedule, HamiltonianSchedule, ModelKind};
use crate::oracle::{circuit_unitary, frobenius_distance, phase_aligned_distance};
use crate::qasm;
use crate::su2::{Angle, Su2};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const THREADS_ENV: &str = "SPINFUSE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "spinfuse", version, about = "Trotter circuit synthesis and compression for free-fermionic spin chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the full Trotter circuit of a schedule.
    Generate(GenerateArgs),
    /// Compress a circuit file to a square of minimal depth.
    Compress(CompressArgs),
    /// Print the Frobenius distance between two circuits.
    Verify(VerifyArgs),
    /// Time structural operations over a sweep of chain lengths.
    Bench(BenchArgs),
    /// Render a circuit file as OpenQASM 2.0.
    ExportQasm(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Ising,
    Kitaev,
    Xy,
    Tfim,
    Tfxy,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub model: Option<ModelName>,
    #[arg(long)]
    pub spins: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Axis letters: ising `z`, kitaev `yxzx`, xy `xy`, tfim coupling+field `xz`, tfxy frame `xy|xz|yz`.
    #[arg(long)]
    pub axes: Option<String>,
    /// Schedule JSON to use instead of random parameters.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write the schedule JSON here.
    #[arg(long)]
    pub schedule_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Dependent,
    Independent,
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Algorithm::Dependent)]
    pub algorithm: Algorithm,
    /// Self-merge rounds for the independent algorithm.
    #[arg(long, default_value_t = 0)]
    pub tau: u32,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Write the report JSON here instead of stderr.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Quotient out a global phase.
    #[arg(long)]
    pub phase_align: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchOp {
    #[value(name = "square2triangle")]
    #[serde(rename = "square2triangle")]
    SquareToTriangle,
    MergeStep,
    #[value(name = "triangle2square")]
    #[serde(rename = "triangle2square")]
    TriangleToSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchModel {
    Xy,
    Tfxy,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub op: BenchOp,
    #[arg(long, value_enum, default_value_t = BenchModel::Xy)]
    pub model: BenchModel,
    #[arg(long, value_delimiter = ',', required = true)]
    pub spins: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let res = match cli.command {
        Command::Generate(a) => generate(&a),
        Command::Compress(a) => compress(&a),
        Command::Verify(a) => verify(&a),
        Command::Bench(a) => bench_cmd(&a),
        Command::ExportQasm(a) => export_qasm(&a),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precondition(_) | Error::WrongModel(_) => 3,
        Error::SizeLimit(_) => 5,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_axes(s: &str) -> Result<Vec<PauliAxis>> {
    s.chars().map(PauliAxis::from_char).collect()
}

/// Builds a model from CLI flags.
pub fn model_from_flags(name: ModelName, n_spins: usize, axes: Option<&str>) -> Result<ModelKind> {
    let pair = |default: [PauliAxis; 2]| -> Result<[PauliAxis; 2]> {
        match axes {
            None => Ok(default),
            Some(s) => match parse_axes(s)?[..] {
                [a, b] => Ok([a, b]),
                _ => Err(Error::InvalidArgument(format!("--axes {s:?} needs two letters"))),
            },
        }
    };
    let m = match name {
        ModelName::Ising => match axes.map(parse_axes).transpose()?.as_deref() {
            None => ModelKind::Ising { axis: PauliAxis::Z },
            Some([a]) => ModelKind::Ising { axis: *a },
            Some(_) => return Err(Error::InvalidArgument("--axes for ising takes one letter".into())),
        },
        ModelName::Kitaev => match axes {
            None => ModelKind::default_kitaev(n_spins),
            Some(s) => ModelKind::Kitaev { axes: parse_axes(s)? },
        },
        ModelName::Xy => {
            let [a, b] = pair([PauliAxis::X, PauliAxis::Y])?;
            ModelKind::Xy { a, b }
        }
        ModelName::Tfim => {
            let [coupling, field] = pair([PauliAxis::X, PauliAxis::Z])?;
            ModelKind::Tfim { coupling, field }
        }
        ModelName::Tfxy => {
            let frame = match axes.map(str::to_ascii_lowercase).as_deref() {
                None | Some("xy") => Frame::Xy,
                Some("xz") => Frame::Xz,
                Some("yz") => Frame::Yz,
                Some(s) => return Err(Error::InvalidArgument(format!("--axes {s:?} for tfxy must be xy, xz or yz"))),
            };
            ModelKind::Tfxy { frame }
        }
    };
    m.validate(n_spins)?;
    Ok(m)
}

fn generate(a: &GenerateArgs) -> Result<i32> {
    let (sched, seed) = match &a.params {
        Some(p) => {
            let s: HamiltonianSchedule = serde_json::from_str(&std::fs::read_to_string(p)?)?;
            s.validate()?;
            (s, None)
        }
        None => {
            let name = a.model.ok_or_else(|| Error::InvalidArgument("--model is required without --params".into()))?;
            let n = a.spins.ok_or_else(|| Error::InvalidArgument("--spins is required without --params".into()))?;
            let model = model_from_flags(name, n, a.axes.as_deref())?;
            (random_schedule(model, n, a.steps, a.dt, a.seed)?, Some(a.seed))
        }
    };
    if let Some(p) = &a.schedule_out {
        std::fs::write(p, serde_json::to_string_pretty(&sched)? + "\n")?;
    }
    let layers = full_trotter_circuit(&sched)?;
    let c = Circuit::from_layers(sched.n_spins, sched.model.frame(), &layers)?;
    let meta = Metadata { model: Some(sched.model.clone()), seed, n_t: Some(sched.n_steps), dt: Some(sched.dt), compressed: None };
    emit(a.out.as_deref(), &CircuitFile::from_circuit(&c, meta).to_json()?)?;
    Ok(0)
}

fn compress(a: &CompressArgs) -> Result<i32> {
    let file = CircuitFile::read(&a.input)?;
    let c = file.to_circuit()?;
    let layers = c.layers();
    let (sq, report): (_, CompressionReport) = match a.algorithm {
        Algorithm::Dependent => compress_time_dependent(&layers, c.n_spins)?,
        Algorithm::Independent => compress_time_independent(&layers, a.tau, c.n_spins)?,
    };
    let out = sq.to_circuit(c.frame);
    let n_t = match a.algorithm {
        Algorithm::Dependent => file.metadata.n_t,
        Algorithm::Independent => Some(report.steps * file.metadata.n_t.unwrap_or(1)),
    };
    let meta = Metadata { n_t, compressed: Some(true), ..file.metadata.clone() };
    emit(a.out.as_deref(), &CircuitFile::from_circuit(&out, meta).to_json()?)?;
    let rep = serde_json::to_string_pretty(&report)? + "\n";
    match &a.report {
        Some(p) => std::fs::write(p, rep)?,
        None => eprint!("{rep}"),
    }
    Ok(0)
}

fn verify(a: &VerifyArgs) -> Result<i32> {
    let ca = CircuitFile::read(&a.a)?.to_circuit()?;
    let cb = CircuitFile::read(&a.b)?.to_circuit()?;
    if ca.n_spins != cb.n_spins {
        return Err(Error::InvalidArgument(format!("circuits act on {} and {} spins", ca.n_spins, cb.n_spins)));
    }
    let (ua, ub) = (circuit_unitary(&ca)?, circuit_unitary(&cb)?);
    let d = if a.phase_align { phase_aligned_distance(&ua, &ub)? } else { frobenius_distance(&ua, &ub)? };
    println!("{d:.6e}");
    if d <= a.tol {
        Ok(0)
    } else {
        eprintln!("distance {d:.3e} exceeds tolerance {:.3e}", a.tol);
        Ok(4)
    }
}

fn export_qasm(a: &ExportArgs) -> Result<i32> {
    let c = CircuitFile::read(&a.input)?.to_circuit()?;
    emit(a.output.as_deref(), &qasm::export(&c)?)?;
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub op: BenchOp,
    pub model: BenchModel,
    pub n_spins: usize,
    pub reps: usize,
    pub median_s: f64,
    pub turnovers: u64,
}

impl BenchOp {
    pub fn name(self) -> &'static str {
        match self {
            BenchOp::SquareToTriangle => "square2triangle",
            BenchOp::MergeStep => "merge-step",
            BenchOp::TriangleToSquare => "triangle2square",
        }
    }
}

fn bench_angle(rng: &mut ChaCha8Rng) -> Angle {
    Angle::from_radians(rng.sample::<f64, _>(StandardNormal)).expect("finite")
}

fn bench_gate<G: BenchGate>(rng: &mut ChaCha8Rng, site: usize) -> G {
    G::random(rng, site)
}

trait BenchGate: ChainGate {
    fn random(rng: &mut ChaCha8Rng, site: usize) -> Self;
}

impl BenchGate for TwoAxisGate {
    fn random(rng: &mut ChaCha8Rng, site: usize) -> Self {
        TwoAxisGate { axis_a: PauliAxis::X, axis_b: PauliAxis::Y, angle_a: bench_angle(rng), angle_b: bench_angle(rng), site }
    }
}

impl BenchGate for TfxyGate {
    fn random(rng: &mut ChaCha8Rng, site: usize) -> Self {
        let mut z = || C::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        TfxyGate::from_blocks(Su2::from_column(z(), z()), Su2::from_column(z(), z()), site)
    }
}

fn bench_cell<G: BenchGate>(op: BenchOp, n: usize, seed: u64) -> Result<(f64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let layer = |rng: &mut ChaCha8Rng, parity: usize| -> Vec<G> {
        (if parity == 1 { 1 } else { 2 }..n).step_by(2).map(|b| bench_gate(rng, b)).collect()
    };
    let triangle = |rng: &mut ChaCha8Rng| -> Result<TriangleCircuit<G>> {
        let m = n - 1;
        TriangleCircuit::new(n, (1..=m).map(|i| (m - i + 1..=m).map(|b| bench_gate(&mut *rng, b)).collect()).collect())
    };
    let mut log = OpLog::default();
    let t = match op {
        BenchOp::SquareToTriangle => {
            let sq = SquareCircuit::new(n, (1..=n).map(|l| layer(&mut rng, l % 2)).collect())?;
            let t = Instant::now();
            std::hint::black_box(square_to_triangle(&sq, &mut log)?);
            t.elapsed()
        }
        BenchOp::TriangleToSquare => {
            let tri = triangle(&mut rng)?;
            let t = Instant::now();
            std::hint::black_box(triangle_to_square(&tri, &mut log)?);
            t.elapsed()
        }
        BenchOp::MergeStep => {
            let mut tri = triangle(&mut rng)?;
            let (odd, even) = (layer(&mut rng, 1), layer(&mut rng, 0));
            let t = Instant::now();
            tri.merge_layer(&odd, &mut log)?;
            tri.merge_layer(&even, &mut log)?;
            std::hint::black_box(&tri);
            t.elapsed()
        }
    };
    Ok((t.as_secs_f64(), log.turnovers))
}

fn threads_from_env() -> usize {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()).filter(|&t| t > 0).unwrap_or(1)
}

/// Runs one sweep. Cells are spread over `threads` workers.
pub fn bench(op: BenchOp, model: BenchModel, spins: &[usize], reps: usize, seed: u64, threads: usize) -> Result<Vec<BenchRecord>> {
    if reps == 0 || spins.iter().any(|&n| n < 2) {
        return Err(Error::InvalidArgument("bench needs reps ≥ 1 and every N ≥ 2".into()));
    }
    if spins.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("bench spins must increase".into()));
    }
    let cells: Vec<(usize, usize)> = spins.iter().flat_map(|&n| (0..reps).map(move |r| (n, r))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let results: Vec<Result<(f64, u64)>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(n, r)| {
                let s = seed ^ ((n as u64) << 20) ^ r as u64;
                match model {
                    BenchModel::Xy => bench_cell::<TwoAxisGate>(op, n, s),
                    BenchModel::Tfxy => bench_cell::<TfxyGate>(op, n, s),
                }
            })
            .collect()
    });
    let mut records = Vec::new();
    for (i, &n) in spins.iter().enumerate() {
        let chunk = &results[i * reps..(i + 1) * reps];
        let mut times = Vec::with_capacity(reps);
        let mut turnovers = 0;
        for r in chunk {
            let (t, k) = r.as_ref().map_err(|e| Error::InvalidArgument(e.to_string()))?;
            times.push(*t);
            turnovers = *k;
        }
        times.sort_by(f64::total_cmp);
        let median = if reps % 2 == 1 { times[reps / 2] } else { 0.5 * (times[reps / 2 - 1] + times[reps / 2]) };
        records.push(BenchRecord { op, model, n_spins: n, reps, median_s: median, turnovers });
    }
    Ok(records)
}

/// Least-squares slope of `log(median_s)` against `log(n_spins)`.
pub fn loglog_slope(records: &[BenchRecord]) -> Option<f64> {
    if records.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = records.iter().map(|r| ((r.n_spins as f64).ln(), r.median_s.max(1e-12).ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

pub fn write_csv<W: Write>(w: W, records: &[BenchRecord]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        wr.serialize(r).map_err(|e| Error::Export(e.to_string()))?;
    }
    if records.is_empty() {
        wr.write_record(["op", "model", "n_spins", "reps", "median_s", "turnovers"]).map_err(|e| Error::Export(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}

fn bench_cmd(a: &BenchArgs) -> Result<i32> {
    let records = bench(a.op, a.model, &a.spins, a.reps, a.seed, threads_from_env())?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &records)?;
    emit(a.out.as_deref(), std::str::from_utf8(&buf).expect("csv is utf-8"))?;
    if let Some(s) = loglog_slope(&records) {
        eprintln!("slope {} {}: {s:.3}", a.op.name(), serde_json::to_value(a.model)?.as_str().unwrap_or(""));
    }
    Ok(0)
}
