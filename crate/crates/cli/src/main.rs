//! Command-line surface: quantile/spectrum tables, measure discretization,
//! minmax verification runs, and the acceptance battery.
//!
//! Exit codes: 0 success (including hypothesis-not-met gates), 2 validation
//! errors, 3 verification failure, 64 usage errors.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use spectral_minmax::linalg::gaussian_matrix;
use spectral_minmax::majorization::{domination_check, lidskii_check};
use spectral_minmax::measures::{
    cdf_of, discretize, measure_from_json, measure_to_json, quantile_of,
};
use spectral_minmax::report::{fmt_g17, VerificationReport};
use spectral_minmax::rng::{derive_seed, rng_from};
use spectral_minmax::spectra::{
    eigh, hermitian_from_json, matrix_to_json, perturb_distinct, random_hermitian,
    spectral_distribution, Hermitian,
};
use spectral_minmax::suite;
use spectral_minmax::verify::{
    verify_conditional_min, verify_courant_fischer, verify_kyfan, verify_wielandt,
};
use spectral_minmax::{tol, Hermitian64};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "spectral-minmax",
    version,
    about = "Spectral distributions, quantile functions and trace-minmax verification for Hermitian matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the quantile function of a measure as CSV rows (s, X(s))
    Quantile {
        /// Measure JSON file: {"atoms": [[loc, w], ...], "segments": [[t0, t1, d0, d1], ...]}
        measure: PathBuf,
        /// Number of grid points s = k/N, k = 0..N-1
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Print eigenvalues and the spectral atom table of a Hermitian matrix
    Spectrum {
        /// Matrix JSON file: {"dim": n, "re": [[...]], "im": [[...]]}
        matrix: PathBuf,
    },
    /// Midpoint-discretize a measure into n atoms of weight 1/n
    Discretize {
        measure: PathBuf,
        #[arg(long)]
        n: usize,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a minmax identity and report the margins
    Verify {
        theorem: Theorem,
        /// Matrix JSON input; pass twice for the pair theorems
        #[arg(long)]
        matrix: Vec<PathBuf>,
        /// Generate the input instead: --random n=<N> seed=<S>
        #[arg(long, num_args = 1..=2, value_name = "KEY=VALUE")]
        random: Option<Vec<String>>,
        /// Partial sum length (kyfan) or window length (cf)
        #[arg(long)]
        j: Option<usize>,
        /// First eigenvalue index of the window (cf), 1-based
        #[arg(long)]
        i: Option<usize>,
        /// Eigenvalue index ranges, 1-based inclusive: i0:i1,i2:i3
        #[arg(long)]
        intervals: Option<String>,
        /// Lower spectral threshold (conditional)
        #[arg(long)]
        t0: Option<f64>,
        /// Upper spectral threshold (conditional)
        #[arg(long)]
        t1: Option<f64>,
        /// Sampling trials (inner trials for cf/wielandt)
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Random outer projections/chains for cf/wielandt
        #[arg(long, default_value_t = 100)]
        outer: usize,
        /// Sampling seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Split degenerate spectra before verifying
        #[arg(long)]
        perturb: bool,
        /// With --random domination: make b - a indefinite to exercise the gate
        #[arg(long)]
        indefinite: bool,
        /// Write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a reproducible Gaussian Hermitian matrix as JSON
    RandomMatrix {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the semicircle measure as piecewise-linear JSON
    Semicircle {
        #[arg(long, default_value_t = 4096)]
        panels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance battery and print the pass/fail table
    Suite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the deterministic JSON report here (timing excluded)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Kyfan,
    Cf,
    Wielandt,
    Lidskii,
    Domination,
    Conditional,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::validation(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

/// Print to stdout, treating a closed pipe as a successful early exit.
fn emit(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(Failure::validation(format!("stdout: {e}"))),
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::validation(format!("{}: {e}", p.display()))),
        None => emit(&format!("{text}\n")),
    }
}

fn parse_random_spec(spec: &[String]) -> Result<(usize, u64), Failure> {
    let mut n = None;
    let mut seed = None;
    for kv in spec {
        match kv.split_once('=') {
            Some(("n", v)) => {
                n = Some(
                    v.parse::<usize>()
                        .map_err(|e| Failure::validation(format!("--random n: {e}")))?,
                )
            }
            Some(("seed", v)) => {
                seed = Some(
                    v.parse::<u64>()
                        .map_err(|e| Failure::validation(format!("--random seed: {e}")))?,
                )
            }
            _ => {
                return Err(Failure::validation(format!(
                    "--random expects n=<N> and seed=<S>, got {kv:?}"
                )))
            }
        }
    }
    let n = n.ok_or_else(|| Failure::validation("--random needs n=<N>"))?;
    if n == 0 {
        return Err(Failure::validation("--random n must be positive"));
    }
    Ok((n, seed.unwrap_or(0)))
}

fn parse_intervals(text: &str) -> Result<Vec<(usize, usize)>, Failure> {
    text.split(',')
        .map(|range| {
            let (lo, hi) = range
                .split_once(':')
                .ok_or_else(|| Failure::validation(format!("interval {range:?} is not i0:i1")))?;
            let lo = lo
                .trim()
                .parse::<usize>()
                .map_err(|e| Failure::validation(format!("interval bound {lo:?}: {e}")))?;
            let hi = hi
                .trim()
                .parse::<usize>()
                .map_err(|e| Failure::validation(format!("interval bound {hi:?}: {e}")))?;
            Ok((lo, hi))
        })
        .collect()
}

fn cmd_quantile(measure: &Path, grid: usize) -> Result<u8, Failure> {
    if grid == 0 {
        return Err(Failure::validation("--grid must be positive"));
    }
    let m = measure_from_json::<f64>(&read_file(measure)?)?;
    let q = quantile_of(&cdf_of(&m))?;
    let mut text = String::from("s,x\n");
    for k in 0..grid {
        let s = k as f64 / grid as f64;
        text.push_str(&format!("{},{}\n", fmt_g17(s), fmt_g17(q.eval(s))));
    }
    emit(&text)?;
    Ok(0)
}

fn cmd_spectrum(matrix: &Path) -> Result<u8, Failure> {
    let a = hermitian_from_json::<f64>(&read_file(matrix)?)?;
    let eig = eigh(&a)?;
    let mut text = String::from("index,eigenvalue\n");
    for (i, v) in eig.values.iter().enumerate() {
        text.push_str(&format!("{},{}\n", i + 1, fmt_g17(*v)));
    }
    let measure = spectral_distribution(&a)?;
    text.push_str("\nlocation,weight\n");
    for atom in measure.atoms() {
        text.push_str(&format!("{},{}\n", fmt_g17(atom.location), fmt_g17(atom.weight)));
    }
    emit(&text)?;
    Ok(0)
}

fn cmd_discretize(measure: &Path, n: usize, out: &Option<PathBuf>) -> Result<u8, Failure> {
    if n == 0 {
        return Err(Failure::validation("--n must be positive"));
    }
    let m = measure_from_json::<f64>(&read_file(measure)?)?;
    let d = discretize(&m, n)?;
    write_output(out, &measure_to_json(&d))?;
    Ok(0)
}

struct VerifyInputs {
    primary: Hermitian64,
    secondary: Option<Hermitian64>,
}

fn load_inputs(
    theorem: Theorem,
    matrix: &[PathBuf],
    random: &Option<Vec<String>>,
    indefinite: bool,
    perturb: bool,
) -> Result<VerifyInputs, Failure> {
    let needs_pair = matches!(theorem, Theorem::Lidskii | Theorem::Domination);
    let (primary, secondary) = match (matrix.is_empty(), random) {
        (false, None) => {
            let a = hermitian_from_json::<f64>(&read_file(&matrix[0])?)?;
            let b = match matrix.get(1) {
                Some(p) => Some(hermitian_from_json::<f64>(&read_file(p)?)?),
                None => None,
            };
            if needs_pair && b.is_none() {
                return Err(Failure::validation(
                    "this theorem compares two matrices; pass --matrix twice or use --random",
                ));
            }
            (a, b)
        }
        (true, Some(spec)) => {
            let (n, gen_seed) = parse_random_spec(spec)?;
            let a = random_hermitian::<f64>(n, derive_seed(gen_seed, 0));
            let b = if needs_pair {
                Some(match theorem {
                    Theorem::Lidskii => random_hermitian::<f64>(n, derive_seed(gen_seed, 1)),
                    Theorem::Domination => {
                        let mut rng = rng_from(derive_seed(gen_seed, 2));
                        let c = gaussian_matrix::<f64, _>(&mut rng, n, 1);
                        let mut bump = c.mul(&c.adjoint());
                        if indefinite {
                            let d = gaussian_matrix::<f64, _>(&mut rng, n, 1);
                            bump = bump.sub(&d.mul(&d.adjoint()));
                        }
                        Hermitian::new(a.matrix().add(&bump).hermitize())?
                    }
                    _ => unreachable!(),
                })
            } else {
                None
            };
            (a, b)
        }
        (true, None) => {
            return Err(Failure::validation(
                "provide an input: --matrix <file> or --random n=<N> seed=<S>",
            ))
        }
        (false, Some(_)) => {
            return Err(Failure::validation("--matrix and --random are mutually exclusive"))
        }
    };
    let primary = if perturb { perturb_distinct(&primary, tol::PERTURB_EPS)? } else { primary };
    let secondary = match (secondary, perturb) {
        (Some(b), true) => Some(perturb_distinct(&b, tol::PERTURB_EPS)?),
        (b, _) => b,
    };
    Ok(VerifyInputs { primary, secondary })
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    theorem: Theorem,
    inputs: VerifyInputs,
    j: Option<usize>,
    i: Option<usize>,
    intervals: Option<String>,
    t0: Option<f64>,
    t1: Option<f64>,
    trials: usize,
    outer: usize,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<u8, Failure> {
    let a = &inputs.primary;
    let report: VerificationReport = match theorem {
        Theorem::Kyfan => {
            let j = j.ok_or_else(|| Failure::validation("kyfan needs --j"))?;
            verify_kyfan(a, j, trials, seed)?
        }
        Theorem::Cf => {
            let i = i.ok_or_else(|| Failure::validation("cf needs --i"))?;
            let j = j.ok_or_else(|| Failure::validation("cf needs --j"))?;
            verify_courant_fischer(a, i, j, outer, trials, seed)?
        }
        Theorem::Wielandt => {
            let text =
                intervals.ok_or_else(|| Failure::validation("wielandt needs --intervals"))?;
            let ranges = parse_intervals(&text)?;
            verify_wielandt(a, &ranges, outer, trials, seed)?
        }
        Theorem::Conditional => {
            let (lo, hi) = match (t0, t1, &intervals) {
                (Some(lo), Some(hi), _) => (lo, hi),
                (None, None, Some(text)) => {
                    let ranges = parse_intervals(text)?;
                    if ranges.len() != 1 {
                        return Err(Failure::validation(
                            "conditional takes exactly one index range",
                        ));
                    }
                    let eig = eigh(a)?;
                    let (lo_idx, hi_idx) = ranges[0];
                    if lo_idx < 1 || hi_idx < lo_idx || hi_idx > a.dim() {
                        return Err(Failure::validation("index range out of bounds"));
                    }
                    let lo = eig.values[lo_idx - 1];
                    let hi =
                        if hi_idx < a.dim() { eig.values[hi_idx] } else { f64::INFINITY };
                    (lo, hi)
                }
                _ => {
                    return Err(Failure::validation(
                        "conditional needs --t0 and --t1 (or one --intervals range)",
                    ))
                }
            };
            verify_conditional_min(a, lo, hi, trials, seed)?
        }
        Theorem::Lidskii => {
            let b = inputs.secondary.as_ref().expect("pair loaded");
            lidskii_check(a, b, seed)?
        }
        Theorem::Domination => {
            let b = inputs.secondary.as_ref().expect("pair loaded");
            domination_check(a, b, seed)?
        }
    };

    emit(&format!("{}\n{}\n", VerificationReport::csv_header(), report.csv_line()))?;
    if let Some(path) = out {
        std::fs::write(path, report.to_json())
            .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    }
    Ok(if report.pass { 0 } else { 3 })
}

fn cmd_random_matrix(n: usize, seed: u64, out: &Option<PathBuf>) -> Result<u8, Failure> {
    if n == 0 {
        return Err(Failure::validation("--n must be positive"));
    }
    let a = random_hermitian::<f64>(n, seed);
    write_output(out, &matrix_to_json(a.matrix()))?;
    Ok(0)
}

fn cmd_semicircle(panels: usize, out: &Option<PathBuf>) -> Result<u8, Failure> {
    if panels < 2 {
        return Err(Failure::validation("--panels must be at least 2"));
    }
    let m = spectral_minmax::CompactMeasure64::semicircle(panels)?;
    write_output(out, &measure_to_json(&m))?;
    Ok(0)
}

fn cmd_suite(seed: u64, out: &Option<PathBuf>) -> Result<u8, Failure> {
    let report = suite::run_full(seed);
    emit(&report.table())?;
    if let Some(path) = out {
        std::fs::write(path, report.canonical_json())
            .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    }
    Ok(if report.pass { 0 } else { 3 })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Quantile { measure, grid } => cmd_quantile(&measure, grid),
        Command::Spectrum { matrix } => cmd_spectrum(&matrix),
        Command::Discretize { measure, n, out } => cmd_discretize(&measure, n, &out),
        Command::Verify {
            theorem,
            matrix,
            random,
            j,
            i,
            intervals,
            t0,
            t1,
            trials,
            outer,
            seed,
            perturb,
            indefinite,
            out,
        } => {
            let inputs = load_inputs(theorem, &matrix, &random, indefinite, perturb)?;
            cmd_verify(theorem, inputs, j, i, intervals, t0, t1, trials, outer, seed, &out)
        }
        Command::RandomMatrix { n, seed, out } => cmd_random_matrix(n, seed, &out),
        Command::Semicircle { panels, out } => cmd_semicircle(panels, &out),
        Command::Suite { seed, out } => cmd_suite(seed, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
