//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 Riccati solver did not converge.

mod config;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{EngineerJob, JobConfig, PolysJob, RiccatiJob, VerifyJob};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, serde_rational, to_f64, Rational};
use crate::hierarchy::{
    build_eigenstate, build_hierarchy, global_norm, potential, spectrum_table, superpotential, wavefunction_eval,
    HierarchySpec, PotentialForm, SpectrumTable, Superpotential,
};
use crate::polyfactory::{hermite, hermite_from_laguerre, laguerre_generalized_rodrigues, laguerre_series, D2Sign, HermiteRoute};
use crate::riccati::{solve_periodic, RiccatiProblem, RiccatiSolution, RiccatiStatus};
use crate::verify::run_verification;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "periodic-susy", version, about = "Engineer potentials with prescribed periodic energy gaps")]
pub struct Cli {
    /// TOML file supplying defaults for any flag; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build potentials, spectra and eigenstates for the given gaps.
    Engineer(EngineerArgs),
    /// Tabulate Laguerre and Hermite polynomials from every construction route.
    Polys(PolysArgs),
    /// Run the exact and numerical verification suites.
    Verify(VerifyArgs),
    /// Solve the periodic Riccati chain numerically.
    Riccati(RiccatiArgs),
}

#[derive(Debug, Args, Default)]
pub struct EngineerArgs {
    /// Comma-separated gaps, e.g. "1,2" or "1/3,5/2".
    #[arg(long)]
    pub gaps: Option<String>,
    /// Number of levels per Hamiltonian.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub e0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub u0: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct PolysArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub pmax: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct VerifyArgs {
    /// Also run the per-α checks at this many evenly spaced asymmetries.
    #[arg(long)]
    pub alpha_sweep: Option<usize>,
    /// Shift Δ₁ by this amount inside the ladder operators of the intertwining check.
    #[arg(long, allow_hyphen_values = true)]
    pub perturb_gap: Option<f64>,
    #[arg(long)]
    pub pmax: Option<usize>,
    #[arg(long)]
    pub quad_tol: Option<f64>,
    #[arg(long)]
    pub fd_tol: Option<f64>,
    #[arg(long)]
    pub fd_points: Option<usize>,
    /// Write the machine-readable report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct RiccatiArgs {
    #[arg(long)]
    pub gaps: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub u0: Option<String>,
    /// pole_poly or grid.
    #[arg(long)]
    pub ansatz: Option<String>,
    /// Highest odd power in the pole_poly ansatz.
    #[arg(long)]
    pub order: Option<usize>,
    /// Nodes of the grid ansatz.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// least_squares or newton.
    #[arg(long)]
    pub solver: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses arguments, runs the command and returns the exit code. Messages
/// go to standard error, reports to files or standard output.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let job = match JobConfig::resolve(&cli) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    match execute(&job) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Convergence(_) => EXIT_NO_CONVERGENCE,
                _ => EXIT_CONFIG,
            }
        }
    }
}

pub fn execute(job: &JobConfig) -> Result<i32> {
    match job {
        JobConfig::Engineer(j) => cmd_engineer(j),
        JobConfig::Polys(j) => cmd_polys(j),
        JobConfig::Verify(j) => cmd_verify(j),
        JobConfig::Riccati(j) => cmd_riccati(j),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Config(format!("cannot write {}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
struct StateNorm {
    level: usize,
    n: usize,
    #[serde(with = "serde_rational")]
    ratio: Rational,
    #[serde(serialize_with = "output::ser_opt_rational")]
    gamma_base: Option<Rational>,
}

#[derive(Debug, Serialize)]
struct Summary {
    period: usize,
    #[serde(with = "crate::exactnum::serde_rational_vec")]
    gaps: Vec<Rational>,
    #[serde(with = "serde_rational")]
    e0: Rational,
    #[serde(with = "serde_rational")]
    u0: Rational,
    #[serde(with = "serde_rational")]
    alpha: Rational,
    superpotentials: Vec<Superpotential>,
    potentials: Vec<PotentialForm>,
    /// `N₀`; every state is `N₀ √(ratio/Γ(gamma_base))` times its quasi-polynomial.
    global_norm: f64,
    state_norms: Vec<StateNorm>,
    notices: Vec<String>,
}

#[derive(Debug, Serialize)]
struct SpectrumFile {
    levels: Vec<SpectrumTable>,
}

/// `u₀ ± 6/√c` with `c` the linear coefficient of `W₁`.
fn sample_points(spec: &HierarchySpec, w: &Superpotential) -> Vec<f64> {
    let half = 6.0 / to_f64(&w.linear_coeff).sqrt();
    let u0 = spec.u0_f64();
    (0..2001).map(|k| u0 - half + 2.0 * half * k as f64 / 2000.0).collect()
}

pub fn cmd_engineer(job: &EngineerJob) -> Result<i32> {
    let spec = &job.spec;
    std::fs::create_dir_all(&job.out).map_err(|e| io_err(&job.out, e))?;
    if spec.period() >= 3 {
        eprintln!(
            "notice: no closed form exists for period {}; solving the Riccati chain numerically (exploratory)",
            spec.period()
        );
        let rjob = RiccatiJob::defaults_for(spec.gaps().iter().map(to_f64).collect(), spec.u0_f64())?;
        let (solution, code) = solve_and_report(&rjob)?;
        write_file(&job.out.join("riccati.json"), &output::riccati_json(&rjob.problem, &solution)?)?;
        return Ok(code);
    }
    let h = build_hierarchy(spec)?;
    let mut notices = Vec::new();
    let alpha = if spec.period() == 2 { spec.alpha() } else { Rational::from_integer(0.into()) };
    if spec.period() == 2 && alpha == Rational::from_integer(0.into()) {
        notices.push("alpha = 0: equal gaps, both levels share the harmonic superpotential W = (D/2)(u - u0) with D = 2*gap".into());
    }
    for n in &notices {
        eprintln!("notice: {n}");
    }
    let us = sample_points(spec, &h.superpotentials[0]);

    let header: Vec<String> = (1..=spec.period()).map(|l| format!("V{l}")).collect();
    let pots: Vec<PotentialForm> = (1..=spec.period()).map(|l| potential(spec, l)).collect::<Result<_>>()?;
    let rows = us.iter().map(|&u| (u, pots.iter().map(|v| v.eval_f64(u)).collect::<Vec<_>>()));
    write_file(&job.out.join("potentials.csv"), &output::sample_csv(&header, rows))?;

    let tables: Vec<SpectrumTable> = (1..=spec.period()).map(|l| spectrum_table(spec, l, job.levels)).collect();
    write_file(&job.out.join("spectrum.json"), &output::to_json(&SpectrumFile { levels: tables })?)?;

    let mut states = Vec::new();
    let mut names = Vec::new();
    let mut norms = Vec::new();
    for level in 1..=spec.period() {
        for n in 0..job.levels {
            let st = build_eigenstate(spec, level, n)?;
            names.push(format!("psi_{level}_{n}"));
            norms.push(StateNorm { level, n, ratio: st.norm2.ratio.clone(), gamma_base: st.norm2.gamma_base.clone() });
            states.push(st);
        }
    }
    let mut rows = Vec::with_capacity(us.len());
    for &u in &us {
        let vals = states
            .iter()
            .map(|st| match wavefunction_eval(st, spec, u) {
                Ok(v) => Ok(v),
                // divergent center of a normalizable state
                Err(Error::SingularPoint(_)) => Ok(f64::INFINITY.copysign(to_f64(&st.poly.coeff(0)))),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((u, vals));
    }
    write_file(&job.out.join("states.csv"), &output::sample_csv(&names, rows.into_iter()))?;

    let summary = Summary {
        period: spec.period(),
        gaps: spec.gaps().to_vec(),
        e0: spec.e0().clone(),
        u0: spec.u0().clone(),
        alpha,
        superpotentials: (1..=spec.period()).map(|l| superpotential(spec, l)).collect::<Result<_>>()?,
        potentials: pots,
        global_norm: global_norm(spec),
        state_norms: norms,
        notices,
    };
    write_file(&job.out.join("summary.json"), &output::to_json(&summary)?)?;
    Ok(EXIT_OK)
}

pub fn cmd_polys(job: &PolysJob) -> Result<i32> {
    let mut text = String::from("#schema=1\nfamily,parameter,degree,route,coefficients,verdict\n");
    let g = format_rational(&job.gamma);
    for p in 0..=job.pmax {
        let series = laguerre_series(&job.gamma, p);
        let plus = laguerre_generalized_rodrigues(&job.gamma, p, D2Sign::Plus);
        let minus = laguerre_generalized_rodrigues(&job.gamma, p, D2Sign::Minus);
        let verdict = if plus == series && minus == series { "exact-equal" } else { "MISMATCH" };
        for (route, poly) in [("series", &series), ("rodrigues_plus", &plus), ("rodrigues_minus", &minus)] {
            text += &format!("laguerre,{g},{p},{route},{},{verdict}\n", output::coeff_field(poly));
        }
    }
    for n in 0..=job.pmax {
        let ladder = hermite(n, HermiteRoute::Ladder);
        let three = hermite(n, HermiteRoute::ThreeTerm);
        let from_l = hermite_from_laguerre(n);
        let verdict = if ladder == three && three == from_l { "exact-equal" } else { "MISMATCH" };
        for (route, poly) in [("ladder", &ladder), ("three_term", &three), ("from_laguerre", &from_l)] {
            text += &format!("hermite,,{n},{route},{},{verdict}\n", output::coeff_field(poly));
        }
    }
    emit(job.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(job: &VerifyJob) -> Result<i32> {
    let report = run_verification(&job.options);
    eprint!("{}", report.summary());
    if let Some(path) = &job.report {
        write_file(path, &output::to_json(&report)?)?;
    }
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn solve_and_report(job: &RiccatiJob) -> Result<(RiccatiSolution, i32)> {
    let solution = solve_periodic(&job.problem)?;
    if solution.exploratory {
        eprintln!("notice: period {} results are exploratory", job.problem.period());
    }
    eprintln!("riccati: {:?}, certified residual {:.3e}", solution.status, solution.residual_norm);
    let code = match solution.status {
        RiccatiStatus::Converged => EXIT_OK,
        _ => EXIT_NO_CONVERGENCE,
    };
    Ok((solution, code))
}

pub fn cmd_riccati(job: &RiccatiJob) -> Result<i32> {
    let (solution, code) = solve_and_report(job)?;
    emit(job.out.as_deref(), &output::riccati_json(&job.problem, &solution)?)?;
    Ok(code)
}

/// Reads back a `spectrum.json` written by `engineer`.
pub fn read_spectrum(path: &Path) -> Result<Vec<SpectrumTable>> {
    #[derive(serde::Deserialize)]
    struct File {
        levels: Vec<SpectrumTable>,
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let f: File = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(f.levels)
}

#[allow(dead_code)]
fn riccati_problem_of(job: &RiccatiJob) -> &RiccatiProblem {
    &job.problem
}
