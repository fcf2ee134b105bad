//! Merging command-line flags with an optional TOML job file.
//!
//! The file has one table per subcommand with the same keys as the long
//! flags (dashes become underscores):
//!
//! ```toml
//! [engineer]
//! gaps = ["1", "5/2"]
//! levels = 6
//! out = "run1"
//! ```
//!
//! Flags override the file. Relative paths in the file are taken relative to
//! the file's directory. Every rejected value is reported with its source:
//! either the flag name or the line in the file.

use std::fmt::Display;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use super::{Cli, Command, EngineerArgs, PolysArgs, RiccatiArgs, VerifyArgs};
use crate::error::{Error, Result};
use crate::exactnum::{int, parse_rational, Rational};
use crate::hierarchy::HierarchySpec;
use crate::riccati::{Ansatz, RiccatiProblem, SolverConfig, SolverKind};
use crate::verify::VerifyOptions;

pub const MAX_PMAX: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct EngineerJob {
    pub spec: HierarchySpec,
    pub levels: usize,
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolysJob {
    pub gamma: Rational,
    pub pmax: usize,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyJob {
    pub options: VerifyOptions,
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RiccatiJob {
    pub problem: RiccatiProblem,
    pub out: Option<PathBuf>,
}

impl RiccatiJob {
    /// Pole-plus-polynomial ansatz through order 7 with the default solver.
    pub fn defaults_for(gaps: Vec<f64>, u0: f64) -> Result<Self> {
        let problem = RiccatiProblem::new(gaps, u0, Ansatz::PolePoly { order: 7 }, SolverConfig::default())?;
        Ok(RiccatiJob { problem, out: None })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum JobConfig {
    Engineer(EngineerJob),
    Polys(PolysJob),
    Verify(VerifyJob),
    Riccati(RiccatiJob),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Float(f64),
    Str(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ListOrText {
    List(Vec<Scalar>),
    Text(String),
}

type Field<T> = Option<Spanned<T>>;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct EngineerFile {
    gaps: Field<ListOrText>,
    levels: Field<i64>,
    e0: Field<Scalar>,
    u0: Field<Scalar>,
    out: Field<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolysFile {
    gamma: Field<Scalar>,
    pmax: Field<i64>,
    out: Field<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyFile {
    alpha_sweep: Field<i64>,
    perturb_gap: Field<f64>,
    pmax: Field<i64>,
    quad_tol: Field<f64>,
    fd_tol: Field<f64>,
    fd_points: Field<i64>,
    report: Field<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RiccatiFile {
    gaps: Field<ListOrText>,
    u0: Field<Scalar>,
    ansatz: Field<String>,
    order: Field<i64>,
    points: Field<i64>,
    tol: Field<f64>,
    max_iter: Field<i64>,
    solver: Field<String>,
    out: Field<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobFile {
    #[serde(default)]
    engineer: EngineerFile,
    #[serde(default)]
    polys: PolysFile,
    #[serde(default)]
    verify: VerifyFile,
    #[serde(default)]
    riccati: RiccatiFile,
}

/// Where a value came from, for error messages.
#[derive(Clone, Debug)]
enum Origin {
    Flag(&'static str),
    Line(usize),
    Default,
}

impl Display for Origin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Origin::Flag(name) => write!(f, "--{name}"),
            Origin::Line(n) => write!(f, "config line {n}"),
            Origin::Default => write!(f, "default"),
        }
    }
}

struct Source {
    text: String,
    dir: PathBuf,
}

impl Source {
    fn line(&self, span: Range<usize>) -> usize {
        self.text[..span.start.min(self.text.len())].matches('\n').count() + 1
    }
}

fn bad(origin: &Origin, msg: impl Display) -> Error {
    Error::Config(format!("{origin}: {msg}"))
}

/// Picks the flag value if present, otherwise the file value.
fn pick<A, F>(src: Option<&Source>, flag: Option<A>, name: &'static str, file: Option<Spanned<F>>) -> Option<(Origin, Result<A, F>)> {
    if let Some(v) = flag {
        return Some((Origin::Flag(name), Ok(v)));
    }
    let spanned = file?;
    let line = src.map_or(0, |s| s.line(spanned.span()));
    Some((Origin::Line(line), Err(spanned.into_inner())))
}

fn scalar_rational(s: &Scalar) -> Result<Rational> {
    match s {
        Scalar::Int(i) => Ok(int(*i)),
        // Display never uses exponent notation, so this is the shortest
        // decimal that round-trips
        Scalar::Float(x) if x.is_finite() => parse_rational(&format!("{x}")),
        Scalar::Float(x) => Err(Error::Parse(format!("not a finite number: {x}"))),
        Scalar::Str(t) => parse_rational(t),
    }
}

fn parse_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

fn rational_list(origin: &Origin, v: Result<String, ListOrText>) -> Result<Vec<Rational>> {
    let parsed = match v {
        Ok(text) | Err(ListOrText::Text(text)) => parse_list(&text),
        Err(ListOrText::List(items)) => items.iter().map(scalar_rational).collect(),
    };
    parsed.map_err(|e| bad(origin, e))
}

fn rational_value(origin: &Origin, v: Result<String, Scalar>) -> Result<Rational> {
    match v {
        Ok(text) => parse_rational(&text),
        Err(s) => scalar_rational(&s),
    }
    .map_err(|e| bad(origin, e))
}

fn count(origin: &Origin, v: Result<usize, i64>) -> Result<usize> {
    match v {
        Ok(n) => Ok(n),
        Err(n) => usize::try_from(n).map_err(|_| bad(origin, format!("expected a non-negative integer, got {n}"))),
    }
}

fn float(v: Result<f64, f64>) -> f64 {
    v.unwrap_or_else(|x| x)
}

fn path(src: Option<&Source>, v: Result<PathBuf, String>) -> PathBuf {
    match v {
        Ok(p) => p,
        Err(s) => {
            let p = PathBuf::from(s);
            match src {
                Some(src) if p.is_relative() => src.dir.join(p),
                _ => p,
            }
        }
    }
}

fn required<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing required value `{name}` (flag --{name} or config key)")))
}

fn positive(origin: &Origin, x: f64, what: &str) -> Result<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(bad(origin, format!("{what} must be positive and finite, got {x}")))
    }
}

fn load(path: &Path) -> Result<(Source, JobFile)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let src = Source { text, dir };
    let file: JobFile = toml::from_str(&src.text).map_err(|e| {
        let msg = e.message().to_string();
        match e.span() {
            Some(span) => Error::Config(format!("config line {}: {msg}", src.line(span))),
            None => Error::Config(format!("config: {msg}")),
        }
    })?;
    Ok((src, file))
}

impl JobConfig {
    pub fn resolve(cli: &Cli) -> Result<JobConfig> {
        let (src, file) = match &cli.config {
            Some(p) => {
                let (s, f) = load(p)?;
                (Some(s), f)
            }
            None => (None, JobFile::default()),
        };
        let src = src.as_ref();
        match &cli.command {
            Command::Engineer(a) => engineer(src, a, file.engineer).map(JobConfig::Engineer),
            Command::Polys(a) => polys(src, a, file.polys).map(JobConfig::Polys),
            Command::Verify(a) => verify(src, a, file.verify).map(JobConfig::Verify),
            Command::Riccati(a) => riccati(src, a, file.riccati).map(JobConfig::Riccati),
        }
    }
}

fn engineer(src: Option<&Source>, a: &EngineerArgs, f: EngineerFile) -> Result<EngineerJob> {
    let (go, gv) = required(pick(src, a.gaps.clone(), "gaps", f.gaps), "gaps")?;
    let gaps = rational_list(&go, gv)?;
    let levels = match pick(src, a.levels, "levels", f.levels) {
        Some((o, v)) => {
            let n = count(&o, v)?;
            if n == 0 {
                return Err(bad(&o, "at least one level is required"));
            }
            n
        }
        None => 8,
    };
    let e0 = match pick(src, a.e0.clone(), "e0", f.e0) {
        Some((o, v)) => rational_value(&o, v)?,
        None => int(0),
    };
    let u0 = match pick(src, a.u0.clone(), "u0", f.u0) {
        Some((o, v)) => rational_value(&o, v)?,
        None => int(0),
    };
    let out = pick(src, a.out.clone(), "out", f.out).map_or_else(|| PathBuf::from("out"), |(_, v)| path(src, v));
    let spec = HierarchySpec::new(gaps, e0, u0).map_err(|e| bad(&go, e))?;
    Ok(EngineerJob { spec, levels, out })
}

fn polys(src: Option<&Source>, a: &PolysArgs, f: PolysFile) -> Result<PolysJob> {
    let (go, gv) = required(pick(src, a.gamma.clone(), "gamma", f.gamma), "gamma")?;
    let gamma = rational_value(&go, gv)?;
    let pmax = match pick(src, a.pmax, "pmax", f.pmax) {
        Some((o, v)) => {
            let p = count(&o, v)?;
            if p > MAX_PMAX {
                return Err(bad(&o, format!("pmax is limited to {MAX_PMAX}, got {p}")));
            }
            p
        }
        None => 12,
    };
    let out = pick(src, a.out.clone(), "out", f.out).map(|(_, v)| path(src, v));
    Ok(PolysJob { gamma, pmax, out })
}

fn verify(src: Option<&Source>, a: &VerifyArgs, f: VerifyFile) -> Result<VerifyJob> {
    let mut options = VerifyOptions::default();
    if let Some((o, v)) = pick(src, a.alpha_sweep, "alpha-sweep", f.alpha_sweep) {
        let k = count(&o, v)?;
        if k == 0 {
            return Err(bad(&o, "alpha sweep needs at least one point"));
        }
        options.alpha_sweep = Some(k);
    }
    if let Some((o, v)) = pick(src, a.perturb_gap, "perturb-gap", f.perturb_gap) {
        let x = float(v);
        if !x.is_finite() || x == 0.0 {
            return Err(bad(&o, format!("perturbation must be finite and nonzero, got {x}")));
        }
        options.perturb_gap = Some(x);
    }
    if let Some((o, v)) = pick(src, a.pmax, "pmax", f.pmax) {
        let p = count(&o, v)?;
        if p > MAX_PMAX {
            return Err(bad(&o, format!("pmax is limited to {MAX_PMAX}, got {p}")));
        }
        options.pmax = p;
    }
    if let Some((o, v)) = pick(src, a.quad_tol, "quad-tol", f.quad_tol) {
        options.quadrature_tol = positive(&o, float(v), "tolerance")?;
    }
    if let Some((o, v)) = pick(src, a.fd_tol, "fd-tol", f.fd_tol) {
        options.fd_tol = positive(&o, float(v), "tolerance")?;
    }
    if let Some((o, v)) = pick(src, a.fd_points, "fd-points", f.fd_points) {
        let n = count(&o, v)?;
        if n < 101 || n % 2 == 0 {
            return Err(bad(&o, format!("fd points must be odd and at least 101, got {n}")));
        }
        options.fd_points = n;
    }
    let report = pick(src, a.report.clone(), "report", f.report).map(|(_, v)| path(src, v));
    Ok(VerifyJob { options, report })
}

fn riccati(src: Option<&Source>, a: &RiccatiArgs, f: RiccatiFile) -> Result<RiccatiJob> {
    let (go, gv) = required(pick(src, a.gaps.clone(), "gaps", f.gaps), "gaps")?;
    let gaps = rational_list(&go, gv)?;
    let gaps: Vec<f64> = gaps.iter().map(crate::exactnum::to_f64).collect();
    let u0 = match pick(src, a.u0.clone(), "u0", f.u0) {
        Some((o, v)) => crate::exactnum::to_f64(&rational_value(&o, v)?),
        None => 0.0,
    };
    let ansatz_name = pick(src, a.ansatz.clone(), "ansatz", f.ansatz);
    let ansatz = match &ansatz_name {
        None => "pole_poly".to_string(),
        Some((_, Ok(s) | Err(s))) => s.clone(),
    };
    let ansatz_origin = ansatz_name.map_or(Origin::Default, |(o, _)| o);
    let ansatz = match ansatz.as_str() {
        "pole_poly" => {
            let order = match pick(src, a.order, "order", f.order) {
                Some((o, v)) => {
                    let k = count(&o, v)?;
                    if k % 2 == 0 || k > 31 {
                        return Err(bad(&o, format!("order must be odd and at most 31, got {k}")));
                    }
                    k
                }
                None => 7,
            };
            Ansatz::PolePoly { order }
        }
        "grid" => {
            let points = match pick(src, a.points, "points", f.points) {
                Some((o, v)) => {
                    let n = count(&o, v)?;
                    if n < 8 {
                        return Err(bad(&o, format!("grid ansatz needs at least 8 points, got {n}")));
                    }
                    n
                }
                None => 121,
            };
            Ansatz::Grid { points }
        }
        other => return Err(bad(&ansatz_origin, format!("unknown ansatz {other:?}; expected pole_poly or grid"))),
    };
    let mut solver = SolverConfig::default();
    if let Some((o, v)) = pick(src, a.tol, "tol", f.tol) {
        solver.tol = positive(&o, float(v), "tolerance")?;
    }
    if let Some((o, v)) = pick(src, a.max_iter, "max-iter", f.max_iter) {
        let n = count(&o, v)?;
        if n == 0 {
            return Err(bad(&o, "iteration budget must be positive"));
        }
        solver.max_iter = n;
    }
    if let Some((o, v)) = pick(src, a.solver.clone(), "solver", f.solver) {
        let name = v.unwrap_or_else(|s| s);
        solver.kind = match name.as_str() {
            "least_squares" | "lm" => SolverKind::LeastSquares,
            "newton" => SolverKind::Newton,
            other => return Err(bad(&o, format!("unknown solver {other:?}; expected least_squares or newton"))),
        };
    }
    let out = pick(src, a.out.clone(), "out", f.out).map(|(_, v)| path(src, v));
    let problem = RiccatiProblem::new(gaps, u0, ansatz, solver).map_err(|e| bad(&go, e))?;
    Ok(RiccatiJob { problem, out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;
    use std::io::Write;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("periodic-susy").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_only() {
        let job = JobConfig::resolve(&cli(&["engineer", "--gaps", "1,5/2", "--levels", "3"])).unwrap();
        let JobConfig::Engineer(j) = job else { panic!() };
        assert_eq!(j.spec.gaps(), &[int(1), crate::exactnum::rat(5, 2)]);
        assert_eq!(j.levels, 3);
    }

    #[test]
    fn file_errors_name_the_line() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "[engineer]\ngaps = \"1,2\"\nlevels = -4").unwrap();
        let p = f.path().to_str().unwrap().to_string();
        let err = JobConfig::resolve(&cli(&["--config", &p, "engineer"])).unwrap_err().to_string();
        assert!(err.contains("config line 3"), "{err}");

        let mut g = tempfile::NamedTempFile::new().unwrap();
        writeln!(g, "[riccati]\ngaps = [1, 2]\n\nbogus = 1").unwrap();
        let p = g.path().to_str().unwrap().to_string();
        let err = JobConfig::resolve(&cli(&["--config", &p, "riccati"])).unwrap_err().to_string();
        assert!(err.contains("config line 4"), "{err}");
    }

    #[test]
    fn flag_overrides_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "[polys]\ngamma = 0.5\npmax = 3").unwrap();
        let p = f.path().to_str().unwrap().to_string();
        let JobConfig::Polys(j) = JobConfig::resolve(&cli(&["--config", &p, "polys", "--pmax", "5"])).unwrap() else {
            panic!()
        };
        assert_eq!(j.gamma, crate::exactnum::rat(1, 2));
        assert_eq!(j.pmax, 5);
    }

    #[test]
    fn flag_errors_name_the_flag() {
        let err = JobConfig::resolve(&cli(&["engineer", "--gaps", "1,0"])).unwrap_err().to_string();
        assert!(err.starts_with("--gaps"), "{err}");
        let err = JobConfig::resolve(&cli(&["polys", "--gamma", "1", "--pmax", "65"])).unwrap_err().to_string();
        assert!(err.starts_with("--pmax"), "{err}");
    }
}
