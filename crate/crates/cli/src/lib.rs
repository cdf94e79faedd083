//! The `nbscope` command line.
//!
//! Exit codes: 0 success, 1 no finding, 2 usage error, 3 numeric cap hit.

use clap::{Args, Parser, Subcommand, ValueEnum};
use nbscope_core::analytic::{
    boundary_l1_scan, decay_rule_check, periodic_reflectionless_check, ArcSpec, CheckOutcome,
    DecayOutcome, DecaySide, ProbeConfig,
};
use nbscope_core::random::{certificate_rate_experiment, Atom, ProcessKind, ProcessSpec};
use nbscope_core::rightlimit::{
    detect_eventual_periodicity, extract_right_limits, find_gap_certificate,
    find_pair_certificate, szego_block_analysis, verdict, FlankSide, SearchConfig, SzegoOverall,
    Verdict,
};
use nbscope_core::sequence::{
    make_sequence, read_csv, window, write_csv_to, BoundaryFn, Edge, ExponentSet, GeneratorSpec,
    OneSidedSequence, RotationNumber,
};
use nbscope_core::Error;
use num_complex::Complex64;
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "nbscope", version, about = "Natural-boundary analysis of bounded power series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the first `count` coefficients as `n,re,im` CSV.
    Generate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        count: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cluster windows into right-limit candidates.
    Rightlimits {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gap and pair certificate search.
    Certificate {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Block mismatch analysis for finite-valued sequences.
    Szego {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Smallest (preperiod, period) consistent with the data.
    Periodicity {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// L¹ norm of f on circles of radius r over an arc.
    Probe {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        probe: ProbeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reflectionless check of a periodic pattern, or the decay rule on a window.
    Reflectionless {
        #[command(flatten)]
        source: SourceArgs,
        /// Arc as `full` or `alpha,beta` in radians.
        #[arg(long, default_value = "full")]
        arc: String,
        /// Apply the decay rule instead, with the hypothesis on this side.
        #[arg(long, value_enum)]
        decay_side: Option<SideArg>,
        #[arg(long = "C", default_value_t = 1.0)]
        c: f64,
        #[arg(long = "D", default_value_t = 1.0)]
        d: f64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Window center for the decay rule.
        #[arg(long, default_value_t = 0)]
        center: u64,
        /// Window radius for the decay rule.
        #[arg(long, default_value_t = 5)]
        window: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Certificate rate over sampled paths.
    Montecarlo {
        /// Process spec as JSON (kind, bound, seed, ...).
        #[arg(long, conflicts_with = "iid")]
        process: Option<PathBuf>,
        /// iid atoms as `value:prob,value:prob`.
        #[arg(long)]
        iid: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run every probe in order and report the first conclusive one.
    Verdict {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Periodic,
    GapFactorial,
    GapSquares,
    RudinShapiro,
    Rotation,
    ErdosHard,
    ErdosSoft,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Positive,
    Negative,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct SourceArgs {
    #[arg(long, value_enum, conflicts_with_all = ["input", "spec"])]
    family: Option<Family>,
    /// CSV file with `n,re,im` rows.
    #[arg(long, conflicts_with = "spec")]
    input: Option<PathBuf>,
    /// Generator spec as JSON.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Comma-separated values for `periodic`, e.g. `1,0,-1,0.5+2i`.
    #[arg(long)]
    pattern: Option<String>,
    /// Rotation number: `golden`, `sqrtN`, `sqrtN-K` or a decimal.
    #[arg(long, default_value = "sqrt2-1")]
    q: String,
    /// Rotation phase in turns.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// `fractional`, `character`, `constant:V` or `step:CUT:BELOW:ABOVE`.
    #[arg(long, default_value = "fractional")]
    boundary: String,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    min_recurrence: Option<usize>,
    #[arg(long)]
    max_candidates: Option<usize>,
    #[arg(long)]
    max_witnesses: Option<usize>,
    #[arg(long)]
    p_max: Option<usize>,
    #[arg(long)]
    max_period: Option<u64>,
    #[arg(long)]
    max_preperiod: Option<u64>,
    #[arg(long)]
    periodicity_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    /// Arc as `full` or `alpha,beta` in radians.
    #[arg(long, default_value = "full")]
    arc: String,
    /// Comma-separated radii; overrides `--kmax`.
    #[arg(long)]
    radii: Option<String>,
    /// Use radii `1 - 10^-k` for `k = 1..=kmax`.
    #[arg(long, default_value_t = 4)]
    kmax: u32,
    #[arg(long)]
    quad_points: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// Failure of a subcommand, already mapped to its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TermCap { .. } => EXIT_CAP,
            Error::NotFiniteValued(_) => EXIT_NO_FINDING,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("nbscope: {}", f.message);
            f.code
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("NBSCOPE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // fails only if a pool was already built, e.g. by an earlier call
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Generate { source, count, out } => {
            let seq = load(&source)?;
            if let Some(n) = seq.known_len() {
                if count > n {
                    return Err(Error::HorizonExceedsData { needed: count, available: n }.into());
                }
            }
            let mut buf = Vec::new();
            write_csv_to(&seq, count, &mut buf)?;
            emit_bytes(out.as_deref(), &buf)?;
            Ok(EXIT_OK)
        }
        Command::Rightlimits { source, search, output } => {
            json_only(&output)?;
            let seq = load(&source)?;
            let report = extract_right_limits(&seq, &search.config(&seq))?;
            let found = !report.candidates.is_empty();
            emit_json(&output, &report)?;
            Ok(finding(found, "no right-limit candidate recurs often enough"))
        }
        Command::Certificate { source, search, output } => {
            json_only(&output)?;
            let seq = load(&source)?;
            let cfg = search.config(&seq);
            let gap = find_gap_certificate(&seq, &cfg)?;
            let backward = find_pair_certificate(&seq, &cfg, FlankSide::Backward)?;
            let forward = find_pair_certificate(&seq, &cfg, FlankSide::Forward)?;
            let found = gap.is_some() || backward.is_some() || forward.is_some();
            #[derive(Serialize)]
            struct Certificates<T> {
                gap: Option<T>,
                backward: Option<T>,
                forward: Option<T>,
            }
            emit_json(&output, &Certificates { gap, backward, forward })?;
            Ok(finding(found, "no certificate up to the horizon"))
        }
        Command::Szego { source, search, output } => {
            json_only(&output)?;
            let seq = load(&source)?;
            let report = szego_block_analysis(&seq, &search.config(&seq))?;
            let found = report.overall != SzegoOverall::HorizonExhausted;
            emit_json(&output, &report)?;
            Ok(finding(found, "horizon exhausted without a decision"))
        }
        Command::Periodicity { source, search, output } => {
            json_only(&output)?;
            let seq = load(&source)?;
            let cfg = search.config(&seq);
            let found = detect_eventual_periodicity(
                &seq,
                cfg.max_period,
                cfg.max_preperiod,
                cfg.horizon,
                cfg.periodicity_tol,
            )?;
            #[derive(Serialize)]
            struct Periodicity {
                periodic: bool,
                preperiod: Option<u64>,
                period: Option<u64>,
                horizon: u64,
                tol: f64,
            }
            emit_json(
                &output,
                &Periodicity {
                    periodic: found.is_some(),
                    preperiod: found.map(|p| p.0),
                    period: found.map(|p| p.1),
                    horizon: cfg.horizon,
                    tol: cfg.periodicity_tol,
                },
            )?;
            Ok(finding(found.is_some(), "no eventual period found"))
        }
        Command::Probe { source, probe, output } => {
            let seq = load(&source)?;
            let arc = parse_arc(&probe.arc)?;
            let radii = match &probe.radii {
                Some(list) => parse_list(list, |s| s.parse::<f64>().ok(), "radius")?,
                None => (1..=probe.kmax).map(|k| 1.0 - 10f64.powi(-(k as i32))).collect(),
            };
            let mut cfg = ProbeConfig::default();
            if let Some(m) = probe.quad_points {
                cfg.quad_points = m;
            }
            if let Some(t) = probe.tol {
                cfg.tol = t;
            }
            let report = boundary_l1_scan(&seq, &arc, &radii, &cfg)?;
            match output.format {
                Format::Json => emit_json(&output, &report)?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    report.write_csv(&mut buf)?;
                    emit_bytes(output.out.as_deref(), &buf)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Reflectionless {
            source,
            arc,
            decay_side,
            c,
            d,
            delta,
            center,
            window: radius,
            output,
        } => {
            json_only(&output)?;
            match decay_side {
                None => {
                    let pattern = periodic_pattern(&source)?;
                    let check = periodic_reflectionless_check(&pattern, &parse_arc(&arc)?)?;
                    if let CheckOutcome::Fail { reason, .. } = &check.outcome {
                        eprintln!("nbscope: not reflectionless: {reason}");
                    }
                    emit_json(&output, &check)?;
                }
                Some(side) => {
                    let seq = load(&source)?;
                    let win = window(&seq, center, radius)?;
                    let side = match side {
                        SideArg::Positive => DecaySide::Positive,
                        SideArg::Negative => DecaySide::Negative,
                    };
                    let outcome = decay_rule_check(&win, side, c, d, delta)?;
                    if let DecayOutcome::NotReflectionless { witness } = outcome {
                        eprintln!("nbscope: not reflectionless, witness index {witness}");
                    }
                    emit_json(&output, &outcome)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Montecarlo { process, iid, seed, trials, search, output } => {
            json_only(&output)?;
            let spec = match (process, iid) {
                (Some(path), _) => {
                    let text = read_input(&path)?;
                    serde_json::from_str::<ProcessSpec>(&text)
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?
                }
                (None, Some(atoms)) => iid_spec(&atoms, seed)?,
                (None, None) => iid_spec("1:0.5,-1:0.5", seed)?,
            };
            let base = SearchConfig { horizon: 10_000, eps: 0.0, delta: 1.0, ..SearchConfig::default() };
            let cfg = search.apply(base);
            let report = certificate_rate_experiment(&spec, trials, &cfg)?;
            eprintln!("nbscope: {} of {} trials certified", report.hits, report.trials);
            emit_json(&output, &report)?;
            Ok(EXIT_OK)
        }
        Command::Verdict { source, search, output } => {
            json_only(&output)?;
            let seq = load(&source)?;
            let v = verdict(&seq, &search.config(&seq))?;
            let found = !matches!(v, Verdict::Inconclusive { .. });
            emit_json(&output, &v)?;
            Ok(finding(found, "inconclusive"))
        }
    }
}

fn finding(found: bool, what: &str) -> i32 {
    if found {
        EXIT_OK
    } else {
        eprintln!("nbscope: {what}");
        EXIT_NO_FINDING
    }
}

fn json_only(output: &OutputArgs) -> std::result::Result<(), Failure> {
    match output.format {
        Format::Json => Ok(()),
        Format::Csv => Err(Failure::usage("this subcommand only writes json")),
    }
}

impl SearchArgs {
    fn config(&self, seq: &OneSidedSequence) -> SearchConfig {
        self.apply(SearchConfig::for_sequence(seq))
    }

    fn apply(&self, mut cfg: SearchConfig) -> SearchConfig {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { cfg.$f = v; } )* };
        }
        set!(
            window,
            horizon,
            eps,
            delta,
            min_recurrence,
            max_candidates,
            max_witnesses,
            p_max,
            max_period,
            max_preperiod,
            periodicity_tol
        );
        cfg
    }
}

fn load(source: &SourceArgs) -> std::result::Result<OneSidedSequence, Failure> {
    if let Some(path) = &source.input {
        return Ok(read_csv(path)?);
    }
    let spec = generator_spec(source)?;
    Ok(make_sequence(&spec)?)
}

fn generator_spec(source: &SourceArgs) -> std::result::Result<GeneratorSpec, Failure> {
    if let Some(path) = &source.spec {
        let text = read_input(path)?;
        return serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())));
    }
    let family = source
        .family
        .ok_or_else(|| Failure::usage("one of --family, --input or --spec is required"))?;
    let one = Complex64::new(1.0, 0.0);
    Ok(match family {
        Family::Periodic => GeneratorSpec::Periodic { pattern: periodic_pattern(source)? },
        Family::GapFactorial => GeneratorSpec::GapPowers { exponents: ExponentSet::Factorials, fill: one },
        Family::GapSquares => GeneratorSpec::GapPowers { exponents: ExponentSet::Squares, fill: one },
        Family::RudinShapiro => GeneratorSpec::RudinShapiro,
        Family::Rotation => GeneratorSpec::Rotation {
            boundary: parse_boundary(&source.boundary)?,
            q: source.q.parse::<RotationNumber>()?,
            theta: source.theta,
        },
        Family::ErdosHard => GeneratorSpec::Erdos { edge: Edge::Hard },
        Family::ErdosSoft => GeneratorSpec::Erdos { edge: Edge::Soft },
    })
}

fn periodic_pattern(source: &SourceArgs) -> std::result::Result<Vec<Complex64>, Failure> {
    let text = source
        .pattern
        .as_deref()
        .ok_or_else(|| Failure::usage("--pattern is required"))?;
    parse_list(text, parse_complex, "value")
}

fn read_input(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn iid_spec(atoms: &str, seed: u64) -> std::result::Result<ProcessSpec, Failure> {
    let support = parse_list(
        atoms,
        |s| {
            let (v, p) = s.rsplit_once(':')?;
            Some(Atom { value: parse_complex(v)?, prob: p.trim().parse().ok()? })
        },
        "atom",
    )?;
    let bound = support.iter().map(|a| a.value.norm()).fold(0.0, f64::max);
    Ok(ProcessSpec { kind: ProcessKind::Iid { support }, bound, seed })
}

fn parse_list<T>(
    text: &str,
    parse: impl Fn(&str) -> Option<T>,
    what: &str,
) -> std::result::Result<Vec<T>, Failure> {
    text.split(',')
        .map(|s| parse(s.trim()).ok_or_else(|| Failure::usage(format!("cannot parse {what} {s:?}"))))
        .collect()
}

/// `x`, `yi`, `x+yi` or `x-yi`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split before the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        t => t.parse().ok(),
    };
    match split {
        Some(i) => Some(Complex64::new(body[..i].parse().ok()?, imag(&body[i..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

fn parse_arc(text: &str) -> std::result::Result<ArcSpec, Failure> {
    if text.trim() == "full" {
        return Ok(ArcSpec::Full);
    }
    let ends = parse_list(text, |s| s.parse::<f64>().ok(), "arc end")?;
    match ends[..] {
        [alpha, beta] => Ok(ArcSpec::new(alpha, beta)?),
        _ => Err(Failure::usage("arc must be `full` or `alpha,beta`")),
    }
}

fn parse_boundary(text: &str) -> std::result::Result<BoundaryFn, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    let value = |s: &str| parse_complex(s).ok_or_else(|| Failure::usage(format!("bad value {s:?}")));
    match parts[..] {
        ["fractional"] => Ok(BoundaryFn::FractionalPart),
        ["character"] => Ok(BoundaryFn::Character),
        ["constant", v] => Ok(BoundaryFn::Constant { value: value(v)? }),
        ["step", cut, below, above] => Ok(BoundaryFn::Step {
            cut: cut.parse().map_err(|_| Failure::usage(format!("bad cut {cut:?}")))?,
            below: value(below)?,
            above: value(above)?,
        }),
        _ => Err(Failure::usage(format!("unknown boundary function {text:?}"))),
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    report: &'a T,
}

fn emit_json<T: Serialize>(output: &OutputArgs, report: &T) -> std::result::Result<(), Failure> {
    let mut buf = serde_json::to_vec_pretty(&Envelope { schema_version: SCHEMA_VERSION, report })
        .map_err(Error::from)?;
    buf.push(b'\n');
    emit_bytes(output.out.as_deref(), &buf)
}

fn emit_bytes(out: Option<&Path>, bytes: &[u8]) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| Failure::usage(format!("stdout: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1"), Some(Complex64::new(1.0, 0.0)));
        assert_eq!(parse_complex("-0.5"), Some(Complex64::new(-0.5, 0.0)));
        assert_eq!(parse_complex("2i"), Some(Complex64::new(0.0, 2.0)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("1.5-2i"), Some(Complex64::new(1.5, -2.0)));
        assert_eq!(parse_complex("1e-3+1e-2i"), Some(Complex64::new(1e-3, 1e-2)));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn boundary_forms() {
        assert_eq!(parse_boundary("character").unwrap(), BoundaryFn::Character);
        assert!(matches!(parse_boundary("step:0.5:0:1").unwrap(), BoundaryFn::Step { .. }));
        assert!(parse_boundary("wobbly").is_err());
    }

    #[test]
    fn arcs() {
        assert_eq!(parse_arc("full").unwrap(), ArcSpec::Full);
        assert!(matches!(parse_arc("0.1,3").unwrap(), ArcSpec::Arc { .. }));
        assert!(parse_arc("3,0.1").is_err());
        assert!(parse_arc("1").is_err());
    }
}
