//! Command-line front end: `test`, `gen` and `simulate`.
//!
//! Exit codes: 0 success, 1 numeric or internal failure, 2 usage or parse error.
//! Thread count comes from `--threads` or `AXISYM_THREADS` (0 = all cores).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bootstrap::KernelKind;
use crate::datagen::{generate, GeneratorKind, GeneratorSpec};
use crate::error::Error;
use crate::sample::Sample;
use crate::seeding::rng_from_seed;
use crate::simharness::{run_study, summary_csv_row, StudyResult, StudySpec, SUMMARY_CSV_HEADER};
use crate::testkit::{
    run_axial_symmetry_test, BandwidthRule, DirectionMode, TestConfig, TestReport, REPORT_FORMAT_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "axisym",
    version,
    about = "Test axial symmetry of multivariate data about an unknown axis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the test on a CSV file and write a JSON report.
    Test(TestArgs),
    /// Generate synthetic data as CSV.
    Gen(GenArgs),
    /// Run a Monte Carlo level or power study.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Report path; without it the JSON goes to stdout and the summary to stderr.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 500)]
    pub bootstrap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Explicit projection direction, comma separated (renormalized).
    #[arg(long = "h", allow_hyphen_values = true)]
    pub h: Option<String>,
    /// Fixed smoothing bandwidth instead of the data-scaled default.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long, default_value = "gaussian")]
    pub kernel: String,
    #[arg(long = "h1-tol", default_value_t = 1e-6)]
    pub h1_tol: f64,
    #[arg(long, env = "AXISYM_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Zero the elapsed time so repeated runs write byte-identical reports.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args, Clone)]
pub struct GeneratorArgs {
    /// gaussian | rotated_gaussian | skew_product | polygon_uniform | mirrored_mixture
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mean: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub variances: Option<String>,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub angle: f64,
    #[arg(long, default_value_t = 2.0)]
    pub s: f64,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub axis: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub offset: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub scales: Option<String>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub generator: GeneratorArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Emit an `x1,...,xd` header line.
    #[arg(long)]
    pub header: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON study file: one study object or an array of them.
    #[arg(long, conflicts_with_all = ["n", "reps"])]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub generator: GeneratorArgs,
    /// Sample sizes, comma separated.
    #[arg(long, value_delimiter = ',', required_unless_present = "spec")]
    pub n: Vec<usize>,
    #[arg(long, required_unless_present = "spec")]
    pub reps: Option<usize>,
    /// Levels, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.05")]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    pub bootstrap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "gaussian")]
    pub kernel: String,
    #[arg(long, env = "AXISYM_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Full study results including per-repetition outcomes.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Summary rows; also printed to stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Failure of a CLI command, carrying its exit code class.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("{0}")]
    Numeric(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Parse { .. } => EXIT_USAGE,
            Self::Numeric(_) | Self::Io(_) => EXIT_INTERNAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_)
            | Error::InvalidGenerator(_)
            | Error::DimensionMismatch { .. }
            | Error::DimensionTooSmall(_)
            | Error::DegenerateDirection(_)
            | Error::InsufficientData(_)
            | Error::SampleTooSmall(_)
            | Error::EmptyInput(_) => Self::Usage(e.to_string()),
            other => Self::Numeric(other.to_string()),
        }
    }
}

/// Provenance written alongside every test report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub format_version: String,
    pub input: String,
    pub output: Option<String>,
    pub config: TestConfig,
}

/// The JSON document written by `test`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub manifest: RunManifest,
    pub report: TestReport,
}

/// Parse, dispatch and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Test(a) => cmd_test(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Simulate(a) => cmd_simulate(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn parse_list(flag: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--{flag}: '{t}' is not a number")))
        })
        .collect()
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Io(format!("cannot start thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn write_output(path: Option<&Path>, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Parse CSV observations: comma separated, `.` decimal, optional single header
/// line (detected by a non-numeric first line).
pub fn parse_sample_csv<R: Read>(reader: R) -> Result<Sample, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut data = Vec::new();
    let mut width: Option<usize> = None;
    for (k, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(k as u64 + 1);
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        let parsed: Result<Vec<f64>, usize> = record
            .iter()
            .enumerate()
            .map(|(c, f)| f.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or(c))
            .collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if k == 0 => continue,
            Err(c) => {
                return Err(CliError::Parse {
                    line,
                    message: format!(
                        "row {} column {}: '{}' is not a finite number",
                        data.len() / width.unwrap_or(1).max(1) + 1,
                        c + 1,
                        record.get(c).unwrap_or("")
                    ),
                })
            }
        };
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(CliError::Parse {
                    line,
                    message: format!("expected {w} columns, found {}", row.len()),
                })
            }
            Some(_) => {}
        }
        data.extend(row);
    }
    let d = width.ok_or_else(|| CliError::Parse {
        line: 0,
        message: "no data rows".into(),
    })?;
    Sample::from_flat(data, d).map_err(|e| CliError::Parse {
        line: 0,
        message: e.to_string(),
    })
}

/// CSV text for `sample`; floats use the shortest round-tripping representation.
pub fn format_sample_csv(sample: &Sample, header: bool) -> String {
    let mut out = String::new();
    if header {
        let names: Vec<String> = (1..=sample.d()).map(|k| format!("x{k}")).collect();
        out.push_str(&names.join(","));
        out.push('\n');
    }
    for row in sample.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn cmd_test(args: &TestArgs) -> Result<(), CliError> {
    let kernel: KernelKind = args.kernel.parse()?;
    let direction = match &args.h {
        Some(s) => DirectionMode::Explicit(parse_list("h", s)?),
        None => DirectionMode::Random,
    };
    let config = TestConfig {
        alpha: args.alpha,
        bootstrap: args.bootstrap,
        seed: args.seed,
        direction,
        bandwidth: args.bandwidth.map_or(BandwidthRule::Default, BandwidthRule::Fixed),
        kernel,
        h1_rel_tol: args.h1_tol,
    };
    config.validate()?;

    let file = fs::File::open(&args.input).map_err(|e| CliError::Usage(format!("{}: {e}", args.input.display())))?;
    let sample = parse_sample_csv(io::BufReader::new(file))?;
    let mut report = with_threads(args.threads, || run_axial_symmetry_test(&sample, &config))??;
    if args.no_timing {
        report = report.without_timing();
    }

    let doc = ReportDocument {
        manifest: RunManifest {
            format_version: REPORT_FORMAT_VERSION.to_string(),
            input: args.input.display().to_string(),
            output: args.output.as_ref().map(|p| p.display().to_string()),
            config,
        },
        report,
    };
    let mut json = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
    json.push('\n');
    write_output(args.output.as_deref(), &json)?;

    let r = &doc.report;
    let summary = format!(
        "global p = {:.4} (n = {}, d = {}, B = {}): {} axial symmetry at alpha = {}",
        r.global_p,
        r.n,
        r.d,
        r.config.bootstrap,
        if r.reject { "reject" } else { "do not reject" },
        r.config.alpha
    );
    if args.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

/// Build a generator from flags; parameters not given fall back to defaults.
pub fn generator_from_args(g: &GeneratorArgs) -> Result<GeneratorKind, CliError> {
    let kind = g
        .kind
        .as_deref()
        .ok_or_else(|| CliError::Usage("--kind is required".into()))?;
    let list = |flag: &str, v: &Option<String>| -> Result<Option<Vec<f64>>, CliError> {
        v.as_deref().map(|s| parse_list(flag, s)).transpose()
    };
    let variances = list("variances", &g.variances)?.unwrap_or_else(|| vec![4.0, 1.0]);
    let mean = list("mean", &g.mean)?.unwrap_or_else(|| vec![0.0; variances.len()]);
    let out = match kind {
        "gaussian" => GeneratorKind::Gaussian { mean, variances },
        "rotated_gaussian" => GeneratorKind::RotatedGaussian {
            mean,
            variances,
            angle: g.angle,
        },
        "skew_product" => GeneratorKind::SkewProduct { s: g.s },
        "polygon_uniform" => GeneratorKind::PolygonUniform {
            k: g.k,
            radius: g.radius,
        },
        "mirrored_mixture" => {
            let axis = list("axis", &g.axis)?.unwrap_or_else(|| vec![1.0, 0.0]);
            let d = axis.len();
            let default_offset: Vec<f64> = (0..d).map(|k| if k == 0 { 0.5 } else { 0.8 }).collect();
            let default_scales: Vec<f64> = (0..d).map(|k| 1.0 / (1.0 + 0.6 * k as f64)).collect();
            GeneratorKind::MirroredMixture {
                axis,
                offset: list("offset", &g.offset)?.unwrap_or(default_offset),
                scales: list("scales", &g.scales)?.unwrap_or(default_scales),
            }
        }
        other => return Err(CliError::Usage(format!("unknown generator kind '{other}'"))),
    };
    out.validate()?;
    Ok(out)
}

pub fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let spec = GeneratorSpec {
        kind: generator_from_args(&args.generator)?,
        n: args.n,
        seed: args.seed,
    };
    let sample = generate(&spec, &mut rng_from_seed(spec.seed))?;
    write_output(args.output.as_deref(), &format_sample_csv(&sample, args.header))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StudyFile {
    Many(Vec<StudySpec>),
    One(StudySpec),
}

fn studies_from_args(args: &SimulateArgs) -> Result<Vec<StudySpec>, CliError> {
    if let Some(path) = &args.spec {
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let parsed: StudyFile = serde_json::from_str(&text).map_err(|e| CliError::Parse {
            line: e.line() as u64,
            message: e.to_string(),
        })?;
        return Ok(match parsed {
            StudyFile::Many(v) => v,
            StudyFile::One(s) => vec![s],
        });
    }
    let reps = args.reps.ok_or_else(|| CliError::Usage("--reps is required".into()))?;
    let kind = generator_from_args(&args.generator)?;
    let kernel: KernelKind = args.kernel.parse()?;
    let mut out = Vec::new();
    for &n in &args.n {
        for &alpha in &args.alpha {
            out.push(StudySpec {
                generator: GeneratorSpec {
                    kind: kind.clone(),
                    n,
                    seed: 0,
                },
                config: TestConfig {
                    alpha,
                    bootstrap: args.bootstrap,
                    seed: 0,
                    kernel,
                    ..TestConfig::default()
                },
                repetitions: reps,
                master_seed: args.seed,
            });
        }
    }
    Ok(out)
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let studies = studies_from_args(args)?;
    if studies.is_empty() {
        return Err(CliError::Usage("no studies requested".into()));
    }
    for s in &studies {
        s.config.validate()?;
        s.generator.kind.validate()?;
        if s.repetitions == 0 {
            return Err(CliError::Usage("repetitions must be at least 1".into()));
        }
    }
    let results: Vec<StudyResult> = with_threads(args.threads, || {
        studies.iter().map(run_study).collect::<Result<Vec<_>, Error>>()
    })??;

    let mut csv = String::from(SUMMARY_CSV_HEADER);
    csv.push('\n');
    for r in &results {
        csv.push_str(&summary_csv_row(r));
        csv.push('\n');
    }
    print!("{csv}");
    if let Some(p) = &args.csv {
        fs::write(p, &csv).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    }
    if let Some(p) = &args.json {
        let mut json = serde_json::to_string_pretty(&results).map_err(|e| CliError::Io(e.to_string()))?;
        json.push('\n');
        fs::write(p, json).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}
