use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde::Serialize;
use vcind_core::density::{self, CountSource, DensityEstimate, FitOptions, Verdict};
use vcind_core::scheme::{certify, Certification, SchemeParams};
use vcind_core::trace::vctm::{self, Duplicates};
use vcind_core::witness::{build_witness_family, verify_lower_bound, WitnessPattern};
use vcind_core::zoo::{sample_rows, FamilySpec};
use vcind_core::{family_rank, joint_cuts, BoolOp, CutSet, TraceMatrix};

use crate::args::{Command, FamilyArgs, Format, OutArgs, ReadArgs};

type CliResult<T> = Result<T, String>;

pub enum Outcome {
    Success,
    Failed,
}

impl Outcome {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Outcome::Success => ExitCode::SUCCESS,
            Outcome::Failed => ExitCode::from(1),
        }
    }

    fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Success
        } else {
            Outcome::Failed
        }
    }
}

/// The validated configuration of one run, echoed into every JSON report.
#[derive(Debug, Default, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub windows: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_source: Option<CountSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dedup: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

pub fn run(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Generate { family, width, sample, seed, out } => generate(&family, width, sample, seed, &out),
        Command::Analyze { input, window, read, out } => analyze(&input, window, &read, &out),
        Command::Certify { input, rank, window, read, out } => certify_file(&input, rank, window, &read, &out),
        Command::Fit { family, grid, expect, enumerate, format, csv, out } => {
            fit(&family, grid, expect, enumerate, format, csv.as_deref(), &out)
        }
        Command::Witness { n, width, blocks, separators, out } => {
            witness(n, width, blocks.as_deref(), separators.as_deref(), &out)
        }
        Command::Coincide { family, grid, window, out } => coincide(&family, grid, window, &out),
    }
}

fn parse_family(args: &FamilyArgs) -> CliResult<FamilySpec> {
    let spec = if args.family == "product" {
        let (Some(left), Some(right), Some(op)) = (&args.left, &args.right, &args.op) else {
            return Err("--family product needs --left, --right and --op".into());
        };
        let op: BoolOp = op.parse()?;
        FamilySpec::product(parse_expr(left)?, parse_expr(right)?, op).map_err(|e| e.to_string())?
    } else if args.family.contains(':') || args.family.contains('(') {
        if args.n.is_some() {
            return Err("--n conflicts with a parameterized --family expression".into());
        }
        parse_expr(&args.family)?
    } else {
        let spec = FamilySpec::from_kind(&args.family, args.n).map_err(|e| e.to_string())?;
        if args.n.is_some() && matches!(spec, FamilySpec::Threshold | FamilySpec::Full) {
            return Err(format!("--n does not apply to {}", args.family));
        }
        spec
    };
    if args.family != "product" && (args.left.is_some() || args.right.is_some() || args.op.is_some()) {
        return Err("--left, --right and --op only apply to --family product".into());
    }
    Ok(spec)
}

fn parse_expr(s: &str) -> CliResult<FamilySpec> {
    s.parse().map_err(|e: vcind_core::Error| e.to_string())
}

fn read_matrix(path: &Path, read: &ReadArgs) -> CliResult<TraceMatrix> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mode = if read.dedup { Duplicates::Merge } else { Duplicates::Reject };
    vctm::parse(&text, mode).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &OutArgs, text: &str) -> CliResult<()> {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn emit_json<T: Serialize>(out: &OutArgs, report: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    text.push('\n');
    emit(out, &text)
}

fn generate(family: &FamilyArgs, width: usize, sample: Option<usize>, seed: u64, out: &OutArgs) -> CliResult<Outcome> {
    let spec = parse_family(family)?;
    let mut m = spec.generate(width).map_err(|e| e.to_string())?;
    if let Some(k) = sample {
        if k == 0 {
            return Err("--sample must be positive".into());
        }
        log::info!("sampling {k} rows with seed {seed}");
        m = sample_rows(&m, k, seed);
    }
    emit(out, &vctm::write(&m))?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct WindowRank {
    window: usize,
    rank: usize,
}

#[derive(Serialize)]
struct AnalyzeReport {
    config: RunConfig,
    width: usize,
    distinct_count: usize,
    max_alternation: usize,
    family_rank: Vec<WindowRank>,
    joint_cuts: CutSet,
}

fn analyze(input: &Path, windows: Vec<usize>, read: &ReadArgs, out: &OutArgs) -> CliResult<Outcome> {
    let m = read_matrix(input, read)?;
    let report = AnalyzeReport {
        width: m.width(),
        distinct_count: m.distinct_count(),
        max_alternation: m.max_alternation(),
        family_rank: windows.iter().map(|&w| WindowRank { window: w, rank: family_rank(&m, w) }).collect(),
        joint_cuts: joint_cuts(&m),
        config: RunConfig {
            command: "analyze",
            input: Some(input.to_path_buf()),
            output: out.out.clone(),
            windows,
            dedup: Some(read.dedup),
            ..RunConfig::default()
        },
    };
    emit_json(out, &report)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct CertifyReport<'a> {
    config: RunConfig,
    status: &'static str,
    distinct_count: usize,
    bound: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<&'a vcind_core::BoundCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<&'a vcind_core::scheme::CertifyFailure>,
}

fn certify_file(input: &Path, rank: usize, window: usize, read: &ReadArgs, out: &OutArgs) -> CliResult<Outcome> {
    let m = read_matrix(input, read)?;
    let params = SchemeParams::new(rank, window).map_err(|e| e.to_string())?;
    let result = certify(&m, &params);
    let config = RunConfig {
        command: "certify",
        input: Some(input.to_path_buf()),
        output: out.out.clone(),
        n: Some(rank),
        windows: vec![window],
        dedup: Some(read.dedup),
        ..RunConfig::default()
    };
    let (certificate, failure) = match &result {
        Certification::Certified(c) => (Some(c), None),
        Certification::Failed(f) => (None, Some(f)),
    };
    let report = CertifyReport {
        config,
        status: if certificate.is_some() { "certified" } else { "failed" },
        distinct_count: m.distinct_count(),
        bound: params.row_bound(m.width()),
        certificate,
        failure,
    };
    emit_json(out, &report)?;
    Ok(Outcome::from_bool(result.is_certified()))
}

#[derive(Serialize)]
struct FitReport {
    config: RunConfig,
    estimate: DensityEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    expectation_met: Option<bool>,
}

fn fit(
    family: &FamilyArgs,
    grid: Option<Vec<usize>>,
    expect: Option<i64>,
    enumerate: bool,
    format: Format,
    csv: Option<&Path>,
    out: &OutArgs,
) -> CliResult<Outcome> {
    let spec = parse_family(family)?;
    let grid = grid.unwrap_or_else(|| density::default_grid(&spec));
    let count_source = if enumerate { CountSource::Enumerate } else { CountSource::Auto };
    let opts = FitOptions { count_source, ..FitOptions::default() };
    let estimate = density::fit_with(&spec, &grid, &opts).map_err(|e| e.to_string())?;
    if let Some(path) = csv {
        fs::write(path, estimate.to_csv()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let expectation_met = expect.map(|k| estimate.verdict == Verdict::Integer(k));
    match format {
        Format::Csv => emit(out, &estimate.to_csv())?,
        Format::Json => {
            let config = RunConfig {
                command: "fit",
                output: out.out.clone(),
                family: Some(spec),
                grid: Some(grid),
                expect,
                count_source: Some(count_source),
                format: Some(format),
                ..RunConfig::default()
            };
            emit_json(out, &FitReport { config, estimate, expectation_met })?;
        }
    }
    Ok(Outcome::from_bool(expectation_met.unwrap_or(true)))
}

fn parse_bits(s: &str, what: &str) -> CliResult<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(format!("--{what} must be a string of 0s and 1s")),
        })
        .collect()
}

fn witness(n: usize, width: usize, blocks: Option<&str>, separators: Option<&str>, out: &OutArgs) -> CliResult<Outcome> {
    let pattern = match (blocks, separators) {
        (None, None) => WitnessPattern::canonical(n),
        (Some(b), s) => {
            let b = parse_bits(b, "blocks")?;
            if b.len() != n + 2 {
                return Err(format!("--blocks needs n + 2 = {} values", n + 2));
            }
            match s {
                Some(s) => WitnessPattern::new(b, parse_bits(s, "separators")?),
                None => WitnessPattern::from_blocks(b),
            }
            .map_err(|e| e.to_string())?
        }
        (None, Some(_)) => return Err("--separators requires --blocks".into()),
    };
    let m = build_witness_family(&pattern, width).map_err(|e| e.to_string())?;
    emit(out, &vctm::write(&m))?;
    let ok = verify_lower_bound(&m, n, width);
    if !ok {
        eprintln!("lower bound C({width}, {}) not met", n + 1);
    }
    Ok(Outcome::from_bool(ok))
}

#[derive(Serialize)]
struct CoincideReport {
    config: RunConfig,
    report: density::CoincidenceReport,
}

fn coincide(family: &FamilyArgs, grid: Option<Vec<usize>>, window: usize, out: &OutArgs) -> CliResult<Outcome> {
    let spec = parse_family(family)?;
    let grid = grid.unwrap_or_else(|| density::default_grid(&spec));
    let report = density::coincidence_report(&spec, &grid, window).map_err(|e| e.to_string())?;
    let agree = report.agree;
    let config = RunConfig {
        command: "coincide",
        output: out.out.clone(),
        family: Some(spec),
        windows: vec![window],
        grid: Some(grid),
        ..RunConfig::default()
    };
    emit_json(out, &CoincideReport { config, report })?;
    Ok(Outcome::from_bool(agree))
}
