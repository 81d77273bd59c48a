//! Command-line front end: fit models from frequency-response files,
//! evaluate and compare them on probe grids, and emit benchmark datasets
//! with ground truth attached.
//!
//! Every command writes its files atomically (temp + rename) and reports
//! failures through process exit codes: 1 for I/O and parsing, 2 for
//! numerical failures, 3 for configuration mistakes.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::barycentric::{fit_poly_aa, fit_poly_aa_channels, BarycentricModel, PolyAaFit};
use crate::data::{
    load_samples, partition, save_samples, DirectionRule, FrequencySample, GridSpec,
    PartitionConfig, PartitionScheme, SampleFormat, Spacing,
};
use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix};
use crate::pencil::{build_quadruple, reduce, DescriptorRealization};
use crate::poly::{fit_poly_loewner, HighFreqWindow};
use crate::synth::{bench_case, bench_cases, sample_system};

/// Reduced-order modeling from frequency-response data, including
/// non-proper systems with linear growth at high frequencies.
#[derive(Debug, Parser)]
#[command(name = "loewner", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Truncation / null-space tolerance (default 1e-10, or 1e-13 for the
    /// implicit barycentric method)
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized direction rules
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for output files
    #[arg(long = "out-dir", global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Sample file format; inferred from the extension when omitted
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model to a frequency-response file
    Fit(FitArgs),
    /// Evaluate a model file on a frequency grid
    Eval(EvalArgs),
    /// Evaluate models against a truth model and report error statistics
    Compare(CompareArgs),
    /// Built-in benchmark systems
    Bench {
        #[command(subcommand)]
        action: BenchAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Plain rational interpolation of the full dataset
    #[value(name = "loewner")]
    Loewner,
    /// Explicit polynomial estimation, then rational fit of the remainder
    #[value(name = "poly_loewner")]
    PolyLoewner,
    /// Implicit barycentric fit with free numerator term
    #[value(name = "poly_aa")]
    PolyAa,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Loewner => "loewner",
            MethodArg::PolyLoewner => "poly_loewner",
            MethodArg::PolyAa => "poly_aa",
        }
    }

    fn default_tol(self) -> f64 {
        match self {
            MethodArg::PolyAa => 1e-13,
            _ => 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    /// Interleave sorted samples between the two sides
    Alternating,
    /// First half left, second half right
    Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirsArg {
    /// Cycle identity columns per side
    Cyclic,
    /// Seeded random unit directions
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Frequency-response samples to fit
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Separate high-frequency sample file for polynomial estimation
    #[arg(long = "hi-in")]
    pub hi_input: Option<PathBuf>,
    /// High-frequency window a:b:N; selects polynomial-estimation samples
    /// out of the input when --hi-in is absent (default 1e7:1e9:10)
    #[arg(long = "hi-window")]
    pub hi_window: Option<String>,
    #[arg(long, value_enum, default_value_t = SplitArg::Alternating)]
    pub split: SplitArg,
    /// Synthesize conjugate partners so models of real systems come out real
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub closure: bool,
    #[arg(long, value_enum, default_value_t = DirsArg::Cyclic)]
    pub dirs: DirsArg,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Model file: descriptor realization or barycentric JSON
    #[arg(long)]
    pub model: PathBuf,
    /// Probe grid start:end:count in rad/s
    #[arg(long)]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = SpacingArg::Log)]
    pub spacing: SpacingArg,
    /// Output file name (default eval.csv in the output directory)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Ground-truth model file, or a benchmark truth file carrying one
    #[arg(long)]
    pub truth: PathBuf,
    /// Model files to evaluate against the truth (repeatable)
    #[arg(long = "model", required = true)]
    pub models: Vec<PathBuf>,
    /// Probe grid start:end:count in rad/s
    #[arg(long)]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = SpacingArg::Log)]
    pub spacing: SpacingArg,
    /// Allow probes that coincide with a model's interpolation nodes
    #[arg(long = "allow-overlap", default_value_t = false)]
    pub allow_overlap: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpacingArg {
    Log,
    Linear,
}

impl SpacingArg {
    fn spacing(self) -> Spacing {
        match self {
            SpacingArg::Log => Spacing::Log,
            SpacingArg::Linear => Spacing::Linear,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum BenchAction {
    /// List the available benchmark systems
    List,
    /// Sample a benchmark and write the dataset plus a truth sidecar
    Emit(BenchEmitArgs),
}

#[derive(Debug, Args)]
pub struct BenchEmitArgs {
    /// Benchmark id from `bench list`
    #[arg(long)]
    pub name: String,
    /// Frequency grid start:end:count (default: per-benchmark grid)
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, value_enum, default_value_t = SpacingArg::Log)]
    pub spacing: SpacingArg,
    /// Output sample file (default <id>.json in the output directory)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse "start:end:count" into a grid.
pub fn parse_grid(text: &str, spacing: Spacing) -> Result<GridSpec> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "grid must be start:end:count, got '{text}'"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Config(format!("bad grid start '{}'", parts[0])))?;
    let end: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Config(format!("bad grid end '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::Config(format!("bad grid count '{}'", parts[2])))?;
    let grid = GridSpec {
        start,
        end,
        count,
        spacing,
    };
    grid.validate()?;
    Ok(grid)
}

fn parse_window(text: &str) -> Result<HighFreqWindow> {
    let grid = parse_grid(text, Spacing::Log)?;
    let window = HighFreqWindow {
        omega_min: grid.start,
        omega_max: grid.end,
        count: grid.count,
        spacing: Spacing::Log,
    };
    window.validate()?;
    Ok(window)
}

fn sample_format(path: &Path, override_arg: Option<FormatArg>) -> SampleFormat {
    match override_arg {
        Some(FormatArg::Csv) => SampleFormat::Csv,
        Some(FormatArg::Json) => SampleFormat::Json,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => SampleFormat::Json,
            _ => SampleFormat::Csv,
        },
    }
}

fn format_name(format: SampleFormat) -> &'static str {
    match format {
        SampleFormat::Csv => "csv",
        SampleFormat::Json => "json",
    }
}

fn load_sample_file(path: &Path, override_arg: Option<FormatArg>) -> Result<Vec<FrequencySample>> {
    let format = sample_format(path, override_arg);
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    load_samples(file, format)
}

/// Write a file atomically: temp sibling, then rename over the target.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("not a writable path: {}", path.display())))?;
    let tmp = match dir {
        Some(d) => d.join(format!(".{}.tmp", name.to_string_lossy())),
        None => PathBuf::from(format!(".{}.tmp", name.to_string_lossy())),
    };
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// A model file of either kind, dispatched by its JSON keys.
pub enum AnyModel {
    Realization(DescriptorRealization),
    Barycentric(BarycentricModel),
}

impl AnyModel {
    pub fn read(path: &Path) -> Result<AnyModel> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        AnyModel::from_value(path, value)
    }

    fn from_value(path: &Path, value: serde_json::Value) -> Result<AnyModel> {
        let obj = value.as_object().ok_or_else(|| Error::Parse {
            record: path.display().to_string(),
            msg: "model file is not a JSON object".into(),
        })?;
        // benchmark truth files wrap the model under a "model" key
        if let Some(inner) = obj.get("model") {
            return AnyModel::from_value(path, inner.clone());
        }
        let bytes = serde_json::to_vec(&value)?;
        if obj.contains_key("nodes") {
            Ok(AnyModel::Barycentric(BarycentricModel::read_json(
                &bytes[..],
            )?))
        } else if obj.contains_key("e") {
            Ok(AnyModel::Realization(DescriptorRealization::read_json(
                &bytes[..],
            )?))
        } else {
            Err(Error::Parse {
                record: path.display().to_string(),
                msg: "expected a realization (key 'e') or barycentric (key 'nodes') model".into(),
            })
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            AnyModel::Realization(r) => (r.outputs(), r.inputs()),
            AnyModel::Barycentric(_) => (1, 1),
        }
    }

    pub fn eval(&self, s: Complex64) -> Result<CMatrix> {
        match self {
            AnyModel::Realization(r) => r.eval(s),
            AnyModel::Barycentric(b) => Ok(CMatrix::from_element(1, 1, b.eval(s)?)),
        }
    }

    /// Interpolation nodes recorded in the file, when the form has them.
    pub fn nodes(&self) -> &[Complex64] {
        match self {
            AnyModel::Realization(_) => &[],
            AnyModel::Barycentric(b) => &b.nodes,
        }
    }
}

fn partition_config(args: &FitArgs, seed: u64) -> PartitionConfig {
    PartitionConfig {
        scheme: match args.split {
            SplitArg::Alternating => PartitionScheme::Alternating,
            SplitArg::Half => PartitionScheme::HalfSplit,
        },
        direction_rule: match args.dirs {
            DirsArg::Cyclic => DirectionRule::CyclicIdentity,
            DirsArg::Random => DirectionRule::RandomUnit { seed },
        },
        conjugate_closure: args.closure,
    }
}

fn realization_to_value(model: &DescriptorRealization) -> Result<serde_json::Value> {
    let mut buf = Vec::new();
    model.write_json(&mut buf)?;
    Ok(serde_json::from_slice(&buf)?)
}

fn split_name(split: SplitArg) -> &'static str {
    match split {
        SplitArg::Alternating => "alternating",
        SplitArg::Half => "half",
    }
}

fn dirs_name(dirs: DirsArg) -> &'static str {
    match dirs {
        DirsArg::Cyclic => "cyclic",
        DirsArg::Random => "random",
    }
}

fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn aa_diagnostics(fit: &PolyAaFit) -> serde_json::Value {
    json!({
        "sigma_min": fit.diagnostics.sigma_min,
        "sigma_max": fit.diagnostics.sigma_max,
        "has_approximate_null": fit.diagnostics.has_approximate_null,
        "null_residual": fit.diagnostics.residual,
        "achieved_residual": fit.achieved_residual,
        "spurious_real_pole_intervals": fit.spurious_pole_intervals,
    })
}

fn cmd_fit(global: &GlobalArgs, args: &FitArgs) -> Result<()> {
    fs::create_dir_all(&global.out_dir).map_err(|e| Error::io(&global.out_dir, e))?;
    let tol = global.tol.unwrap_or_else(|| args.method.default_tol());
    let samples = load_sample_file(&args.input, global.format)?;
    let config = partition_config(args, global.seed);
    let mut outputs: Vec<String> = Vec::new();
    let mut diagnostics = json!({});
    let summary: String;

    match args.method {
        MethodArg::Loewner => {
            let dataset = partition(&samples, &config)?;
            let quad = build_quadruple(&dataset)?;
            let (model, report) = reduce(&quad, tol)?;
            let (syl, syl_shift) = quad.sylvester_residuals();
            let model_path = global.out_dir.join("model.json");
            let mut buf = Vec::new();
            model.write_json(&mut buf)?;
            write_atomic(&model_path, &buf)?;
            outputs.push("model.json".into());
            let report_path = global.out_dir.join("reduction.csv");
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            write_atomic(&report_path, &buf)?;
            outputs.push("reduction.csv".into());
            diagnostics = json!({
                "reduced_order": model.order(),
                "sylvester_residuals": [syl, syl_shift],
            });
            summary = format!(
                "fitted order {} rational model from {} samples",
                model.order(),
                samples.len()
            );
        }
        MethodArg::PolyLoewner => {
            let (lo, hi) = match &args.hi_input {
                Some(path) => (samples.clone(), load_sample_file(path, global.format)?),
                None => {
                    let window = match &args.hi_window {
                        Some(text) => parse_window(text)?,
                        None => HighFreqWindow::default(),
                    };
                    let (hi, lo): (Vec<_>, Vec<_>) = samples
                        .iter()
                        .cloned()
                        .partition(|s| window.contains(s.point));
                    if hi.is_empty() {
                        return Err(Error::Config(format!(
                            "no samples inside the high-frequency window [{}, {}]; \
                             pass --hi-in or widen --hi-window",
                            window.omega_min, window.omega_max
                        )));
                    }
                    (lo, hi)
                }
            };
            let fit = fit_poly_loewner(&lo, &hi, &config, tol)?;
            let model_path = global.out_dir.join("model.json");
            let mut buf = Vec::new();
            fit.model.write_json(&mut buf)?;
            write_atomic(&model_path, &buf)?;
            outputs.push("model.json".into());
            if let Some(report) = &fit.reduction {
                let report_path = global.out_dir.join("reduction.csv");
                let mut buf = Vec::new();
                report.write_csv(&mut buf)?;
                write_atomic(&report_path, &buf)?;
                outputs.push("reduction.csv".into());
            }
            diagnostics = json!({
                "reduced_order": fit.model.order(),
                "dropped_imag": fit.dropped_imag,
                "p1_max_abs": fit.poly.p1.iter().map(|z| z.norm()).fold(0.0f64, f64::max),
            });
            summary = format!(
                "fitted order {} model with explicit polynomial part",
                fit.model.order()
            );
        }
        MethodArg::PolyAa => {
            let (p, m) = match samples.first() {
                Some(s) => (s.outputs(), s.inputs()),
                None => return Err(Error::Config("no samples to fit".into())),
            };
            if (p, m) == (1, 1) {
                let fit = fit_poly_aa(&samples, &config, tol)?;
                let model_path = global.out_dir.join("model.json");
                let mut buf = Vec::new();
                fit.model.write_json(&mut buf)?;
                write_atomic(&model_path, &buf)?;
                outputs.push("model.json".into());
                diagnostics = aa_diagnostics(&fit);
                summary = format!(
                    "fitted barycentric model with {} nodes, residual {:.3e}",
                    fit.model.len(),
                    fit.achieved_residual
                );
            } else {
                let fits = fit_poly_aa_channels(&samples, &config, tol)?;
                let mut channels = Vec::new();
                for (r, row) in fits.iter().enumerate() {
                    for (c, fit) in row.iter().enumerate() {
                        let name = format!("model_r{r}_c{c}.json");
                        let path = global.out_dir.join(&name);
                        let mut buf = Vec::new();
                        fit.model.write_json(&mut buf)?;
                        write_atomic(&path, &buf)?;
                        outputs.push(name.clone());
                        channels.push(json!({
                            "output": r,
                            "input": c,
                            "file": name,
                            "diagnostics": aa_diagnostics(fit),
                        }));
                    }
                }
                diagnostics = json!({ "channels": channels });
                summary = format!("fitted {} barycentric channel models", p * m);
            }
        }
    }

    let manifest = json!({
        "command": "fit",
        "method": args.method.name(),
        "input": args.input.display().to_string(),
        "hi_input": args.hi_input.as_ref().map(|p| p.display().to_string()),
        "hi_window": args.hi_window,
        "tol": tol,
        "seed": global.seed,
        "split": split_name(args.split),
        "directions": dirs_name(args.dirs),
        "conjugate_closure": args.closure,
        "format": format_name(sample_format(&args.input, global.format)),
        "library_version": env!("CARGO_PKG_VERSION"),
        "timestamp_unix": unix_timestamp(),
        "outputs": outputs,
        "diagnostics": diagnostics,
    });
    let manifest_path = global.out_dir.join("run_manifest.json");
    write_atomic(&manifest_path, &serde_json::to_vec_pretty(&manifest)?)?;
    println!("{summary}");
    println!("outputs in {}", global.out_dir.display());
    Ok(())
}

fn cmd_eval(global: &GlobalArgs, args: &EvalArgs) -> Result<()> {
    fs::create_dir_all(&global.out_dir).map_err(|e| Error::io(&global.out_dir, e))?;
    let model = AnyModel::read(&args.model)?;
    let grid = parse_grid(&args.grid, args.spacing.spacing())?;
    let (p, m) = model.shape();
    let mut csv = String::from("omega,status");
    for r in 0..p {
        for c in 0..m {
            csv.push_str(&format!(",abs_{r}_{c},re_{r}_{c},im_{r}_{c}"));
        }
    }
    csv.push('\n');
    let mut singular = 0usize;
    let points = grid.points();
    for &omega in &points {
        let s = c64(0.0, omega);
        match model.eval(s) {
            Ok(h) => {
                csv.push_str(&format!("{omega},ok"));
                for r in 0..p {
                    for c in 0..m {
                        let z = h[(r, c)];
                        csv.push_str(&format!(",{},{},{}", z.norm(), z.re, z.im));
                    }
                }
                csv.push('\n');
            }
            Err(Error::EvalSingular { .. }) => {
                singular += 1;
                csv.push_str(&format!("{omega},singular"));
                for _ in 0..p * m {
                    csv.push_str(",,,");
                }
                csv.push('\n');
            }
            Err(other) => return Err(other),
        }
    }
    let out = match &args.out {
        Some(path) if path.is_absolute() => path.clone(),
        Some(path) => global.out_dir.join(path),
        None => global.out_dir.join("eval.csv"),
    };
    write_atomic(&out, csv.as_bytes())?;
    println!(
        "wrote {} rows ({} singular) to {}",
        points.len(),
        singular,
        out.display()
    );
    Ok(())
}

/// Least-squares slope of log10(error) against log10(omega) over the top
/// decade of probes. Returns the slope, the probe count used, and a note
/// when the slope is undefined.
pub fn top_decade_slope(points: &[(f64, f64)]) -> (Option<f64>, usize, Option<String>) {
    let omega_max = points.iter().map(|p| p.0).fold(0.0f64, f64::max);
    if !(omega_max > 0.0) {
        return (None, 0, Some("no valid probes".into()));
    }
    let decade: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 >= omega_max / 10.0)
        .cloned()
        .collect();
    if decade.len() < 5 {
        return (
            None,
            decade.len(),
            Some("fewer than 5 probes in the top decade".into()),
        );
    }
    let err_max = decade.iter().map(|p| p.1).fold(0.0f64, f64::max);
    if err_max < 1e-13 {
        return (None, decade.len(), Some("errors at rounding level".into()));
    }
    let pts: Vec<(f64, f64)> = decade
        .iter()
        .filter(|p| p.1 > 0.0)
        .map(|p| (p.0.log10(), p.1.log10()))
        .collect();
    if pts.len() < 2 {
        return (None, decade.len(), Some("degenerate error curve".into()));
    }
    let n = pts.len() as f64;
    let xbar = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ybar = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - xbar).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    if sxx == 0.0 {
        return (None, decade.len(), Some("single-frequency decade".into()));
    }
    (Some(sxy / sxx), decade.len(), None)
}

fn median(sorted: &[f64]) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let n = sorted.len();
    if n % 2 == 1 {
        Some(sorted[n / 2])
    } else {
        Some(0.5 * (sorted[n / 2 - 1] + sorted[n / 2]))
    }
}

#[derive(Serialize)]
struct ModelSummary {
    file: String,
    max_error: Option<f64>,
    median_error: Option<f64>,
    slope_top_decade: Option<f64>,
    slope_probes: usize,
    slope_note: Option<String>,
    failed_probes: usize,
}

fn cmd_compare(global: &GlobalArgs, args: &CompareArgs) -> Result<()> {
    fs::create_dir_all(&global.out_dir).map_err(|e| Error::io(&global.out_dir, e))?;
    let truth = AnyModel::read(&args.truth)?;
    let mut models = Vec::new();
    for path in &args.models {
        let model = AnyModel::read(path)?;
        if model.shape() != truth.shape() {
            return Err(Error::shape(
                "compared model dimensions",
                format!("{}x{}", truth.shape().0, truth.shape().1),
                format!("{}x{}", model.shape().0, model.shape().1),
            ));
        }
        models.push((path.clone(), model));
    }
    let grid = parse_grid(&args.grid, args.spacing.spacing())?;
    let points = grid.points();
    if !args.allow_overlap {
        for (path, model) in std::iter::once((&args.truth, &truth))
            .chain(models.iter().map(|(p, m)| (p, m)))
        {
            for &node in model.nodes() {
                if points.iter().any(|&w| c64(0.0, w) == node) {
                    return Err(Error::Config(format!(
                        "probe grid hits an interpolation node of {} at {}; \
                         use --allow-overlap to permit this",
                        path.display(),
                        node
                    )));
                }
            }
        }
    }

    let stems: Vec<String> = args
        .models
        .iter()
        .map(|p| {
            p.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string())
        })
        .collect();
    let mut csv = String::from("omega");
    for stem in &stems {
        csv.push_str(&format!(",err_{stem}"));
    }
    csv.push('\n');

    let mut per_model: Vec<Vec<(f64, f64)>> = vec![Vec::new(); models.len()];
    let mut failures: Vec<usize> = vec![0; models.len()];
    for &omega in &points {
        let s = c64(0.0, omega);
        csv.push_str(&format!("{omega}"));
        match truth.eval(s) {
            Ok(h_true) => {
                let scale = h_true.norm();
                for (idx, (_, model)) in models.iter().enumerate() {
                    match model.eval(s) {
                        Ok(h_model) => {
                            let diff = (&h_model - &h_true).norm();
                            let err = if scale > 0.0 { diff / scale } else { diff };
                            per_model[idx].push((omega, err));
                            csv.push_str(&format!(",{err}"));
                        }
                        Err(Error::EvalSingular { .. }) => {
                            failures[idx] += 1;
                            csv.push(',');
                        }
                        Err(other) => return Err(other),
                    }
                }
            }
            Err(Error::EvalSingular { .. }) => {
                for _ in &models {
                    csv.push(',');
                }
            }
            Err(other) => return Err(other),
        }
        csv.push('\n');
    }

    let mut summaries = Vec::new();
    for (idx, stem) in stems.iter().enumerate() {
        let mut errs: Vec<f64> = per_model[idx].iter().map(|p| p.1).collect();
        errs.sort_by(f64::total_cmp);
        let (slope, used, note) = top_decade_slope(&per_model[idx]);
        let summary = ModelSummary {
            file: args.models[idx].display().to_string(),
            max_error: errs.last().copied(),
            median_error: median(&errs),
            slope_top_decade: slope,
            slope_probes: used,
            slope_note: note,
            failed_probes: failures[idx],
        };
        let slope_text = summary
            .slope_top_decade
            .map(|v| format!("{v:.3}"))
            .unwrap_or_else(|| "n/a".into());
        println!(
            "{stem}: max {:.3e} median {:.3e} top-decade slope {slope_text}",
            summary.max_error.unwrap_or(f64::NAN),
            summary.median_error.unwrap_or(f64::NAN),
        );
        summaries.push(summary);
    }

    let csv_path = global.out_dir.join("compare.csv");
    write_atomic(&csv_path, csv.as_bytes())?;
    let summary_json = json!({
        "command": "compare",
        "truth": args.truth.display().to_string(),
        "grid": { "start": grid.start, "end": grid.end, "count": grid.count },
        "allow_overlap": args.allow_overlap,
        "library_version": env!("CARGO_PKG_VERSION"),
        "models": summaries,
    });
    let summary_path = global.out_dir.join("summary.json");
    write_atomic(&summary_path, &serde_json::to_vec_pretty(&summary_json)?)?;
    println!(
        "wrote {} and {}",
        csv_path.display(),
        summary_path.display()
    );
    Ok(())
}

fn cmd_bench(global: &GlobalArgs, action: &BenchAction) -> Result<()> {
    match action {
        BenchAction::List => {
            for case in bench_cases() {
                let g = &case.default_grid;
                println!(
                    "{:16} {} (default grid {}:{}:{})",
                    case.id, case.summary, g.start, g.end, g.count
                );
            }
            Ok(())
        }
        BenchAction::Emit(args) => {
            fs::create_dir_all(&global.out_dir).map_err(|e| Error::io(&global.out_dir, e))?;
            let case = bench_case(&args.name)?;
            let grid = match &args.grid {
                Some(text) => parse_grid(text, args.spacing.spacing())?,
                None => case.default_grid,
            };
            let sys = case.build()?;
            let samples = sample_system(&sys, &grid)?;
            let out = match &args.out {
                Some(path) if path.is_absolute() => path.clone(),
                Some(path) => global.out_dir.join(path),
                None => global.out_dir.join(format!("{}.json", case.id)),
            };
            let format = sample_format(&out, global.format);
            let mut buf = Vec::new();
            save_samples(&mut buf, &samples, format)?;
            write_atomic(&out, &buf)?;
            let truth = json!({
                "id": case.id,
                "order": sys.rational_order,
                "p0": crate::data::MatrixJson::from_matrix(&sys.poly_truth.p0),
                "p1": crate::data::MatrixJson::from_matrix(&sys.poly_truth.p1),
                "model": realization_to_value(&sys.realization)?,
            });
            let truth_path = out
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .map(|p| p.join("truth.json"))
                .unwrap_or_else(|| PathBuf::from("truth.json"));
            write_atomic(&truth_path, &serde_json::to_vec_pretty(&truth)?)?;
            println!("wrote {} samples to {}", samples.len(), out.display());
            println!("wrote ground truth to {}", truth_path.display());
            Ok(())
        }
    }
}

/// Run a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Fit(args) => cmd_fit(&cli.global, args),
        Command::Eval(args) => cmd_eval(&cli.global, args),
        Command::Compare(args) => cmd_compare(&cli.global, args),
        Command::Bench { action } => cmd_bench(&cli.global, action),
    }
}
