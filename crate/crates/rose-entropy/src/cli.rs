//! Batch front-end: parse length or displacement documents, dispatch to the
//! solvers, and emit deterministic machine-readable reports.
//!
//! Reports contain no timestamps and emit keys in sorted order, so
//! identical config plus input produces byte-identical output. Exit codes:
//! 0 success, 1 input validation failure, 2 solver non-convergence,
//! 3 infeasible or undefined bound outcome under `--strict`.

use crate::bounds::{self, BoundsError};
use crate::census::{self, CensusError, ScaledLengths, DEFAULT_TABLE_CAP};
use crate::entropy::{self, EntropyError, DEFAULT_RESIDUAL_TOL, DEFAULT_SPECTRAL_TOL};
use crate::types::{GroupSample, RoseLengths, ValidationError};
use serde::Serialize;
use std::path::PathBuf;
use thiserror::Error;

/// Environment variable overriding the default residual tolerance.
pub const TOLERANCE_ENV_VAR: &str = "ROSE_ENTROPY_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(#[from] ValidationError),
    #[error("{0}")]
    Census(#[from] CensusError),
    #[error("{0}")]
    Bounds(BoundsError),
    #[error("solver failed: {0}")]
    Solver(EntropyError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("schema error in {context}: {message}")]
    Schema { context: String, message: String },
    #[error("{command} needs {what}")]
    MissingArgument {
        command: &'static str,
        what: &'static str,
    },
    #[error("infeasible or undefined bound under --strict: {0}")]
    StrictInfeasible(String),
    #[error("invalid {TOLERANCE_ENV_VAR} value {0:?}")]
    BadEnvTolerance(String),
}

impl From<EntropyError> for CliError {
    fn from(e: EntropyError) -> Self {
        match e {
            // Bad inputs and bad tolerances are the caller's problem, not a
            // solver failure.
            EntropyError::Validation(v) => CliError::Validation(v),
            EntropyError::RankTooSmall(_) => CliError::Schema {
                context: "lengths".into(),
                message: e.to_string(),
            },
            other => CliError::Solver(other),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Validation(v) => CliError::Validation(v),
            BoundsError::Entropy(inner) => CliError::from(inner),
            other => CliError::Bounds(other),
        }
    }
}

impl CliError {
    /// Exit status for batch pipelines: 1 input, 2 solver, 3 strict bound.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(_) => 2,
            CliError::StrictInfeasible(_) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Entropy,
    Lim,
    Census,
    Certify,
    Collar,
    Report,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Entropy => "entropy",
            CommandKind::Lim => "lim",
            CommandKind::Census => "census",
            CommandKind::Certify => "certify",
            CommandKind::Collar => "collar",
            CommandKind::Report => "report",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Plain,
}

/// Inline data supplied on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum InlineInput {
    Lengths(Vec<f64>),
    Sample { displacements: Vec<f64>, delta: f64 },
}

/// Exactly one input source: a document path or inline values.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSource {
    Path(PathBuf),
    Inline(InlineInput),
}

/// One batch job. Tolerances left as `None` fall back to the
/// `ROSE_ENTROPY_TOL` environment variable, then the library defaults.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub command: CommandKind,
    pub input: InputSource,
    pub tol: Option<f64>,
    pub rho_tol: Option<f64>,
    pub scale: u64,
    pub r_max: Option<f64>,
    pub step: f64,
    pub window: Option<(f64, f64)>,
    pub table_cap: u64,
    pub h: Option<f64>,
    pub strict: bool,
    pub format: OutputFormat,
}

impl JobConfig {
    pub fn new(command: CommandKind, input: InputSource) -> Self {
        Self {
            command,
            input,
            tol: None,
            rho_tol: None,
            scale: 1,
            r_max: None,
            step: 1.0,
            window: None,
            table_cap: DEFAULT_TABLE_CAP,
            h: None,
            strict: false,
            format: OutputFormat::Json,
        }
    }

    fn residual_tol(&self) -> Result<f64, CliError> {
        resolve_tol(self.tol, DEFAULT_RESIDUAL_TOL)
    }

    fn spectral_tol(&self) -> Result<f64, CliError> {
        resolve_tol(self.rho_tol, DEFAULT_SPECTRAL_TOL)
    }
}

fn resolve_tol(flag: Option<f64>, default: f64) -> Result<f64, CliError> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(TOLERANCE_ENV_VAR) {
        Ok(raw) => raw
            .parse::<f64>()
            .map_err(|_| CliError::BadEnvTolerance(raw)),
        Err(_) => Ok(default),
    }
}

/// A parsed input document.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedInput {
    Lengths(RoseLengths),
    Sample(GroupSample),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Json,
    Csv,
}

#[derive(serde::Deserialize)]
struct JsonDocument {
    lengths: Option<Vec<f64>>,
    displacements: Option<Vec<f64>>,
    delta: Option<f64>,
}

/// Parses a length or displacement document.
///
/// JSON: `{"lengths": [..]}` or `{"displacements": [..], "delta": x}`.
/// CSV: one value per row under a `length` header, or under a
/// `delta,<value>` header for displacement samples.
pub fn parse_input(document: &str, format: InputFormat) -> Result<ParsedInput, CliError> {
    match format {
        InputFormat::Json => parse_json(document),
        InputFormat::Csv => parse_csv(document),
    }
}

fn schema(context: &str, message: impl Into<String>) -> CliError {
    CliError::Schema {
        context: context.to_string(),
        message: message.into(),
    }
}

fn parse_json(document: &str) -> Result<ParsedInput, CliError> {
    let doc: JsonDocument = serde_json::from_str(document)
        .map_err(|e| schema("document", e.to_string()))?;
    match (doc.lengths, doc.displacements, doc.delta) {
        (Some(lengths), None, None) => {
            let rose = RoseLengths::new(lengths).map_err(|e| schema("lengths", e.to_string()))?;
            Ok(ParsedInput::Lengths(rose))
        }
        (None, Some(displacements), Some(delta)) => {
            let sample = GroupSample::new(displacements, delta)
                .map_err(|e| schema("displacements", e.to_string()))?;
            Ok(ParsedInput::Sample(sample))
        }
        (None, Some(_), None) => Err(schema("delta", "missing field for displacement sample")),
        _ => Err(schema(
            "document",
            "expected either lengths, or displacements with delta",
        )),
    }
}

fn parse_csv(document: &str) -> Result<ParsedInput, CliError> {
    let mut lines = document.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| schema("document", "empty document"))?;
    let header_fields: Vec<&str> = header.split(',').map(str::trim).collect();

    let parse_value = |line_no: usize, line: &str| -> Result<f64, CliError> {
        line.trim()
            .parse::<f64>()
            .map_err(|_| schema(&format!("line {}", line_no + 1), format!("not a number: {line:?}")))
    };

    match header_fields.as_slice() {
        ["length"] => {
            let mut values = Vec::new();
            for (n, line) in lines {
                values.push(parse_value(n, line)?);
            }
            let rose = RoseLengths::new(values).map_err(|e| schema("length", e.to_string()))?;
            Ok(ParsedInput::Lengths(rose))
        }
        ["delta", raw] => {
            let delta = raw
                .parse::<f64>()
                .map_err(|_| schema("header", format!("delta is not a number: {raw:?}")))?;
            let mut values = Vec::new();
            for (n, line) in lines {
                values.push(parse_value(n, line)?);
            }
            let sample = GroupSample::new(values, delta)
                .map_err(|e| schema("displacements", e.to_string()))?;
            Ok(ParsedInput::Sample(sample))
        }
        _ => Err(schema(
            "header",
            format!("expected 'length' or 'delta,<value>', got {header:?}"),
        )),
    }
}

fn load_input(source: &InputSource) -> Result<ParsedInput, CliError> {
    match source {
        InputSource::Inline(InlineInput::Lengths(values)) => Ok(ParsedInput::Lengths(
            RoseLengths::new(values.clone()).map_err(|e| schema("lengths", e.to_string()))?,
        )),
        InputSource::Inline(InlineInput::Sample {
            displacements,
            delta,
        }) => Ok(ParsedInput::Sample(
            GroupSample::new(displacements.clone(), *delta)
                .map_err(|e| schema("displacements", e.to_string()))?,
        )),
        InputSource::Path(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let format = match path.extension().and_then(|e| e.to_str()) {
                Some("csv") => InputFormat::Csv,
                _ => InputFormat::Json,
            };
            parse_input(&text, format)
        }
    }
}

fn want_lengths(input: ParsedInput, command: &'static str) -> Result<RoseLengths, CliError> {
    match input {
        ParsedInput::Lengths(l) => Ok(l),
        ParsedInput::Sample(_) => Err(CliError::MissingArgument {
            command,
            what: "a lengths input, not a displacement sample",
        }),
    }
}

// ---------------------------------------------------------------------------
// Report documents. Rendering goes through serde_json::Value, which sorts
// keys; that is what makes reports byte-stable.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct InputEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub displacements: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl InputEcho {
    fn lengths(l: &RoseLengths) -> Self {
        Self {
            lengths: Some(l.lengths().to_vec()),
            displacements: None,
            delta: None,
        }
    }

    fn sample(s: &GroupSample) -> Self {
        Self {
            lengths: None,
            displacements: Some(s.displacements().to_vec()),
            delta: Some(s.delta()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub h: f64,
    pub residual: f64,
    pub bracket: [f64; 2],
    pub iterations: usize,
    pub method: String,
    pub tolerance: f64,
}

impl EntropyReport {
    fn from_solution(sol: &crate::types::EntropySolution, tolerance: f64) -> Self {
        Self {
            h: sol.h,
            residual: sol.residual,
            bracket: [sol.bracket_low, sol.bracket_high],
            iterations: sol.iterations,
            method: sol.method.as_str().to_string(),
            tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    /// Exact lengths used after rationalization, as decimals.
    pub lengths_used: Vec<f64>,
    pub integer_lengths: Vec<u64>,
    pub scale: u64,
    pub r_max: f64,
    pub step: f64,
    pub radii: Vec<f64>,
    /// Exact counts; decimal strings because they outgrow every float.
    pub counts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_gap: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyReport {
    pub delta: f64,
    pub sum_value: f64,
    pub satisfied: bool,
    pub delta_lower_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_displacement_bound: Option<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CollarDoc {
    pub h: f64,
    pub priors: Vec<f64>,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptotic_bound: Option<f64>,
    pub asymptotic_vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plugback_residual: Option<f64>,
}

impl CollarDoc {
    fn from_report(r: &crate::types::CollarReport) -> Self {
        Self {
            h: r.h,
            priors: r.prior_lengths.clone(),
            feasible: r.exact_bound.is_some(),
            exact_bound: r.exact_bound,
            asymptotic_bound: r.asymptotic_bound,
            asymptotic_vacuous: r.asymptotic_vacuous,
            comparison_bound: r.comparison_bound,
            margin: r.margin,
            plugback_residual: r.plugback_residual,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CombinedReport {
    pub entropy: EntropyReport,
    pub spectral: EntropyReport,
    pub cross_solver_gap: f64,
    pub census: CensusReport,
    pub certificate: CertifyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collar: Option<CollarDoc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope<T: Serialize> {
    pub command: String,
    pub input: InputEcho,
    pub results: T,
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

/// Runs one job and renders its report in the requested format.
pub fn run(config: &JobConfig) -> Result<String, CliError> {
    let input = load_input(&config.input)?;
    let value = match config.command {
        CommandKind::Entropy => {
            let lengths = want_lengths(input, "entropy")?;
            let tol = config.residual_tol()?;
            let sol = entropy::rose_entropy(&lengths, tol)?;
            envelope(config, InputEcho::lengths(&lengths), EntropyReport::from_solution(&sol, tol))?
        }
        CommandKind::Lim => {
            let lengths = want_lengths(input, "lim")?;
            let tol = config.spectral_tol()?;
            let sol = entropy::spectral_entropy(&lengths, tol)?;
            envelope(config, InputEcho::lengths(&lengths), EntropyReport::from_solution(&sol, tol))?
        }
        CommandKind::Census => {
            let lengths = want_lengths(input, "census")?;
            let r_max = config.r_max.ok_or(CliError::MissingArgument {
                command: "census",
                what: "--rmax",
            })?;
            let report = census_report(config, &lengths, r_max, config.window, None)?;
            envelope(config, InputEcho::lengths(&lengths), report)?
        }
        CommandKind::Certify => {
            let sample = match input {
                ParsedInput::Sample(s) => s,
                ParsedInput::Lengths(_) => {
                    return Err(CliError::MissingArgument {
                        command: "certify",
                        what: "a displacement sample with delta",
                    })
                }
            };
            let tol = config.residual_tol()?;
            let cert = bounds::certify(&sample, tol)?;
            let report = CertifyReport {
                delta: sample.delta(),
                sum_value: cert.sum_value,
                satisfied: cert.satisfied,
                delta_lower_bound: cert.delta_lower_bound,
                max_displacement_bound: cert.max_displacement_bound,
                tolerance: tol,
            };
            envelope(config, InputEcho::sample(&sample), report)?
        }
        CommandKind::Collar => {
            let priors = want_lengths(input, "collar")?;
            let h = config.h.ok_or(CliError::MissingArgument {
                command: "collar",
                what: "--h",
            })?;
            let report = bounds::collar_report(h, priors.lengths())?;
            if config.strict && report.exact_bound.is_none() {
                return Err(CliError::StrictInfeasible(format!(
                    "priors {:?} already exceed the growth budget at h = {h}",
                    priors.lengths()
                )));
            }
            if config.strict && report.asymptotic_bound.is_none() {
                return Err(CliError::StrictInfeasible(
                    "family asymptotic undefined (log argument nonpositive)".into(),
                ));
            }
            envelope(config, InputEcho::lengths(&priors), CollarDoc::from_report(&report))?
        }
        CommandKind::Report => {
            let lengths = want_lengths(input, "report")?;
            let report = combined_report(config, &lengths)?;
            envelope(config, InputEcho::lengths(&lengths), report)?
        }
    };
    Ok(value)
}

fn envelope<T: Serialize>(
    config: &JobConfig,
    input: InputEcho,
    results: T,
) -> Result<String, CliError> {
    let doc = ReportEnvelope {
        command: config.command.name().to_string(),
        input,
        results,
    };
    let json = serde_json::to_value(&doc).expect("report serialization is infallible");
    Ok(match config.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&json).expect("valid json");
            s.push('\n');
            s
        }
        OutputFormat::Csv => render_csv(&json),
        OutputFormat::Plain => render_plain(&json),
    })
}

fn census_report(
    config: &JobConfig,
    lengths: &RoseLengths,
    r_max: f64,
    window: Option<(f64, f64)>,
    entropy_reference: Option<f64>,
) -> Result<CensusReport, CliError> {
    let scaled = ScaledLengths::from_decimal(lengths.lengths(), config.scale)?;
    let t_max = (r_max * scaled.scale() as f64 + 1e-9).floor();
    if t_max < 1.0 {
        return Err(CensusError::StepBeyondRadius.into());
    }
    let step_scaled = (config.step * scaled.scale() as f64).round().max(1.0) as u64;
    let curve = census::census_curve_scaled(&scaled, t_max as u64, step_scaled, config.table_cap)?;
    let growth_rate = window
        .map(|w| census::growth_rate_estimate(&curve, w))
        .transpose()?;
    let relative_gap = match (growth_rate, entropy_reference) {
        (Some(g), Some(h)) if h > 0.0 => Some((g - h).abs() / h),
        _ => None,
    };
    Ok(CensusReport {
        lengths_used: scaled.realized_lengths(),
        integer_lengths: scaled.integer_lengths().to_vec(),
        scale: scaled.scale(),
        r_max: t_max / scaled.scale() as f64,
        step: step_scaled as f64 / scaled.scale() as f64,
        radii: (0..curve.len()).map(|i| curve.radius(i)).collect(),
        counts: curve.counts().iter().map(|c| c.to_string()).collect(),
        window: window.map(|(a, b)| [a, b]),
        growth_rate,
        entropy_reference,
        relative_gap,
    })
}

/// The combined document: both entropy routes, a census slope over the
/// outer half-window, the certificate at `delta = h`, and the collar
/// picture with the largest length in the role of the bounded one.
fn combined_report(config: &JobConfig, lengths: &RoseLengths) -> Result<CombinedReport, CliError> {
    let tol = config.residual_tol()?;
    let rho_tol = config.spectral_tol()?;
    let sol = entropy::rose_entropy(lengths, tol)?;

    let spectral = if lengths.k() >= 2 {
        entropy::spectral_entropy(lengths, rho_tol)?
    } else {
        sol.clone()
    };

    // Census over radii reaching ~30/h, so the window spans a growth factor
    // of about e^15; snap to the scaled integer grid and keep it even.
    let scaled = ScaledLengths::from_decimal(lengths.lengths(), config.scale)?;
    let h_realized = if sol.h > 0.0 { sol.h } else { 1.0 };
    let default_t_max = (30.0 * scaled.scale() as f64 / h_realized).ceil() as u64;
    let t_max = match config.r_max {
        Some(r) => (r * scaled.scale() as f64 + 1e-9).floor() as u64,
        None => default_t_max,
    }
    .max(2);
    let t_max = t_max + (t_max & 1); // even, so the half-window is on grid
    let t_half = t_max / 2;
    let curve = census::census_curve_scaled(&scaled, t_max, t_half, config.table_cap)?;
    let window = (
        t_half as f64 / scaled.scale() as f64,
        t_max as f64 / scaled.scale() as f64,
    );
    let entropy_reference = entropy::rose_entropy(
        &RoseLengths::new(scaled.realized_lengths()).expect("realized lengths are positive"),
        tol,
    )?
    .h;
    let growth_rate = census::growth_rate_estimate(&curve, window)?;
    let census_doc = CensusReport {
        lengths_used: scaled.realized_lengths(),
        integer_lengths: scaled.integer_lengths().to_vec(),
        scale: scaled.scale(),
        r_max: window.1,
        step: t_half as f64 / scaled.scale() as f64,
        radii: (0..curve.len()).map(|i| curve.radius(i)).collect(),
        counts: curve.counts().iter().map(|c| c.to_string()).collect(),
        window: Some([window.0, window.1]),
        growth_rate: Some(growth_rate),
        entropy_reference: Some(entropy_reference),
        relative_gap: if entropy_reference > 0.0 {
            Some((growth_rate - entropy_reference).abs() / entropy_reference)
        } else {
            None
        },
    };

    let sample = GroupSample::new(lengths.lengths().to_vec(), sol.h)
        .map_err(|e| schema("lengths", e.to_string()))?;
    let cert = bounds::certify(&sample, tol)?;
    let certificate = CertifyReport {
        delta: sol.h,
        sum_value: cert.sum_value,
        satisfied: cert.satisfied,
        delta_lower_bound: cert.delta_lower_bound,
        max_displacement_bound: cert.max_displacement_bound,
        tolerance: tol,
    };

    // Collar view: the k-1 shortest lengths as priors for the largest.
    let collar = if lengths.k() >= 2 && sol.h > 0.0 {
        let mut sorted = lengths.lengths().to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted.pop();
        Some(CollarDoc::from_report(&bounds::collar_report(
            sol.h, &sorted,
        )?))
    } else {
        None
    };

    Ok(CombinedReport {
        entropy: EntropyReport::from_solution(&sol, tol),
        spectral: EntropyReport::from_solution(&spectral, rho_tol),
        cross_solver_gap: (sol.h - spectral.h).abs(),
        census: census_doc,
        certificate,
        collar,
    })
}

// ---------------------------------------------------------------------------
// Flat renderers for csv and plain output
// ---------------------------------------------------------------------------

fn flatten(prefix: &str, value: &serde_json::Value, out: &mut Vec<(String, String)>) {
    match value {
        serde_json::Value::Object(map) => {
            for (key, v) in map {
                let next = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{prefix}.{key}")
                };
                flatten(&next, v, out);
            }
        }
        serde_json::Value::Array(items) => {
            let rendered: Vec<String> = items.iter().map(render_scalar).collect();
            out.push((prefix.to_string(), rendered.join(";")));
        }
        other => out.push((prefix.to_string(), render_scalar(other))),
    }
}

fn render_scalar(value: &serde_json::Value) -> String {
    match value {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_csv(json: &serde_json::Value) -> String {
    let mut rows = Vec::new();
    flatten("", json, &mut rows);
    let mut s = String::from("field,value\n");
    for (key, value) in rows {
        let quoted = if value.contains(',') || value.contains('"') {
            format!("\"{}\"", value.replace('"', "\"\""))
        } else {
            value
        };
        s.push_str(&format!("{key},{quoted}\n"));
    }
    s
}

fn render_plain(json: &serde_json::Value) -> String {
    let mut rows = Vec::new();
    flatten("", json, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (key, value) in rows {
        s.push_str(&format!("{key:<width$}  {value}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lengths_config(command: CommandKind, values: &[f64]) -> JobConfig {
        JobConfig::new(
            command,
            InputSource::Inline(InlineInput::Lengths(values.to_vec())),
        )
    }

    #[test]
    fn parse_json_lengths() {
        let parsed = parse_input(r#"{"lengths": [1.0, 2.0]}"#, InputFormat::Json).unwrap();
        assert_eq!(
            parsed,
            ParsedInput::Lengths(RoseLengths::new(vec![1.0, 2.0]).unwrap())
        );
    }

    #[test]
    fn parse_json_sample() {
        let parsed = parse_input(
            r#"{"displacements": [1.0, 2.0], "delta": 0.7}"#,
            InputFormat::Json,
        )
        .unwrap();
        assert_eq!(
            parsed,
            ParsedInput::Sample(GroupSample::new(vec![1.0, 2.0], 0.7).unwrap())
        );
    }

    #[test]
    fn parse_json_negative_length_names_field() {
        let err = parse_input(r#"{"lengths": [1.0, -2.0]}"#, InputFormat::Json).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("lengths"), "{msg}");
        assert!(msg.contains("index 1"), "{msg}");
    }

    #[test]
    fn parse_json_rejects_mixed_documents() {
        assert!(parse_input(
            r#"{"lengths": [1.0], "displacements": [1.0], "delta": 1.0}"#,
            InputFormat::Json
        )
        .is_err());
        assert!(parse_input(r#"{"displacements": [1.0]}"#, InputFormat::Json).is_err());
    }

    #[test]
    fn parse_csv_lengths() {
        let parsed = parse_input("length\n1.0\n2.0\n", InputFormat::Csv).unwrap();
        assert_eq!(
            parsed,
            ParsedInput::Lengths(RoseLengths::new(vec![1.0, 2.0]).unwrap())
        );
    }

    #[test]
    fn parse_csv_sample_with_delta_header() {
        let parsed = parse_input("delta,0.5\n1.0\n2.5\n", InputFormat::Csv).unwrap();
        assert_eq!(
            parsed,
            ParsedInput::Sample(GroupSample::new(vec![1.0, 2.5], 0.5).unwrap())
        );
    }

    #[test]
    fn parse_csv_bad_row_names_line() {
        let err = parse_input("length\n1.0\nbogus\n", InputFormat::Csv).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn entropy_command_reports_symmetric_root() {
        let out = run(&lengths_config(CommandKind::Entropy, &[1.0, 1.0])).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        let h = doc["results"]["h"].as_f64().unwrap();
        assert!((h - 3.0_f64.ln()).abs() < 1e-10);
        assert!(doc["results"]["residual"].as_f64().unwrap().abs() < 1e-12);
        assert_eq!(doc["command"], "entropy");
    }

    #[test]
    fn census_command_slope_close_to_log3() {
        let mut config = lengths_config(CommandKind::Census, &[1.0, 1.0]);
        config.r_max = Some(20.0);
        config.window = Some((10.0, 20.0));
        let out = run(&config).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        let slope = doc["results"]["growth_rate"].as_f64().unwrap();
        assert!((slope - 3.0_f64.ln()).abs() / 3.0_f64.ln() < 0.01);
        assert_eq!(doc["results"]["counts"][0], "5");
    }

    #[test]
    fn collar_command_reports_bounds_and_residual() {
        let mut config = lengths_config(CommandKind::Collar, &[1.0, 2.0]);
        config.h = Some(1.0);
        let out = run(&config).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(doc["results"]["feasible"].as_bool().unwrap());
        assert!(doc["results"]["exact_bound"].as_f64().is_some());
        assert!(doc["results"]["asymptotic_bound"].as_f64().is_some());
        assert!(doc["results"]["plugback_residual"].as_f64().unwrap().abs() < 1e-12);
    }

    #[test]
    fn collar_strict_infeasible_is_exit_three() {
        let mut config = lengths_config(CommandKind::Collar, &[0.01, 0.01]);
        config.h = Some(1.0);
        config.strict = true;
        let err = run(&config).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn solver_failure_is_exit_two() {
        // A sub-f64 tolerance is unreachable unless the residual lattice
        // happens to contain exact zero; for these lengths it does not.
        let mut config = lengths_config(CommandKind::Entropy, &[5.0, 11.0]);
        config.tol = Some(1e-300);
        let err = run(&config).unwrap_err();
        assert!(matches!(err, CliError::Solver(_)), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn exit_codes_partition_error_classes() {
        use crate::entropy::EntropyError;
        use crate::types::ValidationError;
        assert_eq!(CliError::Validation(ValidationError::EmptyLengths).exit_code(), 1);
        let solver = CliError::Solver(EntropyError::PowerIterationStalled { iterations: 1 });
        assert_eq!(solver.exit_code(), 2);
        assert_eq!(CliError::StrictInfeasible("x".into()).exit_code(), 3);
    }

    #[test]
    fn validation_failure_is_exit_one() {
        let err = run(&lengths_config(CommandKind::Entropy, &[1.0, -1.0])).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn reports_are_deterministic() {
        let mut config = lengths_config(CommandKind::Report, &[1.0, 2.0]);
        config.format = OutputFormat::Json;
        let a = run(&config).unwrap();
        let b = run(&config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn report_input_echo_round_trips() {
        let out = run(&lengths_config(CommandKind::Entropy, &[1.5, 2.5])).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        let echoed = serde_json::to_string(&doc["input"]).unwrap();
        let parsed = parse_input(&echoed, InputFormat::Json).unwrap();
        assert_eq!(
            parsed,
            ParsedInput::Lengths(RoseLengths::new(vec![1.5, 2.5]).unwrap())
        );
    }

    #[test]
    fn csv_and_plain_renderers_flatten() {
        let mut config = lengths_config(CommandKind::Entropy, &[1.0, 1.0]);
        config.format = OutputFormat::Csv;
        let csv = run(&config).unwrap();
        assert!(csv.starts_with("field,value\n"));
        assert!(csv.contains("results.h,"));
        config.format = OutputFormat::Plain;
        let plain = run(&config).unwrap();
        assert!(plain.contains("results.h"));
    }

    #[test]
    fn combined_report_contains_all_sections() {
        let out = run(&lengths_config(CommandKind::Report, &[1.0, 2.0])).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        let results = &doc["results"];
        assert!(results["entropy"]["h"].as_f64().is_some());
        assert!(results["spectral"]["h"].as_f64().is_some());
        assert!(results["cross_solver_gap"].as_f64().unwrap() < 1e-8);
        assert!(results["census"]["growth_rate"].as_f64().is_some());
        assert!(results["census"]["relative_gap"].as_f64().unwrap() < 0.02);
        assert!((results["certificate"]["sum_value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
        assert!(results["collar"]["exact_bound"].as_f64().is_some());
    }
}
