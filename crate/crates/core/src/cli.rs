//! Command-line front end: JSON state files in, one JSON report out.
//!
//! Exit codes: 0 positive verdict (ppt / separable / ensemble produced),
//! 1 negative verdict, 2 marginal, 3 error.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::decompose::{separable_ensemble, SeparableEnsemble};
use crate::error::{Error, Result};
use crate::linalg::{PsdStatus, Tolerances, DEFAULT_PSD_TOL, DEFAULT_RESIDUAL_TOL};
use crate::moment::{is_separable, SeparabilityStatus, SeparabilityVerdict};
use crate::oracle::{dense_ppt_check, TransposeMask};
use crate::ppt::{is_m_ppt, PptReport, PptVerdict};
use crate::states::{build_state, StateSpec};
use crate::witnesses::WitnessSpec;

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_MARGINAL: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

/// A coefficient as written in the input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonCoefficient {
    Number(f64),
    Text(String),
}

impl JsonCoefficient {
    /// Strings are read as exact rationals (`"1/9"`, `"3"`) and fall back to
    /// decimal notation.
    pub fn value(&self) -> Result<f64> {
        match self {
            Self::Number(x) => Ok(*x),
            Self::Text(s) => {
                let s = s.trim();
                if let Ok(r) = s.parse::<Ratio<i64>>() {
                    return Ok(*r.numer() as f64 / *r.denom() as f64);
                }
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("cannot read coefficient {s:?}")))
            }
        }
    }
}

/// On-disk state description `{"N": .., "d": .., "p": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonStateSpec {
    #[serde(rename = "N")]
    pub parties: usize,
    #[serde(rename = "d")]
    pub local_dim: usize,
    #[serde(rename = "p")]
    pub coeffs: Vec<JsonCoefficient>,
}

impl JsonStateSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.to_spec()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_spec(&self) -> Result<StateSpec> {
        let coeffs = self
            .coeffs
            .iter()
            .map(JsonCoefficient::value)
            .collect::<Result<Vec<_>>>()?;
        StateSpec::new(self.parties, self.local_dim, coeffs)
    }
}

impl From<&StateSpec> for JsonStateSpec {
    fn from(spec: &StateSpec) -> Self {
        Self {
            parties: spec.parties(),
            local_dim: spec.local_dim(),
            coeffs: spec
                .coeffs()
                .iter()
                .map(|&x| JsonCoefficient::Number(x))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Ensemble(SeparableEnsemble),
    Witness(WitnessSpec),
}

/// Fast-path verdict for the same partial transpose.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FastPathComparison {
    pub m: usize,
    pub verdict: PptVerdict,
    pub agreement: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub mask: String,
    pub dim: usize,
    pub status: PsdStatus,
    pub min_eigenvalue: Option<f64>,
    pub max_eigenvalue: Option<f64>,
    /// Present when the mask weight is strictly between 0 and N.
    pub fast_path: Option<FastPathComparison>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub compute_ms: f64,
    pub total_ms: f64,
}

/// The single JSON document printed by every command. All keys are always
/// present, in this order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: String,
    pub input: Option<JsonStateSpec>,
    pub tolerances: Tolerances,
    pub verdict: Option<String>,
    pub exit_code: i32,
    pub ppt: Option<PptReport>,
    pub separability: Option<SeparabilityVerdict>,
    pub certificate: Option<Certificate>,
    pub oracle: Option<OracleReport>,
    pub timings: Timings,
    pub error: Option<String>,
}

impl Report {
    fn new(command: &str, tol: Tolerances) -> Self {
        Self {
            tool: ToolInfo::default(),
            command: command.to_string(),
            input: None,
            tolerances: tol,
            verdict: None,
            exit_code: EXIT_ERROR,
            ppt: None,
            separability: None,
            certificate: None,
            oracle: None,
            timings: Timings::default(),
            error: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON state file `{"N": .., "d": .., "p": [..]}`.
    pub spec_file: PathBuf,
    /// Relative PSD band; also the residual bound unless --residual-tol is given.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Relative bound on moment residuals.
    #[arg(long)]
    pub residual_tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl CommonArgs {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            psd: self.tol.unwrap_or(DEFAULT_PSD_TOL),
            residual: self
                .residual_tol
                .or(self.tol)
                .unwrap_or(DEFAULT_RESIDUAL_TOL),
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Decide m-PPT through the Hankel blocks.
    CheckPpt {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of transposed parties; defaults to floor(N/2).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Decide full separability through the moment Hankels.
    CheckSeparable {
        #[command(flatten)]
        common: CommonArgs,
        /// Attach a separable ensemble or a detecting witness.
        #[arg(long)]
        certificate: bool,
        /// Rescale the ensemble to unit-trace product terms.
        #[arg(long)]
        normalize: bool,
    },
    /// Dense partial-transpose check under an arbitrary mask.
    OracleVerify {
        #[command(flatten)]
        common: CommonArgs,
        /// Bitstring of transposed parties, e.g. 100; defaults to the first floor(N/2).
        #[arg(long)]
        mask: Option<String>,
    },
    /// Produce an explicit product ensemble for a separable state.
    Decompose {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        normalize: bool,
    },
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "dsym",
    version,
    about = "Classify diagonal restricted-Dicke states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CheckPpt { .. } => "check-ppt",
            Self::CheckSeparable { .. } => "check-separable",
            Self::OracleVerify { .. } => "oracle-verify",
            Self::Decompose { .. } => "decompose",
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Self::CheckPpt { common, .. }
            | Self::CheckSeparable { common, .. }
            | Self::OracleVerify { common, .. }
            | Self::Decompose { common, .. } => common,
        }
    }
}

fn ppt_code(v: PptVerdict) -> (i32, &'static str) {
    match v {
        PptVerdict::Ppt => (EXIT_POSITIVE, "ppt"),
        PptVerdict::NotPpt => (EXIT_NEGATIVE, "not-ppt"),
        PptVerdict::Marginal => (EXIT_MARGINAL, "marginal"),
    }
}

fn separability_code(v: SeparabilityStatus) -> (i32, &'static str) {
    match v {
        SeparabilityStatus::Separable => (EXIT_POSITIVE, "separable"),
        SeparabilityStatus::Entangled => (EXIT_NEGATIVE, "entangled"),
        SeparabilityStatus::Marginal => (EXIT_MARGINAL, "marginal"),
    }
}

fn ensemble(spec: &StateSpec, tol: Tolerances, normalize: bool) -> Result<SeparableEnsemble> {
    let e = separable_ensemble(spec, tol)?;
    Ok(if normalize { e.normalized() } else { e })
}

fn execute(command: &Command, spec: &StateSpec, report: &mut Report) -> Result<()> {
    let tol = report.tolerances;
    let (code, verdict) = match command {
        Command::CheckPpt { m, .. } => {
            let m = m.unwrap_or(spec.parties() / 2);
            let r = is_m_ppt(spec, m, tol.psd)?;
            let out = ppt_code(r.verdict);
            report.ppt = Some(r);
            out
        }
        Command::CheckSeparable {
            certificate,
            normalize,
            ..
        } => {
            let v = is_separable(spec, tol)?;
            let out = separability_code(v.verdict);
            if *certificate {
                report.certificate = match v.verdict {
                    SeparabilityStatus::Separable => {
                        Some(Certificate::Ensemble(ensemble(spec, tol, *normalize)?))
                    }
                    SeparabilityStatus::Entangled => v.witness.clone().map(Certificate::Witness),
                    SeparabilityStatus::Marginal => None,
                };
            }
            report.separability = Some(v);
            out
        }
        Command::OracleVerify { mask, .. } => {
            let n = spec.parties();
            let mask = match mask {
                Some(s) => TransposeMask::parse(s)?,
                None => TransposeMask::first(n / 2, n),
            };
            let rho = build_state(spec)?;
            let dense = dense_ppt_check(&rho, &mask, tol.psd)?;
            let w = mask.weight();
            let fast_path = if w > 0 && w < n {
                let m = w.min(n - w);
                let r = is_m_ppt(spec, m, tol.psd)?;
                Some(FastPathComparison {
                    m,
                    verdict: r.verdict,
                    agreement: PptVerdict::from(dense.status) == r.verdict,
                })
            } else {
                None
            };
            if let Some(f) = fast_path.as_ref().filter(|f| !f.agreement) {
                eprintln!(
                    "dsym: dense verdict {:?} disagrees with fast path {:?} (m = {})",
                    dense.status, f.verdict, f.m
                );
            }
            let out = ppt_code(dense.status.into());
            report.oracle = Some(OracleReport {
                mask: mask.to_string(),
                dim: dense.dim,
                status: dense.status,
                min_eigenvalue: dense.min_eigenvalue,
                max_eigenvalue: dense.max_eigenvalue,
                fast_path,
            });
            out
        }
        Command::Decompose { normalize, .. } => {
            let v = is_separable(spec, tol)?;
            let out = match v.verdict {
                SeparabilityStatus::Separable => {
                    report.certificate =
                        Some(Certificate::Ensemble(ensemble(spec, tol, *normalize)?));
                    (EXIT_POSITIVE, "separable")
                }
                other => separability_code(other),
            };
            report.separability = Some(v);
            out
        }
    };
    report.exit_code = code;
    report.verdict = Some(verdict.to_string());
    Ok(())
}

/// Run one command on an already parsed input.
pub fn run_on(command: &Command, input: JsonStateSpec) -> Report {
    let start = Instant::now();
    let mut report = Report::new(command.name(), command.common().tolerances());
    let result = input.to_spec().and_then(|spec| {
        report.input = Some(input);
        execute(command, &spec, &mut report)
    });
    if let Err(e) = result {
        report.exit_code = EXIT_ERROR;
        report.verdict = None;
        report.error = Some(e.to_string());
    }
    report.timings.compute_ms = start.elapsed().as_secs_f64() * 1e3;
    report.timings.total_ms = report.timings.compute_ms;
    report
}

/// Read the spec file and run the command.
pub fn run(command: &Command) -> Report {
    let start = Instant::now();
    match JsonStateSpec::from_file(&command.common().spec_file) {
        Ok(input) => {
            let parse_ms = start.elapsed().as_secs_f64() * 1e3;
            let mut report = run_on(command, input);
            report.timings.parse_ms = parse_ms;
            report.timings.total_ms = start.elapsed().as_secs_f64() * 1e3;
            report
        }
        Err(e) => {
            let mut report = Report::new(command.name(), command.common().tolerances());
            report.error = Some(e.to_string());
            report.timings.total_ms = start.elapsed().as_secs_f64() * 1e3;
            report
        }
    }
}

/// Parse arguments, print the report to stdout and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_POSITIVE
            };
            let _ = e.print();
            return code;
        }
    };
    let report = run(&cli.command);
    if let Some(err) = &report.error {
        eprintln!("dsym: {err}");
    }
    println!("{}", report.to_json());
    report.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    const COUNTEREXAMPLE: &str =
        r#"{"N": 3, "d": 3, "p": [1, "1/4", "1/8", "1/9", "1/8", "1/4", 1]}"#;

    fn common() -> CommonArgs {
        CommonArgs {
            spec_file: PathBuf::new(),
            tol: None,
            residual_tol: None,
            format: Format::Json,
        }
    }

    #[test]
    fn rational_strings() {
        assert_eq!(
            JsonCoefficient::Text("1/9".into()).value().unwrap(),
            1.0 / 9.0
        );
        assert_eq!(JsonCoefficient::Text("3".into()).value().unwrap(), 3.0);
        assert_eq!(JsonCoefficient::Text(" 0.25".into()).value().unwrap(), 0.25);
        assert_eq!(JsonCoefficient::Text("2/4".into()).value().unwrap(), 0.5);
        assert!(JsonCoefficient::Text("1/0".into()).value().is_err());
        assert!(JsonCoefficient::Text("abc".into()).value().is_err());
    }

    #[test]
    fn parse_validates_length() {
        let spec = JsonStateSpec::from_json(COUNTEREXAMPLE)
            .unwrap()
            .to_spec()
            .unwrap();
        assert_eq!(spec.coeffs()[3], 1.0 / 9.0);
        assert!(matches!(
            JsonStateSpec::from_json(r#"{"N": 3, "d": 3, "p": [1, 2]}"#),
            Err(Error::LengthMismatch {
                expected: 7,
                got: 2
            })
        ));
        assert!(JsonStateSpec::from_json(r#"{"N": 2, "d": 2, "p": [1, -1, 1]}"#).is_err());
        assert!(JsonStateSpec::from_json(r#"{"N": 2, "d": 2}"#).is_err());
    }

    #[test]
    fn counterexample_commands() {
        let input = JsonStateSpec::from_json(COUNTEREXAMPLE).unwrap();
        let ppt = run_on(
            &Command::CheckPpt {
                common: common(),
                m: Some(1),
            },
            input.clone(),
        );
        assert_eq!(ppt.exit_code, EXIT_POSITIVE);
        assert_eq!(ppt.ppt.as_ref().unwrap().blocks.len(), 3);
        let sep = run_on(
            &Command::CheckSeparable {
                common: common(),
                certificate: true,
                normalize: false,
            },
            input.clone(),
        );
        assert_eq!(sep.exit_code, EXIT_NEGATIVE);
        assert!(matches!(sep.certificate, Some(Certificate::Witness(_))));
        let dec = run_on(
            &Command::Decompose {
                common: common(),
                normalize: false,
            },
            input,
        );
        assert_eq!(dec.exit_code, EXIT_NEGATIVE);
        assert!(dec.certificate.is_none());
    }

    #[test]
    fn bad_m_is_an_error() {
        let input = JsonStateSpec::from_json(COUNTEREXAMPLE).unwrap();
        let r = run_on(
            &Command::CheckPpt {
                common: common(),
                m: Some(2),
            },
            input,
        );
        assert_eq!(r.exit_code, EXIT_ERROR);
        assert!(r.error.is_some());
        assert!(r.verdict.is_none());
    }

    #[test]
    fn oracle_masks() {
        let input = JsonStateSpec::from_json(COUNTEREXAMPLE).unwrap();
        for mask in ["100", "001", "010"] {
            let r = run_on(
                &Command::OracleVerify {
                    common: common(),
                    mask: Some(mask.into()),
                },
                input.clone(),
            );
            assert_eq!(r.exit_code, EXIT_POSITIVE, "{mask}");
            let o = r.oracle.unwrap();
            assert!(o.fast_path.unwrap().agreement);
            assert!(o.min_eigenvalue.unwrap() >= -1e-10);
        }
    }

    #[test]
    fn report_keys_are_stable() {
        let input = JsonStateSpec::from_json(r#"{"N": 2, "d": 2, "p": [1, 0, 1]}"#).unwrap();
        let r = run_on(
            &Command::CheckPpt {
                common: common(),
                m: None,
            },
            input,
        );
        let text = r.to_json();
        let keys: Vec<&str> = text
            .lines()
            .filter_map(|l| l.strip_prefix("  \""))
            .filter_map(|l| l.split('"').next())
            .collect();
        assert_eq!(
            keys,
            [
                "tool",
                "command",
                "input",
                "tolerances",
                "verdict",
                "exit_code",
                "ppt",
                "separability",
                "certificate",
                "oracle",
                "timings",
                "error"
            ]
        );
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["verdict"], "ppt");
        assert_eq!(v["ppt"]["verdict"], "ppt");
    }

    #[test]
    fn single_tol_flag_sets_both() {
        let mut c = common();
        c.tol = Some(1e-7);
        assert_eq!(
            c.tolerances(),
            Tolerances {
                psd: 1e-7,
                residual: 1e-7
            }
        );
        c.residual_tol = Some(1e-5);
        assert_eq!(
            c.tolerances(),
            Tolerances {
                psd: 1e-7,
                residual: 1e-5
            }
        );
        assert_eq!(common().tolerances(), Tolerances::default());
    }
}
