//! Command-line front end.
//!
//! Every command emits one document: JSON `{command, spec, records, passed?}`
//! or CSV with one header row and one row per record. Exit codes: 0 ok,
//! 1 a check failed, 2 bad input.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::calculus::{calculus_suite, jackson_integral, rpq_derivative, PowerSeries};
use crate::coherent::{
    coherent_vector, eigenstate_residual, fubini_metric, mandel_q, moment_check, overlap, photon_statistics,
};
use crate::error::{Result, RpqError};
use crate::fock::{algebra_residuals, jacobi_diagnostics};
use crate::hopf::{hopf_axiom_suite, HopfSpec};
use crate::numbers::{number_identity_suite, rpq_factorial, rpq_number};
use crate::parallel::{map_slice, Exec};
use crate::polynomials::{
    builtin_phis, hermite_continuous, hermite_recursion_check, psi_ladder_check, rs_direct, rs_recursive,
};
use crate::report::Report;
use crate::spec::{DeformationSpec, Kind, PrecisionPolicy};
use crate::special::{
    bessel_identity_suite, exp_derivative_residual, exp_difference_residual, exp_series, oscillator_solution_check,
    pq_bessel, pq_binomial_theorem_check, radius_estimate, rpq_exp, rpq_trig, trig_series, BesselKind,
    SeriesEvalConfig, Trig,
};
use crate::structure::{builtin_phi, fg_consistency_check};

#[derive(Debug, Parser)]
#[command(name = "rpq", version, about = "R(p,q)-deformed quantum algebra toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Deformation spec (JSON).
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Complex argument as `re,im` or `re`.
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Option<Complex64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Overrides the gating tolerance of check commands.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Output {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// R(p,q)-number and factorial at `--n`.
    Numbers,
    /// Structure function values for 0..=n.
    Phi,
    /// Derivative of `--coeffs` (or of z^n).
    Derive {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<f64>,
    },
    /// Jackson-type integral of x^n over [0, a].
    Integrate {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Deformed exponential at `--z`.
    Exp,
    /// Deformed trigonometric function at `--z`.
    Trig {
        #[arg(long, value_enum, default_value_t = Trig::Cos)]
        which: Trig,
    },
    /// (p,q)-Bessel function, or the identity suite with `--suite`.
    Bessel {
        #[arg(long, value_enum, default_value_t = BesselKind::First)]
        kind: BesselKind,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        s: f64,
        #[arg(long)]
        suite: bool,
    },
    /// Fock-space algebra residuals.
    Fock,
    /// Coherent-state statistics.
    Coherent,
    /// Rogers-Szegő coefficients by both constructions.
    RsPoly,
    /// Continuous Hermite values.
    Hermite,
    /// Hopf axiom residuals.
    HopfCheck {
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<f64>,
    },
    /// Every identity suite, one line per suite.
    VerifyAll,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Numbers => "numbers",
            Command::Phi => "phi",
            Command::Derive { .. } => "derive",
            Command::Integrate { .. } => "integrate",
            Command::Exp => "exp",
            Command::Trig { .. } => "trig",
            Command::Bessel { .. } => "bessel",
            Command::Fock => "fock",
            Command::Coherent => "coherent",
            Command::RsPoly => "rs-poly",
            Command::Hermite => "hermite",
            Command::HopfCheck { .. } => "hopf-check",
            Command::VerifyAll => "verify-all",
        }
    }

    /// Numeric flags the command reads; any other one is rejected.
    fn accepts(&self) -> &'static [&'static str] {
        match self {
            Command::Numbers | Command::Phi | Command::Derive { .. } | Command::Integrate { .. } | Command::RsPoly => {
                &["n"]
            }
            Command::Exp | Command::Trig { .. } => &["z"],
            Command::Bessel { .. } => &["z", "tol"],
            Command::Fock | Command::HopfCheck { .. } => &["dim", "tol"],
            Command::Coherent => &["z", "dim"],
            Command::Hermite => &["n", "theta"],
            Command::VerifyAll => &["tol"],
        }
    }
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err("expected `re,im`".into()),
    }
}

/// The document a command emits.
#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub command: String,
    pub spec: Value,
    pub records: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

impl Document {
    pub fn render(&self, output: Output) -> String {
        match output {
            Output::Json => serde_json::to_string_pretty(self).expect("document serializes"),
            Output::Csv => records_to_csv(&self.records),
        }
    }
}

fn records_to_csv(records: &[Value]) -> String {
    let mut keys: Vec<&String> = Vec::new();
    for k in records.iter().filter_map(Value::as_object).flat_map(Map::keys) {
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&keys).expect("in-memory write");
    for r in records {
        let row = keys.iter().map(|k| match r.get(k.as_str()) {
            None | Some(Value::Null) => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(v) => v.to_string(),
        });
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

/// Structured error record for exit code 2.
pub fn error_record(e: &RpqError) -> Value {
    let kind = match e {
        RpqError::Domain(_) => "domain",
        RpqError::Range(_) => "range",
        RpqError::DivisionByZero(_) => "division_by_zero",
        RpqError::UnsupportedKind { .. } => "unsupported_kind",
        RpqError::OverflowRisk(_) => "overflow_risk",
        RpqError::NonConvergent(_) => "non_convergent",
        RpqError::OutsideRadius { .. } => "outside_radius",
        RpqError::PoleHit(_) => "pole_hit",
        RpqError::PhiConditionViolated { .. } => "phi_condition_violated",
        RpqError::UndefinedQ => "undefined_q",
        RpqError::Config(_) => "config",
    };
    json!({ "error": { "kind": kind, "message": e.to_string() } })
}

/// Parses `args`, runs the command and returns `(exit code, output)`.
pub fn run_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match run(&cli) {
        Ok(doc) => {
            let code = if doc.passed == Some(false) { 1 } else { 0 };
            (code, doc.render(cli.common.output))
        }
        Err(e) => (2, serde_json::to_string_pretty(&error_record(&e)).expect("record serializes")),
    }
}

fn check_flags(cmd: &Command, c: &Common) -> Result<()> {
    let given = [
        ("n", c.n.is_some()),
        ("dim", c.dim.is_some()),
        ("z", c.z.is_some()),
        ("theta", c.theta.is_some()),
        ("tol", c.tol.is_some()),
    ];
    for (name, set) in given {
        if set && !cmd.accepts().contains(&name) {
            return Err(RpqError::Config(format!("--{name} is not used by `{}`", cmd.name())));
        }
    }
    if let Some(t) = c.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(RpqError::Config(format!("--tol must be positive, got {t}")));
        }
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Document> {
    let c = &cli.common;
    check_flags(&cli.command, c)?;
    let path = c.spec.as_ref().ok_or_else(|| RpqError::Config("--spec <path> is required".into()))?;
    let spec = DeformationSpec::from_path(path)?;
    let cfg = SeriesEvalConfig::default();
    let mut passed = None;
    let records = match &cli.command {
        Command::Numbers => {
            let n = c.n.unwrap_or(1);
            let fact = rpq_factorial(&spec, n, &PrecisionPolicy::default())?;
            vec![json!({ "n": n, "value": rpq_number(&spec, n)?, "factorial": fact })]
        }
        Command::Phi => (0..=c.n.unwrap_or(8))
            .map(|n| Ok(json!({ "n": n, "phi": builtin_phi(&spec, n)?, "number": rpq_number(&spec, n)? })))
            .collect::<Result<_>>()?,
        Command::Derive { coeffs } => {
            let f = match (coeffs.is_empty(), c.n) {
                (false, None) => PowerSeries::from_real(coeffs),
                (true, Some(n)) => PowerSeries::monomial(n),
                (true, None) => return Err(RpqError::Config("derive needs --coeffs or --n".into())),
                (false, Some(_)) => return Err(RpqError::Config("--coeffs and --n are mutually exclusive".into())),
            };
            complex_records(rpq_derivative(&spec, &f)?.coeffs())
        }
        Command::Integrate { a } => {
            let n = c.n.unwrap_or(1);
            let value = jackson_integral(&spec, &|x: f64| x.powi(n as i32), *a, 4000, 1e-300)?;
            let expected = a.powi(n as i32 + 1) / rpq_number(&spec, n + 1)?;
            vec![json!({ "n": n, "a": a, "value": value, "expected": expected, "residual": (value - expected).abs() })]
        }
        Command::Exp => {
            let z = c.z.unwrap_or(Complex64::new(0.5, 0.0));
            let v = rpq_exp(&spec, z, &cfg)?;
            let radius = radius_estimate(&spec, &cfg);
            vec![json!({ "z_re": z.re, "z_im": z.im, "re": v.value.re, "im": v.value.im,
                "terms_used": v.terms_used, "est_error": v.est_error,
                "radius": if radius.is_infinite() { Value::from("inf") } else { Value::from(radius.value) } })]
        }
        Command::Trig { which } => {
            let z = c.z.unwrap_or(Complex64::new(0.5, 0.0));
            let v = rpq_trig(&spec, *which, z, &cfg)?;
            vec![json!({ "which": which, "z_re": z.re, "z_im": z.im, "re": v.value.re, "im": v.value.im,
                "terms_used": v.terms_used, "est_error": v.est_error })]
        }
        Command::Bessel { kind, s, suite } => {
            let z = c.z.unwrap_or(Complex64::new(0.3, 0.0));
            let s = Complex64::new(*s, 0.0);
            if *suite {
                let rep = regate(bessel_identity_suite(s, z, spec.p(), spec.q(), &cfg)?, c.tol);
                passed = Some(rep.passed());
                check_records(&rep)
            } else {
                let v = pq_bessel(*kind, s, z, spec.p(), spec.q(), &cfg)?;
                vec![json!({ "kind": kind, "s": s.re, "z_re": z.re, "z_im": z.im, "re": v.value.re, "im": v.value.im,
                    "terms_used": v.terms_used })]
            }
        }
        Command::Fock => {
            let d = c.dim.unwrap_or(32);
            let mut rep = algebra_residuals(&spec, d)?;
            if spec.kind() == Kind::Kalnins {
                rep.extend(jacobi_diagnostics(&spec, d.max(65))?);
            }
            let rep = regate(rep, c.tol);
            passed = Some(rep.passed());
            check_records(&rep)
        }
        Command::Coherent => {
            let z = c.z.unwrap_or(Complex64::new(0.3, 0.0));
            let d = c.dim.unwrap_or(64);
            let st = photon_statistics(&spec, z, &cfg)?;
            let mut rec = serde_json::to_value(&st).expect("stats serialize");
            rec["eigenstate_residual"] = json!(eigenstate_residual(&spec, z, d, &cfg)?);
            rec["dim"] = json!(d);
            vec![rec]
        }
        Command::RsPoly => {
            let n = c.n.unwrap_or(4);
            let direct = rs_direct(&spec, n)?;
            let recursive = match builtin_phis(&spec) {
                Ok(phis) => Some(rs_recursive(&spec, &phis, n)?),
                Err(RpqError::UnsupportedKind { .. }) => None,
                Err(e) => return Err(e),
            };
            (0..=n)
                .map(|k| {
                    json!({ "n": n, "k": k, "direct": direct.coeffs[k],
                        "recursive": recursive.as_ref().map(|r| r.coeffs[k]) })
                })
                .collect()
        }
        Command::Hermite => {
            let n = c.n.unwrap_or(2);
            let grid: Vec<f64> = match c.theta {
                Some(t) => vec![t],
                None => (0..32).map(|i| i as f64 * std::f64::consts::TAU / 32.0).collect(),
            };
            grid.iter()
                .map(|&t| {
                    let h = hermite_continuous(&spec, n, t)?;
                    Ok(json!({ "n": n, "theta": t, "value": h.value, "imag": h.imag,
                        "asymmetry_warning": h.asymmetry_warning }))
                })
                .collect::<Result<_>>()?
        }
        Command::HopfCheck { tau } => {
            let h = HopfSpec::builtin(spec.clone(), tau.unwrap_or(spec.tau()))?;
            let rep = regate(hopf_axiom_suite(&h, c.dim.unwrap_or(6))?, c.tol);
            passed = Some(rep.passed());
            check_records(&rep)
        }
        Command::VerifyAll => {
            let lines = verify_all(&spec, c.tol, Exec::available());
            passed = Some(lines.iter().all(|l| l.status != SuiteStatus::Fail));
            lines.iter().map(|l| serde_json::to_value(l).expect("line serializes")).collect()
        }
    };
    Ok(Document {
        command: cli.command.name().into(),
        spec: serde_json::to_value(&spec).expect("spec serializes"),
        records,
        passed,
    })
}

fn complex_records(cs: &[Complex64]) -> Vec<Value> {
    cs.iter().enumerate().map(|(k, c)| json!({ "k": k, "re": c.re, "im": c.im })).collect()
}

fn check_records(rep: &Report) -> Vec<Value> {
    rep.checks.iter().map(|c| serde_json::to_value(c).expect("check serializes")).collect()
}

/// Re-gates every non-informational check against `tol` when given.
fn regate(mut rep: Report, tol: Option<f64>) -> Report {
    if let Some(t) = tol {
        for c in rep.checks.iter_mut() {
            c.tol = t;
            c.passed = c.residual.is_finite() && c.residual < t;
        }
    }
    rep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteStatus {
    Pass,
    Fail,
    /// The suite does not apply to this kind or parameter range.
    Skipped,
}

/// One line of `verify-all`.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteLine {
    pub suite: String,
    pub status: SuiteStatus,
    pub max_residual: f64,
    pub checks: usize,
    /// Failing check names, `;`-separated.
    pub failed: String,
    pub note: String,
}

type Suite = (&'static str, fn(&DeformationSpec) -> Result<Report>);

const SUITES: [Suite; 14] = [
    ("number_identities", |s| number_identity_suite(s, 12, 1e-9)),
    ("fg_consistency", |s| fg_consistency_check(s, 32, 1e-9)),
    ("calculus", |s| calculus_suite(s, 16, 1e-10)),
    ("jackson_integral", suite_jackson),
    ("exp_trig", suite_exp_trig),
    ("binomial_theorem", suite_binomial),
    ("bessel", suite_bessel),
    ("fock", |s| algebra_residuals(s, 32)),
    ("coherent", suite_coherent),
    ("kalnins", suite_kalnins),
    ("rs_dual_path", suite_rs),
    ("hermite", suite_hermite),
    ("psi_ladder", suite_psi),
    ("hopf", |s| hopf_axiom_suite(&HopfSpec::builtin(s.clone(), s.tau())?, 6)),
];

/// Runs every suite on `spec`. Suites that do not apply to the kind are
/// reported as skipped.
pub fn verify_all(spec: &DeformationSpec, tol: Option<f64>, exec: Exec) -> Vec<SuiteLine> {
    map_slice(&SUITES, exec, |(name, f)| {
        let line = |status, max_residual, checks, failed: String, note: String| SuiteLine {
            suite: (*name).into(),
            status,
            max_residual,
            checks,
            failed,
            note,
        };
        match f(spec) {
            Ok(rep) => {
                let rep = regate(rep, tol);
                let failed: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
                let status = if rep.passed() { SuiteStatus::Pass } else { SuiteStatus::Fail };
                line(status, rep.max_residual(), rep.checks.len(), failed.join(";"), String::new())
            }
            Err(e @ (RpqError::UnsupportedKind { .. } | RpqError::OutsideRadius { .. })) => {
                line(SuiteStatus::Skipped, 0.0, 0, String::new(), e.to_string())
            }
            Err(e) => line(SuiteStatus::Fail, f64::INFINITY, 0, String::new(), e.to_string()),
        }
    })
}

fn suite_jackson(spec: &DeformationSpec) -> Result<Report> {
    let mut r = Report::new("jackson_integral");
    for n in 0..4 {
        let value = jackson_integral(spec, &|x: f64| x.powi(n), 1.0, 4000, 1e-300)?;
        let expected = 1.0 / rpq_number(spec, n as usize + 1)?;
        r.push(format!("monomial_{n}"), (value - expected).abs() / expected.abs().max(1.0), 1e-10);
    }
    Ok(r)
}

fn suite_exp_trig(spec: &DeformationSpec) -> Result<Report> {
    const ORDER: usize = 40;
    let mut r = Report::new("exp_trig");
    let scale = exp_series(spec, ORDER)?.max_abs().max(1.0);
    r.push("exp_difference", exp_difference_residual(spec, ORDER)? / scale, 1e-12);
    r.push("exp_derivative", exp_derivative_residual(spec, ORDER)? / scale, 1e-12);
    let (c1, c2) = (Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0));
    let trig_scale = trig_series(spec, Trig::Cos, Complex64::new(1.0, 0.0), ORDER)?.max_abs().max(1.0);
    r.push("oscillator_solution", oscillator_solution_check(spec, 1.0, c1, c2, ORDER)? / trig_scale, 1e-10);
    Ok(r)
}

fn suite_binomial(spec: &DeformationSpec) -> Result<Report> {
    let (p, q) = if spec.q() > 0.0 && spec.q() < spec.p() { (spec.p(), spec.q()) } else { (1.0, 0.5) };
    pq_binomial_theorem_check(0.5, 0.3, p, q, Complex64::new(0.3, 0.0), 400)
}

/// Fixed point `(s, z, p, q) = (1, 0.3, 0.9, 0.5)`. The three-term
/// recursion as printed does not hold (see `bessel_identity_suite`), so here
/// it is informational and the form rebuilt from the ladder relations gates.
fn suite_bessel(_: &DeformationSpec) -> Result<Report> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut rep = bessel_identity_suite(c(1.0), c(0.3), 0.9, 0.5, &SeriesEvalConfig::default())?;
    for ch in rep.checks.iter_mut() {
        match ch.name.as_str() {
            "prop2_three_term" => ch.informational = true,
            "prop2_from_lowering_raising" => ch.informational = false,
            _ => {}
        }
    }
    Ok(rep)
}

fn suite_coherent(spec: &DeformationSpec) -> Result<Report> {
    let cfg = SeriesEvalConfig::default();
    let z = Complex64::new(0.3, 0.0);
    let mut r = Report::new("coherent");
    coherent_vector(spec, z, 64, &cfg)?;
    r.push("eigenstate_d64", eigenstate_residual(spec, z, 64, &cfg)?, 1e-8);
    let (direct, closed) = overlap(spec, z, Complex64::new(0.1, 0.2), 64, &cfg)?;
    r.push("overlap_direct_vs_closed", (direct - closed).norm(), 1e-10);
    let f1 = rpq_number(spec, 1)?.abs();
    r.push("metric_at_zero", (fubini_metric(spec, 0.0, &cfg)? - 1.0 / f1).abs() * f1, 1e-10);
    let x = 1e-4;
    let slope = photon_statistics(spec, z, &cfg)?.mandel_slope_at_zero;
    r.push("mandel_slope_probe", (mandel_q(spec, x, &cfg)? / x - slope).abs() / slope.abs().max(1.0), 1e-2);
    Ok(r)
}

fn suite_kalnins(spec: &DeformationSpec) -> Result<Report> {
    if spec.kind() != Kind::Kalnins {
        return Err(RpqError::UnsupportedKind { kind: spec.kind().to_string(), what: "Kalnins diagnostics".into() });
    }
    let cfg = SeriesEvalConfig::default();
    let mut r = Report::new("kalnins");
    r.extend(jacobi_diagnostics(spec, 65)?);
    let top = if spec.q() > 1.0 { 5 } else { 3 };
    for n in 0..=top {
        r.extend(moment_check(spec, n, &cfg)?);
    }
    Ok(r)
}

fn suite_rs(spec: &DeformationSpec) -> Result<Report> {
    let phis = builtin_phis(spec)?;
    let mut r = Report::new("rs_dual_path");
    let mut worst = 0.0f64;
    for n in 0..=12 {
        worst = worst.max(rs_recursive(spec, &phis, n)?.max_rel_diff(&rs_direct(spec, n)?));
    }
    r.push("recursive_vs_direct_n12", worst, 1e-10);
    Ok(r)
}

fn suite_hermite(spec: &DeformationSpec) -> Result<Report> {
    let phis = builtin_phis(spec)?;
    let mut r = Report::new("hermite");
    let mut worst = 0.0f64;
    for n in 0..=8 {
        for i in 0..32 {
            let t = i as f64 * std::f64::consts::TAU / 32.0;
            worst = worst.max(hermite_recursion_check(spec, &phis, n, t)?);
        }
    }
    r.push("three_term_recursion", worst, 1e-10);
    Ok(r)
}

fn suite_psi(spec: &DeformationSpec) -> Result<Report> {
    let mut r = Report::new("psi_ladder");
    for n in 0..=8 {
        r.extend(psi_ladder_check(spec, n)?);
    }
    Ok(r)
}
