//! Config parsing, subcommand dispatch and CSV serialisation for the
//! `adiapass` binary.
//!
//! Configs are flat UTF-8 `key = value` lines; `#` starts a comment. Lists are
//! comma separated. Only numeric literals are accepted (no `4/tau`).
//!
//! | key              | default                     |
//! |------------------|-----------------------------|
//! | `j1`             | 0.8                         |
//! | `j2`             | 1.0                         |
//! | `mu0`            | 20                          |
//! | `tau`            | 400                         |
//! | `alpha`          | `5 / tau`                   |
//! | `alpha_over_tau` | (alternative to `alpha`)    |
//! | `step`           | `auto`                      |
//! | `sample_stride`  | about 2000 samples per run  |
//! | `n_grid`         | 2001                        |
//! | `gap_alphas`     | `{3,4,5,6} / tau`           |
//! | `sweep_values`   | per-subcommand default grid |
//! | `compare_mu0`    | 14, 16, ..., 40             |
//! | `compare_j1`     | `j1`                        |
//! | `output`         | stdout                      |
//!
//! Every output starts with `#!` metadata lines followed by `# key = value`
//! lines holding the fully resolved parameters; stripping the `# ` prefix
//! from those lines (see [`header_config`]) gives a config that reproduces
//! the same CSV.

use std::collections::BTreeMap;
use std::io::Write;

use crate::dynamics::{IntegratorOptions, Method, StepSize};
use crate::error::{Error, Result};
use crate::experiments::{self, SweepResult};
use crate::model::{CouplingPair, PulseSchedule, SystemConfig};
use crate::perturbation::analytic_fidelity;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SUBCOMMANDS: [&str; 7] = [
    "evolve",
    "gap",
    "analytic",
    "sweep-tau",
    "sweep-mu0",
    "sweep-ratio",
    "compare",
];

const KEYS: [&str; 14] = [
    "j1",
    "j2",
    "mu0",
    "tau",
    "alpha",
    "alpha_over_tau",
    "step",
    "sample_stride",
    "n_grid",
    "gap_alphas",
    "sweep_values",
    "compare_mu0",
    "compare_j1",
    "output",
];

pub const DEFAULT_J1: f64 = 0.8;
pub const DEFAULT_J2: f64 = 1.0;
pub const DEFAULT_MU0: f64 = 20.0;
pub const DEFAULT_TAU: f64 = 400.0;
pub const DEFAULT_ALPHA_TAU: f64 = 5.0;
pub const DEFAULT_N_GRID: usize = 2001;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INTEGRATION: i32 = 2;

/// A parsed and validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    pub options: IntegratorOptions,
    pub n_grid: usize,
    pub gap_alphas: Option<Vec<f64>>,
    pub sweep_values: Option<Vec<f64>>,
    pub compare_mu0: Option<Vec<f64>>,
    pub compare_j1: Option<Vec<f64>>,
    pub output: Option<String>,
    /// Non-fatal findings, e.g. `alpha * tau < 3`.
    pub warnings: Vec<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        parse_config("").expect("defaults are valid")
    }
}

#[derive(Debug, Clone)]
struct RawValue {
    text: String,
    line: usize,
}

fn parse_lines(text: &str) -> Result<BTreeMap<String, RawValue>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Parse {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Parse {
                line,
                message: format!("unknown key `{key}`"),
            });
        }
        if value.is_empty() {
            return Err(Error::Parse {
                line,
                message: format!("missing value for `{key}`"),
            });
        }
        if map.contains_key(&key) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate key `{key}`"),
            });
        }
        map.insert(key, RawValue { text: value, line });
    }
    Ok(map)
}

fn number(key: &str, raw: &RawValue) -> Result<f64> {
    let v: f64 = raw.text.parse().map_err(|_| Error::Parse {
        line: raw.line,
        message: format!("`{key}` expects a numeric literal, got `{}`", raw.text),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line: raw.line,
            message: format!("`{key}` must be finite"),
        });
    }
    Ok(v)
}

fn count(key: &str, raw: &RawValue) -> Result<usize> {
    raw.text.parse().map_err(|_| Error::Parse {
        line: raw.line,
        message: format!("`{key}` expects a non-negative integer, got `{}`", raw.text),
    })
}

fn list(key: &str, raw: &RawValue) -> Result<Vec<f64>> {
    raw.text
        .split(',')
        .map(|item| {
            number(
                key,
                &RawValue {
                    text: item.trim().to_string(),
                    line: raw.line,
                },
            )
        })
        .collect()
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    parse_config_with_overrides(text, &[])
}

/// Parses `text`, then applies `key=value` overrides in order.
///
/// An override of `alpha` discards `alpha_over_tau` from the file and vice
/// versa.
pub fn parse_config_with_overrides(text: &str, overrides: &[String]) -> Result<ExperimentConfig> {
    let mut map = parse_lines(text)?;
    for (i, item) in overrides.iter().enumerate() {
        let parsed = parse_lines(item).map_err(|e| match e {
            Error::Parse { message, .. } => Error::InvalidInput(format!("--set #{}: {message}", i + 1)),
            other => other,
        })?;
        if parsed.is_empty() {
            return Err(Error::InvalidInput(format!("--set #{}: expected key=value", i + 1)));
        }
        for (key, mut value) in parsed {
            value.line = 0;
            match key.as_str() {
                "alpha" => {
                    map.remove("alpha_over_tau");
                }
                "alpha_over_tau" => {
                    map.remove("alpha");
                }
                _ => {}
            }
            map.insert(key, value);
        }
    }
    resolve(&map)
}

fn resolve(map: &BTreeMap<String, RawValue>) -> Result<ExperimentConfig> {
    let get = |key: &str, default: f64| map.get(key).map_or(Ok(default), |raw| number(key, raw));
    let j1 = get("j1", DEFAULT_J1)?;
    let j2 = get("j2", DEFAULT_J2)?;
    let mu0 = get("mu0", DEFAULT_MU0)?;
    let tau = get("tau", DEFAULT_TAU)?;
    let alpha = match (map.get("alpha"), map.get("alpha_over_tau")) {
        (Some(a), Some(_)) => {
            return Err(Error::Parse {
                line: a.line,
                message: "`alpha` and `alpha_over_tau` are mutually exclusive".into(),
            })
        }
        (Some(a), None) => number("alpha", a)?,
        (None, Some(k)) => number("alpha_over_tau", k)? / tau,
        (None, None) => DEFAULT_ALPHA_TAU / tau,
    };
    let system = SystemConfig::new(CouplingPair::new(j1, j2)?, PulseSchedule::new(mu0, alpha, tau)?)?;

    let step = match map.get("step") {
        None => StepSize::Auto,
        Some(raw) if raw.text == "auto" => StepSize::Auto,
        Some(raw) => StepSize::Fixed(number("step", raw)?),
    };
    let sample_stride = map
        .get("sample_stride")
        .map(|raw| count("sample_stride", raw))
        .transpose()?;
    let options = IntegratorOptions {
        step,
        sample_stride,
        method: Method::Rk4,
        enforce_invariants: true,
    };
    options.resolve(&system)?;

    let n_grid = map
        .get("n_grid")
        .map_or(Ok(DEFAULT_N_GRID), |raw| count("n_grid", raw))?;
    if n_grid < 100 {
        return Err(Error::InvalidInput("n_grid must be ≥ 100".into()));
    }
    let opt_list = |key: &str| map.get(key).map(|raw| list(key, raw)).transpose();

    Ok(ExperimentConfig {
        system,
        options,
        n_grid,
        gap_alphas: opt_list("gap_alphas")?,
        sweep_values: opt_list("sweep_values")?,
        compare_mu0: opt_list("compare_mu0")?,
        compare_j1: opt_list("compare_j1")?,
        output: map.get("output").map(|raw| raw.text.clone()),
        warnings: system.warnings(),
    })
}

/// Extracts the resolved-parameter lines (`# key = value`) of an output as
/// a config document.
pub fn header_config(output: &str) -> String {
    output
        .lines()
        .take_while(|l| l.starts_with('#'))
        .filter_map(|l| l.strip_prefix("# "))
        .filter(|l| l.contains('='))
        .map(|l| format!("{l}\n"))
        .collect()
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

/// Parameters of a run after defaults are filled in.
struct Resolved<'a> {
    config: &'a ExperimentConfig,
    lists: Vec<(&'static str, Vec<f64>)>,
}

impl Resolved<'_> {
    fn write_header(&self, subcommand: &str, out: &mut dyn Write) -> Result<()> {
        let c = &self.config.system;
        let plan = self.config.options.resolve(c)?;
        writeln!(out, "#! adiapass {VERSION} {subcommand}")?;
        writeln!(
            out,
            "#! integrator = rk4, n_steps = {}, step_size = {}, samples_every = {}",
            plan.n_steps, plan.step, plan.stride
        )?;
        writeln!(out, "# j1 = {}", c.couplings.j1)?;
        writeln!(out, "# j2 = {}", c.couplings.j2)?;
        writeln!(out, "# mu0 = {}", c.schedule.mu0)?;
        writeln!(out, "# tau = {}", c.schedule.tau)?;
        writeln!(out, "# alpha = {}", c.schedule.alpha)?;
        match self.config.options.step {
            StepSize::Fixed(h) => writeln!(out, "# step = {h}")?,
            _ => writeln!(out, "# step = auto")?,
        }
        if let Some(s) = self.config.options.sample_stride {
            writeln!(out, "# sample_stride = {s}")?;
        }
        writeln!(out, "# n_grid = {}", self.config.n_grid)?;
        for (key, values) in &self.lists {
            writeln!(out, "# {key} = {}", join(values))?;
        }
        Ok(())
    }
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().has_headers(false).from_writer(out)
}

fn write_row(w: &mut csv::Writer<&mut dyn Write>, values: &[f64]) -> Result<()> {
    w.write_record(values.iter().map(|v| format_sig12(*v)))?;
    Ok(())
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::IntegrationAccuracy { .. }
        | Error::NoConvergence { .. }
        | Error::SingularGap { .. }
        | Error::LevelCrossing { .. } => EXIT_INTEGRATION,
        _ => EXIT_INVALID,
    }
}

/// Runs `name` and writes its CSV to `sink`; messages go to `diag`.
///
/// Returns the process exit status: 0 on success, 1 on invalid input, 2 when
/// an integration lost accuracy.
pub fn run_subcommand(
    name: &str,
    config: &ExperimentConfig,
    sink: &mut dyn Write,
    diag: &mut dyn Write,
    workers: Option<usize>,
) -> i32 {
    if !SUBCOMMANDS.contains(&name) {
        let _ = writeln!(diag, "error: unknown subcommand `{name}`\n\n{}", usage());
        return EXIT_INVALID;
    }
    for w in &config.warnings {
        let _ = writeln!(diag, "warning: {w}");
    }
    match dispatch(name, config, sink, diag, workers) {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(diag, "error: {err}");
            exit_code(&err)
        }
    }
}

pub fn usage() -> String {
    format!(
        "usage: adiapass <subcommand> [--config FILE] [--out FILE] [--set key=value ...]\n\
         subcommands: {}",
        SUBCOMMANDS.join(", ")
    )
}

fn dispatch(
    name: &str,
    config: &ExperimentConfig,
    sink: &mut dyn Write,
    diag: &mut dyn Write,
    workers: Option<usize>,
) -> Result<i32> {
    let sys = &config.system;
    match name {
        "evolve" => {
            let resolved = Resolved { config, lists: vec![] };
            let traj = experiments::population_trace(sys, &config.options)?;
            resolved.write_header(name, sink)?;
            let mut w = csv_writer(sink);
            w.write_record(["t", "pop_L", "pop_M", "pop_R"])?;
            for (t, p) in traj.times.iter().zip(&traj.populations) {
                write_row(&mut w, &[*t, p[0], p[1], p[2]])?;
            }
            w.flush()?;
            Ok(EXIT_OK)
        }
        "gap" => {
            let alphas = config.gap_alphas.clone().unwrap_or_else(|| {
                experiments::GAP_STUDY_SHAPES
                    .iter()
                    .map(|k| k / sys.schedule.tau)
                    .collect()
            });
            let profile = experiments::gap_profile(sys, &alphas, config.n_grid)?;
            let resolved = Resolved {
                config,
                lists: vec![("gap_alphas", alphas)],
            };
            resolved.write_header(name, sink)?;
            let mut w = csv_writer(sink);
            let mut header = vec!["t".to_string()];
            header.extend((1..=profile.alphas.len()).map(|k| format!("gap_alpha{k}")));
            w.write_record(&header)?;
            for (k, t) in profile.times.iter().enumerate() {
                let mut row = vec![*t];
                row.extend(profile.gaps.iter().map(|curve| curve[k]));
                write_row(&mut w, &row)?;
            }
            w.flush()?;
            Ok(EXIT_OK)
        }
        "analytic" => {
            let (j1, j2, mu0) = (sys.couplings.j1, sys.couplings.j2, sys.schedule.mu0);
            let f = analytic_fidelity(j1, j2, mu0)?;
            Resolved { config, lists: vec![] }.write_header(name, sink)?;
            let mut w = csv_writer(sink);
            w.write_record(["j1", "j2", "mu0", "fidelity_sq"])?;
            write_row(&mut w, &[j1, j2, mu0, f])?;
            w.flush()?;
            Ok(EXIT_OK)
        }
        "sweep-tau" | "sweep-mu0" | "sweep-ratio" => {
            let values = config.sweep_values.clone().unwrap_or_else(|| match name {
                "sweep-tau" => experiments::default_tau_grid(sys.schedule.mu0, sys.couplings.j1),
                "sweep-mu0" => experiments::default_mu0_grid(),
                _ => experiments::default_ratio_grid(),
            });
            let result = match name {
                "sweep-tau" => experiments::sweep_tau(sys, &values, &config.options, workers)?,
                "sweep-mu0" => experiments::sweep_mu0(sys, &values, &config.options, workers)?,
                _ => experiments::sweep_ratio(sys, &values, &config.options, workers)?,
            };
            let resolved = Resolved {
                config,
                lists: vec![("sweep_values", values)],
            };
            resolved.write_header(name, sink)?;
            write_sweep(&result, sink, diag)
        }
        "compare" => {
            let mu0s = config
                .compare_mu0
                .clone()
                .unwrap_or_else(|| (7..=20).map(|k| 2.0 * k as f64).collect());
            let j1s = config.compare_j1.clone().unwrap_or_else(|| vec![sys.couplings.j1]);
            let mut grid = Vec::with_capacity(mu0s.len() * j1s.len());
            for &j1 in &j1s {
                for &mu0 in &mu0s {
                    let mut c = *sys;
                    c.couplings.j1 = j1;
                    c.schedule.mu0 = mu0;
                    grid.push(c);
                }
            }
            let table = experiments::compare_analytic(&grid, &config.options, workers)?;
            let resolved = Resolved {
                config,
                lists: vec![("compare_mu0", mu0s), ("compare_j1", j1s)],
            };
            resolved.write_header(name, sink)?;
            let mut failed = Vec::new();
            {
                let mut w = csv_writer(sink);
                w.write_record(["mu0", "j1", "j2", "numeric", "analytic", "abs_diff"])?;
                for row in &table.rows {
                    let numeric = row.numeric.as_ref().copied().unwrap_or(f64::NAN);
                    write_row(&mut w, &[row.mu0, row.j1, row.j2, numeric, row.analytic, row.abs_diff])?;
                    if let Err(e) = &row.numeric {
                        failed.push(format!("mu0 = {}, j1 = {}: {e}", row.mu0, row.j1));
                    }
                }
                w.flush()?;
            }
            writeln!(sink, "#! max_abs_diff = {}", format_sig12(table.max_abs_diff()))?;
            report_failures(&failed, sink, diag)
        }
        _ => unreachable!("subcommand list checked by caller"),
    }
}

fn write_sweep(result: &SweepResult, sink: &mut dyn Write, diag: &mut dyn Write) -> Result<i32> {
    let mut failed = Vec::new();
    {
        let mut w = csv_writer(sink);
        w.write_record(["swept_value", "fidelity_sq", "min_gap", "max_adiab_metric"])?;
        for r in &result.records {
            match &r.outcome {
                Ok(m) => write_row(&mut w, &[r.value, m.fidelity_sq, m.min_gap, m.max_adiabaticity_metric])?,
                Err(e) => {
                    write_row(&mut w, &[r.value, f64::NAN, f64::NAN, f64::NAN])?;
                    failed.push(format!("{} = {}: {e}", result.parameter.name(), r.value));
                }
            }
        }
        w.flush()?;
    }
    report_failures(&failed, sink, diag)
}

fn report_failures(failed: &[String], sink: &mut dyn Write, diag: &mut dyn Write) -> Result<i32> {
    for f in failed {
        writeln!(sink, "#! error: {f}")?;
        writeln!(diag, "error: {f}")?;
    }
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_INTEGRATION })
}

/// Reads `ADIAPASS_THREADS`; unset or unparsable means all cores.
pub fn workers_from_env() -> Option<usize> {
    std::env::var("ADIAPASS_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_baseline() {
        let c = parse_config("").unwrap();
        assert_eq!(c.system.couplings, CouplingPair { j1: 0.8, j2: 1.0 });
        assert_eq!(c.system.schedule.mu0, 20.0);
        assert_eq!(c.system.schedule.tau, 400.0);
        assert_eq!(c.system.schedule.alpha, 5.0 / 400.0);
        assert_eq!(c.options.step, StepSize::Auto);
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn comments_and_whitespace() {
        let c = parse_config("# header\n\n  mu0 = 14   # deep enough\nalpha_over_tau=4\n").unwrap();
        assert_eq!(c.system.schedule.mu0, 14.0);
        assert_eq!(c.system.schedule.alpha, 4.0 / 400.0);
    }

    #[test]
    fn expressions_are_rejected() {
        let err = parse_config("tau = 400\nalpha = 4/tau\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, message: "`alpha` expects a numeric literal, got `4/tau`".into() });
        assert!(parse_config("alpha = 0.01").is_ok());
    }

    #[test]
    fn invariant_violations() {
        let err = parse_config("mu0 = -5").unwrap_err();
        assert!(err.to_string().contains("mu0 must be ≥ 0"), "{err}");
        assert!(parse_config("tau = 0").is_err());
        assert!(parse_config("step = 1000").is_err());
        assert!(parse_config("n_grid = 10").is_err());
    }

    #[test]
    fn structural_errors_carry_line_numbers() {
        assert!(matches!(parse_config("mu0 = 1\nbogus = 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_config("mu0 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_config("mu0 = 1\nmu0 = 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_config("alpha = 0.1\nalpha_over_tau = 4"), Err(Error::Parse { .. })));
        assert!(matches!(parse_config("mu0 ="), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn short_pulses_warn_but_parse() {
        let c = parse_config("alpha_over_tau = 2").unwrap();
        assert_eq!(c.warnings.len(), 1);
    }

    #[test]
    fn overrides_apply_after_file() {
        let c = parse_config_with_overrides("alpha = 0.02\nmu0 = 10", &["alpha_over_tau=4".into(), "mu0=30".into()]).unwrap();
        assert_eq!(c.system.schedule.alpha, 4.0 / 400.0);
        assert_eq!(c.system.schedule.mu0, 30.0);
        assert!(parse_config_with_overrides("", &["nonsense".into()]).is_err());
    }

    #[test]
    fn lists_and_step() {
        let c = parse_config("sweep_values = 14, 16,18\nstep = 0.01\nsample_stride = 10").unwrap();
        assert_eq!(c.sweep_values, Some(vec![14.0, 16.0, 18.0]));
        assert_eq!(c.options.step, StepSize::Fixed(0.01));
        assert_eq!(c.options.sample_stride, Some(10));
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(1.0), "1");
        assert_eq!(format_sig12(400.0), "400");
        assert_eq!(format_sig12(0.2), "0.2");
        assert_eq!(format_sig12(0.997_494_262_421_333_4), "0.997494262421");
        assert_eq!(format_sig12(-7.453_306_344_157_342e-5), "-7.45330634416e-5");
        assert_eq!(format_sig12(1.234_567_890_123_456e-3), "0.00123456789012");
        assert_eq!(format_sig12(123_456_789_012_345.0), "1.23456789012e14");
        assert_eq!(format_sig12(f64::NAN), "NaN");
    }

    #[test]
    fn analytic_subcommand() {
        let c = parse_config("").unwrap();
        let mut out = Vec::new();
        let mut diag = Vec::new();
        assert_eq!(run_subcommand("analytic", &c, &mut out, &mut diag, None), EXIT_OK);
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows, vec!["j1,j2,mu0,fidelity_sq", "0.8,1,20,0.997494262421"]);
    }

    #[test]
    fn unknown_subcommand() {
        let c = parse_config("").unwrap();
        let mut out = Vec::new();
        let mut diag = Vec::new();
        assert_eq!(run_subcommand("teleport", &c, &mut out, &mut diag, None), EXIT_INVALID);
        assert!(out.is_empty());
        assert!(String::from_utf8(diag).unwrap().contains("usage: adiapass"));
    }

    #[test]
    fn resonance_is_a_validation_failure() {
        let c = parse_config("mu0 = 0.8").unwrap();
        let mut diag = Vec::new();
        assert_eq!(run_subcommand("analytic", &c, &mut Vec::new(), &mut diag, None), EXIT_INVALID);
    }

    #[test]
    fn oversized_step_exits_with_integration_code() {
        let c = parse_config("step = 0.5").unwrap();
        let mut diag = Vec::new();
        assert_eq!(run_subcommand("evolve", &c, &mut Vec::new(), &mut diag, None), EXIT_INTEGRATION);
        assert!(String::from_utf8(diag).unwrap().contains("integration accuracy"));
    }

    #[test]
    fn header_extraction() {
        let text = "#! adiapass 0.1.0 gap\n# j1 = 0.8\n# free comment\n# tau = 400\nt,gap\n# j2 = 5\n";
        assert_eq!(header_config(text), "j1 = 0.8\ntau = 400\n");
    }
}
