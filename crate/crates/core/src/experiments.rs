//! Parameter sweeps over the transfer protocol.
//!
//! Every sweep point is an independent density-matrix integration started
//! from `|L><L|`; points run on a rayon pool and results keep input order.
//! A point whose integration fails is kept in the result with its error.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::dynamics::{evolve_density, transfer_fidelity, DensityMatrix, IntegratorOptions, Trajectory};
use crate::error::{Error, Result};
use crate::model::SystemConfig;
use crate::perturbation::analytic_fidelity;
use crate::spectral::{self, energy_gap};

/// Pulse shapes `alpha * tau` compared in the gap study.
pub const GAP_STUDY_SHAPES: [f64; 4] = [3.0, 4.0, 5.0, 6.0];
/// Durations of the `tau` sweep in units of `mu0 / J1^2`.
pub const TAU_SWEEP_UNITS: [f64; 10] = [0.2, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0];
/// Duration beyond which the transfer fidelity is expected to plateau, in
/// units of `mu0 / J1^2`.
pub const TAU_PLATEAU_UNITS: f64 = 4.0;

/// The baseline transfer: `mu0 = 20`, `J1 = 0.8`, `J2 = 1`, `tau = 400`,
/// `alpha = alpha_tau / tau`.
pub fn baseline_config(alpha_tau: f64) -> SystemConfig {
    SystemConfig::from_params(0.8, 1.0, 20.0, alpha_tau / 400.0, 400.0)
        .expect("baseline parameters are valid")
}

/// Base of the depth and mismatch sweeps: `tau = 375`, `alpha = 5 / tau`.
pub fn depth_sweep_base() -> SystemConfig {
    SystemConfig::from_params(0.8, 1.0, 20.0, 5.0 / 375.0, 375.0)
        .expect("sweep base parameters are valid")
}

/// `{0.2, ..., 10} * mu0 / J1^2`
pub fn default_tau_grid(mu0: f64, j1: f64) -> Vec<f64> {
    TAU_SWEEP_UNITS.iter().map(|u| u * mu0 / (j1 * j1)).collect()
}

/// `mu0 = 2, 4, ..., 40`
pub fn default_mu0_grid() -> Vec<f64> {
    (1..=20).map(|k| 2.0 * k as f64).collect()
}

/// `J1/J2 = 0.10, 0.15, ..., 1.50`
pub fn default_ratio_grid() -> Vec<f64> {
    (2..=30).map(|k| k as f64 / 20.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptParameter {
    Alpha,
    /// `alpha` is rescaled so that `alpha * tau` stays at its base value.
    Tau,
    Mu0,
    /// `J1 = ratio * J2` with `J2` from the base.
    J1OverJ2,
}

impl SweptParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweptParameter::Alpha => "alpha",
            SweptParameter::Tau => "tau",
            SweptParameter::Mu0 => "mu0",
            SweptParameter::J1OverJ2 => "j1_over_j2",
        }
    }

    pub fn apply(&self, base: &SystemConfig, value: f64) -> Result<SystemConfig> {
        let mut c = *base;
        match self {
            SweptParameter::Alpha => c.schedule.alpha = value,
            SweptParameter::Tau => {
                let shape = base.schedule.shape();
                c.schedule.tau = value;
                c.schedule.alpha = shape / value;
            }
            SweptParameter::Mu0 => c.schedule.mu0 = value,
            SweptParameter::J1OverJ2 => c.couplings.j1 = value * base.couplings.j2,
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemConfig,
    pub parameter: SweptParameter,
    pub values: Vec<f64>,
    pub options: IntegratorOptions,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.values.is_empty() {
            return Err(Error::InvalidInput("sweep values must be nonempty".into()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("sweep values must be finite".into()));
        }
        let increasing = self.values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::InvalidInput("sweep values must be strictly monotone".into()));
        }
        Ok(())
    }
}

/// Outcome of one successful sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMetrics {
    pub fidelity_sq: f64,
    pub min_gap: f64,
    pub max_adiabaticity_metric: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub value: f64,
    pub outcome: Result<PointMetrics>,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: SweptParameter,
    pub records: Vec<SweepRecord>,
}

impl SweepResult {
    /// `(value, fidelity_sq)` of the successful points.
    pub fn fidelities(&self) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok().map(|m| (r.value, m.fidelity_sq)))
            .collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRecord> {
        self.records.iter().filter(|r| r.outcome.is_err())
    }
}

/// Runs `f` over `items` on a pool of `workers` threads (`None`: all cores),
/// keeping input order.
pub fn par_map<T, U, F>(items: &[T], workers: Option<usize>, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Io(format!("thread pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

/// Integrates one transfer and measures fidelity, minimum gap and the worst
/// adiabaticity metric over the trajectory's sample times.
pub fn evaluate_point(config: &SystemConfig, options: &IntegratorOptions) -> Result<PointMetrics> {
    let traj = population_trace(config, options)?;
    let mut min_gap = f64::INFINITY;
    let mut min_at = 0.0;
    let mut worst: f64 = 0.0;
    for &t in &traj.times {
        let es = spectral::eigensystem_at(config, t)?;
        if es.gap() < min_gap {
            min_gap = es.gap();
            min_at = t;
        }
        worst = worst.max(spectral::adiabaticity_metric_of(config, &es)?);
    }
    if min_gap <= 0.0 {
        return Err(Error::LevelCrossing { t: min_at, gap: min_gap });
    }
    Ok(PointMetrics {
        fidelity_sq: transfer_fidelity(&traj),
        min_gap,
        max_adiabaticity_metric: worst,
    })
}

pub fn run_sweep(spec: &SweepSpec, workers: Option<usize>) -> Result<SweepResult> {
    spec.validate()?;
    let records = par_map(&spec.values, workers, |&value| {
        let start = Instant::now();
        let outcome = spec
            .parameter
            .apply(&spec.base, value)
            .and_then(|config| evaluate_point(&config, &spec.options));
        SweepRecord {
            value,
            outcome,
            wall_time: start.elapsed(),
        }
    })?;
    Ok(SweepResult {
        parameter: spec.parameter,
        records,
    })
}

fn sweep(
    base: &SystemConfig,
    parameter: SweptParameter,
    values: &[f64],
    options: &IntegratorOptions,
    workers: Option<usize>,
) -> Result<SweepResult> {
    run_sweep(
        &SweepSpec {
            base: *base,
            parameter,
            values: values.to_vec(),
            options: *options,
        },
        workers,
    )
}

/// Fidelity versus total time with `alpha * tau` held at the base value.
pub fn sweep_tau(
    base: &SystemConfig,
    taus: &[f64],
    options: &IntegratorOptions,
    workers: Option<usize>,
) -> Result<SweepResult> {
    sweep(base, SweptParameter::Tau, taus, options, workers)
}

/// Fidelity versus peak depth at fixed `tau` and `alpha`.
pub fn sweep_mu0(
    base: &SystemConfig,
    mu0s: &[f64],
    options: &IntegratorOptions,
    workers: Option<usize>,
) -> Result<SweepResult> {
    sweep(base, SweptParameter::Mu0, mu0s, options, workers)
}

/// Fidelity versus coupling mismatch `J1 / J2`.
pub fn sweep_ratio(
    base: &SystemConfig,
    ratios: &[f64],
    options: &IntegratorOptions,
    workers: Option<usize>,
) -> Result<SweepResult> {
    sweep(base, SweptParameter::J1OverJ2, ratios, options, workers)
}

/// Gap curves `e1(t) - e0(t)` on a shared uniform grid, one per `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    pub times: Vec<f64>,
    pub alphas: Vec<f64>,
    /// `gaps[a][k]` is the gap for `alphas[a]` at `times[k]`.
    pub gaps: Vec<Vec<f64>>,
}

impl GapProfile {
    /// `(t, gap)` at the minimum of each curve.
    pub fn minima(&self) -> Vec<(f64, f64)> {
        self.gaps
            .iter()
            .map(|curve| {
                curve
                    .iter()
                    .zip(&self.times)
                    .fold((f64::NAN, f64::INFINITY), |best, (&g, &t)| if g < best.1 { (t, g) } else { best })
            })
            .collect()
    }
}

pub fn gap_profile(config: &SystemConfig, alphas: &[f64], n_grid: usize) -> Result<GapProfile> {
    if n_grid < 100 {
        return Err(Error::InvalidInput("n_grid must be ≥ 100".into()));
    }
    if alphas.is_empty() {
        return Err(Error::InvalidInput("alpha list must be nonempty".into()));
    }
    let tau = config.schedule.tau;
    let times: Vec<f64> = (0..n_grid)
        .map(|k| tau * (k as f64 / (n_grid - 1) as f64))
        .collect();
    let mut gaps = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let c = SweptParameter::Alpha.apply(config, alpha)?;
        let curve = times
            .iter()
            .map(|&t| energy_gap(&c, t))
            .collect::<Result<Vec<_>>>()?;
        gaps.push(curve);
    }
    Ok(GapProfile {
        times,
        alphas: alphas.to_vec(),
        gaps,
    })
}

/// Density-matrix run from `|L><L|`; rows are `(t, |c1|^2, |c2|^2, |c3|^2)`.
pub fn population_trace(config: &SystemConfig, options: &IntegratorOptions) -> Result<Trajectory> {
    evolve_density(config, &DensityMatrix::left(), options)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub mu0: f64,
    pub j1: f64,
    pub j2: f64,
    pub numeric: Result<f64>,
    pub analytic: f64,
    /// `|numeric - analytic|`, `NaN` when the integration failed.
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareTable {
    pub rows: Vec<CompareRow>,
}

impl CompareTable {
    /// Largest `abs_diff` among successful rows.
    pub fn max_abs_diff(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.numeric.is_ok())
            .map(|r| r.abs_diff)
            .fold(0.0, f64::max)
    }
}

/// Numeric versus closed-form fidelity over a set of configurations.
///
/// Every point must be deep (`mu0 / |J2| >= 10`) and slow
/// (`tau >= 4 mu0 / J1^2`).
pub fn compare_analytic(
    grid: &[SystemConfig],
    options: &IntegratorOptions,
    workers: Option<usize>,
) -> Result<CompareTable> {
    for c in grid {
        c.validate()?;
        let (j1, j2, mu0) = (c.couplings.j1, c.couplings.j2, c.schedule.mu0);
        if !(mu0 >= 10.0 * j2.abs()) {
            return Err(Error::InvalidInput(format!("compare point mu0 = {mu0}: mu0/|J2| must be ≥ 10")));
        }
        if !(c.schedule.tau >= TAU_PLATEAU_UNITS * mu0 / (j1 * j1)) {
            return Err(Error::InvalidInput(format!(
                "compare point mu0 = {mu0}, j1 = {j1}: tau must be ≥ 4 mu0 / J1^2"
            )));
        }
    }
    let rows = par_map(grid, workers, |c| {
        let (j1, j2, mu0) = (c.couplings.j1, c.couplings.j2, c.schedule.mu0);
        let analytic = analytic_fidelity(j1, j2, mu0)?;
        let numeric = population_trace(c, options).map(|traj| transfer_fidelity(&traj));
        let abs_diff = numeric.as_ref().map_or(f64::NAN, |n| (n - analytic).abs());
        Ok(CompareRow {
            mu0,
            j1,
            j2,
            numeric,
            analytic,
            abs_diff,
        })
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(CompareTable { rows })
}
