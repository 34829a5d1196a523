//! Closed-system time evolution on `[0, tau]`.
//!
//! The density matrix follows `i drho/dt = [H(t), rho]` (ħ = 1) and the pure
//! state follows `i dpsi/dt = H(t) psi`. Both are integrated with the same
//! fixed-step classical RK4 scheme so that one can serve as an oracle for the
//! other. Nothing is renormalised during integration: conservation laws are
//! checked at every sample and a breach is reported as an error.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat3, CVec3, C_ONE, C_ZERO};
use crate::model::{hamiltonian_at, SystemConfig};

pub const TRACE_TOL: f64 = 1e-9;
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const PURITY_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-9;
pub const IMAG_DIAG_TOL: f64 = 1e-12;

/// Largest phase advance per auto-sized step, in radians.
pub const AUTO_PHASE_PER_STEP: f64 = 0.005;
/// Largest phase advance per auto-sized step from the tunnel couplings alone.
/// Tighter than the total budget: with shallow gates the couplings drive
/// coherent oscillation over the whole window and truncation error adds up.
pub const AUTO_COUPLING_PHASE_PER_STEP: f64 = 0.0025;
/// Auto-sized runs take at least this many steps.
pub const AUTO_MIN_STEPS: usize = 20_000;
/// Default number of sample intervals per trajectory.
pub const DEFAULT_SAMPLES: usize = 2000;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Amplitudes `(c1, c2, c3)` over `{|L>, |M>, |R>}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector(pub CVec3);

impl StateVector {
    pub fn basis(k: usize) -> Self {
        let mut v = [C_ZERO; 3];
        v[k] = C_ONE;
        StateVector(v)
    }

    pub fn left() -> Self {
        Self::basis(0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn populations(&self) -> [f64; 3] {
        self.0.map(|c| c.norm_sqr())
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix(linalg::outer(&self.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(pub CMat3);

impl DensityMatrix {
    pub fn pure(psi: &StateVector) -> Self {
        psi.to_density()
    }

    /// `|L><L|`, the electron parked in the left dot.
    pub fn left() -> Self {
        Self::pure(&StateVector::left())
    }

    pub fn entries(&self) -> &CMat3 {
        &self.0
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.0)
    }

    pub fn purity(&self) -> f64 {
        linalg::trace(&linalg::matmul(&self.0, &self.0)).re
    }

    pub fn populations(&self) -> [f64; 3] {
        [self.0[0][0].re, self.0[1][1].re, self.0[2][2].re]
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::max_abs_diff(&self.0, &linalg::dagger(&self.0))
    }

    pub fn max_imag_diag(&self) -> f64 {
        (0..3).map(|k| self.0[k][k].im.abs()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(linalg::hermitian_eigenvalues(&self.0)?[0])
    }

    /// `tr(rho H)`
    pub fn expectation(&self, h: &CMat3) -> f64 {
        linalg::trace(&linalg::matmul(&self.0, h)).re
    }

    /// Hermitian, unit trace, non-negative spectrum.
    pub fn validate(&self) -> Result<()> {
        if self.0.iter().flatten().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("density matrix has non-finite entries".into()));
        }
        if self.hermiticity_error() > HERMITICITY_TOL {
            return Err(Error::InvalidInput("density matrix is not Hermitian".into()));
        }
        if (self.trace() - C_ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidInput("density matrix trace is not 1".into()));
        }
        if self.min_eigenvalue()? < -POSITIVITY_TOL {
            return Err(Error::InvalidInput("density matrix has a negative eigenvalue".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    /// `h = min(0.005 / (mu0 + |J1| + |J2|), 0.0025 / (|J1| + |J2|), tau / 20000)`,
    /// shrunk so the step count is a multiple of the default sample count.
    Auto,
    /// Upper bound on the step; shrunk so an integer number of steps spans `tau`.
    Fixed(f64),
    /// Exact number of steps over `[0, tau]`.
    Count(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub step: StepSize,
    /// Steps between recorded samples; `None` aims at about 2000 samples.
    pub sample_stride: Option<usize>,
    pub method: Method,
    /// When false, conservation breaches are only recorded in [`Drift`];
    /// used for convergence studies at deliberately coarse steps.
    pub enforce_invariants: bool,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            step: StepSize::Auto,
            sample_stride: None,
            method: Method::Rk4,
            enforce_invariants: true,
        }
    }
}

impl IntegratorOptions {
    pub fn with_step(step: StepSize) -> Self {
        IntegratorOptions {
            step,
            ..Default::default()
        }
    }

    /// Concrete step count, step length and sample stride for `config`.
    pub fn resolve(&self, config: &SystemConfig) -> Result<StepPlan> {
        let tau = config.schedule.tau;
        let n_steps = match self.step {
            StepSize::Auto => {
                let scale = config.energy_scale();
                let mut h_max = tau / AUTO_MIN_STEPS as f64;
                if scale > 0.0 {
                    h_max = h_max.min(AUTO_PHASE_PER_STEP / scale);
                }
                let coupling = config.couplings.j1.abs() + config.couplings.j2.abs();
                if coupling > 0.0 {
                    h_max = h_max.min(AUTO_COUPLING_PHASE_PER_STEP / coupling);
                }
                let raw = (tau / h_max).ceil() as usize;
                raw.div_ceil(DEFAULT_SAMPLES) * DEFAULT_SAMPLES
            }
            StepSize::Fixed(h) => {
                if !(h.is_finite() && h > 0.0) {
                    return Err(Error::InvalidInput("step must be > 0".into()));
                }
                if h > tau {
                    return Err(Error::InvalidInput("step must be ≤ tau".into()));
                }
                // absorb rounding in tau / h so exact divisors keep their count
                ((tau / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize
            }
            StepSize::Count(n) => {
                if n == 0 {
                    return Err(Error::InvalidInput("step count must be ≥ 1".into()));
                }
                n
            }
        };
        let stride = match self.sample_stride {
            Some(0) => return Err(Error::InvalidInput("sample_stride must be ≥ 1".into())),
            Some(s) => s,
            None => (n_steps / DEFAULT_SAMPLES).max(1),
        };
        Ok(StepPlan {
            n_steps,
            step: tau / n_steps as f64,
            stride,
        })
    }
}

/// Resolved step schedule of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan {
    pub n_steps: usize,
    pub step: f64,
    pub stride: usize,
}

impl StepPlan {
    fn is_sample(&self, k: usize) -> bool {
        k % self.stride == 0 || k == self.n_steps
    }
}

/// Worst conservation-law deviations seen over the samples of a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Drift {
    pub trace: f64,
    pub purity: f64,
    pub hermiticity: f64,
    pub imag_diag: f64,
    /// Most negative density eigenvalue, reported as a non-negative number.
    pub negativity: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum States {
    Density(Vec<DensityMatrix>),
    Pure(Vec<StateVector>),
}

/// Sampled output of one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: States,
    /// `(|c1|^2, |c2|^2, |c3|^2)` per sample.
    pub populations: Vec<[f64; 3]>,
    pub plan: StepPlan,
    pub drift: Drift,
}

impl Trajectory {
    pub fn final_populations(&self) -> [f64; 3] {
        *self.populations.last().expect("trajectory has at least one sample")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

trait OdeState: Copy {
    fn add_scaled(&self, other: &Self, c: f64) -> Self;
}

impl OdeState for CMat3 {
    fn add_scaled(&self, other: &Self, c: f64) -> Self {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] += other[i][j] * c;
            }
        }
        out
    }
}

impl OdeState for CVec3 {
    fn add_scaled(&self, other: &Self, c: f64) -> Self {
        [
            self[0] + other[0] * c,
            self[1] + other[1] * c,
            self[2] + other[2] * c,
        ]
    }
}

/// Drives RK4 over the step plan, handing each sample to `on_sample`.
fn integrate<S, F, G>(
    config: &SystemConfig,
    plan: &StepPlan,
    y0: S,
    rhs: F,
    mut on_sample: G,
) -> Result<()>
where
    S: OdeState,
    F: Fn(&CMat3, &S) -> S,
    G: FnMut(f64, &S) -> Result<()>,
{
    let tau = config.schedule.tau;
    let n = plan.n_steps as f64;
    let h = plan.step;
    let time = |k: usize| tau * (k as f64 / n);

    let mut y = y0;
    on_sample(0.0, &y)?;
    let mut h_start = hamiltonian_at(config, 0.0).0;
    for k in 0..plan.n_steps {
        let t = time(k);
        let h_mid = hamiltonian_at(config, t + 0.5 * h).0;
        let h_end = hamiltonian_at(config, time(k + 1)).0;

        let k1 = rhs(&h_start, &y);
        let k2 = rhs(&h_mid, &y.add_scaled(&k1, 0.5 * h));
        let k3 = rhs(&h_mid, &y.add_scaled(&k2, 0.5 * h));
        let k4 = rhs(&h_end, &y.add_scaled(&k3, h));
        y = y
            .add_scaled(&k1, h / 6.0)
            .add_scaled(&k2, h / 3.0)
            .add_scaled(&k3, h / 3.0)
            .add_scaled(&k4, h / 6.0);

        h_start = h_end;
        if plan.is_sample(k + 1) {
            on_sample(time(k + 1), &y)?;
        }
    }
    Ok(())
}

fn von_neumann_rhs(h: &CMat3, rho: &CMat3) -> CMat3 {
    let c = linalg::commutator(h, rho);
    let mut out = linalg::zeros();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = -I * c[i][j];
        }
    }
    out
}

fn schrodinger_rhs(h: &CMat3, psi: &CVec3) -> CVec3 {
    linalg::matvec(h, psi).map(|z| -I * z)
}

fn breach(enforce: bool, invariant: &'static str, t: f64, deviation: f64, tol: f64) -> Result<f64> {
    if !enforce || (deviation.is_finite() && deviation <= tol) {
        Ok(deviation)
    } else {
        Err(Error::IntegrationAccuracy {
            invariant,
            t,
            deviation,
        })
    }
}

/// Integrates the von Neumann equation from `rho0` at `t = 0` to `tau`.
pub fn evolve_density(
    config: &SystemConfig,
    rho0: &DensityMatrix,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    config.validate()?;
    rho0.validate()?;
    let plan = opts.resolve(config)?;
    let enforce = opts.enforce_invariants;
    let samples = plan.n_steps / plan.stride + 2;
    let mut times = Vec::with_capacity(samples);
    let mut states = Vec::with_capacity(samples);
    let mut populations = Vec::with_capacity(samples);
    let mut drift = Drift::default();
    let purity0 = rho0.purity();

    integrate(config, &plan, rho0.0, von_neumann_rhs, |t, y| {
        let rho = DensityMatrix(*y);
        let d = &mut drift;
        d.trace = d.trace.max(breach(enforce, "trace", t, (rho.trace() - C_ONE).norm(), TRACE_TOL)?);
        d.hermiticity = d
            .hermiticity
            .max(breach(enforce, "hermiticity", t, rho.hermiticity_error(), HERMITICITY_TOL)?);
        d.imag_diag = d
            .imag_diag
            .max(breach(enforce, "real diagonal", t, rho.max_imag_diag(), IMAG_DIAG_TOL)?);
        d.purity = d
            .purity
            .max(breach(enforce, "purity", t, (rho.purity() - purity0).abs(), PURITY_TOL)?);
        let negativity = (-rho.min_eigenvalue()?).max(0.0);
        d.negativity = d.negativity.max(breach(enforce, "positivity", t, negativity, POSITIVITY_TOL)?);
        times.push(t);
        populations.push(rho.populations());
        states.push(rho);
        Ok(())
    })?;

    Ok(Trajectory {
        times,
        states: States::Density(states),
        populations,
        plan,
        drift,
    })
}

/// Integrates the Schrödinger equation from `psi0`; the pure-state oracle for
/// [`evolve_density`].
pub fn evolve_state(
    config: &SystemConfig,
    psi0: &StateVector,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    config.validate()?;
    if (psi0.norm_sq() - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidInput("initial state is not normalised".into()));
    }
    let plan = opts.resolve(config)?;
    let enforce = opts.enforce_invariants;
    let samples = plan.n_steps / plan.stride + 2;
    let mut times = Vec::with_capacity(samples);
    let mut states = Vec::with_capacity(samples);
    let mut populations = Vec::with_capacity(samples);
    let mut drift = Drift::default();

    integrate(config, &plan, psi0.0, schrodinger_rhs, |t, y| {
        let psi = StateVector(*y);
        drift.norm = drift
            .norm
            .max(breach(enforce, "norm", t, (psi.norm_sq() - 1.0).abs(), NORM_TOL)?);
        times.push(t);
        populations.push(psi.populations());
        states.push(psi);
        Ok(())
    })?;

    Ok(Trajectory {
        times,
        states: States::Pure(states),
        populations,
        plan,
        drift,
    })
}

/// `|F(tau)|^2`: the right-dot population at the last sample.
pub fn transfer_fidelity(traj: &Trajectory) -> f64 {
    traj.final_populations()[2]
}
