//! System parameters, Gaussian gate-voltage pulses and the instantaneous
//! Hamiltonian of the three-dot chain.
//!
//! Basis order is `{|L>, |M>, |R>}`. The chain Hamiltonian is
//!
//! ```text
//!        | mu_L(t)  J1     0      |
//! H(t) = | J1       0      J2     |
//!        | 0        J2     mu_R(t)|
//! ```
//!
//! with `mu_L(t) = -mu0 exp(-alpha^2 t^2 / 2)` and
//! `mu_R(t) = -mu0 exp(-alpha^2 (t - tau)^2 / 2)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat3};

/// Below this value of `alpha * tau` the two pulses overlap noticeably at the
/// window edges.
pub const MIN_RECOMMENDED_ALPHA_TAU: f64 = 3.0;

/// Fixed nearest-neighbour tunnelling constants. Either sign is accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingPair {
    pub j1: f64,
    pub j2: f64,
}

impl CouplingPair {
    pub fn new(j1: f64, j2: f64) -> Result<Self> {
        let pair = CouplingPair { j1, j2 };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.j1.is_finite() {
            return Err(Error::InvalidInput("j1 must be finite".into()));
        }
        if !self.j2.is_finite() {
            return Err(Error::InvalidInput("j2 must be finite".into()));
        }
        Ok(())
    }
}

/// Drive parameters shared by both gate-voltage Gaussians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSchedule {
    /// Peak depth of both pulses.
    pub mu0: f64,
    /// Inverse-time width parameter.
    pub alpha: f64,
    /// Total evolution time; the right pulse peaks here.
    pub tau: f64,
}

impl PulseSchedule {
    pub fn new(mu0: f64, alpha: f64, tau: f64) -> Result<Self> {
        let schedule = PulseSchedule { mu0, alpha, tau };
        schedule.validate()?;
        Ok(schedule)
    }

    /// Schedule with `alpha = k / tau`.
    pub fn with_shape(mu0: f64, k: f64, tau: f64) -> Result<Self> {
        Self::new(mu0, k / tau, tau)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu0.is_finite() && self.mu0 >= 0.0) {
            return Err(Error::InvalidInput("mu0 must be ≥ 0".into()));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidInput("alpha must be > 0".into()));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidInput("tau must be > 0".into()));
        }
        Ok(())
    }

    /// Dimensionless pulse shape `alpha * tau`.
    pub fn shape(&self) -> f64 {
        self.alpha * self.tau
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.shape() < MIN_RECOMMENDED_ALPHA_TAU {
            out.push(format!(
                "alpha*tau = {} < {}: pulse tails overlap at the window edges",
                self.shape(),
                MIN_RECOMMENDED_ALPHA_TAU
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub couplings: CouplingPair,
    pub schedule: PulseSchedule,
}

impl SystemConfig {
    pub fn new(couplings: CouplingPair, schedule: PulseSchedule) -> Result<Self> {
        let config = SystemConfig {
            couplings,
            schedule,
        };
        config.validate()?;
        Ok(config)
    }

    /// Shorthand constructor taking the raw parameters.
    pub fn from_params(j1: f64, j2: f64, mu0: f64, alpha: f64, tau: f64) -> Result<Self> {
        Self::new(CouplingPair::new(j1, j2)?, PulseSchedule::new(mu0, alpha, tau)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.couplings.validate()?;
        self.schedule.validate()
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = self.schedule.warnings();
        if self.couplings.j2 == 0.0 {
            out.push("j2 = 0: the right dot is disconnected".into());
        }
        out
    }

    /// `mu0 + |J1| + |J2|`, an upper bound on the largest entry of `H(t)`.
    pub fn energy_scale(&self) -> f64 {
        self.schedule.mu0 + self.couplings.j1.abs() + self.couplings.j2.abs()
    }

    /// The same system with `J_i -> -J_i`.
    pub fn gauge_flipped(&self) -> Self {
        SystemConfig {
            couplings: CouplingPair {
                j1: -self.couplings.j1,
                j2: -self.couplings.j2,
            },
            schedule: self.schedule,
        }
    }
}

/// A 3×3 Hermitian matrix in the `{|L>, |M>, |R>}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix3(pub CMat3);

impl HermitianMatrix3 {
    pub fn from_real(m: [[f64; 3]; 3]) -> Self {
        let mut out = linalg::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = Complex64::new(m[i][j], 0.0);
            }
        }
        HermitianMatrix3(out)
    }

    pub fn entries(&self) -> &CMat3 {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    /// Real parts; the chain Hamiltonian has no imaginary entries.
    pub fn real_part(&self) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.0[i][j].re;
            }
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::max_abs_diff(&self.0, &linalg::dagger(&self.0)) <= tol
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().flatten().all(|z| z.im == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.0)
    }

    /// `<u| H |v>` for real vectors.
    pub fn real_sandwich(&self, u: &[f64; 3], v: &[f64; 3]) -> f64 {
        let m = self.real_part();
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                acc += u[i] * m[i][j] * v[j];
            }
        }
        acc
    }

    /// `P H P` with `P` the anti-diagonal permutation `|L> <-> |R>`.
    pub fn reversed(&self) -> Self {
        let mut out = linalg::zeros();
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.0[2 - i][2 - j];
            }
        }
        HermitianMatrix3(out)
    }
}

pub fn gate_voltage_left(schedule: &PulseSchedule, t: f64) -> f64 {
    let a = schedule.alpha;
    -schedule.mu0 * (-0.5 * a * a * t * t).exp()
}

pub fn gate_voltage_right(schedule: &PulseSchedule, t: f64) -> f64 {
    let a = schedule.alpha;
    let s = t - schedule.tau;
    -schedule.mu0 * (-0.5 * a * a * s * s).exp()
}

/// Analytic time derivatives `(d mu_L/dt, d mu_R/dt)`.
pub fn gate_voltage_rates(schedule: &PulseSchedule, t: f64) -> (f64, f64) {
    let a2 = schedule.alpha * schedule.alpha;
    let s = t - schedule.tau;
    let left = schedule.mu0 * a2 * t * (-0.5 * a2 * t * t).exp();
    let right = schedule.mu0 * a2 * s * (-0.5 * a2 * s * s).exp();
    (left, right)
}

pub fn hamiltonian_at(config: &SystemConfig, t: f64) -> HermitianMatrix3 {
    let CouplingPair { j1, j2 } = config.couplings;
    HermitianMatrix3::from_real([
        [gate_voltage_left(&config.schedule, t), j1, 0.0],
        [j1, 0.0, j2],
        [0.0, j2, gate_voltage_right(&config.schedule, t)],
    ])
}

/// `dH/dt = diag(d mu_L/dt, 0, d mu_R/dt)`.
pub fn hamiltonian_rate_at(config: &SystemConfig, t: f64) -> HermitianMatrix3 {
    let (left, right) = gate_voltage_rates(&config.schedule, t);
    HermitianMatrix3::from_real([[left, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, right]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn baseline_schedule() -> PulseSchedule {
        PulseSchedule::new(20.0, 5.0 / 375.0, 375.0).unwrap()
    }

    fn baseline_config() -> SystemConfig {
        SystemConfig::from_params(0.8, 1.0, 20.0, 5.0 / 400.0, 400.0).unwrap()
    }

    #[test]
    fn left_pulse_peaks_at_zero() {
        assert_eq!(gate_voltage_left(&baseline_schedule(), 0.0), -20.0);
    }

    #[test]
    fn right_pulse_peaks_at_tau() {
        assert_eq!(gate_voltage_right(&baseline_schedule(), 375.0), -20.0);
    }

    #[test]
    fn pulse_tails_at_window_edges() {
        // -20 e^{-12.5}
        let expected = -7.453_306_344_157_342e-5;
        assert_relative_eq!(gate_voltage_left(&baseline_schedule(), 375.0), expected, max_relative = 1e-12);
        assert_relative_eq!(gate_voltage_right(&baseline_schedule(), 0.0), expected, max_relative = 1e-12);
    }

    #[test]
    fn zero_amplitude_pulses_vanish() {
        let s = PulseSchedule::new(0.0, 0.3, 10.0).unwrap();
        for t in [-4.0, 0.0, 3.3, 10.0, 50.0] {
            assert_eq!(gate_voltage_left(&s, t), 0.0);
            assert_eq!(gate_voltage_right(&s, t), 0.0);
            assert_eq!(hamiltonian_rate_at(&SystemConfig::new(CouplingPair::new(1.0, 1.0).unwrap(), s).unwrap(), t).max_abs(), 0.0);
        }
    }

    #[test]
    fn rates_at_origin() {
        let s = baseline_schedule();
        let (l, r) = gate_voltage_rates(&s, 0.0);
        assert_eq!(l, 0.0);
        let a2 = s.alpha * s.alpha;
        assert_relative_eq!(r, -s.mu0 * a2 * s.tau * (-0.5 * a2 * s.tau * s.tau).exp(), max_relative = 1e-14);
    }

    #[test]
    fn left_rate_at_midpoint() {
        // 20 (5/375)^2 187.5 e^{-3.125}
        let (l, _) = gate_voltage_rates(&baseline_schedule(), 187.5);
        assert_relative_eq!(l, 0.029_291_289_082_271_618, max_relative = 1e-12);
        let d = 1e-4;
        let s = baseline_schedule();
        let fd = (gate_voltage_left(&s, 187.5 + d) - gate_voltage_left(&s, 187.5 - d)) / (2.0 * d);
        assert_relative_eq!(l, fd, max_relative = 1e-8);
    }

    #[test]
    fn hamiltonian_at_origin() {
        let c = SystemConfig::new(CouplingPair::new(0.8, 1.0).unwrap(), baseline_schedule()).unwrap();
        let h = hamiltonian_at(&c, 0.0).real_part();
        assert_eq!(h[0], [-20.0, 0.8, 0.0]);
        assert_eq!(h[1], [0.8, 0.0, 1.0]);
        assert_eq!(h[2][0], 0.0);
        assert_eq!(h[2][1], 1.0);
        assert_relative_eq!(h[2][2], -7.453_306_344_157_342e-5, max_relative = 1e-12);
    }

    #[test]
    fn hamiltonian_zero_when_everything_off() {
        let c = SystemConfig::from_params(0.0, 0.0, 0.0, 0.1, 5.0).unwrap();
        assert_eq!(hamiltonian_at(&c, 1.7).max_abs(), 0.0);
    }

    #[test]
    fn rate_at_origin_has_only_right_entry() {
        let c = baseline_config();
        let hd = hamiltonian_rate_at(&c, 0.0).real_part();
        assert_eq!(hd[0][0], 0.0);
        assert!(hd[2][2] < 0.0);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(hd[i][j], 0.0);
                }
            }
        }
    }

    #[test]
    fn rate_matches_finite_difference_over_grid() {
        let c = baseline_config();
        let d = 1e-4;
        let tau = c.schedule.tau;
        for k in 0..100 {
            let t = tau * k as f64 / 99.0;
            let plus = hamiltonian_at(&c, t + d);
            let minus = hamiltonian_at(&c, t - d);
            let mut fd = linalg::zeros();
            for i in 0..3 {
                for j in 0..3 {
                    fd[i][j] = (plus.0[i][j] - minus.0[i][j]) / (2.0 * d);
                }
            }
            let err = linalg::max_abs_diff(&fd, hamiltonian_rate_at(&c, t).entries());
            assert!(err <= 1e-6, "t = {t}: {err:e}");
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(PulseSchedule::new(-5.0, 0.1, 10.0).unwrap_err().to_string().contains("mu0 must be ≥ 0"));
        assert!(PulseSchedule::new(1.0, 0.0, 10.0).is_err());
        assert!(PulseSchedule::new(1.0, 0.1, -1.0).is_err());
        assert!(PulseSchedule::new(f64::NAN, 0.1, 1.0).is_err());
        assert!(CouplingPair::new(f64::INFINITY, 1.0).is_err());
        assert!(PulseSchedule::new(20.0, 2.0 / 400.0, 400.0).unwrap().warnings().len() == 1);
        assert!(PulseSchedule::new(20.0, 5.0 / 400.0, 400.0).unwrap().warnings().is_empty());
    }

    proptest! {
        #[test]
        fn hamiltonian_structure(j1 in -3.0f64..3.0, j2 in -3.0f64..3.0, mu0 in 0.0f64..50.0,
                                 k in 3.0f64..8.0, tau in 1.0f64..500.0, frac in -0.5f64..1.5) {
            let c = SystemConfig::from_params(j1, j2, mu0, k / tau, tau).unwrap();
            let t = frac * tau;
            let h = hamiltonian_at(&c, t);
            prop_assert!(h.is_real());
            prop_assert!(h.is_hermitian(0.0));
            prop_assert_eq!(h.get(0, 2), Complex64::new(0.0, 0.0));
            let l = gate_voltage_left(&c.schedule, t);
            let r = gate_voltage_right(&c.schedule, t);
            prop_assert!((-mu0..=0.0).contains(&l));
            prop_assert!((-mu0..=0.0).contains(&r));
            // mirror relations
            prop_assert!((r - gate_voltage_left(&c.schedule, tau - t)).abs() <= 1e-12 * mu0.max(1.0));
            let (ldot, _) = gate_voltage_rates(&c.schedule, tau - t);
            let (_, rdot) = gate_voltage_rates(&c.schedule, t);
            prop_assert!((rdot + ldot).abs() <= 1e-12 * (mu0 * c.schedule.alpha).max(1e-300));
        }

        #[test]
        fn reflection_symmetry_for_equal_couplings(j in -3.0f64..3.0, mu0 in 0.0f64..50.0,
                                                   k in 3.0f64..8.0, tau in 1.0f64..500.0, frac in 0.0f64..1.0) {
            let c = SystemConfig::from_params(j, j, mu0, k / tau, tau).unwrap();
            let t = frac * tau;
            let lhs = hamiltonian_at(&c, t).reversed();
            let rhs = hamiltonian_at(&c, tau - t);
            prop_assert!(linalg::max_abs_diff(lhs.entries(), rhs.entries()) <= 1e-12 * mu0.max(1.0));
        }
    }
}
