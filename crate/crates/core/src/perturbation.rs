//! First-order perturbative ground state at the end of the transfer and the
//! closed-form transfer fidelity.
//!
//! At `t = tau` the left pulse has decayed and the right dot sits at `-mu0`.
//! Treating the M–R bond `J2` as the perturbation on top of
//! `J1 (|L><M| + |M><L|) - mu0 |R><R|`, the corrected ground state is
//!
//! ```text
//! |psi0> = J1 J2 / (mu0^2 - J1^2) |L>  -  mu0 J2 / (mu0^2 - J1^2) |M>  +  |R>
//! ```
//!
//! and the fidelity follows from its normalised `|R>` weight. The residual
//! left-pulse tail at `t = tau` is neglected.

use crate::error::{Error, Result};

/// Relative width of the rejected band around `mu0^2 = J1^2`.
pub const RESONANCE_GUARD: f64 = 1e-9;

/// Unnormalised first-order ground state, `a_R = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbativeGroundState {
    /// `(a_L, a_M, a_R)`
    pub amplitudes: [f64; 3],
    pub j1: f64,
    pub j2: f64,
    pub mu0: f64,
}

impl PerturbativeGroundState {
    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    /// Unit vector along the amplitudes.
    pub fn normalized(&self) -> [f64; 3] {
        let n = self.norm_sq().sqrt();
        self.amplitudes.map(|a| a / n)
    }

    /// Squared weight of `|R>` after normalisation.
    pub fn right_weight(&self) -> f64 {
        self.amplitudes[2] * self.amplitudes[2] / self.norm_sq()
    }
}

/// `mu0^2 - J1^2`, rejected when it is zero or within the resonance guard.
fn detuning(j1: f64, j2: f64, mu0: f64) -> Result<f64> {
    if ![j1, j2, mu0].iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidInput("parameters must be finite".into()));
    }
    let d = mu0 * mu0 - j1 * j1;
    if d == 0.0 || d.abs() < RESONANCE_GUARD * mu0 * mu0 {
        return Err(Error::Resonance { mu0, j1 });
    }
    Ok(d)
}

pub fn corrected_ground_state(j1: f64, j2: f64, mu0: f64) -> Result<PerturbativeGroundState> {
    if !(mu0 > 0.0) {
        return Err(Error::InvalidInput("mu0 must be > 0".into()));
    }
    let d = detuning(j1, j2, mu0)?;
    Ok(PerturbativeGroundState {
        amplitudes: [j1 * j2 / d, -mu0 * j2 / d, 1.0],
        j1,
        j2,
        mu0,
    })
}

/// `|F(tau)|^2 = [1 + J2^2 (mu0^2 + J1^2) / (mu0^2 - J1^2)^2]^-1`
pub fn analytic_fidelity(j1: f64, j2: f64, mu0: f64) -> Result<f64> {
    let d = detuning(j1, j2, mu0)?;
    let excess = j2 * j2 * (mu0 * mu0 + j1 * j1) / (d * d);
    Ok(1.0 / (1.0 + excess))
}
