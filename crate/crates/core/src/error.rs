use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical or structural invariant of an input was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The Jacobi sweep cap was reached without meeting the off-diagonal threshold.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("ground-state gap {gap:e} is degenerate at t = {t}")]
    SingularGap { t: f64, gap: f64 },

    #[error("level crossing: gap {gap:e} at t = {t}")]
    LevelCrossing { t: f64, gap: f64 },

    /// `|mu0^2 - j1^2|` is too small for the perturbative ground state to exist.
    #[error("perturbation theory invalid at resonance mu0^2 = j1^2 (mu0 = {mu0}, j1 = {j1})")]
    Resonance { mu0: f64, j1: f64 },

    #[error("integration accuracy lost: {invariant} deviates by {deviation:e} at t = {t}")]
    IntegrationAccuracy {
        invariant: &'static str,
        t: f64,
        deviation: f64,
    },

    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
