use std::path::PathBuf;

/// Errors produced by the solver, the inequality lab and the I/O layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("field is not real: Hermitian symmetry residue {residue:e} exceeds tolerance {tolerance:e}")]
    NonRealField { residue: f64, tolerance: f64 },

    #[error("field has nonzero mean {mean:e}; operator is undefined on constants")]
    NonZeroMean { mean: f64 },

    #[error("non-finite values after step {step} at t = {t}")]
    BlowUp { t: f64, step: u64 },

    #[error("quadrature did not converge on [{a}, {b}] after {evaluations} panels (last error estimate {estimate:e})")]
    Quadrature {
        a: f64,
        b: f64,
        evaluations: usize,
        estimate: f64,
    },

    #[error("configuration error for key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
