use thiserror::Error;

/// Everything that can go wrong in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("state vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("matrix is not unitary (max defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("state is not of X form (off-pattern magnitude {defect:e})")]
    NotXForm { defect: f64 },

    #[error("closed-form propagation needs identical atoms, got rates ({gamma_a}, {gamma_b})")]
    UnequalRates { gamma_a: f64, gamma_b: f64 },

    #[error("correlation t[{n}][{m}] has imaginary part {im:e}")]
    ComplexCorrelation { n: usize, m: usize, im: f64 },

    #[error("malformed state file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value, lo, hi })
    }
}
