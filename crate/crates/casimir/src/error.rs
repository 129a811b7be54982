use thiserror::Error;

/// Errors surfaced by the numerical kernels and the configuration front end.
#[derive(Error, Debug)]
pub enum CasimirError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("Matsubara sum did not converge: reached l = {l_max} with relative tail estimate {tail_estimate:.3e} (requested {requested:.3e})")]
    SumNotConverged {
        l_max: usize,
        tail_estimate: f64,
        requested: f64,
    },

    #[error("quadrature did not converge: error estimate {estimate:.3e} after {subdivisions} subdivisions (requested {requested:.3e})")]
    QuadratureNotConverged {
        estimate: f64,
        subdivisions: usize,
        requested: f64,
    },

    #[error("entropy differentiation unstable at T = {temperature} K: step estimates disagree by {discrepancy:.3e} (limit {limit:.3e})")]
    DerivativeUnstable {
        temperature: f64,
        discrepancy: f64,
        limit: f64,
    },

    #[error("zero-temperature fit failed: {0}")]
    FitFailed(String),

    #[error("ill-conditioned evaluation: {0}")]
    IllConditioned(String),

    #[error("{path}:{line}: parse error: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, CasimirError>;
