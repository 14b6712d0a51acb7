use thiserror::Error;

/// Errors raised by the geometric and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a formula by more than the
    /// clamping tolerance.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// The antiprism parameters lie outside the existence region.
    #[error("({n}, {a}, {c}) lies outside the existence region: {violated} = {margin:e} < 0")]
    OutsideRegion {
        n: u32,
        a: f64,
        c: f64,
        violated: &'static str,
        margin: f64,
    },

    /// Two routes that must agree produced incompatible values.
    #[error("inconsistency in {op}: {detail}")]
    Inconsistent { op: &'static str, detail: String },

    /// A face or triangle collapsed where a proper one was required.
    #[error("degenerate configuration in {op}: {detail}")]
    Degenerate { op: &'static str, detail: String },

    /// An edge/face adjacency lookup failed.
    #[error("incidence error: {0}")]
    Incidence(String),

    /// The adaptive integrator hit its subdivision cap.
    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {error_estimate:e}, requested {requested:e})")]
    Convergence {
        subdivisions: usize,
        error_estimate: f64,
        requested: f64,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
