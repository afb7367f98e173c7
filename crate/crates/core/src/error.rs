use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration or type invariant was violated. `field` is the config path.
    #[error("invalid `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("no restoring torque: {0}")]
    NoTrap(String),

    /// A steady state was demanded from a system whose drift matrix has an
    /// eigenvalue with non-negative real part.
    #[error("system is dynamically unstable (max Re(lambda) = {max_real_eig:.6e} rad/s), no steady state")]
    Unstable { max_real_eig: f64 },

    #[error("singular {what} at omega = {omega:.6e} rad/s")]
    Singular { what: &'static str, omega: f64 },

    #[error("eigenvalue solver failed to converge")]
    EigenSolver,

    #[error("unknown preset `{0}` (expected one of fig2, fig3, fig4a, fig4b, fig5, fig6a, fig6b, fig7)")]
    UnknownPreset(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::Config(_)
            | Error::UnknownPreset(_)
            | Error::Io(_) => 1,
            Error::NoTrap(_) | Error::Unstable { .. } | Error::Singular { .. } | Error::EigenSolver => 2,
            Error::Verification(_) => 3,
        }
    }
}
