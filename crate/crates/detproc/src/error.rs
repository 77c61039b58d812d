use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("truncation bound not established: {0}")]
    Divergence(String),
    #[error("imaginary residue {imag:.3e} exceeds {tol:.1e}")]
    ImaginaryResidue { imag: f64, tol: f64 },
    #[error("contour geometry: {0}")]
    Geometry(String),
    #[error("step collapse at t = {t}: substep {h:.3e} below floor")]
    StepCollapse { t: f64, h: f64 },
    #[error("singular drift: {0}")]
    Singularity(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for failures of a numerical scheme rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence(_)
                | Error::Divergence(_)
                | Error::ImaginaryResidue { .. }
                | Error::StepCollapse { .. }
                | Error::Overflow(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
