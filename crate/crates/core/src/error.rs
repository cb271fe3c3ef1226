use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("statistics kind mismatch: {0}")]
    KindMismatch(String),
    #[error("no bound state for a_sc = {0}")]
    NoBoundState(f64),
    #[error("scattering length {0} too close to zero for the zero-range treatment")]
    BreakdownRegime(f64),
    #[error("scattering length is zero, g+ diverges")]
    ZeroScatteringLength,
    #[error("branch {branch} is not available: {reason}")]
    BranchOutOfRange { branch: i64, reason: String },
    #[error("Richardson ladder did not converge (last change {0:e})")]
    ExtrapolationFailure(f64),
    #[error("window too small: edge magnitude {edge:e} vs peak {peak:e}")]
    WindowTooSmall { edge: f64, peak: f64 },
    #[error("least-squares system ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),
    #[error("parent state is not real-valued (max imaginary part {0:e})")]
    ComplexParent(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
