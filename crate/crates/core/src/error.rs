use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum CsError {
    #[error("mesh endpoints must be finite with b > a, got [{a}, {b}]")]
    MeshEndpoints { a: f64, b: f64 },
    #[error("mesh needs at least one interval")]
    MeshEmpty,
    #[error("field has {actual} values but its mesh has {expected} nodes")]
    FieldLength { expected: usize, actual: usize },
    #[error("field value at node {index} is not finite")]
    FieldNotFinite { index: usize },
    #[error("operation requires a radial mesh starting at r = 0, got a = {a}")]
    NotRadial { a: f64 },
    #[error("fields live on different meshes")]
    MeshMismatch,
    #[error("difference stencils need at least 2 intervals, mesh has {n}")]
    TooFewIntervals { n: usize },
    #[error("exponent p = {p} outside the supported band ({lo}, {hi})")]
    POutOfBand { p: f64, lo: f64, hi: f64 },
    #[error("frequency omega must be finite and nonnegative, got {omega}")]
    InvalidOmega { omega: f64 },
    #[error("soliton scale k must be finite and positive, got {k}")]
    InvalidK { k: f64 },
    #[error("soliton curve is only defined for k > 0, got {k}")]
    KNotPositive { k: f64 },
    #[error("no soliton root available at omega = {omega}: the root equation has no solution above omega1 = {omega1}")]
    RootUnavailable { omega: f64, omega1: f64 },
    #[error("threshold ordering omega0 < omega1 < omega_bar fails numerically at p = {p}")]
    ThresholdOrdering { p: f64 },
    #[error("minimizer configuration invalid: {reason}")]
    BadConfig { reason: String },
    #[error("gradient descent diverged to non-finite energy after {} accepted steps", trace.len())]
    Diverged { trace: Vec<f64> },
    #[error("escape diagnostics need at least 3 runs over increasing radii, got {got}")]
    TooFewRadii { got: usize },
    #[error("diagnostic runs must be ordered by strictly increasing radius")]
    RadiiNotIncreasing,
    #[error("translated profile is not negligible at the origin: |U(-rho)| = {tail} exceeds {limit}")]
    TranslationTooSmall { tail: f64, limit: f64 },
    #[error("no sign change in [{lo}, {hi}]; cannot bisect")]
    NoBracket { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, CsError>;
