use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mass must be nonzero")]
    ZeroMass,
    #[error("surface mass must be positive, got {0}")]
    NonPositiveSurfaceMass(f64),
    #[error("anisotropy 4*M1/M2 + 1 = {0} is negative; x is not real")]
    ComplexAnisotropy(f64),
    #[error("n = 1 closed form degenerates at x = 2 (M1/M2 = 3/4)")]
    DegenerateAnisotropy,
    #[error("n = 1 discriminant {0} is negative")]
    ComplexDiscriminant(f64),
    #[error("twist rate is zero; the Heun reduction is undefined")]
    ZeroTwist,
    #[error("metric determinant {0} is not positive")]
    DegenerateMetric(f64),
    #[error("recurrence breaks down at s = {0} (A_s = 0)")]
    RecurrenceBreakdown(usize),
    #[error("continuation path to z = {0} crosses the singular point z = 1")]
    SingularPath(f64),
    #[error("series did not converge within {0} terms")]
    NonConvergence(usize),
    #[error("argument z = {0} is a singular point")]
    SingularArgument(f64),
    #[error("no root of the termination condition in [{0}, {1}]")]
    NoRootInWindow(f64, f64),
    #[error("line (E = {energy}, Omega = {frequency}) violates the energy condition")]
    InvalidLine { energy: f64, frequency: f64 },
    #[error("E = {energy} is not an eigenvalue (residual {residual:e})")]
    NotAnEigenvalue { energy: f64, residual: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
