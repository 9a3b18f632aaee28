use crate::perturbation::MatrixFamily;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the geometry, perturbation, eigensolve and oracle
/// operations. Invalid caller input and numerical failures are kept as
/// separate variants so the CLI can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("semi-axis lengths must be positive and finite, got ({a}, {b}, {c})")]
    NonPositiveAxis { a: f64, b: f64, c: f64 },

    #[error("perturbation size must be positive and finite, got {0}")]
    NonPositiveEpsilon(f64),

    #[error("point ({x}, {y}, {z}) is not on the ellipsoid surface (relative residual {residual:.3e})")]
    PointNotOnSurface { x: f64, y: f64, z: f64, residual: f64 },

    #[error("mode order m = {m} out of range for level l = {l}")]
    ModeOutOfRange { l: u32, m: i64 },

    #[error("level l = 0 carries the single eigenvalue 0 and has no matrix families")]
    LevelZero,

    #[error("family {family} is empty at level l = {l}")]
    EmptyFamily { l: u32, family: MatrixFamily },

    #[error("tridiagonal shape mismatch: {diag} diagonal and {offdiag} off-diagonal entries")]
    MalformedTridiagonal { diag: usize, offdiag: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("matrix entry ({i}, {j}) breaks symmetry: {aij} vs {aji}")]
    NotSymmetric { i: usize, j: usize, aij: f64, aji: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("mass matrix is not positive definite (quadrature too coarse or basis degenerate)")]
    MassNotPositiveDefinite,

    #[error("quadrature too coarse: need n_theta >= {min_theta} and n_phi >= {min_phi}, got ({n_theta}, {n_phi})")]
    QuadratureTooCoarse {
        n_theta: usize,
        n_phi: usize,
        min_theta: usize,
        min_phi: usize,
    },

    #[error("basis degree {degree} resolves only {trusted} modes but level cap {level_cap} needs {needed}")]
    InsufficientResolution {
        degree: usize,
        trusted: usize,
        level_cap: u32,
        needed: usize,
    },

    #[error("eigenvalue clusters for levels {l} and {l_next} overlap at eps = {eps}; use a smaller eps")]
    ClusterOverlap { l: u32, l_next: u32, eps: f64 },

    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,
}

impl Error {
    /// True when the error reflects invalid caller input rather than a
    /// numerical failure inside the computation.
    pub fn is_invalid_input(&self) -> bool {
        !matches!(
            self,
            Error::MassNotPositiveDefinite | Error::ClusterOverlap { .. } | Error::NoConvergence
        )
    }
}
