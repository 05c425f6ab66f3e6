use thiserror::Error;

/// Errors produced while building or evaluating lifted geometric structures.
#[derive(Debug, Error)]
pub enum GeometryError {
    /// The base manifold dimension must be at least 2 for the fiberwise
    /// coefficient extraction (two independent tensor directions) to work.
    #[error("base dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    /// The construction requires a round base: strictly positive constant
    /// sectional curvature.
    #[error("sectional curvature must be strictly positive, got {0}")]
    NonPositiveCurvature(f64),

    /// Gaussian elimination hit a pivot too small to trust.
    #[error("matrix inversion failed: pivot {pivot:.3e} too small at column {col}")]
    SingularMatrix { col: usize, pivot: f64 },

    /// Everything here lives on the cotangent bundle minus its zero section;
    /// a covector with (near-)zero energy density is outside the domain.
    #[error("covector too close to the zero section: energy density {0:.3e}")]
    NearZeroSection(f64),

    /// A pointwise admissibility condition on the coefficient family failed.
    #[error("constraint `{name}` violated at t = {t}: value {value:.6e}")]
    ConstraintViolated {
        name: &'static str,
        t: f64,
        value: f64,
    },

    /// Adaptive quadrature exceeded its recursion budget before reaching
    /// the requested tolerance.
    #[error("quadrature did not converge on [{a}, {b}]")]
    QuadratureDepth { a: f64, b: f64 },

    /// A point was supplied with the wrong number of coordinates.
    #[error("point arrays have mismatched lengths: x has {x_len}, p has {p_len}, expected {n}")]
    BadPointShape {
        x_len: usize,
        p_len: usize,
        n: usize,
    },
}

pub type Result<T> = std::result::Result<T, GeometryError>;
