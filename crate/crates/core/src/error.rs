use thiserror::Error;

/// Everything that can go wrong across the crate. Variants carry enough
/// context to be actionable without a debugger.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("x_max ({x_max}) must exceed x_min ({x_min})")]
    DegenerateInterval { x_min: f64, x_max: f64 },

    #[error("grid needs at least 3 points, got {n_points}")]
    TooFewPoints { n_points: usize },

    #[error("{what}: expected {expected} values, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    /// Returned by every routine that divides by T. Callers handle T = 0
    /// through the dedicated zero-temperature paths, never by limits.
    #[error("temperature is zero: use the explicit zero-temperature branch")]
    ZeroTemperature,

    #[error("temperature must be non-negative, got {value}")]
    NegativeTemperature { value: f64 },

    #[error("spectrum holds no levels")]
    EmptySpectrum,

    #[error("level energies must ascend: E[{index}] = {value} does not exceed its predecessor {previous}")]
    NonAscendingLevels {
        index: usize,
        value: f64,
        previous: f64,
    },

    #[error("level index {index} out of range for {count} levels")]
    LevelIndexOutOfRange { index: usize, count: usize },

    #[error("degeneracy must be at least 1")]
    ZeroDegeneracy,

    #[error("explicit degeneracy table has {actual} entries for {expected} levels")]
    DegeneracyTableMismatch { expected: usize, actual: usize },

    #[error("occupied level {index} lists degeneracy {stated} but the spectrum holds {actual}")]
    OccupationDegeneracyMismatch {
        index: usize,
        stated: u32,
        actual: u32,
    },

    #[error("probability must lie in (0, 1], got {value}")]
    InvalidProbability { value: f64 },

    #[error("tolerance must be positive and finite, got {value}")]
    InvalidTolerance { value: f64 },

    #[error("damping must lie in (0, 1], got {value}")]
    InvalidDamping { value: f64 },

    #[error("requested {k} eigenvalues; a {order}-point interior admits 1..={order}")]
    EigenCountOutOfRange { k: usize, order: usize },

    #[error("inverse iteration stalled after {budget} sweeps (best residual {residual:.3e})")]
    EigenNonConvergence { budget: usize, residual: f64 },

    #[error("partition tail estimate {estimate:.3e} exceeds the bound {bound:.3e}; supply more levels")]
    TailBoundViolated { estimate: f64, bound: f64 },

    #[error("partition terms are not decaying (last ratio {ratio}); the tail cannot be bounded")]
    TailNotDecaying { ratio: f64 },

    #[error("partition fixed point not converged after {iterations} iterations: {previous} -> {last}")]
    FixedPointNonConvergence {
        iterations: usize,
        last: f64,
        previous: f64,
    },

    #[error("state probabilities must sum to 1 within {tol:e}, got {sum}")]
    UnnormalizedStateProbabilities { sum: f64, tol: f64 },

    #[error("superposition coefficients must satisfy sum |c|^2 = 1, got {sum_sq}")]
    UnnormalizedCoefficients { sum_sq: f64 },

    #[error("{what} disagree beyond {tol:e}: {lhs} vs {rhs}")]
    ConsistencyFailure {
        what: &'static str,
        lhs: f64,
        rhs: f64,
        tol: f64,
    },

    #[error("wave fields live on different grids")]
    GridMismatch,

    #[error("grid index {index} out of range for {len} points")]
    GridIndexOutOfRange { index: usize, len: usize },

    #[error("level {index} carries no wavefunction samples")]
    MissingWavefunction { index: usize },

    #[error("superposition needs at least one component")]
    EmptySuperposition,

    #[error("field is numerically zero; residuals are undefined")]
    NullField,

    #[error("wavefunction norm is {norm}, expected 1 on its grid")]
    NotNormalized { norm: f64 },

    #[error("pair interaction energy {value} unsupported: only non-interacting configurations have product-state solutions")]
    UnsupportedInteraction { value: f64 },

    #[error("occupation list is empty")]
    EmptyOccupations,
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shared finiteness guard for scalar inputs.
pub(crate) fn ensure_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}

/// Shared positivity guard (also rejects NaN and infinities).
pub(crate) fn ensure_positive(what: &'static str, value: f64) -> Result<f64> {
    ensure_finite(what, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { what, value })
    }
}
