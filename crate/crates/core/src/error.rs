use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// Cylinder-function order outside 0..=3.
    #[error("unsupported cylinder function order {0}")]
    InvalidOrder(u8),

    /// Invalid geometry or impurity parameters.
    #[error("invalid wire configuration: {0}")]
    InvalidConfig(String),

    /// kd lies within the guard band of a mode opening kd = mπ, where the
    /// longitudinal wavenumber of mode m vanishes.
    #[error("kd = {kd} lies within {guard:e} of the opening of mode {mode}")]
    ModeOpeningSingularity { kd: f64, mode: usize, guard: f64 },

    /// Green's function evaluated at a source or image point.
    #[error("field point coincides with a source point")]
    CoincidentPoints,

    /// 1 - s G_r vanishes: bound-state or resonance pole.
    #[error("pole of the renormalized t-matrix (|1 - s G_r| = {0:e})")]
    PoleEncountered(f64),

    /// Mode N has a node at the impurity, so its edge asymptote is undefined.
    #[error("mode {0} vanishes at the impurity position")]
    DegenerateMode(usize),

    /// The operation needs at least one open channel.
    #[error("no open channels at kd = {0}")]
    NoOpenChannels(f64),

    #[error("singular multiple-scattering system")]
    SingularSystem,

    /// Born series requested but the spectral radius of sG is not below one.
    #[error("Born series diverges (spectral radius of sG ~ {0:.4})")]
    BornDiverged(f64),

    /// Adaptive series did not reach the requested tolerance.
    #[error("series did not converge: tail bound {tail:e} after {terms} terms (tol {tol:e})")]
    NotConverged { terms: usize, tail: f64, tol: f64 },
}

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}
