use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("profile has no layers")]
    EmptyProfile,
    #[error("layer {index}: width must be positive, got {width} nm")]
    NonPositiveWidth { index: usize, width: f64 },
    #[error("layer {index}: height must be finite and non-negative, got {height} eV")]
    InvalidHeight { index: usize, height: f64 },
    #[error("mass ratio must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("wave number k = 0 has no exterior plane waves")]
    ZeroWavenumber,
    #[error("layer {index}: |Im(q)·width| = {exponent:.1} exceeds the overflow guard")]
    LayerOverflow { index: usize, exponent: f64 },
    #[error("position x = {x} nm lies outside [0, {length}] nm")]
    OutsideStructure { x: f64, length: f64 },
    #[error("energy must be positive and finite, got {0} eV")]
    InvalidEnergy(f64),

    #[error("Newton refinement did not converge after {iterations} iterations (last iterate {last})")]
    NoConvergence {
        iterations: usize,
        last: Complex64,
        trace: Vec<Complex64>,
    },
    #[error("pole iterate left the fourth quadrant at {last}")]
    QuadrantEscape { last: Complex64, trace: Vec<Complex64> },
    #[error("requested {requested} poles but only {found} poles found below {ceiling_ev} eV")]
    TooFewPoles {
        requested: usize,
        found: usize,
        ceiling_ev: f64,
    },
    #[error("resonant state at k = {k} violates the outgoing condition at x = L (residual {residual:.3e})")]
    PoleQuality { k: Complex64, residual: f64 },

    #[error("time must be non-negative, got {0} ps")]
    NegativeTime(f64),
    #[error("time must be strictly positive for the transient formula, got {0} ps")]
    NonPositiveTime(f64),
    #[error("two-level formulas need at least two resonant modes, got {0}")]
    NeedDoublet(usize),
    #[error("degenerate doublet: both resonances at {0} eV")]
    DegenerateDoublet(f64),
    #[error("time grid must be strictly increasing and non-negative")]
    InvalidTimeGrid,
    #[error("trace too short for spectral analysis: {0}")]
    ShortTrace(String),
}

pub type Result<T> = std::result::Result<T, Error>;
