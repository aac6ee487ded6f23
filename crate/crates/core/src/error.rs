use thiserror::Error;

/// Errors produced by sequence construction, condition checks and synthesis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("table `{label}` holds indices 0..={max}, index {requested} requested; \
             tabulated sequences are not extrapolated (declare an envelope instead)")]
    TableExhausted {
        label: String,
        max: usize,
        requested: usize,
    },

    #[error("horizon {horizon} too small: {need}")]
    HorizonTooSmall { horizon: usize, need: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-positive table entry at p = {p}: M_p = {value}")]
    NonPositiveEntry { p: usize, value: f64 },

    #[error("omega may be infinite: (M_p)^(1/p) does not tend to infinity at the horizon")]
    OmegaInfinite,

    #[error("horizon exhausted: {0}")]
    HorizonExhausted(String),

    #[error("grid too coarse: width {width:.3e} spans {steps:.1} grid steps (need >= {min_steps})")]
    GridTooCoarse {
        width: f64,
        steps: f64,
        min_steps: usize,
    },

    #[error("support budget exceeded: radius {radius:.6} > {budget:.6} (h too small)")]
    SupportExceeded { radius: f64, budget: f64 },

    #[error("derivative order {order} unreliable: methods disagree by {discrepancy:.3e} \
             (allowed {allowed:.3e})")]
    UnreliableOrder {
        order: usize,
        discrepancy: f64,
        allowed: f64,
    },

    #[error("extension operator not constructible: {0}")]
    NotConstructible(String),

    #[error("lambda table too short to certify the parameter conditions: {0}")]
    LambdaTableTooShort(String),

    #[error("convolution order {requested} exceeds the explicit coefficients (len {available})")]
    ConvolutionOrder { requested: usize, available: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
