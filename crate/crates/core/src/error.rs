use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("exponent p = {0} outside [1, ∞)")]
    InvalidExponent(f64),
    #[error("radius r = {0} outside (0, 1]")]
    InvalidRadius(f64),
    #[error("{points} quadrature points is below the oversampling floor {floor} for order {order}")]
    TooFewPoints { points: usize, floor: usize, order: usize },
    #[error("quadrature mode {mode} cannot handle p = {p}")]
    ModeMismatch { mode: &'static str, p: f64 },
    #[error("integral means decrease in r ({inner} at r = {r_inner} > {outer} at r = {r_outer})")]
    NotMonotone { r_inner: f64, inner: f64, r_outer: f64, outer: f64 },
    #[error("operator depth n must be at least 1")]
    ZeroDepth,
    #[error("invalid inner function: {0}")]
    InvalidInner(String),
    #[error("point {0} is outside the domain of the inner function")]
    OutsideDomain(String),
    #[error("{0}")]
    Precondition(String),
    #[error("invalid subspace spec: {0}")]
    InvalidSpec(String),
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
