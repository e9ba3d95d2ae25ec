use thiserror::Error;

use crate::scattering::PoleClass;

/// Every failure the library reports.
///
/// Payloads are carried as `f64` so the error type does not depend on the
/// scalar the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma function pole at -{0}")]
    PoleOfGamma(u64),
    #[error("invalid Kummer parameter c = {re} + {im}i (non-positive integer without an earlier terminating a)")]
    InvalidC { re: f64, im: f64 },
    #[error("non-finite Kummer argument")]
    NonFiniteArgument,
    #[error("series did not converge within {0} terms")]
    NoConvergence(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("S(k) has a pole at k = {im_k}i ({class:?}, index {series_index})")]
    AtPole {
        im_k: f64,
        class: PoleClass,
        series_index: i64,
    },
    #[error("S(k) vanishes at k = {re_k} + {im_k}i")]
    AtZero { re_k: f64, im_k: f64 },
    #[error("momentum must be positive, got {0}")]
    NonPositiveK(f64),
    #[error("pole at k = {im_k}i is not simple (net order {net_order})")]
    NotSimplePole { im_k: f64, net_order: i32 },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("asymptotic form not available for {0}")]
    UnsupportedFamily(String),
    #[error("wavefunction not representable in floating point: log|psi| = {log_abs}")]
    OutOfRange { log_abs: f64, phase: f64 },
    #[error("ladder operator singular at epsilon = {0}")]
    SingularEpsilon(f64),
    #[error("index {index} is outside the chain")]
    IndexOutOfChain { index: i64 },
    #[error("ladder operator annihilates the state at index {index}")]
    AnnihilatedState { index: i64 },
    #[error("jet order {requested} exceeds the supported maximum {max}")]
    JetOrder { requested: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
