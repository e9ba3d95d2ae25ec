//! Complex special functions: log-Gamma, digamma and Kummer's `1F1`.

mod gamma;
mod kummer;

pub use gamma::{digamma, gamma_pole_index, log_gamma};
pub(crate) use gamma::log_gamma_unchecked;
pub use kummer::{
    kummer_1f1, kummer_1f1_forced, kummer_1f1_scaled, kummer_asymptotic, kummer_asymptotic_scaled, kummer_derivative,
    kummer_derivatives_scaled, kummer_regime, laguerre, laguerre_kummer_ratio, EvalPrecision,
    KummerArgs, KummerRegime,
};
