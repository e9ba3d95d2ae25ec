//! Analytic scattering theory of the one-dimensional Morse potential
//! `V(x) = e^{-2x} - 2(A + 1/2) e^{-x}`.
//!
//! * [`specfun`]: complex log-Gamma, digamma and Kummer's `1F1`.
//! * [`scattering`]: `S(k)`, phase shifts, pole enumeration and residues.
//! * [`states`]: every eigenfunction family, asymptotics and an ODE residual.
//! * [`ladder`]: first-order ladder operators and their chain actions.
//!
//! Everything is generic over the scalar ([`Real`], implemented for `f32`
//! and `f64`); the `*64` aliases below fix double precision.

pub mod error;
pub mod ladder;
pub mod params;
pub mod real;
pub mod scaled;
pub mod scattering;
pub mod specfun;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use params::{PotentialParams, Regime};
pub use real::Real;
pub use scaled::Scaled;
pub use scattering::{
    enumerate_poles, phase_shift, phase_shift_curve, phase_shift_derivative, residue, s_matrix,
    s_matrix_grid, s_matrix_grid_par, s_matrix_unchecked, ComplexGrid, FactorPole, GammaFactor,
    GridSpec, PoleClass, PoleRecord,
};

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;
pub type Complex32 = Complex<f32>;
pub type PotentialParams64 = PotentialParams<f64>;
pub type PotentialParams32 = PotentialParams<f32>;
pub type PoleRecord64 = PoleRecord<f64>;
pub type GridSpec64 = GridSpec<f64>;
pub type ComplexGrid64 = ComplexGrid<f64>;
pub use states::{
    asymptotic, bound_energies, coefficient_ratio, ode_residual, pole_wavefunctions, AsymptoticForm, Family,
    KummerForm, Shape, Side, WaveFunctionSpec,
};

pub type WaveFunctionSpec64 = WaveFunctionSpec<f64>;
pub type WaveFunctionSpec32 = WaveFunctionSpec<f32>;
pub use ladder::{
    annihilation_residual, apply, chain_step, default_x_samples, factorization_residual, intertwining_residual,
    make_operator, round_trip, ChainSpec, ChainStep, Direction, ExpSmooth, FiniteDifference, Jet, LadderOperator,
    Series, Sign, SmoothFunction, ZeroFunction,
};

pub type LadderOperator64 = LadderOperator<f64>;
pub type ChainSpec64 = ChainSpec<f64>;
