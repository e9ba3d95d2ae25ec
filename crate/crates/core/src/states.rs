//! Eigenfunctions of the Morse Hamiltonian `-d^2/dx^2 + e^{-2x} - 2(A+1/2)e^{-x}`.
//!
//! Every family reduces to one of two Kummer shapes in `z = 2e^{-x}`:
//!
//! ```text
//! first:   e^{l} e^{-εx} e^{-e^{-x}} 1F1(-A+ε; 1+2ε; z)
//! second:  e^{l} e^{+εx} e^{-e^{-x}} 1F1(-A-ε; 1-2ε; z)
//! ```
//!
//! with `E = -ε^2` and a family-dependent constant `l`. For real momentum
//! `k` the convention is `ε = ik`.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{PotentialParams, Regime};
use crate::real::Real;
use crate::scaled::Scaled;
use crate::scattering::{PoleClass, PoleRecord};
use crate::specfun::{gamma_pole_index, kummer_1f1_scaled, kummer_derivatives_scaled, log_gamma, EvalPrecision, KummerArgs};

/// Highest derivative `jet` supplies.
pub const MAX_JET_ORDER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// First solution at arbitrary `ε`.
    Psi1,
    /// Second solution at arbitrary `ε`.
    Psi2,
    /// Bound state `n1`, `ε = A - n1 > 0`.
    Bound(u32),
    /// Antibound state `n1 > A`, `ε = A - n1 < 0` (non-exceptional `A`).
    Antibound(u32),
    /// Redundant-pole state `ε = (n2 + 1)/2`, non-exceptional `A`.
    RedundantGeneric(u32),
    /// Integer `A`, `ε = n2 + 1/2`.
    RedundantEvenInt(u32),
    /// Half-integer `A`, `ε = n2 + 1`.
    RedundantOddHalf(u32),
    /// `E = 0`.
    SemiBound,
    /// Integer `A = N`, `N <= n <= 2N`: second solution at `ε = N - n`.
    TildeBoundInt(u32),
    /// Half-integer `A`, `N <= n <= 2N - 1`: second solution at `ε = A - n`.
    TildeBoundHalf(u32),
    /// `ε = m + 1/2`, `m >= 0`.
    RedundantEvenChain(i32),
    /// `ε = m + 1/2`, `m <= -1`.
    TildeRedundantEven(i32),
    /// `ε = m + 1`, `m >= 0`.
    RedundantOddChain(i32),
    /// `ε = m + 1`, `m <= -1`.
    TildeRedundantOdd(i32),
}

/// The two Kummer shapes every family reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    First,
    Second,
}

/// A concrete wavefunction: family, potential and `ε = sqrt(-E)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveFunctionSpec<T> {
    pub family: Family,
    pub params: PotentialParams<T>,
    #[serde(skip)]
    epsilon: Complex<T>,
}

/// `ψ(x) = exp(log_const - rate·x - e^{-x}) · 1F1(a; c; 2e^{-x})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerForm<T> {
    pub log_const: Complex<T>,
    pub rate: Complex<T>,
    pub a: Complex<T>,
    pub c: Complex<T>,
}

fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn out_of_range(family: Family, why: &str) -> Error {
    Error::IndexOutOfRange(format!("{family:?}: {why}"))
}

impl<T: Real> WaveFunctionSpec<T> {
    /// First solution at `ε` (any branch).
    pub fn psi1(params: PotentialParams<T>, epsilon: Complex<T>) -> Result<Self> {
        Self::checked(Family::Psi1, params, epsilon)
    }

    /// Second solution at `ε` (any branch).
    pub fn psi2(params: PotentialParams<T>, epsilon: Complex<T>) -> Result<Self> {
        Self::checked(Family::Psi2, params, epsilon)
    }

    /// Scattering solutions at real momentum, `ε = ik`.
    pub fn psi1_k(params: PotentialParams<T>, k: T) -> Result<Self> {
        Self::psi1(params, Complex::new(T::zero(), k))
    }

    pub fn psi2_k(params: PotentialParams<T>, k: T) -> Result<Self> {
        Self::psi2(params, Complex::new(T::zero(), k))
    }

    /// Psi1/Psi2 at energy `E`, with `ε = sqrt(-E)`, `Re ε >= 0`.
    pub fn from_energy(family: Family, params: PotentialParams<T>, energy: Complex<T>) -> Result<Self> {
        match family {
            Family::Psi1 | Family::Psi2 => Self::checked(family, params, (-energy).sqrt()),
            _ => {
                let spec = Self::new(family, params)?;
                let e = spec.energy();
                let tol = T::int_tol() * (T::one() + e.norm());
                if (e - energy).norm() > tol {
                    return Err(out_of_range(family, "energy label does not match the family"));
                }
                Ok(spec)
            }
        }
    }

    /// Families whose `ε` is fixed by the index.
    pub fn new(family: Family, params: PotentialParams<T>) -> Result<Self> {
        let a = params.a();
        let tol = T::int_tol();
        let half = T::lit(0.5);
        let regime = params.regime();
        let eps = match family {
            Family::Psi1 | Family::Psi2 => {
                return Err(out_of_range(family, "needs an explicit epsilon; use psi1/psi2"));
            }
            Family::Bound(n) => {
                let e = a - T::lit(n as f64);
                if !(e > tol) {
                    return Err(out_of_range(family, "requires A - n > 0"));
                }
                e
            }
            Family::Antibound(n) => {
                if regime != Regime::Generic {
                    return Err(out_of_range(family, "defined for non-exceptional A only"));
                }
                let e = a - T::lit(n as f64);
                if !(e < -tol) {
                    return Err(out_of_range(family, "requires A - n < 0"));
                }
                e
            }
            Family::RedundantGeneric(n2) => {
                if regime != Regime::Generic {
                    return Err(out_of_range(family, "defined for non-exceptional A only"));
                }
                (T::lit(n2 as f64) + T::one()) * half
            }
            Family::RedundantEvenInt(n2) => {
                if !matches!(regime, Regime::Integer(_)) {
                    return Err(out_of_range(family, "requires integer A"));
                }
                T::lit(n2 as f64) + half
            }
            Family::RedundantOddHalf(n2) => {
                if !matches!(regime, Regime::HalfInteger(_)) {
                    return Err(out_of_range(family, "requires half-integer A"));
                }
                T::lit(n2 as f64) + T::one()
            }
            Family::SemiBound => T::zero(),
            Family::TildeBoundInt(n) => match regime {
                Regime::Integer(big_n) if n >= big_n && n <= 2 * big_n => T::lit(big_n as f64) - T::lit(n as f64),
                _ => return Err(out_of_range(family, "requires A = N and N <= n <= 2N")),
            },
            Family::TildeBoundHalf(n) => match regime {
                Regime::HalfInteger(big_n) if n >= big_n && n < 2 * big_n => a - T::lit(n as f64),
                _ => return Err(out_of_range(family, "requires A = (2N-1)/2 and N <= n <= 2N-1")),
            },
            Family::RedundantEvenChain(m) | Family::TildeRedundantEven(m) => {
                let chain = matches!(family, Family::RedundantEvenChain(_));
                if chain != (m >= 0) {
                    return Err(out_of_range(family, "m >= 0 for the chain, m <= -1 for the tilde branch"));
                }
                T::lit(m as f64) + half
            }
            Family::RedundantOddChain(m) | Family::TildeRedundantOdd(m) => {
                let chain = matches!(family, Family::RedundantOddChain(_));
                if chain != (m >= 0) {
                    return Err(out_of_range(family, "m >= 0 for the chain, m <= -1 for the tilde branch"));
                }
                T::lit(m as f64) + T::one()
            }
        };
        Self::checked(family, params, re(eps))
    }

    fn checked(family: Family, params: PotentialParams<T>, epsilon: Complex<T>) -> Result<Self> {
        if !(epsilon.re.is_finite() && epsilon.im.is_finite()) {
            return Err(Error::NonFiniteArgument);
        }
        let spec = Self {
            family,
            params,
            epsilon,
        };
        let f = spec.kummer_form();
        KummerArgs::new(f.a, f.c, Complex::<T>::one())
            .validate()
            .map_err(|_| out_of_range(family, "Kummer parameter c is a non-positive integer"))?;
        Ok(spec)
    }

    pub fn epsilon(&self) -> Complex<T> {
        self.epsilon
    }

    /// `E = -ε^2`.
    pub fn energy(&self) -> Complex<T> {
        -self.epsilon * self.epsilon
    }

    pub fn shape(&self) -> Shape {
        match self.family {
            Family::Psi2
            | Family::TildeBoundInt(_)
            | Family::TildeBoundHalf(_)
            | Family::TildeRedundantEven(_)
            | Family::TildeRedundantOdd(_) => Shape::Second,
            _ => Shape::First,
        }
    }

    pub fn kummer_form(&self) -> KummerForm<T> {
        let eps = self.epsilon;
        let a = re(self.params.a());
        let two_ln2 = T::LN_2() * T::lit(2.0);
        let one = Complex::<T>::one();
        let two = T::lit(2.0);
        // Index-labelled families carry a 2^{±2ε} normalisation; Psi1 does not.
        let scale = match self.family {
            Family::Psi1 | Family::SemiBound => Complex::<T>::zero(),
            _ => eps * two_ln2,
        };
        match self.shape() {
            Shape::First => KummerForm {
                log_const: scale,
                rate: eps,
                a: eps - a,
                c: one + eps * two,
            },
            Shape::Second => KummerForm {
                log_const: -eps * two_ln2,
                rate: -eps,
                a: -a - eps,
                c: one - eps * two,
            },
        }
    }

    /// Parameters of the Kummer factor at `x`.
    pub fn kummer_args(&self, x: T) -> KummerArgs<T> {
        let f = self.kummer_form();
        KummerArgs::new(f.a, f.c, re(T::lit(2.0) * (-x).exp()))
    }

    /// `ψ(x)` as `mantissa · exp(log_scale)`.
    pub fn evaluate_scaled(&self, x: T) -> Result<Scaled<T>> {
        if !x.is_finite() {
            return Err(Error::NonFiniteArgument);
        }
        let f = self.kummer_form();
        let m = kummer_1f1_scaled(self.kummer_args(x), &EvalPrecision::default())?;
        Ok(m.mul_exp(self.log_prefactor(&f, x)).normalized())
    }

    fn log_prefactor(&self, f: &KummerForm<T>, x: T) -> Complex<T> {
        f.log_const - f.rate * x - re((-x).exp())
    }

    /// `ψ(x)`; `OutOfRange` when the value leaves floating-point range.
    pub fn evaluate(&self, x: T) -> Result<Complex<T>> {
        let s = self.evaluate_scaled(x)?;
        if !s.is_representable() {
            return Err(Error::OutOfRange {
                log_abs: s.ln_abs().to_f64_lossy(),
                phase: s.arg().to_f64_lossy(),
            });
        }
        Ok(s.value())
    }

    /// `ψ, ψ', ..., ψ^{(order)}` at `x`, all carried on a common scale.
    pub fn jet_scaled(&self, x: T, order: usize) -> Result<Vec<Scaled<T>>> {
        if order > MAX_JET_ORDER {
            return Err(Error::JetOrder {
                requested: order,
                max: MAX_JET_ORDER,
            });
        }
        if !x.is_finite() {
            return Err(Error::NonFiniteArgument);
        }
        let f = self.kummer_form();
        let args = self.kummer_args(x);
        let fd = kummer_derivatives_scaled(args, order, &EvalPrecision::default())?;
        let z = args.z;
        let ex = re((-x).exp());

        // g = F(z(x)), z' = -z
        let mut g = vec![fd[0]];
        if order >= 1 {
            g.push(fd[1].mul_complex(-z));
        }
        if order >= 2 {
            g.push(fd[2].mul_complex(z * z).add(fd[1].mul_complex(z)));
        }
        if order >= 3 {
            g.push(
                fd[3]
                    .mul_complex(-z * z * z)
                    .add(fd[2].mul_complex(-z * z * T::lit(3.0)))
                    .add(fd[1].mul_complex(-z)),
            );
        }

        // P = exp(L): P^{(i)} / P as polynomials in L', L'', L'''
        let l1 = -f.rate + ex;
        let l2 = -ex;
        let l3 = ex;
        let p_ratio = [
            Complex::<T>::one(),
            l1,
            l2 + l1 * l1,
            l3 + l1 * l2 * T::lit(3.0) + l1 * l1 * l1,
        ];
        let p = Scaled::from_log(self.log_prefactor(&f, x));
        let binom = [[1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [1.0, 2.0, 1.0, 0.0], [1.0, 3.0, 3.0, 1.0]];
        let mut out = Vec::with_capacity(order + 1);
        for j in 0..=order {
            let mut acc = Scaled::zero();
            for i in 0..=j {
                let term = g[j - i].mul_complex(p_ratio[i] * T::lit(binom[j][i]));
                acc = acc.add(term);
            }
            out.push(acc.mul(p));
        }
        Ok(out)
    }

    /// `ψ, ψ', ..., ψ^{(order)}` at `x`.
    pub fn jet(&self, x: T, order: usize) -> Result<Vec<Complex<T>>> {
        Ok(self.jet_scaled(x, order)?.iter().map(Scaled::value).collect())
    }
}

/// `E_n = -(A - n)^2` for every `n` with `A - n > 0`, most bound first.
pub fn bound_energies<T: Real>(params: &PotentialParams<T>) -> Vec<T> {
    let a = params.a();
    (0..=params.floor_a())
        .map(|n| a - T::lit(n as f64))
        .filter(|&e| e > T::int_tol())
        .map(|e| -e * e)
        .collect()
}

/// `C2/C1` of the solution `C1 ψ1 + C2 ψ2` that vanishes as `x -> -∞`.
pub fn coefficient_ratio<T: Real>(params: &PotentialParams<T>, k: Complex<T>) -> Result<Complex<T>> {
    let a = re(params.a());
    let ik = Complex::<T>::i() * k;
    let one = Complex::<T>::one();
    let two = T::lit(2.0);
    let log = log_gamma(-a - ik)? - log_gamma(-a + ik)? + log_gamma(one + ik * two)? - log_gamma(one - ik * two)?;
    Ok(-log.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    PlusInfinity,
    MinusInfinity,
}

/// `ψ(x) ≈ coefficient · exp(rate·x + double_exp·e^{-x})` on one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticForm<T> {
    pub side: Side,
    pub coefficient: Complex<T>,
    pub rate: Complex<T>,
    pub double_exp: T,
}

impl<T: Real> AsymptoticForm<T> {
    pub fn evaluate(&self, x: T) -> Complex<T> {
        self.coefficient * (self.rate * x + re(self.double_exp * (-x).exp())).exp()
    }
}

/// Leading asymptotics of the first/second solutions and bound states.
pub fn asymptotic<T: Real>(spec: &WaveFunctionSpec<T>, side: Side) -> Result<AsymptoticForm<T>> {
    if !matches!(spec.family, Family::Psi1 | Family::Psi2 | Family::Bound(_)) {
        return Err(Error::UnsupportedFamily(format!("{:?}", spec.family)));
    }
    let f = spec.kummer_form();
    Ok(match side {
        Side::PlusInfinity => AsymptoticForm {
            side,
            coefficient: f.log_const.exp(),
            rate: -f.rate,
            double_exp: T::zero(),
        },
        Side::MinusInfinity => {
            let coefficient = if gamma_pole_index(f.a, T::int_tol()).is_some() {
                Complex::<T>::zero()
            } else {
                (f.log_const + log_gamma(f.c)? - log_gamma(f.a)? + (f.a - f.c) * T::LN_2()).exp()
            };
            AsymptoticForm {
                side,
                coefficient,
                rate: -f.rate + f.c - f.a,
                double_exp: T::one(),
            }
        }
    })
}

/// Largest relative residual of the Schrödinger equation over `x_samples`,
/// with `ψ''` from a five-point central difference of step `h`:
/// `|-ψ'' + Vψ - Eψ| / (|ψ''| + |Vψ| + |Eψ| + |ψ|)`.
pub fn ode_residual<T: Real>(spec: &WaveFunctionSpec<T>, x_samples: &[T], h: T) -> Result<T> {
    if !(h > T::zero()) {
        return Err(Error::InvalidParameter("finite-difference step must be positive".into()));
    }
    let e = spec.energy();
    let mut worst = T::zero();
    for &x in x_samples {
        let centre = spec.evaluate_scaled(x)?;
        let scale = centre.log_scale;
        let at = |dx: T| -> Result<Complex<T>> { Ok(spec.evaluate_scaled(x + dx)?.at_scale(scale)) };
        let f0 = centre.at_scale(scale);
        let (fp1, fm1) = (at(h)?, at(-h)?);
        let (fp2, fm2) = (at(h * T::lit(2.0))?, at(-h * T::lit(2.0))?);
        let d2 = (-fp2 + fp1 * T::lit(16.0) - f0 * T::lit(30.0) + fm1 * T::lit(16.0) - fm2) / (h * h * T::lit(12.0));
        let v = spec.params.potential(x);
        let residual = (-d2 + f0 * v - e * f0).norm();
        let denom = d2.norm() + (f0 * v).norm() + (e * f0).norm() + f0.norm();
        let r = if denom > T::zero() { residual / denom } else { T::zero() };
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Every wavefunction family attached to a pole record.
pub fn pole_wavefunctions<T: Real>(params: &PotentialParams<T>, pole: &PoleRecord<T>) -> Vec<WaveFunctionSpec<T>> {
    let idx = pole.series_index;
    let mut families = Vec::new();
    match (pole.class, params.regime()) {
        (PoleClass::Bound, _) => families.push(Family::Bound(idx as u32)),
        (PoleClass::Antibound, _) => families.push(Family::Antibound(idx as u32)),
        (PoleClass::SemiBound, _) => families.push(Family::SemiBound),
        (PoleClass::RedundantEven, regime) => {
            match regime {
                Regime::Integer(_) => families.push(Family::RedundantEvenInt(idx as u32)),
                _ => families.push(Family::RedundantGeneric(2 * idx as u32)),
            }
            families.push(Family::RedundantEvenChain(idx as i32));
        }
        (PoleClass::RedundantOdd, regime) => {
            match regime {
                Regime::HalfInteger(_) => families.push(Family::RedundantOddHalf(idx as u32)),
                _ => families.push(Family::RedundantGeneric(2 * idx as u32 + 1)),
            }
            families.push(Family::RedundantOddChain(idx as i32));
        }
    }
    families
        .into_iter()
        .filter_map(|f| WaveFunctionSpec::new(f, *params).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::{enumerate_poles, s_matrix};

    type C = Complex<f64>;

    fn params(a: f64) -> PotentialParams<f64> {
        PotentialParams::new(a).unwrap()
    }

    fn samples(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn ground_state_at_origin() {
        let s = WaveFunctionSpec::new(Family::Bound(0), params(2.3)).unwrap();
        let v = s.evaluate(0.0).unwrap();
        assert!((v.re - 2f64.powf(4.6) / std::f64::consts::E).abs() < 1e-12 * v.re);
        assert!((v.re - 8.922).abs() < 1e-3);
    }

    #[test]
    fn semibound_decays_on_the_left() {
        let s = WaveFunctionSpec::new(Family::SemiBound, params(3.0)).unwrap();
        let far = s.evaluate_scaled(-8.0).unwrap();
        assert!(far.ln_abs() < -100.0);
        for x in samples(-3.0, 10.0, 60) {
            assert!(s.evaluate(x).unwrap().norm() < 10.0);
        }
    }

    #[test]
    fn psi1_plane_wave_tail() {
        let s = WaveFunctionSpec::from_energy(Family::Psi1, params(1.5), C::new(-0.49, 0.0)).unwrap();
        let v = s.evaluate(8.0).unwrap();
        let expected = (-0.7f64 * 8.0).exp();
        assert!((v.re / expected - 1.0).abs() < 1e-3);
        // ε = 0.7, so the Kummer factor is 1 + O(e^{-x}) and e^{-e^{-x}} = 1 - O(e^{-x})
        let rel = (v - expected).norm() / expected;
        assert!(rel < 2e-3);
    }

    #[test]
    fn index_validation() {
        let p = params(2.3);
        assert!(WaveFunctionSpec::new(Family::Bound(3), p).is_err());
        assert!(WaveFunctionSpec::new(Family::Antibound(2), p).is_err());
        assert!(WaveFunctionSpec::new(Family::Antibound(3), p).is_ok());
        assert!(WaveFunctionSpec::new(Family::TildeBoundInt(2), p).is_err());
        let q = params(2.0);
        assert!(WaveFunctionSpec::new(Family::Bound(2), q).is_err());
        assert!(WaveFunctionSpec::new(Family::TildeBoundInt(1), q).is_err());
        assert!(WaveFunctionSpec::new(Family::TildeBoundInt(4), q).is_ok());
        assert!(WaveFunctionSpec::new(Family::TildeBoundInt(5), q).is_err());
        assert!(WaveFunctionSpec::new(Family::RedundantEvenChain(-1), q).is_err());
        assert!(WaveFunctionSpec::new(Family::TildeRedundantEven(-1), q).is_ok());
        assert!(WaveFunctionSpec::from_energy(Family::SemiBound, q, C::new(-1.0, 0.0)).is_err());
        assert!(WaveFunctionSpec::from_energy(Family::SemiBound, q, C::new(0.0, 0.0)).is_ok());
    }

    #[test]
    fn bound_energy_lists() {
        let close = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
        assert!(close(&bound_energies(&params(2.3)), &[-5.29, -1.69, -0.09]));
        assert!(close(&bound_energies(&params(2.0)), &[-4.0, -1.0]));
        assert!(close(&bound_energies(&params(2.5)), &[-6.25, -2.25, -0.25]));
        assert!(close(&bound_energies(&params(0.4)), &[-0.16]));
    }

    #[test]
    fn coefficient_ratio_relations() {
        let r = coefficient_ratio(&params(0.8), C::new(0.0, 0.0)).unwrap();
        assert!((r + 1.0).norm() < 1e-14);
        let p = params(2.3);
        let k = C::new(1.0, 0.0);
        let s = s_matrix(&p, k).unwrap();
        let phase = C::new(0.0, 2.0 * 2f64.ln()).exp();
        assert!((coefficient_ratio(&p, k).unwrap() - s * phase).norm() < 1e-12);
    }

    #[test]
    fn coefficient_ratio_cancels_left_growth() {
        let p = params(1.5);
        let k = 0.7;
        let r = coefficient_ratio(&p, C::new(k, 0.0)).unwrap();
        let psi1 = WaveFunctionSpec::psi1_k(p, k).unwrap().evaluate(-6.0).unwrap();
        let psi2 = WaveFunctionSpec::psi2_k(p, k).unwrap().evaluate(-6.0).unwrap();
        assert!((psi1 + r * psi2).norm() < 1e-3 * psi1.norm());
    }

    #[test]
    fn asymptotic_forms() {
        let p = params(1.5);
        let k = 0.7;
        let psi2 = WaveFunctionSpec::psi2_k(p, k).unwrap();
        let plus = asymptotic(&psi2, Side::PlusInfinity).unwrap();
        assert!((plus.coefficient - C::new(0.0, -2.0 * k * 2f64.ln()).exp()).norm() < 1e-14);
        assert!((plus.rate - C::new(0.0, k)).norm() < 1e-15);

        let bound = WaveFunctionSpec::new(Family::Bound(1), params(2.3)).unwrap();
        assert_eq!(asymptotic(&bound, Side::MinusInfinity).unwrap().coefficient, C::new(0.0, 0.0));

        let psi1 = WaveFunctionSpec::psi1_k(p, k).unwrap();
        let minus = asymptotic(&psi1, Side::MinusInfinity).unwrap();
        assert!((minus.rate - C::new(2.5, 0.0)).norm() < 1e-14);
        let mut last = f64::INFINITY;
        for x in [-6.0, -8.0, -10.0] {
            let ratio = psi1.evaluate_scaled(x).unwrap();
            let lead = Scaled::from_log(minus.coefficient.ln() + minus.rate * x + C::new((-x).exp(), 0.0));
            let q = ratio.mul(Scaled {
                mantissa: lead.mantissa.inv(),
                log_scale: -lead.log_scale,
            });
            let dev = (q.value() - 1.0).norm();
            assert!(dev < last);
            last = dev;
        }
        assert!(last < 1e-3);

        let semi = WaveFunctionSpec::new(Family::SemiBound, p).unwrap();
        assert!(matches!(asymptotic(&semi, Side::PlusInfinity), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn documented_residuals() {
        let xs = samples(-2.0, 6.0, 41);
        let b0 = WaveFunctionSpec::new(Family::Bound(0), params(2.3)).unwrap();
        assert!(ode_residual(&b0, &xs, 1e-4).unwrap() <= 1e-6);
        let r0 = WaveFunctionSpec::new(Family::RedundantGeneric(0), params(2.3)).unwrap();
        assert!((r0.energy() + 0.25).norm() < 1e-15);
        assert!(ode_residual(&r0, &xs, 1e-4).unwrap() <= 1e-6);
        let semi = WaveFunctionSpec::new(Family::SemiBound, params(3.0)).unwrap();
        assert!(ode_residual(&semi, &xs, 1e-4).unwrap() <= 1e-6);
    }

    #[test]
    fn residual_rejects_bad_step() {
        let s = WaveFunctionSpec::new(Family::Bound(0), params(2.3)).unwrap();
        assert!(ode_residual(&s, &[0.0], 0.0).is_err());
    }

    #[test]
    fn every_pole_family_is_an_eigenfunction() {
        let xs = samples(-2.0, 8.0, 51);
        for a in [2.0, 2.3, 2.5, 3.7] {
            let p = params(a);
            for pole in enumerate_poles(&p, -3.0, 3.0).unwrap() {
                let specs = pole_wavefunctions(&p, &pole);
                assert!(!specs.is_empty(), "A={a} {:?}", pole.class);
                for s in specs {
                    let r = ode_residual(&s, &xs, 1e-3).unwrap();
                    assert!(r <= 1e-6, "A={a} {:?} residual {r}", s.family);
                }
            }
        }
    }

    #[test]
    fn jet_matches_finite_differences() {
        let specs = [
            WaveFunctionSpec::new(Family::Bound(1), params(2.3)).unwrap(),
            WaveFunctionSpec::psi1_k(params(1.5), 0.7).unwrap(),
            WaveFunctionSpec::new(Family::TildeRedundantEven(-2), params(2.3)).unwrap(),
        ];
        let h = 1e-3;
        for s in specs {
            for x in [-1.0, 0.3, 2.0] {
                let j = s.jet(x, 3).unwrap();
                let lo = s.jet(x - h, 2).unwrap();
                let hi = s.jet(x + h, 2).unwrap();
                for d in 0..3 {
                    let fd = (hi[d] - lo[d]) / (2.0 * h);
                    let scale = j[d + 1].norm().max(j[0].norm());
                    assert!((fd - j[d + 1]).norm() < 1e-5 * scale, "{:?} x={x} d={d}", s.family);
                }
            }
        }
        assert!(matches!(specs[0].jet(0.0, 4), Err(Error::JetOrder { .. })));
    }

    #[test]
    fn tilde_identifications() {
        let xs = samples(-1.0, 4.0, 20);
        let p = params(2.0);
        for n in 0..=2u32 {
            let lhs = if n == 0 {
                WaveFunctionSpec::new(Family::SemiBound, p).unwrap()
            } else {
                WaveFunctionSpec::new(Family::Bound(2 - n), p).unwrap()
            };
            let rhs = WaveFunctionSpec::new(Family::TildeBoundInt(2 + n), p).unwrap();
            assert!(ratio_defect(&lhs, &rhs, &xs) < 1e-8, "n={n}");
        }
        let q = params(2.3);
        for m in 0..=2 {
            let lhs = WaveFunctionSpec::new(Family::RedundantEvenChain(m), q).unwrap();
            let rhs = WaveFunctionSpec::new(Family::TildeRedundantEven(-m - 1), q).unwrap();
            assert!(ratio_defect(&lhs, &rhs, &xs) < 1e-8, "m={m}");
        }
    }

    fn ratio_defect(a: &WaveFunctionSpec<f64>, b: &WaveFunctionSpec<f64>, xs: &[f64]) -> f64 {
        let r: Vec<C> = xs.iter().map(|&x| a.evaluate(x).unwrap() / b.evaluate(x).unwrap()).collect();
        let mean = r.iter().sum::<C>() / r.len() as f64;
        r.iter().map(|q| (q / mean - 1.0).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn laguerre_form_agrees() {
        use crate::specfun::laguerre;
        let p = params(3.7);
        for n in 0..=3u32 {
            let s = WaveFunctionSpec::new(Family::Bound(n), p).unwrap();
            let eps = 3.7 - n as f64;
            let lag = |x: f64| {
                let z = 2.0 * (-x).exp();
                laguerre(n, 2.0 * eps, C::new(z, 0.0)) * (-eps * x - (-x).exp()).exp()
            };
            let c0 = s.evaluate(0.0).unwrap() / lag(0.0);
            for x in samples(-1.5, 6.0, 50) {
                let v = s.evaluate(x).unwrap();
                assert!((v - c0 * lag(x)).norm() <= 1e-9 * v.norm().max(1e-300), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn bound_states_are_square_integrable() {
        let norm = |s: &WaveFunctionSpec<f64>, lo: f64, hi: f64| {
            let n = ((hi - lo) / 0.01) as usize;
            let h = (hi - lo) / n as f64;
            (0..=n)
                .map(|i| {
                    let x = lo + i as f64 * h;
                    let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                    w * s.evaluate_scaled(x).unwrap().value().norm_sqr()
                })
                .sum::<f64>()
                * h
        };
        for a in [2.3, 2.5] {
            for n in 0..=2 {
                let s = WaveFunctionSpec::new(Family::Bound(n), params(a)).unwrap();
                // The tail beyond L is ~e^{-2εL}; widen L for weakly bound states.
                let hi = 30f64.max(15.0 / s.epsilon().re);
                let i1 = norm(&s, -10.0, hi);
                let i2 = norm(&s, -20.0, 2.0 * hi);
                assert!(((i2 - i1) / i1).abs() < 1e-8, "A={a} n={n}");
            }
        }
        let r = WaveFunctionSpec::new(Family::RedundantGeneric(1), params(2.3)).unwrap();
        assert!(r.evaluate_scaled(-6.0).unwrap().ln_abs() > r.evaluate_scaled(-3.0).unwrap().ln_abs() + 10.0);
    }
}
