//! Complex log-Gamma and digamma.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::real::{nearest_integer, Real};

/// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// B_{2j} / (2j), j = 1..8, for the digamma asymptotic series.
const DIGAMMA_ASYMP: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3_617.0 / 8_160.0,
];

/// `Some(n)` when `z` lies within `tol` of the Gamma pole at `-n`.
pub fn gamma_pole_index<T: Real>(z: Complex<T>, tol: T) -> Option<u64> {
    if z.im.abs() > tol {
        return None;
    }
    let n = nearest_integer(z.re, tol)?;
    if n > 0 {
        return None;
    }
    let dist = (z - Complex::new(T::lit(n as f64), T::zero())).norm();
    (dist <= tol).then_some((-n) as u64)
}

fn check_pole<T: Real>(z: Complex<T>) -> Result<()> {
    match gamma_pole_index(z, T::int_tol()) {
        Some(n) => Err(Error::PoleOfGamma(n)),
        None => Ok(()),
    }
}

/// Reduces `z` to `w = z - m` with `m` the nearest integer to `Re z`.
fn reduce<T: Real>(z: Complex<T>) -> (Complex<T>, i64) {
    let m = z.re.round();
    (Complex::new(z.re - m, z.im), m.to_i64().unwrap_or(0))
}

/// `ln(sin(pi z))`, stable for large `|Im z|`; determined modulo `2 pi i` with
/// conjugation symmetry `f(conj z) = conj f(z)` off the real axis.
pub(crate) fn ln_sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let (w, m) = reduce(z);
    let pi = T::PI();
    let u = w * pi;
    let parity = if m.rem_euclid(2) == 1 {
        // sin(pi z) = -sin(pi w)
        Complex::new(T::zero(), if z.im < T::zero() { -pi } else { pi })
    } else {
        Complex::<T>::zero()
    };
    let half_ln2 = T::LN_2();
    if u.im > T::lit(8.0) {
        // sin u = (i/2) e^{-iu} (1 - e^{2iu})
        let i = Complex::<T>::i();
        let q = (i * u * T::lit(2.0)).exp();
        Complex::new(-half_ln2, T::FRAC_PI_2()) - i * u + (Complex::<T>::one() - q).ln() + parity
    } else if u.im < T::lit(-8.0) {
        // sin u = (-i/2) e^{iu} (1 - e^{-2iu})
        let i = Complex::<T>::i();
        let q = (-i * u * T::lit(2.0)).exp();
        Complex::new(-half_ln2, -T::FRAC_PI_2()) + i * u + (Complex::<T>::one() - q).ln() + parity
    } else {
        u.sin().ln() + parity
    }
}

/// `pi * cot(pi z)`, stable for large `|Im z|`.
fn pi_cot_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let (w, _) = reduce(z);
    let pi = T::PI();
    let u = w * pi;
    let i = Complex::<T>::i();
    let cot = if u.im > T::lit(20.0) {
        let q = (i * u * T::lit(2.0)).exp();
        -i * (Complex::<T>::one() + q) / (Complex::<T>::one() - q)
    } else if u.im < T::lit(-20.0) {
        let q = (-i * u * T::lit(2.0)).exp();
        i * (Complex::<T>::one() + q) / (Complex::<T>::one() - q)
    } else {
        u.cos() / u.sin()
    };
    cot * pi
}

fn lanczos_ln_gamma<T: Real>(z: Complex<T>) -> Complex<T> {
    // Gamma(z) = sqrt(2 pi) t^{z - 1/2} e^{-t} A(z),  t = z + g - 1/2
    let half = T::lit(0.5);
    let zm1 = z - T::one();
    let mut series = Complex::new(T::lit(LANCZOS_COEF[0]), T::zero());
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series = series + Complex::new(T::lit(c), T::zero()) / (zm1 + T::lit(k as f64));
    }
    let t = zm1 + T::lit(LANCZOS_G) + half;
    let half_ln_2pi = T::lit(0.918_938_533_204_672_8);
    (zm1 + half) * t.ln() - t + series.ln() + half_ln_2pi
}

/// Complex `ln Gamma(z)`.
///
/// `exp(log_gamma(z)) = Gamma(z)`; real for real `z > 0`. The imaginary part
/// is defined modulo `2 pi` for `Re z < 1/2` (reflection formula).
pub fn log_gamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    check_pole(z)?;
    Ok(log_gamma_unchecked(z))
}

pub(crate) fn log_gamma_unchecked<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    if z.re < half {
        let ln_pi = T::lit(1.144_729_885_849_400_2);
        Complex::new(ln_pi, T::zero()) - ln_sin_pi(z) - lanczos_ln_gamma(Complex::<T>::one() - z)
    } else {
        lanczos_ln_gamma(z)
    }
}

/// Complex digamma `psi(z) = d/dz ln Gamma(z)`.
pub fn digamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    check_pole(z)?;
    Ok(digamma_unchecked(z))
}

fn digamma_unchecked<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.re < T::lit(0.5) {
        // psi(z) = psi(1 - z) - pi cot(pi z)
        return digamma_unchecked(Complex::<T>::one() - z) - pi_cot_pi(z);
    }
    let mut acc = Complex::<T>::zero();
    let mut w = z;
    let shift_to = T::lit(12.0);
    while w.norm() < shift_to {
        acc = acc - w.inv();
        w = w + T::one();
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut tail = Complex::<T>::zero();
    let mut pow = inv2;
    for &c in DIGAMMA_ASYMP.iter() {
        tail = tail + pow * T::lit(c);
        pow = pow * inv2;
    }
    acc + w.ln() - inv * T::lit(0.5) - tail
}
