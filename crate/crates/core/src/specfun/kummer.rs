//! Confluent hypergeometric function of the first kind, `1F1(a; c; z)`.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::gamma::{gamma_pole_index, log_gamma};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::scaled::Scaled;

/// Parameters and argument of `1F1(a; c; z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerArgs<T> {
    pub a: Complex<T>,
    pub c: Complex<T>,
    pub z: Complex<T>,
}

/// Which evaluation route `kummer_1f1` takes for a given argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KummerRegime {
    /// `a = -n`: exact degree-`n` polynomial.
    Polynomial(u64),
    /// Forward Maclaurin series (after Kummer's transformation when `Re z < 0`).
    Series,
    /// Large-`|z|` expansion with both exponential branches (the forward
    /// series takes over where it is estimated to be more accurate).
    Asymptotic,
}

impl<T: Real> KummerArgs<T> {
    pub fn new(a: Complex<T>, c: Complex<T>, z: Complex<T>) -> Self {
        Self { a, c, z }
    }

    pub fn real(a: T, c: T, z: T) -> Self {
        Self::new(
            Complex::new(a, T::zero()),
            Complex::new(c, T::zero()),
            Complex::new(z, T::zero()),
        )
    }

    /// Checks finiteness and the admissibility of `c`.
    ///
    /// `c = -m` is admissible only when `a = -n` with `n <= m`, so that the
    /// polynomial terminates before the Pochhammer symbol `(c)_j` vanishes.
    pub fn validate(&self) -> Result<()> {
        let finite = |w: Complex<T>| w.re.is_finite() && w.im.is_finite();
        if !(finite(self.a) && finite(self.c) && finite(self.z)) {
            return Err(Error::NonFiniteArgument);
        }
        let tol = T::int_tol();
        if let Some(m) = gamma_pole_index(self.c, tol) {
            match gamma_pole_index(self.a, tol) {
                Some(n) if n <= m => {}
                _ => {
                    return Err(Error::InvalidC {
                        re: self.c.re.to_f64_lossy(),
                        im: self.c.im.to_f64_lossy(),
                    })
                }
            }
        }
        Ok(())
    }

    /// Arguments of the `j`-th derivative: `(a + j; c + j; z)`.
    pub fn shifted(&self, j: usize) -> Self {
        let s = T::lit(j as f64);
        Self::new(self.a + s, self.c + s, self.z)
    }
}

/// Tuning knobs for `kummer_1f1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPrecision<T> {
    /// Relative size below which a series term counts as negligible.
    pub rel_tol: T,
    pub max_terms: usize,
    /// `|z|` at and above which the large-argument expansion is used.
    pub asymptotic_threshold: T,
}

impl<T: Real> Default for EvalPrecision<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::epsilon(),
            max_terms: 1000,
            asymptotic_threshold: T::lit(30.0),
        }
    }
}

impl<T: Real> EvalPrecision<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) || self.max_terms == 0 || !(self.asymptotic_threshold > T::zero()) {
            return Err(Error::InvalidParameter(
                "EvalPrecision needs rel_tol > 0, max_terms >= 1, asymptotic_threshold > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Route `kummer_1f1` would take for these arguments.
pub fn kummer_regime<T: Real>(args: &KummerArgs<T>, prec: &EvalPrecision<T>) -> KummerRegime {
    if let Some(n) = gamma_pole_index(args.a, T::int_tol()) {
        KummerRegime::Polynomial(n)
    } else if args.z.norm() < prec.asymptotic_threshold {
        KummerRegime::Series
    } else {
        KummerRegime::Asymptotic
    }
}

/// `1F1(a; c; z)`.
pub fn kummer_1f1<T: Real>(args: KummerArgs<T>, prec: &EvalPrecision<T>) -> Result<Complex<T>> {
    Ok(kummer_1f1_scaled(args, prec)?.value())
}

/// `1F1(a; c; z)` as `mantissa · exp(log_scale)`; never overflows.
pub fn kummer_1f1_scaled<T: Real>(args: KummerArgs<T>, prec: &EvalPrecision<T>) -> Result<Scaled<T>> {
    args.validate()?;
    prec.validate()?;
    if args.z.is_zero() {
        return Ok(Scaled::from_complex(Complex::<T>::one()));
    }
    match kummer_regime(&args, prec) {
        KummerRegime::Polynomial(n) => {
            let snapped = KummerArgs::new(
                Complex::new(-T::lit(n as f64), T::zero()),
                snap_c(args.c),
                args.z,
            );
            Ok(polynomial(&snapped, n))
        }
        KummerRegime::Series => series_or_expansion(&args, prec),
        KummerRegime::Asymptotic => asymptotic_expansion(&args, prec),
    }
}

/// `|z|` below which the forward series is always trusted.
const SERIES_ONLY_RADIUS: f64 = 10.0;

/// Forward series, replaced by the large-`|z|` expansion when cancellation
/// (complex `z` with a large imaginary part) costs more than the expansion's truncation.
fn series_or_expansion<T: Real>(args: &KummerArgs<T>, prec: &EvalPrecision<T>) -> Result<Scaled<T>> {
    let (value, est) = forward_series_est(args, prec)?;
    if est <= prec.rel_tol * T::lit(16.0) || args.z.norm() < T::lit(SERIES_ONLY_RADIUS) {
        return Ok(value);
    }
    match asymptotic_expansion_est(args, prec) {
        Ok((expansion, expansion_est)) if expansion_est < est => Ok(expansion),
        _ => Ok(value),
    }
}

/// `1F1` through a prescribed route, with no automatic fallback.
///
/// `Polynomial(_)` is accepted only when `a` really is a non-positive integer.
pub fn kummer_1f1_forced<T: Real>(args: KummerArgs<T>, prec: &EvalPrecision<T>, regime: KummerRegime) -> Result<Scaled<T>> {
    args.validate()?;
    prec.validate()?;
    match regime {
        KummerRegime::Polynomial(_) => match kummer_regime(&args, prec) {
            KummerRegime::Polynomial(_) => kummer_1f1_scaled(args, prec),
            _ => Err(Error::InvalidParameter("a is not a non-positive integer".into())),
        },
        KummerRegime::Series => forward_series(&args, prec),
        KummerRegime::Asymptotic => Ok(asymptotic_expansion_est(&args, prec)?.0),
    }
}

fn snap_c<T: Real>(c: Complex<T>) -> Complex<T> {
    match gamma_pole_index(c, T::int_tol()) {
        Some(m) => Complex::new(-T::lit(m as f64), T::zero()),
        None => c,
    }
}

/// Terminating sum `sum_{j<=n} (a)_j z^j / ((c)_j j!)` with `a = -n`.
fn polynomial<T: Real>(args: &KummerArgs<T>, n: u64) -> Scaled<T> {
    let big = T::lit(1e250);
    let mut term = Complex::<T>::one();
    let mut sum = Complex::<T>::one();
    let mut overflow = false;
    for j in 0..n {
        let jj = T::lit(j as f64);
        term = term * (args.a + jj) * args.z / ((args.c + jj) * (jj + T::one()));
        sum = sum + term;
        if !(term.norm() < big) {
            overflow = true;
            break;
        }
    }
    if !overflow {
        return Scaled::from_complex(sum);
    }
    // Log-domain accumulation for very large |z|.
    let mut logs = Vec::with_capacity(n as usize + 1);
    let mut lt = Complex::<T>::zero();
    logs.push(lt);
    for j in 0..n {
        let jj = T::lit(j as f64);
        lt = lt + ((args.a + jj) * args.z / ((args.c + jj) * (jj + T::one()))).ln();
        logs.push(lt);
    }
    let top = logs.iter().map(|l| l.re).fold(T::neg_infinity(), T::max);
    let mantissa = logs
        .iter()
        .fold(Complex::<T>::zero(), |acc, l| acc + (l - Complex::new(top, T::zero())).exp());
    Scaled {
        mantissa,
        log_scale: top,
    }
    .normalized()
}

fn forward_series<T: Real>(args: &KummerArgs<T>, prec: &EvalPrecision<T>) -> Result<Scaled<T>> {
    Ok(forward_series_est(args, prec)?.0)
}

/// Series value and an estimate of its relative rounding error.
fn forward_series_est<T: Real>(args: &KummerArgs<T>, prec: &EvalPrecision<T>) -> Result<(Scaled<T>, T)> {
    if args.z.re < T::zero() {
        // Kummer's transformation: 1F1(a;c;z) = e^z 1F1(c-a;c;-z).
        let flipped = KummerArgs::new(args.c - args.a, args.c, -args.z);
        let (inner, est) = match gamma_pole_index(flipped.a, T::int_tol()) {
            Some(n) => (
                polynomial(
                    &KummerArgs::new(Complex::new(-T::lit(n as f64), T::zero()), snap_c(args.c), flipped.z),
                    n,
                ),
                T::epsilon(),
            ),
            None => plain_series(&flipped, prec)?,
        };
        return Ok((inner.mul_exp(args.z), est));
    }
    plain_series(args, prec)
}

fn plain_series<T: Real>(args: &KummerArgs<T>, prec: &EvalPrecision<T>) -> Result<(Scaled<T>, T)> {
    let mut term = Complex::<T>::one();
    let mut sum = Complex::<T>::one();
    let mut largest = T::one();
    let mut small = 0;
    for j in 0..prec.max_terms {
        let jj = T::lit(j as f64);
        term = term * (args.a + jj) * args.z / ((args.c + jj) * (jj + T::one()));
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::NoConvergence(j));
        }
        sum = sum + term;
        largest = largest.max(term.norm());
        if term.norm() <= prec.rel_tol * sum.norm() {
            small += 1;
            if small >= 3 {
                let est = T::epsilon() * largest / sum.norm();
                return Ok((Scaled::from_complex(sum), est));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence(prec.max_terms))
}

/// Sum of an asymptotic series `sum_s (p)_s (q)_s / s! · w^s`, truncated at
/// the smallest term, with the size of that term relative to the sum.
fn asymptotic_sum<T: Real>(p: Complex<T>, q: Complex<T>, w: Complex<T>, prec: &EvalPrecision<T>) -> (Complex<T>, T) {
    let mut term = Complex::<T>::one();
    let mut sum = Complex::<T>::one();
    let mut last = T::one();
    for s in 0..prec.max_terms {
        let ss = T::lit(s as f64);
        let next = term * (p + ss) * (q + ss) / (ss + T::one()) * w;
        let size = next.norm();
        if size == T::zero() {
            return (sum, T::zero());
        }
        if size > last {
            break;
        }
        sum = sum + next;
        term = next;
        last = size;
        if size <= prec.rel_tol * sum.norm() {
            return (sum, T::zero());
        }
    }
    (sum, last / sum.norm())
}

/// Full large-`|z|` expansion:
/// `Gamma(c)/Gamma(a) e^z z^{a-c} sum (c-a)_s (1-a)_s / s! z^{-s}`
/// `+ Gamma(c)/Gamma(c-a) (-z)^{-a} sum (a)_s (a-c+1)_s / s! (-z)^{-s}`.
///
/// Near the threshold the expansion may stall above working precision; the
/// forward series is used instead whenever its rounding estimate is smaller.
fn asymptotic_expansion<T: Real>(args: &KummerArgs<T>, prec: &EvalPrecision<T>) -> Result<Scaled<T>> {
    let (value, est) = asymptotic_expansion_est(args, prec)?;
    if est <= prec.rel_tol * T::lit(16.0) {
        return Ok(value);
    }
    match forward_series_est(args, prec) {
        Ok((series, series_est)) if series_est < est => Ok(series),
        _ => Ok(value),
    }
}

fn asymptotic_expansion_est<T: Real>(args: &KummerArgs<T>, prec: &EvalPrecision<T>) -> Result<(Scaled<T>, T)> {
    let KummerArgs { a, c, z } = *args;
    let tol = T::int_tol();
    let ln_gc = log_gamma(c)?;
    let ln_z = z.ln();
    let one = Complex::<T>::one();

    let (dominant, dom_err) = match gamma_pole_index(a, tol) {
        Some(_) => (Scaled::zero(), T::zero()),
        None => {
            let (series, err) = asymptotic_sum(c - a, one - a, z.inv(), prec);
            let log = ln_gc - log_gamma(a)? + z + (a - c) * ln_z;
            (Scaled::from_complex(series).mul_exp(log), err)
        }
    };

    let (recessive, rec_err) = match gamma_pole_index(c - a, tol) {
        Some(_) => (Scaled::zero(), T::zero()),
        None => {
            let (series, err) = asymptotic_sum(a, a - c + one, -z.inv(), prec);
            let pi_a = a * T::PI();
            let i = Complex::<T>::i();
            // (-z)^{-a} = z^{-a} e^{±i pi a}; on the Stokes line (real z) the
            // average of both sides.
            let stokes = if z.im > T::zero() {
                (i * pi_a).exp()
            } else if z.im < T::zero() {
                (-i * pi_a).exp()
            } else {
                pi_a.cos()
            };
            let log = ln_gc - log_gamma(c - a)? - a * ln_z;
            (Scaled::from_complex(series * stokes).mul_exp(log), err)
        }
    };
    let total = dominant.add(recessive);
    let ln_total = total.ln_abs();
    let rel = |part: &Scaled<T>, err: T| {
        if part.is_zero() || err == T::zero() {
            T::zero()
        } else {
            err * (part.ln_abs() - ln_total).exp()
        }
    };
    let est = rel(&dominant, dom_err).max(rel(&recessive, rec_err));
    Ok((total, est))
}

/// Leading large-`|z|` form `Gamma(c)/Gamma(a) · e^z · z^{a-c}` (principal branch).
pub fn kummer_asymptotic<T: Real>(args: KummerArgs<T>) -> Result<Complex<T>> {
    Ok(kummer_asymptotic_scaled(args)?.value())
}

pub fn kummer_asymptotic_scaled<T: Real>(args: KummerArgs<T>) -> Result<Scaled<T>> {
    args.validate()?;
    let KummerArgs { a, c, z } = args;
    let log = log_gamma(c)? - log_gamma(a)? + z + (a - c) * z.ln();
    Ok(Scaled::from_log(log))
}

/// `d/dz 1F1(a; c; z) = (a/c) 1F1(a+1; c+1; z)`.
pub fn kummer_derivative<T: Real>(args: KummerArgs<T>, prec: &EvalPrecision<T>) -> Result<Complex<T>> {
    Ok(kummer_derivatives_scaled(args, 1, prec)?[1].value())
}

/// Value and the first `order` z-derivatives:
/// `d^j/dz^j 1F1 = (a)_j / (c)_j · 1F1(a+j; c+j; z)`.
pub fn kummer_derivatives_scaled<T: Real>(
    args: KummerArgs<T>,
    order: usize,
    prec: &EvalPrecision<T>,
) -> Result<Vec<Scaled<T>>> {
    args.validate()?;
    let tol = T::int_tol();
    let a_pole = gamma_pole_index(args.a, tol);
    let mut out = Vec::with_capacity(order + 1);
    let mut ratio = Complex::<T>::one();
    for j in 0..=order {
        if j > 0 {
            let jj = T::lit((j - 1) as f64);
            ratio = ratio * (args.a + jj) / (args.c + jj);
        }
        let vanishes = matches!(a_pole, Some(n) if (j as u64) > n);
        if vanishes {
            out.push(Scaled::zero());
        } else {
            out.push(kummer_1f1_scaled(args.shifted(j), prec)?.mul_complex(ratio));
        }
    }
    Ok(out)
}

/// Generalized Laguerre polynomial `L_n^alpha(z)` by the three-term recurrence.
pub fn laguerre<T: Real>(n: u32, alpha: T, z: Complex<T>) -> Complex<T> {
    let one = Complex::<T>::one();
    if n == 0 {
        return one;
    }
    let mut prev = one;
    let mut cur = one * (T::one() + alpha) - z;
    for k in 1..n {
        let kk = T::lit(k as f64);
        let next = ((one * (T::lit(2.0) * kk + T::one() + alpha) - z) * cur - prev * (kk + alpha)) / (kk + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// `binomial(n + alpha, n)`, the ratio `L_n^alpha(z) / 1F1(-n; alpha+1; z)`.
pub fn laguerre_kummer_ratio<T: Real>(n: u32, alpha: T) -> T {
    (1..=n).fold(T::one(), |acc, j| {
        let jj = T::lit(j as f64);
        acc * (alpha + jj) / jj
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn p() -> EvalPrecision<f64> {
        EvalPrecision::default()
    }

    #[test]
    fn zero_argument_is_one() {
        let v = kummer_1f1(KummerArgs::new(c(0.3, 1.0), c(2.5, -0.4), c(0.0, 0.0)), &p()).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn degree_one_polynomial() {
        let v = kummer_1f1(KummerArgs::new(c(-1.0, 0.0), c(2.0, 0.0), c(1.0, 1.0)), &p()).unwrap();
        assert!((v - c(0.5, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn exponential_special_case() {
        let v = kummer_1f1(KummerArgs::real(1.0, 1.0, 2.5), &p()).unwrap();
        assert!((v.re - 2.5f64.exp()).abs() < 1e-13 * 2.5f64.exp());
        let big = kummer_1f1(KummerArgs::real(1.0, 1.0, 40.0), &p()).unwrap();
        assert!((big.re / 40f64.exp() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn negative_argument_uses_kummer_transformation() {
        // 1F1(1;1;-20) = e^{-20}
        let v = kummer_1f1(KummerArgs::real(1.0, 1.0, -20.0), &p()).unwrap();
        assert!((v.re / (-20f64).exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_c_rejected() {
        let err = kummer_1f1(KummerArgs::real(0.5, -2.0, 1.0), &p()).unwrap_err();
        assert!(matches!(err, Error::InvalidC { .. }));
        // a = -1 terminates before (c)_j vanishes at c = -2
        assert!(kummer_1f1(KummerArgs::real(-1.0, -2.0, 1.0), &p()).is_ok());
        // a = -3 does not
        assert!(kummer_1f1(KummerArgs::real(-3.0, -2.0, 1.0), &p()).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(
            kummer_1f1(KummerArgs::real(f64::NAN, 1.0, 1.0), &p()),
            Err(Error::NonFiniteArgument)
        );
    }

    #[test]
    fn no_convergence_reported() {
        let prec = EvalPrecision {
            max_terms: 3,
            ..EvalPrecision::default()
        };
        assert_eq!(
            kummer_1f1(KummerArgs::real(0.5, 1.5, 10.0), &prec),
            Err(Error::NoConvergence(3))
        );
    }

    #[test]
    fn asymptotic_leading_form_cases() {
        let v = kummer_asymptotic(KummerArgs::real(1.0, 1.0, 40.0)).unwrap();
        assert!((v.re / 40f64.exp() - 1.0).abs() < 1e-10);
        assert_eq!(
            kummer_asymptotic(KummerArgs::real(-3.0, 2.0, 50.0)),
            Err(Error::PoleOfGamma(3))
        );
    }

    #[test]
    fn derivative_examples() {
        let d = kummer_derivative(KummerArgs::new(c(-1.0, 0.0), c(2.0, 0.0), c(0.7, -2.0)), &p()).unwrap();
        assert!((d - c(-0.5, 0.0)).norm() < 1e-15);
        let e = kummer_derivative(KummerArgs::real(1.0, 1.0, 1.0), &p()).unwrap();
        assert!((e.re - std::f64::consts::E).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let args = KummerArgs::real(-2.3, 1.6, 0.8);
        let d = kummer_derivative(args, &p()).unwrap();
        let h = 1e-6;
        let f = |z: f64| kummer_1f1(KummerArgs::real(-2.3, 1.6, z), &p()).unwrap();
        let fd = (f(0.8 + h) - f(0.8 - h)) / (2.0 * h);
        assert!((d - fd).norm() / d.norm() < 1e-6);
    }

    #[test]
    fn laguerre_small_cases() {
        assert_eq!(laguerre(0, 3.0, c(7.0, 1.0)), c(1.0, 0.0));
        assert!(laguerre(1, 2.0, c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn laguerre_kummer_proportionality() {
        let z = c(1.2, 0.0);
        let lhs = laguerre(3, 4.6, z);
        let rhs = kummer_1f1(KummerArgs::new(c(-3.0, 0.0), c(5.6, 0.0), z), &p()).unwrap()
            * laguerre_kummer_ratio(3, 4.6);
        // independent closed form: binom(7.6,3) = 7.6*6.6*5.6/6
        assert!((laguerre_kummer_ratio(3, 4.6_f64) - 7.6 * 6.6 * 5.6 / 6.0).abs() < 1e-12);
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm());
    }

    #[test]
    fn huge_argument_polynomial_stays_finite_in_log_domain() {
        let s = kummer_1f1_scaled(KummerArgs::real(-60.0, 1.5, 1e300), &p()).unwrap();
        assert!(s.ln_abs().is_finite());
        assert!(s.ln_abs() > 17_000.0);
    }
}
