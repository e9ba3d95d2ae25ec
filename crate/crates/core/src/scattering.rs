//! Analytic S-matrix of the Morse potential, its phase shift and its poles.
//!
//! ```text
//! S(k) = - Γ(-A-ik) Γ(1+2ik) / ( Γ(-A+ik) Γ(1-2ik) ) · e^{-2ik ln 2}
//! ```
//!
//! Every evaluation runs in the log domain. Gamma factors sitting on (or
//! next to) one of their poles are split as `Γ(w) = R(δ)/δ` with `δ` the
//! distance to the pole, so that numerator/denominator pole pairs cancel
//! exactly instead of producing `inf/inf`.

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{PotentialParams, Regime};
use crate::real::Real;
use crate::specfun::{digamma, gamma_pole_index, log_gamma_unchecked};

/// Guard radius around poles for the checked `s_matrix`.
pub const POLE_GUARD: f64 = 1e-8;

/// Anchor of the phase-shift continuation.
pub const PHASE_ANCHOR_K: f64 = 1e-4;

/// One of the four Gamma factors of `S(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GammaFactor {
    /// `Γ(-A - ik)` (numerator)
    Num1,
    /// `Γ(1 + 2ik)` (numerator)
    Num2,
    /// `Γ(-A + ik)` (denominator)
    Den1,
    /// `Γ(1 - 2ik)` (denominator)
    Den2,
}

impl GammaFactor {
    pub const ALL: [GammaFactor; 4] = [Self::Num1, Self::Num2, Self::Den1, Self::Den2];

    pub fn argument<T: Real>(self, a: T, k: Complex<T>) -> Complex<T> {
        let ik = Complex::<T>::i() * k;
        let two = T::lit(2.0);
        match self {
            Self::Num1 => -ik - a,
            Self::Num2 => ik * two + T::one(),
            Self::Den1 => ik - a,
            Self::Den2 => Complex::<T>::one() - ik * two,
        }
    }

    /// `d(argument)/dk`.
    pub fn slope<T: Real>(self) -> Complex<T> {
        let two = T::lit(2.0);
        match self {
            Self::Num1 => Complex::new(T::zero(), -T::one()),
            Self::Num2 => Complex::new(T::zero(), two),
            Self::Den1 => Complex::new(T::zero(), T::one()),
            Self::Den2 => Complex::new(T::zero(), -two),
        }
    }

    pub fn is_numerator(self) -> bool {
        matches!(self, Self::Num1 | Self::Num2)
    }

    pub fn sign(self) -> i32 {
        if self.is_numerator() {
            1
        } else {
            -1
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Num1 => "Num1",
            Self::Num2 => "Num2",
            Self::Den1 => "Den1",
            Self::Den2 => "Den2",
        }
    }
}

/// A Gamma factor that is singular at a pole site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorPole {
    pub factor: GammaFactor,
    /// `+1` numerator, `-1` denominator.
    pub sign: i32,
    /// The factor's argument equals `-gamma_pole`.
    pub gamma_pole: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PoleClass {
    Bound,
    Antibound,
    RedundantEven,
    RedundantOdd,
    SemiBound,
}

/// A singularity (or, for `SemiBound`, a marked regular point) of `S(k)` on the imaginary axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleRecord<T> {
    /// `Im k0`; `Re k0 = 0` always.
    pub im_k: T,
    /// `E = k0^2 = -(Im k0)^2`.
    pub energy: T,
    pub net_order: i32,
    pub class: PoleClass,
    /// `n1` for bound/antibound/semi-bound, the sub-series `n2` for redundant poles.
    pub series_index: i64,
    pub contributing_factors: Vec<FactorPole>,
}

impl<T: Real> PoleRecord<T> {
    pub fn k0(&self) -> Complex<T> {
        Complex::new(T::zero(), self.im_k)
    }

    /// Compact `Num1(n=0)+Num2(n=3)-Den1(n=4)` summary.
    pub fn cancellation_note(&self) -> String {
        let mut s = String::new();
        for (i, f) in self.contributing_factors.iter().enumerate() {
            if i > 0 || f.sign < 0 {
                s.push(if f.sign > 0 { '+' } else { '-' });
            }
            s.push_str(&format!("{}(n={})", f.factor.label(), f.gamma_pole));
        }
        s
    }
}

/// Log-domain decomposition of `S(k)`:
/// `S = exp(log_regular) · slope_ratio · delta^{-pole_order}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SParts<T> {
    pub log_regular: Complex<T>,
    pub slope_ratio: Complex<T>,
    pub delta: Complex<T>,
    pub pole_order: i32,
}

impl<T: Real> SParts<T> {
    pub fn value(&self) -> Complex<T> {
        let base = self.log_regular.exp() * self.slope_ratio;
        if self.pole_order == 0 {
            return base;
        }
        if self.delta.is_zero() {
            return if self.pole_order > 0 {
                Complex::new(T::infinity(), T::zero())
            } else {
                Complex::<T>::zero()
            };
        }
        base * self.delta.powi(-self.pole_order)
    }
}

/// Splits `Γ(w)` near its pole at `-n` as `R(δ)/δ`, returning `ln R(δ)`,
/// `R(δ) = Γ(1+δ) / prod_{i=1..n} (δ - i)`.
fn ln_regular_part<T: Real>(delta: Complex<T>, n: u64) -> Complex<T> {
    let mut acc = log_gamma_unchecked(delta + T::one());
    for i in 1..=n {
        acc = acc - (delta - T::lit(i as f64)).ln();
    }
    acc
}

/// Decomposes the Gamma-ratio part of `S(k)` (without `e^{-2ik ln 2}` and the sign).
///
/// With `snap`, factors detected at a pole are evaluated exactly at it
/// (`δ = 0`) regardless of rounding in `k`.
pub(crate) fn gamma_ratio_parts<T: Real>(params: &PotentialParams<T>, k: Complex<T>, snap: bool) -> SParts<T> {
    let a = params.a();
    let tol = T::int_tol();
    let mut log_regular = Complex::<T>::zero();
    let mut slope_ratio = Complex::<T>::one();
    let mut pole_order = 0;
    let mut anchor: Option<Complex<T>> = None;
    for f in GammaFactor::ALL {
        let w = f.argument(a, k);
        let sign = T::lit(f.sign() as f64);
        match gamma_pole_index(w, tol) {
            Some(n) => {
                let slope = f.slope::<T>();
                let dk = *anchor.get_or_insert_with(|| {
                    if snap {
                        Complex::<T>::zero()
                    } else {
                        (w + T::lit(n as f64)) / slope
                    }
                });
                let delta = slope * dk;
                log_regular = log_regular + ln_regular_part(delta, n) * sign;
                if f.is_numerator() {
                    slope_ratio = slope_ratio / slope;
                    pole_order += 1;
                } else {
                    slope_ratio = slope_ratio * slope;
                    pole_order -= 1;
                }
            }
            None => log_regular = log_regular + log_gamma_unchecked(w) * sign,
        }
    }
    SParts {
        log_regular,
        slope_ratio,
        delta: anchor.unwrap_or_else(Complex::zero),
        pole_order,
    }
}

/// `-2ik ln 2 + i pi`: the non-Gamma part of `ln S(k)`.
fn phase_factor_log<T: Real>(k: Complex<T>) -> Complex<T> {
    let i = Complex::<T>::i();
    -i * k * (T::LN_2() * T::lit(2.0)) + Complex::new(T::zero(), T::PI())
}

pub(crate) fn s_parts<T: Real>(params: &PotentialParams<T>, k: Complex<T>, snap: bool) -> SParts<T> {
    let mut parts = gamma_ratio_parts(params, k, snap);
    parts.log_regular = parts.log_regular + phase_factor_log(k);
    parts
}

/// `S(k)` with no pole guard; `inf` exactly at a pole, `0` exactly at a zero.
pub fn s_matrix_unchecked<T: Real>(params: &PotentialParams<T>, k: Complex<T>) -> Complex<T> {
    s_parts(params, k, false).value()
}

/// `S(k)`, refusing points within `POLE_GUARD` of a pole.
pub fn s_matrix<T: Real>(params: &PotentialParams<T>, k: Complex<T>) -> Result<Complex<T>> {
    let guard = T::lit(POLE_GUARD);
    if k.re.abs() <= guard {
        let poles = enumerate_poles(params, k.im - guard * T::lit(2.0), k.im + guard * T::lit(2.0))?;
        if let Some(p) = poles
            .iter()
            .find(|p| p.net_order >= 1 && (p.im_k - k.im).abs() <= guard)
        {
            return Err(Error::AtPole {
                im_k: p.im_k.to_f64_lossy(),
                class: p.class,
                series_index: p.series_index,
            });
        }
    }
    let parts = s_parts(params, k, false);
    if parts.pole_order < 0 && parts.delta.norm() <= guard {
        return Err(Error::AtZero {
            re_k: k.re.to_f64_lossy(),
            im_k: k.im.to_f64_lossy(),
        });
    }
    Ok(parts.value())
}

/// `Im ln S(k)` on the branch produced by the log-domain sum (no unwrapping).
fn raw_phase<T: Real>(params: &PotentialParams<T>, k: T) -> T {
    let parts = s_parts(params, Complex::new(k, T::zero()), false);
    let extra = if parts.pole_order == 0 { parts.slope_ratio.arg() } else { T::zero() };
    parts.log_regular.im + extra
}

fn unwrap_towards<T: Real>(raw: T, previous: T) -> T {
    let two_pi = T::PI() * T::lit(2.0);
    raw + ((previous - raw) / two_pi).round() * two_pi
}

fn anchor_phase<T: Real>(params: &PotentialParams<T>) -> T {
    // Reduced into (-pi/2, 3pi/2] so that the k -> 0 limits S = -1 and S = +1
    // sit in the interior of the range.
    let raw = raw_phase(params, T::lit(PHASE_ANCHOR_K));
    let two_pi = T::PI() * T::lit(2.0);
    let lo = -T::FRAC_PI_2();
    let mut v = raw - ((raw - lo) / two_pi).floor() * two_pi;
    if v <= lo {
        v = v + two_pi;
    }
    v
}

/// Continues the phase from `(k_from, phase_from)` to `k_to`, subdividing
/// until consecutive samples differ by less than `pi/2`.
fn continue_phase<T: Real>(params: &PotentialParams<T>, k_from: T, phase_from: T, k_to: T) -> T {
    let max_step = T::lit(0.05);
    let quarter_turn = T::FRAC_PI_2();
    let mut k = k_from;
    let mut phase = phase_from;
    while k < k_to {
        let mut h = (k_to - k).min(max_step);
        loop {
            let next = unwrap_towards(raw_phase(params, k + h), phase);
            if (next - phase).abs() < quarter_turn || h < T::lit(1e-12) {
                k = if h == k_to - k { k_to } else { k + h };
                phase = next;
                break;
            }
            h = h * T::lit(0.5);
        }
    }
    phase
}

/// Continuous phase shift `δ_A(k)`, `S(k) = e^{iδ}`, for real `k > 0`.
pub fn phase_shift<T: Real>(params: &PotentialParams<T>, k: T) -> Result<T> {
    if !(k > T::zero()) {
        return Err(Error::NonPositiveK(k.to_f64_lossy()));
    }
    let k_ref = T::lit(PHASE_ANCHOR_K);
    let anchor = anchor_phase(params);
    if k <= k_ref {
        return Ok(continue_phase_down(params, k_ref, anchor, k));
    }
    Ok(continue_phase(params, k_ref, anchor, k))
}

fn continue_phase_down<T: Real>(params: &PotentialParams<T>, k_from: T, phase_from: T, k_to: T) -> T {
    // Below the anchor the phase varies by O(k); one unwrapping step suffices.
    let _ = k_from;
    unwrap_towards(raw_phase(params, k_to), phase_from)
}

/// Phase shift along an increasing sequence of momenta, sharing one continuation.
pub fn phase_shift_curve<T: Real>(params: &PotentialParams<T>, ks: &[T]) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(ks.len());
    let k_ref = T::lit(PHASE_ANCHOR_K);
    let mut k_prev = k_ref;
    let mut phase_prev = anchor_phase(params);
    for &k in ks {
        if !(k > T::zero()) {
            return Err(Error::NonPositiveK(k.to_f64_lossy()));
        }
        if k < k_prev {
            if k_prev == k_ref || k <= k_ref {
                out.push(phase_shift(params, k)?);
                continue;
            }
            return Err(Error::InvalidParameter("momenta must be non-decreasing".into()));
        }
        phase_prev = continue_phase(params, k_prev, phase_prev, k);
        k_prev = k;
        out.push(phase_prev);
    }
    Ok(out)
}

/// `Δ(k) = dδ/dk`, from the digamma function:
/// `Δ = -2 Re ψ(-A+ik) + 4 Re ψ(1+2ik) - 2 ln 2` for real `k`.
pub fn phase_shift_derivative<T: Real>(params: &PotentialParams<T>, k: T) -> Result<T> {
    if !(k > T::zero()) {
        return Err(Error::NonPositiveK(k.to_f64_lossy()));
    }
    let kk = Complex::new(k, T::zero());
    let i = Complex::<T>::i();
    let a = params.a();
    // d/dk of each ln Γ term by the chain rule.
    let d = -i * digamma(GammaFactor::Num1.argument(a, kk))? - i * digamma(GammaFactor::Den1.argument(a, kk))?
        + i * T::lit(2.0) * digamma(GammaFactor::Num2.argument(a, kk))?
        + i * T::lit(2.0) * digamma(GammaFactor::Den2.argument(a, kk))?;
    Ok(d.im - T::LN_2() * T::lit(2.0))
}

#[derive(Debug, Clone, Copy)]
enum SiteOrigin {
    BoundAntibound(u64),
    Redundant(u64),
}

/// All poles of `S(k)` with `im_k_min <= Im k <= im_k_max`, by descending `Im k`.
///
/// Candidate sites come from the numerator factors; each is kept when the
/// numerator poles outnumber the denominator poles there. For integer `A`
/// the cancelled point `k = 0` is reported as a `SemiBound` marker with net
/// order zero.
pub fn enumerate_poles<T: Real>(params: &PotentialParams<T>, im_k_min: T, im_k_max: T) -> Result<Vec<PoleRecord<T>>> {
    if !(im_k_min < im_k_max) {
        return Err(Error::InvalidParameter(format!(
            "empty pole window [{im_k_min}, {im_k_max}]"
        )));
    }
    let a = params.a();
    let tol = T::int_tol();
    let two = T::lit(2.0);

    let mut sites: Vec<(T, SiteOrigin)> = Vec::new();
    // k1 = i(A - n1)
    let n1_lo = (a - im_k_max - tol).ceil().max(T::zero());
    let n1_hi = (a - im_k_min + tol).floor();
    if n1_hi >= n1_lo {
        let (lo, hi) = (n1_lo.to_u64().unwrap_or(0), n1_hi.to_u64().unwrap_or(0));
        for n1 in lo..=hi {
            sites.push((a - T::lit(n1 as f64), SiteOrigin::BoundAntibound(n1)));
        }
    }
    // k2 = i(1 + n2)/2
    let n2_lo = (two * im_k_min - T::one() - tol).ceil().max(T::zero());
    let n2_hi = (two * im_k_max - T::one() + tol).floor();
    if n2_hi >= n2_lo {
        let (lo, hi) = (n2_lo.to_u64().unwrap_or(0), n2_hi.to_u64().unwrap_or(0));
        for n2 in lo..=hi {
            sites.push(((T::one() + T::lit(n2 as f64)) / two, SiteOrigin::Redundant(n2)));
        }
    }
    sites.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));

    let mut merged: Vec<(T, Option<u64>, Option<u64>)> = Vec::new();
    for (im, origin) in sites {
        let (b, r) = match origin {
            SiteOrigin::BoundAntibound(n) => (Some(n), None),
            SiteOrigin::Redundant(n) => (None, Some(n)),
        };
        match merged.last_mut() {
            Some(last) if (last.0 - im).abs() <= tol => {
                last.1 = last.1.or(b);
                last.2 = last.2.or(r);
            }
            _ => merged.push((im, b, r)),
        }
    }

    let mut out = Vec::new();
    for (im, n1, n2) in merged {
        let k = Complex::new(T::zero(), im);
        let mut factors = Vec::new();
        let mut net = 0;
        for f in GammaFactor::ALL {
            if let Some(n) = gamma_pole_index(f.argument(a, k), tol) {
                factors.push(FactorPole {
                    factor: f,
                    sign: f.sign(),
                    gamma_pole: n,
                });
                net += f.sign();
            }
        }
        let record = |class, series_index: u64, im_k: T| PoleRecord {
            im_k,
            energy: -im_k * im_k,
            net_order: net,
            class,
            series_index: series_index as i64,
            contributing_factors: factors.clone(),
        };
        if net >= 1 {
            if let Some(n1) = n1 {
                let eps = a - T::lit(n1 as f64);
                if eps > tol {
                    out.push(record(PoleClass::Bound, n1, eps));
                    continue;
                }
                if eps < -tol {
                    out.push(record(PoleClass::Antibound, n1, eps));
                    continue;
                }
            }
            if let Some(n2) = n2 {
                let im_k = (T::one() + T::lit(n2 as f64)) / two;
                if n2 % 2 == 0 {
                    out.push(record(PoleClass::RedundantEven, n2 / 2, im_k));
                } else {
                    out.push(record(PoleClass::RedundantOdd, (n2 - 1) / 2, im_k));
                }
            }
        } else if net == 0 && im.abs() <= tol {
            if let (Regime::Integer(n), Some(_)) = (params.regime(), n1) {
                out.push(record(PoleClass::SemiBound, n as u64, T::zero()));
            }
        }
    }
    Ok(out)
}

/// Residue of `S(k)` at a simple pole, from `Res Γ(-n) = (-1)^n / n!` and the
/// finite limits of any cancelling Gamma pole pairs.
pub fn residue<T: Real>(params: &PotentialParams<T>, pole: &PoleRecord<T>) -> Result<Complex<T>> {
    if pole.net_order != 1 {
        return Err(Error::NotSimplePole {
            im_k: pole.im_k.to_f64_lossy(),
            net_order: pole.net_order,
        });
    }
    let parts = s_parts(params, pole.k0(), true);
    debug_assert_eq!(parts.pole_order, 1);
    Ok(parts.log_regular.exp() * parts.slope_ratio)
}

/// Rectangular sampling window in the complex `k` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec<T> {
    pub re_min: T,
    pub re_max: T,
    pub im_min: T,
    pub im_max: T,
    pub step: T,
    /// Ceiling applied to `|S|`.
    pub cap: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(re: (T, T), im: (T, T), step: T) -> Result<Self> {
        let spec = Self {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
            step,
            cap: T::lit(1e6),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_cap(mut self, cap: T) -> Result<Self> {
        self.cap = cap;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.re_min < self.re_max) || !(self.im_min < self.im_max) {
            return Err(Error::InvalidParameter("grid ranges must satisfy lo < hi".into()));
        }
        if !(self.step > T::zero()) || !self.step.is_finite() {
            return Err(Error::InvalidParameter("grid step must be positive".into()));
        }
        if !(self.cap > T::zero()) {
            return Err(Error::InvalidParameter("grid cap must be positive".into()));
        }
        Ok(())
    }

    fn nodes(lo: T, hi: T, step: T) -> Vec<T> {
        let n = ((hi - lo) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
        (0..=n).map(|i| lo + step * T::lit(i as f64)).collect()
    }

    pub fn re_nodes(&self) -> Vec<T> {
        Self::nodes(self.re_min, self.re_max, self.step)
    }

    pub fn im_nodes(&self) -> Vec<T> {
        Self::nodes(self.im_min, self.im_max, self.step)
    }
}

/// `|S(k)|` on a grid; `values[row][col]` with rows along `Im k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexGrid<T> {
    pub spec: GridSpec<T>,
    pub re_nodes: Vec<T>,
    pub im_nodes: Vec<T>,
    pub values: Vec<Vec<T>>,
}

fn grid_row<T: Real>(params: &PotentialParams<T>, im: T, re_nodes: &[T], cap: T) -> Vec<T> {
    re_nodes
        .iter()
        .map(|&re| {
            let v = s_matrix_unchecked(params, Complex::new(re, im)).norm();
            if v.is_nan() || v > cap {
                cap
            } else {
                v
            }
        })
        .collect()
}

pub fn s_matrix_grid<T: Real>(params: &PotentialParams<T>, spec: &GridSpec<T>) -> ComplexGrid<T> {
    let re_nodes = spec.re_nodes();
    let im_nodes = spec.im_nodes();
    let values = im_nodes
        .iter()
        .map(|&im| grid_row(params, im, &re_nodes, spec.cap))
        .collect();
    ComplexGrid {
        spec: *spec,
        re_nodes,
        im_nodes,
        values,
    }
}

/// Row-parallel `s_matrix_grid`; output is bitwise identical to the sequential one.
pub fn s_matrix_grid_par<T: Real>(params: &PotentialParams<T>, spec: &GridSpec<T>) -> ComplexGrid<T> {
    let re_nodes = spec.re_nodes();
    let im_nodes = spec.im_nodes();
    let values = im_nodes
        .par_iter()
        .map(|&im| grid_row(params, im, &re_nodes, spec.cap))
        .collect();
    ComplexGrid {
        spec: *spec,
        re_nodes,
        im_nodes,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn params(a: f64) -> PotentialParams<f64> {
        PotentialParams::new(a).unwrap()
    }

    fn ims(poles: &[PoleRecord<f64>], class: PoleClass) -> Vec<f64> {
        poles.iter().filter(|p| p.class == class).map(|p| p.im_k).collect()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
    }

    #[test]
    fn origin_value() {
        assert!((s_matrix(&params(0.7), C::new(0.0, 0.0)).unwrap() - C::new(-1.0, 0.0)).norm() < 1e-14);
        // Integer A: the cancelling Gamma pair flips the sign.
        assert!((s_matrix_unchecked(&params(2.0), C::new(0.0, 0.0)) - C::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn unit_modulus_on_real_axis() {
        let s = s_matrix(&params(2.3), C::new(1.0, 0.0)).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn guard_reports_pole() {
        let err = s_matrix(&params(2.3), C::new(0.0, 0.3)).unwrap_err();
        assert!(matches!(err, Error::AtPole { class: PoleClass::Bound, .. }));
        let near = s_matrix(&params(2.3), C::new(1e-5, 0.3)).unwrap();
        assert!(near.norm() > 1e4);
    }

    #[test]
    fn zero_reported() {
        // Γ(-A+ik) has a pole at k = -i(A - n).
        let err = s_matrix(&params(2.3), C::new(0.0, -0.3)).unwrap_err();
        assert!(matches!(err, Error::AtZero { .. }));
    }

    #[test]
    fn generic_pole_map() {
        let p = enumerate_poles(&params(2.3), -3.0, 3.0).unwrap();
        assert!(close(&ims(&p, PoleClass::Bound), &[2.3, 1.3, 0.3]));
        assert!(close(&ims(&p, PoleClass::Antibound), &[-0.7, -1.7, -2.7]));
        assert!(close(&ims(&p, PoleClass::RedundantEven), &[2.5, 1.5, 0.5]));
        assert!(close(&ims(&p, PoleClass::RedundantOdd), &[3.0, 2.0, 1.0]));
        assert!(p.iter().all(|r| r.net_order == 1));
        assert_eq!(p.len(), 12);
        for w in p.windows(2) {
            assert!(w[0].im_k > w[1].im_k);
        }
    }

    #[test]
    fn integer_pole_map() {
        let p = enumerate_poles(&params(2.0), -3.0, 3.0).unwrap();
        assert!(close(&ims(&p, PoleClass::Bound), &[2.0, 1.0]));
        assert!(close(&ims(&p, PoleClass::SemiBound), &[0.0]));
        assert!(ims(&p, PoleClass::Antibound).is_empty());
        assert!(close(&ims(&p, PoleClass::RedundantEven), &[2.5, 1.5, 0.5]));
        assert!(ims(&p, PoleClass::RedundantOdd).is_empty());
        let semi = p.iter().find(|r| r.class == PoleClass::SemiBound).unwrap();
        assert_eq!(semi.net_order, 0);
        assert_eq!(semi.series_index, 2);
        let top = p.iter().find(|r| r.class == PoleClass::Bound).unwrap();
        assert!((top.im_k - 2.0).abs() < 1e-12);
        assert_eq!(top.contributing_factors.len(), 3);
        assert_eq!(top.cancellation_note(), "Num1(n=0)+Num2(n=3)-Den1(n=4)");
    }

    #[test]
    fn half_integer_pole_map() {
        let p = enumerate_poles(&params(2.5), -3.0, 3.0).unwrap();
        assert!(close(&ims(&p, PoleClass::Bound), &[2.5, 1.5, 0.5]));
        assert!(ims(&p, PoleClass::Antibound).is_empty());
        assert!(ims(&p, PoleClass::RedundantEven).is_empty());
        assert!(close(&ims(&p, PoleClass::RedundantOdd), &[3.0, 2.0, 1.0]));
    }

    #[test]
    fn small_a_has_single_bound_pole() {
        let p = enumerate_poles(&params(0.4), -1.0, 1.0).unwrap();
        assert!(close(&ims(&p, PoleClass::Bound), &[0.4]));
    }

    #[test]
    fn window_must_be_nonempty() {
        assert!(enumerate_poles(&params(1.0), 1.0, 1.0).is_err());
    }

    #[test]
    fn residue_requires_simple_pole() {
        let p = enumerate_poles(&params(2.0), -0.5, 0.2).unwrap();
        let semi = p.iter().find(|r| r.class == PoleClass::SemiBound).unwrap();
        assert!(matches!(residue(&params(2.0), semi), Err(Error::NotSimplePole { .. })));
    }

    #[test]
    fn phase_needs_positive_k() {
        assert_eq!(phase_shift(&params(1.0), 0.0), Err(Error::NonPositiveK(0.0)));
        assert_eq!(phase_shift_derivative(&params(1.0), -1.0), Err(Error::NonPositiveK(-1.0)));
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new((0.0, 0.0), (-1.0, 1.0), 0.1).is_err());
        assert!(GridSpec::new((-1.0, 1.0), (-1.0, 1.0), 0.0).is_err());
        let g = GridSpec::new((-1.0, 1.0), (-3.0, 3.0), 0.05).unwrap();
        assert_eq!(g.re_nodes().len(), 41);
        assert_eq!(g.im_nodes().len(), 121);
    }

    fn contour_residue(p: &PotentialParams<f64>, k0: C, r: f64) -> C {
        let n = 512;
        let mut acc = C::new(0.0, 0.0);
        for j in 0..n {
            let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let dk = C::from_polar(r, t);
            // (1/2pi i) oint S dk = mean of S * dk over the nodes
            acc += s_matrix_unchecked(p, k0 + dk) * dk;
        }
        acc / n as f64
    }

    #[test]
    fn residues_match_contour() {
        for a in [2.0, 2.3, 2.5] {
            let p = params(a);
            for pole in enumerate_poles(&p, -3.0, 3.0).unwrap() {
                if pole.net_order != 1 {
                    continue;
                }
                let exact = residue(&p, &pole).unwrap();
                let quad = contour_residue(&p, pole.k0(), 1e-3);
                assert!(
                    (exact - quad).norm() <= 1e-8 * exact.norm(),
                    "A={a} k={} {exact} {quad}",
                    pole.im_k
                );
            }
        }
    }

    #[test]
    fn phase_curve_is_continuous_and_differentiates_to_delta() {
        for a in [0.5, 1.5, 2.5] {
            let p = params(a);
            let ks: Vec<f64> = (1..=5000).map(|i| i as f64 * 1e-3).collect();
            let d = phase_shift_curve(&p, &ks).unwrap();
            for w in d.windows(2) {
                assert!((w[1] - w[0]).abs() < std::f64::consts::FRAC_PI_2);
            }
            for &k in &[0.5, 1.0, 3.0] {
                let h = 1e-4;
                let fd = (phase_shift(&p, k + h).unwrap() - phase_shift(&p, k - h).unwrap()) / (2.0 * h);
                let an = phase_shift_derivative(&p, k).unwrap();
                assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0), "A={a} k={k} {fd} {an}");
            }
        }
    }

    #[test]
    fn phase_matches_arg_of_s() {
        let p = params(1.5);
        let d = phase_shift(&p, 2.0).unwrap();
        let s = s_matrix(&p, C::new(2.0, 0.0)).unwrap();
        let diff = (d - s.arg()) / (2.0 * std::f64::consts::PI);
        assert!((diff - diff.round()).abs() < 1e-12);
    }
}
