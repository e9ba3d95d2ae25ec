//! First-order ladder operators of the Morse problem.
//!
//! With `E = -ε^2`, multiplying the Schrödinger equation by `e^{2x}` gives
//! `h_ε ψ = -ψ` for
//!
//! ```text
//! h_ε = -e^{2x} d²/dx² + ε² e^{2x} - (1+2A) e^x
//! ```
//!
//! and `h_ε = A⁺_ε A⁻_ε + D_ε = A⁻_{ε-1} A⁺_{ε-1} + D_{ε-1}` with
//!
//! ```text
//! A⁺_ε = -e^x d/dx + (1+ε) e^x + γ_ε
//! A⁻_ε =  e^x d/dx +     ε e^x + γ_ε
//! γ_ε = -(1+2A)/(1+2ε),   D_ε = -γ_ε²
//! ```

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{PotentialParams, Regime};
use crate::real::Real;
use crate::scaled::Scaled;
use crate::states::{Family, WaveFunctionSpec, MAX_JET_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderOperator<T> {
    pub sign: Sign,
    pub epsilon: T,
    pub beta: T,
    pub gamma: T,
    pub d_const: T,
    /// `1 + 2A`, carried for the regularised form.
    one_plus_two_a: T,
}

/// `A^±_ε`; fails at `ε = -1/2`.
pub fn make_operator<T: Real>(params: &PotentialParams<T>, epsilon: T, sign: Sign) -> Result<LadderOperator<T>> {
    let denom = T::one() + T::lit(2.0) * epsilon;
    if denom.abs() <= T::int_tol() {
        return Err(Error::SingularEpsilon(epsilon.to_f64_lossy()));
    }
    let gamma = -params.one_plus_two_a() / denom;
    Ok(LadderOperator {
        sign,
        epsilon,
        beta: match sign {
            Sign::Plus => T::one() + epsilon,
            Sign::Minus => epsilon,
        },
        gamma,
        d_const: -gamma * gamma,
        one_plus_two_a: params.one_plus_two_a(),
    })
}

impl<T: Real> LadderOperator<T> {
    fn first_order(&self) -> FirstOrder<T> {
        FirstOrder {
            p: match self.sign {
                Sign::Plus => -T::one(),
                Sign::Minus => T::one(),
            },
            q: self.beta,
            c: self.gamma,
        }
    }

    /// `(A f)(x)`.
    pub fn apply<F: SmoothFunction<T> + ?Sized>(&self, f: &F, x: T) -> Result<Complex<T>> {
        let jet = f.jet_at(x, 1)?;
        Ok(self.first_order().apply(&jet, x).value(0))
    }
}

/// Free-function form of [`LadderOperator::apply`].
pub fn apply<T: Real, F: SmoothFunction<T> + ?Sized>(op: &LadderOperator<T>, f: &F, x: T) -> Result<Complex<T>> {
    op.apply(f, x)
}

/// `P e^x d/dx + Q e^x + C`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct FirstOrder<T> {
    p: T,
    q: T,
    c: T,
}

/// `(1+2ε) A^±_ε`, finite at `ε = -1/2` where it reduces to `-(1+2A)`.
fn regularised<T: Real>(params: &PotentialParams<T>, epsilon: T, sign: Sign) -> FirstOrder<T> {
    let w = T::one() + T::lit(2.0) * epsilon;
    let (p, q) = match sign {
        Sign::Plus => (-T::one(), T::one() + epsilon),
        Sign::Minus => (T::one(), epsilon),
    };
    FirstOrder {
        p: w * p,
        q: w * q,
        c: -params.one_plus_two_a(),
    }
}

fn binom(n: usize, k: usize) -> f64 {
    const B: [[f64; 6]; 6] = [
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, 2.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 3.0, 3.0, 1.0, 0.0, 0.0],
        [1.0, 4.0, 6.0, 4.0, 1.0, 0.0],
        [1.0, 5.0, 10.0, 10.0, 5.0, 1.0],
    ];
    B[n][k]
}

/// Derivatives `f, f', ...` at one point, stored as `values[j] · e^{log_scale}`,
/// together with a magnitude bound of the same shape used to judge cancellation.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<T> {
    pub log_scale: T,
    pub values: Vec<Complex<T>>,
    pub magnitude: Vec<T>,
}

impl<T: Real> Jet<T> {
    pub fn from_values(values: Vec<Complex<T>>) -> Self {
        let magnitude = values.iter().map(|v| v.norm()).collect();
        Self {
            log_scale: T::zero(),
            values,
            magnitude,
        }
    }

    pub fn from_scaled(values: &[Scaled<T>]) -> Self {
        let top = values
            .iter()
            .filter(|s| !s.is_zero())
            .map(|s| s.normalized().log_scale)
            .fold(T::neg_infinity(), T::max);
        let top = if top.is_finite() { top } else { T::zero() };
        let values: Vec<Complex<T>> = values.iter().map(|s| s.at_scale(top)).collect();
        let magnitude = values.iter().map(|v| v.norm()).collect();
        Self {
            log_scale: top,
            values,
            magnitude,
        }
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    /// `j`-th derivative.
    pub fn value(&self, j: usize) -> Complex<T> {
        self.values[j] * self.log_scale.exp()
    }

    pub fn scaled(&self, j: usize) -> Scaled<T> {
        Scaled {
            mantissa: self.values[j],
            log_scale: self.log_scale,
        }
    }

    fn with(&self, values: Vec<Complex<T>>, magnitude: Vec<T>) -> Self {
        Self {
            log_scale: self.log_scale,
            values,
            magnitude,
        }
    }

    fn sub(&self, other: &Self) -> (Vec<Complex<T>>, Vec<T>) {
        let shift = (other.log_scale - self.log_scale).exp();
        let v = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| *a - *b * shift)
            .collect();
        let m = self
            .magnitude
            .iter()
            .zip(&other.magnitude)
            .map(|(a, b)| *a + *b * shift)
            .collect();
        (v, m)
    }

    fn add_multiple(&self, other: &Self, factor: T) -> Self {
        let shift = (other.log_scale - self.log_scale).exp();
        let v = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| *a + *b * (factor * shift))
            .collect();
        let m = self
            .magnitude
            .iter()
            .zip(&other.magnitude)
            .map(|(a, b)| *a + *b * (factor.abs() * shift))
            .collect();
        self.with(v, m)
    }
}

impl<T: Real> FirstOrder<T> {
    /// Jet of `L f` one order below the input jet.
    fn apply(&self, f: &Jet<T>, x: T) -> Jet<T> {
        let ex = x.exp();
        let n = f.order();
        let mut v = Vec::with_capacity(n);
        let mut m = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = Complex::<T>::zero();
            let mut mag = T::zero();
            for i in 0..=j {
                let b = T::lit(binom(j, i));
                let p = self.p * ex;
                let q = if i == 0 { self.q * ex + self.c } else { self.q * ex };
                acc = acc + (f.values[j - i + 1] * p + f.values[j - i] * q) * b;
                let qa = if i == 0 { (self.q * ex).abs() + self.c.abs() } else { (self.q * ex).abs() };
                mag = mag + (f.magnitude[j - i + 1] * p.abs() + f.magnitude[j - i] * qa) * b;
            }
            v.push(acc);
            m.push(mag);
        }
        f.with(v, m)
    }
}

/// Jet of `h_ε f`, two orders below the input jet.
fn h_apply<T: Real>(params: &PotentialParams<T>, epsilon: T, f: &Jet<T>, x: T) -> Jet<T> {
    let e2x = (x + x).exp();
    let ex = x.exp();
    let w = params.one_plus_two_a();
    let n = f.order();
    let mut v = Vec::new();
    let mut m = Vec::new();
    for j in 0..n.saturating_sub(1) {
        let mut acc = Complex::<T>::zero();
        let mut mag = T::zero();
        for i in 0..=j {
            let b = T::lit(binom(j, i));
            let two_i = T::lit((1u32 << i) as f64);
            let r = -two_i * e2x;
            let s_quad = epsilon * epsilon * two_i * e2x;
            let s_lin = w * ex;
            acc = acc + (f.values[j - i + 2] * r + f.values[j - i] * (s_quad - s_lin)) * b;
            mag = mag + (f.magnitude[j - i + 2] * r.abs() + f.magnitude[j - i] * (s_quad.abs() + s_lin.abs())) * b;
        }
        v.push(acc);
        m.push(mag);
    }
    f.with(v, m)
}

/// Anything that can report derivatives at a point.
pub trait SmoothFunction<T: Real> {
    /// `f, f', ..., f^{(order)}` at `x`.
    fn jet_at(&self, x: T, order: usize) -> Result<Jet<T>>;
}

impl<T: Real> SmoothFunction<T> for WaveFunctionSpec<T> {
    fn jet_at(&self, x: T, order: usize) -> Result<Jet<T>> {
        Ok(Jet::from_scaled(&self.jet_scaled(x, order)?))
    }
}

/// `f(x) = amplitude · exp(a2 x² + a1 x + s sin(ω x))`, with closed-form derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpSmooth<T> {
    pub amplitude: T,
    pub a2: T,
    pub a1: T,
    pub s: T,
    pub omega: T,
}

impl<T: Real> ExpSmooth<T> {
    pub fn gaussian() -> Self {
        Self {
            amplitude: T::one(),
            a2: -T::one(),
            a1: T::zero(),
            s: T::zero(),
            omega: T::zero(),
        }
    }

    pub fn exponential(rate: T) -> Self {
        Self {
            a2: T::zero(),
            a1: rate,
            ..Self::gaussian()
        }
    }

    pub fn constant(value: T) -> Self {
        Self {
            amplitude: value,
            a2: T::zero(),
            ..Self::gaussian()
        }
    }

    /// Random member with moderate derivatives on `[-2, 2]`.
    pub fn random<R: rand::Rng>(rng: &mut R) -> Self {
        let u = |rng: &mut R, lo: f64, hi: f64| T::lit(rng.gen_range(lo..hi));
        Self {
            amplitude: u(rng, 0.5, 2.0),
            a2: u(rng, -1.0, 0.2),
            a1: u(rng, -1.5, 1.5),
            s: u(rng, -1.0, 1.0),
            omega: u(rng, 0.0, 3.0),
        }
    }
}

impl<T: Real> SmoothFunction<T> for ExpSmooth<T> {
    fn jet_at(&self, x: T, order: usize) -> Result<Jet<T>> {
        if order > MAX_JET_ORDER {
            return Err(Error::JetOrder {
                requested: order,
                max: MAX_JET_ORDER,
            });
        }
        let two = T::lit(2.0);
        let (sn, cs) = (self.omega * x).sin_cos();
        let w = self.omega;
        let g0 = self.a2 * x * x + self.a1 * x + self.s * sn;
        let g1 = two * self.a2 * x + self.a1 + self.s * w * cs;
        let g2 = two * self.a2 - self.s * w * w * sn;
        let g3 = -self.s * w * w * w * cs;
        let f = self.amplitude * g0.exp();
        let all = [
            f,
            g1 * f,
            (g2 + g1 * g1) * f,
            (g3 + T::lit(3.0) * g1 * g2 + g1 * g1 * g1) * f,
        ];
        Ok(Jet::from_values(
            all[..=order].iter().map(|&v| Complex::new(v, T::zero())).collect(),
        ))
    }
}

/// The zero function.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ZeroFunction;

impl<T: Real> SmoothFunction<T> for ZeroFunction {
    fn jet_at(&self, _x: T, order: usize) -> Result<Jet<T>> {
        Ok(Jet::from_values(vec![Complex::<T>::zero(); order + 1]))
    }
}

/// Derivatives of a plain closure by central differences of step `h`.
pub struct FiniteDifference<F, T> {
    pub f: F,
    pub h: T,
}

impl<T: Real, F: Fn(T) -> Result<Complex<T>>> SmoothFunction<T> for FiniteDifference<F, T> {
    fn jet_at(&self, x: T, order: usize) -> Result<Jet<T>> {
        if order > MAX_JET_ORDER {
            return Err(Error::JetOrder {
                requested: order,
                max: MAX_JET_ORDER,
            });
        }
        let h = self.h;
        let f = |k: i32| (self.f)(x + h * T::lit(k as f64));
        let (m2, m1, c0, p1, p2) = (f(-2)?, f(-1)?, f(0)?, f(1)?, f(2)?);
        let d1 = (m2 - m1 * T::lit(8.0) + p1 * T::lit(8.0) - p2) / (h * T::lit(12.0));
        let d2 = (-m2 + m1 * T::lit(16.0) - c0 * T::lit(30.0) + p1 * T::lit(16.0) - p2) / (h * h * T::lit(12.0));
        let d3 = (-m2 + m1 * T::lit(2.0) - p1 * T::lit(2.0) + p2) / (h * h * h * T::lit(2.0));
        Ok(Jet::from_values([c0, d1, d2, d3][..=order].to_vec()))
    }
}

fn relative<T: Real>(diff: Complex<T>, mag: T) -> T {
    if mag > T::zero() {
        diff.norm() / mag
    } else {
        diff.norm()
    }
}

/// Largest relative defect of `A⁺_ε A⁻_ε + D_ε = h_ε` and
/// `A⁻_{ε-1} A⁺_{ε-1} + D_{ε-1} = h_ε` applied to `f` on `x_samples`.
pub fn factorization_residual<T: Real, F: SmoothFunction<T> + ?Sized>(
    params: &PotentialParams<T>,
    epsilon: T,
    f: &F,
    x_samples: &[T],
) -> Result<T> {
    let up = make_operator(params, epsilon, Sign::Plus)?;
    let down = make_operator(params, epsilon, Sign::Minus)?;
    let up_prev = make_operator(params, epsilon - T::one(), Sign::Plus)?;
    let down_prev = make_operator(params, epsilon - T::one(), Sign::Minus)?;
    let mut worst = T::zero();
    for &x in x_samples {
        let jet = f.jet_at(x, 2)?;
        let h = h_apply(params, epsilon, &jet, x);
        let orderings = [
            (down.first_order(), up.first_order(), up.d_const),
            (up_prev.first_order(), down_prev.first_order(), up_prev.d_const),
        ];
        for (inner, outer, d) in orderings {
            let lhs = outer.apply(&inner.apply(&jet, x), x).add_multiple(&jet.with(vec![jet.values[0]], vec![jet.magnitude[0]]), d);
            let (v, m) = lhs.sub(&h);
            worst = worst.max(relative(v[0], m[0]));
        }
    }
    Ok(worst)
}

/// Largest relative defect of `A⁺_{ε-1} h_ε = h_{ε-1} A⁺_{ε-1}` and
/// `h_ε A⁻_{ε-1} = A⁻_{ε-1} h_{ε-1}` applied to `f` on `x_samples`.
pub fn intertwining_residual<T: Real, F: SmoothFunction<T> + ?Sized>(
    params: &PotentialParams<T>,
    epsilon: T,
    f: &F,
    x_samples: &[T],
) -> Result<T> {
    let prev = epsilon - T::one();
    let up = make_operator(params, prev, Sign::Plus)?.first_order();
    let down = make_operator(params, prev, Sign::Minus)?.first_order();
    let mut worst = T::zero();
    for &x in x_samples {
        let jet = f.jet_at(x, 3)?;
        let a = up.apply(&h_apply(params, epsilon, &jet, x), x);
        let b = h_apply(params, prev, &up.apply(&jet, x), x);
        let (v, m) = a.sub(&b);
        worst = worst.max(relative(v[0], m[0]));
        let a = h_apply(params, epsilon, &down.apply(&jet, x), x);
        let b = down.apply(&h_apply(params, prev, &jet, x), x);
        let (v, m) = a.sub(&b);
        worst = worst.max(relative(v[0], m[0]));
    }
    Ok(worst)
}

/// `|A f| / (|P e^x f'| + |Q e^x f| + |C f|)`, maximised over `x_samples`.
pub fn annihilation_residual<T: Real, F: SmoothFunction<T> + ?Sized>(
    op: &LadderOperator<T>,
    f: &F,
    x_samples: &[T],
) -> Result<T> {
    let mut worst = T::zero();
    for &x in x_samples {
        let out = op.first_order().apply(&f.jet_at(x, 1)?, x);
        worst = worst.max(relative(out.values[0], out.magnitude[0]));
    }
    Ok(worst)
}

/// The three ε-sequences the ladder operators connect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Series {
    /// `ε = A - n`.
    BoundAntibound,
    /// `ε = m + 1/2`, `m ∈ Z`.
    RedundantEven,
    /// `ε = m + 1`, `m ∈ Z`.
    RedundantOdd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// Index + 1.
    Up,
    /// Index - 1.
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainSpec<T> {
    pub series: Series,
    pub params: PotentialParams<T>,
}

impl<T: Real> ChainSpec<T> {
    pub fn new(series: Series, params: PotentialParams<T>) -> Self {
        Self { series, params }
    }

    pub fn epsilon(&self, index: i64) -> T {
        let i = T::lit(index as f64);
        match self.series {
            Series::BoundAntibound => self.params.a() - i,
            Series::RedundantEven => i + T::lit(0.5),
            Series::RedundantOdd => i + T::one(),
        }
    }

    /// Whether a wavefunction exists at `index`.
    pub fn contains(&self, index: i64) -> bool {
        match self.series {
            Series::BoundAntibound => match self.params.regime() {
                Regime::Generic => index >= 0,
                Regime::Integer(n) => index >= 0 && index <= 2 * n as i64,
                Regime::HalfInteger(n) => index >= 0 && index < 2 * n as i64,
            },
            Series::RedundantEven | Series::RedundantOdd => true,
        }
    }

    pub fn wavefunction(&self, index: i64) -> Result<WaveFunctionSpec<T>> {
        if !self.contains(index) {
            return Err(Error::IndexOutOfChain { index });
        }
        let p = self.params;
        let family = match self.series {
            Series::BoundAntibound => {
                let n = index as u32;
                match p.regime() {
                    Regime::Generic if n <= p.floor_a() => Family::Bound(n),
                    Regime::Generic => Family::Antibound(n),
                    Regime::Integer(big) if n < big => Family::Bound(n),
                    Regime::Integer(big) if n == big => Family::SemiBound,
                    Regime::Integer(_) => Family::TildeBoundInt(n),
                    Regime::HalfInteger(big) if n < big => Family::Bound(n),
                    Regime::HalfInteger(_) => Family::TildeBoundHalf(n),
                }
            }
            Series::RedundantEven if index >= 0 => Family::RedundantEvenChain(index as i32),
            Series::RedundantEven => Family::TildeRedundantEven(index as i32),
            Series::RedundantOdd if index >= 0 => Family::RedundantOddChain(index as i32),
            Series::RedundantOdd => Family::TildeRedundantOdd(index as i32),
        };
        WaveFunctionSpec::new(family, p)
    }

    /// Operator carrying `from` to its neighbour, as `(sign, ε_operator)`.
    pub fn step_operator(&self, from: i64, direction: Direction) -> (Sign, T) {
        let to = target(from, direction);
        let (es, et) = (self.epsilon(from), self.epsilon(to));
        if et < es {
            (Sign::Plus, et)
        } else {
            (Sign::Minus, es)
        }
    }

    /// True when the step operator maps the state at `from` to zero.
    pub fn annihilates(&self, from: i64, direction: Direction) -> bool {
        let a = self.params.a();
        let es = self.epsilon(from);
        let tol = T::int_tol();
        match self.step_operator(from, direction).0 {
            Sign::Plus => (es + a).abs() <= tol,
            Sign::Minus => (es - a).abs() <= tol,
        }
    }
}

fn target(from: i64, direction: Direction) -> i64 {
    match direction {
        Direction::Up => from + 1,
        Direction::Down => from - 1,
    }
}

/// Outcome of mapping one chain state onto a neighbour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainStep<T> {
    pub from: i64,
    pub to: i64,
    pub sign: Sign,
    pub epsilon_operator: T,
    /// The operator was replaced by `(1+2ε) A` at `ε = -1/2`.
    pub regularised: bool,
    /// Mean of `image / target` over the samples.
    pub constant: Complex<T>,
    /// `max |ratio / mean - 1|`.
    pub defect: T,
}

/// 21 points on `[-1, 4]`.
pub fn default_x_samples<T: Real>() -> Vec<T> {
    (0..21).map(|i| T::lit(-1.0 + 0.25 * i as f64)).collect()
}

fn step_operator_form<T: Real>(chain: &ChainSpec<T>, from: i64, direction: Direction) -> (FirstOrder<T>, Sign, T, bool) {
    let (sign, eps) = chain.step_operator(from, direction);
    match make_operator(&chain.params, eps, sign) {
        Ok(op) => (op.first_order(), sign, eps, false),
        Err(_) => (regularised(&chain.params, eps, sign), sign, eps, true),
    }
}

fn ratio_stats<T: Real>(ratios: &[Scaled<T>]) -> (Complex<T>, T) {
    let n = T::lit(ratios.len() as f64);
    let mean = ratios.iter().fold(Scaled::zero(), |acc, r| acc.add(*r)).mul_complex(Complex::new(T::one() / n, T::zero()));
    let mean_value = mean.value();
    let defect = ratios
        .iter()
        .map(|r| {
            let q = Scaled {
                mantissa: r.mantissa / mean.mantissa,
                log_scale: r.log_scale - mean.log_scale,
            };
            (q.value() - T::one()).norm()
        })
        .fold(T::zero(), T::max);
    (mean_value, defect)
}

fn divide<T: Real>(a: Scaled<T>, b: Scaled<T>) -> Scaled<T> {
    Scaled {
        mantissa: a.mantissa / b.mantissa,
        log_scale: a.log_scale - b.log_scale,
    }
}

/// Applies the step operator to the state at `from` and compares with the
/// state at the neighbouring index.
pub fn chain_step<T: Real>(chain: &ChainSpec<T>, from: i64, direction: Direction, x_samples: &[T]) -> Result<ChainStep<T>> {
    let source = chain.wavefunction(from)?;
    if chain.annihilates(from, direction) {
        return Err(Error::AnnihilatedState { index: from });
    }
    let to = target(from, direction);
    let dest = chain.wavefunction(to).map_err(|_| Error::IndexOutOfChain { index: to })?;
    let (op, sign, eps, regularised) = step_operator_form(chain, from, direction);
    let mut ratios = Vec::with_capacity(x_samples.len());
    for &x in x_samples {
        let image = op.apply(&source.jet_at(x, 1)?, x);
        ratios.push(divide(image.scaled(0), dest.evaluate_scaled(x)?));
    }
    let (constant, defect) = ratio_stats(&ratios);
    Ok(ChainStep {
        from,
        to,
        sign,
        epsilon_operator: eps,
        regularised,
        constant,
        defect,
    })
}

/// Applies the Up step and then the Down step, comparing with the start.
pub fn round_trip<T: Real>(chain: &ChainSpec<T>, from: i64, x_samples: &[T]) -> Result<ChainStep<T>> {
    let source = chain.wavefunction(from)?;
    if chain.annihilates(from, Direction::Up) {
        return Err(Error::AnnihilatedState { index: from });
    }
    let mid = from + 1;
    chain.wavefunction(mid).map_err(|_| Error::IndexOutOfChain { index: mid })?;
    if chain.annihilates(mid, Direction::Down) {
        return Err(Error::AnnihilatedState { index: mid });
    }
    let (first, _, _, reg1) = step_operator_form(chain, from, Direction::Up);
    let (second, sign, eps, reg2) = step_operator_form(chain, mid, Direction::Down);
    let mut ratios = Vec::with_capacity(x_samples.len());
    for &x in x_samples {
        let jet = source.jet_at(x, 2)?;
        let image = second.apply(&first.apply(&jet, x), x);
        ratios.push(divide(image.scaled(0), jet.scaled(0)));
    }
    let (constant, defect) = ratio_stats(&ratios);
    Ok(ChainStep {
        from,
        to: from,
        sign,
        epsilon_operator: eps,
        regularised: reg1 || reg2,
        constant,
        defect,
    })
}
