//! Oracle checks run against a single potential, used by `verify-all`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::ladder::{
    annihilation_residual, chain_step, default_x_samples, factorization_residual, intertwining_residual,
    make_operator, round_trip, ChainSpec, Direction, ExpSmooth, Series, Sign,
};
use crate::params::{PotentialParams, Regime};
use crate::scattering::{
    enumerate_poles, phase_shift, phase_shift_curve, phase_shift_derivative, residue, s_matrix, s_matrix_grid_par,
    s_matrix_unchecked, ComplexGrid, GridSpec, PoleClass, PoleRecord,
};
use crate::states::{bound_energies, ode_residual, pole_wavefunctions, Family, WaveFunctionSpec};

type C = Complex<f64>;

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }

    fn failed(name: impl Into<String>, why: &str) -> Self {
        Self {
            name: format!("{} ({why})", name.into()),
            max_residual: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub a: f64,
    pub regime: Regime,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn finish(name: &str, r: Result<f64>, tol: f64) -> Check {
    match r {
        Ok(v) => Check::new(name, v, tol),
        Err(e) => Check::failed(name, &e.to_string()),
    }
}

/// `(1/2πi) ∮ f dk` on a circle by the trapezoidal rule.
pub fn contour_integral<F: Fn(C) -> C>(f: F, centre: C, radius: f64, nodes: usize) -> C {
    let mut acc = C::new(0.0, 0.0);
    for j in 0..nodes {
        let t = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let dk = C::from_polar(radius, t);
        acc += f(centre + dk) * dk;
    }
    acc / nodes as f64
}

/// Relative distance between the analytic residue and a 512-node contour integral.
pub fn residue_defect(params: &PotentialParams<f64>, pole: &PoleRecord<f64>) -> Result<f64> {
    let exact = residue(params, pole)?;
    let quad = contour_integral(|k| s_matrix_unchecked(params, k), pole.k0(), 1e-3, 512);
    Ok((exact - quad).norm() / exact.norm())
}

/// Winding number of `S` around a small circle, `(1/2πi) ∮ S'/S dk`.
pub fn winding_number(params: &PotentialParams<f64>, centre: C, radius: f64) -> f64 {
    let n = 512;
    let mut total = 0.0;
    let mut prev = s_matrix_unchecked(params, centre + radius).arg();
    for j in 1..=n {
        let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let a = s_matrix_unchecked(params, centre + C::from_polar(radius, t)).arg();
        let mut d = a - prev;
        d -= (d / (2.0 * std::f64::consts::PI)).round() * 2.0 * std::f64::consts::PI;
        total += d;
        prev = a;
    }
    // Poles wind negatively.
    -total / (2.0 * std::f64::consts::PI)
}

/// Interior nodes of the grid that are local maxima above `threshold`, as `(re, im)`.
pub fn grid_local_maxima(grid: &ComplexGrid<f64>, threshold: f64) -> Vec<(f64, f64)> {
    let v = &grid.values;
    let mut out = Vec::new();
    for r in 1..v.len().saturating_sub(1) {
        for c in 1..v[r].len().saturating_sub(1) {
            let x = v[r][c];
            if x < threshold {
                continue;
            }
            let mut is_max = true;
            for dr in [-1i32, 0, 1] {
                for dc in [-1i32, 0, 1] {
                    if (dr, dc) != (0, 0) && v[(r as i32 + dr) as usize][(c as i32 + dc) as usize] > x {
                        is_max = false;
                    }
                }
            }
            if is_max {
                out.push((grid.re_nodes[c], grid.im_nodes[r]));
            }
        }
    }
    out
}

/// Largest distance (in grid cells) from a strong local maximum of `|S|` to the
/// nearest enumerated pole, and the number of poles with no such maximum within one cell.
pub fn grid_pole_agreement(params: &PotentialParams<f64>, grid: &ComplexGrid<f64>) -> Result<(f64, usize)> {
    let step = grid.spec.step;
    let poles: Vec<f64> = enumerate_poles(params, grid.spec.im_min, grid.spec.im_max)?
        .into_iter()
        .filter(|p| p.net_order >= 1)
        .map(|p| p.im_k)
        .collect();
    let maxima = grid_local_maxima(grid, grid.spec.cap / 10.0);
    let mut worst = 0.0f64;
    for &(re, im) in &maxima {
        let d = poles
            .iter()
            .map(|&p| re.abs().max((im - p).abs()))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(d / step);
    }
    let interior = |p: f64| p > grid.spec.im_min + step && p < grid.spec.im_max - step;
    let missing = poles
        .iter()
        .filter(|&&p| interior(p))
        .filter(|&&p| !maxima.iter().any(|&(re, im)| re.abs() <= step && (im - p).abs() <= step))
        .count();
    Ok((worst, missing))
}

fn samples(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn ratio_defect(a: &WaveFunctionSpec<f64>, b: &WaveFunctionSpec<f64>, xs: &[f64]) -> Result<f64> {
    let mut r = Vec::with_capacity(xs.len());
    for &x in xs {
        r.push(a.evaluate(x)? / b.evaluate(x)?);
    }
    let mean = r.iter().sum::<C>() / r.len() as f64;
    Ok(r.iter().map(|q| (q / mean - 1.0).norm()).fold(0.0, f64::max))
}

/// Every oracle in the library at one potential. `seed` drives the random samples.
pub fn verify_all(params: &PotentialParams<f64>, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    scattering_checks(params, &mut rng, &mut checks);
    state_checks(params, &mut checks);
    ladder_checks(params, &mut rng, &mut checks);
    Report {
        a: params.a(),
        regime: params.regime(),
        checks,
    }
}

/// Only the ladder-operator checks of [`verify_all`].
pub fn verify_ladder(params: &PotentialParams<f64>, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    ladder_checks(params, &mut rng, &mut checks);
    Report {
        a: params.a(),
        regime: params.regime(),
        checks,
    }
}

fn scattering_checks(p: &PotentialParams<f64>, rng: &mut ChaCha8Rng, out: &mut Vec<Check>) {
    let ks: Vec<f64> = (0..200).map(|_| rng.gen_range(1e-6..=20.0)).collect();
    out.push(finish(
        "unitarity |S(k)| = 1, 200 real k in (0, 20]",
        ks.iter().try_fold(0.0f64, |m, &k| Ok(m.max((s_matrix(p, C::new(k, 0.0))?.norm() - 1.0).abs()))),
        1e-10,
    ));
    out.push(finish(
        "inverse symmetry S(k) S(-k) = 1",
        ks.iter().try_fold(0.0f64, |m, &k| {
            Ok(m.max((s_matrix(p, C::new(k, 0.0))? * s_matrix(p, C::new(-k, 0.0))? - 1.0).norm()))
        }),
        1e-10,
    ));
    let zs: Vec<C> = (0..200)
        .map(|_| {
            let re = rng.gen_range(0.05..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            C::new(re, rng.gen_range(-3.0..3.0))
        })
        .collect();
    out.push(finish(
        "Schwarz reflection S(-conj k) = conj S(k)",
        zs.iter().try_fold(0.0f64, |m, &k| {
            let a = s_matrix(p, -k.conj())?;
            let b = s_matrix(p, k)?.conj();
            Ok(m.max((a - b).norm() / b.norm().max(1.0)))
        }),
        1e-10,
    ));

    let poles = match enumerate_poles(p, -3.0, 3.0) {
        Ok(v) => v,
        Err(e) => {
            out.push(Check::failed("pole enumeration", &e.to_string()));
            return;
        }
    };
    let bound: Vec<f64> = poles.iter().filter(|r| r.class == PoleClass::Bound).map(|r| r.energy).collect();
    let expected = bound_energies(p);
    let top: Vec<f64> = expected.iter().copied().filter(|e| -e <= 9.0).collect();
    let energy_dev = if bound.len() == top.len() {
        bound.iter().zip(&top).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    out.push(Check::new("bound poles carry E = -(A - n)^2", energy_dev, 1e-12));
    out.push(Check::new(
        "every pole is simple (net order 1)",
        poles
            .iter()
            .filter(|r| r.class != PoleClass::SemiBound)
            .map(|r| (r.net_order - 1).abs() as f64)
            .fold(0.0, f64::max),
        0.0,
    ));
    out.push(finish(
        "residues vs 512-node contour quadrature",
        poles
            .iter()
            .filter(|r| r.net_order == 1)
            .try_fold(0.0f64, |m, r| Ok(m.max(residue_defect(p, r)?))),
        1e-8,
    ));
    out.push(Check::new(
        "winding number 1 around each pole",
        poles
            .iter()
            .filter(|r| r.net_order == 1)
            .map(|r| (winding_number(p, r.k0(), 1e-3) - 1.0).abs())
            .fold(0.0, f64::max),
        1e-6,
    ));
    let coincident: Vec<&PoleRecord<f64>> = poles.iter().filter(|r| r.contributing_factors.len() > 1).collect();
    if !coincident.is_empty() {
        out.push(finish(
            "coincident-pole cancellation: residue vs contour",
            coincident
                .iter()
                .filter(|r| r.net_order == 1)
                .try_fold(0.0f64, |m, r| Ok(m.max(residue_defect(p, r)?))),
            1e-8,
        ));
    }
    if let Regime::Integer(_) = p.regime() {
        out.push(Check::new(
            "semi-bound point k = 0 is regular, S(0) = +1",
            (s_matrix_unchecked(p, C::new(0.0, 0.0)) - 1.0).norm(),
            1e-12,
        ));
    }

    match GridSpec::new((-1.0, 1.0), (-3.0, 3.0), 0.05) {
        Ok(spec) => {
            let grid = s_matrix_grid_par(p, &spec);
            match grid_pole_agreement(p, &grid) {
                Ok((dist, missing)) => {
                    out.push(Check::new("|S| grid maxima lie on enumerated poles (cells)", dist, 1.0));
                    out.push(Check::new("enumerated poles without a grid maximum", missing as f64, 0.0));
                }
                Err(e) => out.push(Check::failed("grid maxima", &e.to_string())),
            }
            let axis_row = grid.im_nodes.iter().position(|v| v.abs() < 1e-12);
            let dev = axis_row
                .map(|r| grid.values[r].iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max))
                .unwrap_or(f64::INFINITY);
            out.push(Check::new("grid row Im k = 0 is 1", dev, 1e-10));
        }
        Err(e) => out.push(Check::failed("grid", &e.to_string())),
    }

    let ks: Vec<f64> = (1..=5000).map(|i| i as f64 * 1e-3).collect();
    out.push(finish(
        "phase shift continuity on (0, 5], step 1e-3 (max jump)",
        phase_shift_curve(p, &ks).map(|d| d.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)),
        std::f64::consts::FRAC_PI_2,
    ));
    out.push(finish(
        "|Delta(k)| bounded on (0, 5]",
        ks.iter()
            .step_by(10)
            .try_fold(0.0f64, |m, &k| Ok(m.max(phase_shift_derivative(p, k)?.abs()))),
        1e3,
    ));
    out.push(finish(
        "Delta vs central difference of delta",
        [0.3, 0.5, 1.0, 2.0, 4.0].iter().try_fold(0.0f64, |m, &k| {
            let h = 1e-4;
            let fd = (phase_shift(p, k + h)? - phase_shift(p, k - h)?) / (2.0 * h);
            let an = phase_shift_derivative(p, k)?;
            Ok(m.max((fd - an).abs() / an.abs().max(1.0)))
        }),
        1e-6,
    ));
}

fn state_checks(p: &PotentialParams<f64>, out: &mut Vec<Check>) {
    let xs = samples(-2.0, 8.0, 41);
    let mut worst: Result<f64> = Ok(0.0);
    if let Ok(poles) = enumerate_poles(p, -3.0, 3.0) {
        let mut specs: Vec<WaveFunctionSpec<f64>> = poles.iter().flat_map(|r| pole_wavefunctions(p, r)).collect();
        if let Ok(semi) = WaveFunctionSpec::new(Family::SemiBound, *p) {
            specs.push(semi);
        }
        worst = specs
            .iter()
            .try_fold(0.0f64, |m, s| Ok(m.max(ode_residual(s, &xs, 1e-3)?)));
    }
    out.push(finish("ODE residual of every pole wavefunction", worst, 1e-6));

    let xs = samples(-1.0, 4.0, 20);
    match p.regime() {
        Regime::Integer(n) => {
            let r = (0..=n).try_fold(0.0f64, |m, j| {
                let lhs = if j == 0 {
                    WaveFunctionSpec::new(Family::SemiBound, *p)?
                } else {
                    WaveFunctionSpec::new(Family::Bound(n - j), *p)?
                };
                let rhs = WaveFunctionSpec::new(Family::TildeBoundInt(n + j), *p)?;
                Ok(m.max(ratio_defect(&lhs, &rhs, &xs)?))
            });
            out.push(finish("psi_{N-n} proportional to tilde psi_{N+n}", r, 1e-8));
        }
        Regime::HalfInteger(n) => {
            let r = (n..2 * n).try_fold(0.0f64, |m, j| {
                let lhs = WaveFunctionSpec::new(Family::Bound(2 * n - 1 - j), *p)?;
                let rhs = WaveFunctionSpec::new(Family::TildeBoundHalf(j), *p)?;
                Ok(m.max(ratio_defect(&lhs, &rhs, &xs)?))
            });
            out.push(finish("psi_{2N-1-n} proportional to tilde psi_n", r, 1e-8));
        }
        Regime::Generic => {}
    }
    let r = (0..=2).try_fold(0.0f64, |m, j| {
        let lhs = WaveFunctionSpec::new(Family::RedundantEvenChain(j), *p)?;
        let rhs = WaveFunctionSpec::new(Family::TildeRedundantEven(-j - 1), *p)?;
        Ok(m.max(ratio_defect(&lhs, &rhs, &xs)?))
    });
    out.push(finish("psi_m proportional to tilde psi_{-m-1} (even redundant)", r, 1e-8));
}

fn ladder_checks(p: &PotentialParams<f64>, rng: &mut ChaCha8Rng, out: &mut Vec<Check>) {
    let xs = samples(-2.0, 2.0, 11);
    let mut fact: Result<f64> = Ok(0.0);
    let mut inter: Result<f64> = Ok(0.0);
    for _ in 0..20 {
        let f = ExpSmooth::random(rng);
        let eps = rng.gen_range(0.6..3.0);
        fact = fact.and_then(|m| Ok(m.max(factorization_residual(p, eps, &f, &xs)?)));
        inter = inter.and_then(|m| Ok(m.max(intertwining_residual(p, eps, &f, &xs)?)));
    }
    out.push(finish("factorization on 20 random smooth functions", fact, 1e-7));
    out.push(finish("intertwining on 20 random smooth functions", inter, 1e-7));

    let s = default_x_samples();
    let generic = p.regime() == Regime::Generic;
    for series in [Series::BoundAntibound, Series::RedundantEven, Series::RedundantOdd] {
        let chain = ChainSpec::new(series, *p);
        let mut worst = 0.0f64;
        let mut unexpected = None;
        let mut steps = 0;
        let mut endpoints = 0;
        for from in -5..=5 {
            for dir in [Direction::Up, Direction::Down] {
                match chain_step(&chain, from, dir, &s) {
                    Ok(r) => {
                        worst = worst.max(r.defect);
                        steps += 1;
                    }
                    Err(crate::Error::AnnihilatedState { .. }) => endpoints += 1,
                    Err(crate::Error::IndexOutOfChain { .. }) => {}
                    Err(e) => unexpected = Some(e),
                }
            }
            if let Ok(r) = round_trip(&chain, from, &s) {
                worst = worst.max(r.defect);
            }
        }
        let name = format!("{series:?} chain steps ({steps} steps, constancy defect)");
        match unexpected {
            Some(e) => out.push(Check::failed(name, &e.to_string())),
            None => out.push(Check::new(name, worst, 1e-7)),
        }
        if series != Series::BoundAntibound && generic {
            out.push(Check::new(format!("{series:?} chain has no endpoint on [-5, 5]"), endpoints as f64, 0.0));
        }
    }

    let ground = WaveFunctionSpec::new(Family::Bound(0), *p)
        .and_then(|psi| annihilation_residual(&make_operator(p, p.a(), Sign::Minus)?, &psi, &s));
    out.push(finish("A-_0 annihilates the ground state", ground, 1e-9));
    let top = match p.regime() {
        Regime::Integer(n) => Some((Family::TildeBoundInt(2 * n), 2 * n)),
        Regime::HalfInteger(n) => Some((Family::TildeBoundHalf(2 * n - 1), 2 * n - 1)),
        Regime::Generic => None,
    };
    if let Some((family, n)) = top {
        let r = WaveFunctionSpec::new(family, *p).and_then(|psi| {
            let op = make_operator(p, p.a() - (n + 1) as f64, Sign::Plus)?;
            annihilation_residual(&op, &psi, &s)
        });
        out.push(finish(&format!("A+_{} annihilates the top state psi_{n}", n + 1), r, 1e-9));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes_at_documented_strengths() {
        for a in [2.3, 2.0, 2.5] {
            let r = verify_all(&PotentialParams::new(a).unwrap(), 1);
            for c in &r.checks {
                assert!(c.pass, "A={a}: {} residual {} > {}", c.name, c.max_residual, c.tolerance);
            }
        }
    }

    #[test]
    fn contour_integral_of_simple_pole() {
        let v = contour_integral(|k| C::new(3.0, 1.0) / (k - C::new(0.0, 0.5)), C::new(0.0, 0.5), 0.1, 64);
        assert!((v - C::new(3.0, 1.0)).norm() < 1e-14);
    }
}
