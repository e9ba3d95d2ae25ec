mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morse_smatrix::verify::{verify_all, verify_ladder, Report};
use morse_smatrix::{
    enumerate_poles, phase_shift_curve, phase_shift_derivative, residue, s_matrix, s_matrix_grid_par, Complex64,
    Family, GridSpec, PoleClass, PotentialParams, Regime, WaveFunctionSpec,
};
use serde_json::{json, Value};

use output::{emit, Field, Output};

const VERIFY_SEED: u64 = 20240611;

#[derive(Parser)]
#[command(name = "morse-smatrix", version, about = "S-matrix, poles and eigenfunctions of the Morse potential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Potential strength A > 0
    #[arg(long = "A", allow_hyphen_values = true)]
    a: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (written atomically); stdout if omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Poles of S(k) on the imaginary axis, with residues
    Poles {
        #[command(flatten)]
        common: Common,
        /// Window in Im k, as lo:hi
        #[arg(long, default_value = "-3:3", allow_hyphen_values = true)]
        im_range: String,
    },
    /// S(k) at given momenta
    Smatrix {
        #[command(flatten)]
        common: Common,
        /// Complex momentum re[,im]; repeatable
        #[arg(long, allow_hyphen_values = true)]
        k: Vec<String>,
        /// Real momentum range lo:hi, sampled at --step
        #[arg(long, allow_hyphen_values = true)]
        k_range: Option<String>,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Unwrapped phase shift and its derivative
    Phase {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0.01:5")]
        k_range: String,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Samples of an eigenfunction
    Wavefunction {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Family index
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        /// Energy, for psi1/psi2
        #[arg(long, allow_hyphen_values = true)]
        energy: Option<f64>,
        /// Real momentum, for psi1/psi2
        #[arg(long, allow_hyphen_values = true)]
        k: Option<f64>,
        #[arg(long, default_value = "-2:6", allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// |S(k)| on a rectangle of the complex k plane
    Grid {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "-1:1", allow_hyphen_values = true)]
        re: String,
        #[arg(long, default_value = "-3:3", allow_hyphen_values = true)]
        im: String,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Ceiling applied to |S|
        #[arg(long, default_value_t = 1e6)]
        cap: f64,
    },
    /// Ladder-operator identities and chain actions
    LadderVerify {
        #[command(flatten)]
        common: Common,
    },
    /// Every invariant check at the given A
    VerifyAll {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Psi1,
    Psi2,
    Bound,
    Antibound,
    Redundant,
    RedundantEvenInt,
    RedundantOddHalf,
    Semibound,
    TildeBoundInt,
    TildeBoundHalf,
    RedundantEvenChain,
    TildeRedundantEven,
    RedundantOddChain,
    TildeRedundantOdd,
}

/// Usage-level failure; reported on one line with exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Result<T> = std::result::Result<T, UsageError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()))
}

fn parse_range(name: &str, s: &str) -> Result<(f64, f64)> {
    let Some((lo, hi)) = s.split_once(':') else {
        return usage(format!("--{name} expects lo:hi, got '{s}'"));
    };
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| UsageError(format!("--{name}: bad number '{t}'")));
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return usage(format!("--{name} must satisfy lo < hi, got '{s}'"));
    }
    Ok((lo, hi))
}

fn check_step(step: f64) -> Result<()> {
    if step > 0.0 && step.is_finite() {
        Ok(())
    } else {
        usage(format!("--step must be positive, got {step}"))
    }
}

fn samples(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

fn potential(a: f64) -> Result<PotentialParams<f64>> {
    if !(a > 0.0) || !a.is_finite() {
        return usage(format!("--A must be a positive number, got {a}"));
    }
    Ok(PotentialParams::new(a)?)
}

fn regime_label(r: Regime) -> String {
    match r {
        Regime::Generic => "generic".into(),
        Regime::Integer(n) => format!("integer(N={n})"),
        Regime::HalfInteger(n) => format!("half-integer(N={n})"),
    }
}

fn class_label(c: PoleClass) -> &'static str {
    match c {
        PoleClass::Bound => "bound",
        PoleClass::Antibound => "antibound",
        PoleClass::RedundantEven => "redundant-even",
        PoleClass::RedundantOdd => "redundant-odd",
        PoleClass::SemiBound => "semi-bound",
    }
}

fn cmd_poles(p: &PotentialParams<f64>, im_range: &str) -> Result<Output> {
    let (lo, hi) = parse_range("im-range", im_range)?;
    let mut out = Output::table(&[
        "class",
        "series_index",
        "im_k",
        "energy",
        "net_order",
        "residue_re",
        "residue_im",
        "cancellation_note",
    ]);
    out.note("im_range", im_range);
    for pole in enumerate_poles(p, lo, hi)? {
        let (r_re, r_im) = match pole.net_order {
            1 => {
                let r = residue(p, &pole)?;
                (Field::Real(r.re), Field::Real(r.im))
            }
            _ => (Field::Empty, Field::Empty),
        };
        out.rows.push(vec![
            Field::Text(class_label(pole.class).into()),
            Field::Int(pole.series_index),
            Field::Real(pole.im_k),
            Field::Real(pole.energy),
            Field::Int(pole.net_order as i64),
            r_re,
            r_im,
            Field::Text(pole.cancellation_note()),
        ]);
    }
    Ok(out)
}

fn parse_k(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| UsageError(format!("--k: bad number '{t}'")));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => usage(format!("--k expects re or re,im, got '{s}'")),
    }
}

fn cmd_smatrix(p: &PotentialParams<f64>, ks: &[String], k_range: Option<&str>, step: f64) -> Result<Output> {
    let mut points: Vec<Complex64> = ks.iter().map(|s| parse_k(s)).collect::<Result<_>>()?;
    if let Some(r) = k_range {
        check_step(step)?;
        let (lo, hi) = parse_range("k-range", r)?;
        points.extend(samples(lo, hi, step).into_iter().map(|k| Complex64::new(k, 0.0)));
    }
    if points.is_empty() {
        return usage("smatrix needs --k or --k-range");
    }
    let mut out = Output::table(&["k_re", "k_im", "s_re", "s_im", "abs_s", "arg_s"]);
    for k in points {
        let s = s_matrix(p, k)?;
        out.rows.push(
            [k.re, k.im, s.re, s.im, s.norm(), s.arg()]
                .into_iter()
                .map(Field::Real)
                .collect(),
        );
    }
    Ok(out)
}

fn cmd_phase(p: &PotentialParams<f64>, k_range: &str, step: f64) -> Result<Output> {
    check_step(step)?;
    let (lo, hi) = parse_range("k-range", k_range)?;
    if lo <= 0.0 {
        return usage(format!("--k-range must lie in k > 0, got '{k_range}'"));
    }
    let ks = samples(lo, hi, step);
    let delta = phase_shift_curve(p, &ks)?;
    let mut out = Output::table(&["k", "delta", "Delta"]);
    out.note("k_range", k_range);
    out.note("step", step);
    for (&k, &d) in ks.iter().zip(&delta) {
        out.rows.push(vec![Field::Real(k), Field::Real(d), Field::Real(phase_shift_derivative(p, k)?)]);
    }
    Ok(out)
}

fn cmd_grid(p: &PotentialParams<f64>, re: &str, im: &str, step: f64, cap: f64) -> Result<Output> {
    check_step(step)?;
    let spec = GridSpec::new(parse_range("re", re)?, parse_range("im", im)?, step)?.with_cap(cap)?;
    let grid = s_matrix_grid_par(p, &spec);
    let mut header = vec!["im_k\\re_k".to_string()];
    header.extend(grid.re_nodes.iter().map(|r| format!("{r:.16e}")));
    let mut out = Output {
        preamble: Vec::new(),
        header,
        rows: Vec::new(),
        json_data: Some(json!({
            "re_nodes": grid.re_nodes,
            "im_nodes": grid.im_nodes,
            "step": step,
            "cap": cap,
            "abs_s": grid.values,
        })),
    };
    out.note("re", re);
    out.note("im", im);
    out.note("step", step);
    out.note("cap", cap);
    for (im, row) in grid.im_nodes.iter().zip(&grid.values) {
        let mut r = vec![Field::Real(*im)];
        r.extend(row.iter().map(|&v| Field::Real(v)));
        out.rows.push(r);
    }
    Ok(out)
}

fn index<T: TryFrom<i64>>(n: Option<i64>) -> Result<T> {
    let n = n.ok_or_else(|| UsageError("this family needs --n".into()))?;
    T::try_from(n).map_err(|_| UsageError(format!("--n {n} is out of range for this family")))
}

fn wavefunction_spec(
    p: PotentialParams<f64>,
    family: FamilyArg,
    n: Option<i64>,
    energy: Option<f64>,
    k: Option<f64>,
) -> Result<WaveFunctionSpec<f64>> {
    let free = match family {
        FamilyArg::Psi1 => Some(Family::Psi1),
        FamilyArg::Psi2 => Some(Family::Psi2),
        _ => None,
    };
    if let Some(f) = free {
        return match (energy, k) {
            (Some(e), None) => Ok(WaveFunctionSpec::from_energy(f, p, Complex64::new(e, 0.0))?),
            (None, Some(k)) if f == Family::Psi1 => Ok(WaveFunctionSpec::psi1_k(p, k)?),
            (None, Some(k)) => Ok(WaveFunctionSpec::psi2_k(p, k)?),
            _ => usage("psi1/psi2 need exactly one of --energy or --k"),
        };
    }
    if energy.is_some() || k.is_some() {
        return usage("--energy/--k only apply to psi1 and psi2");
    }
    let family = match family {
        FamilyArg::Bound => Family::Bound(index(n)?),
        FamilyArg::Antibound => Family::Antibound(index(n)?),
        FamilyArg::Redundant => Family::RedundantGeneric(index(n)?),
        FamilyArg::RedundantEvenInt => Family::RedundantEvenInt(index(n)?),
        FamilyArg::RedundantOddHalf => Family::RedundantOddHalf(index(n)?),
        FamilyArg::Semibound => Family::SemiBound,
        FamilyArg::TildeBoundInt => Family::TildeBoundInt(index(n)?),
        FamilyArg::TildeBoundHalf => Family::TildeBoundHalf(index(n)?),
        FamilyArg::RedundantEvenChain => Family::RedundantEvenChain(index(n)?),
        FamilyArg::TildeRedundantEven => Family::TildeRedundantEven(index(n)?),
        FamilyArg::RedundantOddChain => Family::RedundantOddChain(index(n)?),
        FamilyArg::TildeRedundantOdd => Family::TildeRedundantOdd(index(n)?),
        FamilyArg::Psi1 | FamilyArg::Psi2 => unreachable!(),
    };
    Ok(WaveFunctionSpec::new(family, p)?)
}

fn cmd_wavefunction(spec: &WaveFunctionSpec<f64>, x: &str, step: f64) -> Result<Output> {
    check_step(step)?;
    let (lo, hi) = parse_range("x", x)?;
    let eps = spec.epsilon();
    let e = spec.energy();
    let mut out = Output::table(&["x", "re_psi", "im_psi", "log_abs_psi"]);
    out.note("family", format!("{:?}", spec.family));
    out.note("epsilon", format!("{:.16e}{:+.16e}i", eps.re, eps.im));
    out.note("energy", format!("{:.16e}{:+.16e}i", e.re, e.im));
    out.note("x", x);
    out.note("step", step);
    let mut rows = Vec::new();
    for xi in samples(lo, hi, step) {
        let s = spec.evaluate_scaled(xi)?;
        let v = s.value();
        rows.push(vec![Field::Real(xi), Field::Real(v.re), Field::Real(v.im), Field::Real(s.ln_abs())]);
    }
    out.rows = rows;
    out.json_data = Some(json!({
        "family": format!("{:?}", spec.family),
        "epsilon": [eps.re, eps.im],
        "energy": [e.re, e.im],
        "samples": out.rows.iter().map(|r| {
            let f = |i: usize| match r[i] { Field::Real(v) => json!(v), _ => Value::Null };
            json!({"x": f(0), "re_psi": f(1), "im_psi": f(2), "log_abs_psi": f(3)})
        }).collect::<Vec<_>>(),
    }));
    Ok(out)
}

fn report_output(report: &Report) -> Output {
    let mut out = Output::table(&["check", "max_residual", "tolerance", "pass"]);
    out.note("seed", VERIFY_SEED);
    out.note("all_pass", report.all_pass());
    for c in &report.checks {
        out.rows.push(vec![
            Field::Text(c.name.clone()),
            Field::Real(c.max_residual),
            Field::Real(c.tolerance),
            Field::Bool(c.pass),
        ]);
    }
    out.json_data = Some(json!({
        "all_pass": report.all_pass(),
        "seed": VERIFY_SEED,
        "checks": report.checks,
    }));
    out
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("MORSE_SMATRIX_THREADS") else {
        return Ok(());
    };
    match v.trim().parse::<usize>() {
        Ok(n) if n >= 1 => {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
            Ok(())
        }
        _ => usage(format!("MORSE_SMATRIX_THREADS must be an integer >= 1, got '{v}'")),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    let (name, common) = match &cli.command {
        Command::Poles { common, .. } => ("poles", common),
        Command::Smatrix { common, .. } => ("smatrix", common),
        Command::Phase { common, .. } => ("phase", common),
        Command::Wavefunction { common, .. } => ("wavefunction", common),
        Command::Grid { common, .. } => ("grid", common),
        Command::LadderVerify { common } => ("ladder-verify", common),
        Command::VerifyAll { common } => ("verify-all", common),
    };
    let p = potential(common.a)?;
    let mut verdict = true;
    let out = match &cli.command {
        Command::Poles { im_range, .. } => cmd_poles(&p, im_range)?,
        Command::Smatrix { k, k_range, step, .. } => cmd_smatrix(&p, k, k_range.as_deref(), *step)?,
        Command::Phase { k_range, step, .. } => cmd_phase(&p, k_range, *step)?,
        Command::Wavefunction {
            family,
            n,
            energy,
            k,
            x,
            step,
            ..
        } => cmd_wavefunction(&wavefunction_spec(p, *family, *n, *energy, *k)?, x, *step)?,
        Command::Grid { re, im, step, cap, .. } => cmd_grid(&p, re, im, *step, *cap)?,
        Command::LadderVerify { .. } | Command::VerifyAll { .. } => {
            let report = if name == "verify-all" {
                verify_all(&p, VERIFY_SEED)
            } else {
                verify_ladder(&p, VERIFY_SEED)
            };
            verdict = report.all_pass();
            report_output(&report)
        }
    };
    let mut out = out;
    let mut preamble = vec![
        ("command".to_string(), name.to_string()),
        ("A".to_string(), format!("{}", p.a())),
        ("regime".to_string(), regime_label(p.regime())),
        ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ];
    preamble.append(&mut out.preamble);
    out.preamble = preamble;
    let bytes = match common.format {
        Format::Csv => out.to_csv()?,
        Format::Json => out.to_json(json!({
            "A": p.a(),
            "regime": regime_label(p.regime()),
            "command": name,
            "version": env!("CARGO_PKG_VERSION"),
        }))?,
    };
    emit(&bytes, common.output.as_deref())?;
    Ok(if verdict { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
