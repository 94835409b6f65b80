//! `shiftmetric` command line tool.
//!
//! Exit codes: 0 success, 1 numeric failure, 2 usage or parse error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::Value;
use shiftmetric::harness::{
    checked_entropy, fmt_float, regimes, sweep_csv, sweep_s2, Perturbation, SweepConfig, CROSS_CHECK_TOL,
};
use shiftmetric::numeric::quadrature::QuadratureConfig;
use shiftmetric::polydyn::{
    critical_heights, is_shift_locus, CriticalHeights, GreenConfig, Polynomial, DEFAULT_SHIFT_EPS,
};
use shiftmetric::rosemetric::{
    entropy_norm_sq, normalize_unit_entropy, CycleComplex, EntropyMethod, LengthFunction, MetricGraph, NormMethod,
    TangentVector, DEFAULT_MAX_PETALS,
};
use shiftmetric::shiftlocus::{rho_upper, RhoConfig, SequenceFamily};

#[derive(Parser, Debug)]
#[command(
    name = "shiftmetric",
    version,
    about = "Entropy metric on rose length functions and the polynomial shift locus"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Tolerance for the main numerical step of the subcommand.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Iteration cap for the main numerical step of the subcommand.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// entropy: closed | spectral | det. norm: rose | cycles | det | hessian.
    #[arg(long, global = true)]
    method: Option<String>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized sweeps; every current subcommand is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Refinement level of distance bounds.
    #[arg(long, global = true)]
    refine: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Critical heights of a monic centered polynomial.
    Heights {
        /// {"degree":D,"coeffs":[[re,im],...]} or a bare array of coefficients
        /// for z^{D-2}, ..., z^0 (reals or [re,im] pairs).
        #[arg(long)]
        coeffs: String,
    },
    /// Topological entropy of a rose length function.
    Entropy {
        /// Comma list or JSON array; entries may be `inf` or `log<x>`.
        #[arg(long, allow_hyphen_values = true)]
        lengths: String,
        /// Shift one method's value by delta before the cross-check (method=delta).
        #[arg(long, hide = true)]
        perturb: Option<String>,
    },
    /// Squared entropy norm of a tangent vector at the unit entropy rescaling.
    Norm {
        #[arg(long, allow_hyphen_values = true)]
        lengths: String,
        /// Raw direction; its normal component is removed first.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Upper bound on the distance between two shift-locus points.
    Distance {
        #[arg(long)]
        heights_a: String,
        #[arg(long)]
        heights_b: String,
        #[arg(long, allow_hyphen_values = true)]
        twist_a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        twist_b: Option<String>,
    },
    /// Length estimates of critical-height level curves in the quadratic family (CSV).
    #[command(name = "sweep-s2")]
    SweepS2 {
        #[arg(long, default_value = "0.05,1,20")]
        levels: String,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Index set, entropy rates and Cauchy probe of a sequence family.
    Regimes {
        /// Family JSON, inline or as a file path.
        #[arg(long)]
        family: String,
        /// Override the family's kGrid.
        #[arg(long)]
        k_grid: Option<String>,
        /// csv | json
        #[arg(long, default_value = "csv")]
        format: String,
    },
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<shiftmetric::Error> for Failure {
    fn from(e: shiftmetric::Error) -> Self {
        match e {
            shiftmetric::Error::Json(_) => Failure::Usage(e.to_string()),
            other => Failure::Numeric(numeric_message(&other)),
        }
    }
}

fn numeric_message(e: &shiftmetric::Error) -> String {
    match e {
        shiftmetric::Error::MethodDisagreement { values } => {
            let mut s = String::from("entropy methods disagree:");
            for (m, v) in values {
                s.push_str(&format!("\n  {m:>8} {}", fmt_float(*v)));
            }
            s
        }
        shiftmetric::Error::ClassificationUncertain { table } => {
            let mut s = String::from("index set classification uncertain; ratio table:");
            for row in table {
                let r: Vec<String> = row.iter().map(|x| format!("{x:.6e}")).collect();
                s.push_str(&format!("\n  {}", r.join(" ")));
            }
            s
        }
        other => other.to_string(),
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn parse_number(tok: &str) -> Result<f64, Failure> {
    let t = tok.trim();
    if t.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    if let Some(rest) = t.strip_prefix("log") {
        return match rest.parse::<f64>() {
            Ok(x) => Ok(x.ln()),
            Err(_) => usage(format!("cannot parse {t:?}")),
        };
    }
    t.parse::<f64>().or_else(|_| usage(format!("cannot parse {t:?}")))
}

fn json_number(v: &Value) -> Result<f64, Failure> {
    match v {
        Value::Number(n) => n.as_f64().map_or_else(|| usage("bad number"), Ok),
        Value::String(s) => parse_number(s),
        _ => usage(format!("expected a number, got {v}")),
    }
}

/// Comma list or JSON array of numbers.
fn parse_list(s: &str) -> Result<Vec<f64>, Failure> {
    let t = s.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).or_else(|e| usage(format!("malformed JSON: {e}")))?;
        let Value::Array(items) = v else {
            return usage("expected a JSON array");
        };
        return items.iter().map(json_number).collect();
    }
    if t.is_empty() {
        return usage("empty list");
    }
    t.split(',').map(parse_number).collect()
}

fn parse_polynomial(s: &str) -> Result<Polynomial, Failure> {
    let v: Value = serde_json::from_str(s.trim()).or_else(|e| usage(format!("malformed JSON: {e}")))?;
    match v {
        Value::Object(_) => Ok(Polynomial::from_json(s)?),
        Value::Array(items) => {
            let coeffs = items
                .iter()
                .map(|c| match c {
                    Value::Array(p) if p.len() == 2 => Ok(Complex64::new(json_number(&p[0])?, json_number(&p[1])?)),
                    other => Ok(Complex64::new(json_number(other)?, 0.0)),
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            Ok(Polynomial::new(coeffs.len() + 1, coeffs)?)
        }
        _ => usage("coefficients must be a JSON object or array"),
    }
}

fn read_inline_or_file(s: &str) -> Result<String, Failure> {
    let t = s.trim();
    if t.starts_with('{') {
        return Ok(t.to_string());
    }
    std::fs::read_to_string(t).or_else(|e| usage(format!("cannot read {t}: {e}")))
}

fn heights_arg(s: &str) -> Result<CriticalHeights, Failure> {
    Ok(CriticalHeights::from_unsorted(parse_list(s)?)?)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let g = &cli.global;
    if let Some(t) = g.tol {
        if !(t > 0.0) {
            return usage("--tol must be positive");
        }
    }
    if g.max_iter == Some(0) {
        return usage("--max-iter must be positive");
    }
    let mut quad = QuadratureConfig::default();
    if let Some(t) = g.tol {
        quad.rel_tol = t;
    }
    match &cli.command {
        Command::Heights { coeffs } => {
            let f = parse_polynomial(coeffs)?;
            let mut cfg = GreenConfig::default();
            if let Some(t) = g.tol {
                cfg.tol = t;
            }
            if let Some(m) = g.max_iter {
                cfg.max_iter = m;
            }
            let h = critical_heights(&f, &cfg)?;
            if !is_shift_locus(&h, DEFAULT_SHIFT_EPS) {
                eprintln!("warning: not shift locus (some critical point does not escape)");
            }
            let vals: Vec<String> = h.as_slice().iter().map(|x| fmt_float(*x)).collect();
            Ok(format!("[{}]\n", vals.join(",")))
        }
        Command::Entropy { lengths, perturb } => {
            let l = parse_list(lengths)?;
            let method = match g.method.as_deref() {
                None => EntropyMethod::Closed,
                Some(m) => {
                    EntropyMethod::parse(m).map_or_else(|| usage(format!("unknown entropy method {m:?}")), Ok)?
                }
            };
            let perturb = match perturb {
                None => None,
                Some(p) => Some(Perturbation::parse(p).map_or_else(|| usage("--perturb expects method=delta"), Ok)?),
            };
            let graph = MetricGraph::rose(l.len())?;
            let lf = LengthFunction::extended(l)?;
            let h = checked_entropy(&graph, &lf, method, g.tol.unwrap_or(CROSS_CHECK_TOL), perturb)?;
            Ok(format!("{}\n", fmt_float(h)))
        }
        Command::Norm { lengths, vector } => {
            let l = parse_list(lengths)?;
            let v = parse_list(vector)?;
            if v.len() != l.len() {
                return usage("vector and lengths differ in length");
            }
            let graph = MetricGraph::rose(l.len())?;
            let lhat = normalize_unit_entropy(&graph, &LengthFunction::extended(l)?)?;
            let t = TangentVector::project(&graph, &lhat, &v)?;
            let complex;
            let method = match g.method.as_deref().unwrap_or("rose") {
                "rose" => NormMethod::Rose,
                "det" | "determinant" => NormMethod::Determinant,
                "hessian" => NormMethod::EntropyHessian,
                "cycles" => {
                    complex = CycleComplex::build(&graph, DEFAULT_MAX_PETALS)?;
                    NormMethod::Cycles(&complex)
                }
                m => return usage(format!("unknown norm method {m:?}")),
            };
            Ok(format!("{}\n", fmt_float(entropy_norm_sq(&graph, &lhat, &t, method)?)))
        }
        Command::Distance {
            heights_a,
            heights_b,
            twist_a,
            twist_b,
        } => {
            let a = heights_arg(heights_a)?;
            let b = heights_arg(heights_b)?;
            let ta = twist_a.as_deref().map(parse_list).transpose()?;
            let tb = twist_b.as_deref().map(parse_list).transpose()?;
            let mut cfg = RhoConfig {
                quadrature: quad,
                ..Default::default()
            };
            if let Some(r) = g.refine {
                cfg.levels = r;
            }
            if let Some(m) = g.max_iter {
                cfg.optimizer.max_evals = m;
            }
            let d = rho_upper(&a, &b, ta.as_deref(), tb.as_deref(), &cfg)?;
            if d.stagnated {
                eprintln!("warning: optimizer stagnated; the bound may not be tight");
            }
            Ok(format!("{} upper-bound\n", fmt_float(d.value)))
        }
        Command::SweepS2 { levels, samples } => {
            let levels = parse_list(levels)?;
            if levels.iter().any(|h| !(*h > 0.0)) {
                return usage("levels must be positive");
            }
            let mut cfg = SweepConfig {
                samples: *samples,
                refine: g.refine.unwrap_or(0),
                ..Default::default()
            };
            if let Some(m) = g.max_iter {
                cfg.green.max_iter = m;
            }
            cfg.distance.quadrature = quad;
            let rows = sweep_s2(&levels, &cfg)?;
            for r in &rows {
                if !r.failed.is_empty() {
                    eprintln!("warning: level {}: {} samples failed to trace", r.h, r.failed.len());
                }
            }
            Ok(sweep_csv(&rows))
        }
        Command::Regimes { family, k_grid, format } => {
            let mut fam = SequenceFamily::from_json(&read_inline_or_file(family)?)?;
            if let Some(k) = k_grid {
                fam.k_grid = parse_list(k)?;
            }
            let report = regimes(&fam, &quad)?;
            match format.as_str() {
                "csv" => Ok(report.to_csv()),
                "json" => Ok(format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report).map_err(|e| Failure::Numeric(e.to_string()))?
                )),
                f => usage(format!("unknown format {f:?}")),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = std::env::var("SHIFTMETRIC_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = run(&cli).and_then(|text| {
        match &cli.global.out {
            Some(p) => std::fs::write(p, &text),
            None => std::io::stdout().write_all(text.as_bytes()),
        }
        .map_err(|e| Failure::Numeric(format!("cannot write output: {e}")))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
