mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mahlerkit::exactalg::{factor_negligible, Rational, UniPoly};
use mahlerkit::lrs::{berlekamp_massey, classify_mult_ev_periodic, ChiClass, EventuallyPeriodic};
use mahlerkit::mahler::{default_s_max, preceq, reduce_rational_equation, MahlerEquation, Preceq};
use mahlerkit::multdecomp::{
    decompose, gq_series, unit_root_avg_check, DecompError, DecomposeOptions,
    MultiplicativeDecomposition,
};
use mahlerkit::ore::{minimal_inhomogeneous_operator, OperatorBounds, OreError};
use mahlerkit::regular::{kernel_guess, RegularError};
use mahlerkit::report::{run_report, ReportConfig, DEFAULT_SEED, MIN_ORDER};
use mahlerkit::sequence::{spec_to_series, SequenceSpec};
use serde::Serialize;
use serde_json::Value;

use input::{parse_json, parse_poly, parse_sequence, read_source};

const DEFAULT_ORDER: usize = 512;

/// Exact computations with Mahler equations, regular sequences and
/// multiplicative decompositions.
///
/// Exit status: 0 when a result or verdict was computed (including
/// "unknown within bounds"), 1 for a verified negative verdict, 2 for
/// usage and input errors.
#[derive(Parser, Debug)]
#[command(name = "mahlerkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base k.
    #[arg(long, global = true, default_value_t = 2)]
    k: u64,
    /// Truncation order N (at least 16).
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Primes q, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    q: Vec<u64>,
    #[arg(long = "max-dim", global = true, default_value_t = 10)]
    max_dim: usize,
    /// Largest M_k-degree for operator search.
    #[arg(long, global = true, default_value_t = 2)]
    dm: usize,
    /// Largest coefficient degree for operator search.
    #[arg(long, global = true, default_value_t = 4)]
    dx: usize,
    /// Largest right-hand-side degree for operator search.
    #[arg(long, global = true, default_value_t = 4)]
    dr: usize,
    /// Largest power n^r tried when decomposing.
    #[arg(long, global = true, default_value_t = 8)]
    rmax: u32,
    /// Largest exponent s tried by preceq (default 1 + ceil(log_k(1 + deg P))).
    #[arg(long, global = true)]
    smax: Option<u32>,
    /// Sequence or object input: inline JSON, a path, or `-` for stdin.
    #[arg(long, global = true)]
    input: Option<String>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Polynomial as a JSON coefficient list, lowest degree first; repeatable.
    #[arg(long, global = true)]
    poly: Vec<String>,
    /// Equation JSON (inline, path or `-`).
    #[arg(long, global = true)]
    equation: Option<String>,
    /// Last index to synthesize, or the range for classify-chi.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Cartier modulus.
    #[arg(long, global = true)]
    l: Option<usize>,
    /// Cartier residue.
    #[arg(long, global = true)]
    r: Option<usize>,
    /// Prime used by decompose when k is not a prime power.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Exponent n of the base k^n for reduce-rational.
    #[arg(long, global = true, default_value_t = 1)]
    power: u32,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Omit timings from the report so that output is byte-identical across runs.
    #[arg(long = "no-timings", global = true)]
    no_timings: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Canonical (p, g, r, chi) decomposition of a multiplicative sequence.
    Decompose,
    /// Values f(0..=n) of a decomposition or any sequence description.
    Synthesize,
    /// Check a Mahler equation against a sequence.
    VerifyEq,
    /// Cyclotomic factorization and negligibility of --poly.
    Negligible,
    /// Bounded test of P <= Q for --poly P --poly Q.
    Preceq,
    /// Reduced equation for P/Q (--poly P --poly Q) at base k^power.
    ReduceRational,
    /// Subsequence f(l n + r).
    Cartier,
    /// Guess a base-k linear representation.
    GuessLinrep,
    /// Shortest linear recurrence (Berlekamp-Massey).
    GuessLrs,
    /// Minimal inhomogeneous Mahler operator.
    MinOperator,
    /// Twisted sums G_q and their support.
    Gq,
    /// Unit-root averaging identity.
    AvgCheck,
    /// Periodic / eventually-zero classification of a multiplicative chi.
    ClassifyChi,
    /// Run the acceptance corpus.
    Report,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Debug)]
pub struct CliError {
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
        }
    }
}

fn err(e: impl std::fmt::Display) -> CliError {
    CliError::input(e.to_string())
}

/// A computed result and whether it is a negative verdict.
struct Output {
    value: Value,
    text: Option<String>,
    failed: bool,
}

impl Output {
    fn of(x: &impl Serialize, failed: bool) -> Self {
        Output {
            value: serde_json::to_value(x).expect("serializable"),
            text: None,
            failed,
        }
    }
}

impl Cli {
    fn order(&self, default: usize) -> Result<usize, CliError> {
        match self.order {
            Some(n) if n < MIN_ORDER => Err(CliError::input(format!(
                "--order must be at least {MIN_ORDER}, got {n}"
            ))),
            Some(n) => Ok(n),
            None => Ok(default),
        }
    }

    fn input_text(&self) -> Result<String, CliError> {
        let src = self
            .input
            .as_deref()
            .ok_or_else(|| CliError::input("--input is required"))?;
        read_source(src)
    }

    fn sequence(&self) -> Result<SequenceSpec, CliError> {
        parse_sequence(&self.input_text()?)
    }

    /// Truncation order for `spec`; explicit values default to everything supplied.
    fn order_for(&self, spec: &SequenceSpec, default: usize) -> Result<usize, CliError> {
        match (spec, self.order) {
            (SequenceSpec::Values { values, offset }, None) => {
                Ok((values.len() + offset).saturating_sub(1))
            }
            _ => self.order(default),
        }
    }

    /// `f(0..=N)`.
    fn values(&self, default: usize) -> Result<Vec<Rational>, CliError> {
        let spec = self.sequence()?;
        spec.values(self.order_for(&spec, default)?).map_err(err)
    }

    fn polys(&self, count: usize) -> Result<Vec<UniPoly<Rational>>, CliError> {
        if self.poly.len() != count {
            return Err(CliError::input(format!(
                "expected {count} --poly argument(s), got {}",
                self.poly.len()
            )));
        }
        self.poly.iter().map(|p| parse_poly(p)).collect()
    }

    fn qs(&self) -> Result<Vec<u64>, CliError> {
        if self.q.is_empty() {
            return Err(CliError::input("--q is required"));
        }
        Ok(self.q.clone())
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Decompose => {
            let values = cli.values(DEFAULT_ORDER)?;
            let opts = DecomposeOptions {
                r_max: cli.rmax,
                p_override: cli.p,
            };
            match decompose(&values, cli.k, opts) {
                Ok(d) => Ok(Output::of(&d, false)),
                Err(
                    e @ (DecompError::NotMultiplicative { .. }
                    | DecompError::VerificationFailed { .. }),
                ) => Ok(Output::of(
                    &serde_json::json!({"status": "fails", "reason": e.to_string()}),
                    true,
                )),
                Err(e) => Err(err(e)),
            }
        }
        Command::Synthesize => {
            let n = cli.n.ok_or_else(|| CliError::input("--n is required"))?;
            let text = cli.input_text()?;
            let v: Value = parse_json(&text, "input")?;
            let spec = if v.get("type").is_none() && v.get("chi").is_some() {
                let dec: MultiplicativeDecomposition = serde_json::from_value(v).map_err(err)?;
                SequenceSpec::Decomposition { decomposition: dec }
            } else {
                parse_sequence(&text)?
            };
            let values = spec.values(n).map_err(err)?;
            Ok(Output::of(
                &SequenceSpec::Values { values, offset: 0 },
                false,
            ))
        }
        Command::VerifyEq => {
            let src = cli
                .equation
                .as_deref()
                .ok_or_else(|| CliError::input("--equation is required"))?;
            let eq: MahlerEquation<Rational> = parse_json(&read_source(src)?, "equation")?;
            let eq = MahlerEquation {
                provenance: eq.provenance,
                ..MahlerEquation::new(eq.k, eq.coeffs, eq.inhom).map_err(err)?
            };
            let spec = cli.sequence()?;
            let n = cli.order_for(&spec, DEFAULT_ORDER)?;
            let series = spec_to_series(&spec, n).map_err(err)?;
            let v = eq.verify(&series).map_err(err)?;
            Ok(Output::of(&v, !v.is_verified()))
        }
        Command::Negligible => {
            let [p] = <[_; 1]>::try_from(cli.polys(1)?).expect("one poly");
            let cert = factor_negligible(&p, cli.k).map_err(err)?;
            let value = serde_json::json!({"negligible": cert.negligible, "orders": cert.cyclotomic_factors});
            Ok(Output {
                value,
                text: None,
                failed: false,
            })
        }
        Command::Preceq => {
            let [p, q] = <[_; 2]>::try_from(cli.polys(2)?).expect("two polys");
            let s_max = cli.smax.unwrap_or_else(|| default_s_max(&p, cli.k));
            let v = preceq(&p, &q, cli.k, s_max).map_err(err)?;
            let failed = matches!(v, Preceq::FailsWithinBound { .. });
            Ok(Output::of(&v, failed))
        }
        Command::ReduceRational => {
            let [p, q] = <[_; 2]>::try_from(cli.polys(2)?).expect("two polys");
            let eq = reduce_rational_equation(&p, &q, cli.k, cli.power).map_err(err)?;
            Ok(Output::of(&eq, false))
        }
        Command::Cartier => {
            let l = cli.l.ok_or_else(|| CliError::input("--l is required"))?;
            let r = cli.r.ok_or_else(|| CliError::input("--r is required"))?;
            let spec = cli.sequence()?;
            let n = cli.order_for(&spec, DEFAULT_ORDER)?;
            let s = spec_to_series(&spec, n)
                .map_err(err)?
                .cartier(l, r)
                .map_err(err)?;
            Ok(Output::of(
                &SequenceSpec::Values {
                    values: s.coeffs().to_vec(),
                    offset: 0,
                },
                false,
            ))
        }
        Command::GuessLinrep => {
            let values = cli.values(DEFAULT_ORDER)?;
            match kernel_guess(&values, cli.k, cli.max_dim) {
                Ok(g) => Ok(Output::of(&g, false)),
                Err(e @ RegularError::NoRepWithinBounds { .. }) => Ok(Output::of(
                    &serde_json::json!({"status": "no-representation", "reason": e.to_string()}),
                    true,
                )),
                Err(e) => Err(err(e)),
            }
        }
        Command::GuessLrs => {
            let values = cli.values(DEFAULT_ORDER)?;
            if values.is_empty() {
                return Err(CliError::input("empty sequence"));
            }
            Ok(Output::of(&berlekamp_massey(&values), false))
        }
        Command::MinOperator => {
            let spec = cli.sequence()?;
            let series = spec_to_series(&spec, cli.order(DEFAULT_ORDER)?).map_err(err)?;
            let bounds = OperatorBounds {
                d_m: cli.dm,
                d_x: cli.dx,
                d_r: cli.dr,
            };
            match minimal_inhomogeneous_operator(&series, cli.k, bounds) {
                Ok(op) => Ok(Output::of(&op, false)),
                Err(e @ OreError::NoCandidate) => Ok(Output::of(
                    &serde_json::json!({"status": "no-operator", "reason": e.to_string()}),
                    true,
                )),
                Err(e) => Err(err(e)),
            }
        }
        Command::Gq => {
            let values = cli.values(200)?;
            let reports = cli
                .qs()?
                .into_iter()
                .map(|q| gq_series(&values, q))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            let failed = reports.iter().any(|r| !r.supported_on_q2);
            Ok(Output::of(&reports, failed))
        }
        Command::AvgCheck => {
            let values = cli.values(300)?;
            let mut out = Vec::new();
            for q in cli.qs()? {
                out.push(serde_json::json!({"q": q, "result": unit_root_avg_check(&values, q).map_err(err)?}));
            }
            let failed = out.iter().any(|v| v["result"]["verdict"] != "holds-to");
            Ok(Output {
                value: Value::Array(out),
                text: None,
                failed,
            })
        }
        Command::ClassifyChi => {
            let chi: EventuallyPeriodic = parse_json(&cli.input_text()?, "chi")?;
            let chi = EventuallyPeriodic::new(chi.pre, chi.per).map_err(err)?;
            let range = cli.n.unwrap_or(1000) as u64;
            match classify_mult_ev_periodic(&chi, range) {
                Ok(c) => {
                    let failed = matches!(c, ChiClass::NotMultiplicative { .. });
                    Ok(Output::of(&c, failed))
                }
                Err(e) => Ok(Output::of(
                    &serde_json::json!({"class": "violation", "reason": e.to_string()}),
                    true,
                )),
            }
        }
        Command::Report => {
            let cfg = ReportConfig {
                order: cli.order.map(|_| cli.order(0)).transpose()?,
                seed: cli.seed,
                timings: !cli.no_timings,
            };
            let report = run_report(&cfg);
            let text = Some(report.to_text());
            Ok(Output {
                text,
                ..Output::of(&report, !report.all_passed)
            })
        }
    }
}

fn render(out: &Output, format: Format) -> String {
    match (format, &out.text) {
        (Format::Text, Some(t)) => t.clone(),
        (Format::Text, None) => serde_json::to_string_pretty(&out.value).expect("json") + "\n",
        (Format::Json, _) => serde_json::to_string(&out.value).expect("json") + "\n",
    }
}

fn emit(text: &str, path: Option<&str>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::input(format!("{p}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(err)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        emit(&render(&out, cli.format), cli.output.as_deref())?;
        Ok(out.failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(2)
        }
    }
}
