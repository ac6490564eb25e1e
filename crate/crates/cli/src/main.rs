//! `fictio`: infinitesimal arithmetic, derivatives and magnitude axioms
//! from the command line.

mod render;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fictio_core::diff::{differentiate, higher_derivative, tangent_line};
use fictio_core::expr::{eval_lc, parse, Expr};
use fictio_core::lc::{parse_rational, rational_to_f64, Coefficient, LcNumber, Mode, DEFAULT_WINDOW};
use fictio_core::magnitudes::{check_named, MagnitudeError, DEFAULT_BOUND};
use fictio_core::oracle::{compare_tracks, symbolic_derivative, verify_certificate, Verdict};
use fictio_core::tlh::tlh_trace;
use serde_json::json;

use render::Output;

#[derive(Parser, Debug)]
#[command(name = "fictio", version, about = "Exact infinitesimal calculus on truncated Laurent series in eps")]
struct Cli {
    /// Coefficient ring; defaults to exact, or to the mode of an LC literal.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Relative truncation window of LC values.
    #[arg(long, global = true, env = "FICTIO_WINDOW", default_value_t = DEFAULT_WINDOW)]
    window: u32,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled models and certificate checks.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Largest multiplier tried in witness searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    bound: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derivative at a point via f(x0+eps) - f(x0).
    Deriv {
        expr: String,
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
    /// Tangent line at a point.
    Tangent {
        expr: String,
        #[arg(long)]
        at: String,
    },
    /// Keep the leading term of an LC value and show what is discarded.
    Tlh {
        /// LC literal, or an expression when --at is given.
        input: String,
        /// LC literal at which to evaluate the expression.
        #[arg(long)]
        at: Option<String>,
        /// Keep every term up to the order of this LC literal instead.
        #[arg(long)]
        scale: Option<String>,
    },
    /// Check axioms E1-E5 on a magnitude model.
    Axioms {
        /// rationals, lc-positive or horn
        model: String,
    },
    /// Infinitesimal derivative against the symbolic and limit oracles.
    Compare {
        expr: String,
        #[arg(long)]
        at: String,
    },
    /// Evaluate an expression at an LC literal.
    Eval {
        expr: String,
        #[arg(long)]
        at: String,
        /// Include the syntax tree.
        #[arg(long)]
        emit_ast: bool,
    },
}

/// Why a command did not succeed; each maps to one exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    /// With the partial report, when there is one.
    Eval(String, Option<Output>),
    Mismatch(Output),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Eval(..) => 3,
            Failure::Mismatch(_) => 4,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn eval_failure(e: impl std::fmt::Display) -> Failure {
    Failure::Eval(e.to_string(), None)
}

struct Ctx {
    mode: Option<Mode>,
    window: u32,
    seed: u64,
    bound: u64,
}

impl Ctx {
    fn point(&self, src: &str) -> Result<Coefficient, Failure> {
        match self.mode.unwrap_or(Mode::Exact) {
            Mode::Exact => parse_rational(src)
                .map(Coefficient::Exact)
                .map_err(|e| usage(format!("point {src:?}: {e} (floats need --mode float)"))),
            Mode::Float => match src.trim().parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Coefficient::Float(x)),
                _ => parse_rational(src)
                    .map(|q| Coefficient::Float(rational_to_f64(&q)))
                    .map_err(|e| usage(format!("point {src:?}: {e}"))),
            },
        }
    }

    fn literal(&self, src: &str) -> Result<LcNumber, Failure> {
        let x = LcNumber::parse(src, self.window).map_err(|e| usage(format!("LC literal {src:?}: {e}")))?;
        match self.mode {
            Some(m) => x.to_mode(m).map_err(usage),
            None => Ok(x),
        }
    }
}

fn expression(src: &str) -> Result<Expr, Failure> {
    parse(src).map_err(|e| usage(format!("expression {src:?}: {e}")))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    if cli.window == 0 {
        return Err(usage("window must be at least 1"));
    }
    let ctx = Ctx { mode: cli.mode.map(Mode::from), window: cli.window, seed: cli.seed, bound: cli.bound };
    match cli.command {
        Command::Deriv { expr, at, order } => {
            let e = expression(&expr)?;
            let x0 = ctx.point(&at)?;
            if order == 0 {
                return Err(usage("--order must be at least 1"));
            }
            if order == 1 {
                let report = differentiate(&e, &x0, ctx.window).map_err(eval_failure)?;
                Ok(render::deriv(&report))
            } else {
                let d = higher_derivative(&e, &x0, order, ctx.window).map_err(eval_failure)?;
                Ok(render::higher(&e, &x0, order, &d))
            }
        }
        Command::Tangent { expr, at } => {
            let e = expression(&expr)?;
            let x0 = ctx.point(&at)?;
            let t = tangent_line(&e, &x0, ctx.window).map_err(eval_failure)?;
            Ok(render::tangent(&e, &t))
        }
        Command::Tlh { input, at, scale } => {
            let value = match at {
                Some(at) => {
                    let e = expression(&input)?;
                    eval_lc(&e, &ctx.literal(&at)?).map_err(eval_failure)?
                }
                None => ctx.literal(&input)?,
            };
            let scale = scale.map(|s| ctx.literal(&s)).transpose()?;
            let trace = tlh_trace(&value, scale.as_ref()).map_err(eval_failure)?;
            Ok(render::tlh(&trace))
        }
        Command::Axioms { model } => {
            let reports = check_named(&model, ctx.seed, ctx.bound).map_err(|e| match e {
                MagnitudeError::UnknownModel(_) => usage(e),
                other => eval_failure(other),
            })?;
            Ok(render::axioms(&model, ctx.seed, ctx.bound, &reports))
        }
        Command::Compare { expr, at } => {
            let e = expression(&expr)?;
            let x0 = ctx.point(&at)?;
            let cmp = compare_tracks(&e, &x0, ctx.window);
            let reverified = match &cmp.a_limit {
                Some(Ok(cert)) => Some(verify_certificate(&e, &x0, cert, 10, ctx.seed).unwrap_or(false)),
                _ => None,
            };
            let out = render::compare(&e, &x0, &symbolic_derivative(&e), &cmp, reverified);
            match cmp.verdict {
                Some(Verdict::Mismatch) => Err(Failure::Mismatch(out)),
                Some(_) => Ok(out),
                None => Err(Failure::Eval(cmp.first_error().unwrap_or("no verdict").to_string(), Some(out))),
            }
        }
        Command::Eval { expr, at, emit_ast } => {
            let e = expression(&expr)?;
            let x = ctx.literal(&at)?;
            let value = eval_lc(&e, &x).map_err(eval_failure)?;
            Ok(render::eval(&e, &x, &value, emit_ast))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            out.print(json);
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let code = failure.code();
            let (kind, msg) = match failure {
                Failure::Usage(msg) => ("usage", msg),
                Failure::Eval(msg, out) => {
                    if let Some(out) = out {
                        out.print(json);
                    }
                    ("evaluation", msg)
                }
                Failure::Mismatch(out) => {
                    out.print(json);
                    ("mismatch", "tracks disagree".to_string())
                }
            };
            if json {
                eprintln!("{}", json!({ "error": kind, "message": msg }));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
