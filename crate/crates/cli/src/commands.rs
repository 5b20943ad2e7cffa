//! Command-line surface. Every command renders a JSON document on stdout
//! (or a short text form with `--text`); diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 computation refused, 2 usage error,
//! 3 verification failures present.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pairker::atto::{
    atto_kernel_closed_form, s_trivial_check, AttoSymbol, TaylorPoint, Triviality,
};
use pairker::factorization::{classify_roots, inner_outer_rational, wiener_hopf};
use pairker::kernel::{paired_kernel_minus, paired_kernel_plus, toeplitz_kernel};
use pairker::oracle::{
    compare_atto, compare_with_oracle, decay_radius, numeric_paired_kernel_minus,
    numeric_paired_kernel_plus, numeric_toeplitz_kernel, Comparison, OracleKernel,
};
use pairker::{
    Ambient, BlaschkeProduct, CircleTol, FiniteRankData, KernelSpace, Polynomial, RationalFunction,
    SymbolPair,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::Settings;
use crate::expr::{parse_blaschke, parse_rational, parse_symbol, ExprError};
use crate::output;
use crate::verify::{run_suite, Suite, MAX_ANGLE, MAX_MODEL_RESIDUAL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUSED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURES: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pairker",
    version,
    about = "Kernels of Toeplitz, paired and asymmetric truncated Toeplitz operators"
)]
pub struct Cli {
    /// Distance from the unit circle below which a root counts as on it.
    #[arg(long, global = true)]
    pub tol_circle: Option<f64>,
    /// Truncation order M of the numeric oracle (modes -M..=M).
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Relative singular value cutoff of numeric null spaces.
    #[arg(long, global = true)]
    pub cutoff: Option<f64>,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit a short human-readable form.
    #[arg(long, global = true)]
    pub text: bool,
    /// TOML file with any of the keys tol_circle, order, cutoff.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root locations, Wiener-Hopf and inner-outer factorizations.
    Factor {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// ker T_g.
    ToeplitzKernel {
        #[arg(allow_hyphen_values = true)]
        symbol: String,
    },
    /// ker of the paired operator aP+ + bP- (the H2+ part by default).
    PairedKernel {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// Report the H2- part instead.
        #[arg(long)]
        minus: bool,
    },
    /// Closed-form kernel of an asymmetric truncated Toeplitz operator.
    AttoKernel(AttoArgs),
    /// Exact kernel against the Fourier-truncation oracle.
    OracleCompare {
        #[command(subcommand)]
        target: OracleTarget,
    },
    /// Randomized property suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleTarget {
    ToeplitzKernel {
        #[arg(allow_hyphen_values = true)]
        symbol: String,
    },
    PairedKernel {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        minus: bool,
    },
    AttoKernel(AttoArgs),
}

#[derive(Debug, Args)]
pub struct AttoArgs {
    /// Finite Blaschke product of the domain model space.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: String,
    /// Finite Blaschke product of the target model space.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// The four factors of the symbol.
    #[arg(
        long,
        num_args = 4,
        allow_hyphen_values = true,
        value_names = ["A1M", "B1M", "A2P", "B2P"],
        required_unless_present = "finite_rank",
        conflicts_with = "finite_rank"
    )]
    pub symbol: Option<Vec<String>>,
    /// TOML description of a finite-rank symbol.
    #[arg(long)]
    pub finite_rank: Option<PathBuf>,
}

/// What a command hands back to the caller.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Refused {
        message: String,
        payload: Option<Value>,
    },
}

impl From<ExprError> for Failure {
    fn from(e: ExprError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<pairker::Error> for Failure {
    fn from(e: pairker::Error) -> Self {
        Failure::Refused {
            message: e.to_string(),
            payload: None,
        }
    }
}

struct Rendered {
    json: Value,
    text: String,
    code: i32,
}

impl Rendered {
    fn ok(json: Value, text: String) -> Self {
        Self {
            json,
            text,
            code: EXIT_OK,
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let settings = match settings(&cli) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    match dispatch(&cli.command, &settings) {
        Ok(r) => Outcome {
            code: r.code,
            stdout: if cli.text { r.text } else { pretty(&r.json) },
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => usage(msg),
        Err(Failure::Refused { message, payload }) => {
            let mut stderr = format!("error: {message}\n");
            let mut doc = json!({ "refused": message });
            if let Some(p) = payload {
                stderr.push_str("hint: the numeric oracle estimate is included in the output\n");
                doc["numeric_estimate"] = p;
            }
            Outcome {
                code: EXIT_REFUSED,
                stdout: if cli.text {
                    String::new()
                } else {
                    pretty(&doc)
                },
                stderr,
            }
        }
    }
}

fn usage(msg: String) -> Outcome {
    Outcome {
        code: EXIT_USAGE,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn settings(cli: &Cli) -> Result<Settings, String> {
    let mut s = Settings::default();
    if let Some(path) = &cli.config {
        s = s.with_file(path)?;
    }
    let s = s.overlay(cli.tol_circle, cli.order, cli.cutoff);
    s.validate()?;
    Ok(s)
}

fn dispatch(cmd: &Command, s: &Settings) -> Result<Rendered, Failure> {
    match cmd {
        Command::Factor { expr } => factor(expr, s),
        Command::ToeplitzKernel { symbol } => {
            let g = parse_rational(symbol, s.tol())?;
            let k = toeplitz_kernel(&g, s.tol())?;
            let mut json = output::exact_kernel(&k);
            json["operator"] = json!("toeplitz");
            json["symbol"] = json!(canonical(symbol)?);
            Ok(Rendered::ok(json, format!("{}\n", output::kernel_text(&k))))
        }
        Command::PairedKernel { a, b, minus } => paired(a, b, *minus, s),
        Command::AttoKernel(args) => atto(args, s),
        Command::OracleCompare { target } => oracle_compare(target, s),
        Command::Verify {
            suite,
            trials,
            seed,
        } => {
            let report = run_suite(*suite, *trials, *seed, s);
            let code = if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_FAILURES
            };
            Ok(Rendered {
                json: serde_json::to_value(&report).expect("reports serialize"),
                text: report.to_string(),
                code,
            })
        }
    }
}

fn canonical(text: &str) -> Result<String, Failure> {
    Ok(parse_symbol(text)?.to_string())
}

fn classes(roots: &[num_complex::Complex64], tol: CircleTol) -> Value {
    let c = classify_roots(roots, tol);
    json!({
        "inside": output::complexes(&c.inside),
        "on_circle": output::complexes(&c.on_circle),
        "outside": output::complexes(&c.outside),
    })
}

fn factor(expr: &str, s: &Settings) -> Result<Rendered, Failure> {
    let tol = s.tol();
    let f = parse_rational(expr, tol)?;
    let mut json = json!({
        "symbol": canonical(expr)?,
        "gain": output::complex(f.gain()),
        "zeros": classes(f.zeros(), tol),
        "poles": classes(f.poles(), tol),
        "bounded": f.in_l_infinity(tol),
    });
    let mut text = format!("symbol {f}\n");
    match wiener_hopf(&f, tol) {
        Ok(wh) => {
            json["winding"] = json!(wh.kappa);
            json["wiener_hopf"] = json!({
                "kappa": wh.kappa,
                "g_minus": output::rational(&wh.g_minus),
                "g_plus": output::rational(&wh.g_plus),
            });
            text.push_str(&format!(
                "wiener-hopf: kappa = {}, g- = {}, g+ = {}\n",
                wh.kappa, wh.g_minus, wh.g_plus
            ));
        }
        Err(e) => {
            json["winding"] = Value::Null;
            json["wiener_hopf"] = Value::Null;
            json["wiener_hopf_error"] = json!(e.to_string());
            text.push_str(&format!("wiener-hopf: {e}\n"));
        }
    }
    match inner_outer_rational(&f, tol) {
        Ok((inner, outer)) => {
            json["inner_outer"] = json!({
                "inner": output::blaschke(&inner),
                "outer": output::rational(&outer),
            });
            text.push_str(&format!("inner {inner}, outer {outer}\n"));
        }
        Err(e) => {
            json["inner_outer"] = Value::Null;
            json["inner_outer_error"] = json!(e.to_string());
            text.push_str(&format!("inner-outer: {e}\n"));
        }
    }
    Ok(Rendered::ok(json, text))
}

fn pair(a: &str, b: &str, s: &Settings) -> Result<SymbolPair, Failure> {
    let (a, b) = (parse_rational(a, s.tol())?, parse_rational(b, s.tol())?);
    Ok(SymbolPair::new(a, b, s.tol())?)
}

fn numeric_paired(pair: &SymbolPair, minus: bool, s: &Settings) -> pairker::Result<OracleKernel> {
    if minus {
        numeric_paired_kernel_minus(pair, s.order, s.cutoff, s.tol())
    } else {
        numeric_paired_kernel_plus(pair, s.order, s.cutoff, s.tol())
    }
}

fn ambient(minus: bool) -> Ambient {
    if minus {
        Ambient::Minus
    } else {
        Ambient::Plus
    }
}

fn paired(a: &str, b: &str, minus: bool, s: &Settings) -> Result<Rendered, Failure> {
    let p = pair(a, b, s)?;
    let exact = if minus {
        paired_kernel_minus(&p, s.tol())
    } else {
        paired_kernel_plus(&p, s.tol())
    };
    let k = match exact {
        Ok(k) => k,
        Err(e @ pairker::Error::BothSidedCircleZeros) => {
            let payload = numeric_paired(&p, minus, s)
                .ok()
                .map(|nk| output::numeric_kernel(&nk, ambient(minus)));
            return Err(Failure::Refused {
                message: e.to_string(),
                payload,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let mut json = output::exact_kernel(&k);
    json["operator"] = json!("paired");
    json["a"] = json!(canonical(a)?);
    json["b"] = json!(canonical(b)?);
    Ok(Rendered::ok(json, format!("{}\n", output::kernel_text(&k))))
}

/// Finite-rank symbol file. Either `r_plus`, `r_minus` and `points`, or the
/// polynomials `e`, `d1p`, `d2m`, `q1`, `q2` directly. Values are symbol
/// expressions.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteRankFile {
    pub r_plus: Option<String>,
    pub r_minus: Option<String>,
    pub points: Option<Vec<PointEntry>>,
    pub e: Option<String>,
    pub d1p: Option<String>,
    pub d2m: Option<String>,
    pub q1: Option<String>,
    pub q2: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub t: String,
    pub n: usize,
}

fn polynomial(text: &str, tol: CircleTol) -> Result<Polynomial, Failure> {
    let f = parse_rational(text, tol)?;
    if !f.is_polynomial() {
        return Err(Failure::Usage(format!("'{text}' is not a polynomial")));
    }
    Ok(f.num().clone())
}

fn finite_rank_symbol(
    path: &Path,
    theta: BlaschkeProduct,
    alpha: BlaschkeProduct,
    tol: CircleTol,
) -> Result<AttoSymbol, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file: FiniteRankFile = toml::from_str(&text)
        .map_err(|e| Failure::Usage(format!("invalid finite-rank file {}: {e}", path.display())))?;
    let explicit = [&file.e, &file.d1p, &file.d2m, &file.q1, &file.q2];
    if explicit.iter().any(|x| x.is_some()) {
        if file.r_plus.is_some() || file.r_minus.is_some() || file.points.is_some() {
            return Err(Failure::Usage(
                "give either e, d1p, d2m, q1, q2 or r_plus, r_minus, points".into(),
            ));
        }
        let get = |x: &Option<String>, name: &str| -> Result<Polynomial, Failure> {
            let text = x
                .as_deref()
                .ok_or_else(|| Failure::Usage(format!("missing key {name}")))?;
            polynomial(text, tol)
        };
        let data = FiniteRankData {
            e: get(&file.e, "e")?,
            d1p: get(&file.d1p, "d1p")?,
            d2m: get(&file.d2m, "d2m")?,
            q1: get(&file.q1, "q1")?,
            q2: get(&file.q2, "q2")?,
        };
        return Ok(AttoSymbol::from_finite_rank(theta, alpha, data, tol)?);
    }
    let rational = |x: &Option<String>| -> Result<RationalFunction, Failure> {
        Ok(match x {
            Some(t) => parse_rational(t, tol)?,
            None => RationalFunction::zero(),
        })
    };
    let points = file
        .points
        .as_ref()
        .ok_or_else(|| Failure::Usage("missing key points".into()))?
        .iter()
        .map(|p| {
            let t = parse_rational(&p.t, tol)?;
            if !t.is_constant() {
                return Err(Failure::Usage(format!("point '{}' is not a constant", p.t)));
            }
            Ok(TaylorPoint {
                t: t.gain(),
                n: p.n,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(pairker::atto::build_finite_rank_symbol(
        &theta,
        &alpha,
        &rational(&file.r_plus)?,
        &rational(&file.r_minus)?,
        &points,
        tol,
    )?)
}

fn atto_symbol(args: &AttoArgs, s: &Settings) -> Result<AttoSymbol, Failure> {
    let tol = s.tol();
    let theta = parse_blaschke(&args.theta, tol)?;
    let alpha = parse_blaschke(&args.alpha, tol)?;
    if let Some(path) = &args.finite_rank {
        return finite_rank_symbol(path, theta, alpha, tol);
    }
    let parts = args
        .symbol
        .as_ref()
        .ok_or_else(|| Failure::Usage("--symbol or --finite-rank is required".into()))?;
    let f = |i: usize| parse_rational(&parts[i], tol);
    Ok(AttoSymbol::new(
        theta,
        alpha,
        [f(0)?, f(1)?, f(2)?, f(3)?],
        tol,
    )?)
}

fn triviality_name(t: Triviality) -> &'static str {
    use pairker::atto::TrivialityReason::*;
    match t {
        Triviality::ProvedTrivial(PairedKernel) => "paired-kernel",
        Triviality::ProvedTrivial(Degree) => "degree",
        Triviality::ProvedTrivial(ToeplitzKernel) => "toeplitz-kernel",
        Triviality::Inconclusive => "inconclusive",
    }
}

fn atto_exact(sym: &AttoSymbol, s: &Settings) -> Result<(KernelSpace, Value), Failure> {
    let k = atto_kernel_closed_form(sym, s.tol())?;
    let mut json = output::exact_kernel(&k);
    json["operator"] = json!("atto");
    json["theta"] = output::blaschke(&sym.theta);
    json["alpha"] = output::blaschke(&sym.alpha);
    json["triviality"] = json!(triviality_name(s_trivial_check(sym, s.tol())?));
    if let Some(d) = &sym.finite_rank {
        json["alpha_bound"] = json!(d.alpha_bound());
    }
    Ok((k, json))
}

fn atto(args: &AttoArgs, s: &Settings) -> Result<Rendered, Failure> {
    let sym = atto_symbol(args, s)?;
    let (k, json) = atto_exact(&sym, s)?;
    Ok(Rendered::ok(json, format!("{}\n", output::kernel_text(&k))))
}

fn comparison_doc(exact: &KernelSpace, numeric: Value, cmp: &Comparison) -> Rendered {
    let agrees = cmp.agrees(MAX_ANGLE);
    let json = json!({
        "exact": output::exact_kernel(exact),
        "numeric": numeric,
        "angle": output::finite(cmp.angle.radians),
        "order": cmp.order,
        "agrees": agrees,
    });
    let text = format!(
        "exact   {}\nnumeric dim {} at order {}\nangle   {:.3e}\n{}\n",
        output::kernel_text(exact),
        cmp.numeric_dim,
        cmp.order,
        cmp.angle.radians,
        if agrees { "agree" } else { "DISAGREE" }
    );
    Rendered {
        json,
        text,
        code: if agrees { EXIT_OK } else { EXIT_FAILURES },
    }
}

fn oracle_compare(target: &OracleTarget, s: &Settings) -> Result<Rendered, Failure> {
    let tol = s.tol();
    match target {
        OracleTarget::ToeplitzKernel { symbol } => {
            let g = parse_rational(symbol, tol)?;
            let exact = toeplitz_kernel(&g, tol)?;
            let rho = decay_radius(&[&g, exact.multiplier()], tol);
            let mut last = None;
            let cmp = compare_with_oracle(&exact, s.order, rho, tol, |m| {
                let nk = numeric_toeplitz_kernel(&g, m, s.cutoff, tol)?;
                last = Some(output::numeric_kernel(&nk, Ambient::Plus));
                Ok(nk)
            })?;
            Ok(comparison_doc(&exact, last.unwrap_or(Value::Null), &cmp))
        }
        OracleTarget::PairedKernel { a, b, minus } => {
            let p = pair(a, b, s)?;
            let exact = if *minus {
                paired_kernel_minus(&p, tol)?
            } else {
                paired_kernel_plus(&p, tol)?
            };
            let rho = decay_radius(&[&p.a, &p.b, exact.multiplier()], tol);
            let mut last = None;
            let cmp = compare_with_oracle(&exact, s.order, rho, tol, |m| {
                let nk = numeric_paired(&p, *minus, &Settings { order: m, ..*s })?;
                last = Some(output::numeric_kernel(&nk, ambient(*minus)));
                Ok(nk)
            })?;
            Ok(comparison_doc(&exact, last.unwrap_or(Value::Null), &cmp))
        }
        OracleTarget::AttoKernel(args) => {
            let sym = atto_symbol(args, s)?;
            let (exact, _) = atto_exact(&sym, s)?;
            let cmp = compare_atto(&sym.theta, &sym.alpha, &sym.phi()?, &exact, s.cutoff, tol)?;
            let agrees = cmp.numeric_dim == exact.dim()
                && cmp.angle.radians < MAX_ANGLE
                && cmp.residual < MAX_MODEL_RESIDUAL;
            let json = json!({
                "exact": output::exact_kernel(&exact),
                "numeric": {
                    "dim": cmp.numeric_dim,
                    "multiplier": Value::Null,
                    "ambient": "H2+",
                    "provenance": "numeric",
                    "gap": output::finite(cmp.gap),
                },
                "angle": output::finite(cmp.angle.radians),
                "model_space_residual": cmp.residual,
                "agrees": agrees,
            });
            let text = format!(
                "exact   {}\nnumeric dim {}\nangle   {:.3e}\n{}\n",
                output::kernel_text(&exact),
                cmp.numeric_dim,
                cmp.angle.radians,
                if agrees { "agree" } else { "DISAGREE" }
            );
            Ok(Rendered {
                json,
                text,
                code: if agrees { EXIT_OK } else { EXIT_FAILURES },
            })
        }
    }
}
