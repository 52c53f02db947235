//! Command-line front end for the `knormal` toolkit.
//!
//! Every command produces a [`RunReport`], printed as JSON (default) or as a
//! CSV projection. Single-verdict commands exit with 0 when the verdict holds
//! or a witness is found and with 3 otherwise; usage errors exit with 2 and
//! computational errors with the stable status of their error code.

pub mod report;
pub mod reproduce;
pub mod verify;

use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use knormal::bounds::{
    basic_inequality_with_theta, eval_d_expr, specialized_sieve, test_sieve, BoundVerdict, Form,
    SieveReport, TestSieveOutcome, ThetaChoice,
};
use knormal::ffield::FieldSpec;
use knormal::fqpoly::{factor_poly, xn1_of, PolyQ};
use knormal::intarith::{factor_int, gcd_u64, hints_applied, install_hints, Hints};
use knormal::modstruct::{fq_order, k_normality};
use knormal::search::{
    census_in, direct_search_in, search_pair_in, CensusKind, CensusResult, SearchField,
    SearchOptions, SearchOutcome,
};
use knormal::{Error, Result};

pub use report::RunReport;
pub use reproduce::Target;

/// Exit status for a verdict that does not hold or a search that found nothing.
pub const EXIT_NEGATIVE: i32 = 3;
/// Exit status for malformed command lines.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "knormal", version, about = "r-primitive k-normal elements in finite fields")]
pub struct Cli {
    /// Factorization hints, one `N = p^e * q ...` entry per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub hints: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Largest field, in bits, that searches will tabulate.
    #[arg(long, global = true, value_name = "BITS", default_value_t = 24)]
    pub ceiling: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    #[value(name = "eq10")]
    Simplified,
    #[value(name = "eq9")]
    Exact,
}

fn parse_theta(s: &str) -> std::result::Result<ThetaChoice, String> {
    match s {
        "auto" => Ok(ThetaChoice::Auto),
        "2" => Ok(ThetaChoice::Multiplier(2)),
        "3" => Ok(ThetaChoice::Multiplier(3)),
        _ => Err(format!("expected auto, 2 or 3, got `{s}`")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor a positive integer.
    FactorInt { n: BigUint },
    /// Factor x^n - 1 or a given polynomial over F_q.
    #[command(group(ArgGroup::new("what").required(true).args(["xn1", "poly"])))]
    FactorPoly {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        xn1: bool,
        /// Coefficients, constant term first, as F_q literals.
        #[arg(long)]
        poly: Option<String>,
    },
    /// Multiplicative order of an element.
    Order {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        elem: String,
    },
    /// F_q-order of an element and its k-normality.
    FqOrder {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        elem: String,
    },
    /// k-normality of one element, or the number of k-normal elements.
    #[command(group(ArgGroup::new("what").required(true).args(["elem", "census"])))]
    Knormal {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        elem: Option<String>,
        #[arg(long, value_name = "K")]
        census: Option<usize>,
    },
    /// The sufficient condition for an r-primitive k-normal pair.
    Bound {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: BigUint,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = FormArg::Simplified)]
        form: FormArg,
        #[arg(long, value_parser = parse_theta, default_value = "auto")]
        theta: ThetaChoice,
    },
    /// Search for a sieve seed that proves a primitive 1-normal pair exists.
    Sieve {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        theta: u32,
    },
    /// The specialized sieve with h = H = 1 over primes = 1 mod n0.
    #[command(name = "lemma54")]
    SpecializedSieve {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        /// `q-1`, `q^2-1`, `q^3-1`, `q^4-1`, `gcd(30,qn-1)` or a decimal.
        #[arg(long)]
        d_expr: String,
        #[arg(long)]
        n0: u64,
        /// Defaults to 2 when gcd(q, n) = 1 and 3 otherwise.
        #[arg(long)]
        theta: Option<u32>,
        /// Bound on the product of the selected primes.
        #[arg(long)]
        cap: Option<BigUint>,
    },
    /// Primitive 1-normal pairs among the images beta^q - beta.
    DirectSearch {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
    },
    /// Exhaustive search for alpha with alpha and alpha^-1 r-primitive k-normal.
    SearchPair {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        k: usize,
    },
    /// Run a fixed reproduction target.
    Reproduce {
        #[arg(long, value_enum)]
        target: Target,
    },
    /// Re-verify every witness in a saved JSON report.
    VerifyReport { file: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FactorInt { .. } => "factor-int",
            Command::FactorPoly { .. } => "factor-poly",
            Command::Order { .. } => "order",
            Command::FqOrder { .. } => "fq-order",
            Command::Knormal { .. } => "knormal",
            Command::Bound { .. } => "bound",
            Command::Sieve { .. } => "sieve",
            Command::SpecializedSieve { .. } => "lemma54",
            Command::DirectSearch { .. } => "direct-search",
            Command::SearchPair { .. } => "search-pair",
            Command::Reproduce { .. } => "reproduce",
            Command::VerifyReport { .. } => "verify-report",
        }
    }
}

/// A finished run: the report and, for single-verdict commands, the verdict.
#[derive(Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub verdict: Option<bool>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(false) => EXIT_NEGATIVE,
            _ => 0,
        }
    }
}

/// What the binary prints and returns for a command line.
#[derive(Debug)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses and runs a full command line (including the program name).
pub fn run_args<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Invocation { code, stdout, stderr };
        }
    };
    match run(&cli) {
        Ok(out) => Invocation {
            code: out.exit_code(),
            stdout: match cli.format {
                Format::Json => out.report.render_json(),
                Format::Csv => out.report.render_csv(),
            },
            stderr: String::new(),
        },
        Err(e) => Invocation {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error [{}]: {e}\n", e.code()),
        },
    }
}

/// Runs a parsed command line inside a worker pool of the requested size.
pub fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(path) = &cli.hints {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        install_hints(&text.parse::<Hints>()?)?;
    }
    let opts = SearchOptions { ceiling_bits: cli.ceiling };
    let start = Instant::now();
    let mut out = match cli.jobs {
        Some(0) => return Err(Error::InvalidArgument("--jobs must be at least 1".into())),
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(|| dispatch(&cli.command, &opts)),
        None => dispatch(&cli.command, &opts),
    }?;
    out.report.elapsed = start.elapsed();
    out.report.hints_applied = hints_applied();
    Ok(out)
}

fn dispatch(cmd: &Command, opts: &SearchOptions) -> Result<Outcome> {
    let name = cmd.name();
    let mut verdict = None;
    let mut rep = match cmd {
        Command::FactorInt { n } => {
            let mut rep = RunReport::new(name, json!({ "n": n.to_string() }));
            let f = factor_int(n, None)?;
            rep.result = json!({
                "factors": f.factors().iter()
                    .map(|(p, e)| json!({ "prime": p.to_string(), "exponent": e }))
                    .collect::<Vec<_>>(),
                "display": f.to_string(),
                "distinct_primes": f.num_distinct(),
                "rad": f.rad().to_string(),
                "phi": f.phi().to_string(),
                "moebius": f.moebius(),
                "w": f.w().to_string(),
            });
            rep
        }
        Command::FactorPoly { field, xn1, poly } => {
            let ctx = field.build()?;
            let mut rep = RunReport::new(
                name,
                json!({ "field": report::field_spec(&ctx), "xn1": xn1, "poly": poly }),
            );
            rep.used(&ctx);
            let f = match poly {
                Some(s) => PolyQ::parse(ctx.fq().clone(), s)?,
                None => xn1_of(&ctx).poly().clone(),
            };
            let fact = factor_poly(&f)?;
            rep.result = json!({
                "poly": f.to_string(),
                "literal": f.to_literal(),
                "unit": fact.unit,
                "factors": fact.factors.iter().map(|(g, e)| json!({
                    "factor": g.to_string(),
                    "literal": g.to_literal(),
                    "degree": g.deg(),
                    "exponent": e,
                })).collect::<Vec<_>>(),
                "distinct_factors": fact.num_distinct(),
                "phi_q": fact.phi_q().to_string(),
                "w": fact.w().to_string(),
            });
            rep
        }
        Command::Order { field, elem } => {
            let ctx = field.build()?;
            let a = ctx.parse_element(elem)?;
            let mut rep = RunReport::new(name, json!({ "field": report::field_spec(&ctx), "elem": elem }));
            rep.used(&ctx);
            let order = ctx.mult_order(&a)?;
            rep.result = json!({
                "element": ctx.format_element(&a),
                "order": order.to_string(),
                "primitive": order == ctx.size() - 1,
            });
            rep
        }
        Command::FqOrder { field, elem } => {
            let ctx = field.build()?;
            let a = ctx.parse_element(elem)?;
            let mut rep = RunReport::new(name, json!({ "field": report::field_spec(&ctx), "elem": elem }));
            rep.used(&ctx);
            let ord = fq_order(&ctx, &a)?;
            rep.result = json!({
                "element": ctx.format_element(&a),
                "fq_order": ord.to_string(),
                "fq_order_literal": ord.to_literal(),
                "degree": ord.deg(),
                "k_normality": ctx.n() - ord.deg(),
            });
            rep
        }
        Command::Knormal { field, elem, census } => {
            let ctx = field.build()?;
            let mut rep = RunReport::new(
                name,
                json!({ "field": report::field_spec(&ctx), "elem": elem, "census": census }),
            );
            rep.used(&ctx);
            if let Some(s) = elem {
                let a = ctx.parse_element(s)?;
                rep.result = json!({
                    "element": ctx.format_element(&a),
                    "k_normality": k_normality(&ctx, &a)?,
                });
            } else if let Some(k) = *census {
                let xn1 = xn1_of(&ctx);
                let predicted: BigUint = xn1
                    .p_k(k)
                    .map(|gs| gs.iter().map(|g| xn1.phi_q_of(&xn1.complement(g))).sum())
                    .unwrap_or_default();
                let sf = SearchField::from_ctx(ctx.clone(), opts)?;
                let CensusResult::Count(count) = census_in(&sf, CensusKind::KNormal(k))? else {
                    unreachable!("k-normal census returns a count")
                };
                rep.result = json!({
                    "k": k,
                    "count": count,
                    "predicted": predicted.to_string(),
                    "agree": BigUint::from(count) == predicted,
                });
            }
            rep
        }
        Command::Bound { q, n, r, k, form, theta } => {
            let form = match form {
                FormArg::Simplified => Form::Eq10Simplified,
                FormArg::Exact => Form::Eq9Exact,
            };
            let theta_name = match theta {
                ThetaChoice::Auto => "auto".to_string(),
                ThetaChoice::Multiplier(m) => m.to_string(),
            };
            let mut rep = RunReport::new(
                name,
                json!({ "q": q, "n": n, "r": r.to_string(), "k": k, "form": form.name(), "theta": theta_name }),
            );
            let v = basic_inequality_with_theta(*q, *n, r, *k, None, form, *theta)?;
            verdict = Some(v.holds);
            rep.result = verdict_json(&v);
            rep
        }
        Command::Sieve { q, n, theta } => {
            let mut rep = RunReport::new(name, json!({ "q": q, "n": n, "theta": theta }));
            let out = test_sieve(*q, *n, *theta)?;
            verdict = Some(out.holds);
            rep.result = sieve_json(&out);
            rep
        }
        Command::SpecializedSieve { q, n, d_expr, n0, theta, cap } => {
            let theta = theta.unwrap_or(if gcd_u64(*q, *n as u64) == 1 { 2 } else { 3 });
            let mut rep = RunReport::new(
                name,
                json!({
                    "q": q, "n": n, "d_expr": d_expr, "n0": n0, "theta": theta,
                    "cap": cap.as_ref().map(|c| c.to_string()),
                }),
            );
            let d = eval_d_expr(d_expr, *q, *n)?;
            let s = specialized_sieve(*q, *n, &d, *n0, theta, cap.as_ref())?;
            verdict = Some(s.verdict.holds);
            rep.result = sieve_report_json(&s);
            rep
        }
        Command::DirectSearch { q, n } => {
            let mut rep = RunReport::new(name, json!({ "q": q, "n": n }));
            let sf = SearchField::new(*q, *n, opts)?;
            rep.used(&sf.ctx);
            let out = direct_search_in(&sf)?;
            verdict = Some(out.found);
            rep.result = search_json(&sf, &out, "direct", 1, 1);
            rep
        }
        Command::SearchPair { q, n, r, k } => {
            let mut rep = RunReport::new(name, json!({ "q": q, "n": n, "r": r, "k": k }));
            let sf = SearchField::new(*q, *n, opts)?;
            rep.used(&sf.ctx);
            let out = search_pair_in(&sf, *r, *k)?;
            verdict = Some(out.found);
            rep.result = search_json(&sf, &out, "pair", *r, *k);
            rep
        }
        Command::Reproduce { target } => {
            let mut rep = RunReport::new(name, json!({ "target": target.name() }));
            verdict = Some(reproduce::run(*target, opts, &mut rep)?);
            rep
        }
        Command::VerifyReport { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", file.display())))?;
            let saved: Value =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("report JSON: {e}")))?;
            let mut rep = RunReport::new(name, json!({ "file": file.display().to_string() }));
            let summary = verify::verify_report(&saved)?;
            verdict = Some(summary.failures.is_empty());
            rep.result = json!({
                "command": saved.get("command"),
                "witnesses_checked": summary.checked,
                "failures": summary.failures,
            });
            rep
        }
    };
    if rep.result.is_null() {
        rep.result = json!({});
    }
    Ok(Outcome { report: rep, verdict })
}

/// Search outcome with enough context to re-verify the witness on its own.
pub fn search_json(sf: &SearchField, out: &SearchOutcome, kind: &str, r: u64, k: usize) -> Value {
    let ctx = &sf.ctx;
    let mut v = json!({
        "q": ctx.q(),
        "n": ctx.n(),
        "r": r,
        "k": k,
        "found": out.found,
        "witness": out.witness.as_ref().map(|w| ctx.format_element(w)),
        "witness_kind": kind,
        "field": report::field_spec(ctx),
        "scanned": out.stats.scanned,
    });
    if kind == "direct" {
        v["preimage"] = json!(out.preimage.as_ref().map(|b| ctx.format_element(b)));
    }
    v
}

pub fn verdict_json(v: &BoundVerdict) -> Value {
    json!({
        "holds": v.holds,
        "lhs": v.lhs.to_string(),
        "rhs": v.rhs.to_string(),
        "ln_lhs": v.lhs.ln(),
        "ln_rhs": v.rhs.ln(),
        "theta": v.theta,
        "form": v.form,
    })
}

pub fn sieve_report_json(s: &SieveReport) -> Value {
    let polys = |ps: &[PolyQ]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    let mut v = verdict_json(&s.verdict);
    v["h"] = json!(s.h.as_ref().map(|h| h.to_string()));
    v["d"] = json!(s.d.to_string());
    v["big_h"] = json!(s.big_h.as_ref().map(|h| h.to_string()));
    v["l1"] = json!(s.l1.iter().map(|p| p.to_string()).collect::<Vec<_>>());
    v["l2"] = json!(polys(&s.l2));
    v["l3"] = json!(polys(&s.l3));
    v["delta"] = json!(s.delta.to_string());
    v["s"] = json!(s.s.as_ref().map(|x| x.to_string()));
    v
}

pub fn sieve_json(out: &TestSieveOutcome) -> Value {
    json!({
        "holds": out.holds,
        "levels_checked": out.levels_checked,
        "witness": out.witness.as_ref().map(sieve_report_json),
    })
}
