use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use phigamma::io::{self, ElementJson, MeasureJson, SeriesJson};
use phigamma::maps::{exp_eval, omega, twist_element, DualPair};
use phigamma::ops::{convolve, measure_of};
use phigamma::suites::{self, SuiteConfig};
use phigamma::{CrysRep, Error, Params};

const SCHEMA_VERSION: &str = "1";

/// Finite-precision (phi, Gamma)-module computations.
#[derive(Parser, Debug)]
#[command(name = "phigamma", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Primes to run at (repeatable); `eval` uses the first.
    #[arg(long = "p", global = true)]
    p: Vec<u32>,
    /// Truncation order.
    #[arg(long = "N", global = true, default_value_t = 64)]
    order: usize,
    /// Target precision in digits.
    #[arg(long = "M", global = true, default_value_t = 24)]
    digits: i64,
    /// Guard digits added to M for intermediate work.
    #[arg(long, global = true, default_value_t = 16)]
    guard: i64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one map on input files.
    Eval(EvalArgs),
    /// Run acceptance suites; exit status 0 iff all pass.
    Check(CheckArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum EvalOp {
    Omega,
    ExpEval,
    Twist,
    Pairing,
    Measure,
    Convolve,
}

#[derive(Args, Debug)]
struct EvalArgs {
    op: EvalOp,
    /// Representation file (omega, exp-eval, pairing).
    #[arg(long)]
    rep: Option<PathBuf>,
    /// Main input: a module element, a series (measure) or a measure (convolve).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Second input for pairing and convolve.
    #[arg(long)]
    input2: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    h: usize,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    j: i64,
    /// Level for exp-eval.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Measure level for measure and pairing.
    #[arg(long, default_value_t = 3)]
    level: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Suite names, or `all`.
    #[arg(required = true)]
    suites: Vec<String>,
    /// Also rerun the reciprocity identities under nabla_0 / (1 - gamma_n) and list which break.
    #[arg(long)]
    sign_audit: bool,
    #[command(flatten)]
    common: Common,
}

enum Failure {
    Input(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Option<PathBuf>, flag: &str) -> Result<String, Failure> {
    let path = path.as_ref().ok_or_else(|| Failure::Usage(format!("--{flag} FILE is required")))?;
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str, path: &Option<PathBuf>) -> Result<T, Failure> {
    let name = path.as_deref().map(Path::display).map(|d| d.to_string()).unwrap_or_default();
    serde_json::from_str(text).map_err(|e| Failure::Input(format!("{name}: line {} column {}: {e}", e.line(), e.column())))
}

fn write(out: &Option<PathBuf>, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("plain data") + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn provenance(c: &Common, p: &[u32], extra: Value) -> Value {
    json!({
        "tool": "phigamma",
        "version": env!("CARGO_PKG_VERSION"),
        "schema": SCHEMA_VERSION,
        "params": {"p": p, "N": c.order, "M": c.digits, "G": c.guard, "seed": c.seed, "job": extra},
        "precision_floor": c.digits,
    })
}

fn prime(c: &Common, fallback: Option<u32>) -> Result<u32, Failure> {
    let p = c.p.first().copied().or(fallback).ok_or_else(|| Failure::Usage("--p is required".into()))?;
    Params::new(p, c.order, c.digits, c.guard)?;
    Ok(p)
}

fn rep_for(args: &EvalArgs, prec: i64) -> Result<CrysRep, Failure> {
    Ok(CrysRep::from_json(&read(&args.rep, "rep")?, prec)?)
}

fn element(path: &Option<PathBuf>, flag: &str) -> Result<(ElementJson, phigamma::ModuleElement), Failure> {
    let raw: ElementJson = parse(&read(path, flag)?, path)?;
    let y = io::element_from_json(&raw)?;
    Ok((raw, y))
}

fn check_prime(want: u32, got: u32, what: &str) -> Result<(), Failure> {
    if want != got {
        return Err(Failure::Input(format!("{what} is over p = {got}, expected p = {want}")));
    }
    Ok(())
}

fn eval(args: &EvalArgs) -> Result<Value, Failure> {
    let c = &args.common;
    let prec = c.digits + c.guard;
    let job = json!({"op": format!("{:?}", args.op), "h": args.h, "j": args.j, "n": args.n, "level": args.level});
    let (p, result) = match args.op {
        EvalOp::Omega | EvalOp::ExpEval => {
            let rep = rep_for(args, prec)?;
            let p = prime(c, Some(rep.p))?;
            check_prime(p, rep.p, "the representation")?;
            let (raw, y) = element(&args.input, "input")?;
            check_prime(p, raw.p, "the input")?;
            let y = phigamma::ModuleElement::new(rep.twist, y.comps);
            if args.op == EvalOp::Omega {
                let o = omega(&rep, args.h, &y, c.order, prec)?;
                let lines: Vec<Vec<String>> = o.ambiguous.iter().map(|v| v.iter().map(io::scalar_text).collect()).collect();
                (p, json!({"value": io::element_to_json(&o.value, c.digits), "defined_modulo": lines}))
            } else {
                let v = exp_eval(&rep, args.n, &y, prec)?;
                (p, json!({"value": v.iter().map(io::cyclo_to_json).collect::<Vec<_>>()}))
            }
        }
        EvalOp::Twist => {
            let (raw, y) = element(&args.input, "input")?;
            let p = prime(c, Some(raw.p))?;
            check_prime(p, raw.p, "the input")?;
            (p, json!({"value": io::element_to_json(&twist_element(&y, args.j)?, c.digits)}))
        }
        EvalOp::Pairing => {
            let rep = rep_for(args, prec)?;
            let p = prime(c, Some(rep.p))?;
            check_prime(p, rep.p, "the representation")?;
            let pair = DualPair::canonical(&rep)?;
            let (_, x1) = element(&args.input, "input")?;
            let (_, x2) = element(&args.input2, "input2")?;
            let x1 = phigamma::ModuleElement::new(pair.v.twist, x1.comps);
            let x2 = phigamma::ModuleElement::new(pair.w.twist, x2.comps);
            let mu = pair.pairing(&x1, &x2, args.level)?;
            (p, json!({"dual": pair.w.name(), "value": io::measure_to_json(&mu, c.digits)}))
        }
        EvalOp::Measure => {
            let raw: SeriesJson = parse(&read(&args.input, "input")?, &args.input)?;
            let p = prime(c, Some(raw.p))?;
            check_prime(p, raw.p, "the input")?;
            let f = io::series_from_json(&raw)?;
            (p, json!({"value": io::measure_to_json(&measure_of(&f, args.level)?, c.digits)}))
        }
        EvalOp::Convolve => {
            let a: MeasureJson = parse(&read(&args.input, "input")?, &args.input)?;
            let b: MeasureJson = parse(&read(&args.input2, "input2")?, &args.input2)?;
            let p = prime(c, Some(a.p))?;
            check_prime(p, a.p, "the first measure")?;
            check_prime(p, b.p, "the second measure")?;
            let mu = convolve(&io::measure_from_json(&a)?, &io::measure_from_json(&b)?)?;
            (p, json!({"value": io::measure_to_json(&mu, c.digits)}))
        }
    };
    Ok(json!({"provenance": provenance(c, &[p], job), "result": result}))
}

/// Returns the report and whether every suite passed.
fn check(args: &CheckArgs) -> Result<(Value, bool), Failure> {
    let c = &args.common;
    let names: Vec<String> = if args.suites.iter().any(|s| s == "all") {
        suites::SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        args.suites.clone()
    };
    if let Some(bad) = names.iter().find(|n| !suites::is_suite(n)) {
        return Err(Failure::Usage(format!("unknown suite '{bad}'; expected one of {}", suites::SUITES.join(", "))));
    }
    let primes = if c.p.is_empty() { SuiteConfig::default().primes } else { c.p.clone() };
    let cfg = SuiteConfig { primes: primes.clone(), n: c.order, m: c.digits, g: c.guard, seed: c.seed };
    let results = suites::run_suites(&names, &cfg)?;
    let mut all = true;
    let mut out = Vec::new();
    for (name, reports) in &results {
        let ok = !reports.is_empty() && reports.iter().all(|r| r.pass);
        all &= ok;
        let floor = reports.iter().map(|r| r.precision_floor).max().unwrap_or(0);
        eprintln!("{} {name} ({} reports, floor {floor})", if ok { "PASS" } else { "FAIL" }, reports.len());
        for r in reports.iter().filter(|r| !r.pass) {
            eprintln!("  {}", r.summary_line());
        }
        out.push(json!({"suite": name, "pass": ok, "reports": reports}));
    }
    let mut report = json!({"provenance": provenance(c, &primes, json!({"suites": names})), "suites": out, "pass": all});
    if args.sign_audit {
        let audit = suites::sign_audit(&cfg)?;
        for (what, holds) in &audit {
            eprintln!("sign audit: {what}: {}", if *holds { "holds" } else { "breaks" });
        }
        report["sign_audit"] = json!(audit.iter().map(|(w, h)| json!({"case": w, "holds": h})).collect::<Vec<_>>());
    }
    Ok((report, all))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Eval(a) => eval(a).and_then(|v| write(&a.common.out, &v)).map(|_| true),
        Command::Check(a) => check(a).and_then(|(v, ok)| write(&a.common.out, &v).map(|_| ok)),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(64)
        }
    }
}
