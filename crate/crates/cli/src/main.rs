use std::io::Read;
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hform_core::abel::{abel_suite, HyperellipticData};
use hform_core::acceptance::{run_all, run_criterion, DEFAULT_SEED};
use hform_core::action::{act, is_invariant, ActionOp};
use hform_core::bracket::{verify_bracket_identity, BracketPoly, Verdict};
use hform_core::constants::{lookup, named_invariant};
use hform_core::diff::loc_differential;
use hform_core::forms::{commutator_constants, Form, Side};
use hform_core::localization::LocElement;
use hform_core::oracle::CommPoly;
use hform_core::polarize::{polarize, polarize_pow, PolarTarget};
use hform_core::report::Check;
use hform_core::solvers::{solve_cubic, solve_quadratic};
use hform_core::symbolic::{symbolic_invariant, symbolic_invariant_by_solve};
use hform_core::{Error, Index, PBWPoly};

#[derive(Parser, Debug)]
#[command(name = "hform", version, about = "Exact arithmetic for h-deformed noncommutative binary forms")]
struct Cli {
    /// Emit a JSON object {command, inputs, result, residual, timing_ms}.
    #[arg(long, global = true)]
    json: bool,
    /// Print polynomial results at h = 0 through the commutative oracle.
    #[arg(long, global = true)]
    h0: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Give up after this many milliseconds (exit 1).
    #[arg(long, global = true)]
    timeout_ms: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Op {
    E,
    F,
    H,
    Exphf,
    Expneghf,
}

impl From<Op> for ActionOp {
    fn from(o: Op) -> Self {
        match o {
            Op::E => ActionOp::E,
            Op::F => ActionOp::F,
            Op::H => ActionOp::H,
            Op::Exphf => ActionOp::ExpHF,
            Op::Expneghf => ActionOp::ExpNegHF,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Right,
    Left,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of an expression.
    Nf { expr: String },
    /// Apply E, F, H or exp(±hF).
    Act {
        #[arg(long, value_enum)]
        op: Op,
        expr: String,
    },
    /// Exit 0 iff E, F and H annihilate the expression.
    Invariant { expr: String },
    /// Check a bracket identity in the engine and in the oracle.
    VerifyBracket { expr: String },
    /// Coefficients A_i of a form in index 0.
    Coeffs {
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
        expr: String,
    },
    /// Commutator structure constants of one form's coefficients.
    Commutators { expr: String, expr2: Option<String> },
    /// Polarization from index src to index dst.
    Polarize {
        #[arg(long)]
        src: Index,
        #[arg(long)]
        dst: Index,
        #[arg(long = "pow", default_value_t = 1)]
        pow: u32,
        /// Unnormalized operator (no division by the degree).
        #[arg(long)]
        raw: bool,
        expr: String,
    },
    /// Invariant of a form from a bracket symbol or a built-in name.
    InvariantFromSymbol {
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        degree: Option<u32>,
        /// Instantiate on this form.
        #[arg(long)]
        form: Option<String>,
        /// Use the linear-solve construction instead of the cascade.
        #[arg(long)]
        by_solve: bool,
    },
    /// Roots of a quadratic form in a square-root extension.
    Solve2 {
        #[arg(long)]
        aux: Option<Index>,
        expr: String,
    },
    /// Roots of a cubic form in the Cardano extension.
    Solve3 {
        #[arg(long)]
        aux: Option<Index>,
        expr: String,
    },
    /// Total differential; accepts `d[expr]` or a bare expression.
    Diff {
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<Index>,
        expr: String,
    },
    /// Addition-theorem suite for a hyperelliptic pencil.
    Abel {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long)]
        only: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Nf { .. } => "nf",
            Command::Act { .. } => "act",
            Command::Invariant { .. } => "invariant",
            Command::VerifyBracket { .. } => "verify-bracket",
            Command::Coeffs { .. } => "coeffs",
            Command::Commutators { .. } => "commutators",
            Command::Polarize { .. } => "polarize",
            Command::InvariantFromSymbol { .. } => "invariant-from-symbol",
            Command::Solve2 { .. } => "solve2",
            Command::Solve3 { .. } => "solve3",
            Command::Diff { .. } => "diff",
            Command::Abel { .. } => "abel",
            Command::Selftest { .. } => "selftest",
        }
    }
}

/// What a command produced: text, JSON payload, optional residual and verdict.
struct Outcome {
    text: String,
    result: Value,
    residual: Option<String>,
    holds: bool,
}

impl Outcome {
    fn value(text: String) -> Self {
        Outcome { result: Value::String(text.clone()), text, residual: None, holds: true }
    }
}

enum Failure {
    Usage(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Invalid(_) | Error::NotAForm(_) | Error::Inhomogeneous(_) => Failure::Usage(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<Error>() {
            Ok(core) => core.into(),
            Err(e) => Failure::Usage(format!("{e:#}")),
        }
    }
}

fn read_input(s: &str) -> anyhow::Result<String> {
    if s == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading stdin")?;
        Ok(buf.trim().to_string())
    } else {
        Ok(s.to_string())
    }
}

fn poly(src: &str) -> Result<PBWPoly, Failure> {
    Ok(PBWPoly::parse(&read_input(src)?)?)
}

fn show(p: &PBWPoly, h0: bool) -> String {
    if h0 {
        CommPoly::from_pbw_h0(p).to_string()
    } else {
        p.to_string()
    }
}

fn free_aux(f: &PBWPoly) -> Index {
    let used: Vec<Index> = f.slots().iter().map(|s| s.index()).collect();
    (1..).find(|i| !used.contains(i)).expect("an unused index exists")
}

fn checks_json(checks: &[Check]) -> Value {
    Value::Array(checks.iter().map(|c| json!({"step": c.name, "verdict": if c.holds { "holds" } else { "fails" }, "residual": c.detail, "ms": c.ms})).collect())
}

fn checks_text(checks: &[Check]) -> String {
    checks.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n")
}

fn first_residual(checks: &[Check]) -> Option<String> {
    checks.iter().find(|c| !c.holds).map(|c| format!("{}: {}", c.name, c.detail))
}

fn run(cmd: Command, h0: bool, seed: u64) -> Result<Outcome, Failure> {
    Ok(match cmd {
        Command::Nf { expr } => Outcome::value(show(&poly(&expr)?, h0)),
        Command::Act { op, expr } => Outcome::value(show(&act(op.into(), &poly(&expr)?), h0)),
        Command::Invariant { expr } => {
            let holds = is_invariant(&poly(&expr)?);
            Outcome { text: holds.to_string(), result: Value::Bool(holds), residual: None, holds }
        }
        Command::VerifyBracket { expr } => {
            let e = BracketPoly::parse(&read_input(&expr)?)?;
            let v = verify_bracket_identity(&e);
            let holds = v == Verdict::Holds;
            let text = match &v {
                Verdict::Holds => "holds".to_string(),
                Verdict::Fails(m) => format!("fails: {m}"),
                Verdict::Disagreement { deformed_zero, classical_zero } => format!("backends disagree: engine zero {deformed_zero}, oracle zero {classical_zero}"),
            };
            let residual = if holds { None } else { Some(text.clone()) };
            Outcome { result: serde_json::to_value(&v).unwrap_or(Value::Null), text, residual, holds }
        }
        Command::Coeffs { side, expr } => {
            let side = match side {
                SideArg::Right => Side::Right,
                SideArg::Left => Side::Left,
            };
            let f = Form::extract(&poly(&expr)?, side)?;
            let coeffs: Vec<String> = f.coeffs.iter().map(|c| show(c, h0)).collect();
            let text = coeffs.iter().enumerate().map(|(i, c)| format!("A{i} = {c}")).collect::<Vec<_>>().join("\n");
            Outcome { text, result: json!(coeffs), residual: None, holds: true }
        }
        Command::Commutators { expr, expr2 } => {
            let f = Form::extract(&poly(&expr)?, Side::Right)?;
            let g = expr2.map(|e| -> Result<Form, Failure> { Ok(Form::extract(&poly(&e)?, Side::Right)?) }).transpose()?;
            let t = commutator_constants(&f, g.as_ref())?;
            let map = t.to_map();
            let result = json!(map.iter().map(|(k, v)| (k.clone(), v.iter().map(|(i, j, c)| json!([i, j, c.to_string()])).collect::<Value>())).collect::<serde_json::Map<String, Value>>());
            let text = map.iter().map(|(k, v)| format!("{k}: {}", v.iter().map(|(i, j, c)| format!("({i},{j}) {c}")).collect::<Vec<_>>().join(", "))).collect::<Vec<_>>().join("\n");
            Outcome { text, result, residual: None, holds: true }
        }
        Command::Polarize { src, dst, pow, raw, expr } => {
            let a = poly(&expr)?;
            let target = PolarTarget::Index(dst);
            let r = if raw {
                (0..pow).try_fold(a, |acc, _| polarize(&acc, src, &target, false))?
            } else {
                polarize_pow(&a, src, &target, pow)?
            };
            Outcome::value(show(&r, h0))
        }
        Command::InvariantFromSymbol { symbol, degree, form, by_solve } => {
            let inv = match lookup(&symbol) {
                Some(n) if !by_solve => named_invariant(n.name)?,
                named => {
                    let (sym, deg) = match named {
                        Some(n) => (n.symbol.to_string(), n.degree),
                        None => (symbol.clone(), degree.ok_or_else(|| Failure::Usage("--degree is required for a bracket symbol".into()))?),
                    };
                    let sym = BracketPoly::parse(&sym)?;
                    if by_solve {
                        symbolic_invariant_by_solve(&sym, deg)?
                    } else {
                        symbolic_invariant(&sym, deg)?
                    }
                }
            };
            match form {
                Some(f) => Outcome::value(show(&inv.instantiate(&Form::extract(&poly(&f)?, Side::Right)?)?, h0)),
                None => Outcome::value(inv.to_string()),
            }
        }
        Command::Solve2 { aux, expr } => {
            let f = poly(&expr)?;
            let sol = solve_quadratic(&f, aux.unwrap_or_else(|| free_aux(&f)))?;
            let checks = sol.checks(&f);
            let points: Vec<Value> = sol.points.iter().map(|p| json!({"X": p.x.to_string(), "Y": p.y.to_string()})).collect();
            let relations = sol.adj.describe();
            let text = format!(
                "{}\n{}\n{}",
                relations.join("\n"),
                sol.points.iter().enumerate().map(|(i, p)| format!("X{0} = {1}\nY{0} = {2}", i + 1, p.x, p.y)).collect::<Vec<_>>().join("\n"),
                checks_text(&checks)
            );
            let holds = checks.iter().all(|c| c.holds);
            Outcome { text, result: json!({"aux": sol.aux, "relations": relations, "points": points, "checks": checks_json(&checks)}), residual: first_residual(&checks), holds }
        }
        Command::Solve3 { aux, expr } => {
            let f = poly(&expr)?;
            let sol = solve_cubic(&f, aux.unwrap_or_else(|| free_aux(&f)))?;
            let checks = sol.checks(&f);
            let points: Vec<Value> = sol.points.iter().map(|p| json!({"X": p.x.to_string(), "Y": p.y.to_string()})).collect();
            let relations = sol.adj.describe();
            let text = format!(
                "{}\n{}\n{}",
                relations.join("\n"),
                sol.points.iter().enumerate().map(|(i, p)| format!("X{0} = {1}\nY{0} = {2}", i + 1, p.x, p.y)).collect::<Vec<_>>().join("\n"),
                checks_text(&checks)
            );
            let holds = checks.iter().all(|c| c.holds);
            Outcome { text, result: json!({"aux": sol.aux, "relations": relations, "points": points, "checks": checks_json(&checks)}), residual: first_residual(&checks), holds }
        }
        Command::Diff { vars, expr } => {
            let src = read_input(&expr)?;
            let t = src.trim();
            let inner = match t.strip_prefix("d[") {
                Some(rest) => rest.strip_suffix(']').ok_or_else(|| Failure::Usage("unclosed `d[`".into()))?,
                None => t,
            };
            let a = LocElement::parse(inner)?;
            let d = loc_differential(&a, &vars)?;
            let text = match (h0, d.as_poly()) {
                (true, Some(p)) => show(&p, true),
                _ => d.to_string(),
            };
            Outcome::value(text)
        }
        Command::Abel { g, s, p, q } => {
            let data = HyperellipticData::standard(g, s, p, q)?;
            let checks = abel_suite(&data, seed);
            let holds = checks.iter().all(|c| c.holds);
            Outcome { text: checks_text(&checks), result: json!({"data": data, "steps": checks_json(&checks)}), residual: first_residual(&checks), holds }
        }
        Command::Selftest { only } => {
            let results = match only {
                Some(id) => vec![run_criterion(id, seed).ok_or_else(|| Failure::Usage(format!("no criterion {id}; use 1 to 10")))?],
                None => run_all(seed, |_| {}),
            };
            let text = results.iter().map(|c| c.summary()).collect::<Vec<_>>().join("\n");
            let holds = results.iter().all(|c| c.passed());
            let residual = results.iter().find(|c| !c.passed()).map(|c| c.summary());
            Outcome { text, result: serde_json::to_value(&results).unwrap_or(Value::Null), residual, holds }
        }
    })
}

fn with_timeout(cmd: Command, h0: bool, seed: u64, timeout: Option<u64>) -> Result<Outcome, Failure> {
    let (tx, rx) = mpsc::channel();
    thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(move || {
            let _ = tx.send(run(cmd, h0, seed));
        })
        .map_err(|e| Failure::Other(e.to_string()))?;
    match timeout {
        Some(ms) => rx.recv_timeout(Duration::from_millis(ms)).map_err(|_| Failure::Other(Error::Timeout(ms).to_string()))?,
        None => rx.recv().map_err(|_| Failure::Other(anyhow!("worker thread panicked").to_string()))?,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = cli.command.name();
    let inputs = format!("{:?}", cli.command);
    let start = Instant::now();
    let outcome = with_timeout(cli.command, cli.h0, cli.seed, cli.timeout_ms);
    let ms = start.elapsed().as_millis();
    match outcome {
        Ok(o) => {
            if cli.json {
                let v = json!({"command": name, "inputs": inputs, "result": o.result, "residual": o.residual, "timing_ms": ms});
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable report"));
            } else {
                println!("{}", o.text);
            }
            ExitCode::from(if o.holds { 0 } else { 1 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions() {
        Cli::command().debug_assert();
    }

    #[test]
    fn vars_and_globals() {
        let cli = Cli::try_parse_from(["hform", "diff", "--vars", "0,5", "d[x0]", "--h0"]).unwrap();
        assert!(cli.h0);
        assert!(matches!(cli.command, Command::Diff { ref vars, .. } if vars == &[0, 5]));
        assert_eq!(cli.seed, DEFAULT_SEED);
    }

    #[test]
    fn core_errors_map_to_exit_classes() {
        assert!(matches!(Failure::from(Error::Invalid("x".into())), Failure::Usage(_)));
        assert!(matches!(Failure::from(Error::Timeout(5)), Failure::Other(_)));
    }
}
