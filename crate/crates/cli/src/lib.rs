//! The `kpool` command line: model checking, updates, planning and the
//! schema lab.
//!
//! [`run`] takes the arguments and two writers and returns the exit code, so
//! tests can drive the dispatcher without spawning a process. Exit codes are
//! 0 for success or a true formula, 1 for a false formula, a missing plan or
//! a failed suite, and 2 for usage, parse and validation errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use kpool_core::kripke::{load, save};
use kpool_core::norms::plan;
use kpool_core::semantics::{check as check_formula, extension, Check, Witness};
use kpool_core::update::apply_named;
use kpool_core::{builtin, parse, Agent, Model, StateSet};
use kpool_lab::{check_named, run_golden, run_full_suite, GenConfig, Registry, Status};

#[derive(Parser, Debug)]
#[command(name = "kpool", version, about = "Knowledge pooling model checker")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a formula at a state; exits 0 if true and 1 if false.
    Check {
        /// Model file, or the name of a built-in model.
        #[arg(long)]
        model: String,
        #[arg(long)]
        formula: String,
        /// Defaults to the model's point.
        #[arg(long)]
        state: Option<String>,
    },
    /// Apply a sequence of shares at the model's point and save the result.
    Update {
        #[arg(long)]
        model: String,
        /// Comma-separated steps such as `a>b,b>c`.
        #[arg(long)]
        share: String,
        #[arg(long)]
        out: PathBuf,
        /// Apply the shares at this state instead of the point.
        #[arg(long)]
        state: Option<String>,
    },
    /// Search for a shortest sequence of shares after which the goal holds.
    Plan {
        #[arg(long)]
        model: String,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 4)]
        max: usize,
        /// Ignore permissibility.
        #[arg(long)]
        free: bool,
    },
    /// Check a schema, or every schema, on small and random models.
    Lab {
        /// Schema name, or `all`.
        #[arg(long)]
        schema: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Largest random model.
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Check the known facts about the built-in models and the whole schema
    /// library.
    Examples {
        /// Skip the schema library.
        #[arg(long)]
        golden_only: bool,
    },
    /// Load a model file and report whether it is well formed.
    Validate {
        #[arg(long)]
        model: String,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", one_line(&e));
            2
        }
    }
}

fn one_line(e: &anyhow::Error) -> String {
    format!("{e:#}").replace('\n', " ")
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Check { model, formula, state } => cmd_check(&model, &formula, state.as_deref(), out),
        Command::Update {
            model,
            share,
            out: path,
            state,
        } => cmd_update(&model, &share, &path, state.as_deref(), out),
        Command::Plan { model, goal, max, free } => cmd_plan(&model, &goal, max, free, out),
        Command::Lab {
            schema,
            seed,
            samples,
            max_states,
        } => cmd_lab(&schema, seed, samples, max_states, out),
        Command::Examples { golden_only } => cmd_examples(golden_only, out),
        Command::Validate { model } => cmd_validate(&model, out),
    }
}

/// Reads a model file; a name that is not a file but names a built-in model
/// loads that model.
pub fn load_model(name: &str) -> Result<Model> {
    let path = Path::new(name);
    if !path.exists() {
        if let Some(m) = builtin::by_name(name) {
            return Ok(m);
        }
    }
    let bytes = std::fs::read(path).with_context(|| format!("cannot read `{name}`"))?;
    load(&bytes).with_context(|| format!("invalid model `{name}`"))
}

fn set_names(m: &Model, set: StateSet) -> String {
    let names: Vec<&str> = set.iter().map(|s| m.state_name(s)).collect();
    format!("{{{}}}", names.join(","))
}

fn witness_line(m: &Model, c: &Check) -> Option<String> {
    let mut parts = Vec::new();
    let (mut model, mut check) = (m, c);
    loop {
        match &check.witness {
            None => break,
            Some(Witness::State { state }) => {
                parts.push(format!("state={}", model.state_name(*state)));
                break;
            }
            Some(Witness::Update { model: next, inner }) => {
                parts.push("update".to_string());
                model = next;
                check = inner;
            }
        }
    }
    (!parts.is_empty()).then(|| format!("witness {}", parts.join(" -> ")))
}

fn cmd_check(model: &str, formula: &str, state: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    let m = load_model(model)?;
    let f = parse(formula).with_context(|| format!("cannot parse `{formula}`"))?;
    let c = check_formula(&m, &f, state)?;
    writeln!(out, "{}", c.holds)?;
    writeln!(out, "extension={}", set_names(&m, extension(&m, &f)?))?;
    if let Some(line) = witness_line(&m, &c) {
        writeln!(out, "{line}")?;
    }
    Ok(if c.holds { 0 } else { 1 })
}

/// `a>b,c>d` into ordered pairs.
pub fn parse_steps(text: &str) -> Result<Vec<(Agent, Agent)>> {
    text.split(',')
        .map(|step| {
            let (a, b) = step
                .trim()
                .split_once('>')
                .ok_or_else(|| anyhow!("share step `{step}` is not of the form sender>receiver"))?;
            let agent = |s: &str| Agent::new(s.trim()).map_err(|e| anyhow!("{e}"));
            Ok((agent(a)?, agent(b)?))
        })
        .collect()
}

fn cmd_update(model: &str, share: &str, path: &Path, state: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    let m = load_model(model)?;
    let steps = parse_steps(share)?;
    let updated = apply_named(&m, state, &steps)?;
    std::fs::write(path, save(&updated) + "\n").with_context(|| format!("cannot write `{}`", path.display()))?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(0)
}

fn cmd_plan(model: &str, goal: &str, max: usize, free: bool, out: &mut dyn Write) -> Result<i32> {
    let m = load_model(model)?;
    let goal = parse(goal).with_context(|| format!("cannot parse `{goal}`"))?;
    if !free && !m.is_deontic() {
        bail!("model `{model}` has no ideal relation; pass --free to plan without permissions");
    }
    let Some(p) = plan(&m, &goal, max, !free)? else {
        writeln!(out, "no plan")?;
        return Ok(1);
    };
    for (i, ((a, b), verdict)) in p.steps.iter().zip(&p.verdicts).enumerate() {
        let verdict = verdict.map_or("unknown".to_string(), |v| v.to_string());
        writeln!(out, "{}: {a} > {b}  permissible={verdict}", i + 1)?;
    }
    writeln!(out, "goal={} achieved={}", p.goal, p.achieved)?;
    Ok(0)
}

fn cmd_lab(
    schema: &str,
    seed: Option<u64>,
    samples: Option<usize>,
    max_states: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32> {
    let defaults = GenConfig::default();
    let random = GenConfig {
        seed: seed.unwrap_or(defaults.seed),
        samples: samples.unwrap_or(defaults.samples),
        max_states: max_states.unwrap_or(defaults.max_states),
        ..defaults
    };
    if random.max_states == 0 || random.max_states > 128 {
        bail!("--max-states must be between 1 and 128");
    }
    let registry = Registry::standard();
    let names: Vec<String> = match schema {
        "all" => registry.names().into_iter().map(str::to_string).collect(),
        name => vec![name.to_string()],
    };
    let mut ok = true;
    for name in &names {
        let report = check_named(&registry, name, &random)?;
        ok &= report.status() != Status::Fail;
        write!(out, "{}", report.render())?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_examples(golden_only: bool, out: &mut dyn Write) -> Result<i32> {
    if golden_only {
        let results = run_golden();
        for r in &results {
            writeln!(out, "{}", r.render())?;
        }
        let passed = results.iter().filter(|r| r.passed()).count();
        writeln!(out, "SUMMARY golden={passed}/{}", results.len())?;
        return Ok(if passed == results.len() { 0 } else { 1 });
    }
    let suite = run_full_suite();
    write!(out, "{}", suite.render())?;
    Ok(if suite.success() { 0 } else { 1 })
}

fn cmd_validate(model: &str, out: &mut dyn Write) -> Result<i32> {
    let m = load_model(model)?;
    m.validate().with_context(|| format!("invalid model `{model}`"))?;
    writeln!(
        out,
        "valid states={} agents={} atoms={} deontic={} point={}",
        m.num_states(),
        m.agents().len(),
        m.atoms().len(),
        m.is_deontic(),
        m.point().map_or("none", |w| m.state_name(w))
    )?;
    Ok(0)
}
