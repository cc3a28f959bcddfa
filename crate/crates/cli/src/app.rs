//! Command-line surface: argument parsing, config resolution and output.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use tlkp_core::diagrams::count_table;
use tlkp_core::schur::{cauchy_binet_coeffs, slavnov_schur_coeffs};
use tlkp_core::{Family, Field, Float, Quadratic, Rational};

use crate::config::{FieldChoice, SchemaError, SuiteConfig, CONFIG_SCHEMA, REPORT_SCHEMA};
use crate::report::table;
use crate::suite::{bethe_guesses, build_instances, chain_params, complex_params, run_suite, solve_all};

#[derive(Debug, Parser)]
#[command(name = "tlkp", version, about = "Slavnov products, KP tau functions and their identities, in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Suite configuration (JSON). Built-in defaults are used when absent.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Overrides the instance seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Overrides the field of computation.
    #[arg(long, global = true, value_parser = ["rational", "quadratic", "float"])]
    pub field: Option<String>,

    /// JSON output (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,

    /// Aligned plain-text output.
    #[arg(long, global = true)]
    pub text: bool,

    /// Writes the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Runs every check listed in the configuration.
    Verify,
    /// Compares the kernel with the quotient of the two tau functions.
    KernelVsTau,
    /// Plücker relations of both determinant families.
    Pluecker,
    /// Hirota bilinear equations on the Schur-expanded tau functions.
    Hirota,
    /// Prints the Schur coefficients of both tau functions and of the kernel.
    SchurExpand,
    /// Enumerated versus closed-form counts of admissible strict diagrams.
    CountDiagrams(CountArgs),
    /// Solves the Bethe equations from the configured guesses.
    SolveBethe,
    /// Prints the JSON schema of the configuration or of the report.
    Schema {
        #[arg(value_parser = ["config", "report"], default_value = "config")]
        which: String,
    },
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Number of rows (defaults to the configured M).
    #[arg(long)]
    pub m: Option<usize>,
    /// Largest first part (defaults to the configured value).
    #[arg(long = "lambda1-max")]
    pub lambda1_max: Option<u32>,
}

/// Rendered output and the overall verdict.
pub struct Outcome {
    pub body: String,
    pub success: bool,
}

impl Outcome {
    pub fn emit(&self, out: Option<&Path>) -> std::io::Result<()> {
        match out {
            Some(path) => std::fs::write(path, &self.body),
            None => {
                print!("{}", self.body);
                Ok(())
            }
        }
    }
}

/// Loads the configuration and applies the command-line overrides.
pub fn resolve_config(cli: &Cli) -> Result<SuiteConfig, SchemaError> {
    let mut config = match &cli.config {
        Some(path) => SuiteConfig::load(path)?,
        None => SuiteConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(f) = cli.field.as_deref().and_then(FieldChoice::parse) {
        config.field_mode = f;
    }
    Ok(config)
}

fn render_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

pub fn execute(cli: &Cli) -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut config = resolve_config(cli)?;
    let text = cli.text;
    let single = |name: &str, config: &mut SuiteConfig| config.checks = vec![name.to_string()];
    match &cli.command {
        Command::Verify => {}
        Command::KernelVsTau => single("theorem-quotient", &mut config),
        Command::Pluecker => single("pluecker", &mut config),
        Command::Hirota => single("hirota", &mut config),
        Command::SchurExpand => {
            let body = match config.field_mode {
                FieldChoice::Rational => schur_expand::<Rational>(&config, text)?,
                FieldChoice::Quadratic => schur_expand::<Quadratic>(&config, text)?,
                FieldChoice::Float => schur_expand::<Float>(&config, text)?,
            };
            return Ok(Outcome { body, success: true });
        }
        Command::CountDiagrams(args) => return Ok(count_diagrams(&config, args, text)),
        Command::SolveBethe => return solve_bethe(&config, text),
        Command::Schema { which } => {
            let body = if which == "report" { REPORT_SCHEMA } else { CONFIG_SCHEMA };
            return Ok(Outcome { body: body.to_string(), success: true });
        }
    }
    let report = run_suite(&config);
    let body = if text { report.to_text() } else { report.to_json() };
    Ok(Outcome { body, success: report.success() })
}

fn schur_expand<F: Field>(config: &SuiteConfig, text: bool) -> Result<String, Box<dyn std::error::Error>> {
    let p = chain_params::<F>(config)?;
    let inst = build_instances(config, &p).into_iter().next().ok_or("no instance configured")??;
    let k = config.schur_cutoff;
    let maps = [
        ("tau 1", cauchy_binet_coeffs(&p, Family::One, &inst.u, k)?),
        ("tau 2", cauchy_binet_coeffs(&p, Family::Two, &inst.u, k)?),
        ("kernel", slavnov_schur_coeffs(&p, &inst.u, k)?),
    ];
    let u: Vec<String> = inst.u.iter().map(|x| x.to_string()).collect();
    if text {
        let rows: Vec<[String; 3]> = maps
            .iter()
            .flat_map(|(name, m)| m.entries().map(move |(l, c)| [name.to_string(), l.to_string(), c.to_string()]))
            .collect();
        return Ok(format!("u = [{}], cutoff {k}\n", u.join(", ")) + &table(&["series", "partition", "coefficient"], &rows));
    }
    Ok(render_json(&json!({
        "u": u,
        "cutoff": k,
        "tau1": maps[0].1.to_json(),
        "tau2": maps[1].1.to_json(),
        "kernel": maps[2].1.to_json(),
    })))
}

fn count_diagrams(config: &SuiteConfig, args: &CountArgs, text: bool) -> Outcome {
    let m = args.m.unwrap_or(config.m);
    let lmax = args.lambda1_max.unwrap_or(config.lambda1_max);
    let rows = count_table(m, lmax);
    let success = rows.iter().all(|r| r.matches);
    let body = if text {
        let cells: Vec<[String; 4]> = rows
            .iter()
            .map(|r| {
                [
                    r.lambda1_max.to_string(),
                    r.enumerated.to_string(),
                    r.closed_form.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
                    if r.matches { "yes" } else { "NO" }.to_string(),
                ]
            })
            .collect();
        format!("M = {m}\n") + &table(&["λ1max", "enumerated", "closed-form", "match"], &cells)
    } else {
        render_json(&serde_json::to_value(&rows).expect("rows serialize"))
    };
    Outcome { body, success }
}

fn solve_bethe(config: &SuiteConfig, text: bool) -> Result<Outcome, Box<dyn std::error::Error>> {
    let p = complex_params(config)?;
    let guesses = bethe_guesses(config)?;
    let results = solve_all(&p, &guesses);
    let success = results.iter().any(|r| r.as_ref().is_ok_and(|s| s.converged));
    let body = if text {
        let rows: Vec<[String; 4]> = results
            .iter()
            .enumerate()
            .map(|(k, r)| match r {
                Ok(s) => [
                    k.to_string(),
                    if s.converged { "yes" } else { "no" }.into(),
                    format!("{:.3e}", s.residual),
                    s.roots.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                ],
                Err(e) => [k.to_string(), "error".into(), "-".into(), e.to_string()],
            })
            .collect();
        table(&["guess", "converged", "residue", "roots"], &rows)
    } else {
        let items: Vec<Value> = results
            .iter()
            .enumerate()
            .map(|(k, r)| match r {
                Ok(s) => json!({ "guess": k, "solution": s }),
                Err(e) => json!({ "guess": k, "error": e.to_string() }),
            })
            .collect();
        render_json(&Value::Array(items))
    };
    Ok(Outcome { body, success })
}
