// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Command-line front end: solve, verify, run the exact oracle, report
//! lower bounds, generate benchmark instances and run stretch experiments.
//!
//! Exit status is 0 on success, 1 for invalid input (including a schedule
//! that fails verification) and 2 when an oracle budget is exceeded.

pub mod schema;

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use ptswap::bench::{
    complete_graph_rotation, complete_graph_rotation_schedule, generate, random_labeling,
    rows_to_csv, stretch_experiment, Family, FamilyKind, StretchSpec,
};
use ptswap::colored::bottleneck_d_star;
use ptswap::cycle::winding_lower_bound;
use ptswap::oracle::{exact_opt, OracleLimits};
use ptswap::{
    d_max_lower_bound, solve, verify, Algorithm, DispatchError, Instance, OracleError, Topology,
};

use schema::{
    instance_to_doc, parse_instance, parse_schedule, schedule_to_doc, ErrorBody, ErrorDoc,
    LowerBoundDoc, OracleDoc, PhaseDoc, SolveDoc, VerifyDoc,
};

pub const ENV_MAX_STATES: &str = "PTSWAP_ORACLE_MAX_STATES";
pub const ENV_MAX_VERTICES: &str = "PTSWAP_ORACLE_MAX_VERTICES";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Capacity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Capacity(_) => 2,
        }
    }

    fn body(&self) -> ErrorBody {
        let kind = match self {
            CliError::Invalid(_) => "invalid_input",
            CliError::Capacity(_) => "capacity",
        };
        ErrorBody {
            kind,
            message: self.to_string(),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Capacity(m) => CliError::Capacity(m),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<DispatchError> for CliError {
    fn from(e: DispatchError) -> Self {
        match e {
            DispatchError::Oracle(o) => o.into(),
            DispatchError::Solve(s) => CliError::Invalid(s.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ptswap", version, about = "Parallel token swapping solvers and tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct LimitArgs {
    /// Largest graph the exact oracle accepts [env: PTSWAP_ORACLE_MAX_VERTICES]
    #[arg(long)]
    pub max_vertices: Option<usize>,
    /// Largest number of states the exact oracle may visit [env: PTSWAP_ORACLE_MAX_STATES]
    #[arg(long)]
    pub max_states: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    CycleRotation,
    LineShift,
    StarCenter,
    GridRandom,
    CompleteRotation,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StretchFamily {
    CycleRotation,
    LineShift,
    StarCenter,
    GridRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one or more instance files ("-" reads standard input).
    Solve {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "auto", value_parser = parse_algorithm)]
        algorithm: Algorithm,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check a schedule against an instance.
    Verify {
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Exact optimum and an optimal schedule by breadth-first search.
    Oracle {
        instance: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Lower bounds on the optimum.
    Lowerbound { instance: PathBuf },
    /// Emit a benchmark instance (or, with --schedule, the known two-step
    /// schedule of a complete-graph rotation).
    Generate {
        #[arg(value_enum)]
        family: GenFamily,
        /// Size parameter: vertices for cycles and complete graphs, half
        /// the length for line shifts, leaves for star centers.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Graph file for the random family (an instance document whose
        /// tokens are ignored).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Attach a random balanced labeling with this many colors.
        #[arg(long)]
        colors: Option<u32>,
        /// Number vertices and tokens from 1.
        #[arg(long)]
        one_based: bool,
        /// Emit the two-step schedule instead of the instance
        /// (complete-rotation only).
        #[arg(long)]
        schedule: bool,
    },
    /// Ratio table of optimum, solver length and distance bound.
    Stretch {
        #[arg(long, value_enum)]
        family: StretchFamily,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        /// Row count for grid families.
        #[arg(long, default_value_t = 2)]
        rows: usize,
        #[arg(long, default_value = "auto", value_parser = parse_algorithm)]
        algorithm: Algorithm,
        /// Skip the exact oracle columns.
        #[arg(long)]
        no_oracle: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn failed(err: &CliError) -> Self {
        Outcome {
            code: err.exit_code(),
            stdout: String::new(),
            stderr: json(&ErrorDoc { error: err.body() }),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Invalid(format!("standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn load(path: &Path) -> Result<schema::Parsed, CliError> {
    let text = read_input(path)?;
    parse_instance(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn env_usize(name: &str) -> Result<Option<usize>, CliError> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Invalid(format!("{name}: expected a non-negative integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Oracle caps: flags first, then the environment, then the defaults.
pub fn resolve_limits(args: &LimitArgs) -> Result<OracleLimits, CliError> {
    let mut limits = OracleLimits::default();
    if let Some(v) = args.max_vertices.or(env_usize(ENV_MAX_VERTICES)?) {
        limits.max_vertices = v;
    }
    if let Some(v) = args.max_states.or(env_usize(ENV_MAX_STATES)?) {
        limits.max_states = v;
    }
    Ok(limits)
}

fn solve_one(path: &Path, algorithm: Algorithm, limits: &OracleLimits) -> Result<SolveDoc, CliError> {
    let parsed = load(path)?;
    let inst = &parsed.instance;
    let report = solve(inst, algorithm, limits)?;
    let valid = verify(inst, &report.schedule).valid;
    Ok(SolveDoc {
        algorithm: report.algorithm,
        length: report.length,
        d_max: report.d_max,
        extra_lower_bounds: report.extra_lower_bounds,
        ratio_to_dmax: report.ratio_to_dmax.map(|r| r.to_string()),
        phases: report
            .phases
            .into_iter()
            .map(|(name, length)| PhaseDoc { name, length })
            .collect(),
        valid,
        schedule: schedule_to_doc(&report.schedule, parsed.base),
    })
}

#[derive(Serialize)]
struct BatchEntry {
    input: String,
    #[serde(flatten)]
    body: BatchBody,
}

#[derive(Serialize)]
#[serde(untagged)]
enum BatchBody {
    Report(SolveDoc),
    Failed { error: ErrorBody },
}

fn cmd_solve(inputs: &[PathBuf], algorithm: Algorithm, limits: &LimitArgs) -> Outcome {
    let limits = match resolve_limits(limits) {
        Ok(l) => l,
        Err(e) => return Outcome::failed(&e),
    };
    if let [single] = inputs {
        return match solve_one(single, algorithm, &limits) {
            Ok(doc) => Outcome::ok(json(&doc)),
            Err(e) => Outcome::failed(&e),
        };
    }
    let results: Vec<Result<SolveDoc, CliError>> = inputs
        .par_iter()
        .map(|p| solve_one(p, algorithm, &limits))
        .collect();
    let code = results
        .iter()
        .map(|r| r.as_ref().err().map_or(0, CliError::exit_code))
        .max()
        .unwrap_or(0);
    let entries: Vec<BatchEntry> = inputs
        .iter()
        .zip(results)
        .map(|(p, r)| BatchEntry {
            input: p.display().to_string(),
            body: match r {
                Ok(doc) => BatchBody::Report(doc),
                Err(e) => BatchBody::Failed { error: e.body() },
            },
        })
        .collect();
    Outcome {
        code,
        stdout: json(&entries),
        stderr: String::new(),
    }
}

fn cmd_verify(instance: &Path, schedule: &Path) -> Result<Outcome, CliError> {
    let parsed = load(instance)?;
    let inst = &parsed.instance;
    let text = read_input(schedule)?;
    let s = parse_schedule(&text, parsed.base, inst.vertex_count())
        .map_err(|e| CliError::Invalid(format!("{}: {e}", schedule.display())))?;
    let report = verify(inst, &s);
    let doc = VerifyDoc {
        valid: report.valid,
        length: s.len(),
        final_tokens: report.final_config.tokens().iter().map(|&t| t + parsed.base).collect(),
        violations: report.violations,
    };
    Ok(Outcome {
        code: if doc.valid { 0 } else { 1 },
        stdout: json(&doc),
        stderr: String::new(),
    })
}

fn cmd_oracle(instance: &Path, limits: &LimitArgs) -> Result<Outcome, CliError> {
    let limits = resolve_limits(limits)?;
    let parsed = load(instance)?;
    let (opt, witness) = exact_opt(&parsed.instance, &limits)?;
    Ok(Outcome::ok(json(&OracleDoc {
        opt,
        d_max: d_max_lower_bound(&parsed.instance),
        witness: schedule_to_doc(&witness, parsed.base),
    })))
}

fn cmd_lowerbound(instance: &Path) -> Result<Outcome, CliError> {
    let parsed = load(instance)?;
    let inst = &parsed.instance;
    let winding = match (inst.graph.topology(), &inst.labeling) {
        (Topology::Cycle { .. }, None) => {
            Some(winding_lower_bound(inst).map_err(|e| CliError::Invalid(e.to_string()))?)
        }
        _ => None,
    };
    let d_star = match inst.labeling {
        Some(_) => Some(
            bottleneck_d_star(inst)
                .map_err(|e| CliError::Invalid(e.to_string()))?
                .0,
        ),
        None => None,
    };
    Ok(Outcome::ok(json(&LowerBoundDoc {
        d_max: d_max_lower_bound(inst),
        winding,
        d_star,
    })))
}

fn required(v: Option<usize>, flag: &str, family: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::Invalid(format!("--{flag} is required for {family}")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    family: GenFamily,
    n: Option<usize>,
    rows: Option<usize>,
    cols: Option<usize>,
    seed: u64,
    graph: Option<&Path>,
    colors: Option<u32>,
    one_based: bool,
    schedule: bool,
) -> Result<Outcome, CliError> {
    let model = |e: ptswap::ModelError| CliError::Invalid(e.to_string());
    let base = usize::from(one_based);
    if schedule {
        if family != GenFamily::CompleteRotation {
            return Err(CliError::Invalid("--schedule is only available for complete-rotation".into()));
        }
        let n = required(n, "n", "complete-rotation")?;
        if n % 2 != 0 {
            return Err(CliError::Invalid(format!("--n must be even for complete-rotation, got {n}")));
        }
        let s = complete_graph_rotation_schedule(n / 2).map_err(model)?;
        return Ok(Outcome::ok(json(&schedule_to_doc(&s, base))));
    }
    let inst: Instance = match family {
        GenFamily::CycleRotation => generate(&Family::CycleRotation {
            n: required(n, "n", "cycle-rotation")?,
        }),
        GenFamily::LineShift => generate(&Family::LineShift {
            n: required(n, "n", "line-shift")?,
        }),
        GenFamily::StarCenter => generate(&Family::StarCenter {
            n: required(n, "n", "star-center")?,
        }),
        GenFamily::GridRandom => generate(&Family::GridRandom {
            rows: required(rows, "rows", "grid-random")?,
            cols: required(cols, "cols", "grid-random")?,
            seed,
        }),
        GenFamily::CompleteRotation => {
            let n = required(n, "n", "complete-rotation")?;
            if n % 2 != 0 {
                return Err(CliError::Invalid(format!("--n must be even for complete-rotation, got {n}")));
            }
            complete_graph_rotation(n / 2)
        }
        GenFamily::Random => {
            let path = graph.ok_or_else(|| CliError::Invalid("--graph is required for random".into()))?;
            let g = load(path)?.instance.graph;
            generate(&Family::Random { graph: g, seed })
        }
    }
    .map_err(model)?;
    let inst = match colors {
        Some(k) => {
            let lab = random_labeling(inst.vertex_count(), k, seed);
            Instance::with_labeling(inst.graph, inst.initial, lab).map_err(model)?
        }
        None => inst,
    };
    Ok(Outcome::ok(json(&instance_to_doc(&inst, base))))
}

#[allow(clippy::too_many_arguments)]
fn cmd_stretch(
    family: StretchFamily,
    sizes: Vec<usize>,
    seeds: Vec<u64>,
    rows: usize,
    algorithm: Algorithm,
    no_oracle: bool,
    format: TableFormat,
    limits: &LimitArgs,
) -> Result<Outcome, CliError> {
    let spec = StretchSpec {
        family: match family {
            StretchFamily::CycleRotation => FamilyKind::CycleRotation,
            StretchFamily::LineShift => FamilyKind::LineShift,
            StretchFamily::StarCenter => FamilyKind::StarCenter,
            StretchFamily::GridRandom => FamilyKind::GridRandom { rows },
        },
        sizes,
        seeds,
        algorithm,
        oracle: !no_oracle,
        limits: resolve_limits(limits)?,
    };
    let rows = stretch_experiment(&spec);
    let out = match format {
        TableFormat::Csv => rows_to_csv(&rows),
        TableFormat::Json => json(&rows),
    };
    let code = if rows.iter().any(|r| r.capacity_exceeded) { 2 } else { 0 };
    Ok(Outcome {
        code,
        stdout: out,
        stderr: String::new(),
    })
}

/// Runs one parsed command.
pub fn execute(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Solve {
            inputs,
            algorithm,
            limits,
        } => return cmd_solve(&inputs, algorithm, &limits),
        Command::Verify { instance, schedule } => cmd_verify(&instance, &schedule),
        Command::Oracle { instance, limits } => cmd_oracle(&instance, &limits),
        Command::Lowerbound { instance } => cmd_lowerbound(&instance),
        Command::Generate {
            family,
            n,
            rows,
            cols,
            seed,
            graph,
            colors,
            one_based,
            schedule,
        } => cmd_generate(family, n, rows, cols, seed, graph.as_deref(), colors, one_based, schedule),
        Command::Stretch {
            family,
            sizes,
            seeds,
            rows,
            algorithm,
            no_oracle,
            format,
            limits,
        } => cmd_stretch(family, sizes, seeds, rows, algorithm, no_oracle, format, &limits),
    };
    result.unwrap_or_else(|e| Outcome::failed(&e))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}
