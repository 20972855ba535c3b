//! Command-line front end: generate instances, solve them, validate and
//! convert schedules, and compare solvers against the oracle.

mod compare;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use fjsched::gen::{generate, CostMode, GenParams};
use fjsched::io::{self, parse_rational, ReportDoc};
use fjsched::model::{makespan, validate, Schedule, TaskRef};
use fjsched::rtd::forkjoin_to_rtd;
use fjsched::{Algorithm, Error, ForkJoinInstance, Rational, SolveOptions};
use log::info;
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(
    name = "fjsched",
    version,
    about = "Fork-join scheduling on related processors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance.
    Generate(GenerateArgs),
    /// Solve an instance and write a report.
    Solve(SolveArgs),
    /// Check a schedule or report against an instance.
    Validate(ValidateArgs),
    /// Write the release/deadline image of an instance for a makespan bound.
    Convert(ConvertArgs),
    /// Run several solvers on several instances and write a CSV table.
    Compare(CompareArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 5)]
    tasks: usize,
    #[arg(long, default_value_t = 2)]
    procs: usize,
    /// Comma-separated speed set to draw from.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    speeds: Vec<u32>,
    #[arg(long, value_parser = parse_cost_mode, default_value = "equal")]
    cost_mode: CostMode,
    /// Inclusive cost range, `lo..hi`.
    #[arg(long, value_parser = parse_range, default_value = "1..6")]
    cost: (u32, u32),
    #[arg(long, value_parser = parse_range, default_value = "0..6")]
    gin: (u32, u32),
    #[arg(long, value_parser = parse_range, default_value = "0..6")]
    gout: (u32, u32),
    /// One incoming communication shared by all branch tasks.
    #[arg(long)]
    equal_gin: bool,
    /// Split the processors into this many groups.
    #[arg(long)]
    groups: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long, value_parser = parse_exact, default_value = "1/3")]
    epsilon: Rational,
    /// Solver caps as `key=value`: max_tasks, max_states, max_configs,
    /// max_nodes, max_probes.
    #[arg(long, value_delimiter = ',')]
    limits: Vec<String>,
}

impl SolverArgs {
    fn options(&self) -> anyhow::Result<SolveOptions<Rational>> {
        let mut opts = SolveOptions::<Rational> {
            epsilon: self.epsilon.clone(),
            ..SolveOptions::default()
        };
        for entry in &self.limits {
            let (key, value) = entry
                .split_once('=')
                .ok_or_else(|| anyhow!("limit {entry:?} is not of the form key=value"))?;
            let value: u64 = value
                .trim()
                .parse()
                .with_context(|| format!("limit {key}"))?;
            match key.trim() {
                "max_tasks" => opts.oracle.max_tasks = value as usize,
                "max_states" => opts.oracle.max_states = value,
                "max_configs" => opts.epas.max_configs = value as usize,
                "max_nodes" => opts.epas.max_nodes = value,
                "max_probes" => opts.epas.max_probes = value as usize,
                other => bail!("unknown limit {other:?}"),
            }
        }
        Ok(opts)
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_parser = parse_algorithm)]
    algorithm: Algorithm,
    #[command(flatten)]
    solver: SolverArgs,
    /// Report path; standard output if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    instance: PathBuf,
    /// A schedule file or a solve report.
    schedule: PathBuf,
}

#[derive(Args)]
struct ConvertArgs {
    instance: PathBuf,
    /// Makespan bound.
    #[arg(long = "t-max", value_parser = parse_exact)]
    t_max: Rational,
    #[arg(long)]
    src: usize,
    #[arg(long)]
    sink: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    instances: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm, default_value = "bipartite,q2,qinf,partial-equal,grouped,epas")]
    algorithms: Vec<Algorithm>,
    /// Skip the oracle; gap and certificate columns stay empty.
    #[arg(long)]
    no_oracle: bool,
    /// Write 0 in the time column so that output is reproducible.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    Algorithm::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
        format!(
            "unknown algorithm {s:?}; expected one of {}",
            names.join(", ")
        )
    })
}

fn parse_exact(s: &str) -> Result<Rational, String> {
    parse_rational(s)
}

fn parse_cost_mode(s: &str) -> Result<CostMode, String> {
    match s {
        "equal" => Ok(CostMode::Equal),
        "random" => Ok(CostMode::Random),
        _ => Err(format!("unknown cost mode {s:?}; expected equal or random")),
    }
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("range {s:?} is not of the form lo..hi"))?;
    let lo = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    Ok((lo, hi))
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub(crate) fn load_instance(path: &Path) -> anyhow::Result<ForkJoinInstance> {
    io::parse_instance(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// SHA-256 of the instance's normalized serialization.
pub(crate) fn instance_hash(inst: &ForkJoinInstance) -> String {
    hex::encode(Sha256::digest(io::serialize_instance(inst).as_bytes()))
}

fn cmd_generate(a: GenerateArgs) -> anyhow::Result<()> {
    let params = GenParams {
        n_tasks: a.tasks,
        n_procs: a.procs,
        speed_set: a.speeds,
        cost_mode: a.cost_mode,
        cost_range: a.cost,
        gin_range: a.gin,
        gout_range: a.gout,
        equal_gin: a.equal_gin,
        groups: a.groups,
        seed: a.seed,
    };
    let inst = generate(&params)?;
    write_out(a.output.as_deref(), &io::serialize_instance(&inst))
}

fn cmd_solve(a: SolveArgs) -> anyhow::Result<()> {
    let inst = load_instance(&a.instance)?;
    let opts = a.solver.options()?;
    let started = Instant::now();
    let report = fjsched::solve(&inst, a.algorithm, &opts)?;
    let elapsed = started.elapsed();
    info!("{} finished in {:?}", a.algorithm, elapsed);
    let mut doc = ReportDoc::new(&inst, &report);
    doc.instance_hash = Some(instance_hash(&inst));
    write_out(a.output.as_deref(), &doc.to_json())?;

    // human summary; wall time only appears here so report files stay reproducible
    let mut table = String::new();
    table.push_str(&format!("algorithm   {}\n", report.algorithm));
    table.push_str(&format!(
        "makespan    {} (~{:.6})\n",
        io::format_rational(&report.makespan),
        doc.makespan_float
    ));
    let bound = report
        .guarantee
        .bound()
        .map(io::format_rational)
        .unwrap_or_default();
    table.push_str(&format!(
        "guarantee   {} {}\n",
        report.guarantee.kind(),
        bound
    ));
    table.push_str(&format!(
        "wall time   {:.3} ms\n",
        elapsed.as_secs_f64() * 1e3
    ));
    table.push_str("task        proc  start\n");
    for (j, t) in inst.tasks.iter().enumerate() {
        table.push_str(&format!(
            "{:<11} {:<5} {}\n",
            t.id,
            report.schedule.assignment[j],
            io::format_rational(&report.schedule.starts[j])
        ));
    }
    if a.output.is_some() {
        print!("{table}");
    } else {
        eprint!("{table}");
    }
    Ok(())
}

/// Returns whether the schedule is valid.
fn cmd_validate(a: ValidateArgs) -> anyhow::Result<bool> {
    let inst = load_instance(&a.instance)?;
    let text = read(&a.schedule)?;
    let (placement, timing) = match ReportDoc::parse(&text) {
        Ok(doc) => (doc.schedule.to_placement(&inst)?, Some(doc)),
        Err(_) => (io::parse_schedule(&inst, &text)?, None),
    };
    let canonical = fjsched::canonicalize(&inst, &placement)?;
    let mut problems: Vec<String> = Vec::new();
    let sched = match &timing {
        None => canonical,
        Some(doc) => {
            let start = |name: &str| -> anyhow::Result<Rational> {
                doc.start_times
                    .get(name)
                    .map(|e| e.0.clone())
                    .ok_or_else(|| anyhow!("report lacks a start time for {name:?}"))
            };
            let starts = inst
                .tasks
                .iter()
                .map(|t| start(&t.id))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let sched = Schedule {
                starts,
                source_start: start("<source>")?,
                sink_start: start("<sink>")?,
                ..canonical
            };
            let recomputed = makespan(&inst, &sched);
            if recomputed != doc.makespan.0 {
                problems.push(format!(
                    "reported makespan {} but the schedule takes {}",
                    io::format_rational(&doc.makespan.0),
                    io::format_rational(&recomputed)
                ));
            }
            sched
        }
    };
    let name = |t: TaskRef| match t {
        TaskRef::Branch(j) => format!("task {:?}", inst.tasks[j].id),
        other => other.to_string(),
    };
    for v in validate(&inst, &sched) {
        let line = match v {
            fjsched::Violation::Overlap {
                proc,
                first,
                second,
            } => {
                format!(
                    "overlap on processor {proc}: {} and {}",
                    name(first),
                    name(second)
                )
            }
            other => other.to_string(),
        };
        problems.push(line);
    }
    if problems.is_empty() {
        println!(
            "valid: makespan {}",
            io::format_rational(&makespan(&inst, &sched))
        );
        Ok(true)
    } else {
        for p in &problems {
            println!("violation: {p}");
        }
        Ok(false)
    }
}

fn cmd_convert(a: ConvertArgs) -> anyhow::Result<()> {
    let inst = load_instance(&a.instance)?;
    let rtd = forkjoin_to_rtd(&inst, &a.t_max, a.src, a.sink)?;
    write_out(a.output.as_deref(), &io::serialize_rtd(&rtd))
}

/// Exit status for a failure: 2 for unmet preconditions, 3 for exceeded caps.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Precondition(_)) => 2,
        Some(Error::LimitExceeded(_)) => 3,
        _ => 1,
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a).map(|_| true),
        Command::Solve(a) => cmd_solve(a).map(|_| true),
        Command::Validate(a) => cmd_validate(a),
        Command::Convert(a) => cmd_convert(a).map(|_| true),
        Command::Compare(a) => a
            .solver
            .options()
            .and_then(|opts| {
                compare::run(
                    &a.instances,
                    &a.algorithms,
                    a.no_oracle,
                    a.no_timing,
                    &opts,
                    a.output.as_deref(),
                )
            })
            .map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
