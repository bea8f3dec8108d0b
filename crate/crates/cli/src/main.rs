//! `layercake`: solve, generate, verify and benchmark layered cake instances.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use layercake::instance::{allocation_from_json, allocation_to_json, generate};
use layercake::render::render_svg;
use layercake::{solve, Error, Instance, Protocol, Report};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "layercake",
    version,
    about = "Exact fair division of multi-layered cakes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a protocol on an instance and write the verified allocation.
    Solve {
        #[arg(long)]
        protocol: Protocol,
        #[arg(long)]
        instance: PathBuf,
        /// Allocation file; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print a seeded random instance.
    Gen {
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        layers: usize,
        #[arg(long, default_value_t = 0)]
        breakpoints: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check an allocation against an instance from scratch.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        allocation: PathBuf,
    },
    /// Query counts and timings over every admissible (n, m) up to a size.
    Bench {
        #[arg(long)]
        protocol: Protocol,
        #[arg(long)]
        max_agents: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 4)]
        breakpoints: usize,
    },
}

const PRECONDITION: u8 = 2;
const PARSE: u8 = 3;
const VERIFICATION: u8 = 4;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precondition { .. } | Error::NoIdenticalPair | Error::OddLayerCount(_) => PRECONDITION,
            Error::Parse(_) | Error::InvalidValuation(_) | Error::OutOfRange(_) | Error::Reversed { .. } => {
                PARSE
            }
            _ => VERIFICATION,
        };
        Failure::new(code, e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(VERIFICATION, format!("{}: {e}", path.display())))
}

/// Writes to stdout, ignoring a closed pipe (e.g. output piped into `head`).
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn load(path: &Path) -> Result<Instance, Failure> {
    Instance::parse(&read(path)?).map_err(Failure::from)
}

fn run_solve(
    protocol: Protocol,
    instance: &Path,
    out: Option<&Path>,
    svg: Option<&Path>,
) -> Result<(), Failure> {
    let inst = load(instance)?;
    let sol = solve(&inst, protocol)?;
    let text = allocation_to_json(&inst.names, &sol.allocation, Some(sol.report.to_value()));
    if let Some(svg) = svg {
        write(svg, &render_svg(&inst.extents, &inst.names, &sol.allocation))?;
    }
    match out {
        Some(path) => {
            write(path, &text)?;
            for a in &sol.report.agents {
                emit(&format!("{}\t{}\t{}\n", a.name, a.value, a.value_decimal));
            }
        }
        None => emit(&text),
    }
    Ok(())
}

fn run_gen(agents: usize, layers: usize, breakpoints: usize, seed: u64) -> Result<(), Failure> {
    if agents == 0 || layers == 0 {
        return Err(Failure::new(
            PRECONDITION,
            "gen needs at least one agent and one layer",
        ));
    }
    emit(&generate(agents, layers, breakpoints, seed).to_json());
    Ok(())
}

/// Flags a claimed report sets that the fresh check does not support.
fn claim_mismatches(claimed: &serde_json::Value, fresh: &serde_json::Value) -> Vec<String> {
    ["envy_free", "proportional", "feasible", "contiguous", "complete"]
        .into_iter()
        .filter(|k| claimed.get(k).is_some_and(|c| Some(c) != fresh.get(k)))
        .map(String::from)
        .collect()
}

fn run_verify(instance: &Path, allocation: &Path) -> Result<(), Failure> {
    let inst = load(instance)?;
    let (alloc, claimed) = allocation_from_json(&read(allocation)?, inst.layer_count())?;
    if alloc.agent_count() != inst.agent_count() {
        return Err(Failure::new(
            PARSE,
            format!(
                "allocation has {} bundles for {} agents",
                alloc.agent_count(),
                inst.agent_count()
            ),
        ));
    }
    let report = Report::assess(&inst, &alloc)?;
    let fresh = report.to_value();
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(&fresh).expect("report serializes")
    ));

    let mut broken: Vec<String> = Vec::new();
    let s = report.structure;
    for (ok, name) in [
        (s.complete, "complete"),
        (s.feasible, "feasible"),
        (report.proportional, "proportional"),
    ] {
        if !ok {
            broken.push(format!("not {name}"));
        }
    }
    if let Some(claimed) = claimed {
        broken.extend(
            claim_mismatches(&claimed, &fresh)
                .into_iter()
                .map(|k| format!("claimed {k} is wrong")),
        );
    }
    if broken.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(VERIFICATION, broken.join("; ")))
    }
}

/// Shapes a protocol accepts with at most `max` agents.
fn shapes(p: Protocol, max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in 1..=max {
        match p {
            Protocol::CutAndChoose if n == 2 => out.push((2, 2)),
            Protocol::MovingKnife if n == 3 => out.push((3, 2)),
            Protocol::EfPerfect | Protocol::PropMatching => out.extend((1..=n).map(|m| (n, m))),
            Protocol::PropPow2 => {
                out.extend((0..).map(|k| 1usize << k).take_while(|&m| m <= n).map(|m| (n, m)))
            }
            _ => {}
        }
    }
    out
}

#[derive(Serialize)]
struct BenchRow {
    protocol: &'static str,
    n: usize,
    m: usize,
    seed: u64,
    short_eval: u64,
    short_cut: u64,
    long_eval: u64,
    long_cut: u64,
    reveal: u64,
    micros: u128,
    ok: bool,
}

fn run_bench(
    protocol: Protocol,
    max_agents: usize,
    seed: u64,
    csv_path: &Path,
    breakpoints: usize,
) -> Result<(), Failure> {
    let rows = shapes(protocol, max_agents);
    if rows.is_empty() {
        return Err(Failure::new(
            PRECONDITION,
            format!("{protocol} has no admissible shape with at most {max_agents} agents"),
        ));
    }
    let mut w = csv::Writer::from_path(csv_path).map_err(|e| Failure::new(VERIFICATION, e))?;
    let mut failures = 0;
    for (k, (n, m)) in rows.into_iter().enumerate() {
        let row_seed = seed.wrapping_add(k as u64);
        let mut inst = generate(n, m, breakpoints, row_seed);
        if protocol == Protocol::MovingKnife {
            inst.valuations[1] = inst.valuations[0].clone();
        }
        let start = Instant::now();
        let result = solve(&inst, protocol);
        let micros = start.elapsed().as_micros();
        let q = result
            .as_ref()
            .ok()
            .and_then(|s| s.report.queries)
            .unwrap_or_default();
        if result.is_err() {
            failures += 1;
        }
        w.serialize(BenchRow {
            protocol: protocol.name(),
            n,
            m,
            seed: row_seed,
            short_eval: q.short_eval,
            short_cut: q.short_cut,
            long_eval: q.long_eval,
            long_cut: q.long_cut,
            reveal: q.reveal,
            micros,
            ok: result.is_ok(),
        })
        .map_err(|e| Failure::new(VERIFICATION, e))?;
    }
    w.flush().map_err(|e| Failure::new(VERIFICATION, e))?;
    if failures > 0 {
        return Err(Failure::new(
            VERIFICATION,
            format!("{failures} bench runs failed"),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve {
            protocol,
            instance,
            out,
            svg,
        } => run_solve(protocol, &instance, out.as_deref(), svg.as_deref()),
        Command::Gen {
            agents,
            layers,
            breakpoints,
            seed,
        } => run_gen(agents, layers, breakpoints, seed),
        Command::Verify { instance, allocation } => run_verify(&instance, &allocation),
        Command::Bench {
            protocol,
            max_agents,
            seed,
            csv,
            breakpoints,
        } => run_bench(protocol, max_agents, seed, &csv, breakpoints),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("layercake: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
