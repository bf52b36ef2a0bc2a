//! Command-line front end for the ap3 solvers.

mod bench;
mod report;

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ap3::{
    brute_force, generate_am, generate_am_parallel, solve_ambs_with, solve_pure_bs_with,
    solve_sampling_only_with, write_solution, Ap3Instance, PipelineOptions, SolveResult,
    DEFAULT_BEAM_WIDTH, DEFAULT_SAMPLES, MAX_EXACT_N,
};

#[derive(Parser)]
#[command(
    name = "ap3",
    about = "Axial three-index assignment: solvers and benchmark harness",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// Sampling phase plus beam search over the approximate muscle.
    Ambs,
    /// Pure beam search over the full triple set (sampling only for the
    /// upper bound).
    Beam,
    /// Multi-restart local search only.
    Sample,
    /// Exhaustive enumeration (small instances only).
    Oracle,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Ambs => "ambs",
            Algorithm::Beam => "beam",
            Algorithm::Sample => "sample",
            Algorithm::Oracle => "oracle",
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance with integer costs drawn uniformly from
    /// [lo, hi].
    Gen {
        /// Problem size (>= 1).
        #[arg(short, long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        lo: i64,
        #[arg(long, default_value_t = 100)]
        hi: i64,
        /// Generator seed; same seed, same file.
        #[arg(long, env = "AP3_SEED", default_value_t = 0)]
        seed: u64,
        /// Output instance file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Solve an instance file and print the solution with phase statistics.
    Solve {
        instance: PathBuf,
        #[arg(long = "algo", value_enum, default_value_t = Algorithm::Ambs)]
        algorithm: Algorithm,
        /// Sampling restarts (ambs, beam, sample).
        #[arg(short, long, default_value_t = DEFAULT_SAMPLES)]
        k: usize,
        /// Beam width (ambs, beam).
        #[arg(short, long, default_value_t = DEFAULT_BEAM_WIDTH)]
        width: usize,
        #[arg(long, env = "AP3_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Also write the solution in the plain-text solution format.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Run sampling restarts in parallel (results are unchanged).
        #[arg(long)]
        parallel: bool,
    },
    /// Run the sampling phase and dump the resulting muscle.
    Sample {
        instance: PathBuf,
        #[arg(short, long, default_value_t = DEFAULT_SAMPLES)]
        k: usize,
        #[arg(long, env = "AP3_SEED", default_value_t = 0)]
        seed: u64,
        /// Muscle dump file (stdout when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
    },
    /// Check a solution file against its instance: feasibility, recorded
    /// cost, and (small instances) distance from the optimum.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
    },
    /// Run a benchmark suite and write a CSV of cost/time aggregates.
    Bench {
        /// Suite file: one `gen ...` or `file ...` job per line.
        suite: PathBuf,
        /// Repetitions per job, with per-repetition derived seeds.
        #[arg(short, long, default_value_t = 10)]
        reps: usize,
        #[arg(long, env = "AP3_SEED", default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(short, long)]
        out: PathBuf,
        /// Run jobs concurrently (rows keep suite order and values).
        #[arg(long)]
        parallel: bool,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen {
            n,
            lo,
            hi,
            seed,
            out,
        } => cmd_gen(n as usize, lo, hi, seed, &out),
        Command::Solve {
            instance,
            algorithm,
            k,
            width,
            seed,
            format,
            out,
            parallel,
        } => cmd_solve(&instance, algorithm, k, width, seed, format, out.as_deref(), parallel),
        Command::Sample {
            instance,
            k,
            seed,
            out,
            parallel,
        } => cmd_sample(&instance, k, seed, out.as_deref(), parallel),
        Command::Verify { instance, solution } => cmd_verify(&instance, &solution),
        Command::Bench {
            suite,
            reps,
            seed,
            out,
            parallel,
        } => bench::cmd_bench(&suite, reps, seed, &out, parallel),
    }
}

fn read_instance(path: &std::path::Path) -> Result<Ap3Instance> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ap3Instance::read_from(BufReader::new(file))
        .with_context(|| format!("cannot parse instance {}", path.display()))
}

fn cmd_gen(n: usize, lo: i64, hi: i64, seed: u64, out: &std::path::Path) -> Result<()> {
    let inst = Ap3Instance::random(n, lo, hi, seed)?;
    let file = File::create(out).with_context(|| format!("cannot create {}", out.display()))?;
    inst.write_to(BufWriter::new(file))?;
    eprintln!(
        "wrote n={n} instance ({} entries, costs in [{lo}, {hi}], seed {seed}) to {}",
        n * n * n,
        out.display()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    instance_path: &std::path::Path,
    algorithm: Algorithm,
    k: usize,
    width: usize,
    seed: u64,
    format: OutputFormat,
    out: Option<&std::path::Path>,
    parallel: bool,
) -> Result<()> {
    let inst = read_instance(instance_path)?;
    let result = run_algorithm(&inst, algorithm, k, width, seed, parallel)?;

    let report = report::SolveReport::build(
        algorithm.name(),
        &instance_path.display().to_string(),
        inst.n(),
        &result,
    );
    match format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        OutputFormat::Text => print!("{}", report.render_text()),
    }

    if let Some(path) = out {
        let file =
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        write_solution(&result.assignment, result.cost, BufWriter::new(file))?;
        eprintln!("solution written to {}", path.display());
    }
    Ok(())
}

fn run_algorithm(
    inst: &Ap3Instance,
    algorithm: Algorithm,
    k: usize,
    width: usize,
    seed: u64,
    parallel: bool,
) -> Result<SolveResult> {
    if k == 0 && algorithm != Algorithm::Oracle {
        bail!("k must be at least 1");
    }
    if width == 0 && matches!(algorithm, Algorithm::Ambs | Algorithm::Beam) {
        bail!("width must be at least 1");
    }
    let opts = PipelineOptions {
        parallel_sampling: parallel,
    };
    Ok(match algorithm {
        Algorithm::Ambs => solve_ambs_with(inst, k, width, seed, &opts),
        Algorithm::Beam => solve_pure_bs_with(inst, k, width, seed, &opts),
        Algorithm::Sample => solve_sampling_only_with(inst, k, seed, &opts),
        Algorithm::Oracle => brute_force(inst)?,
    })
}

fn cmd_sample(
    instance_path: &std::path::Path,
    k: usize,
    seed: u64,
    out: Option<&std::path::Path>,
    parallel: bool,
) -> Result<()> {
    if k == 0 {
        bail!("k must be at least 1");
    }
    let inst = read_instance(instance_path)?;
    let muscle = if parallel {
        generate_am_parallel(&inst, k, seed)
    } else {
        generate_am(&inst, k, seed)
    };
    let stats = muscle.stats();
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            muscle.write_to(BufWriter::new(file))?;
        }
        None => muscle.write_to(std::io::stdout().lock())?,
    }
    eprintln!(
        "sampled k={k} (seed {seed}): {} triples of {} ({:.4} of the cube), best cost {}",
        stats.total,
        inst.n().pow(3),
        stats.reduction_ratio,
        muscle.upper().cost
    );
    Ok(())
}

fn cmd_verify(instance_path: &std::path::Path, solution_path: &std::path::Path) -> Result<()> {
    let inst = read_instance(instance_path)?;
    let file = File::open(solution_path)
        .with_context(|| format!("cannot open {}", solution_path.display()))?;
    let (assignment, recorded_cost) = ap3::read_solution(BufReader::new(file))
        .with_context(|| format!("cannot parse solution {}", solution_path.display()))?;

    let actual = inst.evaluate(&assignment)?;
    if actual != recorded_cost {
        bail!("solution file records cost {recorded_cost}, but the triples sum to {actual}");
    }
    println!("feasible, cost {actual}");

    if inst.n() <= MAX_EXACT_N {
        let opt = brute_force(&inst)?;
        if actual == opt.cost {
            println!("optimal (exhaustive check)");
        } else {
            println!("suboptimal: optimum is {} ({} above)", opt.cost, actual - opt.cost);
        }
    } else {
        println!(
            "optimality not checked: exhaustive solver is limited to n <= {MAX_EXACT_N}, instance has n = {}",
            inst.n()
        );
    }
    Ok(())
}
