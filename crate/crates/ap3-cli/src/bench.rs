//! Benchmark harness: run a suite of instances × algorithms and aggregate
//! cost and wall time into a CSV.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use ap3::{derive_seed, Ap3Instance, DEFAULT_BEAM_WIDTH, DEFAULT_SAMPLES};

use crate::{run_algorithm, Algorithm};

/// One suite line: where the instance comes from and how to solve it.
struct Job {
    /// Instance label for the CSV (file path or generator descriptor).
    label: String,
    source: Source,
    algorithm: Algorithm,
    k: usize,
    width: usize,
}

enum Source {
    File(PathBuf),
    Gen { n: usize, lo: i64, hi: i64, seed: u64 },
}

struct Row {
    label: String,
    n: Option<usize>,
    algorithm: &'static str,
    k: usize,
    width: usize,
    reps: usize,
    mean_cost: Option<f64>,
    best_cost: Option<i64>,
    mean_seconds: Option<f64>,
    status: String,
}

pub fn cmd_bench(
    suite_path: &Path,
    reps: usize,
    master_seed: u64,
    out: &Path,
    parallel: bool,
) -> Result<()> {
    if reps == 0 {
        bail!("reps must be at least 1");
    }
    let suite_text = std::fs::read_to_string(suite_path)
        .with_context(|| format!("cannot read suite {}", suite_path.display()))?;
    let base_dir = suite_path.parent().unwrap_or_else(|| Path::new("."));
    let jobs = parse_suite(&suite_text, base_dir)?;

    let run_one = |(idx, job): (usize, &Job)| -> Row {
        let job_seed = derive_seed(master_seed, idx as u64);
        run_job(job, reps, job_seed)
    };
    let rows: Vec<Row> = if parallel {
        jobs.par_iter().enumerate().map(run_one).collect()
    } else {
        jobs.iter().enumerate().map(run_one).collect()
    };

    let file = File::create(out).with_context(|| format!("cannot create {}", out.display()))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record([
        "instance",
        "n",
        "algorithm",
        "k",
        "width",
        "reps",
        "mean_cost",
        "best_cost",
        "mean_seconds",
        "status",
    ])?;
    let mut failures = 0;
    for row in rows {
        if row.status != "ok" {
            failures += 1;
        }
        w.write_record([
            row.label.clone(),
            row.n.map(|n| n.to_string()).unwrap_or_default(),
            row.algorithm.to_string(),
            row.k.to_string(),
            row.width.to_string(),
            row.reps.to_string(),
            row.mean_cost.map(|c| format!("{c}")).unwrap_or_default(),
            row.best_cost.map(|c| c.to_string()).unwrap_or_default(),
            row.mean_seconds
                .map(|s| format!("{s:.3}"))
                .unwrap_or_default(),
            row.status.clone(),
        ])?;
        // Keep whatever already succeeded on disk.
        w.flush()?;
    }
    eprintln!("wrote {} to {}", plural(jobs.len(), "row"), out.display());
    if failures > 0 {
        bail!("{} of {} jobs failed; see the status column", failures, jobs.len());
    }
    Ok(())
}

fn plural(n: usize, what: &str) -> String {
    if n == 1 {
        format!("1 {what}")
    } else {
        format!("{n} {what}s")
    }
}

fn run_job(job: &Job, reps: usize, job_seed: u64) -> Row {
    let mut row = Row {
        label: job.label.clone(),
        n: None,
        algorithm: job.algorithm.name(),
        k: job.k,
        width: job.width,
        reps,
        mean_cost: None,
        best_cost: None,
        mean_seconds: None,
        status: "ok".to_string(),
    };

    let instance = match &job.source {
        Source::File(path) => File::open(path)
            .with_context(|| format!("cannot open {}", path.display()))
            .and_then(|f| Ap3Instance::read_from(BufReader::new(f)).map_err(Into::into)),
        Source::Gen { n, lo, hi, seed } => {
            Ap3Instance::random(*n, *lo, *hi, *seed).map_err(Into::into)
        }
    };
    let instance = match instance {
        Ok(i) => i,
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    };
    row.n = Some(instance.n());

    let mut total_cost = 0i64;
    let mut best_cost = i64::MAX;
    let mut total_secs = 0f64;
    for rep in 0..reps {
        let seed = derive_seed(job_seed, rep as u64);
        let started = Instant::now();
        match run_algorithm(&instance, job.algorithm, job.k, job.width, seed, false) {
            Ok(result) => {
                total_cost += result.cost;
                best_cost = best_cost.min(result.cost);
                total_secs += started.elapsed().as_secs_f64();
            }
            Err(e) => {
                row.status = format!("error: {e}");
                return row;
            }
        }
    }
    row.mean_cost = Some(total_cost as f64 / reps as f64);
    row.best_cost = Some(best_cost);
    row.mean_seconds = Some(total_secs / reps as f64);
    row
}

/// Suite format: one job per line, `#` comments and blank lines ignored.
///
/// ```text
/// gen n=18 lo=0 hi=100 seed=3 algo=ambs k=1000 width=300
/// file instances/a.dat algo=beam
/// ```
///
/// `lo`/`hi`/`seed` default to 0/100/0; `algo` defaults to ambs; `k` and
/// `width` default to the solver defaults. File paths are relative to the
/// suite file.
fn parse_suite(text: &str, base_dir: &Path) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().expect("non-empty line has a first token");
        let job = match head {
            "gen" => parse_gen(tokens, line_no + 1)?,
            "file" => parse_file(tokens, base_dir, line_no + 1)?,
            other => bail!("suite line {}: unknown directive {other:?}", line_no + 1),
        };
        jobs.push(job);
    }
    Ok(jobs)
}

fn parse_gen<'a>(tokens: impl Iterator<Item = &'a str>, line_no: usize) -> Result<Job> {
    let mut n = None;
    let mut lo = 0i64;
    let mut hi = 100i64;
    let mut seed = 0u64;
    let mut common = CommonArgs::default();
    for tok in tokens {
        let (key, value) = split_kv(tok, line_no)?;
        match key {
            "n" => n = Some(parse_value(value, "n", line_no)?),
            "lo" => lo = parse_value(value, "lo", line_no)?,
            "hi" => hi = parse_value(value, "hi", line_no)?,
            "seed" => seed = parse_value(value, "seed", line_no)?,
            _ => common.accept(key, value, line_no)?,
        }
    }
    let n: usize = n.ok_or_else(|| anyhow::anyhow!("suite line {line_no}: gen needs n=<size>"))?;
    Ok(Job {
        label: format!("gen(n={n},lo={lo},hi={hi},seed={seed})"),
        source: Source::Gen { n, lo, hi, seed },
        algorithm: common.algorithm,
        k: common.k,
        width: common.width,
    })
}

fn parse_file<'a>(
    mut tokens: impl Iterator<Item = &'a str>,
    base_dir: &Path,
    line_no: usize,
) -> Result<Job> {
    let path = tokens
        .next()
        .ok_or_else(|| anyhow::anyhow!("suite line {line_no}: file needs a path"))?;
    let mut common = CommonArgs::default();
    for tok in tokens {
        let (key, value) = split_kv(tok, line_no)?;
        common.accept(key, value, line_no)?;
    }
    Ok(Job {
        label: path.to_string(),
        source: Source::File(base_dir.join(path)),
        algorithm: common.algorithm,
        k: common.k,
        width: common.width,
    })
}

struct CommonArgs {
    algorithm: Algorithm,
    k: usize,
    width: usize,
}

impl Default for CommonArgs {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Ambs,
            k: DEFAULT_SAMPLES,
            width: DEFAULT_BEAM_WIDTH,
        }
    }
}

impl CommonArgs {
    fn accept(&mut self, key: &str, value: &str, line_no: usize) -> Result<()> {
        match key {
            "algo" => {
                self.algorithm = match value {
                    "ambs" => Algorithm::Ambs,
                    "beam" => Algorithm::Beam,
                    "sample" => Algorithm::Sample,
                    "oracle" => Algorithm::Oracle,
                    other => bail!("suite line {line_no}: unknown algorithm {other:?}"),
                }
            }
            "k" => self.k = parse_value(value, "k", line_no)?,
            "width" => self.width = parse_value(value, "width", line_no)?,
            other => bail!("suite line {line_no}: unknown key {other:?}"),
        }
        Ok(())
    }
}

fn split_kv(tok: &str, line_no: usize) -> Result<(&str, &str)> {
    tok.split_once('=')
        .ok_or_else(|| anyhow::anyhow!("suite line {line_no}: expected key=value, got {tok:?}"))
}

fn parse_value<T: std::str::FromStr>(value: &str, key: &str, line_no: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| anyhow::anyhow!("suite line {line_no}: cannot parse {key}={value:?}"))
}
