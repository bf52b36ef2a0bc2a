//! End-to-end solvers: the two-phase muscle-guided search and its baselines.

use std::time::Instant;

use crate::beam::{beam_search, compute_level_order, pure_beam_search};
use crate::instance::Ap3Instance;
use crate::muscle::{generate_am, generate_am_parallel, Muscle};
use crate::solution::SolveResult;

/// Default restart count for the sampling phase.
pub const DEFAULT_SAMPLES: usize = 1000;

/// Default beam width for the search phase.
pub const DEFAULT_BEAM_WIDTH: usize = 300;

/// Knobs that do not change results, only how they are computed.
#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    /// Run sampling restarts on the rayon pool. Output is bit-identical to
    /// the sequential run for the same seed.
    pub parallel_sampling: bool,
}

/// Muscle-guided beam search: sample `k` local optima to build the muscle
/// and the upper bound, order levels by layer size, then beam-search the
/// muscle. The result never costs more than the best sample.
pub fn solve_ambs(instance: &Ap3Instance, k: usize, width: usize, seed: u64) -> SolveResult {
    solve_ambs_with(instance, k, width, seed, &PipelineOptions::default())
}

pub fn solve_ambs_with(
    instance: &Ap3Instance,
    k: usize,
    width: usize,
    seed: u64,
    opts: &PipelineOptions,
) -> SolveResult {
    let started = Instant::now();
    let muscle = sample(instance, k, seed, opts);
    let sampling_secs = started.elapsed().as_secs_f64();
    let stats = muscle.stats();

    let order = compute_level_order(&muscle);
    let search_started = Instant::now();
    let searched = beam_search(instance, &muscle, width, muscle.upper(), &order);
    let search_secs = search_started.elapsed().as_secs_f64();
    debug_assert!(searched.cost <= muscle.upper().cost);

    let fallback = searched.metadata.get("fallback").cloned();
    let mut result = SolveResult::from_parts(searched.assignment, searched.cost, started.elapsed())
        .with_meta("algorithm", "ambs")
        .with_meta("n", instance.n())
        .with_meta("k", k)
        .with_meta("width", width)
        .with_meta("seed", seed)
        .with_meta("parallel_sampling", opts.parallel_sampling)
        .with_meta("upper_cost", muscle.upper().cost)
        .with_meta("muscle_triples", stats.total)
        .with_meta("muscle_ratio", format!("{:.6}", stats.reduction_ratio))
        .with_meta("sampling_secs", format!("{sampling_secs:.3}"))
        .with_meta("search_secs", format!("{search_secs:.3}"));
    if let Some(f) = fallback {
        result = result.with_meta("fallback", f);
    }
    result
}

/// Pure beam search baseline: sampling only supplies the upper bound, the
/// search runs over the full triple set.
pub fn solve_pure_bs(instance: &Ap3Instance, k: usize, width: usize, seed: u64) -> SolveResult {
    solve_pure_bs_with(instance, k, width, seed, &PipelineOptions::default())
}

pub fn solve_pure_bs_with(
    instance: &Ap3Instance,
    k: usize,
    width: usize,
    seed: u64,
    opts: &PipelineOptions,
) -> SolveResult {
    let started = Instant::now();
    let muscle = sample(instance, k, seed, opts);
    let sampling_secs = started.elapsed().as_secs_f64();

    let search_started = Instant::now();
    let searched = pure_beam_search(instance, width, muscle.upper());
    let search_secs = search_started.elapsed().as_secs_f64();
    debug_assert!(searched.cost <= muscle.upper().cost);

    let fallback = searched.metadata.get("fallback").cloned();
    let mut result = SolveResult::from_parts(searched.assignment, searched.cost, started.elapsed())
        .with_meta("algorithm", "beam")
        .with_meta("n", instance.n())
        .with_meta("k", k)
        .with_meta("width", width)
        .with_meta("seed", seed)
        .with_meta("parallel_sampling", opts.parallel_sampling)
        .with_meta("upper_cost", muscle.upper().cost)
        .with_meta("sampling_secs", format!("{sampling_secs:.3}"))
        .with_meta("search_secs", format!("{search_secs:.3}"));
    if let Some(f) = fallback {
        result = result.with_meta("fallback", f);
    }
    result
}

/// Multi-restart local search baseline: the best of `k` sampled local
/// optima, no search phase.
pub fn solve_sampling_only(instance: &Ap3Instance, k: usize, seed: u64) -> SolveResult {
    solve_sampling_only_with(instance, k, seed, &PipelineOptions::default())
}

pub fn solve_sampling_only_with(
    instance: &Ap3Instance,
    k: usize,
    seed: u64,
    opts: &PipelineOptions,
) -> SolveResult {
    let started = Instant::now();
    let muscle = sample(instance, k, seed, opts);
    let sampling_secs = started.elapsed().as_secs_f64();
    let upper = muscle.upper();
    SolveResult::from_parts(upper.assignment.clone(), upper.cost, started.elapsed())
        .with_meta("algorithm", "sample")
        .with_meta("n", instance.n())
        .with_meta("k", k)
        .with_meta("seed", seed)
        .with_meta("parallel_sampling", opts.parallel_sampling)
        .with_meta("sampling_secs", format!("{sampling_secs:.3}"))
}

fn sample(instance: &Ap3Instance, k: usize, seed: u64, opts: &PipelineOptions) -> Muscle {
    if opts.parallel_sampling {
        generate_am_parallel(instance, k, seed)
    } else {
        generate_am(instance, k, seed)
    }
}
