//! Exhaustive exact solver for small instances.
//!
//! Ground truth for tests and for the CLI's verification path. Enumerates
//! all `(n!)²` permutation pairs, so it is hard-limited to `n ≤ 7`.

use std::time::Instant;

use crate::error::{Ap3Error, Result};
use crate::instance::Ap3Instance;
use crate::solution::{Assignment, SolveResult};

/// Largest instance the exhaustive solver accepts; `(7!)²` pairs is already
/// tens of millions of partial sums.
pub const MAX_EXACT_N: usize = 7;

/// Exact minimum over every feasible solution. Ties resolve to the
/// lexicographically smallest `(p, q)` because candidates are enumerated in
/// lexicographic order and only strict improvements are kept.
pub fn brute_force(instance: &Ap3Instance) -> Result<SolveResult> {
    let n = instance.n();
    if n > MAX_EXACT_N {
        return Err(Ap3Error::TooLargeForExact {
            n,
            limit: MAX_EXACT_N,
        });
    }
    let started = Instant::now();

    let mut best_cost = i64::MAX;
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;

    // Outer recursion fixes p in lexicographic order; for each complete p the
    // inner recursion enumerates q, reusing the partial sum of the prefix.
    let mut p = vec![usize::MAX; n];
    let mut p_used = vec![false; n];
    enumerate_p(
        instance,
        &mut p,
        &mut p_used,
        0,
        &mut best_cost,
        &mut best,
    );

    let (p, q) = best.expect("n >= 1 instances always have a feasible solution");
    let assignment = Assignment::from_perms_unchecked(p, q);
    Ok(
        SolveResult::from_parts(assignment, best_cost, started.elapsed())
            .with_meta("algorithm", "brute_force"),
    )
}

fn enumerate_p(
    instance: &Ap3Instance,
    p: &mut Vec<usize>,
    used: &mut Vec<bool>,
    depth: usize,
    best_cost: &mut i64,
    best: &mut Option<(Vec<usize>, Vec<usize>)>,
) {
    let n = instance.n();
    if depth == n {
        let mut q = vec![usize::MAX; n];
        let mut q_used = vec![false; n];
        enumerate_q(instance, p, &mut q, &mut q_used, 0, 0, best_cost, best);
        return;
    }
    for j in 0..n {
        if !used[j] {
            used[j] = true;
            p[depth] = j;
            enumerate_p(instance, p, used, depth + 1, best_cost, best);
            used[j] = false;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_q(
    instance: &Ap3Instance,
    p: &[usize],
    q: &mut Vec<usize>,
    used: &mut Vec<bool>,
    depth: usize,
    partial: i64,
    best_cost: &mut i64,
    best: &mut Option<(Vec<usize>, Vec<usize>)>,
) {
    let n = instance.n();
    if depth == n {
        if partial < *best_cost {
            *best_cost = partial;
            *best = Some((p.to_vec(), q.clone()));
        }
        return;
    }
    for k in 0..n {
        if !used[k] {
            used[k] = true;
            q[depth] = k;
            enumerate_q(
                instance,
                p,
                q,
                used,
                depth + 1,
                partial + instance.cost(depth, p[depth], k),
                best_cost,
                best,
            );
            used[k] = false;
        }
    }
}
