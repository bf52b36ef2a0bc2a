//! Search phase: level-ordered beam search with projection lower bounds.
//!
//! The search tree assigns one `i`-layer per level. Levels expand in
//! ascending order of layer size, so the expensive bounds near the root are
//! computed for as few nodes as possible. Each successor is scored by an
//! admissible lower bound — accumulated cost plus an exact AP2 optimum of
//! the projected remainder — and at most `width` successors survive a level,
//! all strictly below the sampled upper bound.

use std::cmp::Ordering;
use std::time::Instant;

use crate::hungarian::{solve_ap2, Ap2Matrix};
use crate::instance::Ap3Instance;
use crate::local_search::hungarian_local_search;
use crate::muscle::Muscle;
use crate::solution::{Assignment, SolveResult};

/// Bound value reserved for candidates whose sub-problem has no completion
/// within the muscle. Larger than any achievable bound; instance costs must
/// stay below `i64::MAX / 4` in magnitude for the sentinel to be
/// unambiguous.
pub const INFEASIBLE_BOUND: i64 = i64::MAX / 4;

/// Map from search-tree level to the `i`-layer expanded there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelOrder {
    order: Vec<usize>,
}

impl LevelOrder {
    /// `order()[level]` is the layer expanded at that level.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }
}

/// Sorts layers ascending by admitted-triple count, ties broken by the
/// smaller layer index.
pub fn compute_level_order(m: &Muscle) -> LevelOrder {
    let mut order: Vec<usize> = (0..m.n()).collect();
    order.sort_by_key(|&i| (m.layer(i).len(), i));
    LevelOrder { order }
}

/// A prefix of a solution along the level order: one chosen triple per
/// expanded level, the used `j`/`k` masks, the accumulated cost, and the
/// admissible bound on any completion.
#[derive(Debug, Clone)]
pub struct BeamCandidate {
    chosen: Vec<(usize, usize, usize)>,
    used_j: Vec<bool>,
    used_k: Vec<bool>,
    value: i64,
    bound: i64,
}

impl BeamCandidate {
    /// The empty candidate (depth 0).
    pub fn root(n: usize) -> Self {
        assert!(n >= 1);
        Self {
            chosen: Vec::new(),
            used_j: vec![false; n],
            used_k: vec![false; n],
            value: 0,
            bound: 0,
        }
    }

    /// Child candidate choosing `(order[depth], j, k)`.
    pub fn extend(&self, order: &LevelOrder, instance: &Ap3Instance, j: usize, k: usize) -> Self {
        let i = order.order()[self.depth()];
        debug_assert!(!self.used_j[j] && !self.used_k[k]);
        let mut child = self.clone();
        child.chosen.push((i, j, k));
        child.used_j[j] = true;
        child.used_k[k] = true;
        child.value += instance.cost(i, j, k);
        child.bound = child.value;
        child
    }

    /// Builds the depth-`depth` prefix of `a` along `order`.
    pub fn from_assignment_prefix(
        instance: &Ap3Instance,
        order: &LevelOrder,
        a: &Assignment,
        depth: usize,
    ) -> Self {
        assert!(depth <= a.n());
        let mut cand = Self::root(a.n());
        for level in 0..depth {
            let i = order.order()[level];
            cand = cand.extend(order, instance, a.p()[i], a.q()[i]);
        }
        cand
    }

    pub fn depth(&self) -> usize {
        self.chosen.len()
    }

    /// Chosen triples `(i, j, k)`, one per expanded level.
    pub fn chosen(&self) -> &[(usize, usize, usize)] {
        &self.chosen
    }

    pub fn used_j(&self) -> &[bool] {
        &self.used_j
    }

    pub fn used_k(&self) -> &[bool] {
        &self.used_k
    }

    /// Sum of the chosen triples' costs.
    pub fn value(&self) -> i64 {
        self.value
    }

    /// Admissible lower bound on any completion (equals `value` at full
    /// depth).
    pub fn bound(&self) -> i64 {
        self.bound
    }

    fn into_assignment(self) -> Assignment {
        let n = self.used_j.len();
        debug_assert_eq!(self.depth(), n);
        let mut p = vec![0usize; n];
        let mut q = vec![0usize; n];
        for (i, j, k) in self.chosen {
            p[i] = j;
            q[i] = k;
        }
        Assignment::from_perms_unchecked(p, q)
    }
}

/// Admissible lower bound for a candidate: its accumulated value plus the
/// exact AP2 optimum of the projected remainder.
///
/// The remainder keeps the free levels `order[depth..]`; projecting away the
/// level dimension gives a matrix over free `(j, k)` pairs where each cell
/// is the cheapest admitted triple covering it. Any completion within the
/// muscle picks a perfect matching on that matrix, so the AP2 optimum never
/// exceeds a real completion. Returns [`INFEASIBLE_BOUND`] when no
/// completion exists.
pub fn lower_bound(
    instance: &Ap3Instance,
    m: &Muscle,
    order: &LevelOrder,
    cand: &BeamCandidate,
) -> i64 {
    match subproblem_bound(instance, m, order, cand.depth(), &cand.used_j, &cand.used_k) {
        Some(lb) => cand.value + lb,
        None => INFEASIBLE_BOUND,
    }
}

/// AP2 optimum of the projected sub-problem below `depth`, or `None` when
/// the muscle admits no completion there.
fn subproblem_bound(
    instance: &Ap3Instance,
    m: &Muscle,
    order: &LevelOrder,
    depth: usize,
    used_j: &[bool],
    used_k: &[bool],
) -> Option<i64> {
    let n = instance.n();
    let s = n - depth;
    if s == 0 {
        return Some(0);
    }

    // Compact row/column indices for the free j's and k's.
    let mut jmap = vec![usize::MAX; n];
    let mut kmap = vec![usize::MAX; n];
    let mut next = 0;
    for (j, &used) in used_j.iter().enumerate() {
        if !used {
            jmap[j] = next;
            next += 1;
        }
    }
    debug_assert_eq!(next, s);
    next = 0;
    for (k, &used) in used_k.iter().enumerate() {
        if !used {
            kmap[k] = next;
            next += 1;
        }
    }
    debug_assert_eq!(next, s);

    // Project out the level dimension: cheapest admitted triple per free
    // (j, k) cell, infeasibility sentinel elsewhere.
    let mut d = vec![INFEASIBLE_BOUND; s * s];
    for &i in &order.order()[depth..] {
        for &(j, k) in m.layer(i) {
            if !used_j[j] && !used_k[k] {
                let c = instance.cost(i, j, k);
                let cell = &mut d[jmap[j] * s + kmap[k]];
                if c < *cell {
                    *cell = c;
                }
            }
        }
    }

    let mat = Ap2Matrix::new(s, d).expect("projected matrix is square and nonempty");
    let res = solve_ap2(&mat);
    // The optimum routes through a sentinel cell exactly when no finite
    // perfect matching exists.
    for (r, &c) in res.assign.iter().enumerate() {
        if mat.cost(r, c) == INFEASIBLE_BOUND {
            return None;
        }
    }
    Some(res.total)
}

/// Beam search over the muscle. Keeps at most `width` successors per level,
/// all with bounds strictly below `s_prime`'s cost; if a level keeps none,
/// `s_prime` itself is the answer. Surviving full-depth candidates go
/// through the local search and the cheapest result wins, so the returned
/// cost never exceeds `s_prime.cost`.
pub fn beam_search(
    instance: &Ap3Instance,
    m: &Muscle,
    width: usize,
    s_prime: &SolveResult,
    order: &LevelOrder,
) -> SolveResult {
    run_beam(instance, m, width, s_prime, order, true)
}

/// Beam search over the full triple set: the same procedure with a synthetic
/// muscle admitting everything (level order degenerates to identity).
/// `s_prime` still supplies the pruning upper bound.
pub fn pure_beam_search(instance: &Ap3Instance, width: usize, s_prime: &SolveResult) -> SolveResult {
    let full = Muscle::full_for(instance);
    let order = compute_level_order(&full);
    run_beam(instance, &full, width, s_prime, &order, true)
}

struct Successor {
    bound: i64,
    pred: usize,
    j: usize,
    k: usize,
}

fn run_beam(
    instance: &Ap3Instance,
    m: &Muscle,
    width: usize,
    s_prime: &SolveResult,
    order: &LevelOrder,
    prune: bool,
) -> SolveResult {
    assert!(width >= 1, "beam width must be at least 1");
    let started = Instant::now();
    let n = instance.n();
    debug_assert_eq!(m.n(), n);
    let cutoff = if prune {
        s_prime.cost
    } else {
        INFEASIBLE_BOUND
    };

    let mut beam = vec![BeamCandidate::root(n)];
    for level in 0..n {
        let layer = order.order()[level];

        // Generate every admissible successor of every candidate and score
        // it; track per-predecessor bound sums for the tie-break.
        let mut pool: Vec<Successor> = Vec::new();
        let mut pred_sum = vec![(0i128, 0u32); beam.len()];
        for (pi, cand) in beam.iter().enumerate() {
            let mut uj = cand.used_j.clone();
            let mut uk = cand.used_k.clone();
            for &(j, k) in m.layer(layer) {
                if uj[j] || uk[k] {
                    continue;
                }
                let child_value = cand.value + instance.cost(layer, j, k);
                uj[j] = true;
                uk[k] = true;
                let bound =
                    match subproblem_bound(instance, m, order, level + 1, &uj, &uk) {
                        Some(lb) => child_value + lb,
                        None => INFEASIBLE_BOUND,
                    };
                uj[j] = false;
                uk[k] = false;
                pred_sum[pi].0 += bound as i128;
                pred_sum[pi].1 += 1;
                pool.push(Successor {
                    bound,
                    pred: pi,
                    j,
                    k,
                });
            }
        }

        // Ascending by bound; equal bounds rank by the predecessor's mean
        // successor bound, then by predecessor position and (j, k) so the
        // order is total.
        pool.sort_unstable_by(|a, b| {
            a.bound
                .cmp(&b.bound)
                .then_with(|| cmp_mean(pred_sum[a.pred], pred_sum[b.pred]))
                .then_with(|| a.pred.cmp(&b.pred))
                .then_with(|| a.j.cmp(&b.j))
                .then_with(|| a.k.cmp(&b.k))
        });

        let mut next = Vec::with_capacity(width.min(pool.len()));
        for succ in &pool {
            if next.len() >= width || succ.bound >= cutoff {
                break;
            }
            next.push(beam[succ.pred].extend_with_bound(order, instance, succ.j, succ.k, succ.bound));
        }
        debug_assert!(next.len() <= width);

        if next.is_empty() {
            // Every branch is pruned: the sampled upper bound is the answer.
            return SolveResult::from_parts(
                s_prime.assignment.clone(),
                s_prime.cost,
                started.elapsed(),
            )
            .with_meta("width", width)
            .with_meta("fallback", "s_prime");
        }
        beam = next;
    }

    // Polish every surviving full solution and keep the cheapest.
    let mut best: Option<(Assignment, i64)> = None;
    let survivors = beam.len();
    for cand in beam {
        debug_assert_eq!(cand.bound, cand.value);
        let polished = hungarian_local_search(instance, &cand.into_assignment());
        let cost = instance.eval_perms(polished.p(), polished.q());
        match &best {
            Some((_, best_cost)) if cost >= *best_cost => {}
            _ => best = Some((polished, cost)),
        }
    }
    let (assignment, cost) = best.expect("beam was nonempty");
    debug_assert!(cost <= s_prime.cost);
    SolveResult::from_parts(assignment, cost, started.elapsed())
        .with_meta("width", width)
        .with_meta("survivors", survivors)
}

impl BeamCandidate {
    fn extend_with_bound(
        &self,
        order: &LevelOrder,
        instance: &Ap3Instance,
        j: usize,
        k: usize,
        bound: i64,
    ) -> Self {
        let mut child = self.extend(order, instance, j, k);
        child.bound = bound;
        child
    }
}

// Compare sum_a/cnt_a with sum_b/cnt_b without division.
fn cmp_mean(a: (i128, u32), b: (i128, u32)) -> Ordering {
    debug_assert!(a.1 > 0 && b.1 > 0);
    (a.0 * b.1 as i128).cmp(&(b.0 * a.1 as i128))
}
