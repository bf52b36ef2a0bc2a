//! Random starts and the projection local search.
//!
//! A solution fixes two of the three index pairings; re-optimizing the third
//! is an exact AP2 solved by the Hungarian kernel. The local search cycles
//! the three possible projections until none improves, which makes the
//! result a fixpoint of all three moves.

use rand::Rng;

use crate::hungarian::{solve_ap2, Ap2Matrix};
use crate::instance::Ap3Instance;
use crate::solution::Assignment;

/// Draws a random feasible solution by swap-shuffling two identity
/// permutations: for each position `i` in turn, swap it with a uniformly
/// random position (`p` first, then `q`).
///
/// The swap loop draws from the full range at every step, so the
/// distribution over permutations is deliberately *not* uniform; every
/// permutation is reachable, but frequencies differ. Restart sampling only
/// needs diverse feasible starts, not uniformity.
pub fn random_solution<R: Rng>(n: usize, rng: &mut R) -> Assignment {
    assert!(n >= 1, "n must be at least 1");
    let mut p: Vec<usize> = (0..n).collect();
    let mut q: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let j = rng.gen_range(0..n);
        p.swap(i, j);
    }
    for i in 0..n {
        let j = rng.gen_range(0..n);
        q.swap(i, j);
    }
    Assignment::from_perms_unchecked(p, q)
}

/// Descends from `start` to a local optimum of the three projection moves:
///
/// * rebuild `q` with the `(i, p[i])` pairs fixed,
/// * rebuild `p` with the `(i, q[i])` pairs fixed,
/// * rebuild the map from `i` to the `(p[t], q[t])` couples.
///
/// Moves run in that fixed order and only strictly improving re-optimizations
/// are applied, so the search is reproducible and terminates (integer costs
/// strictly decrease between passes). The result never costs more than
/// `start`.
pub fn hungarian_local_search(instance: &Ap3Instance, start: &Assignment) -> Assignment {
    let n = instance.n();
    debug_assert_eq!(start.n(), n);
    let mut p = start.p().to_vec();
    let mut q = start.q().to_vec();
    let mut cur = instance.eval_perms(&p, &q);

    loop {
        let at_round_start = cur;

        // Fix (i, p[i]); choose the best k for each i.
        let mat = Ap2Matrix::from_fn(n, |i, k| instance.cost(i, p[i], k));
        let res = solve_ap2(&mat);
        debug_assert!(res.total <= cur);
        if res.total < cur {
            q = res.assign;
            cur = res.total;
        }

        // Fix (i, q[i]); choose the best j for each i.
        let mat = Ap2Matrix::from_fn(n, |i, j| instance.cost(i, j, q[i]));
        let res = solve_ap2(&mat);
        debug_assert!(res.total <= cur);
        if res.total < cur {
            p = res.assign;
            cur = res.total;
        }

        // Fix the (p[t], q[t]) couples; re-match each i to a couple.
        let mat = Ap2Matrix::from_fn(n, |i, t| instance.cost(i, p[t], q[t]));
        let res = solve_ap2(&mat);
        debug_assert!(res.total <= cur);
        if res.total < cur {
            let np: Vec<usize> = res.assign.iter().map(|&t| p[t]).collect();
            let nq: Vec<usize> = res.assign.iter().map(|&t| q[t]).collect();
            p = np;
            q = nq;
            cur = res.total;
        }

        if cur == at_round_start {
            break;
        }
    }

    debug_assert_eq!(instance.eval_perms(&p, &q), cur);
    Assignment::from_perms_unchecked(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn diagonal_instance(n: usize, off: i64) -> Ap3Instance {
        let mut cost = vec![off; n * n * n];
        for i in 0..n {
            cost[(i * n + i) * n + i] = 0;
        }
        Ap3Instance::new(n, cost).unwrap()
    }

    #[test]
    fn single_element_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a = random_solution(1, &mut rng);
        assert_eq!(a.p(), &[0]);
        assert_eq!(a.q(), &[0]);
    }

    #[test]
    fn random_solution_is_deterministic_per_seed() {
        for seed in 0..5u64 {
            let mut r1 = ChaCha8Rng::seed_from_u64(seed);
            let mut r2 = ChaCha8Rng::seed_from_u64(seed);
            assert_eq!(random_solution(7, &mut r1), random_solution(7, &mut r2));
        }
    }

    // The biased swap shuffle still reaches every (p, q) pair.
    #[test]
    fn random_solution_reaches_all_pairs_for_n3() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut seen: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
        for _ in 0..10_000 {
            let a = random_solution(3, &mut rng);
            seen.insert((a.p().to_vec(), a.q().to_vec()));
        }
        assert_eq!(seen.len(), 36);
    }

    #[test]
    fn global_optimum_is_a_fixpoint() {
        let inst = diagonal_instance(4, 1);
        let start = Assignment::identity(4);
        let out = hungarian_local_search(&inst, &start);
        assert_eq!(out, start);
        assert_eq!(inst.evaluate(&out).unwrap(), 0);
    }

    #[test]
    fn never_worse_than_start() {
        let inst = Ap3Instance::random(6, 0, 100, 21).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let start = random_solution(6, &mut rng);
            let out = hungarian_local_search(&inst, &start);
            assert!(inst.evaluate(&out).unwrap() <= inst.evaluate(&start).unwrap());
        }
    }

    // Restarting from 100 random starts reaches the exhaustive optimum on
    // this instance, and no local optimum undercuts it.
    #[test]
    fn multi_start_reaches_exhaustive_floor() {
        let inst = Ap3Instance::random(5, 0, 100, 33).unwrap();
        let floor = crate::oracle::brute_force(&inst).unwrap().cost;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut best = i64::MAX;
        let mut optimal_hits = 0;
        for _ in 0..100 {
            let out = hungarian_local_search(&inst, &random_solution(5, &mut rng));
            let cost = inst.evaluate(&out).unwrap();
            assert!(cost >= floor);
            if cost == floor {
                optimal_hits += 1;
            }
            best = best.min(cost);
        }
        assert_eq!(best, floor);
        assert!(optimal_hits > 50, "only {optimal_hits}/100 starts reached the optimum");
    }

    #[test]
    fn output_is_idempotent() {
        let inst = Ap3Instance::random(5, 0, 100, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let start = random_solution(5, &mut rng);
            let once = hungarian_local_search(&inst, &start);
            let twice = hungarian_local_search(&inst, &once);
            assert_eq!(
                inst.evaluate(&once).unwrap(),
                inst.evaluate(&twice).unwrap()
            );
            assert_eq!(once, twice);
        }
    }
}
