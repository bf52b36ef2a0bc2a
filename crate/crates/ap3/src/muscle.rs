//! Sampling phase: the union of sampled local optima.
//!
//! Each restart draws a random solution, descends to a local optimum, and
//! contributes its `n` triples to a per-layer union. The union — the
//! approximate muscle — is the reduced search space handed to the beam
//! search, and the best sampled solution rides along as the upper bound.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::instance::Ap3Instance;
use crate::local_search::{hungarian_local_search, random_solution};
use crate::solution::{Assignment, SolveResult};

/// Union of sampled local optima, organized per `i`-layer, plus the best
/// sample found.
#[derive(Debug, Clone)]
pub struct Muscle {
    n: usize,
    /// `layers[i]` holds the distinct `(j, k)` such that the triple
    /// `(i, j, k)` appeared in some sampled local optimum, sorted ascending.
    layers: Vec<Vec<(usize, usize)>>,
    upper: SolveResult,
}

impl Muscle {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The admitted `(j, k)` pairs of layer `i`, in ascending order.
    pub fn layer(&self, i: usize) -> &[(usize, usize)] {
        &self.layers[i]
    }

    /// Best solution seen while sampling (the pruning upper bound s').
    pub fn upper(&self) -> &SolveResult {
        &self.upper
    }

    pub fn contains(&self, i: usize, j: usize, k: usize) -> bool {
        self.layers[i].binary_search(&(j, k)).is_ok()
    }

    /// Synthetic muscle admitting every triple of the instance; this is what
    /// turns the beam search into its pure (unreduced) variant. The recorded
    /// upper solution is the identity assignment, which callers typically
    /// override with a sampled bound.
    pub fn full_for(instance: &Ap3Instance) -> Self {
        let n = instance.n();
        let all: Vec<(usize, usize)> = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .collect();
        let identity = Assignment::identity(n);
        let cost = instance
            .evaluate(&identity)
            .expect("identity matches instance size");
        let upper = SolveResult::from_parts(identity, cost, Default::default())
            .with_meta("algorithm", "full-muscle-identity");
        Self {
            n,
            layers: vec![all; n],
            upper,
        }
    }

    /// Unit-test seam: a muscle with the given layers and a placeholder
    /// upper solution. Skips the usual invariants.
    #[cfg(test)]
    pub(crate) fn from_layers_for_tests(layers: Vec<Vec<(usize, usize)>>) -> Self {
        let n = layers.len();
        let upper = SolveResult::from_parts(Assignment::identity(n), 0, Default::default());
        Self { n, layers, upper }
    }

    pub fn stats(&self) -> MuscleStats {
        let per_layer: Vec<usize> = self.layers.iter().map(Vec::len).collect();
        let total = per_layer.iter().sum();
        let cube = (self.n * self.n * self.n) as f64;
        MuscleStats {
            per_layer,
            total,
            reduction_ratio: total as f64 / cube,
        }
    }

    /// Writes the muscle dump format: `n`, then for each layer a header line
    /// `i count` followed by one `j k` line per admitted pair.
    pub fn write_to<W: std::io::Write>(&self, writer: W) -> std::io::Result<()> {
        let mut w = std::io::BufWriter::new(writer);
        writeln!(w, "{}", self.n)?;
        for (i, layer) in self.layers.iter().enumerate() {
            writeln!(w, "{} {}", i, layer.len())?;
            for (j, k) in layer {
                writeln!(w, "{j} {k}")?;
            }
        }
        w.flush()
    }
}

/// Per-layer triple counts and the overall reduction against the full cube.
#[derive(Debug, Clone, PartialEq)]
pub struct MuscleStats {
    pub per_layer: Vec<usize>,
    pub total: usize,
    /// `total / n³`.
    pub reduction_ratio: f64,
}

/// Derives the RNG seed for one indexed unit of work (a restart, a
/// repetition) from a master seed. Splitmix64 finalizer: consecutive indices
/// give uncorrelated streams, and work split across threads stays
/// bit-identical to a sequential run.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `k` independent restarts (random solution + local search) and
/// returns the union of the sampled local optima together with the best one.
///
/// Restart `r` uses the seed `derive_seed(master_seed, r)`, so prefixes are
/// stable: the first `k₁` restarts of a `k₂ ≥ k₁` run are the same, which
/// makes the muscle grow monotonically in `k`. Ties for the best sample keep
/// the earliest restart.
pub fn generate_am(instance: &Ap3Instance, k: usize, master_seed: u64) -> Muscle {
    assert!(k >= 1, "sampling needs k >= 1");
    let started = Instant::now();
    let locals = (0..k).map(|r| sample_one(instance, master_seed, r as u64));
    accumulate(instance, k, master_seed, locals, started)
}

/// Same contract and bit-identical output as [`generate_am`], with restarts
/// executed on the rayon pool. The union and the running minimum merge in
/// restart order.
pub fn generate_am_parallel(instance: &Ap3Instance, k: usize, master_seed: u64) -> Muscle {
    assert!(k >= 1, "sampling needs k >= 1");
    let started = Instant::now();
    let locals: Vec<(Assignment, i64)> = (0..k)
        .into_par_iter()
        .map(|r| sample_one(instance, master_seed, r as u64))
        .collect();
    accumulate(instance, k, master_seed, locals.into_iter(), started)
}

fn sample_one(instance: &Ap3Instance, master_seed: u64, restart: u64) -> (Assignment, i64) {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(master_seed, restart));
    let start = random_solution(instance.n(), &mut rng);
    let local = hungarian_local_search(instance, &start);
    let cost = instance.eval_perms(local.p(), local.q());
    (local, cost)
}

fn accumulate(
    instance: &Ap3Instance,
    k: usize,
    master_seed: u64,
    locals: impl Iterator<Item = (Assignment, i64)>,
    started: Instant,
) -> Muscle {
    let n = instance.n();
    let mut sets: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); n];
    let mut best: Option<(Assignment, i64)> = None;
    for (local, cost) in locals {
        for (i, j, kk) in local.triples() {
            sets[i].insert((j, kk));
        }
        match &best {
            Some((_, best_cost)) if cost >= *best_cost => {}
            _ => best = Some((local, cost)),
        }
    }
    let (assignment, cost) = best.expect("k >= 1 restarts produce a best sample");
    let upper = SolveResult::from_parts(assignment, cost, started.elapsed())
        .with_meta("algorithm", "sampling")
        .with_meta("k", k)
        .with_meta("seed", master_seed);
    Muscle {
        n,
        layers: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        upper,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagonal_instance(n: usize) -> Ap3Instance {
        let mut cost = vec![1i64; n * n * n];
        for i in 0..n {
            cost[(i * n + i) * n + i] = 0;
        }
        Ap3Instance::new(n, cost).unwrap()
    }

    #[test]
    fn single_restart_muscle_is_that_solution() {
        let inst = Ap3Instance::random(4, 0, 100, 3).unwrap();
        let m = generate_am(&inst, 1, 11);
        for i in 0..4 {
            assert_eq!(m.layer(i).len(), 1);
        }
        for (i, j, k) in m.upper().assignment.triples() {
            assert!(m.contains(i, j, k));
        }
        assert_eq!(m.stats().total, 4);
    }

    #[test]
    fn finds_zero_diagonal_optimum() {
        let inst = diagonal_instance(5);
        let m = generate_am(&inst, 1000, 0);
        assert_eq!(m.upper().cost, 0);
    }

    #[test]
    fn union_matches_reference_accumulation() {
        let inst = Ap3Instance::random(5, 0, 60, 77).unwrap();
        let k = 40;
        let seed = 5;
        let m = generate_am(&inst, k, seed);

        // Reference: replay the restarts directly.
        let mut reference: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); 5];
        let mut best_cost = i64::MAX;
        for r in 0..k {
            let (local, cost) = sample_one(&inst, seed, r as u64);
            for (i, j, kk) in local.triples() {
                reference[i].insert((j, kk));
            }
            best_cost = best_cost.min(cost);
        }
        for (i, expected) in reference.iter().enumerate() {
            let got: BTreeSet<(usize, usize)> = m.layer(i).iter().copied().collect();
            assert_eq!(&got, expected);
        }
        assert_eq!(m.upper().cost, best_cost);
    }

    #[test]
    fn upper_triples_are_in_layers() {
        let inst = Ap3Instance::random(6, 0, 100, 13).unwrap();
        let m = generate_am(&inst, 25, 99);
        for (i, j, k) in m.upper().assignment.triples() {
            assert!(m.contains(i, j, k));
        }
    }

    #[test]
    fn growth_is_monotone_in_k() {
        let inst = Ap3Instance::random(6, 0, 100, 4).unwrap();
        let seed = 8;
        let m10 = generate_am(&inst, 10, seed);
        let m100 = generate_am(&inst, 100, seed);
        let m1000 = generate_am(&inst, 1000, seed);
        assert!(m10.stats().total <= m100.stats().total);
        assert!(m100.stats().total <= m1000.stats().total);
        for i in 0..6 {
            for pair in m10.layer(i) {
                assert!(m100.layer(i).binary_search(pair).is_ok());
            }
            for pair in m100.layer(i) {
                assert!(m1000.layer(i).binary_search(pair).is_ok());
            }
        }
        assert!(m10.upper().cost >= m100.upper().cost);
        assert!(m100.upper().cost >= m1000.upper().cost);
    }

    // The union of many local optima usually contains all triples of the
    // true optimum; probabilistic, so record the rate instead of demanding
    // certainty.
    #[test]
    fn optimal_triples_usually_contained_at_k1000() {
        let mut hits = 0;
        for seed in 0..20u64 {
            let inst = Ap3Instance::random(5, 0, 100, 500 + seed).unwrap();
            let opt = crate::oracle::brute_force(&inst).unwrap();
            let m = generate_am(&inst, 1000, seed);
            if opt
                .assignment
                .triples()
                .all(|(i, j, k)| m.contains(i, j, k))
            {
                hits += 1;
            }
        }
        println!("optimal-triple containment at n=5, k=1000: {hits}/20 seeds");
        assert!(hits >= 15, "containment rate collapsed: {hits}/20");
    }

    #[test]
    fn parallel_equals_sequential() {
        let inst = Ap3Instance::random(5, 0, 100, 31).unwrap();
        let seq = generate_am(&inst, 64, 7);
        let par = generate_am_parallel(&inst, 64, 7);
        assert_eq!(seq.layers, par.layers);
        assert_eq!(seq.upper().cost, par.upper().cost);
        assert_eq!(seq.upper().assignment, par.upper().assignment);
    }

    #[test]
    fn stats_ratio() {
        let inst = Ap3Instance::random(4, 0, 100, 1).unwrap();
        let m = generate_am(&inst, 1, 0);
        let s = m.stats();
        assert_eq!(s.total, 4);
        assert!((s.reduction_ratio - 4.0 / 64.0).abs() < 1e-12);
        assert_eq!(s.total, s.per_layer.iter().sum::<usize>());
    }

    #[test]
    fn dump_format() {
        let inst = diagonal_instance(2);
        // Make the muscle deterministic and tiny: one restart.
        let m = generate_am(&inst, 1, 0);
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("2"));
        let header: Vec<&str> = lines.next().unwrap().split(' ').collect();
        assert_eq!(header[0], "0");
        assert_eq!(header[1], "1");
    }

    #[test]
    fn full_muscle_admits_everything() {
        let inst = Ap3Instance::random(3, 0, 9, 2).unwrap();
        let m = Muscle::full_for(&inst);
        assert_eq!(m.stats().total, 27);
        assert!((m.stats().reduction_ratio - 1.0).abs() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(m.contains(i, j, k));
                }
            }
        }
    }
}
