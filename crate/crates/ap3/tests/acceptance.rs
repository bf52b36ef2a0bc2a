//! Acceptance suite: end-to-end checks of the solver stack at its
//! documented parameter defaults, against the exhaustive oracle where one
//! exists and against hard resource caps where it does not.
//!
//! Run with `cargo test -p ap3 --test acceptance -- --nocapture` to see one
//! PASS line per criterion.

use std::time::{Duration, Instant};

use ap3::{
    brute_force, compute_level_order, hungarian_local_search, lower_bound, random_solution,
    solve_ambs, solve_ambs_with, solve_ap2, solve_pure_bs, solve_pure_bs_with,
    solve_sampling_only, solve_sampling_only_with, write_solution, Ap2Matrix, Ap3Instance,
    Assignment, BeamCandidate, Muscle, PipelineOptions, SolveResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const K: usize = 1000;
const WIDTH: usize = 300;

fn instance_for(n: usize, seed: u64) -> Ap3Instance {
    Ap3Instance::random(n, 0, 100, seed).unwrap()
}

/// Criterion 1: AMBS at default parameters matches the exhaustive optimum on
/// every small instance, within 2 s per instance.
#[test]
fn acceptance_1_oracle_equivalence() {
    let mut worst = Duration::ZERO;
    for n in [4usize, 5, 6] {
        for s in 0..20u64 {
            let inst = instance_for(n, 1000 * n as u64 + s);
            let started = Instant::now();
            let got = solve_ambs(&inst, K, WIDTH, s);
            let elapsed = started.elapsed();
            worst = worst.max(elapsed);
            let opt = brute_force(&inst).unwrap();
            assert_eq!(
                got.cost, opt.cost,
                "n={n} seed={s}: ambs found {} but optimum is {}",
                got.cost, opt.cost
            );
            assert!(
                elapsed < Duration::from_secs(2),
                "n={n} seed={s}: took {elapsed:?}, budget is 2 s"
            );
        }
    }
    println!(
        "acceptance 1 (oracle equivalence, ambs, n in 4..=6, 20 seeds each): PASS (60/60 optimal, max {:.3}s)",
        worst.as_secs_f64()
    );
}

/// Criterion 2: the pure beam-search baseline also matches the oracle on the
/// same suites, within 30 s per instance.
#[test]
fn acceptance_2_pure_beam_parity() {
    let mut worst = Duration::ZERO;
    for n in [4usize, 5, 6] {
        for s in 0..20u64 {
            let inst = instance_for(n, 1000 * n as u64 + s);
            let started = Instant::now();
            let got = solve_pure_bs(&inst, K, WIDTH, s);
            let elapsed = started.elapsed();
            worst = worst.max(elapsed);
            let opt = brute_force(&inst).unwrap();
            assert_eq!(
                got.cost, opt.cost,
                "n={n} seed={s}: pure beam found {} but optimum is {}",
                got.cost, opt.cost
            );
            assert!(
                elapsed < Duration::from_secs(30),
                "n={n} seed={s}: took {elapsed:?}, budget is 30 s"
            );
        }
    }
    println!(
        "acceptance 2 (pure beam parity, n in 4..=6, 20 seeds each): PASS (60/60 optimal, max {:.3}s)",
        worst.as_secs_f64()
    );
}

/// Criterion 3: the projection bound is admissible at the root and exact at
/// full depth, as integer comparisons.
#[test]
fn acceptance_3_lower_bound_admissibility() {
    for case in 0..50u64 {
        let n = 3 + (case as usize % 3); // 3, 4, 5
        let inst = instance_for(n, 3000 + case);
        let full = Muscle::full_for(&inst);
        let order = compute_level_order(&full);

        let root = BeamCandidate::root(n);
        let lb = lower_bound(&inst, &full, &order, &root);
        let opt = brute_force(&inst).unwrap();
        assert!(
            lb <= opt.cost,
            "case {case} (n={n}): root bound {lb} exceeds optimum {}",
            opt.cost
        );

        let complete =
            BeamCandidate::from_assignment_prefix(&inst, &order, &opt.assignment, n);
        let full_depth_bound = lower_bound(&inst, &full, &order, &complete);
        assert_eq!(full_depth_bound, complete.value(), "case {case} (n={n})");
        assert_eq!(complete.value(), opt.cost, "case {case} (n={n})");
    }
    println!("acceptance 3 (lower-bound admissibility, 50 instances n<=5): PASS");
}

/// Criterion 4: mean AMBS cost over the n=18 suite does not increase with
/// beam width (width 400 <= 300 <= 100 on means over 10 reps per width).
#[test]
fn acceptance_4_width_monotonicity() {
    let widths = [100usize, 300, 400];
    let mut means = Vec::new();
    for &w in &widths {
        let mut total = 0i64;
        let mut runs = 0i64;
        for inst_seed in 0..5u64 {
            let inst = instance_for(18, 4000 + inst_seed);
            for rep in 0..10u64 {
                total += solve_ambs(&inst, K, w, rep).cost;
                runs += 1;
            }
        }
        means.push(total as f64 / runs as f64);
    }
    let (m100, m300, m400) = (means[0], means[1], means[2]);
    assert!(
        m400 <= m300 && m300 <= m100,
        "means not monotone in width: w100={m100} w300={m300} w400={m400}"
    );
    println!(
        "acceptance 4 (width monotonicity, 5 instances n=18, 10 reps/width): PASS (means {m100:.2} >= {m300:.2} >= {m400:.2})"
    );
}

/// Criterion 5: local-search contracts over 1000 random cases with n <= 8 —
/// monotone cost, fixpoint idempotence, permutation feasibility.
#[test]
fn acceptance_5_local_search_contracts() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA5);
    for case in 0..1000u64 {
        let n = 1 + (case as usize % 8);
        let inst = instance_for(n, 5000 + case);
        let start = random_solution(n, &mut rng);
        let out = hungarian_local_search(&inst, &start);

        // Feasibility through the validating constructor.
        let ok = Assignment::new(out.p().to_vec(), out.q().to_vec());
        assert!(ok.is_ok(), "case {case}: output not a permutation pair");

        let start_cost = inst.evaluate(&start).unwrap();
        let out_cost = inst.evaluate(&out).unwrap();
        assert!(
            out_cost <= start_cost,
            "case {case}: cost went up {start_cost} -> {out_cost}"
        );

        let again = hungarian_local_search(&inst, &out);
        assert_eq!(
            inst.evaluate(&again).unwrap(),
            out_cost,
            "case {case}: not a fixpoint"
        );
    }
    println!("acceptance 5 (local-search contracts, 1000 cases n<=8): PASS");
}

/// Criterion 6: the Hungarian kernel is exact against exhaustive enumeration
/// for 500 random matrices with m <= 7, and solves m=500 in under a second.
#[test]
fn acceptance_6_hungarian_exactness() {
    fn enumerated_minimum(mat: &Ap2Matrix) -> i64 {
        fn rec(mat: &Ap2Matrix, row: usize, used: &mut [bool], acc: i64, best: &mut i64) {
            if row == mat.m() {
                *best = (*best).min(acc);
                return;
            }
            for c in 0..mat.m() {
                if !used[c] {
                    used[c] = true;
                    rec(mat, row + 1, used, acc + mat.cost(row, c), best);
                    used[c] = false;
                }
            }
        }
        let mut best = i64::MAX;
        rec(mat, 0, &mut vec![false; mat.m()], 0, &mut best);
        best
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x6A);
    for case in 0..500 {
        let m = rng.gen_range(1..=7usize);
        let mat = Ap2Matrix::from_fn(m, |_, _| rng.gen_range(-100..=100));
        let res = solve_ap2(&mat);
        assert_eq!(
            res.total,
            enumerated_minimum(&mat),
            "case {case}: kernel not optimal on m={m}"
        );
    }

    let big = Ap2Matrix::from_fn(500, |r, c| ((r * 7919 + c * 104_729) % 1000) as i64);
    let started = Instant::now();
    let res = solve_ap2(&big);
    let elapsed = started.elapsed();
    assert!(res.total >= 0);
    assert!(
        elapsed < Duration::from_secs(1),
        "m=500 took {elapsed:?}, budget is 1 s"
    );
    println!(
        "acceptance 6 (hungarian exactness, 500 matrices m<=7; m=500 in {:.3}s): PASS",
        elapsed.as_secs_f64()
    );
}

/// Criterion 7: one n=26 instance at default parameters completes end to end
/// within 300 s.
#[test]
fn acceptance_7_scale_smoke() {
    let inst = instance_for(26, 7000);
    let started = Instant::now();
    let got = solve_ambs(&inst, K, WIDTH, 0);
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(300),
        "n=26 took {elapsed:?}, budget is 300 s"
    );
    assert_eq!(inst.evaluate(&got.assignment).unwrap(), got.cost);
    let upper: i64 = got.metadata["upper_cost"].parse().unwrap();
    assert!(got.cost <= upper);
    println!(
        "acceptance 7 (scale smoke, n=26 ambs k=1000 width=300): PASS ({:.2}s, cost {})",
        elapsed.as_secs_f64(),
        got.cost
    );
}

/// Criterion 8: every entry point is deterministic — identical runs, and
/// sequential vs parallel sampling, produce byte-identical solution text.
#[test]
fn acceptance_8_determinism() {
    fn solution_bytes(r: &SolveResult) -> Vec<u8> {
        let mut buf = Vec::new();
        write_solution(&r.assignment, r.cost, &mut buf).unwrap();
        buf
    }

    let inst = instance_for(7, 8000);
    let par = PipelineOptions {
        parallel_sampling: true,
    };

    let runs = [
        solution_bytes(&solve_ambs(&inst, 200, 50, 9)),
        solution_bytes(&solve_ambs(&inst, 200, 50, 9)),
        solution_bytes(&solve_ambs_with(&inst, 200, 50, 9, &par)),
    ];
    assert_eq!(runs[0], runs[1], "ambs differs across identical runs");
    assert_eq!(runs[0], runs[2], "ambs differs under parallel sampling");

    let bs = [
        solution_bytes(&solve_pure_bs(&inst, 200, 50, 9)),
        solution_bytes(&solve_pure_bs(&inst, 200, 50, 9)),
        solution_bytes(&solve_pure_bs_with(&inst, 200, 50, 9, &par)),
    ];
    assert_eq!(bs[0], bs[1], "pure beam differs across identical runs");
    assert_eq!(bs[0], bs[2], "pure beam differs under parallel sampling");

    let sa = [
        solution_bytes(&solve_sampling_only(&inst, 200, 9)),
        solution_bytes(&solve_sampling_only(&inst, 200, 9)),
        solution_bytes(&solve_sampling_only_with(&inst, 200, 9, &par)),
    ];
    assert_eq!(sa[0], sa[1], "sampling differs across identical runs");
    assert_eq!(sa[0], sa[2], "sampling differs under parallel sampling");

    let or = [
        solution_bytes(&brute_force(&inst).unwrap()),
        solution_bytes(&brute_force(&inst).unwrap()),
    ];
    assert_eq!(or[0], or[1], "oracle differs across identical runs");

    println!("acceptance 8 (determinism incl. parallel sampling): PASS");
}
