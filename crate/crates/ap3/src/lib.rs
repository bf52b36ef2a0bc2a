//! Solvers for the axial three-index assignment problem.
//!
//! Given an `n × n × n` integer cost array, pick `n` triples covering every
//! value of each index exactly once at minimum total cost. The crate
//! provides:
//!
//! * a sampling phase that unions local optima into a reduced search space
//!   (the approximate muscle) and keeps the best sample as an upper bound,
//! * a level-ordered beam search over that space, scored by projection
//!   lower bounds solved exactly with a Hungarian kernel,
//! * a pure beam-search baseline over the full triple set,
//! * a multi-restart local-search baseline,
//! * an exhaustive oracle for small instances,
//! * deterministic, seedable instance generation and plain-text I/O.
//!
//! All solvers are deterministic for a fixed seed, including when sampling
//! runs in parallel.

pub mod beam;
pub mod error;
pub mod hungarian;
pub mod instance;
pub mod local_search;
pub mod muscle;
pub mod oracle;
pub mod pipeline;
pub mod solution;

pub use beam::{
    beam_search, compute_level_order, lower_bound, pure_beam_search, BeamCandidate, LevelOrder,
    INFEASIBLE_BOUND,
};
pub use error::{Ap3Error, Result};
pub use hungarian::{solve_ap2, Ap2Matrix, Ap2Result};
pub use instance::Ap3Instance;
pub use local_search::{hungarian_local_search, random_solution};
pub use muscle::{derive_seed, generate_am, generate_am_parallel, Muscle, MuscleStats};
pub use oracle::{brute_force, MAX_EXACT_N};
pub use pipeline::{
    solve_ambs, solve_ambs_with, solve_pure_bs, solve_pure_bs_with, solve_sampling_only,
    solve_sampling_only_with, PipelineOptions, DEFAULT_BEAM_WIDTH, DEFAULT_SAMPLES,
};
pub use solution::{read_solution, write_solution, Assignment, SolveResult};
