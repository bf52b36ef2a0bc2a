//! Exact minimum-cost square assignment (AP2).
//!
//! Shortest-augmenting-path Hungarian algorithm, O(m³). This kernel is on
//! the hot path twice: the local search re-optimizes one pairing per move,
//! and the beam search solves one projected AP2 per successor bound.

use crate::error::{Ap3Error, Result};

/// Dense square 2D assignment cost matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ap2Matrix {
    m: usize,
    cost: Vec<i64>,
}

impl Ap2Matrix {
    pub fn new(m: usize, cost: Vec<i64>) -> Result<Self> {
        if m == 0 {
            return Err(Ap3Error::InvalidArgument("matrix must have m >= 1".into()));
        }
        if cost.len() != m * m {
            return Err(Ap3Error::InvalidArgument(format!(
                "expected {} entries for m = {}, got {}",
                m * m,
                m,
                cost.len()
            )));
        }
        Ok(Self { m, cost })
    }

    /// Builds an `m × m` matrix from an entry function.
    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        assert!(m >= 1, "matrix must have m >= 1");
        let mut cost = Vec::with_capacity(m * m);
        for r in 0..m {
            for c in 0..m {
                cost.push(f(r, c));
            }
        }
        Self { m, cost }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn cost(&self, r: usize, c: usize) -> i64 {
        debug_assert!(r < self.m && c < self.m);
        self.cost[r * self.m + c]
    }
}

/// Optimal row-to-column matching: `assign[r]` is the column matched to row
/// `r`, and `total` is the (minimum) sum of the matched entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ap2Result {
    pub assign: Vec<usize>,
    pub total: i64,
}

/// Solves the assignment problem exactly.
///
/// Output is deterministic: rows are augmented in ascending index order and
/// ties during the search resolve to the lowest column index, so equal-cost
/// optima always come out the same way. Entries of very large magnitude
/// (within a factor of `4(m+1)` of `i64::MAX`) are handled through a widened
/// arithmetic path, which is what makes infeasibility sentinels in projected
/// matrices safe.
pub fn solve_ap2(mat: &Ap2Matrix) -> Ap2Result {
    let m = mat.m as i64;
    let limit = (i64::MAX / (4 * (m + 1))) as u64;
    let widen = mat.cost.iter().any(|&c| c.unsigned_abs() > limit);
    let assign = if widen {
        augment::<i128>(mat)
    } else {
        augment::<i64>(mat)
    };
    let total = assign
        .iter()
        .enumerate()
        .map(|(r, &c)| mat.cost(r, c) as i128)
        .sum::<i128>();
    let total = total.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
    Ap2Result { assign, total }
}

/// Potential arithmetic, instantiated at i64 for the common case and i128
/// when entry magnitudes could overflow the dual updates.
trait Potential: Copy + Ord {
    const MAX: Self;
    const ZERO: Self;
    fn from_cost(c: i64) -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
}

impl Potential for i64 {
    const MAX: Self = i64::MAX;
    const ZERO: Self = 0;
    #[inline]
    fn from_cost(c: i64) -> Self {
        c
    }
    #[inline]
    fn add(self, other: Self) -> Self {
        self + other
    }
    #[inline]
    fn sub(self, other: Self) -> Self {
        self - other
    }
}

impl Potential for i128 {
    const MAX: Self = i128::MAX;
    const ZERO: Self = 0;
    #[inline]
    fn from_cost(c: i64) -> Self {
        c as i128
    }
    #[inline]
    fn add(self, other: Self) -> Self {
        self + other
    }
    #[inline]
    fn sub(self, other: Self) -> Self {
        self - other
    }
}

// Shortest augmenting path formulation with dual potentials, 1-indexed with
// column 0 as the virtual start. Returns assign[row] = col.
fn augment<T: Potential>(mat: &Ap2Matrix) -> Vec<usize> {
    let m = mat.m;
    let mut u = vec![T::ZERO; m + 1];
    let mut v = vec![T::ZERO; m + 1];
    let mut row_of = vec![0usize; m + 1]; // row matched to column (1-based), 0 = free
    let mut way = vec![0usize; m + 1];

    for r in 1..=m {
        row_of[0] = r;
        let mut j0 = 0usize;
        let mut minv = vec![T::MAX; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = T::MAX;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = T::from_cost(mat.cost(i0 - 1, j - 1)).sub(u[i0]).sub(v[j]);
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[row_of[j]] = u[row_of[j]].add(delta);
                    v[j] = v[j].sub(delta);
                } else {
                    minv[j] = minv[j].sub(delta);
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assign = vec![0usize; m];
    for j in 1..=m {
        assign[row_of[j] - 1] = j - 1;
    }
    assign
}
