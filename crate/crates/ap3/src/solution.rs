//! Feasible solutions and solver results.
//!
//! A solution is a pair of permutations `(p, q)`: the chosen triples are
//! `(i, p[i], q[i])` for `i = 0..n`, which covers every value of each of
//! the three indices exactly once.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::time::Duration;

use crate::error::{Ap3Error, Result};
use crate::instance::Ap3Instance;

/// A feasible solution encoded as two permutations of `{0..n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    p: Vec<usize>,
    q: Vec<usize>,
}

impl Assignment {
    /// Validates that `p` and `q` are equal-length permutations of `0..n`.
    pub fn new(p: Vec<usize>, q: Vec<usize>) -> Result<Self> {
        if p.is_empty() {
            return Err(Ap3Error::InvalidArgument(
                "assignment must have n >= 1".into(),
            ));
        }
        if p.len() != q.len() {
            return Err(Ap3Error::InvalidArgument(format!(
                "p has length {}, q has length {}",
                p.len(),
                q.len()
            )));
        }
        if !is_permutation(&p) {
            return Err(Ap3Error::InvalidArgument(
                "p is not a permutation of 0..n".into(),
            ));
        }
        if !is_permutation(&q) {
            return Err(Ap3Error::InvalidArgument(
                "q is not a permutation of 0..n".into(),
            ));
        }
        Ok(Self { p, q })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "assignment must have n >= 1");
        Self {
            p: (0..n).collect(),
            q: (0..n).collect(),
        }
    }

    /// Internal fast path for permutations that are valid by construction.
    pub(crate) fn from_perms_unchecked(p: Vec<usize>, q: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&p) && is_permutation(&q) && p.len() == q.len());
        Self { p, q }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[usize] {
        &self.p
    }

    pub fn q(&self) -> &[usize] {
        &self.q
    }

    /// The induced triples `(i, p[i], q[i])` in order of `i`.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.n()).map(move |i| (i, self.p[i], self.q[i]))
    }
}

fn is_permutation(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    for &x in v {
        if x >= v.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Outcome of one solver run.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub assignment: Assignment,
    pub cost: i64,
    pub elapsed: Duration,
    /// Algorithm name, parameters, seed, phase timings.
    pub metadata: BTreeMap<String, String>,
}

impl SolveResult {
    /// Builds a result whose cost is evaluated against the instance, so the
    /// `cost == evaluate(instance, assignment)` invariant holds by
    /// construction.
    pub fn new(instance: &Ap3Instance, assignment: Assignment, elapsed: Duration) -> Result<Self> {
        let cost = instance.evaluate(&assignment)?;
        Ok(Self {
            assignment,
            cost,
            elapsed,
            metadata: BTreeMap::new(),
        })
    }

    pub(crate) fn from_parts(assignment: Assignment, cost: i64, elapsed: Duration) -> Self {
        Self {
            assignment,
            cost,
            elapsed,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }
}

/// Writes the solution text format: `n`, then `p`, then `q` (both
/// space-separated on one line), then the cost.
pub fn write_solution<W: Write>(a: &Assignment, cost: i64, writer: W) -> Result<()> {
    let mut w = std::io::BufWriter::new(writer);
    writeln!(w, "{}", a.n())?;
    writeln!(w, "{}", join(a.p()))?;
    writeln!(w, "{}", join(a.q()))?;
    writeln!(w, "{cost}")?;
    w.flush()?;
    Ok(())
}

/// Parses the solution text format back into an assignment and its recorded
/// cost. The cost line is returned as read; callers that hold the instance
/// should re-evaluate to cross-check it.
pub fn read_solution<R: Read>(reader: R) -> Result<(Assignment, i64)> {
    let mut content = String::new();
    std::io::BufReader::new(reader).read_to_string(&mut content)?;
    let parse_err = |line: usize, msg: &str| Ap3Error::Parse {
        line,
        token: 0,
        msg: msg.to_string(),
    };
    let mut lines = content.lines();
    let n: usize = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing size line"))?
        .trim()
        .parse()
        .map_err(|_| parse_err(1, "size line is not an integer"))?;
    let mut perm_line = |line_no: usize, name: &str| -> Result<Vec<usize>> {
        let raw = lines
            .next()
            .ok_or_else(|| parse_err(line_no, &format!("missing {name} line")))?;
        let vals: Vec<usize> = raw
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(line_no, &format!("{name} line has a non-integer token")))?;
        if vals.len() != n {
            return Err(parse_err(
                line_no,
                &format!("{name} has {} entries, expected {n}", vals.len()),
            ));
        }
        Ok(vals)
    };
    let p = perm_line(2, "p")?;
    let q = perm_line(3, "q")?;
    let cost: i64 = lines
        .next()
        .ok_or_else(|| parse_err(4, "missing cost line"))?
        .trim()
        .parse()
        .map_err(|_| parse_err(4, "cost line is not an integer"))?;
    Ok((Assignment::new(p, q)?, cost))
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
