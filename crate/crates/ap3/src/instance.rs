//! Problem instances: a dense cubic cost array with generation and text I/O.
//!
//! An instance of size `n` assigns a cost to every triple `(i, j, k)` with
//! all three indices in `0..n`. A feasible solution picks `n` triples
//! covering every `i`, every `j`, and every `k` exactly once.

use std::io::{BufRead, BufReader, BufWriter, Read, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Ap3Error, Result};

/// Dense axial three-index assignment instance.
///
/// Costs are 64-bit signed integers stored row-major: index `i` slowest,
/// then `j`, then `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ap3Instance {
    n: usize,
    cost: Vec<i64>,
}

impl Ap3Instance {
    /// Builds an instance from a flat row-major cost array of length `n³`.
    pub fn new(n: usize, cost: Vec<i64>) -> Result<Self> {
        if n == 0 {
            return Err(Ap3Error::InvalidArgument("n must be at least 1".into()));
        }
        let entries = checked_cube(n)?;
        if cost.len() != entries {
            return Err(Ap3Error::InvalidArgument(format!(
                "expected {} cost entries for n = {}, got {}",
                entries,
                n,
                cost.len()
            )));
        }
        Ok(Self { n, cost })
    }

    /// Generates an instance with every entry drawn independently and
    /// uniformly from `lo..=hi`. The same seed yields a bit-identical
    /// instance.
    pub fn random(n: usize, lo: i64, hi: i64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Ap3Error::InvalidArgument("n must be at least 1".into()));
        }
        if lo > hi {
            return Err(Ap3Error::InvalidArgument(format!(
                "empty cost range: lo = {lo} > hi = {hi}"
            )));
        }
        let entries = checked_cube(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cost = (0..entries).map(|_| rng.gen_range(lo..=hi)).collect();
        Ok(Self { n, cost })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cost of the triple `(i, j, k)`.
    #[inline]
    pub fn cost(&self, i: usize, j: usize, k: usize) -> i64 {
        debug_assert!(i < self.n && j < self.n && k < self.n);
        self.cost[(i * self.n + j) * self.n + k]
    }

    pub fn min_cost(&self) -> i64 {
        *self.cost.iter().min().expect("instance is nonempty")
    }

    pub fn max_cost(&self) -> i64 {
        *self.cost.iter().max().expect("instance is nonempty")
    }

    /// Total cost of a feasible solution: `Σ cost[i][p[i]][q[i]]`.
    pub fn evaluate(&self, a: &crate::solution::Assignment) -> Result<i64> {
        if a.n() != self.n {
            return Err(Ap3Error::InvalidArgument(format!(
                "assignment has n = {}, instance has n = {}",
                a.n(),
                self.n
            )));
        }
        Ok(self.eval_perms(a.p(), a.q()))
    }

    /// Unchecked evaluation over raw permutation slices.
    #[inline]
    pub(crate) fn eval_perms(&self, p: &[usize], q: &[usize]) -> i64 {
        debug_assert_eq!(p.len(), self.n);
        debug_assert_eq!(q.len(), self.n);
        (0..self.n).map(|i| self.cost(i, p[i], q[i])).sum()
    }

    /// Parses the plain-text instance format (see [`write_to`](Self::write_to)).
    pub fn read_from<R: Read>(reader: R) -> Result<Self> {
        let mut tokens = Tokens::new(reader);
        let n: usize = tokens.next_parsed("instance size n")?;
        if n == 0 {
            return Err(tokens.error("n must be at least 1"));
        }
        let entries = checked_cube(n)?;
        // A corrupt header must not translate into a giant upfront
        // allocation; parsing runs out of tokens long before the vector
        // grows that far.
        let mut cost = Vec::with_capacity(entries.min(1 << 20));
        for _ in 0..entries {
            cost.push(tokens.next_parsed::<i64>("cost entry")?);
        }
        if let Some(extra) = tokens.next()? {
            return Err(tokens.error(&format!(
                "expected exactly {entries} cost entries, found extra token {extra:?}"
            )));
        }
        Ok(Self { n, cost })
    }

    /// Writes the instance as UTF-8 text: the size `n` on the first line,
    /// then `n³` integers in row-major order (`i` slowest, then `j`, then
    /// `k`), one `(i, j)` row of `n` values per line. Output bytes are
    /// deterministic.
    pub fn write_to<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = BufWriter::new(writer);
        writeln!(w, "{}", self.n)?;
        for row in self.cost.chunks(self.n) {
            let mut line = String::with_capacity(row.len() * 4);
            for (idx, c) in row.iter().enumerate() {
                if idx > 0 {
                    line.push(' ');
                }
                line.push_str(&c.to_string());
            }
            writeln!(w, "{line}")?;
        }
        w.flush()?;
        Ok(())
    }
}

fn checked_cube(n: usize) -> Result<usize> {
    n.checked_mul(n)
        .and_then(|s| s.checked_mul(n))
        .ok_or_else(|| Ap3Error::InvalidArgument(format!("instance size n = {n} overflows")))
}

/// Whitespace-separated token stream that tracks line and token position
/// for parse errors.
struct Tokens<R: Read> {
    lines: std::io::Lines<BufReader<R>>,
    current: Vec<String>,
    pos: usize,
    line_no: usize,
    token_no: usize,
}

impl<R: Read> Tokens<R> {
    fn new(reader: R) -> Self {
        Self {
            lines: BufReader::new(reader).lines(),
            current: Vec::new(),
            pos: 0,
            line_no: 0,
            token_no: 0,
        }
    }

    fn next(&mut self) -> Result<Option<String>> {
        while self.pos >= self.current.len() {
            match self.lines.next() {
                Some(line) => {
                    let line = line?;
                    self.line_no += 1;
                    self.current = line.split_whitespace().map(str::to_owned).collect();
                    self.pos = 0;
                }
                None => return Ok(None),
            }
        }
        let tok = self.current[self.pos].clone();
        self.pos += 1;
        self.token_no += 1;
        Ok(Some(tok))
    }

    fn next_parsed<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        match self.next()? {
            Some(tok) => tok
                .parse()
                .map_err(|_| self.error(&format!("expected {what}, got {tok:?}"))),
            None => Err(self.error(&format!("unexpected end of input, expected {what}"))),
        }
    }

    fn error(&self, msg: &str) -> Ap3Error {
        Ap3Error::Parse {
            line: self.line_no,
            token: self.token_no,
            msg: msg.to_string(),
        }
    }
}
