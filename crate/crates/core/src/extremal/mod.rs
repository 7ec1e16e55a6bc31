//! Extremal numbers `Ex(P, n, m)`: the most 1s an `n x m` matrix can hold
//! while avoiding `P`.

mod decompose;

pub use decompose::{decompose, Category, CategoryCounts, ClaimsReport, DecompositionReport};

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{BitMatrix01, CompiledPattern, MaskHost, TrimmedPattern};

/// Largest `n` and `m` searched exactly without `force`.
pub const EXACT_GUARD: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExResult {
    pub pattern: String,
    pub n: usize,
    pub m: usize,
    pub value: usize,
    pub witness: BitMatrix01,
    pub exact: bool,
}

/// Compact identifier: dimensions, 1s and, for trimmed patterns, the
/// zero rows, e.g. `2x3:1.1,1.3,2.2`.
pub fn pattern_id(q: &TrimmedPattern) -> String {
    let p = q.base();
    let ones: Vec<String> = p.ones().iter().map(|(r, c)| format!("{r}.{c}")).collect();
    let mut id = format!("{}x{}:{}", p.rows(), p.cols(), ones.join(","));
    if !q.zero_rows().is_empty() {
        let z: Vec<String> = q.zero_rows().iter().map(|r| r.to_string()).collect();
        id.push_str(&format!("|z{}", z.join(",")));
    }
    id
}

/// A set of patterns to avoid together.
struct Pattern {
    parts: Vec<(CompiledPattern, bool)>,
}

impl Pattern {
    fn new(qs: &[TrimmedPattern]) -> Result<Self> {
        if qs.is_empty() || qs.iter().any(|q| q.ones_count() == 0) {
            return Err(Error::EmptyPattern);
        }
        Ok(Pattern {
            parts: qs
                .iter()
                .map(|q| (CompiledPattern::new(q.base()), !q.zero_rows().is_empty()))
                .collect(),
        })
    }

    /// Whether setting `(r, c)` (0-based) in `host` creates an occurrence,
    /// given that `host` was free before. `row_was_empty` refers to row `r`
    /// before the new 1.
    fn creates(&self, host: &MaskHost, r: usize, c: usize, row_was_empty: bool) -> bool {
        self.parts.iter().any(|(p, trimmed)| {
            if *trimmed && row_was_empty {
                p.embeds(&host.view(), true)
            } else {
                p.embeds_through(&host.view(), *trimmed, r, c)
            }
        })
    }
}

fn set_id(qs: &[TrimmedPattern]) -> String {
    qs.iter().map(pattern_id).collect::<Vec<_>>().join("+")
}

/// Exact branch-and-bound over `n x m` matrices. Every smaller size is
/// solved first: deleting rows or columns keeps a matrix free, so those
/// values bound the weight of any set of rows or columns.
pub struct ExactSolver {
    pattern: Pattern,
    id: String,
    deadline: Option<Instant>,
    /// `(lower, upper, witness)` per solved size.
    table: HashMap<(usize, usize), (usize, usize, BitMatrix01)>,
}

impl ExactSolver {
    pub fn new(q: &TrimmedPattern, time_limit: Option<Duration>) -> Result<Self> {
        Self::for_set(std::slice::from_ref(q), time_limit)
    }

    /// Matrices avoiding every pattern of `qs`.
    pub fn for_set(qs: &[TrimmedPattern], time_limit: Option<Duration>) -> Result<Self> {
        Ok(ExactSolver {
            pattern: Pattern::new(qs)?,
            id: set_id(qs),
            deadline: time_limit.map(|t| Instant::now() + t),
            table: HashMap::new(),
        })
    }

    /// `Ex(q, n, m)`, solving every smaller size along the way.
    pub fn solve(&mut self, n: usize, m: usize) -> Result<ExResult> {
        if n == 0 || m == 0 {
            return Err(Error::ZeroDimension { rows: n, cols: m });
        }
        if m > 64 {
            return Err(Error::SizeGuard(format!("exact search supports at most 64 columns, got {m}")));
        }
        for a in 1..=n {
            for b in 1..=m {
                if !self.table.contains_key(&(a, b)) {
                    let r = self.search(a, b);
                    self.table.insert((a, b), r);
                }
            }
        }
        let (lower, upper, witness) = self.table[&(n, m)].clone();
        Ok(ExResult {
            pattern: self.id.clone(),
            n,
            m,
            value: lower,
            witness,
            exact: lower == upper,
        })
    }

    fn upper(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        self.table.get(&(a, b)).map_or(a * b, |e| e.1)
    }

    fn search(&self, n: usize, m: usize) -> (usize, usize, BitMatrix01) {
        let mut floor = 0;
        let mut fallback = BitMatrix01::new(n, m).expect("positive dims");
        for (a, b) in [(n, m - 1), (n - 1, m)] {
            if let Some((v, wit, _)) = self.table.get(&(a, b)).map(|e| (e.0, &e.2, ())) {
                if v > floor {
                    floor = v;
                    fallback = BitMatrix01::new(n, m).expect("positive dims");
                    for (r, c) in wit.ones() {
                        fallback.set(r, c);
                    }
                }
            }
        }
        let mut st = Dfs {
            pat: &self.pattern,
            n,
            m,
            host: MaskHost::empty(n, m),
            weight: 0,
            row_counts: vec![0; n],
            col_counts: vec![0; m],
            target: floor,
            best: None,
            col_ub: (0..=m).map(|b| self.upper(n, b)).collect(),
            row_ub: (0..=n).map(|a| self.upper(a, m)).collect(),
            scratch: Vec::with_capacity(n.max(m)),
            deadline: self.deadline,
            nodes: 0,
            timed_out: false,
        };
        st.run(0, n - 1);
        // A column adds at most n, a row at most m.
        let upper = (self.upper(n, m - 1) + n).min(self.upper(n - 1, m) + m);
        match st.best {
            Some((v, wit)) => (v, if st.timed_out { upper.max(v) } else { v }, wit),
            None => (floor, if st.timed_out { upper.max(floor) } else { floor }, fallback),
        }
    }
}

struct Dfs<'a> {
    pat: &'a Pattern,
    n: usize,
    m: usize,
    host: MaskHost,
    weight: usize,
    row_counts: Vec<usize>,
    col_counts: Vec<usize>,
    /// Leaves below this weight are not wanted.
    target: usize,
    best: Option<(usize, BitMatrix01)>,
    /// Upper bounds for `n x b` and `a x m`.
    col_ub: Vec<usize>,
    row_ub: Vec<usize>,
    scratch: Vec<usize>,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
}

impl Dfs<'_> {
    /// Whether a matrix of weight `target` can still be reached with cell
    /// `(r, c)` next to decide.
    fn feasible(&mut self, c: usize, r: usize) -> bool {
        let (n, m, t) = (self.n, self.m, self.target);
        // The s lightest finished columns plus at most Ex(n, m - s).
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.col_counts[..c]);
        self.scratch.sort_unstable();
        let mut sum = 0;
        for (s, &x) in self.scratch.iter().enumerate() {
            sum += x;
            if sum + self.col_ub[m - s - 1] < t {
                return false;
            }
        }
        // Finished columns with the current one filled to the bottom.
        if self.weight + r + 1 + self.col_ub[m - c - 1] < t {
            return false;
        }
        // The s rows with least room.
        self.scratch.clear();
        let later = m - c - 1;
        for (row, &x) in self.row_counts.iter().enumerate() {
            self.scratch.push(x + later + usize::from(row <= r));
        }
        self.scratch.sort_unstable();
        let mut sum = 0;
        for (s, &x) in self.scratch.iter().enumerate() {
            sum += x;
            if sum + self.row_ub[n - s - 1] < t {
                return false;
            }
        }
        true
    }

    /// Decides cell `(r, c)`; columns go left to right, rows top down.
    fn run(&mut self, c: usize, r: usize) {
        if self.timed_out {
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                    return;
                }
            }
        }
        if c == self.m {
            if self.weight >= self.target {
                self.best = Some((self.weight, self.host.to_matrix()));
                self.target = self.weight + 1;
            }
            return;
        }
        if !self.feasible(c, r) {
            return;
        }
        let (nc, nr) = if r == 0 { (c + 1, self.n - 1) } else { (c, r - 1) };
        let was_empty = self.host.row_mask(r) == 0;
        self.host.set(r, c);
        if !self.pat.creates(&self.host, r, c, was_empty) {
            self.weight += 1;
            self.row_counts[r] += 1;
            self.col_counts[c] += 1;
            self.run(nc, nr);
            self.weight -= 1;
            self.row_counts[r] -= 1;
            self.col_counts[c] -= 1;
        }
        self.host.clear(r, c);
        self.run(nc, nr);
    }
}

/// `Ex(q, n, m)` by exhaustive branch-and-bound. Sizes above
/// [`EXACT_GUARD`] need `force`. On timeout the best matrix found so far is
/// returned with `exact = false`.
pub fn ex_exact(
    q: &TrimmedPattern,
    n: usize,
    m: usize,
    time_limit: Option<Duration>,
    force: bool,
) -> Result<ExResult> {
    ex_exact_set(std::slice::from_ref(q), n, m, time_limit, force)
}

/// [`ex_exact`] for matrices avoiding all of `qs`.
pub fn ex_exact_set(
    qs: &[TrimmedPattern],
    n: usize,
    m: usize,
    time_limit: Option<Duration>,
    force: bool,
) -> Result<ExResult> {
    if !force && (n > EXACT_GUARD || m > EXACT_GUARD) {
        return Err(Error::SizeGuard(format!(
            "{n} x {m} exceeds the {EXACT_GUARD} x {EXACT_GUARD} exact-search guard"
        )));
    }
    ExactSolver::for_set(qs, time_limit)?.solve(n, m)
}

/// Saturation heuristic: add 1s in random order while they keep the matrix
/// free, over `rounds` seeds derived from `seed`; returns the heaviest.
pub fn ex_lower_greedy(
    q: &TrimmedPattern,
    n: usize,
    m: usize,
    seed: u64,
    rounds: usize,
) -> Result<ExResult> {
    let pat = Pattern::new(std::slice::from_ref(q))?;
    if n == 0 || m == 0 {
        return Err(Error::ZeroDimension { rows: n, cols: m });
    }
    if m > 64 {
        return Err(Error::SizeGuard(format!("greedy search supports at most 64 columns, got {m}")));
    }
    let mut best: Option<(usize, BitMatrix01)> = None;
    let mut cells: Vec<(usize, usize)> = (0..n).flat_map(|r| (0..m).map(move |c| (r, c))).collect();
    for round in 0..rounds.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(round as u64));
        cells.shuffle(&mut rng);
        let mut host = MaskHost::empty(n, m);
        let mut weight = 0;
        for &(r, c) in &cells {
            let was_empty = host.row_mask(r) == 0;
            host.set(r, c);
            if pat.creates(&host, r, c, was_empty) {
                host.clear(r, c);
            } else {
                weight += 1;
            }
        }
        if best.as_ref().is_none_or(|(w, _)| weight > *w) {
            best = Some((weight, host.to_matrix()));
        }
    }
    let (value, witness) = best.expect("at least one round");
    Ok(ExResult {
        pattern: pattern_id(q),
        n,
        m,
        value,
        witness,
        exact: false,
    })
}
