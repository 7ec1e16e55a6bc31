//! Finite 0-1 matrices used both as forbidden patterns and as hosts.
//!
//! Cells are 1-based and rows are numbered bottom-to-top, so `(1, 1)` is the
//! bottom-left cell. Pictures (see [`BitMatrix01::from_picture`] and the
//! `Display` impl) are written top row first, the way matrices are drawn.

mod catalog;
mod containment;
mod format;
mod trimmed;

pub use catalog::{hat, hat4_left, hat4_right, hpair, identity, vpair, w, w_double_prime, w_prime};
pub use containment::{contains, contains_at, contains_trimmed, Matcher};
pub(crate) use containment::{CompiledPattern, MaskHost};
pub use format::{parse_m01, write_m01};
pub use trimmed::{trim, TrimmedPattern};

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Hosts up to this many columns keep a dense bitset; wider ones a sorted cell set.
pub const DENSE_MAX_COLS: usize = 4096;

#[derive(Clone, Debug)]
enum Storage {
    Dense { words: usize, bits: Vec<u64> },
    Sparse(BTreeSet<(usize, usize)>),
}

/// A `rows x cols` 0-1 matrix with 1-based cells, rows numbered bottom-to-top.
#[derive(Clone, Debug)]
pub struct BitMatrix01 {
    rows: usize,
    cols: usize,
    weight: usize,
    storage: Storage,
}

impl BitMatrix01 {
    /// All-zero matrix.
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        let storage = if cols <= DENSE_MAX_COLS {
            let words = cols.div_ceil(64);
            Storage::Dense {
                words,
                bits: vec![0; words * rows],
            }
        } else {
            Storage::Sparse(BTreeSet::new())
        };
        Ok(BitMatrix01 {
            rows,
            cols,
            weight: 0,
            storage,
        })
    }

    /// Builds a matrix from its 1-cells. Out-of-range and repeated cells are rejected.
    pub fn from_ones<I>(rows: usize, cols: usize, ones: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = Self::new(rows, cols)?;
        for (row, col) in ones {
            m.check(row, col)?;
            if !m.set(row, col) {
                return Err(Error::DuplicateCell { row, col });
            }
        }
        Ok(m)
    }

    /// Parses a picture drawn top row first. `x`, `1`, `*` and `•` are ones;
    /// `.`, `0`, `-` and `_` are zeros. Whitespace is ignored.
    pub fn from_picture(picture: &str) -> Result<Self> {
        let lines: Vec<Vec<bool>> = picture
            .lines()
            .map(|l| {
                l.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| matches!(c, 'x' | 'X' | '1' | '*' | '•'))
                    .collect::<Vec<_>>()
            })
            .filter(|l| !l.is_empty())
            .collect();
        let rows = lines.len();
        let cols = lines.iter().map(Vec::len).max().unwrap_or(0);
        let mut ones = Vec::new();
        for (i, line) in lines.iter().enumerate() {
            let row = rows - i;
            for (j, &b) in line.iter().enumerate() {
                if b {
                    ones.push((row, j + 1));
                }
            }
        }
        Self::from_ones(rows, cols, ones)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of 1s.
    pub fn weight(&self) -> usize {
        self.weight
    }

    fn check(&self, row: usize, col: usize) -> Result<()> {
        if row == 0 || col == 0 || row > self.rows || col > self.cols {
            return Err(Error::CellOutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Value of a cell; cells outside the matrix read as 0.
    pub fn get(&self, row: usize, col: usize) -> bool {
        if row == 0 || col == 0 || row > self.rows || col > self.cols {
            return false;
        }
        match &self.storage {
            Storage::Dense { words, bits } => {
                let (r, c) = (row - 1, col - 1);
                bits[r * words + c / 64] >> (c % 64) & 1 == 1
            }
            Storage::Sparse(set) => set.contains(&(row, col)),
        }
    }

    /// Sets a cell to 1, returning whether it was 0 before.
    ///
    /// Panics if the cell is out of range.
    pub fn set(&mut self, row: usize, col: usize) -> bool {
        self.check(row, col).expect("cell out of range");
        let fresh = match &mut self.storage {
            Storage::Dense { words, bits } => {
                let (r, c) = (row - 1, col - 1);
                let w = &mut bits[r * *words + c / 64];
                let mask = 1u64 << (c % 64);
                let fresh = *w & mask == 0;
                *w |= mask;
                fresh
            }
            Storage::Sparse(set) => set.insert((row, col)),
        };
        if fresh {
            self.weight += 1;
        }
        fresh
    }

    /// Clears a cell, returning whether it was 1 before.
    pub fn unset(&mut self, row: usize, col: usize) -> bool {
        if self.check(row, col).is_err() {
            return false;
        }
        let was = match &mut self.storage {
            Storage::Dense { words, bits } => {
                let (r, c) = (row - 1, col - 1);
                let w = &mut bits[r * *words + c / 64];
                let mask = 1u64 << (c % 64);
                let was = *w & mask != 0;
                *w &= !mask;
                was
            }
            Storage::Sparse(set) => set.remove(&(row, col)),
        };
        if was {
            self.weight -= 1;
        }
        was
    }

    /// All 1-cells ordered by row, then column.
    pub fn ones(&self) -> Vec<(usize, usize)> {
        match &self.storage {
            Storage::Dense { words, bits } => {
                let mut out = Vec::with_capacity(self.weight);
                for r in 0..self.rows {
                    for w in 0..*words {
                        let mut x = bits[r * words + w];
                        while x != 0 {
                            let b = x.trailing_zeros() as usize;
                            out.push((r + 1, w * 64 + b + 1));
                            x &= x - 1;
                        }
                    }
                }
                out
            }
            Storage::Sparse(set) => set.iter().copied().collect(),
        }
    }

    /// Columns of the 1s in `row`, ascending.
    pub fn row_ones(&self, row: usize) -> Vec<usize> {
        if row == 0 || row > self.rows {
            return Vec::new();
        }
        match &self.storage {
            Storage::Dense { words, bits } => {
                let mut out = Vec::new();
                for w in 0..*words {
                    let mut x = bits[(row - 1) * words + w];
                    while x != 0 {
                        let b = x.trailing_zeros() as usize;
                        out.push(w * 64 + b + 1);
                        x &= x - 1;
                    }
                }
                out
            }
            Storage::Sparse(set) => set
                .range((row, 0)..(row + 1, 0))
                .map(|&(_, c)| c)
                .collect(),
        }
    }

    /// Per-row column lists, index 0 is row 1.
    pub fn row_lists(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.rows];
        for (r, c) in self.ones() {
            lists[r - 1].push(c);
        }
        lists
    }

    /// Per-column row lists, index 0 is column 1.
    pub fn col_lists(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.cols];
        for (r, c) in self.ones() {
            lists[c - 1].push(r);
        }
        lists
    }

    /// Rows (1-based) that contain no 1.
    pub fn zero_rows(&self) -> BTreeSet<usize> {
        let mut nonempty = vec![false; self.rows];
        for (r, _) in self.ones() {
            nonempty[r - 1] = true;
        }
        (1..=self.rows).filter(|&r| !nonempty[r - 1]).collect()
    }

    fn map_cells<F>(&self, rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> (usize, usize),
    {
        let mut out = Self::new(rows, cols).expect("positive dims");
        for (r, c) in self.ones() {
            let (r2, c2) = f(r, c);
            out.set(r2, c2);
        }
        out
    }

    /// Swaps rows and columns: `(r, c) -> (c, r)`.
    pub fn transpose(&self) -> Self {
        self.map_cells(self.cols, self.rows, |r, c| (c, r))
    }

    /// Mirror image across a vertical axis: column `c` becomes `cols + 1 - c`.
    pub fn reflect_y(&self) -> Self {
        let cols = self.cols;
        self.map_cells(self.rows, cols, |r, c| (r, cols + 1 - c))
    }

    /// Mirror image across a horizontal axis: row `r` becomes `rows + 1 - r`.
    pub fn reflect_x(&self) -> Self {
        let rows = self.rows;
        self.map_cells(rows, self.cols, |r, c| (rows + 1 - r, c))
    }

    /// Exactly one 1 in every row and every column.
    pub fn is_permutation_matrix(&self) -> bool {
        if self.rows != self.cols || self.weight != self.rows {
            return false;
        }
        let mut row_seen = vec![false; self.rows];
        let mut col_seen = vec![false; self.cols];
        for (r, c) in self.ones() {
            if row_seen[r - 1] || col_seen[c - 1] {
                return false;
            }
            row_seen[r - 1] = true;
            col_seen[c - 1] = true;
        }
        true
    }

    /// Exactly one 1 in every column.
    pub fn is_light(&self) -> bool {
        let mut count = vec![0usize; self.cols];
        for (_, c) in self.ones() {
            count[c - 1] += 1;
        }
        count.iter().all(|&k| k == 1)
    }

    /// The permutation matrix `P_pi` with a 1 at `(i, pi(i))`.
    pub fn permutation_matrix(pi: &Permutation) -> Self {
        let k = pi.len();
        Self::from_ones(k, k, pi.values().iter().enumerate().map(|(i, &v)| (i + 1, v)))
            .expect("a permutation has distinct cells")
    }

    /// Reads a permutation back from a permutation matrix.
    pub fn to_permutation(&self) -> Result<Permutation> {
        if !self.is_permutation_matrix() {
            return Err(Error::NotPermutationMatrix);
        }
        let mut vals = vec![0; self.rows];
        for (r, c) in self.ones() {
            vals[r - 1] = c;
        }
        Permutation::new(vals)
    }

    /// Kronecker product with the hat: every 1 at `(r, c)` becomes a hat on
    /// rows `2r-1..=2r` and columns `3c-2..=3c`.
    pub fn kron_hat(&self) -> Result<Self> {
        if !self.is_permutation_matrix() {
            return Err(Error::NotPermutationMatrix);
        }
        let k = self.rows;
        let mut out = Self::new(2 * k, 3 * k)?;
        for (r, c) in self.ones() {
            out.set(2 * r, 3 * c - 1);
            out.set(2 * r - 1, 3 * c - 2);
            out.set(2 * r - 1, 3 * c);
        }
        Ok(out)
    }

    /// Kronecker product with the vertical pair: every 1 at `(r, c)` becomes
    /// the two cells `(2r-1, c)` and `(2r, c)`. The result is `2k x k`.
    pub fn kron_vpair(&self) -> Result<Self> {
        if !self.is_permutation_matrix() {
            return Err(Error::NotPermutationMatrix);
        }
        let k = self.rows;
        let mut out = Self::new(2 * k, k)?;
        for (r, c) in self.ones() {
            out.set(2 * r - 1, c);
            out.set(2 * r, c);
        }
        Ok(out)
    }

    /// Kronecker product with the horizontal pair: every 1 at `(r, c)` becomes
    /// `(r, 2c-1)` and `(r, 2c)`. The result is `k x 2k`.
    pub fn kron_hpair(&self) -> Result<Self> {
        if !self.is_permutation_matrix() {
            return Err(Error::NotPermutationMatrix);
        }
        let k = self.rows;
        let mut out = Self::new(k, 2 * k)?;
        for (r, c) in self.ones() {
            out.set(r, 2 * c - 1);
            out.set(r, 2 * c);
        }
        Ok(out)
    }

    /// Inverse of [`kron_hat`](Self::kron_hat): recovers `P` when `self` is exactly `P ⊗ hat`.
    pub fn hat_factor(&self) -> Option<Self> {
        if !self.rows.is_multiple_of(2) || !self.cols.is_multiple_of(3) || self.rows / 2 != self.cols / 3 {
            return None;
        }
        let k = self.rows / 2;
        let mut p = Self::new(k, k).ok()?;
        for r in 1..=k {
            for c in 1..=k {
                if self.get(2 * r, 3 * c - 1) {
                    p.set(r, c);
                }
            }
        }
        match p.kron_hat() {
            Ok(q) if &q == self => Some(p),
            _ => None,
        }
    }

    /// Columns `first..=last` (1-based) as a new matrix.
    pub fn column_range(&self, first: usize, last: usize) -> Result<Self> {
        if first == 0 || last < first || last > self.cols {
            return Err(Error::InvalidArgument(format!(
                "column range {first}..={last} of {} columns",
                self.cols
            )));
        }
        let mut out = Self::new(self.rows, last - first + 1)?;
        for (r, c) in self.ones() {
            if (first..=last).contains(&c) {
                out.set(r, c - first + 1);
            }
        }
        Ok(out)
    }

    /// Rows `first..=last` (1-based, bottom-to-top) as a new matrix.
    pub fn row_range(&self, first: usize, last: usize) -> Result<Self> {
        if first == 0 || last < first || last > self.rows {
            return Err(Error::InvalidArgument(format!(
                "row range {first}..={last} of {} rows",
                self.rows
            )));
        }
        let mut out = Self::new(last - first + 1, self.cols)?;
        for (r, c) in self.ones() {
            if (first..=last).contains(&r) {
                out.set(r - first + 1, c);
            }
        }
        Ok(out)
    }

    /// Deletes one row (1-based); `None` when it is the only row.
    pub fn delete_row(&self, row: usize) -> Option<Self> {
        if self.rows <= 1 || row == 0 || row > self.rows {
            return None;
        }
        let mut out = Self::new(self.rows - 1, self.cols).ok()?;
        for (r, c) in self.ones() {
            match r.cmp(&row) {
                std::cmp::Ordering::Less => {
                    out.set(r, c);
                }
                std::cmp::Ordering::Greater => {
                    out.set(r - 1, c);
                }
                std::cmp::Ordering::Equal => {}
            }
        }
        Some(out)
    }

    /// Deletes one column (1-based); `None` when it is the only column.
    pub fn delete_col(&self, col: usize) -> Option<Self> {
        self.transpose().delete_row(col).map(|m| m.transpose())
    }
}

impl PartialEq for BitMatrix01 {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.weight == other.weight
            && self.ones() == other.ones()
    }
}

impl Eq for BitMatrix01 {}

impl Hash for BitMatrix01 {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.ones().hash(state);
    }
}

impl fmt::Display for BitMatrix01 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in (1..=self.rows).rev() {
            let line: String = (1..=self.cols)
                .map(|c| if self.get(r, c) { 'x' } else { '.' })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
