use std::collections::BTreeSet;

use super::BitMatrix01;
use crate::error::{Error, Result};

/// A pattern with its first `a` and last `b` columns removed.
///
/// All-zero rows of the base may only match host rows that hold a 1
/// somewhere (see [`contains_trimmed`](super::contains_trimmed)).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrimmedPattern {
    base: BitMatrix01,
    zero_rows: BTreeSet<usize>,
    a: usize,
    b: usize,
}

impl TrimmedPattern {
    /// Wraps an arbitrary pattern, treating it as already trimmed by `(0, 0)`.
    pub fn new(base: BitMatrix01) -> Self {
        Self::with_trim(base, 0, 0)
    }

    fn with_trim(base: BitMatrix01, a: usize, b: usize) -> Self {
        let zero_rows = base.zero_rows();
        TrimmedPattern {
            base,
            zero_rows,
            a,
            b,
        }
    }

    pub fn base(&self) -> &BitMatrix01 {
        &self.base
    }

    /// Rows (1-based) of the base with no 1.
    pub fn zero_rows(&self) -> &BTreeSet<usize> {
        &self.zero_rows
    }

    /// Columns trimmed on the left and on the right.
    pub fn trimmed(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    /// Number of 1s left in the base.
    pub fn ones_count(&self) -> usize {
        self.base.weight()
    }
}

/// Removes the first `a` and last `b` columns of `q`.
pub fn trim(q: &BitMatrix01, a: usize, b: usize) -> Result<TrimmedPattern> {
    if a + b >= q.cols() {
        return Err(Error::TrimTooWide { a, b, cols: q.cols() });
    }
    let base = q.column_range(a + 1, q.cols() - b)?;
    Ok(TrimmedPattern::with_trim(base, a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::identity;

    #[test]
    fn trim_examples() {
        let q = identity(2).kron_hat().unwrap();
        let t = trim(&q, 0, 0).unwrap();
        assert_eq!(t.base(), &q);
        assert!(t.zero_rows().is_empty());

        let t = trim(&q, 1, 0).unwrap();
        assert_eq!((t.base().rows(), t.base().cols()), (4, 5));
        assert_eq!(t.base().row_ones(1), vec![2]);

        let t = trim(&q, 2, 2).unwrap();
        assert!(!t.zero_rows().is_empty());
        assert_eq!(t.zero_rows().iter().copied().collect::<Vec<_>>(), vec![2, 4]);

        assert!(matches!(trim(&q, 3, 3), Err(Error::TrimTooWide { .. })));
    }
}
