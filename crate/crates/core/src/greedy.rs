//! The geometric Greedy model of BST sorting, instrumented to report which
//! ranks each insertion touches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mst::MergeSortTree;
use crate::perm::Permutation;
use crate::touch::TouchMatrix;

/// Runs Greedy on the insertion sequence `s`.
///
/// At step `i` the accessed rank `r = s(i)` is touched, and so is every
/// inserted rank `x` whose last touch is strictly later than that of every
/// inserted rank between `x` and `r` (the staircase on either side of `r`).
/// All touched ranks then get last-touch time `i`.
pub fn greedy_touch_matrix(s: &Permutation) -> TouchMatrix {
    let n = s.len();
    // last[x] == 0 means "not inserted yet"; step numbers start at 1.
    let mut last = vec![0usize; n + 2];
    let mut steps = Vec::with_capacity(n);
    for i in 1..=n {
        let r = s.at(i);
        let mut touched = vec![r];
        let mut best = 0;
        for x in (1..r).rev() {
            if last[x] > best {
                best = last[x];
                touched.push(x);
                if best == i - 1 {
                    break;
                }
            }
        }
        best = 0;
        for x in r + 1..=n {
            if last[x] > best {
                best = last[x];
                touched.push(x);
                if best == i - 1 {
                    break;
                }
            }
        }
        for &x in &touched {
            last[x] = i;
        }
        touched.sort_unstable();
        steps.push(touched);
    }
    TouchMatrix::from_steps(&steps)
}

/// Whether every two points that share neither a row nor a column have a
/// third point of the set in their closed bounding rectangle.
pub fn is_arborally_satisfied(points: &[(usize, usize)]) -> bool {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 2 {
        return true;
    }
    let compress = |vals: Vec<usize>| {
        let mut v = vals;
        v.sort_unstable();
        v.dedup();
        v
    };
    let rows = compress(pts.iter().map(|p| p.0).collect());
    let cols = compress(pts.iter().map(|p| p.1).collect());
    let (h, w) = (rows.len(), cols.len());
    let cell: Vec<(usize, usize)> = pts
        .iter()
        .map(|&(r, c)| {
            (
                rows.binary_search(&r).unwrap(),
                cols.binary_search(&c).unwrap(),
            )
        })
        .collect();
    let stride = w + 1;
    let mut pre = vec![0u32; (h + 1) * stride];
    for &(r, c) in &cell {
        pre[(r + 1) * stride + c + 1] += 1;
    }
    for r in 1..=h {
        for c in 1..=w {
            pre[r * stride + c] +=
                pre[(r - 1) * stride + c] + pre[r * stride + c - 1] - pre[(r - 1) * stride + c - 1];
        }
    }
    let count = |r0: usize, r1: usize, c0: usize, c1: usize| {
        pre[(r1 + 1) * stride + c1 + 1] + pre[r0 * stride + c0]
            - pre[r0 * stride + c1 + 1]
            - pre[(r1 + 1) * stride + c0]
    };
    for (a, &(r1, c1)) in cell.iter().enumerate() {
        for &(r2, c2) in &cell[a + 1..] {
            if r1 == r2 || c1 == c2 {
                continue;
            }
            let (c_lo, c_hi) = (c1.min(c2), c1.max(c2));
            if count(r1.min(r2), r1.max(r2), c_lo, c_hi) < 3 {
                return false;
            }
        }
    }
    true
}

/// A hat in a touch matrix: bottom 1s at `(bottom_row, left_col)` and
/// `(bottom_row, right_col)`, top 1 at `(top_row, mid_col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HatOccurrence {
    pub bottom_row: usize,
    pub top_row: usize,
    pub left_col: usize,
    pub mid_col: usize,
    pub right_col: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HatReport {
    /// Occurrences examined.
    pub checked: u64,
    /// Whether all occurrences were examined (otherwise a random sample was).
    pub exhaustive: bool,
    /// Occurrences whose bounding box holds no input point `(i, s(i))`.
    pub violations: Vec<HatOccurrence>,
}

/// Above this many hat occurrences the check samples instead of enumerating.
pub const HAT_EXHAUSTIVE_LIMIT: u64 = 1_000_000;

/// Checks that every hat in `t` has an input point `(i, s(i))` inside its
/// bounding box. Enumerates all hats when there are at most
/// [`HAT_EXHAUSTIVE_LIMIT`], otherwise examines `samples` random ones.
pub fn hat_bounding_box_check(
    s: &Permutation,
    t: &TouchMatrix,
    samples: u64,
    seed: u64,
) -> HatReport {
    let m = t.touched();
    let n = m.rows();
    let rows: Vec<Vec<usize>> = m.row_lists();
    let input: Vec<u32> = s.values().iter().map(|&v| v as u32).collect();
    let tree = MergeSortTree::new(&input);
    let covered = |h: &HatOccurrence| {
        tree.any_between(
            h.bottom_row - 1,
            h.top_row,
            h.left_col as u32 - 1,
            h.right_col as u32 + 1,
        )
    };
    let mut report = HatReport::default();

    let total = count_hats(&rows, HAT_EXHAUSTIVE_LIMIT + 1);
    if total <= HAT_EXHAUSTIVE_LIMIT {
        report.exhaustive = true;
        for r1 in 1..=n {
            let bottom = &rows[r1 - 1];
            for (a, &c1) in bottom.iter().enumerate() {
                for &c3 in &bottom[a + 1..] {
                    for r2 in r1 + 1..=n {
                        for &c2 in cols_between(&rows[r2 - 1], c1, c3) {
                            let h = HatOccurrence {
                                bottom_row: r1,
                                top_row: r2,
                                left_col: c1,
                                mid_col: c2,
                                right_col: c3,
                            };
                            report.checked += 1;
                            if !covered(&h) {
                                report.violations.push(h);
                            }
                        }
                    }
                }
            }
        }
        return report;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bottoms: Vec<usize> = (1..n).filter(|&r| rows[r - 1].len() >= 2).collect();
    if bottoms.is_empty() {
        return report;
    }
    let mut attempts = 0u64;
    while report.checked < samples && attempts < samples.saturating_mul(100) {
        attempts += 1;
        let r1 = bottoms[rng.gen_range(0..bottoms.len())];
        let b = &rows[r1 - 1];
        let i = rng.gen_range(0..b.len());
        let j = rng.gen_range(0..b.len());
        if i == j {
            continue;
        }
        let (c1, c3) = (b[i.min(j)], b[i.max(j)]);
        let r2 = rng.gen_range(r1 + 1..=n);
        let mids = cols_between(&rows[r2 - 1], c1, c3);
        if mids.is_empty() {
            continue;
        }
        let c2 = mids[rng.gen_range(0..mids.len())];
        let h = HatOccurrence {
            bottom_row: r1,
            top_row: r2,
            left_col: c1,
            mid_col: c2,
            right_col: c3,
        };
        report.checked += 1;
        if !covered(&h) {
            report.violations.push(h);
        }
    }
    report
}

fn cols_between(row: &[usize], lo: usize, hi: usize) -> &[usize] {
    let a = row.partition_point(|&c| c <= lo);
    let b = row.partition_point(|&c| c < hi);
    &row[a..b.max(a)]
}

/// Number of hats, counting up to `stop`.
fn count_hats(rows: &[Vec<usize>], stop: u64) -> u64 {
    let mut total = 0u64;
    for (r1, bottom) in rows.iter().enumerate() {
        for (a, &c1) in bottom.iter().enumerate() {
            for &c3 in &bottom[a + 1..] {
                for top in &rows[r1 + 1..] {
                    total += cols_between(top, c1, c3).len() as u64;
                }
                if total >= stop {
                    return total;
                }
            }
        }
    }
    total
}
