//! Classification of the 1s of a matrix by slabs of `B` columns and blocks
//! of `G` global rows, with the two contracted matrices built from it.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::matrix::{contains, hat, BitMatrix01, Matcher};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Local,
    First,
    Last,
    HeavyMiddle,
    LightFirst,
    LightMiddle,
    LightLast,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CategoryCounts {
    pub local: usize,
    pub first: usize,
    pub last: usize,
    pub heavy_middle: usize,
    pub light_first: usize,
    pub light_middle: usize,
    pub light_last: usize,
}

impl CategoryCounts {
    fn bump(&mut self, c: Category) {
        *match c {
            Category::Local => &mut self.local,
            Category::First => &mut self.first,
            Category::Last => &mut self.last,
            Category::HeavyMiddle => &mut self.heavy_middle,
            Category::LightFirst => &mut self.light_first,
            Category::LightMiddle => &mut self.light_middle,
            Category::LightLast => &mut self.light_last,
        } += 1;
    }

    pub fn total(&self) -> usize {
        self.local
            + self.first
            + self.last
            + self.heavy_middle
            + self.light_first
            + self.light_middle
            + self.light_last
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub b: usize,
    pub g: usize,
    pub counts: CategoryCounts,
    /// Category of every 1, in row-major order.
    pub labels: Vec<((usize, usize), Category)>,
    /// Rows local to each slab.
    pub local_rows: Vec<usize>,
    /// Global rows (including all-zero rows), bottom to top.
    pub global_rows: Vec<usize>,
    /// `ceil(n*/G) x ceil(m/B)`, 1 on heavy blocks; `None` when `n* = 0`.
    pub heavy_contracted: Option<BitMatrix01>,
    /// Same shape, 1 at each chunk start.
    pub lightmid: Option<BitMatrix01>,
    /// Chunks as `(slab, first block row, last block row)`, 1-based.
    pub chunks: Vec<(usize, usize, usize)>,
}

/// Whether the contracted matrices avoid what they should when the input
/// avoids `P` with a hat on every 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClaimsReport {
    pub heavy_avoids_p: bool,
    pub lightmid_avoids_p_vpair: bool,
}

impl DecompositionReport {
    pub fn n_star(&self) -> usize {
        self.global_rows.len()
    }

    pub fn slab_count(&self) -> usize {
        self.local_rows.len()
    }

    pub fn check_claims(&self, p: &BitMatrix01) -> Result<ClaimsReport> {
        let pv = p.kron_vpair()?;
        let free = |m: &Option<BitMatrix01>, q: &BitMatrix01| m.as_ref().is_none_or(|m| !contains(q, m));
        Ok(ClaimsReport {
            heavy_avoids_p: free(&self.heavy_contracted, p),
            lightmid_avoids_p_vpair: free(&self.lightmid, &pv),
        })
    }
}

/// Classifies every 1 of `a` with slabs of `b` columns and blocks of `g`
/// global rows.
pub fn decompose(a: &BitMatrix01, b: usize, g: usize) -> Result<DecompositionReport> {
    if b == 0 || g == 0 {
        return Err(Error::InvalidArgument("B and G must be at least 1".into()));
    }
    let (n, m) = (a.rows(), a.cols());
    let slabs = m.div_ceil(b);
    let slab_of = |c: usize| (c - 1) / b + 1;
    let rows = a.row_lists();

    let mut local_rows = vec![0; slabs];
    let mut global_rows = Vec::new();
    let mut labels = Vec::with_capacity(a.weight());
    // Middle 1s of global rows, indexed by position among global rows.
    let mut middle: Vec<Vec<usize>> = Vec::new();
    for r in 1..=n {
        let cols = &rows[r - 1];
        let first_slab = cols.first().map(|&c| slab_of(c));
        let last_slab = cols.last().map(|&c| slab_of(c));
        if cols.is_empty() || first_slab != last_slab {
            global_rows.push(r);
            let (fs, ls) = (first_slab.unwrap_or(0), last_slab.unwrap_or(0));
            let mut mid = Vec::new();
            for &c in cols {
                let s = slab_of(c);
                if s == fs {
                    labels.push(((r, c), Category::First));
                } else if s == ls {
                    labels.push(((r, c), Category::Last));
                } else {
                    mid.push(c);
                }
            }
            middle.push(mid);
        } else {
            local_rows[first_slab.unwrap() - 1] += 1;
            for &c in cols {
                labels.push(((r, c), Category::Local));
            }
        }
    }

    let n_star = global_rows.len();
    let hslabs = n_star.div_ceil(g);
    let mut heavy = vec![vec![false; slabs]; hslabs];
    // Columns of light-middle 1s per block.
    let mut lm_cols: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); slabs]; hslabs];
    let mut hat_matcher = Matcher::new(&hat());
    for h in 0..hslabs {
        let t0 = h * g;
        let t1 = (t0 + g).min(n_star);
        for s in 0..slabs {
            let c0 = s * b + 1;
            let c1 = ((s + 1) * b).min(m);
            let in_block = |t: usize| middle[t].iter().copied().filter(move |&c| c >= c0 && c <= c1);
            let mut block = BitMatrix01::new(t1 - t0, c1 - c0 + 1)?;
            for t in t0..t1 {
                for c in in_block(t) {
                    block.set(t - t0 + 1, c - c0 + 1);
                }
            }
            let is_heavy = block.weight() > 0 && hat_matcher.matches(&block);
            heavy[h][s] = is_heavy;
            for t in t0..t1 {
                let cs: Vec<usize> = in_block(t).collect();
                let r = global_rows[t];
                for (idx, &c) in cs.iter().enumerate() {
                    let cat = if is_heavy {
                        Category::HeavyMiddle
                    } else if idx == 0 {
                        Category::LightFirst
                    } else if idx + 1 == cs.len() {
                        Category::LightLast
                    } else {
                        lm_cols[h][s].push(c);
                        Category::LightMiddle
                    };
                    labels.push(((r, c), cat));
                }
            }
        }
    }
    labels.sort_unstable();
    let mut counts = CategoryCounts::default();
    for &(_, cat) in &labels {
        counts.bump(cat);
    }

    let mut chunks = Vec::new();
    let mut starts = vec![vec![false; slabs]; hslabs];
    for s in 0..slabs {
        let mut current: Option<(usize, BTreeSet<usize>)> = None;
        for h in 0..hslabs {
            let cols = &lm_cols[h][s];
            if cols.is_empty() {
                continue;
            }
            match current.as_mut() {
                None => current = Some((h, cols.iter().copied().collect())),
                Some((start, seen)) => {
                    if cols.iter().any(|c| seen.contains(c)) {
                        chunks.push((s + 1, *start + 1, h));
                        starts[*start][s] = true;
                        current = Some((h, cols.iter().copied().collect()));
                    } else {
                        seen.extend(cols.iter().copied());
                    }
                }
            }
        }
        if let Some((start, _)) = current {
            chunks.push((s + 1, start + 1, hslabs));
            starts[start][s] = true;
        }
    }

    let contract = |cells: &Vec<Vec<bool>>| -> Result<Option<BitMatrix01>> {
        if hslabs == 0 {
            return Ok(None);
        }
        let ones = (0..hslabs)
            .flat_map(|h| (0..slabs).map(move |s| (h, s)))
            .filter(|&(h, s)| cells[h][s])
            .map(|(h, s)| (h + 1, s + 1));
        Ok(Some(BitMatrix01::from_ones(hslabs, slabs, ones)?))
    };
    Ok(DecompositionReport {
        b,
        g,
        counts,
        labels,
        local_rows,
        heavy_contracted: contract(&heavy)?,
        lightmid: contract(&starts)?,
        global_rows,
        chunks,
    })
}
