//! Shared helpers for the integration tests: brute-force oracles and input builders.
#![allow(dead_code)]

use patsort::matrix::TrimmedPattern;
use patsort::BitMatrix01;

/// All `k`-subsets of `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Exhaustive containment oracle: tries every row subset against every column subset.
pub struct BruteOracle {
    k: usize,
    l: usize,
    ones: Vec<(usize, usize)>,
    trimmed: bool,
    row_sets: Vec<Vec<Vec<usize>>>,
    col_sets: Vec<Vec<Vec<usize>>>,
}

impl BruteOracle {
    pub fn new(p: &BitMatrix01, trimmed: bool, max_n: usize, max_m: usize) -> Self {
        let (k, l) = (p.rows(), p.cols());
        BruteOracle {
            k,
            l,
            ones: p.ones().into_iter().map(|(r, c)| (r - 1, c - 1)).collect(),
            trimmed,
            row_sets: (0..=max_n).map(|n| if n >= k { combinations(n, k) } else { vec![] }).collect(),
            col_sets: (0..=max_m).map(|m| if m >= l { combinations(m, l) } else { vec![] }).collect(),
        }
    }

    pub fn plain(p: &BitMatrix01, max_n: usize, max_m: usize) -> Self {
        Self::new(p, false, max_n, max_m)
    }

    /// Every pattern row must land on a nonempty host row.
    pub fn for_trimmed(q: &TrimmedPattern, max_n: usize, max_m: usize) -> Self {
        Self::new(q.base(), true, max_n, max_m)
    }

    /// `rows[r]` has bit `c` set iff host cell `(r + 1, c + 1)` is 1.
    pub fn contains(&self, m: usize, rows: &[u64]) -> bool {
        let n = rows.len();
        if n < self.k || m < self.l {
            return false;
        }
        for rs in &self.row_sets[n] {
            if self.trimmed && rs.iter().any(|&r| rows[r] == 0) {
                continue;
            }
            for cs in &self.col_sets[m] {
                if self.ones.iter().all(|&(pr, pc)| rows[rs[pr]] >> cs[pc] & 1 == 1) {
                    return true;
                }
            }
        }
        false
    }

    pub fn contains_matrix(&self, host: &BitMatrix01) -> bool {
        self.contains(host.cols(), &masks(host))
    }
}

pub fn masks(host: &BitMatrix01) -> Vec<u64> {
    assert!(host.cols() <= 64);
    let mut rows = vec![0u64; host.rows()];
    for (r, c) in host.ones() {
        rows[r - 1] |= 1 << (c - 1);
    }
    rows
}

pub fn from_masks(cols: usize, rows: &[u64]) -> BitMatrix01 {
    let mut m = BitMatrix01::new(rows.len(), cols).unwrap();
    for (r, &x) in rows.iter().enumerate() {
        for c in 0..cols {
            if x >> c & 1 == 1 {
                m.set(r + 1, c + 1);
            }
        }
    }
    m
}

/// Largest weight of an `n x m` matrix avoiding every oracle, by
/// enumerating all `2^(nm)` matrices.
pub fn ex_brute(oracles: &[&BruteOracle], n: usize, m: usize) -> usize {
    assert!(n * m <= 20);
    let mut best = 0;
    let mut rows = vec![0u64; n];
    for x in 0u64..(1 << (n * m)) {
        let w = x.count_ones() as usize;
        if w <= best {
            continue;
        }
        for (r, row) in rows.iter_mut().enumerate() {
            *row = (x >> (m * r)) & ((1 << m) - 1);
        }
        if oracles.iter().all(|o| !o.contains(m, &rows)) {
            best = w;
        }
    }
    best
}

/// Whether `seq` has a subsequence of `word.len()` letters ordered like
/// `word` (equal letters equal, smaller letters smaller), by enumeration.
pub fn order_isomorphic_brute(seq: &[u32], word: &[u32]) -> bool {
    let k = word.len();
    combinations(seq.len(), k).into_iter().any(|idx| {
        (0..k).all(|a| {
            (0..k).all(|b| {
                let (x, y) = (seq[idx[a]], seq[idx[b]]);
                x.cmp(&y) == word[a].cmp(&word[b])
            })
        })
    })
}

/// Whether `s` contains `pi` as a pattern, by enumeration.
pub fn perm_contains_brute(s: &[usize], pi: &[usize]) -> bool {
    combinations(s.len(), pi.len()).into_iter().any(|idx| {
        (0..pi.len()).all(|a| (0..pi.len()).all(|b| s[idx[a]].cmp(&s[idx[b]]) == pi[a].cmp(&pi[b])))
    })
}

/// Skew sum: every entry of `a` above every entry of `b`.
pub fn skew_sum(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&x| x + b.len()).chain(b.iter().copied()).collect()
}

/// A 1324-avoiding permutation of length `n`: the seed picks one of three
/// families (complemented preorders, reversed preorders, skew sums of
/// short rejection samples). Checked before returning.
pub fn gen_1324_free(n: usize, seed: u64) -> patsort::Permutation {
    use patsort::perm::{gen_pi_avoiding_rejection, gen_preorder};
    use patsort::Permutation;
    let pi: Permutation = "1324".parse().unwrap();
    let s = match seed % 3 {
        0 => gen_preorder(n, seed).unwrap().complement(),
        1 => gen_preorder(n, seed).unwrap().reverse(),
        _ => {
            let mut v: Vec<usize> = Vec::new();
            let mut part = seed;
            while v.len() < n {
                let len = (1 + part as usize % 8).min(n - v.len());
                let piece = gen_pi_avoiding_rejection(len, &pi, part, 100_000).unwrap();
                v = skew_sum(&v, piece.values());
                part = part.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407) >> 7;
            }
            Permutation::new(v).unwrap()
        }
    };
    assert!(s.avoids(&pi), "generator produced a 1324 copy");
    s
}

/// Random matrix of the given density.
pub fn random_matrix(n: usize, m: usize, density: f64, seed: u64) -> BitMatrix01 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut a = BitMatrix01::new(n, m).unwrap();
    for r in 1..=n {
        for c in 1..=m {
            if rng.gen_bool(density) {
                a.set(r, c);
            }
        }
    }
    a
}

/// An `n x m` matrix avoiding `P (x) hat` for a 2x2 permutation matrix `P`:
/// small random blocks, each saturated at random while free of the pattern, placed along a chain
/// whose direction keeps any two blocks out of `P`'s arrangement. Every
/// hat then lies inside one block.
pub fn chain_free_matrix(p: &BitMatrix01, n: usize, m: usize, seed: u64) -> BitMatrix01 {
    use patsort::contains;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let q = p.kron_hat().unwrap();
    let ascending = p.get(1, 1);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut a = BitMatrix01::new(n, m).unwrap();
    // Blocks go left to right; rows go down for an ascending P.
    let (mut r, mut c) = (if ascending { n } else { 1 }, 1usize);
    loop {
        let h = rng.gen_range(1..=6usize);
        let wd = rng.gen_range(1..=12usize);
        let density = rng.gen_range(0.2..0.9);
        let (r0, r1) = if ascending {
            if r < h {
                break;
            }
            (r + 1 - h, r)
        } else {
            if r + h - 1 > n {
                break;
            }
            (r, r + h - 1)
        };
        if c + wd - 1 > m {
            break;
        }
        // Random cells join while the block stays free.
        let mut block = BitMatrix01::new(h, wd).unwrap();
        let mut cells: Vec<(usize, usize)> = (1..=h).flat_map(|r| (1..=wd).map(move |c| (r, c))).collect();
        cells.shuffle(&mut rng);
        for (br, bc) in cells {
            if rng.gen_bool(density) {
                block.set(br, bc);
                if contains(&q, &block) {
                    block.unset(br, bc);
                }
            }
        }
        for (br, bc) in block.ones() {
            a.set(r0 + br - 1, c + bc - 1);
        }
        c += wd;
        if ascending {
            if r0 == 1 {
                break;
            }
            r = r0 - 1;
        } else {
            r = r1 + 1;
        }
    }
    a
}

fn row_class(a: &BitMatrix01, b: usize, r: usize, c: usize) -> Option<patsort::extremal::Category> {
    use patsort::extremal::Category;
    let row = a.row_ones(r);
    let slab = |c: usize| (c - 1) / b;
    let (fs, ls) = (slab(row[0]), slab(*row.last().unwrap()));
    if fs == ls {
        Some(Category::Local)
    } else if slab(c) == fs {
        Some(Category::First)
    } else if slab(c) == ls {
        Some(Category::Last)
    } else {
        None
    }
}

/// Rechecks a decomposition from scratch: the labels partition the 1s, row
/// classes and heavy blocks match a direct reading of `a`, light rows split
/// into first, middle and last, and chunks never repeat a light-middle
/// column. Returns the first disagreement.
pub fn check_decomposition(a: &BitMatrix01, b: usize, g: usize) -> Result<(), String> {
    use patsort::extremal::{decompose, Category};
    use std::collections::{HashMap, HashSet};
    macro_rules! ensure {
        ($c:expr, $($m:tt)*) => { if !$c { return Err(format!($($m)*)); } };
    }
    let rep = decompose(a, b, g).map_err(|e| e.to_string())?;
    ensure!(rep.counts.total() == a.weight(), "counts {} for weight {}", rep.counts.total(), a.weight());
    let mut cells: Vec<_> = rep.labels.iter().map(|&(x, _)| x).collect();
    cells.sort_unstable();
    ensure!(cells == a.ones(), "labels are not the 1s");
    ensure!(rep.n_star() + rep.local_rows.iter().sum::<usize>() == a.rows(), "row split");
    ensure!(rep.slab_count() == a.cols().div_ceil(b), "slab count");

    let cat: HashMap<(usize, usize), Category> = rep.labels.iter().copied().collect();
    // Middle 1s of each G x B block, keyed by (block row, slab).
    let mut blocks: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
    for &(r, c) in &a.ones() {
        match row_class(a, b, r, c) {
            Some(k) => ensure!(cat[&(r, c)] == k, "({r}, {c}) is {:?}, expected {k:?}", cat[&(r, c)]),
            None => {
                let Some(t) = rep.global_rows.iter().position(|&x| x == r) else {
                    return Err(format!("row {r} holds a middle 1 but is not global"));
                };
                blocks.entry((t / g, (c - 1) / b)).or_default().push((t % g, c));
            }
        }
    }
    let hat_oracle = BruteOracle::plain(&patsort::matrix::hat(), g, b);
    for ((h, s), ones) in &blocks {
        let mut block = BitMatrix01::new(g, b).unwrap();
        for &(t, c) in ones {
            block.set(t + 1, c - s * b);
        }
        let heavy = hat_oracle.contains_matrix(&block);
        if let Some(hc) = &rep.heavy_contracted {
            ensure!(hc.get(h + 1, s + 1) == heavy, "block ({}, {}) heaviness", h + 1, s + 1);
        }
        for &(t, c) in ones {
            let r = rep.global_rows[h * g + t];
            let in_row: Vec<usize> = ones.iter().filter(|&&(t2, _)| t2 == t).map(|&(_, c2)| c2).collect();
            let expect = if heavy {
                Category::HeavyMiddle
            } else if c == *in_row.iter().min().unwrap() {
                Category::LightFirst
            } else if c == *in_row.iter().max().unwrap() {
                Category::LightLast
            } else {
                Category::LightMiddle
            };
            ensure!(cat[&(r, c)] == expect, "({r}, {c}) is {:?}, expected {expect:?}", cat[&(r, c)]);
        }
    }

    let hslabs = rep.n_star().div_ceil(g);
    for &(s, lo, hi) in &rep.chunks {
        ensure!(lo <= hi && hi <= hslabs, "chunk {s}:{lo}..{hi} out of range");
        let mut seen = HashSet::new();
        for (&(r, c), &k) in &cat {
            if k != Category::LightMiddle || (c - 1) / b + 1 != s {
                continue;
            }
            let t = rep.global_rows.iter().position(|&x| x == r).unwrap() / g + 1;
            if t >= lo && t <= hi {
                ensure!(seen.insert(c), "column {c} twice in chunk {s}:{lo}..{hi}");
            }
        }
        if let Some(lm) = &rep.lightmid {
            ensure!(lm.get(lo, s), "chunk {s}:{lo} not marked");
        }
    }
    if let Some(lm) = &rep.lightmid {
        ensure!(lm.weight() == rep.chunks.len(), "lightmid weight {} for {} chunks", lm.weight(), rep.chunks.len());
    }
    Ok(())
}

/// Hats in `a` whose bounding box holds no `(i, s(i))`, by enumeration.
pub fn uncovered_hats(s: &patsort::Permutation, a: &BitMatrix01) -> (u64, u64) {
    let ones = a.ones();
    let (mut total, mut bad) = (0, 0);
    for &(r1, c1) in &ones {
        for &(r1b, c3) in &ones {
            if r1b != r1 || c3 <= c1 {
                continue;
            }
            for &(r2, c2) in &ones {
                if r2 > r1 && c2 > c1 && c2 < c3 {
                    total += 1;
                    if !(r1..=r2).any(|i| (c1..=c3).contains(&s.at(i))) {
                        bad += 1;
                    }
                }
            }
        }
    }
    (total, bad)
}

/// `(L, N)` from the recurrences, with no cap. Iterates over `j`, so keep
/// the arguments small.
pub fn ln_big(i: usize, j: u64) -> (num_bigint::BigUint, num_bigint::BigUint) {
    if i == 1 {
        return (num_bigint::BigUint::from(1u32), num_bigint::BigUint::from(j));
    }
    let (mut l, mut n) = (num_bigint::BigUint::from(2u32), num_bigint::BigUint::from(0u32));
    for _ in 0..j {
        let (l_top, n_top) = if i == 2 {
            (num_bigint::BigUint::from(1u32), l.clone())
        } else {
            ln_big(i - 1, (&l).try_into().expect("small enough to iterate"))
        };
        n = &n * 2u32 * &l_top + n_top;
        l = &l * 2u32 * &l_top;
    }
    (l, n)
}

/// Arboral satisfaction via 2D prefix counts over the `rows x cols` grid:
/// every pair off a common row and column needs a third point in its box.
pub fn arboral_by_counts(pts: &[(usize, usize)], rows: usize, cols: usize) -> bool {
    let w = cols + 1;
    let mut pre = vec![0u32; (rows + 1) * w];
    for &(r, c) in pts {
        pre[r * w + c] += 1;
    }
    for r in 1..=rows {
        for c in 1..=cols {
            pre[r * w + c] += pre[(r - 1) * w + c] + pre[r * w + c - 1] - pre[(r - 1) * w + c - 1];
        }
    }
    let count = |r0: usize, r1: usize, c0: usize, c1: usize| {
        pre[r1 * w + c1] + pre[(r0 - 1) * w + c0 - 1] - pre[(r0 - 1) * w + c1] - pre[r1 * w + c0 - 1]
    };
    pts.iter().enumerate().all(|(k, &(r1, c1))| {
        pts[k + 1..].iter().all(|&(r2, c2)| {
            r1 == r2 || c1 == c2 || count(r1.min(r2), r1.max(r2), c1.min(c2), c1.max(c2)) >= 3
        })
    })
}
