//! Permutations, pattern avoidance and generators for structured input classes.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mst::MergeSortTree;

/// A bijection on `{1..n}`, stored as `(s(1), ..., s(n))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidPermutation("empty".into()));
        }
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!("value {v} outside 1..={n}")));
            }
            if seen[v] {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `s(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// The inverse bijection: `s(i) = j` iff `s^T(j) = i`.
    pub fn transpose(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    pub fn reverse(&self) -> Self {
        Permutation(self.0.iter().rev().copied().collect())
    }

    /// `v -> n + 1 - v`.
    pub fn complement(&self) -> Self {
        let n = self.len();
        Permutation(self.0.iter().map(|&v| n + 1 - v).collect())
    }

    /// Whether no subsequence of `self` is order-isomorphic to `pi`.
    pub fn avoids(&self, pi: &Permutation) -> bool {
        !contains_pattern(self, pi)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `2,3,1`, `(2 3 1)` or, for n <= 9, plain digits `231`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let values: Vec<usize> = if t.chars().all(|c| c.is_ascii_digit()) {
            t.chars().map(|c| c as usize - '0' as usize).collect()
        } else {
            t.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(|x| {
                    x.parse()
                        .map_err(|_| Error::InvalidPermutation(format!("bad entry {x:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

/// Backtracking over pattern entries left to right. Each entry's value must
/// fall between the values already chosen for its neighbours in pattern
/// order; the last entry is settled by one range query.
fn contains_pattern(s: &Permutation, pi: &Permutation) -> bool {
    let (n, k) = (s.len(), pi.len());
    if k > n {
        return false;
    }
    let vals: Vec<u32> = s.values().iter().map(|&v| v as u32).collect();
    let tree = MergeSortTree::new(&vals);
    let mut chosen = vec![0u32; k];
    // bounds[d] = (pattern indices e < d with the nearest pattern value below / above pi[d])
    let p = pi.values();
    let bounds: Vec<(Option<usize>, Option<usize>)> = (0..k)
        .map(|d| {
            let below = (0..d).filter(|&e| p[e] < p[d]).max_by_key(|&e| p[e]);
            let above = (0..d).filter(|&e| p[e] > p[d]).min_by_key(|&e| p[e]);
            (below, above)
        })
        .collect();

    fn go(
        d: usize,
        start: usize,
        vals: &[u32],
        tree: &MergeSortTree,
        bounds: &[(Option<usize>, Option<usize>)],
        chosen: &mut [u32],
    ) -> bool {
        let k = chosen.len();
        let n = vals.len();
        let lo = bounds[d].0.map_or(0, |e| chosen[e]);
        let hi = bounds[d].1.map_or(u32::MAX, |e| chosen[e]);
        if d + 1 == k {
            return tree.any_between(start, n, lo, hi);
        }
        for pos in start..=n - (k - d) {
            let v = vals[pos];
            if v > lo && v < hi {
                chosen[d] = v;
                if go(d + 1, pos + 1, vals, tree, bounds, chosen) {
                    return true;
                }
            }
        }
        false
    }

    go(0, 0, &vals, &tree, &bounds, &mut chosen)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(1, 2, ..., n)`.
pub fn gen_sequential(n: usize) -> Result<Permutation> {
    check_n(n)?;
    Ok(Permutation::identity(n))
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

/// Binary search tree over keys `1..=n`, as child arrays indexed by key.
struct Bst {
    root: usize,
    left: Vec<usize>,
    right: Vec<usize>,
}

const NIL: usize = 0;

impl Bst {
    /// Uniformly random shape: a uniform Dyck word (cycle lemma) read as
    /// `U left D right`, keyed in order.
    fn random(n: usize, r: &mut ChaCha8Rng) -> Self {
        let mut steps: Vec<bool> = (0..2 * n + 1).map(|i| i < n).collect();
        steps.shuffle(r);
        // Start right after the first minimum of the prefix sums.
        let (mut h, mut low, mut at) = (0i64, 0i64, 0);
        for (i, &up) in steps.iter().enumerate() {
            h += if up { 1 } else { -1 };
            if h < low {
                low = h;
                at = i + 1;
            }
        }
        let len = steps.len();
        steps.rotate_left(at % len);
        steps.pop();
        // Node ids are the positions of the U steps.
        let mut mate = vec![0; 2 * n];
        let mut open = Vec::new();
        for (i, &up) in steps.iter().enumerate() {
            if up {
                open.push(i);
            } else {
                mate[open.pop().expect("balanced")] = i;
            }
        }
        let child = |i: usize| (i < 2 * n && steps[i]).then_some(i);
        let mut key = vec![NIL; 2 * n];
        let mut next = 1;
        let mut stack = Vec::new();
        let mut cur = Some(0);
        while cur.is_some() || !stack.is_empty() {
            while let Some(x) = cur {
                stack.push(x);
                cur = child(x + 1);
            }
            let x = stack.pop().expect("nonempty");
            key[x] = next;
            next += 1;
            cur = child(mate[x] + 1);
        }
        let mut t = Bst {
            root: key[0],
            left: vec![NIL; n + 1],
            right: vec![NIL; n + 1],
        };
        for (i, &up) in steps.iter().enumerate() {
            if up {
                t.left[key[i]] = child(i + 1).map_or(NIL, |c| key[c]);
                t.right[key[i]] = child(mate[i] + 1).map_or(NIL, |c| key[c]);
            }
        }
        t
    }

    fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.left.len() - 1);
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            out.push(x);
            if self.right[x] != NIL {
                stack.push(self.right[x]);
            }
            if self.left[x] != NIL {
                stack.push(self.left[x]);
            }
        }
        out
    }

    fn postorder(&self) -> Vec<usize> {
        // Reverse of a root, right, left traversal.
        let mut out = Vec::with_capacity(self.left.len() - 1);
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            out.push(x);
            if self.left[x] != NIL {
                stack.push(self.left[x]);
            }
            if self.right[x] != NIL {
                stack.push(self.right[x]);
            }
        }
        out.reverse();
        out
    }
}

/// Preorder of a BST with uniformly random shape.
pub fn gen_preorder(n: usize, seed: u64) -> Result<Permutation> {
    check_n(n)?;
    Permutation::new(Bst::random(n, &mut rng(seed)).preorder())
}

/// Postorder of a BST with uniformly random shape.
pub fn gen_postorder(n: usize, seed: u64) -> Result<Permutation> {
    check_n(n)?;
    Permutation::new(Bst::random(n, &mut rng(seed)).postorder())
}

/// Deletion order of a deque holding `1..=n` in sorted order, each step
/// removing the minimum or the maximum with equal probability.
pub fn gen_deque(n: usize, seed: u64) -> Result<Permutation> {
    check_n(n)?;
    let mut r = rng(seed);
    let (mut lo, mut hi) = (1, n);
    let mut out = Vec::with_capacity(n);
    while lo <= hi {
        if r.gen::<bool>() {
            out.push(lo);
            lo += 1;
        } else {
            out.push(hi);
            hi -= 1;
        }
    }
    Permutation::new(out)
}

/// Random merge of `k - 1` increasing runs over a random split of `1..=n`.
pub fn gen_k_increasing(n: usize, k: usize, seed: u64) -> Result<Permutation> {
    check_n(n)?;
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    let mut r = rng(seed);
    let runs = k - 1;
    let mut lanes: Vec<Vec<usize>> = vec![Vec::new(); runs];
    for v in 1..=n {
        lanes[r.gen_range(0..runs)].push(v);
    }
    // Interleave by shuffling lane labels, one label per element.
    let mut labels: Vec<usize> = lanes
        .iter()
        .enumerate()
        .flat_map(|(i, l)| std::iter::repeat_n(i, l.len()))
        .collect();
    labels.shuffle(&mut r);
    let mut next = vec![0; runs];
    let out = labels
        .into_iter()
        .map(|lane| {
            let v = lanes[lane][next[lane]];
            next[lane] += 1;
            v
        })
        .collect();
    Permutation::new(out)
}

/// Uniform random permutation.
pub fn gen_uniform(n: usize, seed: u64) -> Result<Permutation> {
    check_n(n)?;
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(&mut rng(seed));
    Permutation::new(v)
}

/// Uniform sample of the `pi`-avoiding permutations of length `n`, by
/// rejection. Only practical for small `n`.
pub fn gen_pi_avoiding_rejection(
    n: usize,
    pi: &Permutation,
    seed: u64,
    max_tries: usize,
) -> Result<Permutation> {
    check_n(n)?;
    let mut r = rng(seed);
    let mut v: Vec<usize> = (1..=n).collect();
    for _ in 0..max_tries {
        v.shuffle(&mut r);
        let s = Permutation(v.clone());
        if s.avoids(pi) {
            return Ok(s);
        }
    }
    Err(Error::RejectionExhausted {
        pattern: pi.to_string(),
        n,
        tries: max_tries,
    })
}

/// The `perm` format: one value per line. Blank lines and `#` comments are skipped.
pub fn parse_perm(text: &str) -> Result<Permutation> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        values.push(l.parse().map_err(|e| Error::Parse {
            line: i + 1,
            msg: format!("{e}"),
        })?);
    }
    Permutation::new(values)
}

pub fn write_perm(p: &Permutation) -> String {
    let mut s = String::with_capacity(p.len() * 5);
    for v in p.values() {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}
