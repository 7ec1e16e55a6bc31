//! Blocked sequences and the recursive construction `U(i, j)` of a long
//! sequence with no subsequence order-isomorphic to `41213`.
//!
//! A blocked sequence is a list of blocks of distinct symbols, each either
//! live (written with parentheses) or dead (square brackets).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::BitMatrix01;
use crate::mst::MergeSortTree;

pub type Symbol = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub live: bool,
    pub symbols: Vec<Symbol>,
}

impl Block {
    pub fn live(symbols: Vec<Symbol>) -> Self {
        Block {
            live: true,
            symbols,
        }
    }

    pub fn dead(symbols: Vec<Symbol>) -> Self {
        Block {
            live: false,
            symbols,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BlockedSequence {
    blocks: Vec<Block>,
}

impl BlockedSequence {
    /// Rejects blocks that repeat a symbol.
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        for (i, b) in blocks.iter().enumerate() {
            let mut s = b.symbols.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "block {} repeats a symbol",
                    i + 1
                )));
            }
        }
        Ok(BlockedSequence { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Total number of symbol occurrences.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.symbols.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn live_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.live).count()
    }

    pub fn dead_count(&self) -> usize {
        self.blocks.len() - self.live_count()
    }

    /// Number of distinct symbols.
    pub fn alphabet_size(&self) -> usize {
        let mut seen = SymbolMap::for_seq(self);
        self.blocks
            .iter()
            .flat_map(|b| &b.symbols)
            .filter(|&&s| seen.entry(s).replace(s).is_none())
            .count()
    }

    /// The symbols in order, block boundaries dropped.
    pub fn flatten(&self) -> Vec<Symbol> {
        self.blocks
            .iter()
            .flat_map(|b| b.symbols.iter().copied())
            .collect()
    }

    /// Length shared by all live blocks, if they agree (`None` if there are none).
    pub fn live_block_len(&self) -> Option<usize> {
        let mut lens = self.blocks.iter().filter(|b| b.live).map(|b| b.symbols.len());
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    /// Renames symbols `1, 2, ...` in order of first appearance.
    pub fn canonical(&self) -> Self {
        let mut names = SymbolMap::for_seq(self);
        let mut next = 0;
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block {
                live: b.live,
                symbols: b
                    .symbols
                    .iter()
                    .map(|&s| {
                        *names.entry(s).get_or_insert_with(|| {
                            next += 1;
                            next
                        })
                    })
                    .collect(),
            })
            .collect();
        BlockedSequence { blocks }
    }

    pub fn is_canonical(&self) -> bool {
        &self.canonical() == self
    }

    fn max_symbol(&self) -> Symbol {
        self.blocks.iter().flat_map(|b| b.symbols.iter().copied()).max().unwrap_or(0)
    }
}

/// Per-symbol slots: a plain vector when symbols are small, a hash map otherwise.
enum SymbolMap {
    Dense(Vec<Option<Symbol>>),
    Sparse(HashMap<Symbol, Option<Symbol>>),
}

impl SymbolMap {
    fn for_seq(u: &BlockedSequence) -> Self {
        let max = u.max_symbol() as usize;
        if max <= 4 * u.len() + 64 {
            SymbolMap::Dense(vec![None; max + 1])
        } else {
            SymbolMap::Sparse(HashMap::new())
        }
    }

    fn entry(&mut self, s: Symbol) -> &mut Option<Symbol> {
        match self {
            SymbolMap::Dense(v) => &mut v[s as usize],
            SymbolMap::Sparse(m) => m.entry(s).or_default(),
        }
    }
}

impl fmt::Display for BlockedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            let (open, close) = if b.live { ('(', ')') } else { ('[', ']') };
            let body: Vec<String> = b.symbols.iter().map(|s| s.to_string()).collect();
            write!(f, "{open}{}{close}", body.join(" "))?;
        }
        Ok(())
    }
}

/// `(j ... 2 1)(1 2 ... j)`.
pub fn u_gadget(j: usize) -> Result<BlockedSequence> {
    if j == 0 {
        return Err(Error::InvalidArgument("U(j) needs j >= 1".into()));
    }
    let up: Vec<Symbol> = (1..=j as Symbol).collect();
    let down = up.iter().rev().copied().collect();
    Ok(BlockedSequence {
        blocks: vec![Block::live(down), Block::live(up)],
    })
}

/// `U(1, j) = [1 2 ... j](1 2 ... j)`.
pub fn u_base1(j: usize) -> Result<BlockedSequence> {
    if j == 0 {
        return Err(Error::InvalidArgument("U(1, j) needs j >= 1".into()));
    }
    let up: Vec<Symbol> = (1..=j as Symbol).collect();
    Ok(BlockedSequence {
        blocks: vec![Block::dead(up.clone()), Block::live(up)],
    })
}

/// `U(i, 0) = ()()`.
pub fn u_base0(i: usize) -> Result<BlockedSequence> {
    if i < 2 {
        return Err(Error::InvalidArgument("U(i, 0) needs i >= 2".into()));
    }
    Ok(BlockedSequence {
        blocks: vec![Block::live(vec![]), Block::live(vec![])],
    })
}

/// Replaces every live block `L` of `top` by a copy of `mid` in which the
/// `p`-th smallest symbol of `mid` becomes `L[p]`. Dead blocks of `top`
/// are kept as they are.
pub fn compose(top: &BlockedSequence, mid: &BlockedSequence) -> Result<BlockedSequence> {
    if mid.blocks.iter().any(|b| !b.live) {
        return Err(Error::InvalidArgument(
            "the inner sequence of a composition must be all live".into(),
        ));
    }
    let mut alphabet: Vec<Symbol> = mid.flatten();
    alphabet.sort_unstable();
    alphabet.dedup();
    let width = alphabet.len();
    let mut blocks = Vec::new();
    for (i, b) in top.blocks.iter().enumerate() {
        if !b.live {
            blocks.push(b.clone());
            continue;
        }
        if b.symbols.len() != width {
            return Err(Error::LengthMismatch(format!(
                "live block {} of the outer sequence has length {}, inner alphabet has {}",
                i + 1,
                b.symbols.len(),
                width
            )));
        }
        for mb in &mid.blocks {
            let symbols = mb
                .symbols
                .iter()
                .map(|s| b.symbols[alphabet.binary_search(s).expect("symbol of mid")])
                .collect();
            blocks.push(Block::live(symbols));
        }
    }
    Ok(BlockedSequence { blocks })
}

/// Left-shuffle of `sub` with `bot`: live block `L_i = (a_1 ... a_j)` of
/// `sub` is replaced by a fresh-alphabet copy of `bot` with `a_l` put at the
/// left end of its `l`-th live block; dead blocks of `sub` stay between the
/// copies in their original order.
pub fn left_shuffle(sub: &BlockedSequence, bot: &BlockedSequence) -> Result<BlockedSequence> {
    let width = bot.live_count();
    let bot_max = bot.max_symbol();
    let mut offset = sub.max_symbol();
    let mut blocks = Vec::new();
    for (i, b) in sub.blocks.iter().enumerate() {
        if !b.live {
            blocks.push(b.clone());
            continue;
        }
        if b.symbols.len() != width {
            return Err(Error::LengthMismatch(format!(
                "live block {} of the shuffled sequence has length {}, the bottom sequence has {} live blocks",
                i + 1,
                b.symbols.len(),
                width
            )));
        }
        let mut next = b.symbols.iter();
        for bb in &bot.blocks {
            let mut symbols = Vec::with_capacity(bb.symbols.len() + 1);
            if bb.live {
                symbols.push(*next.next().expect("one symbol per live block"));
            }
            symbols.extend(bb.symbols.iter().map(|s| s + offset));
            blocks.push(Block {
                live: bb.live,
                symbols,
            });
        }
        offset += bot_max;
    }
    Ok(BlockedSequence { blocks })
}

/// `L(i, j)` and `N(i, j)` (live blocks and alphabet size of `U(i, j)`)
/// evaluated exactly up to a cap; `None` means "larger than the cap".
#[derive(Debug, Default)]
pub struct Recurrences {
    cap: u128,
    memo: HashMap<(usize, u128), Option<(u128, u128)>>,
}

impl Recurrences {
    pub fn new(cap: u128) -> Self {
        Recurrences {
            cap,
            memo: HashMap::new(),
        }
    }

    /// `(L(i, j), N(i, j))`, or `None` if either exceeds the cap.
    pub fn ln(&mut self, i: usize, j: u128) -> Option<(u128, u128)> {
        assert!(i >= 1);
        if i == 1 {
            return (j <= self.cap).then_some((1, j));
        }
        if j == 0 {
            return Some((2, 0));
        }
        // L(i, j) >= 2^(j+1) once i >= 2.
        if j >= 127 || 1u128 << (j + 1) > self.cap {
            return None;
        }
        if let Some(&v) = self.memo.get(&(i, j)) {
            return v;
        }
        let v = self.ln_uncached(i, j);
        self.memo.insert((i, j), v);
        v
    }

    fn ln_uncached(&mut self, i: usize, j: u128) -> Option<(u128, u128)> {
        let cap = self.cap;
        let within = |x: u128| (x <= cap).then_some(x);
        let (l_prev, n_prev) = self.ln(i, j - 1)?;
        let (l_top, n_top) = self.ln(i - 1, l_prev)?;
        let l = within(l_prev.checked_mul(2)?.checked_mul(l_top)?)?;
        let n = within(
            n_prev
                .checked_mul(2)?
                .checked_mul(l_top)?
                .checked_add(n_top)?,
        )?;
        Some((l, n))
    }

    /// Predicted length `|U(i, j)| = N(i, j) * (2^(i-1) + 1)`, capped.
    pub fn length(&mut self, i: usize, j: u128) -> Option<u128> {
        let (_, n) = self.ln(i, j)?;
        let reps = 1u128.checked_shl(i as u32 - 1)?.checked_add(1)?;
        n.checked_mul(reps).filter(|&x| x <= self.cap)
    }
}

/// Builds `U(i, j)` in canonical form, refusing when its predicted length
/// exceeds `budget`.
pub fn build_u(i: usize, j: usize, budget: u64) -> Result<BlockedSequence> {
    if i == 0 || (i == 1 && j == 0) {
        return Err(Error::InvalidArgument(format!("U({i}, {j}) is undefined")));
    }
    let mut rec = Recurrences::new(budget as u128);
    if rec.length(i, j as u128).is_none() {
        return Err(Error::BudgetExceeded {
            predicted: predicted_length(i, j),
            budget,
        });
    }
    Ok(build_unchecked(i, j, &mut rec)?.canonical())
}

/// Human-readable predicted length, `> 2^128` when too large to evaluate.
pub fn predicted_length(i: usize, j: usize) -> String {
    let mut rec = Recurrences::new(u128::MAX);
    match rec.length(i, j as u128) {
        Some(x) => x.to_string(),
        None => "> 2^128".into(),
    }
}

fn build_unchecked(i: usize, j: usize, rec: &mut Recurrences) -> Result<BlockedSequence> {
    if i == 1 {
        return u_base1(j);
    }
    if j == 0 {
        return u_base0(i);
    }
    let bot = build_unchecked(i, j - 1, rec)?.canonical();
    let w = bot.live_count();
    let top = build_unchecked(i - 1, w, rec)?.canonical();
    let mid = u_gadget(w)?;
    let sub = compose(&top, &mid)?;
    left_shuffle(&sub, &bot)
}

/// Measured statistics of a built `U(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UStats {
    pub i: usize,
    pub j: usize,
    /// Alphabet size.
    pub n: usize,
    /// Live blocks.
    pub live: usize,
    pub dead_blocks: usize,
    /// `dead_blocks <= L - 1`. Reported rather than enforced: `U(1, j)` has
    /// one dead block and a single live one.
    pub dead_bound_holds: bool,
    pub length: usize,
    /// Occurrence count -> number of symbols with that many occurrences.
    pub per_symbol_occurrences: BTreeMap<usize, usize>,
}

/// Measures `u` and checks it against the recurrences and the structural
/// properties of the construction: live blocks of length `j`, each symbol
/// occurring `2^(i-1) + 1` times with its first occurrence (and only that)
/// in a dead block, and `N * 2^(i-1) = j * L`.
pub fn stats(u: &BlockedSequence, i: usize, j: usize) -> Result<UStats> {
    let mismatch = |m: String| Err(Error::ConstructionMismatch(m));
    let n = u.alphabet_size();
    let live = u.live_count();
    let dead_blocks = u.dead_count();
    let top = u.blocks.iter().flat_map(|b| b.symbols.iter()).max().map_or(0, |&s| s as usize);
    let mut occ = vec![0usize; top + 1];
    for b in &u.blocks {
        for &s in &b.symbols {
            let seen = &mut occ[s as usize];
            let first = *seen == 0;
            *seen += 1;
            if first != !b.live {
                return mismatch(format!(
                    "symbol {s} has a {} occurrence in a {} block",
                    if first { "first" } else { "repeat" },
                    if b.live { "live" } else { "dead" }
                ));
            }
        }
    }
    let mut hist = BTreeMap::new();
    for &c in occ.iter().filter(|&&c| c > 0) {
        *hist.entry(c).or_insert(0) += 1;
    }
    let reps = (1usize << (i - 1)) + 1;
    if let Some((&c, _)) = hist.iter().find(|(&c, _)| c != reps) {
        return mismatch(format!("a symbol occurs {c} times, expected {reps}"));
    }
    if u.blocks.iter().any(|b| b.live && b.symbols.len() != j) {
        return mismatch(format!("a live block has length other than {j}"));
    }
    let mut rec = Recurrences::new(u128::MAX);
    let Some((l_pred, n_pred)) = rec.ln(i, j as u128) else {
        return mismatch("recurrences overflow".into());
    };
    if (live as u128, n as u128) != (l_pred, n_pred) {
        return mismatch(format!(
            "measured (N, L) = ({n}, {live}), recurrences give ({n_pred}, {l_pred})"
        ));
    }
    if n << (i - 1) != j * live {
        return mismatch(format!("N * 2^(i-1) = {} but j * L = {}", n << (i - 1), j * live));
    }
    Ok(UStats {
        i,
        j,
        n,
        live,
        dead_blocks,
        dead_bound_holds: dead_blocks < live,
        length: u.len(),
        per_symbol_occurrences: hist,
    })
}

/// The `N x blocks` incidence matrix: row `s` has a 1 in column `b` iff
/// symbol `s` occurs in block `b`. Expects canonical symbols `1..=N`.
pub fn to_incidence_matrix(u: &BlockedSequence) -> Result<BitMatrix01> {
    let n = u.alphabet_size();
    let mut m = BitMatrix01::new(n, u.block_count())?;
    for (c, b) in u.blocks.iter().enumerate() {
        for &s in &b.symbols {
            if s == 0 || s as usize > n {
                return Err(Error::InvalidArgument(format!(
                    "symbol {s} outside 1..={n}; canonicalize first"
                )));
            }
            m.set(s as usize, c + 1);
        }
    }
    Ok(m)
}

/// A word whose letters are compared by their character order, so `41213`
/// and `dabac` describe the same shape.
fn word_ranks(word: &str) -> Vec<usize> {
    let mut letters: Vec<char> = word.chars().collect();
    letters.sort_unstable();
    letters.dedup();
    word.chars()
        .map(|c| letters.binary_search(&c).unwrap())
        .collect()
}

/// Whether the flattened symbols of `u` contain a subsequence
/// order-isomorphic to `word`.
pub fn contains_order_isomorphic(u: &BlockedSequence, word: &str) -> bool {
    seq_contains_order_isomorphic(&u.flatten(), word)
}

/// [`contains_order_isomorphic`] on a plain symbol sequence.
///
/// Letters that repeat in `word` are placed first by backtracking over the
/// occurrence lists of candidate symbols. The remaining letters then sit in
/// the gaps between placed positions; when no gap holds two of them, they
/// are filled greedily in increasing letter order, each taking the smallest
/// admissible value (a range-successor query). Otherwise a plain
/// backtracking search finishes the job.
pub fn seq_contains_order_isomorphic(seq: &[Symbol], word: &str) -> bool {
    let ranks = word_ranks(word);
    let k = ranks.len();
    if k == 0 {
        return true;
    }
    if k > seq.len() {
        return false;
    }
    let letters = ranks.iter().max().unwrap() + 1;
    let mut count = vec![0usize; letters];
    for &r in &ranks {
        count[r] += 1;
    }
    let m = Matcher {
        seq,
        ranks: &ranks,
        repeated: (0..k).filter(|&p| count[ranks[p]] > 1).collect(),
        singles: (0..k).filter(|&p| count[ranks[p]] == 1).collect(),
        positions: {
            let mut pos: HashMap<Symbol, Vec<usize>> = HashMap::new();
            for (i, &s) in seq.iter().enumerate() {
                pos.entry(s).or_default().push(i);
            }
            pos
        },
        tree: MergeSortTree::new(seq),
        letters,
    };
    let mut st = State {
        value: vec![None; letters],
        at: vec![usize::MAX; k],
    };
    m.place_repeated(0, &mut st)
}

struct Matcher<'a> {
    seq: &'a [Symbol],
    ranks: &'a [usize],
    repeated: Vec<usize>,
    singles: Vec<usize>,
    positions: HashMap<Symbol, Vec<usize>>,
    tree: MergeSortTree,
    letters: usize,
}

struct State {
    /// Symbol chosen for each letter.
    value: Vec<Option<Symbol>>,
    /// Position chosen for each word index.
    at: Vec<usize>,
}

impl Matcher<'_> {
    /// Open interval of values allowed for letter `r` given the letters placed so far.
    fn bounds(&self, r: usize, st: &State) -> (Symbol, Symbol) {
        let lo = (0..r).rev().find_map(|q| st.value[q]).unwrap_or(0);
        let hi = (r + 1..self.letters)
            .find_map(|q| st.value[q])
            .unwrap_or(Symbol::MAX);
        (lo, hi)
    }

    /// Positions strictly between the nearest placed word indices around `p`.
    fn window(&self, p: usize, st: &State) -> (usize, usize) {
        let lo = (0..p)
            .rev()
            .find(|&q| st.at[q] != usize::MAX)
            .map_or(0, |q| st.at[q] + 1);
        let hi = (p + 1..self.ranks.len())
            .find(|&q| st.at[q] != usize::MAX)
            .map_or(self.seq.len(), |q| st.at[q]);
        (lo, hi)
    }

    fn place_repeated(&self, idx: usize, st: &mut State) -> bool {
        if idx == self.repeated.len() {
            return self.place_singles(st);
        }
        let p = self.repeated[idx];
        let r = self.ranks[p];
        // Leave room for the word positions before `p` as well.
        let start = if idx == 0 {
            p
        } else {
            let q = self.repeated[idx - 1];
            st.at[q] + p - q
        };
        // Leave room for the word positions still to come.
        let after = self.ranks.len() - p - 1;
        if start + after >= self.seq.len() {
            return false;
        }
        let end = self.seq.len() - after;
        match st.value[r] {
            Some(v) => {
                let occ = &self.positions[&v];
                let from = occ.partition_point(|&x| x < start);
                for &pos in occ[from..].iter().take_while(|&&x| x < end) {
                    st.at[p] = pos;
                    if self.place_repeated(idx + 1, st) {
                        return true;
                    }
                }
                st.at[p] = usize::MAX;
                false
            }
            None => {
                let (lo, hi) = self.bounds(r, st);
                for pos in start..end {
                    let v = self.seq[pos];
                    if v <= lo || v >= hi {
                        continue;
                    }
                    st.value[r] = Some(v);
                    st.at[p] = pos;
                    if self.place_repeated(idx + 1, st) {
                        return true;
                    }
                }
                st.value[r] = None;
                st.at[p] = usize::MAX;
                false
            }
        }
    }

    fn place_singles(&self, st: &mut State) -> bool {
        if self.singles.is_empty() {
            return true;
        }
        let windows: Vec<(usize, usize)> = self.singles.iter().map(|&p| self.window(p, st)).collect();
        let mut sorted = windows.clone();
        sorted.sort_unstable();
        if sorted.windows(2).all(|w| w[0] != w[1]) {
            self.greedy_singles(&windows, st)
        } else {
            self.dfs_singles(0, st)
        }
    }

    fn greedy_singles(&self, windows: &[(usize, usize)], st: &mut State) -> bool {
        let mut order: Vec<usize> = (0..self.singles.len()).collect();
        order.sort_unstable_by_key(|&i| self.ranks[self.singles[i]]);
        let mut assigned = Vec::new();
        let mut ok = true;
        for i in order {
            let r = self.ranks[self.singles[i]];
            let (lo, hi) = self.bounds(r, st);
            let (a, b) = windows[i];
            match (a < b && lo < Symbol::MAX)
                .then(|| self.tree.successor(a, b, lo + 1))
                .flatten()
            {
                Some(v) if v < hi => {
                    st.value[r] = Some(v);
                    assigned.push(r);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        for r in assigned {
            st.value[r] = None;
        }
        ok
    }

    fn dfs_singles(&self, idx: usize, st: &mut State) -> bool {
        if idx == self.singles.len() {
            return true;
        }
        let p = self.singles[idx];
        let r = self.ranks[p];
        let (lo, hi) = self.bounds(r, st);
        let (a, b) = self.window(p, st);
        for pos in a..b {
            let v = self.seq[pos];
            if v <= lo || v >= hi {
                continue;
            }
            st.value[r] = Some(v);
            st.at[p] = pos;
            if self.dfs_singles(idx + 1, st) {
                st.value[r] = None;
                st.at[p] = usize::MAX;
                return true;
            }
        }
        st.value[r] = None;
        st.at[p] = usize::MAX;
        false
    }
}

/// `true` iff `word` over the letters `a`, `b` has the form `a* b* a b b* a*`.
pub fn pair_shape_ok(word: &[Symbol], a: Symbol, b: Symbol) -> bool {
    // Set of NFA states as a bitmask. 0: leading a's, 1: leading b's,
    // 2: after the middle a, 3: b's after it, 4: trailing a's.
    let mut st = 1u8;
    for &x in word {
        let is_a = x == a;
        if !is_a && x != b {
            continue;
        }
        let mut next = 0u8;
        for q in 0..5 {
            if st >> q & 1 == 0 {
                continue;
            }
            next |= match (q, is_a) {
                (0, true) => 0b00101,
                (0, false) | (1, false) => 0b00010,
                (1, true) => 0b00100,
                (2, false) | (3, false) => 0b01000,
                (3, true) | (4, true) => 0b10000,
                _ => 0,
            };
        }
        st = next;
        if st == 0 {
            return false;
        }
    }
    st & 0b11000 != 0
}

/// Outcome of [`pair_structure_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub checked: usize,
    pub exhaustive: bool,
    /// Offending pairs `(a, b)` with `a < b`.
    pub violations: Vec<(Symbol, Symbol)>,
}

/// Checks the shape of `U` restricted to `{a, b}` for pairs sharing a live
/// block: every such pair when `|u| <= exhaustive_limit`, otherwise
/// `samples` pairs drawn with `seed`.
pub fn pair_structure_check(
    u: &BlockedSequence,
    exhaustive_limit: usize,
    samples: usize,
    seed: u64,
) -> PairReport {
    use rand::{Rng, SeedableRng};
    let mut positions: HashMap<Symbol, Vec<usize>> = HashMap::new();
    for (p, &s) in u.flatten().iter().enumerate() {
        positions.entry(s).or_default().push(p);
    }
    let check = |a: Symbol, b: Symbol| {
        let (pa, pb) = (&positions[&a], &positions[&b]);
        let mut merged: Vec<(usize, Symbol)> = pa
            .iter()
            .map(|&p| (p, a))
            .chain(pb.iter().map(|&p| (p, b)))
            .collect();
        merged.sort_unstable();
        let word: Vec<Symbol> = merged.into_iter().map(|(_, s)| s).collect();
        pair_shape_ok(&word, a, b)
    };
    let live: Vec<&Block> = u.blocks.iter().filter(|b| b.live && b.symbols.len() >= 2).collect();
    let mut report = PairReport {
        checked: 0,
        exhaustive: u.len() <= exhaustive_limit,
        violations: Vec::new(),
    };
    let visit = |x: Symbol, y: Symbol, report: &mut PairReport| {
        let (a, b) = (x.min(y), x.max(y));
        report.checked += 1;
        if !check(a, b) {
            report.violations.push((a, b));
        }
    };
    if report.exhaustive {
        let mut seen = std::collections::HashSet::new();
        for blk in &live {
            for (p, &x) in blk.symbols.iter().enumerate() {
                for &y in &blk.symbols[p + 1..] {
                    if seen.insert((x.min(y), x.max(y))) {
                        visit(x, y, &mut report);
                    }
                }
            }
        }
    } else if !live.is_empty() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let blk = live[rng.gen_range(0..live.len())];
            let p = rng.gen_range(0..blk.symbols.len());
            let mut q = rng.gen_range(0..blk.symbols.len() - 1);
            if q >= p {
                q += 1;
            }
            visit(blk.symbols[p], blk.symbols[q], &mut report);
        }
    }
    report.violations.sort_unstable();
    report.violations.dedup();
    report
}

/// The `bseq` format: one block per line, `L` or `D` then the symbols.
pub fn write_bseq(u: &BlockedSequence) -> String {
    let mut out = String::new();
    for b in &u.blocks {
        out.push(if b.live { 'L' } else { 'D' });
        for s in &b.symbols {
            out.push(' ');
            out.push_str(&s.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn parse_bseq(text: &str) -> Result<BlockedSequence> {
    let mut blocks = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let mut it = l.split_whitespace();
        let live = match it.next() {
            Some("L") => true,
            Some("D") => false,
            other => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected L or D, got {other:?}"),
                })
            }
        };
        let symbols = it
            .map(|t| {
                t.parse::<Symbol>().map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: format!("{e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        blocks.push(Block { live, symbols });
    }
    BlockedSequence::new(blocks)
}
