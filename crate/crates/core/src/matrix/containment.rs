//! Pattern containment by forward-checking backtracking.
//!
//! The search repeatedly picks the unplaced pattern 1 with the fewest
//! candidate host 1s in its feasible window (the window shrinks as rows and
//! columns of the pattern get pinned to host rows and columns), so dead ends
//! surface early. Both plain and trimmed containment run on the same engine;
//! trimmed mode additionally requires every pattern row to land on a host
//! row that holds a 1.

use super::{BitMatrix01, Storage, TrimmedPattern};

const UNSET: usize = usize::MAX;

/// Read access to a host matrix, 0-based, rows bottom-to-top.
pub(crate) trait HostView {
    fn dims(&self) -> (usize, usize);
    fn get(&self, r: usize, c: usize) -> bool;
    /// 1s in rows `r0..=r1`, columns `c0..=c1`.
    fn count(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> usize;
    /// Calls `f` on 1s of the window in row-major order; stops and returns
    /// true as soon as `f` does.
    fn any_in<F: FnMut(usize, usize) -> bool>(
        &self,
        r0: usize,
        r1: usize,
        c0: usize,
        c1: usize,
        f: F,
    ) -> bool;
    /// Rows in `r0..=r1` holding at least one 1.
    fn nonempty_rows(&self, r0: usize, r1: usize) -> usize;
}

fn window(c0: usize, c1: usize) -> u64 {
    (u64::MAX >> (63 - (c1 - c0))) << c0
}

/// Host with at most 64 columns, one bitmask per row. Mutable so that
/// search procedures can grow and shrink it in place.
#[derive(Clone, Debug)]
pub(crate) struct MaskHost {
    cols: usize,
    rows: Vec<u64>,
}

impl MaskHost {
    pub(crate) fn empty(rows: usize, cols: usize) -> Self {
        assert!(cols <= 64);
        MaskHost {
            cols,
            rows: vec![0; rows],
        }
    }

    pub(crate) fn set(&mut self, r: usize, c: usize) {
        self.rows[r] |= 1 << c;
    }

    pub(crate) fn clear(&mut self, r: usize, c: usize) {
        self.rows[r] &= !(1 << c);
    }

    pub(crate) fn row_mask(&self, r: usize) -> u64 {
        self.rows[r]
    }

    pub(crate) fn view(&self) -> Masks<'_> {
        Masks::new(self.cols, &self.rows)
    }

    pub(crate) fn to_matrix(&self) -> BitMatrix01 {
        let mut m = BitMatrix01::new(self.rows.len(), self.cols).expect("positive dims");
        for (r, &bits) in self.rows.iter().enumerate() {
            let mut x = bits;
            while x != 0 {
                let c = x.trailing_zeros() as usize;
                m.set(r + 1, c + 1);
                x &= x - 1;
            }
        }
        m
    }
}

/// Borrowed row bitmasks (bit `c` of entry `r` is cell `(r, c)`, 0-based).
#[derive(Clone, Copy, Debug)]
pub(crate) struct Masks<'a> {
    cols: usize,
    rows: &'a [u64],
}

impl<'a> Masks<'a> {
    pub(crate) fn new(cols: usize, rows: &'a [u64]) -> Self {
        assert!(cols <= 64);
        Masks { cols, rows }
    }
}

impl HostView for Masks<'_> {
    fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.cols)
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r] >> c & 1 == 1
    }

    fn count(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> usize {
        let w = window(c0, c1);
        self.rows[r0..=r1]
            .iter()
            .map(|&x| (x & w).count_ones() as usize)
            .sum()
    }

    fn any_in<F: FnMut(usize, usize) -> bool>(
        &self,
        r0: usize,
        r1: usize,
        c0: usize,
        c1: usize,
        mut f: F,
    ) -> bool {
        let w = window(c0, c1);
        for r in r0..=r1 {
            let mut x = self.rows[r] & w;
            while x != 0 {
                let c = x.trailing_zeros() as usize;
                if f(r, c) {
                    return true;
                }
                x &= x - 1;
            }
        }
        false
    }

    fn nonempty_rows(&self, r0: usize, r1: usize) -> usize {
        if r0 > r1 {
            return 0;
        }
        self.rows[r0..=r1].iter().filter(|&&x| x != 0).count()
    }
}

/// Host as sorted column lists per row, with 2D prefix sums when they fit.
struct ListHost {
    cols: usize,
    rows: Vec<Vec<u32>>,
    prefix: Option<Vec<u32>>,
    nonempty: Vec<u32>,
}

const PREFIX_LIMIT: usize = 1 << 25;

impl ListHost {
    fn new(m: &BitMatrix01) -> Self {
        let (n, cols) = (m.rows(), m.cols());
        let mut rows = vec![Vec::new(); n];
        for (r, c) in m.ones() {
            rows[r - 1].push((c - 1) as u32);
        }
        let prefix = if (n + 1) * (cols + 1) <= PREFIX_LIMIT {
            let stride = cols + 1;
            let mut p = vec![0u32; (n + 1) * stride];
            for r in 0..n {
                let mut run = 0u32;
                let mut it = rows[r].iter().peekable();
                for c in 0..cols {
                    if it.peek().is_some_and(|&&x| x as usize == c) {
                        run += 1;
                        it.next();
                    }
                    p[(r + 1) * stride + c + 1] = p[r * stride + c + 1] + run;
                }
            }
            Some(p)
        } else {
            None
        };
        let mut nonempty = vec![0u32; n + 1];
        for r in 0..n {
            nonempty[r + 1] = nonempty[r] + u32::from(!rows[r].is_empty());
        }
        ListHost {
            cols,
            rows,
            prefix,
            nonempty,
        }
    }

    fn span(&self, r: usize, c0: usize, c1: usize) -> &[u32] {
        let row = &self.rows[r];
        let lo = row.partition_point(|&x| (x as usize) < c0);
        let hi = row.partition_point(|&x| (x as usize) <= c1);
        &row[lo..hi]
    }
}

impl HostView for ListHost {
    fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.cols)
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].binary_search(&(c as u32)).is_ok()
    }

    fn count(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> usize {
        match &self.prefix {
            Some(p) => {
                let s = self.cols + 1;
                let at = |r: usize, c: usize| p[r * s + c] as usize;
                at(r1 + 1, c1 + 1) + at(r0, c0) - at(r0, c1 + 1) - at(r1 + 1, c0)
            }
            None => (r0..=r1).map(|r| self.span(r, c0, c1).len()).sum(),
        }
    }

    fn any_in<F: FnMut(usize, usize) -> bool>(
        &self,
        r0: usize,
        r1: usize,
        c0: usize,
        c1: usize,
        mut f: F,
    ) -> bool {
        for r in r0..=r1 {
            for &c in self.span(r, c0, c1) {
                if f(r, c as usize) {
                    return true;
                }
            }
        }
        false
    }

    fn nonempty_rows(&self, r0: usize, r1: usize) -> usize {
        if r0 > r1 {
            return 0;
        }
        (self.nonempty[r1 + 1] - self.nonempty[r0]) as usize
    }
}

fn host_masks(m: &BitMatrix01) -> Option<Vec<u64>> {
    if m.cols() > 64 {
        return None;
    }
    let rows = match &m.storage {
        Storage::Dense { words: 1, bits } => bits.clone(),
        _ => {
            let mut rows = vec![0u64; m.rows()];
            for (r, c) in m.ones() {
                rows[r - 1] |= 1 << (c - 1);
            }
            rows
        }
    };
    Some(rows)
}

/// A pattern prepared for repeated searches.
#[derive(Clone, Debug)]
pub(crate) struct CompiledPattern {
    k: usize,
    l: usize,
    ones: Vec<(usize, usize)>,
    by_row: Vec<Vec<usize>>,
    by_col: Vec<Vec<usize>>,
}

impl CompiledPattern {
    pub(crate) fn new(p: &BitMatrix01) -> Self {
        let ones: Vec<(usize, usize)> = p.ones().into_iter().map(|(r, c)| (r - 1, c - 1)).collect();
        let mut by_row = vec![Vec::new(); p.rows()];
        let mut by_col = vec![Vec::new(); p.cols()];
        for (i, &(r, c)) in ones.iter().enumerate() {
            by_row[r].push(i);
            by_col[c].push(i);
        }
        CompiledPattern {
            k: p.rows(),
            l: p.cols(),
            ones,
            by_row,
            by_col,
        }
    }

    /// Whether `self` embeds in `host`. With `trimmed`, every pattern row must
    /// map to a nonempty host row.
    pub(crate) fn embeds<H: HostView>(&self, host: &H, trimmed: bool) -> bool {
        let mut s = Search::new(self, host, trimmed);
        if !s.fits() {
            return false;
        }
        s.run()
    }

    /// Whether some embedding sends a pattern 1 onto host cell `(r, c)`
    /// (0-based). Used to test only the embeddings created by a new 1.
    pub(crate) fn embeds_through<H: HostView>(
        &self,
        host: &H,
        trimmed: bool,
        r: usize,
        c: usize,
    ) -> bool {
        let mut s = Search::new(self, host, trimmed);
        if !s.fits() {
            return false;
        }
        let (n, m) = host.dims();
        for idx in 0..self.ones.len() {
            let (pr, pc) = self.ones[idx];
            if r < pr || n - r < self.k - pr || c < pc || m - c < self.l - pc {
                continue;
            }
            let mark = s.mark();
            if s.place(idx, r, c) && s.run() {
                return true;
            }
            s.undo(mark);
        }
        false
    }
    /// Whether some embedding sends the 1 at pattern cell `pat` onto host
    /// cell `at` (both 0-based).
    fn embeds_pinned<H: HostView>(&self, host: &H, pat: (usize, usize), at: (usize, usize)) -> bool {
        let Some(idx) = self.ones.iter().position(|&x| x == pat) else {
            return false;
        };
        let mut s = Search::new(self, host, false);
        s.fits() && s.place(idx, at.0, at.1) && s.run()
    }
}

/// Whether `host` has an occurrence of `pattern` that maps the pattern's 1
/// at `pat` onto the 1 at `at` (1-based cells).
pub fn contains_at(pattern: &BitMatrix01, pat: (usize, usize), host: &BitMatrix01, at: (usize, usize)) -> bool {
    if !pattern.get(pat.0, pat.1) || !host.get(at.0, at.1) {
        return false;
    }
    let p = CompiledPattern::new(pattern);
    let (pz, az) = ((pat.0 - 1, pat.1 - 1), (at.0 - 1, at.1 - 1));
    match host_masks(host) {
        Some(rows) => p.embeds_pinned(&Masks::new(host.cols(), &rows), pz, az),
        None => p.embeds_pinned(&ListHost::new(host), pz, az),
    }
}

#[derive(Clone, Debug, Default)]
struct Buffers {
    row_map: Vec<usize>,
    col_map: Vec<usize>,
    done: Vec<bool>,
    trail_rows: Vec<usize>,
    trail_cols: Vec<usize>,
    trail_done: Vec<usize>,
}

struct Search<'a, H> {
    p: &'a CompiledPattern,
    h: &'a H,
    trimmed: bool,
    n: usize,
    m: usize,
    row_map: Vec<usize>,
    col_map: Vec<usize>,
    done: Vec<bool>,
    trail_rows: Vec<usize>,
    trail_cols: Vec<usize>,
    trail_done: Vec<usize>,
}

type Mark = (usize, usize, usize);

impl<'a, H: HostView> Search<'a, H> {
    fn new(p: &'a CompiledPattern, h: &'a H, trimmed: bool) -> Self {
        Self::with_buffers(p, h, trimmed, Buffers::default())
    }

    fn with_buffers(p: &'a CompiledPattern, h: &'a H, trimmed: bool, mut b: Buffers) -> Self {
        let (n, m) = h.dims();
        b.row_map.clear();
        b.row_map.resize(p.k, UNSET);
        b.col_map.clear();
        b.col_map.resize(p.l, UNSET);
        b.done.clear();
        b.done.resize(p.ones.len(), false);
        b.trail_rows.clear();
        b.trail_cols.clear();
        b.trail_done.clear();
        Search {
            p,
            h,
            trimmed,
            n,
            m,
            row_map: b.row_map,
            col_map: b.col_map,
            done: b.done,
            trail_rows: b.trail_rows,
            trail_cols: b.trail_cols,
            trail_done: b.trail_done,
        }
    }

    fn into_buffers(self) -> Buffers {
        Buffers {
            row_map: self.row_map,
            col_map: self.col_map,
            done: self.done,
            trail_rows: self.trail_rows,
            trail_cols: self.trail_cols,
            trail_done: self.trail_done,
        }
    }

    fn fits(&self) -> bool {
        self.p.k <= self.n && self.p.l <= self.m
    }

    fn mark(&self) -> Mark {
        (
            self.trail_rows.len(),
            self.trail_cols.len(),
            self.trail_done.len(),
        )
    }

    fn undo(&mut self, (a, b, c): Mark) {
        for pr in self.trail_rows.drain(a..) {
            self.row_map[pr] = UNSET;
        }
        for pc in self.trail_cols.drain(b..) {
            self.col_map[pc] = UNSET;
        }
        for i in self.trail_done.drain(c..) {
            self.done[i] = false;
        }
    }

    fn row_range(&self, pr: usize) -> (usize, usize) {
        if self.row_map[pr] != UNSET {
            return (self.row_map[pr], self.row_map[pr]);
        }
        let mut lo = pr;
        let mut hi = self.n - (self.p.k - pr);
        for q in (0..pr).rev() {
            if self.row_map[q] != UNSET {
                lo = lo.max(self.row_map[q] + (pr - q));
                break;
            }
        }
        for q in pr + 1..self.p.k {
            if self.row_map[q] != UNSET {
                hi = hi.min(self.row_map[q].saturating_sub(q - pr));
                if self.row_map[q] < q - pr {
                    return (1, 0);
                }
                break;
            }
        }
        (lo, hi)
    }

    fn col_range(&self, pc: usize) -> (usize, usize) {
        if self.col_map[pc] != UNSET {
            return (self.col_map[pc], self.col_map[pc]);
        }
        let mut lo = pc;
        let mut hi = self.m - (self.p.l - pc);
        for q in (0..pc).rev() {
            if self.col_map[q] != UNSET {
                lo = lo.max(self.col_map[q] + (pc - q));
                break;
            }
        }
        for q in pc + 1..self.p.l {
            if self.col_map[q] != UNSET {
                if self.col_map[q] < q - pc {
                    return (1, 0);
                }
                hi = hi.min(self.col_map[q] - (q - pc));
                break;
            }
        }
        (lo, hi)
    }

    /// Trimmed mode: the pattern rows strictly between consecutive pinned
    /// rows around `pr` need that many nonempty host rows in between.
    fn gaps_ok(&self, pr: usize) -> bool {
        if !self.trimmed {
            return true;
        }
        let hr = self.row_map[pr];
        let below = (0..pr).rev().find(|&q| self.row_map[q] != UNSET);
        let (lo_host, need_lo) = match below {
            Some(q) => (self.row_map[q] + 1, pr - q - 1),
            None => (0, pr),
        };
        if need_lo > 0 && (hr == 0 || self.h.nonempty_rows(lo_host, hr - 1) < need_lo) {
            return false;
        }
        let above = (pr + 1..self.p.k).find(|&q| self.row_map[q] != UNSET);
        let (hi_host, need_hi) = match above {
            Some(q) => (self.row_map[q], q - pr - 1),
            None => (self.n, self.p.k - pr - 1),
        };
        need_hi == 0 || (hi_host > hr + 1 && self.h.nonempty_rows(hr + 1, hi_host - 1) >= need_hi)
    }

    /// Pins pattern 1 `idx` on host cell `(r, c)` and checks every pattern 1
    /// whose row and column are now both pinned. Leaves the trail dirty on
    /// failure; callers undo to a mark.
    fn place(&mut self, idx: usize, r: usize, c: usize) -> bool {
        let (pr, pc) = self.p.ones[idx];
        let p = self.p;
        if self.row_map[pr] == UNSET {
            self.row_map[pr] = r;
            self.trail_rows.push(pr);
            if !self.gaps_ok(pr) {
                return false;
            }
            for &j in &p.by_row[pr] {
                let cj = self.col_map[p.ones[j].1];
                if !self.done[j] && cj != UNSET {
                    if !self.h.get(r, cj) {
                        return false;
                    }
                    self.done[j] = true;
                    self.trail_done.push(j);
                }
            }
        }
        if self.col_map[pc] == UNSET {
            self.col_map[pc] = c;
            self.trail_cols.push(pc);
            for &j in &p.by_col[pc] {
                let rj = self.row_map[p.ones[j].0];
                if !self.done[j] && rj != UNSET {
                    if !self.h.get(rj, c) {
                        return false;
                    }
                    self.done[j] = true;
                    self.trail_done.push(j);
                }
            }
        }
        if !self.done[idx] {
            self.done[idx] = true;
            self.trail_done.push(idx);
        }
        true
    }

    fn final_ok(&self) -> bool {
        if !self.trimmed {
            return true;
        }
        let mut prev: Option<usize> = None;
        let mut run = 0;
        for pr in 0..self.p.k {
            let hr = self.row_map[pr];
            if hr == UNSET {
                run += 1;
                continue;
            }
            if run > 0 {
                let lo = prev.map_or(0, |x| x + 1);
                if hr == 0 || self.h.nonempty_rows(lo, hr - 1) < run {
                    return false;
                }
            }
            prev = Some(hr);
            run = 0;
        }
        if run > 0 {
            let lo = prev.map_or(0, |x| x + 1);
            if lo >= self.n || self.h.nonempty_rows(lo, self.n - 1) < run {
                return false;
            }
        }
        true
    }

    fn run(&mut self) -> bool {
        let mut best: Option<(usize, usize, (usize, usize, usize, usize))> = None;
        for idx in 0..self.p.ones.len() {
            if self.done[idx] {
                continue;
            }
            let (pr, pc) = self.p.ones[idx];
            let (r0, r1) = self.row_range(pr);
            let (c0, c1) = self.col_range(pc);
            if r0 > r1 || c0 > c1 {
                return false;
            }
            let cnt = self.h.count(r0, r1, c0, c1);
            if cnt == 0 {
                return false;
            }
            if best.is_none_or(|(_, b, _)| cnt < b) {
                best = Some((idx, cnt, (r0, r1, c0, c1)));
            }
        }
        let Some((idx, _, (r0, r1, c0, c1))) = best else {
            return self.final_ok();
        };
        let h = self.h;
        h.any_in(r0, r1, c0, c1, |r, c| {
            let mark = self.mark();
            let ok = self.place(idx, r, c) && self.run();
            if !ok {
                self.undo(mark);
            }
            ok
        })
    }
}

/// A compiled pattern with reusable search buffers, for checking many hosts.
#[derive(Clone, Debug)]
pub struct Matcher {
    p: CompiledPattern,
    trimmed: bool,
    bufs: Buffers,
}

impl Matcher {
    /// Plain containment of `pattern`.
    pub fn new(pattern: &BitMatrix01) -> Self {
        Matcher {
            p: CompiledPattern::new(pattern),
            trimmed: false,
            bufs: Buffers::default(),
        }
    }

    /// Trimmed containment of `q`.
    pub fn trimmed(q: &TrimmedPattern) -> Self {
        Matcher {
            p: CompiledPattern::new(q.base()),
            trimmed: !q.zero_rows().is_empty(),
            bufs: Buffers::default(),
        }
    }

    pub fn matches(&mut self, host: &BitMatrix01) -> bool {
        match host_masks(host) {
            Some(rows) => self.matches_masks(host.cols(), &rows),
            None => {
                let h = ListHost::new(host);
                self.run_on(&h)
            }
        }
    }

    /// Host given as one bitmask per row, bottom row first, bit `c - 1` for
    /// column `c`. At most 64 columns.
    pub fn matches_masks(&mut self, cols: usize, rows: &[u64]) -> bool {
        let h = Masks::new(cols, rows);
        self.run_on(&h)
    }

    fn run_on<H: HostView>(&mut self, h: &H) -> bool {
        let bufs = std::mem::take(&mut self.bufs);
        let mut s = Search::with_buffers(&self.p, h, self.trimmed, bufs);
        let found = s.fits() && s.run();
        self.bufs = s.into_buffers();
        found
    }
}

/// Whether `host` contains `pattern`: some increasing choice of rows and
/// columns of `host` carries a 1 wherever `pattern` has one.
pub fn contains(pattern: &BitMatrix01, host: &BitMatrix01) -> bool {
    Matcher::new(pattern).matches(host)
}

/// Containment in which every row of the pattern, including its all-zero
/// rows, must land on a host row that holds a 1 somewhere.
pub fn contains_trimmed(q: &TrimmedPattern, host: &BitMatrix01) -> bool {
    Matcher::trimmed(q).matches(host)
}
