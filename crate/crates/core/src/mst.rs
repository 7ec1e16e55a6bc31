//! Merge-sort tree over a fixed array: "smallest value >= v among positions
//! l..r" in O(log^2 n).

pub(crate) struct MergeSortTree {
    size: usize,
    nodes: Vec<Vec<u32>>,
}

impl MergeSortTree {
    pub(crate) fn new(values: &[u32]) -> Self {
        let size = values.len().next_power_of_two().max(1);
        let mut nodes = vec![Vec::new(); 2 * size];
        for (i, &v) in values.iter().enumerate() {
            nodes[size + i].push(v);
        }
        for i in (1..size).rev() {
            let (a, b) = (&nodes[2 * i], &nodes[2 * i + 1]);
            let mut merged = Vec::with_capacity(a.len() + b.len());
            let (mut x, mut y) = (0, 0);
            while x < a.len() || y < b.len() {
                if y == b.len() || (x < a.len() && a[x] <= b[y]) {
                    merged.push(a[x]);
                    x += 1;
                } else {
                    merged.push(b[y]);
                    y += 1;
                }
            }
            nodes[i] = merged;
        }
        MergeSortTree { size, nodes }
    }

    /// Smallest value `>= v` at positions `l..r` (half-open).
    pub(crate) fn successor(&self, l: usize, r: usize, v: u32) -> Option<u32> {
        let mut best: Option<u32> = None;
        let mut consider = |node: &Vec<u32>| {
            let i = node.partition_point(|&x| x < v);
            if let Some(&x) = node.get(i) {
                best = Some(best.map_or(x, |b| b.min(x)));
            }
        };
        let (mut lo, mut hi) = (l + self.size, r.min(self.size) + self.size);
        while lo < hi {
            if lo & 1 == 1 {
                consider(&self.nodes[lo]);
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                consider(&self.nodes[hi]);
            }
            lo >>= 1;
            hi >>= 1;
        }
        best
    }

    /// Whether some position in `l..r` holds a value strictly between `lo` and `hi`.
    pub(crate) fn any_between(&self, l: usize, r: usize, lo: u32, hi: u32) -> bool {
        l < r && lo < u32::MAX && self.successor(l, r, lo + 1).is_some_and(|x| x < hi)
    }
}
