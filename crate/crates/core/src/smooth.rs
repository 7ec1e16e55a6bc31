//! Heap Sort with a SmoothHeap, instrumented to report which ranks each
//! Delete-Min touches.
//!
//! Insertions append roots without comparisons. Delete-Min scans the roots
//! for the minimum, replaces it by its children (in order) and then
//! consolidates the root list into a single tree: a root that is larger
//! than its neighbours is linked under the larger neighbour, on the side
//! facing it, until one root remains. Linking on the facing side keeps the
//! in-order sequence of every tree equal to insertion order.

use std::collections::VecDeque;

use crate::greedy::greedy_touch_matrix;
use crate::perm::Permutation;
use crate::touch::TouchMatrix;

#[derive(Clone, Debug, Default)]
struct Node {
    left: VecDeque<usize>,
    right: Vec<usize>,
}

/// A SmoothHeap over keys `1..=n` (keys are ranks, so distinct).
#[derive(Clone, Debug)]
pub struct SmoothHeap {
    nodes: Vec<Node>,
    /// Insertion position of each key, for the in-order check.
    position: Vec<usize>,
    roots: Vec<usize>,
    inserted: usize,
    len: usize,
}

impl SmoothHeap {
    pub fn with_capacity(n: usize) -> Self {
        SmoothHeap {
            nodes: vec![Node::default(); n + 1],
            position: vec![0; n + 1],
            roots: Vec::new(),
            inserted: 0,
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Appends `key` as the rightmost root. Panics if `key` is out of range.
    pub fn insert(&mut self, key: usize) {
        assert!(key >= 1 && key < self.nodes.len(), "key out of range");
        self.inserted += 1;
        self.position[key] = self.inserted;
        self.roots.push(key);
        self.len += 1;
    }

    /// Removes the minimum. Returns it with the sorted list of keys touched.
    pub fn delete_min(&mut self) -> Option<(usize, Vec<usize>)> {
        let (idx, &min) = self.roots.iter().enumerate().min_by_key(|&(_, &k)| k)?;
        let mut touched = if self.roots.len() >= 2 {
            self.roots.clone()
        } else {
            vec![min]
        };
        let node = std::mem::take(&mut self.nodes[min]);
        let tail = self.roots.split_off(idx + 1);
        self.roots.pop();
        self.roots.extend(node.left);
        self.roots.extend(node.right);
        self.roots.extend(tail);
        self.len -= 1;

        if self.roots.len() >= 2 {
            touched.extend(self.roots.iter().copied());
            self.consolidate();
        }
        touched.sort_unstable();
        touched.dedup();
        Some((min, touched))
    }

    fn consolidate(&mut self) {
        let list = std::mem::take(&mut self.roots);
        let mut stack: Vec<usize> = Vec::with_capacity(list.len());
        for x in list {
            while let Some(&top) = stack.last() {
                if top < x {
                    break;
                }
                stack.pop();
                match stack.last() {
                    Some(&below) if below > x => self.nodes[below].right.push(top),
                    _ => self.nodes[x].left.push_front(top),
                }
            }
            stack.push(x);
        }
        while stack.len() > 1 {
            let top = stack.pop().unwrap();
            let below = *stack.last().unwrap();
            self.nodes[below].right.push(top);
        }
        self.roots = stack;
    }

    /// Checks heap order and that the in-order sequence of the forest follows
    /// insertion order. Returns a description of the first violation.
    pub fn validate(&self) -> Result<(), String> {
        let mut order = Vec::with_capacity(self.len);
        let mut stack: Vec<(usize, bool)> = self.roots.iter().rev().map(|&r| (r, false)).collect();
        while let Some((x, expanded)) = stack.pop() {
            if expanded {
                order.push(x);
                continue;
            }
            let node = &self.nodes[x];
            for &c in node.left.iter().chain(node.right.iter()) {
                if c < x {
                    return Err(format!("child {c} below parent {x}"));
                }
            }
            for &c in node.right.iter().rev() {
                stack.push((c, false));
            }
            stack.push((x, true));
            for &c in node.left.iter().rev() {
                stack.push((c, false));
            }
        }
        if order.len() != self.len {
            return Err(format!("forest holds {} keys, expected {}", order.len(), self.len));
        }
        if let Some(w) = order
            .windows(2)
            .find(|w| self.position[w[0]] >= self.position[w[1]])
        {
            return Err(format!("keys {} and {} out of insertion order", w[0], w[1]));
        }
        Ok(())
    }
}

/// Result of [`smooth_heap_sort`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothSort {
    pub output: Vec<usize>,
    pub touch: TouchMatrix,
}

/// Inserts `s(1), ..., s(n)` and then performs `n` Delete-Mins.
pub fn smooth_heap_sort(s: &Permutation) -> SmoothSort {
    let n = s.len();
    let mut heap = SmoothHeap::with_capacity(n);
    for &v in s.values() {
        heap.insert(v);
    }
    debug_assert_eq!(heap.validate(), Ok(()));
    let mut output = Vec::with_capacity(n);
    let mut steps = Vec::with_capacity(n);
    while let Some((min, touched)) = heap.delete_min() {
        output.push(min);
        steps.push(touched);
    }
    SmoothSort {
        output,
        touch: TouchMatrix::from_steps(&steps),
    }
}

/// Total touches of Greedy on `s` against SmoothHeap on the transpose of `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothVsGreedy {
    pub n: usize,
    pub greedy_total: usize,
    pub smooth_total: usize,
    /// `greedy_total / smooth_total`.
    pub ratio: f64,
}

pub fn smooth_vs_greedy_report(s: &Permutation) -> SmoothVsGreedy {
    let greedy_total = greedy_touch_matrix(s).total();
    let smooth_total = smooth_heap_sort(&s.transpose()).touch.total();
    SmoothVsGreedy {
        n: s.len(),
        greedy_total,
        smooth_total,
        ratio: greedy_total as f64 / smooth_total as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::gen_uniform;

    #[test]
    fn hand_example() {
        let s: Permutation = "213".parse().unwrap();
        let r = smooth_heap_sort(&s);
        assert_eq!(r.output, vec![1, 2, 3]);
        assert_eq!(r.touch.touched().row_ones(1), vec![1, 2, 3]);
        assert_eq!(r.touch.total(), 5);
    }

    #[test]
    fn single_element() {
        let r = smooth_heap_sort(&Permutation::identity(1));
        assert_eq!(r.output, vec![1]);
        assert_eq!(r.touch.total(), 1);
        let rep = smooth_vs_greedy_report(&Permutation::identity(1));
        assert_eq!((rep.greedy_total, rep.smooth_total), (1, 1));
        assert_eq!(rep.ratio, 1.0);
    }

    #[test]
    fn sorts_and_keeps_invariants() {
        for seed in 0..50 {
            let s = gen_uniform(60, seed).unwrap();
            let n = s.len();
            let mut heap = SmoothHeap::with_capacity(n);
            for &v in s.values() {
                heap.insert(v);
            }
            let mut out = Vec::new();
            while let Some((m, touched)) = heap.delete_min() {
                heap.validate().unwrap();
                assert!(touched.contains(&m));
                out.push(m);
            }
            assert_eq!(out, (1..=n).collect::<Vec<_>>());
        }
    }
}
