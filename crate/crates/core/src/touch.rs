use crate::matrix::BitMatrix01;

/// Which ranks a sorter touched at each step: row `i` (bottom-to-top is
/// chronological) has a 1 in column `j` iff step `i` touched rank `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TouchMatrix {
    touched: BitMatrix01,
    per_step: Vec<usize>,
}

impl TouchMatrix {
    /// `steps[i]` lists the ranks touched at step `i + 1`; every list must be
    /// duplicate-free and within `1..=n` where `n = steps.len()`.
    pub(crate) fn from_steps(steps: &[Vec<usize>]) -> Self {
        let n = steps.len();
        let mut touched = BitMatrix01::new(n, n).expect("at least one step");
        for (i, ranks) in steps.iter().enumerate() {
            for &r in ranks {
                let fresh = touched.set(i + 1, r);
                debug_assert!(fresh, "rank {r} reported twice at step {}", i + 1);
            }
        }
        TouchMatrix {
            touched,
            per_step: steps.iter().map(Vec::len).collect(),
        }
    }

    pub fn steps(&self) -> usize {
        self.per_step.len()
    }

    pub fn touched(&self) -> &BitMatrix01 {
        &self.touched
    }

    pub fn into_matrix(self) -> BitMatrix01 {
        self.touched
    }

    /// Touch count of each step, index 0 is step 1.
    pub fn per_step_counts(&self) -> &[usize] {
        &self.per_step
    }

    /// Total number of touches, which is also the weight of the matrix.
    pub fn total(&self) -> usize {
        self.per_step.iter().sum()
    }
}
