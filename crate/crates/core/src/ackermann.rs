//! The Ackermann table `a(i, j)` and its inverses, with values saturating
//! at a cap so that only threshold comparisons are ever exact.
//!
//! `a(1, j) = 2^j`, `a(i, 1) = 2`, and `a(i, j) = w * a(i - 1, w)` with
//! `w = a(i, j - 1)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// An exact value, or "more than the cap".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatValue {
    Exact(BigUint),
    Overflow,
}

impl SatValue {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            SatValue::Exact(v) => Some(v),
            SatValue::Overflow => None,
        }
    }

    /// `self >= m`, valid whenever `m` is at most the cap used to compute `self`.
    pub fn at_least(&self, m: &BigUint) -> bool {
        match self {
            SatValue::Exact(v) => v >= m,
            SatValue::Overflow => true,
        }
    }
}

impl PartialOrd for SatValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SatValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (SatValue::Exact(a), SatValue::Exact(b)) => a.cmp(b),
            (SatValue::Exact(_), SatValue::Overflow) => Ordering::Less,
            (SatValue::Overflow, SatValue::Exact(_)) => Ordering::Greater,
            (SatValue::Overflow, SatValue::Overflow) => Ordering::Equal,
        }
    }
}

impl fmt::Display for SatValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatValue::Exact(v) => write!(f, "{v}"),
            SatValue::Overflow => write!(f, "overflow"),
        }
    }
}

/// Memoized table for one cap.
#[derive(Debug)]
pub struct AckTable {
    cap: BigUint,
    /// Bit length of the cap: `2^j` exceeds the cap for every `j` at or above it.
    cap_bits: u64,
    memo: HashMap<(usize, u64), SatValue>,
}

impl AckTable {
    pub fn new(cap: BigUint) -> Self {
        let cap_bits = cap.bits();
        AckTable {
            cap,
            cap_bits,
            memo: HashMap::new(),
        }
    }

    pub fn cap(&self) -> &BigUint {
        &self.cap
    }

    fn saturate(&self, v: BigUint) -> SatValue {
        if v > self.cap {
            SatValue::Overflow
        } else {
            SatValue::Exact(v)
        }
    }

    /// `a(i, j)` for `i, j >= 1`.
    pub fn get(&mut self, i: usize, j: u64) -> SatValue {
        assert!(i >= 1 && j >= 1, "a(i, j) needs i, j >= 1");
        // a(i, j) >= 2^j everywhere.
        if j >= self.cap_bits {
            return SatValue::Overflow;
        }
        if i == 1 {
            return self.saturate(BigUint::one() << j);
        }
        if j == 1 {
            return self.saturate(BigUint::from(2u32));
        }
        if let Some(v) = self.memo.get(&(i, j)) {
            return v.clone();
        }
        let v = match self.get(i, j - 1) {
            SatValue::Overflow => SatValue::Overflow,
            SatValue::Exact(w) => match w.to_u64() {
                Some(wj) => match self.get(i - 1, wj) {
                    SatValue::Exact(inner) => self.saturate(w * inner),
                    SatValue::Overflow => SatValue::Overflow,
                },
                None => SatValue::Overflow,
            },
        };
        self.memo.insert((i, j), v.clone());
        v
    }
}

/// `a(i, j)`, saturating above `cap`.
pub fn ack(i: usize, j: u64, cap: &BigUint) -> SatValue {
    AckTable::new(cap.clone()).get(i, j)
}

fn ceil_div(n: &BigUint, m: &BigUint) -> BigUint {
    (n + m - BigUint::one()) / m
}

/// Smallest row `i` with `a(i, j)^power >= m`.
fn min_row(j: &BigUint, m: &BigUint, power: u32) -> usize {
    let mut table = AckTable::new(m.clone());
    let Some(j) = j.to_u64().filter(|&j| j < table.cap_bits) else {
        // a(1, j) = 2^j already exceeds m.
        return 1;
    };
    (1..)
        .find(|&i| match table.get(i, j) {
            SatValue::Overflow => true,
            SatValue::Exact(v) => v.pow(power) >= *m,
        })
        .expect("rows grow without bound")
}

/// `alpha(n, m) = min { i : a(i, j) >= m }` with `j = max(3, ceil(n / m))`.
pub fn alpha(n: &BigUint, m: &BigUint) -> usize {
    assert!(!n.is_zero() && !m.is_zero(), "alpha needs n, m >= 1");
    let j = ceil_div(n, m).max(BigUint::from(3u32));
    min_row(&j, m, 1)
}

pub fn alpha_u64(n: u64, m: u64) -> usize {
    alpha(&BigUint::from(n), &BigUint::from(m))
}

/// `alpha(n, n)`.
pub fn alpha_square(n: &BigUint) -> usize {
    alpha(n, n)
}

/// Smallest `x` with `x^t >= v`.
fn ceil_root(v: &BigUint, t: u32) -> BigUint {
    let mut x = v.nth_root(t);
    if x.pow(t) < *v {
        x += 1u32;
    }
    x
}

/// Variant used by the main upper bound: `min { i : a(i, j)^t >= m }` with
/// `j = max(3, ceil(ceil(n / m)^(1/t)))`.
pub fn alpha_proof(n: &BigUint, m: &BigUint, t: u32) -> usize {
    assert!(!n.is_zero() && !m.is_zero() && t >= 1);
    let j = ceil_root(&ceil_div(n, m), t).max(BigUint::from(3u32));
    min_row(&j, m, t)
}

/// `j = max(3, ceil(ceil(n / m)^(1/t)))`, the column used by [`alpha_proof`].
pub fn alpha_proof_column(n: &BigUint, m: &BigUint, t: u32) -> BigUint {
    ceil_root(&ceil_div(n, m), t).max(BigUint::from(3u32))
}
