//! The constants and inequalities of the upper-bound analysis, the corner
//! join of two patterns, and the 1-removal reductions used with it.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};

use crate::ackermann::{alpha_proof, alpha_proof_column};
use crate::error::{Error, Result};
use crate::matrix::{contains, contains_at, hat4_left, hat4_right, w, w_double_prime, w_prime, BitMatrix01, TrimmedPattern};

/// Numbers the bound formulas are evaluated in.
pub trait Scalar: Clone + PartialOrd + Num + fmt::Debug + fmt::Display {
    fn from_count(v: u64) -> Self;
    fn from_biguint(v: &BigUint) -> Self;
}

impl Scalar for f64 {
    fn from_count(v: u64) -> Self {
        v as f64
    }

    fn from_biguint(v: &BigUint) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Scalar for BigRational {
    fn from_count(v: u64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_biguint(v: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(v.clone()))
    }
}

fn pow<S: Scalar>(x: &S, e: u32) -> S {
    num_traits::pow(x.clone(), e as usize)
}

fn lit<S: Scalar>(v: u64) -> S {
    S::from_count(v)
}

/// `mu(i, t) = (2C + 3i)^(t-2) (2^i - 1)` for `i >= 1`, `t >= 2`.
pub fn mu<S: Scalar>(c: &S, i: u32, t: u32) -> S {
    assert!(i >= 1 && t >= 2, "mu needs i >= 1 and t >= 2");
    let base = lit::<S>(2) * c.clone() + lit(3 * i as u64);
    pow(&base, t - 2) * (pow(&lit::<S>(2), i) - lit(1))
}

/// One failed inequality of [`check_mu_constraints`].
#[derive(Clone, Debug, PartialEq)]
pub struct MuViolation<S> {
    /// 9 for the main constraint, 10 for its divided form.
    pub constraint: u8,
    pub i: u32,
    pub t: u32,
    pub lhs: S,
    pub rhs: S,
}

/// Checks, for `2 <= i <= i_max` and `4 <= t <= t_max`, with both pattern
/// constants equal to `c`:
///
/// ```text
/// mu(i,t) >= 2 mu(i,t-1) + 2C mu(i,t-2) + 2 mu(i-1,t) + C
/// mu(i,t) >= 2 mu(i,t-1)/c3 + 2C mu(i,t-2)/c3 + 2 mu(i-1,t)/2^(3k-1) + C/(2^(t-4) c3^(t-3))
/// ```
///
/// where `c3 = 3k`. `k` defaults to the least value with `3k >= t_max`.
pub fn check_mu_constraints<S: Scalar>(c: &S, i_max: u32, t_max: u32, k: Option<u32>) -> Vec<MuViolation<S>> {
    let k = k.unwrap_or(t_max.div_ceil(3)).max(1);
    let c3: S = lit(3 * k as u64);
    let two: S = lit(2);
    let mut out = Vec::new();
    for i in 2..=i_max {
        for t in 4..=t_max {
            let lhs = mu(c, i, t);
            let (a, b, d) = (mu(c, i, t - 1), mu(c, i, t - 2), mu(c, i - 1, t));
            let rhs9 = two.clone() * a.clone()
                + two.clone() * c.clone() * b.clone()
                + two.clone() * d.clone()
                + c.clone();
            if lhs < rhs9 {
                out.push(MuViolation { constraint: 9, i, t, lhs: lhs.clone(), rhs: rhs9 });
            }
            let rhs10 = two.clone() * a / c3.clone()
                + two.clone() * c.clone() * b / c3.clone()
                + two.clone() * d / pow(&two, 3 * k - 1)
                + c.clone() / (pow(&two, t - 4) * pow(&c3, t - 3));
            if lhs < rhs10 {
                out.push(MuViolation { constraint: 10, i, t, lhs, rhs: rhs10 });
            }
        }
    }
    out
}

/// `(k, t)` of a trimmed `2k`-row pattern with `t` 1s.
fn order_and_ones(q: &TrimmedPattern) -> Result<(u64, u64)> {
    let rows = q.base().rows();
    if !rows.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("pattern has {rows} rows, expected 2k")));
    }
    let k = (rows / 2) as u64;
    let t = q.ones_count() as u64;
    if t < 2 || t > 3 * k {
        return Err(Error::InvalidArgument(format!("t = {t} outside [2, {}]", 3 * k)));
    }
    Ok((k, t))
}

/// Upper bound on `Ex(q, n, m)` for patterns with few 1s: `n + (2k-1)(m-1)`
/// for `t = 2`, `2n + (2k-1)(m-2)` for `t = 3`, and for larger `t`
/// `2^(t-2) n + (2k-1) j^(t-3) (m-2)`, which needs `m <= 2^j`.
pub fn base_case_bounds(q: &TrimmedPattern, n: u64, m: u64, j: Option<u32>) -> Result<BigInt> {
    let (k, t) = order_and_ones(q)?;
    let (n, m, w) = (BigInt::from(n), BigInt::from(m), BigInt::from(2 * k - 1));
    Ok(match t {
        2 => n + w * (m - 1),
        3 => BigInt::from(2) * n + w * (m - 2),
        _ => {
            let j = j.ok_or_else(|| Error::Precondition(format!("t = {t} needs j with m <= 2^j")))?;
            if m > BigInt::from(1) << j {
                return Err(Error::Precondition(format!("m = {m} exceeds 2^{j}")));
            }
            (BigInt::from(1) << (t - 2)) * n + w * BigInt::from(j).pow(t as u32 - 3) * (m - 2)
        }
    })
}

/// The value `mu(i,t) (n + (cj)^(t-3) (2k-1)(m-2))` with `t = c = 3k` and
/// `i`, `j` chosen as the smallest row with `a(i, j)^t >= m`.
#[derive(Clone, Debug, PartialEq)]
pub struct MainBound<S> {
    pub k: u32,
    pub t: u32,
    pub i: usize,
    pub j: BigUint,
    pub value: S,
}

pub fn main_bound<S: Scalar>(n: &BigUint, m: &BigUint, k: u32, c: &S) -> Result<MainBound<S>> {
    if k == 0 || n.is_zero() || m.is_zero() {
        return Err(Error::InvalidArgument("main bound needs n, m, k >= 1".into()));
    }
    let t = 3 * k;
    let i = alpha_proof(n, m, t);
    let j = alpha_proof_column(n, m, t);
    let cj = S::from_count(t as u64) * S::from_biguint(&j);
    let m2 = S::from_biguint(m) - lit(2);
    let inner = S::from_biguint(n) + pow(&cj, t - 3) * lit(2 * k as u64 - 1) * m2;
    let i32 = u32::try_from(i).map_err(|_| Error::InvalidArgument("row index overflow".into()))?;
    Ok(MainBound {
        k,
        t,
        i,
        j,
        value: mu(c, i32, t) * inner,
    })
}

/// Joins `r` and `s` at a shared corner: `r` on the top left, `s` on the
/// bottom right, `r`'s bottom-right cell on `s`'s top-left cell.
pub fn keszegh_join(r: &BitMatrix01, s: &BitMatrix01) -> Result<BitMatrix01> {
    if !r.get(1, r.cols()) {
        return Err(Error::CornerMissing("left pattern needs a 1 in its bottom-right cell"));
    }
    if !s.get(s.rows(), 1) {
        return Err(Error::CornerMissing("right pattern needs a 1 in its top-left cell"));
    }
    let (rows, cols) = (r.rows() + s.rows() - 1, r.cols() + s.cols() - 1);
    let mut out = BitMatrix01::new(rows, cols)?;
    for (i, j) in r.ones() {
        out.set(i + s.rows() - 1, j);
    }
    for (i, j) in s.ones() {
        out.set(i, j + r.cols() - 1);
    }
    Ok(out)
}

/// Removes the topmost 1 of every column.
pub fn reduce_top_per_column(a: &BitMatrix01) -> BitMatrix01 {
    let mut out = a.clone();
    for (c, rows) in a.col_lists().iter().enumerate() {
        if let Some(&r) = rows.last() {
            out.unset(r, c + 1);
        }
    }
    out
}

/// Removes the `q` leftmost 1s of every row.
pub fn reduce_first_ones_per_row(a: &BitMatrix01, q: usize) -> BitMatrix01 {
    let mut out = a.clone();
    for (r, cols) in a.row_lists().iter().enumerate() {
        for &c in cols.iter().take(q) {
            out.unset(r + 1, c);
        }
    }
    out
}

/// Removes the `q` rightmost 1s of every row.
pub fn reduce_last_ones_per_row(a: &BitMatrix01, q: usize) -> BitMatrix01 {
    let mut out = a.clone();
    for (r, cols) in a.row_lists().iter().enumerate() {
        for &c in cols.iter().rev().take(q) {
            out.unset(r + 1, c);
        }
    }
    out
}

/// Outcome of [`w_reduction_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WReport {
    /// The input with the top 1 of each column removed.
    pub reduced: BitMatrix01,
    pub weight: usize,
    pub avoids_w_double_prime: bool,
    /// 1s that are the bottom-right 1 of a copy of the left-topped 3x4 hat.
    pub bottom_right: usize,
    /// 1s that are the bottom-left 1 of a copy of the right-topped 3x4 hat.
    pub bottom_left: usize,
    /// 1s in both classes.
    pub both: Vec<(usize, usize)>,
    /// With `hat4_ex = Ex(hat4, n, m)`: whether the weight exceeds twice it.
    pub exceeds_twice_hat4: Option<bool>,
}

impl WReport {
    /// Both classes are disjoint and, when the weight exceeds twice the 3x4
    /// hat bound, that can only happen through a shared 1.
    pub fn passes(&self) -> bool {
        self.avoids_w_double_prime && self.both.is_empty() && self.exceeds_twice_hat4 != Some(true)
    }
}

/// Removes the top 1 of each column of a matrix avoiding both `W` and its
/// mirror image, then checks the reduced matrix against `W''` and
/// classifies its 1s as bottom-left or bottom-right corners of 3x4 hats.
pub fn w_reduction_check(a: &BitMatrix01, hat4_ex: Option<usize>) -> Result<WReport> {
    if contains(&w(), a) || contains(&w_prime(), a) {
        return Err(Error::Precondition("input must avoid W and its mirror image".into()));
    }
    let reduced = reduce_top_per_column(a);
    let (left, right) = (hat4_left(), hat4_right());
    let (mut bottom_right, mut bottom_left, mut both) = (0, 0, Vec::new());
    for cell in reduced.ones() {
        let br = contains_at(&left, (1, 4), &reduced, cell);
        let bl = contains_at(&right, (1, 1), &reduced, cell);
        bottom_right += usize::from(br);
        bottom_left += usize::from(bl);
        if br && bl {
            both.push(cell);
        }
    }
    let weight = reduced.weight();
    Ok(WReport {
        avoids_w_double_prime: !contains(&w_double_prime(), &reduced),
        weight,
        bottom_right,
        bottom_left,
        both,
        exceeds_twice_hat4: hat4_ex.map(|e| weight > 2 * e),
        reduced,
    })
}
