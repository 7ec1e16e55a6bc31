//! Named patterns. Rows are listed bottom-to-top.

use super::BitMatrix01;

fn build(rows: usize, cols: usize, ones: &[(usize, usize)]) -> BitMatrix01 {
    BitMatrix01::from_ones(rows, cols, ones.iter().copied()).expect("catalog pattern is valid")
}

/// The 2x3 hat: bottom row `{1, 3}`, top row `{2}`.
pub fn hat() -> BitMatrix01 {
    build(2, 3, &[(1, 1), (1, 3), (2, 2)])
}

/// 3x4 hat with a lone 1 in column 1 on top: rows `{2,4}`, `{3}`, `{1}`.
pub fn hat4_left() -> BitMatrix01 {
    build(3, 4, &[(1, 2), (1, 4), (2, 3), (3, 1)])
}

/// 3x4 hat with a lone 1 in column 4 on top: rows `{1,3}`, `{2}`, `{4}`.
pub fn hat4_right() -> BitMatrix01 {
    build(3, 4, &[(1, 1), (1, 3), (2, 2), (3, 4)])
}

/// 4x5 pattern with rows `{2,4}`, `{3}`, `{5}`, `{1}`.
pub fn w() -> BitMatrix01 {
    build(4, 5, &[(1, 2), (1, 4), (2, 3), (3, 5), (4, 1)])
}

/// Mirror image of [`w`]: rows `{2,4}`, `{3}`, `{1}`, `{5}`.
pub fn w_prime() -> BitMatrix01 {
    build(4, 5, &[(1, 2), (1, 4), (2, 3), (3, 1), (4, 5)])
}

/// 3x5 pattern with rows `{2,4}`, `{3}`, `{1,5}`.
pub fn w_double_prime() -> BitMatrix01 {
    build(3, 5, &[(1, 2), (1, 4), (2, 3), (3, 1), (3, 5)])
}

/// Two 1s side by side (1x2).
pub fn hpair() -> BitMatrix01 {
    build(1, 2, &[(1, 1), (1, 2)])
}

/// Two 1s stacked in one column (2x1).
pub fn vpair() -> BitMatrix01 {
    build(2, 1, &[(1, 1), (2, 1)])
}

/// The k x k identity.
pub fn identity(k: usize) -> BitMatrix01 {
    build(k, k, &(1..=k).map(|i| (i, i)).collect::<Vec<_>>())
}
