//! The `m01` text format: a `<rows> <cols>` header, then one `<row> <col>`
//! pair per line (1-based, rows bottom-to-top). Blank lines and lines
//! starting with `#` are skipped.

use std::fmt::Write as _;

use super::BitMatrix01;
use crate::error::{Error, Result};

fn pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let parse = |s: Option<&str>| -> Result<usize> {
        s.ok_or_else(|| Error::Parse {
            line,
            msg: "expected two integers".into(),
        })?
        .parse()
        .map_err(|e| Error::Parse {
            line,
            msg: format!("{e}"),
        })
    };
    let a = parse(it.next())?;
    let b = parse(it.next())?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

pub fn parse_m01(text: &str) -> Result<BitMatrix01> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let (rows, cols) = pair(hl, header)?;
    let mut m = BitMatrix01::new(rows, cols)?;
    for (ln, l) in lines {
        let (r, c) = pair(ln, l)?;
        if r == 0 || c == 0 || r > rows || c > cols {
            return Err(Error::CellOutOfRange {
                row: r,
                col: c,
                rows,
                cols,
            });
        }
        if !m.set(r, c) {
            return Err(Error::DuplicateCell { row: r, col: c });
        }
    }
    Ok(m)
}

pub fn write_m01(m: &BitMatrix01) -> String {
    let mut s = format!("{} {}\n", m.rows(), m.cols());
    for (r, c) in m.ones() {
        let _ = writeln!(s, "{r} {c}");
    }
    s
}
