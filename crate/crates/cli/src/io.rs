use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use patsort::matrix::{hat, hat4_left, hat4_right, hpair, identity, parse_m01, vpair, w, w_double_prime, w_prime, write_m01};
use patsort::perm::parse_perm;
use patsort::{BitMatrix01, Permutation};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_matrix(path: &Path) -> Result<BitMatrix01> {
    parse_m01(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_perm(path: &Path) -> Result<Permutation> {
    parse_perm(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse_pi(s: &str) -> Result<Permutation> {
    s.parse().with_context(|| format!("bad permutation {s:?}"))
}

/// Writes `text` to `out`, or prints it when there is no file.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn emit_matrix(out: Option<&Path>, m: &BitMatrix01) -> Result<()> {
    emit(out, &write_m01(m))
}

/// A named pattern, or else an m01 file.
///
/// Names: `hat`, `hat4-left`, `hat4-right`, `w`, `w-prime`,
/// `w-double-prime`, `hpair`, `vpair`, `id<k>`, `perm:<pi>` (the
/// permutation matrix) and `kron:<pi>` (that matrix times the hat).
pub fn pattern(name: &str) -> Result<BitMatrix01> {
    let named = match name {
        "hat" => Some(hat()),
        "hat4-left" => Some(hat4_left()),
        "hat4-right" => Some(hat4_right()),
        "w" => Some(w()),
        "w-prime" => Some(w_prime()),
        "w-double-prime" => Some(w_double_prime()),
        "hpair" => Some(hpair()),
        "vpair" => Some(vpair()),
        _ => None,
    };
    if let Some(p) = named {
        return Ok(p);
    }
    if let Some(k) = name.strip_prefix("id") {
        if let Ok(k) = k.parse::<usize>() {
            if k == 0 {
                bail!("id0 is empty");
            }
            return Ok(identity(k));
        }
    }
    if let Some(pi) = name.strip_prefix("perm:") {
        return Ok(BitMatrix01::permutation_matrix(&parse_pi(pi)?));
    }
    if let Some(pi) = name.strip_prefix("kron:") {
        return Ok(BitMatrix01::permutation_matrix(&parse_pi(pi)?).kron_hat()?);
    }
    let path = Path::new(name);
    if !path.exists() {
        bail!("unknown pattern {name:?} (not a name and no such file)");
    }
    read_matrix(path)
}
