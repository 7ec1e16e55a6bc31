use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Result};
use patsort::greedy::greedy_touch_matrix;
use patsort::perm::{gen_deque, gen_k_increasing, gen_pi_avoiding_rejection, gen_postorder, gen_preorder, gen_sequential, gen_uniform};
use patsort::smooth::smooth_heap_sort;
use patsort::{contains, contains_trimmed, trim, BitMatrix01, Permutation, TouchMatrix};
use serde::Serialize;

use crate::{Algo, Class};

#[derive(Debug, Serialize)]
pub struct InputDescriptor {
    pub class: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

/// One line of a bench file. Everything but `timestamp` and `wall_ms` is a
/// function of the flags and the seed.
#[derive(Debug, Serialize)]
pub struct BenchRecord {
    pub timestamp: u64,
    pub command: String,
    pub seed: u64,
    pub input: InputDescriptor,
    pub algorithm: String,
    pub total_touches: usize,
    pub weight: usize,
    /// `None` without `--pi`.
    pub avoids_q: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

pub fn class_name(c: Class) -> &'static str {
    match c {
        Class::Sequential => "sequential",
        Class::Preorder => "preorder",
        Class::Postorder => "postorder",
        Class::Deque => "deque",
        Class::KIncreasing => "k-increasing",
        Class::Uniform => "uniform",
        Class::Rejection => "rejection",
    }
}

pub fn algo_name(a: Algo) -> &'static str {
    match a {
        Algo::Greedy => "greedy",
        Algo::Smooth => "smooth",
    }
}

pub fn generate(class: Class, n: usize, seed: u64, k: usize, pi: Option<&Permutation>) -> Result<Permutation> {
    Ok(match class {
        Class::Sequential => gen_sequential(n)?,
        Class::Preorder => gen_preorder(n, seed)?,
        Class::Postorder => gen_postorder(n, seed)?,
        Class::Deque => gen_deque(n, seed)?,
        Class::KIncreasing => gen_k_increasing(n, k, seed)?,
        Class::Uniform => gen_uniform(n, seed)?,
        Class::Rejection => {
            let Some(pi) = pi else { bail!("the rejection class needs --pi") };
            gen_pi_avoiding_rejection(n, pi, seed, 1_000_000)?
        }
    })
}

pub fn touch(algo: Algo, s: &Permutation) -> TouchMatrix {
    match algo {
        Algo::Greedy => greedy_touch_matrix(s),
        Algo::Smooth => smooth_heap_sort(s).touch,
    }
}

/// Whether the touch matrix avoids the pattern expected for `pi`: `P (x) hat`
/// (trimmed containment) for Greedy, and for SmoothHeap the same product
/// built from the transpose of `pi`, then transposed.
pub fn avoids_q(algo: Algo, pi: &Permutation, t: &BitMatrix01) -> Result<bool> {
    Ok(match algo {
        Algo::Greedy => {
            let q = BitMatrix01::permutation_matrix(pi).kron_hat()?;
            !contains_trimmed(&trim(&q, 0, 0)?, t)
        }
        Algo::Smooth => {
            let q = BitMatrix01::permutation_matrix(&pi.transpose()).kron_hat()?.transpose();
            !contains(&q, t)
        }
    })
}

pub struct BenchArgs<'a> {
    pub class: Class,
    pub pi: Option<&'a Permutation>,
    pub pi_text: Option<String>,
    pub n: usize,
    pub algo: Algo,
    pub seed: u64,
    pub k: usize,
    pub timing: bool,
}

/// Runs the benchmark; the second value says whether the input avoids `pi`.
pub fn run(a: &BenchArgs) -> Result<(BenchRecord, bool)> {
    let s = generate(a.class, a.n, a.seed, a.k, a.pi)?;
    let start = Instant::now();
    let t = touch(a.algo, &s);
    let wall = start.elapsed();
    let (verdict, input_avoids) = match a.pi {
        Some(pi) => (Some(avoids_q(a.algo, pi, t.touched())?), s.avoids(pi)),
        None => (None, false),
    };
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let record = BenchRecord {
        timestamp,
        command: "bench".into(),
        seed: a.seed,
        input: InputDescriptor {
            class: class_name(a.class).into(),
            n: a.n,
            pi: a.pi_text.clone(),
            k: (a.class == Class::KIncreasing).then_some(a.k),
        },
        algorithm: algo_name(a.algo).into(),
        total_touches: t.total(),
        weight: t.touched().weight(),
        avoids_q: verdict,
        wall_ms: a.timing.then_some(wall.as_secs_f64() * 1e3),
    };
    Ok((record, input_avoids))
}
