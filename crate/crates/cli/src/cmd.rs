use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use patsort::ackermann::{ack, alpha, SatValue};
use patsort::blocked::{build_u, stats, to_incidence_matrix, write_bseq};
use patsort::bounds::{check_mu_constraints, keszegh_join, mu, reduce_first_ones_per_row, reduce_last_ones_per_row, reduce_top_per_column, Scalar};
use patsort::extremal::{decompose, ex_exact, ex_lower_greedy, pattern_id};
use patsort::matrix::write_m01;
use patsort::perm::write_perm;
use patsort::{contains, contains_trimmed, trim, BitMatrix01, Float, Rational};
use serde_json::json;

use crate::bench::{self, BenchArgs};
use crate::cache::{self, ExfRecord};
use crate::io::{emit, emit_matrix, parse_pi, pattern, read_matrix, read_perm};
use crate::{Command, Gadget, ReduceOp, Violation};

fn violation(msg: impl Into<String>) -> anyhow::Error {
    Violation(msg.into()).into()
}

/// The given seed, or a fresh one that is printed so the run can be repeated.
fn seed_or_fresh(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos() as u64);
        eprintln!("seed: {s}");
        s
    })
}

fn parse_big(s: &str) -> Result<BigUint> {
    if let Some(e) = s.strip_prefix("2^") {
        let e: u32 = e.parse().with_context(|| format!("bad exponent in {s:?}"))?;
        return Ok(BigUint::from(1u32) << e);
    }
    s.parse().with_context(|| format!("bad number {s:?}"))
}

fn json_out(out: Option<&Path>, v: &serde_json::Value) -> Result<()> {
    emit(out, &(serde_json::to_string_pretty(v)? + "\n"))
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::CheckAvoid { s, pi } => {
            let s = read_perm(&s)?;
            let pi = parse_pi(&pi)?;
            let avoids = s.avoids(&pi);
            println!("avoids: {avoids}");
            if !avoids {
                return Err(violation(format!("input contains {pi}")));
            }
        }
        Command::Contains { pattern: p, host, trim: t } => {
            let p = pattern(&p)?;
            let host = read_matrix(&host)?;
            let found = match t {
                Some((a, b)) => contains_trimmed(&trim(&p, a, b)?, &host),
                None => contains(&p, &host),
            };
            println!("contains: {found}");
        }
        Command::Kron { pattern: p, with, out } => {
            let p = pattern(&p)?;
            let k = match with {
                Gadget::Hat => p.kron_hat()?,
                Gadget::Vpair => p.kron_vpair()?,
                Gadget::Hpair => p.kron_hpair()?,
            };
            emit_matrix(out.as_deref(), &k)?;
        }
        Command::Touch { algo, input, out, counts, pi } => {
            let s = read_perm(&input)?;
            let t = bench::touch(algo, &s);
            if out.is_some() {
                emit_matrix(out.as_deref(), t.touched())?;
            }
            if let Some(c) = counts {
                let mut csv = String::from("step,touches\n");
                for (i, k) in t.per_step_counts().iter().enumerate() {
                    csv.push_str(&format!("{},{k}\n", i + 1));
                }
                emit(Some(&c), &csv)?;
            }
            if out.is_none() {
                emit_matrix(None, t.touched())?;
            } else {
                println!("total touches: {}", t.total());
            }
            if let Some(pi) = pi {
                let pi = parse_pi(&pi)?;
                let avoids = bench::avoids_q(algo, &pi, t.touched())?;
                eprintln!("avoids Q: {avoids}");
                if !avoids && s.avoids(&pi) {
                    return Err(violation(format!("touch matrix of a {pi}-avoiding input contains Q")));
                }
            }
        }
        Command::ConstructU { i, j, budget, out_seq, out_matrix, stats: stats_out } => {
            let u = build_u(i, j, budget)?;
            let st = stats(&u, i, j)?;
            match &out_seq {
                Some(p) => emit(Some(p), &write_bseq(&u))?,
                None => println!("{u}"),
            }
            if let Some(p) = out_matrix {
                emit_matrix(Some(&p), &to_incidence_matrix(&u)?)?;
            }
            if let Some(p) = stats_out {
                let occ: serde_json::Map<String, serde_json::Value> =
                    st.per_symbol_occurrences.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                let v = json!({
                    "i": st.i,
                    "j": st.j,
                    "n": st.n,
                    "live_blocks": st.live,
                    "dead_blocks": st.dead_blocks,
                    "dead_bound_holds": st.dead_bound_holds,
                    "length": st.length,
                    "occurrences": occ,
                });
                json_out(Some(&p), &v)?;
            }
        }
        Command::Exf { pattern: p, n, m, exact: _, heuristic, time_limit, force, trim: t, seed, rounds, cache: cache_path, out } => {
            let (a, b) = t.unwrap_or((0, 0));
            let q = trim(&pattern(&p)?, a, b)?;
            let id = pattern_id(&q);
            let key = cache::key(&id, n, m);
            let mut table = match (&cache_path, heuristic) {
                (Some(c), false) => Some(cache::load(c)?),
                _ => None,
            };
            let record = match table.as_ref().and_then(|t| t.get(&key)) {
                Some(r) => r.clone(),
                None => {
                    let (res, method) = if heuristic {
                        (ex_lower_greedy(&q, n, m, seed_or_fresh(seed), rounds)?, "heuristic")
                    } else {
                        let limit = time_limit.map(Duration::from_secs_f64);
                        (ex_exact(&q, n, m, limit, force)?, "exact")
                    };
                    let r = ExfRecord {
                        pattern: id,
                        n,
                        m,
                        value: res.value,
                        exact: res.exact,
                        method: method.into(),
                        witness: write_m01(&res.witness),
                    };
                    if let (Some(t), Some(c), true) = (table.as_mut(), &cache_path, r.exact) {
                        t.insert(key, r.clone());
                        cache::store(c, t)?;
                    }
                    r
                }
            };
            json_out(out.as_deref(), &serde_json::to_value(&record)?)?;
        }
        Command::Alpha { n, m } => {
            let (n, m) = (parse_big(&n)?, parse_big(&m)?);
            if m == BigUint::ZERO {
                bail!("m must be positive");
            }
            println!("{}", alpha(&n, &m));
        }
        Command::Ack { i, j, cap } => {
            if i == 0 || j == 0 {
                bail!("a(i, j) needs i, j >= 1");
            }
            let cap = parse_big(&cap)?;
            match ack(i, j, &cap) {
                SatValue::Exact(v) => println!("{v}"),
                SatValue::Overflow => println!("> {cap}"),
            }
        }
        Command::Mu { c, i_max, t_max, k, check, float } => {
            if float {
                mu_command(&(c as Float), i_max, t_max, k, check)?;
            } else {
                mu_command(&Rational::from_count(c), i_max, t_max, k, check)?;
            }
        }
        Command::Join { left, right, out } => {
            let j = keszegh_join(&read_matrix(&left)?, &read_matrix(&right)?)?;
            emit_matrix(out.as_deref(), &j)?;
        }
        Command::Reduce { op, q, input, out } => {
            let a = read_matrix(&input)?;
            let r = match op {
                ReduceOp::TopPerColumn => reduce_top_per_column(&a),
                ReduceOp::FirstPerRow => reduce_first_ones_per_row(&a, q),
                ReduceOp::LastPerRow => reduce_last_ones_per_row(&a, q),
            };
            emit_matrix(out.as_deref(), &r)?;
        }
        Command::Bench { class, pi, n, algo, seed, k, out, timing } => {
            let pi_perm = pi.as_deref().map(parse_pi).transpose()?;
            let args = BenchArgs {
                class,
                pi: pi_perm.as_ref(),
                pi_text: pi.clone(),
                n,
                algo,
                seed: seed_or_fresh(seed),
                k,
                timing,
            };
            let (record, input_avoids) = bench::run(&args)?;
            let line = serde_json::to_string(&record)? + "\n";
            match &out {
                Some(p) => OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(p)
                    .and_then(|mut f| f.write_all(line.as_bytes()))
                    .with_context(|| format!("appending to {}", p.display()))?,
                None => print!("{line}"),
            }
            if record.avoids_q == Some(false) && input_avoids {
                return Err(violation(format!(
                    "{} touch matrix of a {}-avoiding input contains Q",
                    bench::algo_name(algo),
                    pi.unwrap_or_default()
                )));
            }
        }
        Command::Decompose { input, b, g, pattern: p, out } => {
            let a = read_matrix(&input)?;
            let rep = decompose(&a, b, g)?;
            let c = rep.counts;
            let mut v = json!({
                "b": b,
                "g": g,
                "n_star": rep.n_star(),
                "slabs": rep.slab_count(),
                "chunks": rep.chunks.len(),
                "counts": {
                    "local": c.local,
                    "first": c.first,
                    "last": c.last,
                    "heavy_middle": c.heavy_middle,
                    "light_first": c.light_first,
                    "light_middle": c.light_middle,
                    "light_last": c.light_last,
                },
            });
            let mut failed = None;
            if let Some(p) = p {
                let p = BitMatrix01::permutation_matrix(&parse_pi(&p)?);
                let claims = rep.check_claims(&p)?;
                let q_free = !contains(&p.kron_hat()?, &a);
                v["q_free"] = json!(q_free);
                v["heavy_avoids_p"] = json!(claims.heavy_avoids_p);
                v["lightmid_avoids_p_vpair"] = json!(claims.lightmid_avoids_p_vpair);
                if q_free && !(claims.heavy_avoids_p && claims.lightmid_avoids_p_vpair) {
                    failed = Some(claims);
                }
            }
            json_out(out.as_deref(), &v)?;
            if let Some(c) = failed {
                return Err(violation(format!("contracted matrices of a Q-free input: {c:?}")));
            }
        }
        Command::Gen { class, n, seed, pi, k, out } => {
            let pi = pi.as_deref().map(parse_pi).transpose()?;
            let s = bench::generate(class, n, seed_or_fresh(seed), k, pi.as_ref())?;
            emit(out.as_deref(), &write_perm(&s))?;
        }
    }
    Ok(())
}

fn mu_command<S: Scalar>(c: &S, i_max: u32, t_max: u32, k: Option<u32>, check: bool) -> Result<()> {
    if check {
        let v = check_mu_constraints(c, i_max, t_max, k);
        println!("violations: {}", v.len());
        for x in v.iter().take(10) {
            println!("constraint {} at i = {}, t = {}: {} < {}", x.constraint, x.i, x.t, x.lhs, x.rhs);
        }
        if !v.is_empty() {
            return Err(violation(format!("{} mu constraint violations", v.len())));
        }
        return Ok(());
    }
    println!("i,t,mu");
    for i in 1..=i_max {
        for t in 2..=t_max {
            println!("{i},{t},{}", mu(c, i, t));
        }
    }
    Ok(())
}
