//! Cylinder frequencies: periodic approximants `μ_q` against Birkhoff
//! averages along the word.
//!
//! `μ_q` is the uniform measure on the shift orbit of `q^ω`; its value on a
//! cylinder `[u]` is the number of starting phases in one period at which
//! `u` reads off `q^ω`, divided by `l(q)`. Both quantities are exact
//! rationals.

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{QwError, Result};
use crate::occurrence::{count, find_all};
use crate::stream::WordStream;
use crate::word::{Alphabet, FiniteWord, Letter};

pub type Frequency = Ratio<u64>;

fn periodic_prefix(q: &[Letter], len: usize) -> Vec<Letter> {
    q.iter().copied().cycle().take(len).collect()
}

/// `μ_q([u])`.
pub fn mu_q(u: &[Letter], q: &[Letter]) -> Result<Frequency> {
    if q.is_empty() {
        return Err(QwError::Empty("quasiperiod"));
    }
    if u.is_empty() {
        return Err(QwError::EmptyFactor);
    }
    let window = periodic_prefix(q, q.len() + u.len() - 1);
    Ok(Ratio::new(count(u, &window)? as u64, q.len() as u64))
}

/// `#(u, prefix(n)) / n`.
pub fn birkhoff(u: &[Letter], x: &WordStream, n: usize) -> Result<Frequency> {
    if u.is_empty() {
        return Err(QwError::EmptyFactor);
    }
    if n < u.len() {
        return Err(QwError::HorizonTooSmall {
            horizon: n,
            required: u.len(),
        });
    }
    let c = x.with_prefix(n, |p| find_all(u, p).len())?;
    Ok(Ratio::new(c as u64, n as u64))
}

/// Birkhoff average of `u` over `x[offset .. offset + n]`.
pub fn birkhoff_at(u: &[Letter], x: &WordStream, offset: usize, n: usize) -> Result<Frequency> {
    if u.is_empty() {
        return Err(QwError::EmptyFactor);
    }
    let c = x.with_prefix(offset + n, |p| find_all(u, &p[offset..]).len())?;
    Ok(Ratio::new(c as u64, n as u64))
}

/// Largest minus smallest Birkhoff average of `u` over windows of length
/// `n` starting at each of `offsets`. Uniform convergence makes this shrink
/// as `n` grows.
pub fn birkhoff_spread(
    u: &[Letter],
    x: &WordStream,
    n: usize,
    offsets: &[usize],
) -> Result<Frequency> {
    let values = offsets
        .iter()
        .map(|&j| birkhoff_at(u, x, j, n))
        .collect::<Result<Vec<_>>>()?;
    let max = values.iter().max().copied().unwrap_or_default();
    let min = values.iter().min().copied().unwrap_or_default();
    Ok(max - min)
}

pub fn to_f64(r: Frequency) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichRow {
    pub u: FiniteWord,
    pub q: FiniteWord,
    #[serde(serialize_with = "ser_ratio")]
    pub mu_q: Frequency,
    #[serde(serialize_with = "ser_ratio")]
    pub birkhoff: Frequency,
    /// `#(u, q) / (2 l(q))`.
    #[serde(serialize_with = "ser_ratio")]
    pub lower_bound: Frequency,
    /// Finite-horizon slack `l(u) l(q) / n`.
    #[serde(serialize_with = "ser_ratio")]
    pub slack: Frequency,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

fn ser_ratio<S: serde::Serializer>(r: &Frequency, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

impl SandwichRow {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// For each quasiperiod `q`, check
/// `#(u,q)/(2 l(q)) <= ν([u]) + ε` and `μ_q([u]) <= 2 ν([u]) + l(u)/l(q) + ε`
/// with `ν([u])` estimated by the Birkhoff average over `prefix(n)` and
/// `ε = l(u) l(q) / n`.
pub fn sandwich_report(
    u: &[Letter],
    x: &WordStream,
    quasiperiods: &[FiniteWord],
    n: usize,
) -> Result<Vec<SandwichRow>> {
    if quasiperiods.is_empty() {
        return Err(QwError::Empty("quasiperiod list"));
    }
    let nu = birkhoff(u, x, n)?;
    let lu = u.len() as u64;
    quasiperiods
        .iter()
        .map(|q| {
            let lq = q.len() as u64;
            let mu = mu_q(u, q)?;
            let lower = Ratio::new(count(u, q)? as u64, 2 * lq);
            let slack = Ratio::new(lu * lq, n as u64);
            Ok(SandwichRow {
                u: FiniteWord::from(u),
                q: q.clone(),
                mu_q: mu,
                birkhoff: nu,
                lower_bound: lower,
                slack,
                lower_ok: lower <= nu + slack,
                upper_ok: mu <= nu * 2 + Ratio::new(lu, lq) + slack,
            })
        })
        .collect()
}

/// Columns `u, q, mu_q, birkhoff, lower_bound, check_passed`.
pub fn sandwich_csv(rows: &[SandwichRow], alphabet: &Alphabet) -> String {
    let mut s = String::from("u,q,mu_q,birkhoff,lower_bound,check_passed\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{:.6},{},{}",
            alphabet.render(&r.u),
            alphabet.render(&r.q),
            r.mu_q,
            to_f64(r.birkhoff),
            r.lower_bound,
            r.passed()
        );
    }
    s
}
