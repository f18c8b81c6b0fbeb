//! Factor complexity `p_n`, entropy estimates and complexity equivalence.
//!
//! Finite prefixes can only under-count `L_n`, so every value carries a
//! saturation flag: the count did not change when the horizon was doubled.
//! Unsaturated values are lower bounds.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{QwError, Result};
use crate::factors::complexity_counts;
use crate::stream::WordStream;
use crate::word::FiniteWord;

#[derive(Debug, Clone, Serialize)]
pub struct ComplexityProfile {
    pub horizon: usize,
    /// `values[n - 1] = p_n` on `prefix(horizon)`.
    pub values: Vec<usize>,
    pub saturated: Vec<bool>,
}

impl ComplexityProfile {
    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    pub fn p(&self, n: usize) -> usize {
        self.values[n - 1]
    }

    pub fn all_saturated(&self) -> bool {
        self.saturated.iter().all(|&s| s)
    }

    /// Columns `n, p_n, saturated, log p_n / n`; natural log unless `bits`.
    pub fn to_csv(&self, bits: bool) -> String {
        let mut s = String::from("n,p_n,saturated,log_p_n_over_n\n");
        for (n, rate) in entropy_estimate(self) {
            let rate = if bits {
                rate / std::f64::consts::LN_2
            } else {
                rate
            };
            let _ = writeln!(s, "{n},{},{},{rate:.6}", self.p(n), self.saturated[n - 1]);
        }
        s
    }
}

pub fn profile(x: &WordStream, n_max: usize, horizon: usize) -> Result<ComplexityProfile> {
    if horizon < 2 * n_max {
        return Err(QwError::HorizonTooSmall {
            horizon,
            required: 2 * n_max,
        });
    }
    let (values, doubled) = x.with_prefix(2 * horizon, |p| {
        (
            complexity_counts(&p[..horizon], n_max),
            complexity_counts(p, n_max),
        )
    })?;
    let saturated = values.iter().zip(&doubled).map(|(a, b)| a == b).collect();
    Ok(ComplexityProfile {
        horizon,
        values,
        saturated,
    })
}

/// `(n, ln(p_n) / n)` for every `n` of the profile.
pub fn entropy_estimate(profile: &ComplexityProfile) -> Vec<(usize, f64)> {
    profile
        .values
        .iter()
        .enumerate()
        .map(|(i, &p)| (i + 1, (p.max(1) as f64).ln() / (i + 1) as f64))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadraticRow {
    pub length: usize,
    pub p: usize,
    pub ratio: f64,
    pub saturated: bool,
    /// `p_{l(q)} <= l(q)^2`.
    pub within_bound: bool,
}

/// `p_{l(q)} / l(q)^2` for each quasiperiod.
pub fn quadratic_bound_report(
    x: &WordStream,
    quasiperiods: &[FiniteWord],
    horizon: usize,
) -> Result<Vec<QuadraticRow>> {
    let Some(max_len) = quasiperiods.iter().map(|q| q.len()).max() else {
        return Ok(Vec::new());
    };
    let prof = profile(x, max_len, horizon.max(2 * max_len))?;
    Ok(quasiperiods
        .iter()
        .map(|q| {
            let l = q.len();
            let p = prof.p(l);
            QuadraticRow {
                length: l,
                p,
                ratio: p as f64 / (l * l) as f64,
                saturated: prof.saturated[l - 1],
                within_bound: p <= l * l,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub factor: usize,
    pub n_max: usize,
    pub horizon: usize,
    pub holds: bool,
    /// First `n` at which one of the two inequalities fails.
    pub first_failure: Option<usize>,
}

fn equivalence_on_counts(px: &[usize], py: &[usize], k: usize, n_max: usize) -> Option<usize> {
    (1..=n_max).find(|&n| px[n - 1] > k * py[k * n - 1] || py[n - 1] > k * px[k * n - 1])
}

/// Whether `p_n(x) <= K p_{Kn}(y)` and `p_n(y) <= K p_{Kn}(x)` for all
/// `1 <= n <= n_max`, on prefixes of length `horizon`.
pub fn complexity_equivalent(
    x: &WordStream,
    y: &WordStream,
    k: usize,
    n_max: usize,
    horizon: usize,
) -> Result<EquivalenceReport> {
    if k == 0 {
        return Err(QwError::Malformed(
            "equivalence factor must be at least 1".into(),
        ));
    }
    if horizon < 2 * k * n_max {
        return Err(QwError::HorizonTooSmall {
            horizon,
            required: 2 * k * n_max,
        });
    }
    let px = x.with_prefix(horizon, |p| complexity_counts(p, k * n_max))?;
    let py = y.with_prefix(horizon, |p| complexity_counts(p, k * n_max))?;
    let first_failure = equivalence_on_counts(&px, &py, k, n_max);
    Ok(EquivalenceReport {
        factor: k,
        n_max,
        horizon,
        holds: first_failure.is_none(),
        first_failure,
    })
}

/// Smallest `K <= k_max` for which [`complexity_equivalent`] holds.
pub fn min_equivalence_factor(
    x: &WordStream,
    y: &WordStream,
    k_max: usize,
    n_max: usize,
    horizon: usize,
) -> Result<Option<usize>> {
    if horizon < 2 * k_max * n_max {
        return Err(QwError::HorizonTooSmall {
            horizon,
            required: 2 * k_max * n_max,
        });
    }
    let px = x.with_prefix(horizon, |p| complexity_counts(p, k_max * n_max))?;
    let py = y.with_prefix(horizon, |p| complexity_counts(p, k_max * n_max))?;
    Ok((1..=k_max).find(|&k| equivalence_on_counts(&px, &py, k, n_max).is_none()))
}
