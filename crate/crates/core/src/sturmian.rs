//! Characteristic Sturmian words and their bursts.
//!
//! Standard words are built from the partial quotients `a_1, a_2, ..` by
//! `s_{-1} = 1`, `s_0 = 0`, `s_k = s_{k-1}^{a_k} s_{k-2}`. Each `s_k` with
//! `k >= 1` is a prefix of the next, and their limit is the characteristic
//! word: the one whose every prefix is left special.

use serde::{Deserialize, Serialize};

use crate::error::{QwError, Result};
use crate::quasiperiod::check_cover;
use crate::rauzy::{build_range, eight_shape};
use crate::stream::{Generator, WordStream};
use crate::word::{Alphabet, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// The quotient list repeats forever.
    Periodic,
    /// The word ends with the last standard word of the list.
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmianSpec {
    pub quotients: Vec<u32>,
    pub tail: Tail,
}

impl SturmianSpec {
    pub fn new(quotients: Vec<u32>) -> Result<Self> {
        Self::with_tail(quotients, Tail::Periodic)
    }

    pub fn with_tail(quotients: Vec<u32>, tail: Tail) -> Result<Self> {
        if quotients.is_empty() {
            return Err(QwError::Malformed(
                "continued fraction needs at least one quotient".into(),
            ));
        }
        if quotients.contains(&0) {
            return Err(QwError::Malformed(
                "partial quotients must be positive".into(),
            ));
        }
        Ok(SturmianSpec { quotients, tail })
    }

    /// `a_k` for `k >= 1`, or `None` past a truncated list.
    pub fn quotient(&self, k: usize) -> Option<u32> {
        let len = self.quotients.len();
        match self.tail {
            Tail::Periodic => Some(self.quotients[(k - 1) % len]),
            Tail::Truncated => self.quotients.get(k - 1).copied(),
        }
    }
}

pub struct StandardWordGen {
    spec: SturmianSpec,
    previous: Vec<Letter>,
    current: Vec<Letter>,
    step: usize,
}

impl StandardWordGen {
    pub fn new(spec: SturmianSpec) -> Self {
        StandardWordGen {
            spec,
            previous: vec![1],
            current: vec![0],
            step: 0,
        }
    }

    /// Advance to the next standard word; `false` past a truncated list.
    fn step(&mut self) -> bool {
        let Some(a) = self.spec.quotient(self.step + 1) else {
            return false;
        };
        let mut next = self.current.repeat(a as usize);
        next.extend_from_slice(&self.previous);
        self.previous = std::mem::replace(&mut self.current, next);
        self.step += 1;
        true
    }
}

impl Generator for StandardWordGen {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        while self.current.len() < target {
            if !self.step() {
                break;
            }
        }
        let from = buf.len().min(self.current.len());
        buf.extend_from_slice(&self.current[from..]);
        Ok(())
    }
}

pub fn characteristic_word(spec: SturmianSpec) -> WordStream {
    WordStream::new(Alphabet::binary(), StandardWordGen::new(spec))
}

/// A horizon at which factor sets up to order `n_max` are saturated for the
/// Sturmian words used here.
pub fn default_horizon(n_max: usize) -> usize {
    (64 * n_max).max(4_096)
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct Burst {
    pub order: usize,
    /// Loop lengths in edges, shortest first.
    pub loops: (usize, usize),
}

/// Orders `n <= n_max` whose Rauzy graph is eight shaped around `prefix(n)`.
pub fn bursts(x: &WordStream, n_max: usize, horizon: usize) -> Result<Vec<Burst>> {
    let graphs = build_range(x, 1..=n_max, horizon)?;
    let prefix = x.prefix(n_max)?;
    let mut out = Vec::new();
    for g in &graphs {
        let center = &prefix[..g.order];
        let shape = match eight_shape(g, center) {
            Ok(s) => s,
            Err(QwError::NotAVertex) => continue,
            Err(e) => return Err(e),
        };
        if let Some(loops) = shape.loops {
            out.push(Burst {
                order: g.order,
                loops,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct BurstCheck {
    pub order: usize,
    pub loops: (usize, usize),
    /// Both loops nonempty and neither longer than the order, so every path
    /// of `order` edges from the center returns to it.
    pub qualifies: bool,
    /// Coverage verdict for `prefix(order)`; checked only when qualifying.
    pub covered: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SturmianReport {
    pub n_max: usize,
    pub horizon: usize,
    pub bursts: Vec<BurstCheck>,
    /// Non-qualifying bursts, reported rather than failed.
    pub flagged: Vec<usize>,
    /// Lengths of the burst prefixes verified as quasiperiods.
    pub quasiperiod_lengths: Vec<usize>,
    /// First burst order from which every later checked burst is covered.
    pub stable_from: Option<usize>,
    pub all_checked_covered: bool,
}

/// At each burst the left special prefix `l_n` is expected to be a
/// quasiperiod; check it with the coverage test.
pub fn verify_sturmian_quasiperiods(
    x: &WordStream,
    n_max: usize,
    horizon: usize,
) -> Result<SturmianReport> {
    let found = bursts(x, n_max, horizon)?;
    let mut checks = Vec::with_capacity(found.len());
    for b in found {
        let (short, long) = b.loops;
        let qualifies = short >= 1 && long <= b.order;
        let covered = if qualifies {
            let q = x.prefix(b.order)?;
            Some(check_cover(&q, x, horizon)?.is_covered())
        } else {
            None
        };
        checks.push(BurstCheck {
            order: b.order,
            loops: b.loops,
            qualifies,
            covered,
        });
    }
    let flagged = checks
        .iter()
        .filter(|c| !c.qualifies)
        .map(|c| c.order)
        .collect();
    let quasiperiod_lengths = checks
        .iter()
        .filter(|c| c.covered == Some(true))
        .map(|c| c.order)
        .collect();
    let all_checked_covered = checks.iter().all(|c| c.covered != Some(false));
    let stable_from = checks
        .iter()
        .enumerate()
        .find(|(i, _)| checks[*i..].iter().all(|c| c.covered == Some(true)))
        .map(|(_, c)| c.order);
    Ok(SturmianReport {
        n_max,
        horizon,
        bursts: checks,
        flagged,
        quasiperiod_lengths,
        stable_from,
        all_checked_covered,
    })
}
