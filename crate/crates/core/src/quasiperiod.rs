//! Cover detection and quasiperiod enumeration.
//!
//! A prefix `q` of an infinite word `x` is a quasiperiod when its
//! occurrences start at 0 and consecutive occurrences are never more than
//! `l(q)` apart. At a finite horizon `N` we say `q` covers `prefix(N)` when
//! that holds for the occurrences found in `prefix(N + l(q) - 1)` and one of
//! them reaches position `N - 1`.

use serde::Serialize;

use crate::error::{QwError, Result};
use crate::occurrence::{failure_function, find_all};
use crate::stream::WordStream;
use crate::word::{FiniteWord, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Covered,
    /// Consecutive occurrences at `from` and `to` leave position
    /// `from + l(q)` uncovered. `to` is `None` when no later occurrence was
    /// found before the horizon.
    GapAt {
        from: usize,
        to: Option<usize>,
    },
    MissingInitialOccurrence,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub quasiperiod: FiniteWord,
    pub horizon: usize,
    pub positions: Vec<usize>,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl CoverageReport {
    pub fn is_covered(&self) -> bool {
        self.verdict == Verdict::Covered
    }

    /// First position of `prefix(horizon)` not covered by an occurrence.
    pub fn first_uncovered(&self) -> Option<usize> {
        match self.verdict {
            Verdict::Covered => None,
            Verdict::MissingInitialOccurrence => Some(0),
            Verdict::GapAt { from, .. } => Some(from + self.quasiperiod.len()),
        }
    }
}

/// Coverage verdict of `positions` (sorted occurrences of a word of length
/// `l`) against the first `horizon` letters.
fn judge(positions: &[usize], l: usize, horizon: usize) -> Verdict {
    if positions.first() != Some(&0) {
        return Verdict::MissingInitialOccurrence;
    }
    for w in positions.windows(2) {
        if w[1] - w[0] > l {
            return Verdict::GapAt {
                from: w[0],
                to: Some(w[1]),
            };
        }
    }
    let last = *positions.last().unwrap();
    if last + l >= horizon {
        Verdict::Covered
    } else {
        Verdict::GapAt {
            from: last,
            to: None,
        }
    }
}

pub fn check_cover(q: &[Letter], x: &WordStream, horizon: usize) -> Result<CoverageReport> {
    let l = q.len();
    if l == 0 {
        return Err(QwError::EmptyFactor);
    }
    if horizon < l {
        return Err(QwError::HorizonTooSmall {
            horizon,
            required: l,
        });
    }
    let positions = x.with_prefix(horizon + l - 1, |p| find_all(q, p))?;
    Ok(CoverageReport {
        quasiperiod: FiniteWord::from(q),
        horizon,
        verdict: judge(&positions, l, horizon),
        positions,
    })
}

/// Whether `q` covers the finite word `v` exactly: occurrences start at 0,
/// leave no gaps and the last one ends at `l(v) - 1`.
pub fn covers(q: &[Letter], v: &[Letter]) -> bool {
    let l = q.len();
    if l == 0 || l > v.len() || !v.starts_with(q) || !v.ends_with(q) {
        return false;
    }
    find_all(q, v).windows(2).all(|w| w[1] - w[0] <= l)
}

/// Every cover of `v`, shortest first. Candidates are the borders of `v`,
/// found by direct comparison; each is checked against its occurrence
/// list. This is the reference path for [`shortest_cover_linear`].
pub fn all_covers(v: &[Letter]) -> Vec<FiniteWord> {
    let n = v.len();
    (1..=n)
        .filter(|&b| v[..b] == v[n - b..])
        .filter(|&b| covers(&v[..b], v))
        .map(|b| FiniteWord::from(&v[..b]))
        .collect()
}

/// Length of the shortest cover of every prefix of `v`, in linear time.
///
/// `cover[i]` is the shortest cover length of `v[..i]`. The shortest cover
/// of a prefix is either the prefix itself or the shortest cover `c` of its
/// longest border; the latter works iff some prefix already covered by `c`
/// reaches the occurrence of `c` that ends at `i`.
pub fn cover_array(v: &[Letter]) -> Vec<usize> {
    let n = v.len();
    let fail = failure_function(v);
    let mut cover = vec![0usize; n + 1];
    // last[c]: the longest prefix seen so far whose shortest cover is c
    let mut last = vec![0usize; n + 1];
    for i in 1..=n {
        cover[i] = i;
        let b = fail[i - 1];
        if b > 0 {
            let c = cover[b];
            if last[c] + c >= i {
                cover[i] = c;
            }
        }
        last[cover[i]] = i;
    }
    cover
}

pub fn shortest_cover_linear(v: &[Letter]) -> Result<FiniteWord> {
    if v.is_empty() {
        return Err(QwError::EmptyFactor);
    }
    let c = cover_array(v)[v.len()];
    Ok(FiniteWord::from(&v[..c]))
}

/// Z-array: `z[i]` is the length of the longest common prefix of `s` and
/// `s[i..]`, with `z[0] = len`.
pub fn z_array(s: &[Letter]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0usize; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0usize, 0usize);
    for i in 1..n {
        if i < r {
            z[i] = z[i - l].min(r - i);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

/// Lengths `l <= max_len` for which `prefix(l)` covers `text[..horizon]`,
/// given `text` of length at least `horizon + max_len - 1`.
///
/// Sweeps `l` upward over the occurrence set of `prefix(l)`, which only
/// shrinks: positions with `z[i] < l` are unlinked from a doubly linked list
/// and the largest gap is maintained incrementally.
pub fn covering_prefix_lengths(text: &[Letter], horizon: usize, max_len: usize) -> Vec<usize> {
    let max_len = max_len.min(horizon);
    if max_len == 0 {
        return Vec::new();
    }
    assert!(
        text.len() >= horizon + max_len - 1,
        "text shorter than horizon + max_len - 1"
    );
    let z = z_array(&text[..horizon + max_len - 1]);
    let m = horizon; // candidate start positions 0..horizon
    let mut prev: Vec<usize> = (0..m).map(|i| i.wrapping_sub(1)).collect();
    let mut next: Vec<usize> = (1..=m).collect();
    // positions bucketed by the length at which they stop being occurrences
    let mut drop_at: Vec<Vec<usize>> = vec![Vec::new(); max_len + 2];
    for i in 1..m {
        drop_at[z[i].min(max_len + 1)].push(i);
    }
    let mut last = m - 1; // largest live position
    let mut max_gap = 1usize;
    let mut out = Vec::new();
    for l in 1..=max_len {
        // remove positions whose factor of length l differs from prefix(l)
        for &i in &drop_at[l - 1] {
            let (p, nx) = (prev[i], next[i]);
            if nx < m {
                prev[nx] = p;
                max_gap = max_gap.max(nx - p);
            } else {
                last = p;
            }
            next[p] = nx;
        }
        if max_gap <= l && last + l >= horizon {
            out.push(l);
        }
    }
    out
}

/// Every prefix of `x` of length at most `max_len` that covers `prefix(N)`,
/// shortest first.
pub fn quasiperiods_up_to(
    x: &WordStream,
    horizon: usize,
    max_len: usize,
) -> Result<Vec<FiniteWord>> {
    let max_len = max_len.min(horizon);
    if max_len == 0 {
        return Ok(Vec::new());
    }
    x.with_prefix(horizon + max_len - 1, |p| {
        covering_prefix_lengths(p, horizon, max_len)
            .into_iter()
            .map(|l| FiniteWord::from(&p[..l]))
            .collect()
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiscaleWitness {
    pub horizon: usize,
    pub required: usize,
    pub holds: bool,
    /// Lengths of the covering prefixes.
    pub witnesses: Vec<usize>,
}

/// Finite evidence for multi-scale quasiperiodicity: at least `k`
/// quasiperiods (necessarily of distinct lengths, being prefixes) covering
/// `prefix(N)`.
pub fn multiscale_witness(x: &WordStream, horizon: usize, k: usize) -> Result<MultiscaleWitness> {
    let witnesses = x.with_prefix(2 * horizon - 1, |p| {
        covering_prefix_lengths(p, horizon, horizon)
    })?;
    Ok(MultiscaleWitness {
        horizon,
        required: k,
        holds: witnesses.len() >= k,
        witnesses,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceReport {
    pub factor: FiniteWord,
    pub horizon: usize,
    pub occurrences: usize,
    pub max_gap: usize,
    /// Shortest supplied quasiperiod containing the factor, if any.
    pub quasiperiod_len: Option<usize>,
    /// `max_gap <= 2 l(q)` for that quasiperiod.
    pub within_bound: Option<bool>,
}

/// Largest distance between consecutive occurrences of `u` in `prefix(N)`.
/// When one of `quasiperiods` contains `u`, the shortest such `q` is used to
/// check the bound `2 l(q)`: every factor of length `2 l(q)` contains `q`.
pub fn uniform_recurrence_check(
    x: &WordStream,
    u: &[Letter],
    horizon: usize,
    quasiperiods: &[FiniteWord],
) -> Result<RecurrenceReport> {
    if u.is_empty() {
        return Err(QwError::EmptyFactor);
    }
    let positions = x.with_prefix(horizon, |p| find_all(u, p))?;
    if positions.is_empty() {
        return Err(QwError::Absent { horizon });
    }
    let max_gap = positions.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    let q = quasiperiods
        .iter()
        .filter(|q| !find_all(u, q).is_empty())
        .min_by_key(|q| q.len());
    Ok(RecurrenceReport {
        factor: FiniteWord::from(u),
        horizon,
        occurrences: positions.len(),
        max_gap,
        quasiperiod_len: q.map(|q| q.len()),
        within_bound: q.map(|q| max_gap <= 2 * q.len()),
    })
}
