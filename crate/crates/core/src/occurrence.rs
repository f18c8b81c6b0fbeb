//! Occurrence scanning with a failure-function matcher.

use serde::Serialize;

use crate::error::{QwError, Result};
use crate::word::{FiniteWord, Letter};

/// Sorted start positions of a factor within a scanned text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OccurrenceList {
    pub factor: FiniteWord,
    pub positions: Vec<usize>,
    /// Length of the text that was scanned.
    pub horizon: usize,
}

impl OccurrenceList {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Consecutive differences `i_{k+1} - i_k`.
    pub fn gaps(&self) -> impl Iterator<Item = usize> + '_ {
        self.positions.windows(2).map(|w| w[1] - w[0])
    }
}

/// Prefix function: `fail[i]` is the length of the longest proper border of
/// `pattern[..=i]`.
pub fn failure_function(pattern: &[Letter]) -> Vec<usize> {
    let mut fail = vec![0usize; pattern.len()];
    let mut k = 0;
    for i in 1..pattern.len() {
        while k > 0 && pattern[i] != pattern[k] {
            k = fail[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// Start positions of every (possibly overlapping) occurrence of `pattern`.
pub fn find_all(pattern: &[Letter], text: &[Letter]) -> Vec<usize> {
    let m = pattern.len();
    if m == 0 || m > text.len() {
        return Vec::new();
    }
    let fail = failure_function(pattern);
    let mut out = Vec::new();
    let mut k = 0;
    for (i, &c) in text.iter().enumerate() {
        while k > 0 && c != pattern[k] {
            k = fail[k - 1];
        }
        if c == pattern[k] {
            k += 1;
        }
        if k == m {
            out.push(i + 1 - m);
            k = fail[k - 1];
        }
    }
    out
}

pub fn occurrences(u: &[Letter], v: &[Letter]) -> Result<OccurrenceList> {
    if u.is_empty() {
        return Err(QwError::EmptyFactor);
    }
    Ok(OccurrenceList {
        factor: FiniteWord::from(u),
        positions: find_all(u, v),
        horizon: v.len(),
    })
}

/// `#(u, v)`: the number of occurrences of `u` in `v`.
pub fn count(u: &[Letter], v: &[Letter]) -> Result<usize> {
    if u.is_empty() {
        return Err(QwError::EmptyFactor);
    }
    Ok(find_all(u, v).len())
}

/// Character-by-character scan. Kept as the reference for [`find_all`].
pub fn find_all_naive(pattern: &[Letter], text: &[Letter]) -> Vec<usize> {
    let m = pattern.len();
    if m == 0 || m > text.len() {
        return Vec::new();
    }
    (0..=text.len() - m)
        .filter(|&i| (0..m).all(|j| text[i + j] == pattern[j]))
        .collect()
}
