//! Factor languages `L_n` of finite prefixes.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{QwError, Result};
use crate::stream::WordStream;
use crate::word::{FiniteWord, Letter};

/// The distinct length-`n` factors of `prefix(horizon)`.
pub fn language(x: &WordStream, n: usize, horizon: usize) -> Result<BTreeSet<FiniteWord>> {
    if n == 0 {
        return Err(QwError::Malformed(
            "factor length must be at least 1".into(),
        ));
    }
    if horizon < n {
        return Err(QwError::HorizonTooSmall {
            horizon,
            required: n,
        });
    }
    x.with_prefix(horizon, |p| factors_of(p, n))
}

pub fn factors_of(text: &[Letter], n: usize) -> BTreeSet<FiniteWord> {
    if n == 0 || n > text.len() {
        return BTreeSet::new();
    }
    let set: HashSet<&[Letter]> = text.windows(n).collect();
    set.into_iter().map(FiniteWord::from).collect()
}

/// Dense identifiers for the factors of one text, one order at a time.
///
/// At order `n`, `ids()[i]` identifies `text[i..i + n]`; two positions get
/// the same id iff the factors are equal. Advancing to `n + 1` refines the
/// ids by the next letter, so sweeping every order up to `N` costs
/// `O(N * len)` hash operations regardless of factor length.
pub struct FactorIndex<'a> {
    text: &'a [Letter],
    order: usize,
    ids: Vec<u32>,
    distinct: usize,
}

impl<'a> FactorIndex<'a> {
    /// Order-1 index: ids are the letters themselves, renumbered densely.
    pub fn new(text: &'a [Letter]) -> Self {
        let mut map: HashMap<Letter, u32> = HashMap::new();
        let ids: Vec<u32> = text
            .iter()
            .map(|&a| {
                let next = map.len() as u32;
                *map.entry(a).or_insert(next)
            })
            .collect();
        FactorIndex {
            text,
            order: 1,
            distinct: map.len(),
            ids,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of distinct factors of the current order: `p_n` of the text.
    pub fn distinct(&self) -> usize {
        self.distinct
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn text(&self) -> &'a [Letter] {
        self.text
    }

    /// Move from order `n` to `n + 1`. Returns `false` once the text is too
    /// short to hold a factor of the next order.
    pub fn advance(&mut self) -> bool {
        let n = self.order;
        if n + 1 > self.text.len() {
            return false;
        }
        let count = self.text.len() - n;
        let mut map: HashMap<(u32, Letter), u32> = HashMap::with_capacity(self.distinct * 2);
        let mut next = Vec::with_capacity(count);
        for i in 0..count {
            let key = (self.ids[i], self.text[i + n]);
            let fresh = map.len() as u32;
            next.push(*map.entry(key).or_insert(fresh));
        }
        self.distinct = map.len();
        self.ids = next;
        self.order = n + 1;
        true
    }

    /// One representative start position per id.
    pub fn representatives(&self) -> Vec<usize> {
        let mut rep = vec![usize::MAX; self.distinct];
        for (i, &id) in self.ids.iter().enumerate() {
            if rep[id as usize] == usize::MAX {
                rep[id as usize] = i;
            }
        }
        rep
    }

    pub fn factor(&self, id: u32) -> Option<&'a [Letter]> {
        self.ids
            .iter()
            .position(|&j| j == id)
            .map(|i| &self.text[i..i + self.order])
    }
}

/// `p_n` of `text` for every `n` in `1..=n_max` (zero where `n > len`).
pub fn complexity_counts(text: &[Letter], n_max: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n_max);
    if text.is_empty() {
        return vec![0; n_max];
    }
    let mut index = FactorIndex::new(text);
    for n in 1..=n_max {
        if n > 1 && !index.advance() {
            out.resize(n_max, 0);
            break;
        }
        out.push(index.distinct());
    }
    out
}
