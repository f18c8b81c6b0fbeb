//! Derivation and integration of quasiperiodic words.
//!
//! The derivative `∂x/∂q` records, for each pair of consecutive occurrences
//! of the quasiperiod `q`, the length of their overlap. Integration `∫_w x`
//! inverts it: letter `i` of `x` becomes the first `l(w) - i` letters of `w`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{QwError, Result};
use crate::occurrence::find_all;
use crate::quasiperiod::check_cover;
use crate::stream::{Generator, WordStream, DEFAULT_BUDGET};
use crate::word::{Alphabet, FiniteWord, Letter};

/// `σ_w`: letter `i` maps to the prefix of `w` of length `l(w) - i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    base: FiniteWord,
}

impl Substitution {
    pub fn new(base: FiniteWord) -> Result<Self> {
        if base.is_empty() {
            return Err(QwError::Malformed("substitution base word is empty".into()));
        }
        Ok(Substitution { base })
    }

    pub fn base(&self) -> &FiniteWord {
        &self.base
    }

    pub fn image(&self, letter: Letter) -> Result<&[Letter]> {
        let l = self.base.len();
        if letter as usize >= l {
            return Err(QwError::Domain {
                letter,
                base_len: l,
            });
        }
        Ok(&self.base[..l - letter as usize])
    }

    pub fn apply(&self, word: &[Letter]) -> Result<FiniteWord> {
        let mut out = Vec::new();
        for &a in word {
            out.extend_from_slice(self.image(a)?);
        }
        Ok(FiniteWord::new(out))
    }

    /// Length of the image of `word` without building it.
    pub fn image_len(&self, word: &[Letter]) -> Result<usize> {
        word.iter().map(|&a| self.image(a).map(|i| i.len())).sum()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Derivative {
    /// Letters over `{0, .., l(q) - 1}`.
    pub word: FiniteWord,
    /// Occurrences of `q` lying entirely inside the horizon.
    pub occurrences: usize,
    /// Letters of `x` reconstructible from `q` and the derivative: the end
    /// of the last occurrence used.
    pub consumed: usize,
    pub horizon: usize,
}

impl Derivative {
    pub fn alphabet(&self, q_len: usize) -> Alphabet {
        Alphabet::digits(q_len)
    }
}

/// `∂x/∂q` over the occurrences of `q` that fit inside `prefix(horizon)`.
pub fn derive(x: &WordStream, q: &[Letter], horizon: usize) -> Result<Derivative> {
    let l = q.len();
    if l == 0 {
        return Err(QwError::EmptyFactor);
    }
    if horizon < 2 * l {
        return Err(QwError::HorizonTooSmall {
            horizon,
            required: 2 * l,
        });
    }
    let report = check_cover(q, x, horizon)?;
    if let Some(position) = report.first_uncovered() {
        return Err(QwError::CoverageViolation { position });
    }
    let inside: Vec<usize> = report
        .positions
        .into_iter()
        .take_while(|&p| p + l <= horizon)
        .collect();
    Ok(derive_from_positions(&inside, l, horizon))
}

/// Derivative of a finite word that `q` covers exactly.
pub fn derive_finite(v: &[Letter], q: &[Letter]) -> Result<Derivative> {
    let l = q.len();
    if l == 0 {
        return Err(QwError::EmptyFactor);
    }
    let positions = find_all(q, v);
    let mut reach = 0;
    for &p in &positions {
        if p > reach {
            return Err(QwError::CoverageViolation { position: reach });
        }
        reach = p + l;
    }
    if reach < v.len() || positions.is_empty() {
        return Err(QwError::CoverageViolation { position: reach });
    }
    Ok(derive_from_positions(&positions, l, v.len()))
}

fn derive_from_positions(positions: &[usize], l: usize, horizon: usize) -> Derivative {
    let word: Vec<Letter> = positions
        .windows(2)
        .map(|w| (l - (w[1] - w[0])) as Letter)
        .collect();
    Derivative {
        word: FiniteWord::new(word),
        occurrences: positions.len(),
        consumed: positions.last().map_or(0, |&p| p + l),
        horizon,
    }
}

/// Streams `σ_w(x_0) σ_w(x_1) ...`.
pub struct IntegrationGen {
    sigma: Substitution,
    inner: Arc<WordStream>,
    read: usize,
}

impl IntegrationGen {
    pub fn new(w: &FiniteWord, inner: Arc<WordStream>) -> Result<Self> {
        let sigma = Substitution::new(w.clone())?;
        let size = inner.alphabet().size();
        if size > w.len() {
            return Err(QwError::Domain {
                letter: (size - 1) as Letter,
                base_len: w.len(),
            });
        }
        Ok(IntegrationGen {
            sigma,
            inner,
            read: 0,
        })
    }
}

impl Generator for IntegrationGen {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        let l = self.sigma.base().len();
        while buf.len() < target {
            // every image has at least one letter and at most l
            let chunk = ((target - buf.len()) / l).max(16);
            let mut end = self.read + chunk;
            let sigma = &self.sigma;
            let read = self.read;
            let map = |p: &[Letter], buf: &mut Vec<Letter>| -> Result<()> {
                for &a in &p[read..] {
                    buf.extend_from_slice(sigma.image(a)?);
                }
                Ok(())
            };
            match self.inner.with_prefix(end, |p| map(p, buf)) {
                Ok(r) => r?,
                // a finite source: use what it has, then stop
                Err(QwError::Exhausted { available, .. }) if available > read => {
                    end = available;
                    self.inner.with_prefix(end, |p| map(p, buf))??;
                }
                Err(QwError::Exhausted { .. }) => return Ok(()),
                Err(e) => return Err(e),
            }
            self.read = end;
        }
        Ok(())
    }
}

/// `∫_w x` as a stream over the alphabet of `w`.
pub fn integrate(w: &FiniteWord, w_alphabet: Alphabet, x: Arc<WordStream>) -> Result<WordStream> {
    w_alphabet.check(w)?;
    Ok(WordStream::new(w_alphabet, IntegrationGen::new(w, x)?))
}

/// Whether `w` is a prefix of `σ_w(n)·w` for every letter `n` of an
/// alphabet of the given size. When it holds, `∫_w x` is quasiperiodic with
/// quasiperiod `w` for every `x` over that alphabet.
pub fn prefix_condition(w: &FiniteWord, alphabet_size: usize) -> Result<bool> {
    let sigma = Substitution::new(w.clone())?;
    if alphabet_size > w.len() {
        return Err(QwError::Domain {
            letter: (alphabet_size - 1) as Letter,
            base_len: w.len(),
        });
    }
    for n in 0..alphabet_size {
        let image = sigma.image(n as Letter)?;
        let glued = FiniteWord::from(image).concat(w);
        if !w.is_prefix_of(&glued) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `a^k b a^k` over `{a = 0, b = 1}`.
pub fn symmetric_base(k: usize) -> FiniteWord {
    let mut v = vec![0; 2 * k + 1];
    v[k] = 1;
    FiniteWord::new(v)
}

/// The scale map `φ` of the tower construction given as a step table:
/// `φ(m)` is the value of the largest key `<= m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiTable {
    entries: Vec<(usize, usize)>,
}

impl PhiTable {
    pub fn new(mut entries: Vec<(usize, usize)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(QwError::Malformed("φ table is empty".into()));
        }
        entries.sort_unstable();
        if entries.iter().any(|&(_, v)| v == 0) {
            return Err(QwError::Malformed("φ values must be positive".into()));
        }
        if entries
            .windows(2)
            .any(|w| w[0].0 == w[1].0 || w[0].1 > w[1].1)
        {
            return Err(QwError::Malformed(
                "φ table keys must be distinct and values nondecreasing".into(),
            ));
        }
        Ok(PhiTable { entries })
    }

    pub fn get(&self, m: usize) -> Result<usize> {
        self.entries
            .iter()
            .rev()
            .find(|&&(k, _)| k <= m)
            .map(|&(_, v)| v)
            .ok_or_else(|| QwError::Malformed(format!("φ undefined at {m}")))
    }
}

/// Number of binary words of length `2n` with `n` zeros, saturating at
/// `usize::MAX`.
pub fn central_binomial(n: usize) -> usize {
    let mut acc: u128 = 1;
    for i in 0..n as u128 {
        // acc = C(2n, i) stays exact; the product fits while acc < 2^64
        acc = match acc.checked_mul(2 * n as u128 - i) {
            Some(p) => p / (i + 1),
            None => return usize::MAX,
        };
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Length of [`balanced_witness`]`(n)`, saturating.
pub fn balanced_witness_len(n: usize) -> usize {
    central_binomial(n)
        .saturating_mul(2 * n + 1)
        .saturating_add(1)
}

/// `0` followed by every balanced word of length `2n` in lexicographic
/// order, each followed by `0`. It begins and ends with `0` and contains
/// every balanced word of length `2n` as a factor.
pub fn balanced_witness(n: usize) -> FiniteWord {
    let mut out = Vec::with_capacity(balanced_witness_len(n));
    out.push(0);
    let len = 2 * n;
    for bits in 0u64..(1u64 << len) {
        if bits.count_ones() as usize != n {
            continue;
        }
        // most significant bit first, so numeric order is lexicographic order
        out.extend((0..len).rev().map(|j| ((bits >> j) & 1) as Letter));
        out.push(0);
    }
    FiniteWord::new(out)
}

/// Lazily grows `u_0 = 010`, `u_{n+1} = ∫_{u_n} w_{φ(l(u_n))}`; each level
/// is a prefix of the next.
pub struct TowerGen {
    phi: PhiTable,
    budget: usize,
    levels: Vec<FiniteWord>,
}

impl TowerGen {
    pub fn new(phi: PhiTable, budget: usize) -> Self {
        TowerGen {
            phi,
            budget,
            levels: vec![FiniteWord::from_digits("010")],
        }
    }

    pub fn levels(&self) -> &[FiniteWord] {
        &self.levels
    }

    /// Build the next level, refusing when it would exceed the budget.
    pub fn grow(&mut self) -> Result<&FiniteWord> {
        let u = self.levels.last().unwrap();
        let f = self.phi.get(u.len())?;
        let witness_len = balanced_witness_len(f);
        if witness_len > self.budget {
            return Err(QwError::ResourceLimit {
                requested: witness_len,
                budget: self.budget,
            });
        }
        let w = balanced_witness(f);
        let sigma = Substitution::new(u.clone())?;
        let len = sigma.image_len(&w)?;
        if len > self.budget {
            return Err(QwError::ResourceLimit {
                requested: len,
                budget: self.budget,
            });
        }
        let next = sigma.apply(&w)?;
        self.levels.push(next);
        Ok(self.levels.last().unwrap())
    }
}

impl Generator for TowerGen {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        while self.levels.last().unwrap().len() < target {
            self.grow()?;
        }
        let top = self.levels.last().unwrap();
        let from = buf.len();
        buf.extend_from_slice(&top[from..]);
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tower {
    pub phi: PhiTable,
    /// `u_0, .., u_depth`.
    pub levels: Vec<FiniteWord>,
}

impl Tower {
    pub fn lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|u| u.len()).collect()
    }

    pub fn top(&self) -> &FiniteWord {
        self.levels.last().unwrap()
    }

    /// The infinite word whose prefixes are the levels, continuing past
    /// `depth` with the same table.
    pub fn stream(&self) -> WordStream {
        WordStream::new(
            Alphabet::binary(),
            TowerGen::new(self.phi.clone(), DEFAULT_BUDGET),
        )
    }
}

/// The tower `u_0, .., u_depth` of the high-complexity construction.
pub fn high_complexity_word(phi: PhiTable, depth: usize, budget: usize) -> Result<Tower> {
    if depth == 0 {
        return Err(QwError::Malformed("tower depth must be at least 1".into()));
    }
    let mut generator = TowerGen::new(phi.clone(), budget);
    for _ in 0..depth {
        generator.grow()?;
    }
    Ok(Tower {
        phi,
        levels: generator.levels,
    })
}
