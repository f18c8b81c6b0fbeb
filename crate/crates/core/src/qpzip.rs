//! Compression of quasiperiodic prefixes.
//!
//! A prefix split as `u·w·v` with `w` covered by `q` is stored as `q`, the
//! short ends `u` and `v`, and the jumps between successive kept occurrences
//! of `q` in `w`. Decoding overlays `q` at each kept occurrence.
//!
//! Jumps are thinned greedily: whenever the last kept jump and the next one
//! are both shorter than `l(q)/2`, the middle occurrence is dropped and the
//! two are merged. The merged jump is still below `l(q)`, so the dropped
//! occurrence lies inside the union of its neighbours. Afterwards no two
//! adjacent jumps are both short, which bounds the token count by
//! `4n / l(q) + 2`.

use serde::Serialize;

use crate::error::{QwError, Result};
use crate::occurrence::find_all;
use crate::word::{FiniteWord, Letter};

pub const MAGIC: &[u8; 4] = b"QPZ1";

/// Header size in bits: magic, alphabet size, `l(q)`, `n`, `l(u)`, `l(v)`
/// and the token count.
pub const HEADER_BITS: u64 = 32 + 32 + 32 + 64 + 32 + 32 + 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Encoded {
    pub alphabet_size: u32,
    pub len: u64,
    pub q: FiniteWord,
    pub u: FiniteWord,
    pub v: FiniteWord,
    pub tokens: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Cost {
    pub bits: u64,
    pub raw_bits: u64,
    /// Bits per input letter.
    pub rate: f64,
    /// `4 log2(l) / l + (C0 + 3 l b) / n`, with `b` bits per letter.
    pub rate_bound: f64,
    pub token_count: usize,
    pub token_bound: f64,
}

fn bits_for(values: u64) -> u64 {
    (u64::BITS - values.saturating_sub(1).leading_zeros()).max(1) as u64
}

/// Greedy thinning of a jump sequence; see the module docs.
pub fn merge_jumps(jumps: &[u32], l: u32) -> Vec<u32> {
    let short = |t: u32| 2 * t < l;
    let mut out: Vec<u32> = Vec::with_capacity(jumps.len());
    for &j in jumps {
        match out.last_mut() {
            Some(last) if short(*last) && short(j) => *last += j,
            _ => out.push(j),
        }
    }
    out
}

pub fn encode(prefix: &[Letter], q: &[Letter], alphabet_size: u32) -> Result<Encoded> {
    if q.is_empty() {
        return Err(QwError::EmptyFactor);
    }
    if let Some(&bad) = prefix.iter().chain(q).find(|&&a| a >= alphabet_size) {
        return Err(QwError::LetterOutOfRange {
            letter: bad,
            size: alphabet_size as usize,
        });
    }
    let l = q.len();
    let n = prefix.len();
    let occ = find_all(q, prefix);
    let (Some(&first), Some(&last)) = (occ.first(), occ.last()) else {
        return Err(QwError::CoverageViolation { position: 0 });
    };
    if first > l {
        return Err(QwError::CoverageViolation { position: 0 });
    }
    if n - (last + l) > l {
        return Err(QwError::CoverageViolation { position: last + l });
    }
    let mut jumps = Vec::with_capacity(occ.len());
    for pair in occ.windows(2) {
        let gap = pair[1] - pair[0];
        if gap > l {
            return Err(QwError::CoverageViolation {
                position: pair[0] + l,
            });
        }
        jumps.push(gap as u32);
    }
    Ok(Encoded {
        alphabet_size,
        len: n as u64,
        q: FiniteWord::from(q),
        u: FiniteWord::from(&prefix[..first]),
        v: FiniteWord::from(&prefix[last + l..]),
        tokens: merge_jumps(&jumps, l as u32),
    })
}

pub fn decode(e: &Encoded) -> Result<FiniteWord> {
    let l = e.q.len();
    if l == 0 {
        return Err(QwError::Integrity("empty quasiperiod".into()));
    }
    let span: u64 = e.tokens.iter().map(|&t| t as u64).sum::<u64>() + l as u64;
    let expected = e.u.len() as u64 + span + e.v.len() as u64;
    if expected != e.len {
        return Err(QwError::Integrity(format!(
            "lengths add up to {expected}, header says {}",
            e.len
        )));
    }
    if e.tokens.iter().any(|&t| t == 0 || t as usize > l) {
        return Err(QwError::Integrity("jump outside 1..=l(q)".into()));
    }
    if let Some(&bad) =
        e.q.iter()
            .chain(e.u.iter())
            .chain(e.v.iter())
            .find(|&&a| a >= e.alphabet_size)
    {
        return Err(QwError::Integrity(format!(
            "letter {bad} outside the alphabet"
        )));
    }
    let mut out = e.u.letters().to_vec();
    out.extend_from_slice(&e.q);
    let mut pos = e.u.len();
    for &t in &e.tokens {
        pos += t as usize;
        let written = out.len() - pos;
        if out[pos..] != e.q[..written] {
            return Err(QwError::Integrity(format!(
                "overlapping copies disagree at {pos}"
            )));
        }
        out.extend_from_slice(&e.q[written..]);
    }
    out.extend_from_slice(&e.v);
    Ok(FiniteWord::new(out))
}

pub fn bit_cost(e: &Encoded) -> Cost {
    let l = e.q.len() as u64;
    let n = e.len.max(1);
    let per_letter = bits_for(e.alphabet_size as u64);
    let per_token = bits_for(l + 1);
    let letters = (e.q.len() + e.u.len() + e.v.len()) as u64;
    let bits = HEADER_BITS + letters * per_letter + e.tokens.len() as u64 * per_token;
    let lf = l as f64;
    Cost {
        bits,
        raw_bits: e.len * per_letter,
        rate: bits as f64 / n as f64,
        rate_bound: 4.0 * lf.log2().max(1.0) / lf
            + (HEADER_BITS + 3 * l * per_letter) as f64 / n as f64,
        token_count: e.tokens.len(),
        token_bound: 4.0 * e.len as f64 / lf + 2.0,
    }
}

impl Encoded {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut b = Vec::with_capacity(
            40 + 4 * (self.q.len() + self.u.len() + self.v.len() + self.tokens.len()),
        );
        b.extend_from_slice(MAGIC);
        b.extend_from_slice(&self.alphabet_size.to_le_bytes());
        b.extend_from_slice(&(self.q.len() as u32).to_le_bytes());
        b.extend_from_slice(&self.len.to_le_bytes());
        b.extend_from_slice(&(self.u.len() as u32).to_le_bytes());
        b.extend_from_slice(&(self.v.len() as u32).to_le_bytes());
        b.extend_from_slice(&(self.tokens.len() as u64).to_le_bytes());
        for x in self
            .q
            .iter()
            .chain(self.u.iter())
            .chain(self.v.iter())
            .chain(&self.tokens)
        {
            b.extend_from_slice(&x.to_le_bytes());
        }
        b
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Encoded> {
        let mut r = Reader { bytes, at: 0 };
        if r.take(4)? != MAGIC {
            return Err(QwError::Integrity("bad magic".into()));
        }
        let alphabet_size = r.u32()?;
        let lq = r.u32()? as usize;
        let len = r.u64()?;
        let lu = r.u32()? as usize;
        let lv = r.u32()? as usize;
        let count =
            usize::try_from(r.u64()?).map_err(|_| QwError::Integrity("token count".into()))?;
        let body = lq
            .checked_add(lu)
            .and_then(|s| s.checked_add(lv))
            .and_then(|s| s.checked_add(count))
            .and_then(|s| s.checked_mul(4));
        if body != Some(bytes.len() - r.at) {
            return Err(QwError::Integrity(
                "payload length does not match header".into(),
            ));
        }
        let q = r.words(lq)?;
        let u = r.words(lu)?;
        let v = r.words(lv)?;
        let tokens = r.words(count)?;
        Ok(Encoded {
            alphabet_size,
            len,
            q: q.into(),
            u: u.into(),
            v: v.into(),
            tokens,
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl Reader<'_> {
    fn take(&mut self, k: usize) -> Result<&[u8]> {
        let end = self.at + k;
        let s = self
            .bytes
            .get(self.at..end)
            .ok_or_else(|| QwError::Integrity("truncated container".into()))?;
        self.at = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn words(&mut self, k: usize) -> Result<Vec<u32>> {
        (0..k).map(|_| self.u32()).collect()
    }
}
