//! Lazily materialized infinite words.
//!
//! A [`WordStream`] pairs a [`Generator`] with an append-only cache of the
//! prefix produced so far. Requests for longer prefixes extend the cache;
//! shorter requests are served from it, so `prefix(m)` is always a prefix of
//! `prefix(n)` for `m <= n`.

use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{IntegrationGen, PhiTable, TowerGen};
use crate::corpus;
use crate::error::{QwError, Result};
use crate::sturmian::{StandardWordGen, SturmianSpec};
use crate::word::{Alphabet, FiniteWord, Letter};

/// Default cap on the number of letters any single stream may materialize.
pub const DEFAULT_BUDGET: usize = 1 << 27;

/// Produces the letters of an infinite word in order.
pub trait Generator: Send {
    /// Append letters to `buf` until `buf.len() >= target`. Overshooting is
    /// allowed; `buf` only ever holds letters this generator produced.
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()>;
}

struct State {
    cache: Vec<Letter>,
    generator: Box<dyn Generator>,
}

pub struct WordStream {
    alphabet: Alphabet,
    budget: usize,
    state: Mutex<State>,
}

impl std::fmt::Debug for WordStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WordStream")
            .field("alphabet", &self.alphabet)
            .field("materialized", &self.materialized())
            .finish()
    }
}

impl WordStream {
    pub fn new(alphabet: Alphabet, generator: impl Generator + 'static) -> Self {
        WordStream {
            alphabet,
            budget: DEFAULT_BUDGET,
            state: Mutex::new(State {
                cache: Vec::new(),
                generator: Box::new(generator),
            }),
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn materialized(&self) -> usize {
        self.state.lock().unwrap().cache.len()
    }

    fn ensure(&self, state: &mut State, n: usize) -> Result<()> {
        if state.cache.len() >= n {
            return Ok(());
        }
        if n > self.budget {
            return Err(QwError::ResourceLimit {
                requested: n,
                budget: self.budget,
            });
        }
        let start = state.cache.len();
        let State { cache, generator } = state;
        generator.extend(cache, n)?;
        self.alphabet.check(&cache[start..])?;
        if cache.len() < n {
            return Err(QwError::Exhausted {
                available: cache.len(),
                requested: n,
            });
        }
        Ok(())
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Result<FiniteWord> {
        self.with_prefix(n, |p| FiniteWord::from(p))
    }

    /// Run `f` on the first `n` letters without copying them.
    pub fn with_prefix<R>(&self, n: usize, f: impl FnOnce(&[Letter]) -> R) -> Result<R> {
        let mut state = self.state.lock().unwrap();
        self.ensure(&mut state, n)?;
        Ok(f(&state.cache[..n]))
    }

    pub fn letter(&self, i: usize) -> Result<Letter> {
        self.with_prefix(i + 1, |p| p[i])
    }

    /// Letters `start..end` of the stream.
    pub fn window(&self, start: usize, end: usize) -> Result<FiniteWord> {
        self.with_prefix(end, |p| FiniteWord::from(&p[start..]))
    }

    pub fn render_prefix(&self, n: usize) -> Result<String> {
        self.with_prefix(n, |p| self.alphabet.render(p))
    }
}

/// `q^ω`.
pub struct Periodic {
    period: Vec<Letter>,
}

impl Periodic {
    pub fn new(period: &[Letter]) -> Result<Self> {
        if period.is_empty() {
            return Err(QwError::Malformed(
                "periodic word needs a nonempty period".into(),
            ));
        }
        Ok(Periodic {
            period: period.to_vec(),
        })
    }
}

impl Generator for Periodic {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        let l = self.period.len();
        while buf.len() < target {
            let phase = buf.len() % l;
            buf.extend_from_slice(&self.period[phase..]);
        }
        Ok(())
    }
}

/// A fixed finite head followed by another stream. With no tail the stream
/// is finite and reports exhaustion past the head.
pub struct Concat {
    head: Vec<Letter>,
    tail: Option<Arc<WordStream>>,
}

impl Concat {
    pub fn new(head: &[Letter], tail: Option<Arc<WordStream>>) -> Self {
        Concat {
            head: head.to_vec(),
            tail,
        }
    }
}

impl Generator for Concat {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        if buf.len() < self.head.len() {
            let from = buf.len();
            buf.extend_from_slice(&self.head[from..]);
        }
        if buf.len() >= target {
            return Ok(());
        }
        match &self.tail {
            Some(tail) => {
                let offset = buf.len() - self.head.len();
                let need = target - self.head.len();
                match tail.with_prefix(need, |p| buf.extend_from_slice(&p[offset..])) {
                    Err(QwError::Exhausted { available, .. }) => tail.with_prefix(available, |p| {
                        buf.extend_from_slice(&p[offset.min(available)..])
                    }),
                    other => other,
                }
            }
            None => Ok(()),
        }
    }
}

/// Fixed point of a morphism starting with `start`.
pub struct MorphismFixedPoint {
    images: Vec<Vec<Letter>>,
    start: Letter,
    cursor: usize,
}

impl MorphismFixedPoint {
    pub fn new(images: Vec<Vec<Letter>>, start: Letter) -> Result<Self> {
        let s = start as usize;
        let Some(first) = images.get(s) else {
            return Err(QwError::NoFixedPoint(format!(
                "letter {start} has no image"
            )));
        };
        if first.first() != Some(&start) {
            return Err(QwError::NoFixedPoint(format!(
                "the image of {start} does not begin with {start}"
            )));
        }
        if first.len() < 2 {
            return Err(QwError::NoFixedPoint(format!(
                "the image of {start} does not grow"
            )));
        }
        if let Some(bad) = images
            .iter()
            .flatten()
            .find(|&&a| a as usize >= images.len())
        {
            return Err(QwError::Malformed(format!(
                "image letter {bad} has no image itself"
            )));
        }
        Ok(MorphismFixedPoint {
            images,
            start,
            cursor: 0,
        })
    }
}

impl Generator for MorphismFixedPoint {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        if buf.is_empty() {
            buf.extend_from_slice(&self.images[self.start as usize]);
            self.cursor = 1;
        }
        while buf.len() < target {
            if self.cursor >= buf.len() {
                return Err(QwError::NoFixedPoint(
                    "the iteration stopped growing".into(),
                ));
            }
            let a = buf[self.cursor] as usize;
            buf.extend_from_slice(&self.images[a]);
            self.cursor += 1;
        }
        Ok(())
    }
}

/// Uniform i.i.d. letters from a seeded ChaCha generator.
pub struct RandomLetters {
    size: Letter,
    rng: ChaCha8Rng,
}

impl RandomLetters {
    pub fn new(size: usize, seed: u64) -> Self {
        RandomLetters {
            size: size as Letter,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Generator for RandomLetters {
    fn extend(&mut self, buf: &mut Vec<Letter>, target: usize) -> Result<()> {
        while buf.len() < target {
            buf.push(self.rng.gen_range(0..self.size));
        }
        Ok(())
    }
}

/// Generator descriptions, serializable as JSON tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamSpec {
    Periodic {
        word: String,
        #[serde(default)]
        alphabet: Option<String>,
    },
    /// Fixed point of `∫_word`, i.e. of the substitution `i -> word[..len - i]`.
    FixedPointOfIntegration {
        word: String,
    },
    Morphism {
        images: Vec<String>,
        start: Letter,
        #[serde(default)]
        alphabet: Option<String>,
    },
    Integrate {
        word: String,
        of: Box<StreamSpec>,
    },
    Concat {
        head: String,
        #[serde(default)]
        tail: Option<Box<StreamSpec>>,
        #[serde(default)]
        alphabet: Option<String>,
    },
    Sturmian {
        cf: Vec<u32>,
    },
    Tower {
        phi: Vec<(usize, usize)>,
    },
    Random {
        size: usize,
        seed: u64,
    },
    File {
        path: PathBuf,
        #[serde(default)]
        alphabet: Option<String>,
    },
    Named {
        name: String,
    },
}

fn alphabet_for(text: &str, explicit: &Option<String>) -> Result<Alphabet> {
    match explicit {
        Some(symbols) => Alphabet::with_symbols(symbols),
        None => Alphabet::infer(text),
    }
}

impl StreamSpec {
    /// Parse either a JSON descriptor, a corpus name, or a short form such as
    /// `periodic:aba`, `fixed:010`, `sturmian:2,1`, `random:2:7`, `file:PATH`
    /// or `literal:abaab`.
    pub fn parse(text: &str) -> Result<StreamSpec> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text).map_err(|e| QwError::Malformed(e.to_string()));
        }
        let Some((kind, rest)) = text.split_once(':') else {
            if corpus::names().contains(&text) {
                return Ok(StreamSpec::Named { name: text.into() });
            }
            return Err(QwError::Malformed(format!("unknown word '{text}'")));
        };
        match kind {
            "periodic" => Ok(StreamSpec::Periodic {
                word: rest.into(),
                alphabet: None,
            }),
            "fixed" => Ok(StreamSpec::FixedPointOfIntegration { word: rest.into() }),
            "literal" => Ok(StreamSpec::Concat {
                head: rest.into(),
                tail: None,
                alphabet: None,
            }),
            "sturmian" => Ok(StreamSpec::Sturmian {
                cf: parse_list(rest)?,
            }),
            "random" => {
                let (size, seed) = rest
                    .split_once(':')
                    .ok_or_else(|| QwError::Malformed("random:SIZE:SEED".into()))?;
                Ok(StreamSpec::Random {
                    size: size
                        .parse()
                        .map_err(|_| QwError::Malformed(format!("bad size '{size}'")))?,
                    seed: seed
                        .parse()
                        .map_err(|_| QwError::Malformed(format!("bad seed '{seed}'")))?,
                })
            }
            "file" => Ok(StreamSpec::File {
                path: rest.into(),
                alphabet: None,
            }),
            _ => Err(QwError::Malformed(format!("unknown word kind '{kind}'"))),
        }
    }

    pub fn build(&self) -> Result<WordStream> {
        match self {
            StreamSpec::Periodic { word, alphabet } => {
                let alphabet = alphabet_for(word, alphabet)?;
                let q = alphabet.parse(word)?;
                Ok(WordStream::new(alphabet, Periodic::new(&q)?))
            }
            StreamSpec::FixedPointOfIntegration { word } => {
                let alphabet = Alphabet::infer(word)?;
                let w = alphabet.parse(word)?;
                fixed_point_of_integration(&w, alphabet)
            }
            StreamSpec::Morphism {
                images,
                start,
                alphabet,
            } => {
                let joined: String = images.concat();
                let alphabet = alphabet_for(&joined, alphabet)?;
                let images = images
                    .iter()
                    .map(|s| alphabet.parse(s).map(FiniteWord::into_letters))
                    .collect::<Result<Vec<_>>>()?;
                Ok(WordStream::new(
                    alphabet,
                    MorphismFixedPoint::new(images, *start)?,
                ))
            }
            StreamSpec::Integrate { word, of } => {
                let alphabet = Alphabet::infer(word)?;
                let w = alphabet.parse(word)?;
                let inner = Arc::new(of.build()?);
                Ok(WordStream::new(alphabet, IntegrationGen::new(&w, inner)?))
            }
            StreamSpec::Concat {
                head,
                tail,
                alphabet,
            } => {
                let tail = tail.as_ref().map(|t| t.build()).transpose()?;
                let alphabet = match (alphabet, &tail) {
                    (Some(s), _) => Alphabet::with_symbols(s)?,
                    (None, Some(t)) => t.alphabet().clone(),
                    (None, None) => Alphabet::infer(head)?,
                };
                let head = alphabet.parse(head)?;
                Ok(WordStream::new(
                    alphabet,
                    Concat::new(&head, tail.map(Arc::new)),
                ))
            }
            StreamSpec::Sturmian { cf } => {
                let spec = SturmianSpec::new(cf.clone())?;
                Ok(WordStream::new(
                    Alphabet::binary(),
                    StandardWordGen::new(spec),
                ))
            }
            StreamSpec::Tower { phi } => {
                let table = PhiTable::new(phi.clone())?;
                Ok(WordStream::new(
                    Alphabet::binary(),
                    TowerGen::new(table, DEFAULT_BUDGET),
                ))
            }
            StreamSpec::Random { size, seed } => Ok(WordStream::new(
                Alphabet::new(*size)?,
                RandomLetters::new(*size, *seed),
            )),
            StreamSpec::File { path, alphabet } => file_stream(path, alphabet.as_deref()),
            StreamSpec::Named { name } => corpus::spec(name)?.build(),
        }
    }
}

fn parse_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| QwError::Malformed(format!("bad integer '{t}'")))
        })
        .collect()
}

pub fn periodic(q: &FiniteWord, alphabet: Alphabet) -> Result<WordStream> {
    alphabet.check(q)?;
    Ok(WordStream::new(alphabet, Periodic::new(q)?))
}

/// The fixed point of `∫_w`, which begins with `w` when `w[0] = 0`.
pub fn fixed_point_of_integration(w: &FiniteWord, alphabet: Alphabet) -> Result<WordStream> {
    let l = w.len();
    if let Some(&bad) = w.iter().find(|&&a| a as usize >= l) {
        return Err(QwError::Domain {
            letter: bad,
            base_len: l,
        });
    }
    let images: Vec<Vec<Letter>> = (0..l).map(|i| w[..l - i].to_vec()).collect();
    let start = *w
        .first()
        .ok_or_else(|| QwError::Malformed("empty base word".into()))?;
    Ok(WordStream::new(
        alphabet,
        MorphismFixedPoint::new(images, start)?,
    ))
}

/// A stream over the bytes of a text file, one symbol per byte; whitespace
/// is skipped. Without an explicit alphabet one is inferred from the file.
pub fn file_stream(path: &std::path::Path, symbols: Option<&str>) -> Result<WordStream> {
    let text = std::fs::read_to_string(path)?;
    let body: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let alphabet = match symbols {
        Some(s) => Alphabet::with_symbols(s)?,
        None => Alphabet::infer(&body)?,
    };
    let word = alphabet.parse(&body)?;
    Ok(WordStream::new(alphabet, Concat::new(&word, None)))
}
