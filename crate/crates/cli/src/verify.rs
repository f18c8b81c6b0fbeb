//! Invariant checks over the named corpus, for `qw verify-all`.

use serde::Serialize;

use quasiword::calculus::{derive, derive_finite, high_complexity_word, PhiTable};
use quasiword::complexity::quadratic_bound_report;
use quasiword::corpus;
use quasiword::factors::factors_of;
use quasiword::qpzip::{bit_cost, decode, encode};
use quasiword::quasiperiod::{covers, quasiperiods_up_to};
use quasiword::rauzy::{build, deconnect_check};
use quasiword::sturmian::{characteristic_word, verify_sturmian_quasiperiods, SturmianSpec};
use quasiword::{FiniteWord, Result, WordStream};

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let name = name.into();
    match f() {
        Ok((passed, detail)) => CheckResult {
            name,
            passed,
            detail,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Corpus words with quasiperiods, the horizon used for them and the
/// longest quasiperiod searched for.
pub const SCANNED: &[(&str, usize, usize)] = &[
    ("paper-example-1", 2_000, 40),
    ("paper-example-2", 2_000, 40),
    ("fibonacci", 20_000, 60),
    ("sturmian-2-1", 20_000, 60),
    ("periodic-ab", 1_000, 20),
    ("periodic-aba", 1_000, 20),
    ("non-recurrent", 2_000, 40),
    ("tower", 400_000, 120),
];

fn named(name: &str) -> Result<WordStream> {
    corpus::spec(name)?.build()
}

const PRINTED_INTEGRAL: &str = "aabcaaaabcaaabcaaabcaabcaaabcaaaabcaaabcaaaabcaabcaaaabcaaabcaa";

pub fn run_all() -> Vec<CheckResult> {
    let mut out = vec![
        check("derivation example", || {
            let x = named("paper-example-1")?;
            let q = x.prefix(3)?;
            let d = derive(&x, &q, 41)?;
            let got = d.alphabet(3).render(&d.word);
            Ok((got == "100011101100010", got))
        }),
        check("integration example", || {
            let y = named("paper-example-2")?;
            let printed = y.alphabet().parse(PRINTED_INTEGRAL)?;
            let got = y.prefix(57)?;
            let back = derive_finite(&printed, &printed[..6])?;
            let back = back.alphabet(6).render(&back.word);
            Ok((
                got[..] == printed[..57] && back == corpus::EXAMPLE_SOURCE,
                format!("57-letter prefix matches; derivative of the printed word is {back}"),
            ))
        }),
    ];
    for &(name, horizon, max_len) in SCANNED {
        out.extend(scan_word(name, horizon, max_len));
    }
    for cf in [vec![1], vec![2, 1]] {
        out.push(check(format!("sturmian {cf:?} bursts"), || {
            let x = characteristic_word(SturmianSpec::new(cf.clone())?);
            let r = verify_sturmian_quasiperiods(&x, 100, 8_000)?;
            Ok((
                r.all_checked_covered && r.quasiperiod_lengths.len() >= 5,
                format!(
                    "quasiperiod lengths {:?}, flagged {:?}",
                    r.quasiperiod_lengths, r.flagged
                ),
            ))
        }));
    }
    out.push(check("tower level one", || {
        let tower = high_complexity_word(PhiTable::new(vec![(3, 2)])?, 1, 1 << 20)?;
        let p12 = factors_of(tower.top(), 12).len();
        let covered = covers(&tower.levels[0], &tower.levels[1]);
        Ok((
            p12 >= 4 && covered,
            format!("p_12 = {p12}, 010 covers u_1: {covered}"),
        ))
    }));
    out
}

fn scan_word(name: &str, horizon: usize, max_len: usize) -> Vec<CheckResult> {
    let x = match named(name) {
        Ok(x) => x,
        Err(e) => {
            return vec![CheckResult {
                name: name.into(),
                passed: false,
                detail: e.to_string(),
            }]
        }
    };
    let qps = match quasiperiods_up_to(&x, horizon, max_len) {
        Ok(q) if !q.is_empty() => q,
        Ok(_) => {
            return vec![CheckResult {
                name: format!("{name} quasiperiods"),
                passed: false,
                detail: format!("none up to length {max_len}"),
            }]
        }
        Err(e) => {
            return vec![CheckResult {
                name: format!("{name} quasiperiods"),
                passed: false,
                detail: e.to_string(),
            }]
        }
    };
    let lengths: Vec<usize> = qps.iter().map(|q| q.len()).collect();
    vec![
        check(format!("{name} quadratic bound"), || {
            let rows = quadratic_bound_report(&x, &qps, horizon)?;
            let worst = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
            Ok((
                rows.iter().all(|r| r.within_bound),
                format!("lengths {lengths:?}, largest p/l^2 = {worst:.3}"),
            ))
        }),
        check(format!("{name} deconnect"), || {
            let mut bad = Vec::new();
            for q in &qps {
                let g = build(&x, q.len(), horizon)?;
                if !deconnect_check(&g, std::slice::from_ref(q), 1).holds {
                    bad.push(q.len());
                }
            }
            Ok((
                bad.is_empty(),
                format!("{} orders, violations at {bad:?}", qps.len()),
            ))
        }),
        check(format!("{name} qpzip"), || {
            let q: &FiniteWord = qps.last().unwrap();
            let prefix = x.prefix(horizon)?;
            let e = encode(&prefix, q, x.alphabet().size() as u32)?;
            let ok = decode(&e)? == prefix;
            let c = bit_cost(&e);
            Ok((
                ok && c.token_count as f64 <= c.token_bound,
                format!(
                    "l(q) = {}, {} tokens, {} bits for {} letters",
                    q.len(),
                    c.token_count,
                    c.bits,
                    horizon
                ),
            ))
        }),
    ]
}
