//! `qw`: generate, analyse and export quasiperiodic words.

mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use quasiword::calculus::{derive, high_complexity_word, PhiTable};
use quasiword::complexity::{entropy_estimate, profile};
use quasiword::ergodic::{sandwich_csv, sandwich_report};
use quasiword::factors::language;
use quasiword::qpzip::{bit_cost, decode, encode, Encoded};
use quasiword::quasiperiod::{check_cover, covers, quasiperiods_up_to, Verdict};
use quasiword::rauzy::{build, deconnect_check, eight_shape, special_factors};
use quasiword::stream::DEFAULT_BUDGET;
use quasiword::sturmian::{
    characteristic_word, default_horizon, verify_sturmian_quasiperiods, SturmianSpec,
};
use quasiword::{Alphabet, FiniteWord, QwError, StreamSpec, WordStream};

use output::{emit, json, Format};

#[derive(Parser)]
#[command(name = "qw", version, about = "Quasiperiodic infinite words")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Prefix length at which infinite-word questions are asked.
    #[arg(long, global = true)]
    horizon: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on letters materialized by the top-level word.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a prefix of a word.
    Generate {
        #[command(flatten)]
        word: WordArg,
        #[arg(long, default_value_t = 100)]
        length: usize,
    },
    /// Derivative of a word along a quasiperiod.
    Derive {
        #[command(flatten)]
        word: WordArg,
        #[arg(long)]
        q: String,
    },
    /// Prefix of the integral of a word along a base word.
    Integrate {
        /// Base word `w`; letter i maps to its prefix of length l(w) - i.
        #[arg(long)]
        base: String,
        #[command(flatten)]
        word: WordArg,
        #[arg(long, default_value_t = 100)]
        length: usize,
    },
    /// Levels of the high-complexity tower.
    Tower {
        /// Step table for φ, as KEY:VALUE pairs.
        #[arg(long, default_value = "3:2,81:3")]
        phi: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Also print this many letters of the top level.
        #[arg(long)]
        show: Option<usize>,
    },
    /// Quasiperiod detection.
    Qp {
        #[command(subcommand)]
        action: QpAction,
    },
    /// Factor complexity profile and entropy estimates.
    Complexity {
        #[command(flatten)]
        word: WordArg,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        /// Entropy in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Cylinder frequencies against periodic approximants.
    Freq {
        #[command(flatten)]
        word: WordArg,
        /// Factor to measure; repeatable. Defaults to every letter seen.
        #[arg(long)]
        u: Vec<String>,
        #[arg(long, default_value_t = 50)]
        max_qp: usize,
    },
    /// Rauzy graph of a given order.
    Rauzy {
        #[command(flatten)]
        word: WordArg,
        #[arg(long)]
        n: usize,
        /// Vertex to delete before the acyclicity check; repeatable.
        #[arg(long)]
        remove: Vec<String>,
        #[arg(long, default_value_t = 1)]
        k_prime: usize,
    },
    /// Characteristic Sturmian words.
    Sturmian {
        /// Partial quotients, repeated periodically.
        #[arg(long, value_delimiter = ',', required = true)]
        cf: Vec<u32>,
        /// Check that the left special prefixes at bursts are quasiperiods.
        #[arg(long)]
        verify_qp: bool,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        length: usize,
    },
    /// Quasiperiod-based compression.
    Qpzip {
        #[command(subcommand)]
        action: ZipAction,
    },
    /// Run the built-in invariant checks over the named corpus.
    VerifyAll,
}

#[derive(Args, Clone)]
struct WordArg {
    /// Corpus name, short form (periodic:aba, fixed:010, sturmian:2,1,
    /// random:2:7, literal:abba, file:PATH) or JSON descriptor.
    #[arg(long)]
    word: String,
}

#[derive(Subcommand)]
enum QpAction {
    /// Every prefix quasiperiod up to a length.
    Scan {
        #[command(flatten)]
        word: WordArg,
        #[arg(long, default_value_t = 64)]
        max_qp: usize,
    },
    /// Coverage verdict for one candidate.
    Check {
        #[command(flatten)]
        word: WordArg,
        #[arg(long)]
        q: String,
    },
}

#[derive(Subcommand)]
enum ZipAction {
    /// Write a QPZ1 container (requires --out).
    Encode(ZipArgs),
    /// Decode a container to text.
    Decode {
        #[arg(long)]
        input: PathBuf,
        /// Symbols for rendering letters 0, 1, ..
        #[arg(long)]
        symbols: Option<String>,
    },
    /// Report the bit cost without writing a container.
    Cost(ZipArgs),
}

#[derive(Args)]
struct ZipArgs {
    #[command(flatten)]
    word: WordArg,
    /// Quasiperiod length; defaults to the longest prefix quasiperiod up to --max-qp.
    #[arg(long)]
    q_len: Option<usize>,
    #[arg(long, default_value_t = 64)]
    max_qp: usize,
}

enum Failure {
    Invariant(String),
    Usage(String),
    Budget(String),
}

impl From<QwError> for Failure {
    fn from(e: QwError) -> Self {
        let msg = e.to_string();
        match e {
            QwError::ResourceLimit { .. } => Failure::Budget(msg),
            QwError::CoverageViolation { .. } | QwError::Integrity(_) => Failure::Invariant(msg),
            _ => Failure::Usage(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    format: Option<Format>,
    horizon: Option<usize>,
    out: Option<PathBuf>,
    budget: usize,
}

impl Ctx {
    fn word(&self, arg: &WordArg) -> Result<WordStream, Failure> {
        Ok(StreamSpec::parse(&arg.word)?
            .build()?
            .with_budget(self.budget))
    }

    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn horizon(&self, default: usize) -> usize {
        self.horizon.unwrap_or(default)
    }

    fn emit(&self, text: &str) -> Outcome {
        emit(self.out.as_deref(), text.as_bytes())?;
        Ok(())
    }

    fn reject(&self, format: Format, allowed: &[Format]) -> Outcome {
        if allowed.contains(&format) {
            Ok(())
        } else {
            Err(Failure::Usage(format!(
                "format {format:?} is not available here"
            )))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        format: cli.format,
        horizon: cli.horizon,
        out: cli.out,
        budget: cli.budget,
    };
    match run(&ctx, cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(m)) => {
            eprintln!("qw: invariant failure: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("qw: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("qw: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> Outcome {
    match command {
        Command::Generate { word, length } => generate(ctx, &ctx.word(&word)?, length),
        Command::Derive { word, q } => derive_cmd(ctx, &word, &q),
        Command::Integrate { base, word, length } => {
            let spec = StreamSpec::Integrate {
                word: base,
                of: Box::new(StreamSpec::parse(&word.word)?),
            };
            generate(ctx, &spec.build()?.with_budget(ctx.budget), length)
        }
        Command::Tower { phi, depth, show } => tower(ctx, &phi, depth, show),
        Command::Qp { action } => match action {
            QpAction::Scan { word, max_qp } => qp_scan(ctx, &word, max_qp),
            QpAction::Check { word, q } => qp_check(ctx, &word, &q),
        },
        Command::Complexity { word, n_max, bits } => complexity(ctx, &word, n_max, bits),
        Command::Freq { word, u, max_qp } => freq(ctx, &word, &u, max_qp),
        Command::Rauzy {
            word,
            n,
            remove,
            k_prime,
        } => rauzy(ctx, &word, n, &remove, k_prime),
        Command::Sturmian {
            cf,
            verify_qp,
            n_max,
            length,
        } => sturmian(ctx, cf, verify_qp, n_max, length),
        Command::Qpzip { action } => qpzip(ctx, action),
        Command::VerifyAll => {
            let results = verify::run_all();
            let text = match ctx.format(Format::Text) {
                Format::Json => json(&results),
                _ => results.iter().map(|r| r.line() + "\n").collect(),
            };
            ctx.emit(&text)?;
            match results.iter().filter(|r| !r.passed).count() {
                0 => Ok(()),
                k => Err(Failure::Invariant(format!("{k} check(s) failed"))),
            }
        }
    }
}

#[derive(Serialize)]
struct PrefixOut {
    length: usize,
    prefix: String,
}

fn generate(ctx: &Ctx, x: &WordStream, length: usize) -> Outcome {
    let prefix = x.render_prefix(length)?;
    let format = ctx.format(Format::Text);
    ctx.reject(format, &[Format::Text, Format::Json])?;
    match format {
        Format::Json => ctx.emit(&json(&PrefixOut { length, prefix })),
        _ => ctx.emit(&(prefix + "\n")),
    }
}

#[derive(Serialize)]
struct DeriveOut {
    quasiperiod: String,
    horizon: usize,
    occurrences: usize,
    consumed: usize,
    derivative: String,
}

fn derive_cmd(ctx: &Ctx, word: &WordArg, q: &str) -> Outcome {
    let x = ctx.word(word)?;
    let q = x.alphabet().parse(q)?;
    let horizon = ctx.horizon(1_000);
    let d = derive(&x, &q, horizon)?;
    // digits when l(q) <= 10, comma-separated integers beyond
    let rendered = d.alphabet(q.len()).render(&d.word);
    let format = ctx.format(Format::Text);
    ctx.reject(format, &[Format::Text, Format::Json])?;
    match format {
        Format::Json => ctx.emit(&json(&DeriveOut {
            quasiperiod: x.alphabet().render(&q),
            horizon,
            occurrences: d.occurrences,
            consumed: d.consumed,
            derivative: rendered,
        })),
        _ => ctx.emit(&(rendered + "\n")),
    }
}

fn parse_phi(text: &str) -> Result<PhiTable, Failure> {
    let entries = text
        .split(',')
        .map(|pair| {
            let (k, v) = pair
                .split_once(':')
                .ok_or_else(|| Failure::Usage(format!("φ entry '{pair}' is not KEY:VALUE")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::Usage(format!("bad number '{s}' in φ table")))
            };
            Ok((parse(k)?, parse(v)?))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(PhiTable::new(entries)?)
}

#[derive(Serialize)]
struct TowerOut {
    lengths: Vec<usize>,
    /// Each level is a prefix of the next and covers it.
    nested_and_covered: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    top_prefix: Option<String>,
}

fn tower(ctx: &Ctx, phi: &str, depth: usize, show: Option<usize>) -> Outcome {
    let tower = high_complexity_word(parse_phi(phi)?, depth, ctx.budget)?;
    let ok = tower
        .levels
        .windows(2)
        .all(|w| w[0].is_prefix_of(&w[1]) && covers(&w[0], &w[1]));
    let alphabet = Alphabet::binary();
    let top_prefix = show.map(|n| alphabet.render(&tower.top()[..n.min(tower.top().len())]));
    let out = TowerOut {
        lengths: tower.lengths(),
        nested_and_covered: ok,
        top_prefix,
    };
    let format = ctx.format(Format::Text);
    ctx.reject(format, &[Format::Text, Format::Json])?;
    let text = match format {
        Format::Json => json(&out),
        _ => {
            let mut s: String = out
                .lengths
                .iter()
                .enumerate()
                .map(|(k, l)| format!("u_{k} length {l}\n"))
                .collect();
            s += &format!("nested and covered: {}\n", out.nested_and_covered);
            if let Some(p) = &out.top_prefix {
                s += &format!("{p}\n");
            }
            s
        }
    };
    ctx.emit(&text)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Invariant("tower levels do not nest".into()))
    }
}

#[derive(Serialize)]
struct QpOut {
    quasiperiod: String,
    length: usize,
    occurrences: usize,
    max_gap: usize,
    #[serde(flatten)]
    verdict: Verdict,
}

fn qp_entry(x: &WordStream, q: &[u32], horizon: usize) -> Result<QpOut, Failure> {
    let report = check_cover(q, x, horizon)?;
    Ok(QpOut {
        quasiperiod: x.alphabet().render(q),
        length: q.len(),
        occurrences: report.positions.len(),
        max_gap: report
            .positions
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0),
        verdict: report.verdict,
    })
}

fn qp_lines(entries: &[QpOut]) -> String {
    entries
        .iter()
        .map(|e| {
            let verdict = match e.verdict {
                Verdict::Covered => "covered".to_string(),
                Verdict::MissingInitialOccurrence => "missing initial occurrence".to_string(),
                Verdict::GapAt { from, .. } => format!("gap after {from}"),
            };
            format!("{} {} {} {}\n", e.length, e.quasiperiod, e.max_gap, verdict)
        })
        .collect()
}

fn qp_scan(ctx: &Ctx, word: &WordArg, max_qp: usize) -> Outcome {
    let x = ctx.word(word)?;
    let horizon = ctx.horizon(1_000);
    let entries = quasiperiods_up_to(&x, horizon, max_qp)?
        .iter()
        .map(|q| qp_entry(&x, q, horizon))
        .collect::<Result<Vec<_>, _>>()?;
    let format = ctx.format(Format::Json);
    ctx.reject(format, &[Format::Text, Format::Json])?;
    match format {
        Format::Json => ctx.emit(&json(&entries)),
        _ => ctx.emit(&qp_lines(&entries)),
    }
}

fn qp_check(ctx: &Ctx, word: &WordArg, q: &str) -> Outcome {
    let x = ctx.word(word)?;
    let q = x.alphabet().parse(q)?;
    let entry = qp_entry(&x, &q, ctx.horizon(1_000))?;
    let covered = entry.verdict == Verdict::Covered;
    let format = ctx.format(Format::Json);
    ctx.reject(format, &[Format::Text, Format::Json])?;
    match format {
        Format::Json => ctx.emit(&json(&entry))?,
        _ => ctx.emit(&qp_lines(std::slice::from_ref(&entry)))?,
    }
    if covered {
        Ok(())
    } else {
        Err(Failure::Invariant(format!(
            "{} does not cover the prefix",
            entry.quasiperiod
        )))
    }
}

#[derive(Serialize)]
struct ComplexityOut {
    horizon: usize,
    values: Vec<usize>,
    saturated: Vec<bool>,
    entropy: Vec<f64>,
    unit: &'static str,
}

fn complexity(ctx: &Ctx, word: &WordArg, n_max: usize, bits: bool) -> Outcome {
    let x = ctx.word(word)?;
    let p = profile(&x, n_max, ctx.horizon(default_horizon(n_max)))?;
    let format = ctx.format(Format::Csv);
    ctx.reject(format, &[Format::Text, Format::Csv, Format::Json])?;
    match format {
        Format::Json => {
            let scale = if bits { std::f64::consts::LN_2 } else { 1.0 };
            let entropy = entropy_estimate(&p)
                .into_iter()
                .map(|(_, e)| e / scale)
                .collect();
            ctx.emit(&json(&ComplexityOut {
                horizon: p.horizon,
                values: p.values,
                saturated: p.saturated,
                entropy,
                unit: if bits { "bits" } else { "nats" },
            }))
        }
        _ => ctx.emit(&p.to_csv(bits)),
    }
}

fn freq(ctx: &Ctx, word: &WordArg, us: &[String], max_qp: usize) -> Outcome {
    let x = ctx.word(word)?;
    let horizon = ctx.horizon(100_000);
    let factors: Vec<FiniteWord> = if us.is_empty() {
        language(&x, 1, horizon)?.into_iter().collect()
    } else {
        us.iter()
            .map(|u| x.alphabet().parse(u))
            .collect::<Result<_, _>>()?
    };
    let qps = quasiperiods_up_to(&x, horizon, max_qp)?;
    if qps.is_empty() {
        return Err(Failure::Invariant(format!(
            "no quasiperiod up to length {max_qp}"
        )));
    }
    let mut rows = Vec::new();
    for u in &factors {
        rows.extend(sandwich_report(u, &x, &qps, horizon)?);
    }
    let format = ctx.format(Format::Csv);
    ctx.reject(format, &[Format::Text, Format::Csv, Format::Json])?;
    match format {
        Format::Json => ctx.emit(&json(&rows))?,
        _ => ctx.emit(&sandwich_csv(&rows, x.alphabet()))?,
    }
    match rows.iter().filter(|r| !r.passed()).count() {
        0 => Ok(()),
        k => Err(Failure::Invariant(format!(
            "{k} frequency bound(s) violated"
        ))),
    }
}

#[derive(Serialize)]
struct RauzyOut {
    order: usize,
    horizon: usize,
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    left_special: Vec<String>,
    right_special: Vec<String>,
    strongly_connected: bool,
    /// Loop lengths when eight shaped around the prefix of length n.
    eight_shape: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deconnect: Option<quasiword::rauzy::DeconnectReport>,
}

fn rauzy(ctx: &Ctx, word: &WordArg, n: usize, remove: &[String], k_prime: usize) -> Outcome {
    let x = ctx.word(word)?;
    let horizon = ctx.horizon(default_horizon(n + 1));
    let g = build(&x, n, horizon)?;
    let a = x.alphabet();
    let removed: Vec<FiniteWord> = remove
        .iter()
        .map(|r| a.parse(r))
        .collect::<Result<_, _>>()?;
    for r in &removed {
        if g.vertex(r).is_none() {
            return Err(Failure::Usage(format!(
                "'{}' is not a vertex of G_{n}",
                a.render(r)
            )));
        }
    }
    let report = (!removed.is_empty()).then(|| deconnect_check(&g, &removed, k_prime));
    let format = ctx.format(Format::Dot);
    ctx.reject(format, &[Format::Dot, Format::Json, Format::Text])?;
    match format {
        Format::Dot => ctx.emit(&g.to_dot(a, &removed))?,
        _ => {
            let special = special_factors(&g);
            let render = |v: &[FiniteWord]| v.iter().map(|w| a.render(w)).collect::<Vec<_>>();
            let eight = eight_shape(&g, &x.prefix(n)?).ok().and_then(|s| s.loops);
            let out = RauzyOut {
                order: n,
                horizon,
                vertices: render(&g.vertices),
                edges: g
                    .edges
                    .iter()
                    .map(|&(f, t)| (a.render(&g.vertices[f]), a.render(&g.vertices[t])))
                    .collect(),
                left_special: render(&special.left),
                right_special: render(&special.right),
                strongly_connected: g.is_strongly_connected(),
                eight_shape: eight,
                deconnect: report.clone(),
            };
            if format == Format::Json {
                ctx.emit(&json(&out))?
            } else {
                let mut s = format!(
                    "order {n}: {} vertices, {} edges, strongly connected {}\n",
                    g.vertex_count(),
                    g.edge_count(),
                    out.strongly_connected
                );
                s += &format!("left special: {}\n", out.left_special.join(" "));
                s += &format!("right special: {}\n", out.right_special.join(" "));
                if let Some(r) = &report {
                    s += &format!(
                        "after removal: acyclic {}, longest path {:?}, bound {}, holds {}\n",
                        r.acyclic, r.longest_path, r.bound, r.holds
                    );
                }
                ctx.emit(&s)?
            }
        }
    }
    match report {
        Some(r) if !r.holds => Err(Failure::Invariant(format!(
            "G_{n} minus the removed vertices is not {k_prime}-deconnected"
        ))),
        _ => Ok(()),
    }
}

fn sturmian(ctx: &Ctx, cf: Vec<u32>, verify_qp: bool, n_max: usize, length: usize) -> Outcome {
    let x = characteristic_word(SturmianSpec::new(cf)?).with_budget(ctx.budget);
    if !verify_qp {
        return generate(ctx, &x, length);
    }
    let report = verify_sturmian_quasiperiods(&x, n_max, ctx.horizon(default_horizon(n_max)))?;
    let format = ctx.format(Format::Json);
    ctx.reject(format, &[Format::Text, Format::Json])?;
    match format {
        Format::Json => ctx.emit(&json(&report))?,
        _ => {
            let mut s: String = report
                .bursts
                .iter()
                .map(|b| {
                    let verdict = match b.covered {
                        Some(true) => "covered",
                        Some(false) => "NOT covered",
                        None => "flagged",
                    };
                    format!("burst {} loops {:?} {}\n", b.order, b.loops, verdict)
                })
                .collect();
            s += &format!("quasiperiod lengths: {:?}\n", report.quasiperiod_lengths);
            ctx.emit(&s)?
        }
    }
    if report.all_checked_covered {
        Ok(())
    } else {
        Err(Failure::Invariant(
            "a qualifying burst prefix is not a quasiperiod".into(),
        ))
    }
}

fn zip_input(ctx: &Ctx, args: &ZipArgs) -> Result<Encoded, Failure> {
    let x = ctx.word(&args.word)?;
    let n = ctx.horizon(10_000);
    let q_len = match args.q_len {
        Some(l) => l,
        None => quasiperiods_up_to(&x, n, args.max_qp)?
            .last()
            .map(|q| q.len())
            .ok_or_else(|| {
                Failure::Invariant(format!("no quasiperiod up to length {}", args.max_qp))
            })?,
    };
    let prefix = x.prefix(n)?;
    let q = x.prefix(q_len)?;
    Ok(encode(&prefix, &q, x.alphabet().size() as u32)?)
}

fn qpzip(ctx: &Ctx, action: ZipAction) -> Outcome {
    match action {
        ZipAction::Encode(args) => {
            let Some(out) = ctx.out.as_deref() else {
                return Err(Failure::Usage("qpzip encode needs --out".into()));
            };
            let e = zip_input(ctx, &args)?;
            emit(Some(out), &e.to_bytes())?;
            Ok(())
        }
        ZipAction::Decode { input, symbols } => {
            let bytes = std::fs::read(&input)?;
            let e = Encoded::from_bytes(&bytes)?;
            let w = decode(&e)?;
            let alphabet = match symbols {
                Some(s) => Alphabet::with_symbols(&s)?,
                None => Alphabet::digits(e.alphabet_size as usize),
            };
            alphabet.check(&w)?;
            ctx.emit(&(alphabet.render(&w) + "\n"))
        }
        ZipAction::Cost(args) => {
            let e = zip_input(ctx, &args)?;
            let cost = bit_cost(&e);
            ctx.emit(&json(&cost))?;
            if cost.token_count as f64 > cost.token_bound {
                return Err(Failure::Invariant("token bound exceeded".into()));
            }
            Ok(())
        }
    }
}
