//! Command-line front end. Every subcommand builds a [`Report`] (a JSON
//! envelope plus a text rendering); the exit code is 0 when every check in
//! the report passed, 1 when one failed and 2 on usage or input errors.

use std::ffi::OsString;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::abgraph::{read_catalog, write_catalog, CatalogError};
use crate::perm::{parse_generator_file, Perm, PermError, Word};
use crate::reducer::{
    balanced_alternating_words, canonical_representative, check_generates, run_reduction, score_words, top_margin,
    verify_lemma5, word_search, ReduceError, ReductionConfig, UniformConditional, WordSearchConfig,
};
use crate::rng;
use crate::spectrum::{
    aggregate_entries, aggregate_poly, iterate_map, monotone_scan, reference_polys, sign_changes, solve_threshold,
    DeltaPoly, SpectrumError,
};
use crate::treenum::{enumerate_admitting_trees, CycleRule, EnumConstraints, EnumError};
use crate::verify;
use crate::walks::{exact_walk_distribution, exact_walk_matrix, mixing_length, realize_lazy_walk, WalkError, WalkSpec};

pub const TOOL: &str = "symdiam";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(name = TOOL, version, about = "Fixed points of commutator words, alpha-beta tree catalogs and support reduction")]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Print the JSON report on stdout instead of the text rendering.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the trees admitted by a word and write the catalog JSON.
    Trees(TreesArgs),
    /// Aggregate a catalog into a polynomial and compare it with f, h2 or h3.
    Poly(PolyArgs),
    /// Threshold, contraction trace and monotonicity scan of a reference polynomial.
    Threshold(ThresholdArgs),
    /// Mixing-length bound and exact or sampled walk distribution.
    Walk(WalkArgs),
    /// Run the support-reduction pipeline on an element of a generating set.
    Reduce(ReduceArgs),
    /// Check the four anchor recipes for a 7-cycle.
    Lemma5(OutArgs),
    /// Rank balanced alternating words by their short-cycle counts.
    Wordsearch(WordsearchArgs),
    /// Run the whole acceptance suite.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct OutArgs {
    /// Write the JSON report here.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct TreesArgs {
    #[arg(long, default_value = "AbaBABab")]
    pub word: String,
    #[arg(long, default_value_t = 60)]
    pub power: u64,
    #[arg(long, default_value_t = 16)]
    pub kappa: usize,
    /// Most vertices on a monochromatic path.
    #[arg(long, default_value_t = 4)]
    pub max_path: usize,
    /// `none` or the exact length of every monochromatic cycle.
    #[arg(long, default_value = "none")]
    pub cycle_mode: String,
    /// Keep only trees whose least admitted power is at most this.
    #[arg(long)]
    pub power_limit: Option<u64>,
    /// Catalog file; stdout when absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    F,
    H2,
    H3,
}

impl Reference {
    fn poly(self) -> DeltaPoly {
        let r = reference_polys();
        match self {
            Reference::F => r.f,
            Reference::H2 => r.h2,
            Reference::H3 => r.h3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Reference::F => "f",
            Reference::H2 => "h2",
            Reference::H3 => "h3",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct PolyArgs {
    /// Catalog JSON; stdin when absent or `-`.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub against: Option<Reference>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ThresholdArgs {
    #[arg(long, value_enum, default_value = "f")]
    pub poly: Reference,
    #[arg(long, default_value_t = 0.999)]
    pub scale: f64,
    #[arg(long, default_value_t = 0.63)]
    pub start: f64,
    #[arg(long, default_value_t = 9)]
    pub steps: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub scan_step: f64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct WalkArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Walk length; the mixing-length bound when absent.
    #[arg(long)]
    pub len: Option<u64>,
    #[arg(long)]
    pub seed: u64,
    /// Generator file; `(1,2)` and `(1,...,n)` when absent.
    #[arg(long)]
    pub gens: Option<PathBuf>,
    /// Sampled walks in addition to the exact law.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReduceArgs {
    #[arg(long)]
    pub gens: PathBuf,
    /// 1-based index of the starting element in the generator file.
    #[arg(long, default_value_t = 1)]
    pub start_elt: usize,
    #[arg(long, default_value_t = 1.0 / 3.0 - 0.01)]
    pub target: f64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 12)]
    pub max_steps: usize,
    /// Also classify the generated group (slow for large n).
    #[arg(long)]
    pub check_gens: bool,
    #[arg(long)]
    #[serde(skip)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct WordsearchArgs {
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.6)]
    pub delta: f64,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    /// Longest word length (a multiple of 4).
    #[arg(long, default_value_t = 8)]
    pub max_len: usize,
    /// Score only words of exactly `max_len` letters.
    #[arg(long)]
    pub exact_len: bool,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// The JSON envelope shared by all subcommands.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub seed: Option<u64>,
    pub passed: bool,
    pub body: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// A finished command: its report, where to write it, and the text for stdout.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub text: String,
    pub out: Option<PathBuf>,
}

fn outcome<C: Serialize>(
    command: &'static str,
    config: &C,
    seed: Option<u64>,
    passed: bool,
    body: Value,
    text: String,
    out: &Option<PathBuf>,
) -> Outcome {
    let config = serde_json::to_value(config).expect("configs serialize");
    Outcome { report: Report { tool: TOOL, version: VERSION, command, config, seed, passed, body }, text, out: out.clone() }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn cmd_trees(a: &TreesArgs) -> Result<Outcome, CliError> {
    let word: Word = a.word.parse()?;
    let cycles: CycleRule = a.cycle_mode.parse()?;
    let mut c = EnumConstraints::new(a.kappa, a.max_path, cycles, a.power);
    if let Some(l) = a.power_limit {
        c = c.with_power_limit(l);
    }
    let records = enumerate_admitting_trees(&word, &c)?;
    let entries: Vec<_> = records.iter().map(|r| r.to_entry()).collect();
    let catalog = write_catalog(&entries);
    let poly = aggregate_poly(&records);
    let text = match &a.out {
        Some(path) => {
            write_file(path, &catalog)?;
            format!("{} trees written to {}\npolynomial: {poly}\n", records.len(), path.display())
        }
        None => catalog,
    };
    let body = json!({ "trees": records.len(), "polynomial": poly.to_string() });
    Ok(outcome("trees", a, None, true, body, text, &None))
}

fn cmd_poly(a: &PolyArgs) -> Result<Outcome, CliError> {
    let text = match &a.catalog {
        Some(p) if p.as_os_str() != "-" => read_file(p)?,
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
            s
        }
    };
    let entries = read_catalog(&text)?;
    for (i, e) in entries.iter().enumerate() {
        e.graph(i)?;
    }
    let poly = aggregate_entries(&entries);
    let mut out = format!("{} trees\npolynomial: {poly}\n", entries.len());
    let mut body = json!({ "trees": entries.len(), "polynomial": poly.to_json()? });
    let passed = match a.against {
        None => true,
        Some(r) => {
            let want = r.poly();
            let (surplus, deficit) = poly.diff(&want);
            let equal = poly == want;
            if equal {
                out.push_str("EXACT MATCH\n");
            } else {
                out.push_str(&format!("DIFFERS from {}\nsurplus: {surplus}\ndeficit: {deficit}\n", r.name()));
            }
            body["against"] = json!(r.name());
            body["equal"] = json!(equal);
            body["surplus"] = json!(surplus.to_string());
            body["deficit"] = json!(deficit.to_string());
            equal
        }
    };
    Ok(outcome("poly", a, None, passed, body, out, &a.out))
}

fn cmd_threshold(a: &ThresholdArgs) -> Result<Outcome, CliError> {
    let poly = a.poly.poly();
    let root = solve_threshold(&poly, a.scale);
    let trace = iterate_map(&poly, a.scale, a.start, a.steps)?;
    let monotone = monotone_scan(&poly, a.scale, a.scan_step)?;
    let crossings = sign_changes(&poly, a.scale, 0.0, 1.0, 1e-4);
    let last = *trace.last().expect("trace holds the start");
    let contracts = a.steps == 0 || last < a.start;
    let mut text = String::new();
    match &root {
        Ok(x) => text.push_str(&format!("threshold root: {x:.9}\n")),
        Err(e) => text.push_str(&format!("threshold root: none ({e})\n")),
    }
    for c in &crossings {
        text.push_str(&format!(
            "sign change in [{:.4}, {:.4}] ({})\n",
            c.lo,
            c.hi,
            if c.rising { "rising" } else { "falling" }
        ));
    }
    text.push_str("trace:");
    for x in &trace {
        text.push_str(&format!(" {x:.6}"));
    }
    text.push_str(&format!("\ntrace contracts: {}\nmonotone: {}\n", mark(contracts), mark(monotone)));
    let passed = root.is_ok() && contracts && monotone;
    let body = json!({
        "root": root.as_ref().ok(),
        "root_error": root.as_ref().err().map(|e| e.to_string()),
        "sign_changes": crossings.iter().map(|c| json!({"lo": c.lo, "hi": c.hi, "rising": c.rising})).collect::<Vec<_>>(),
        "trace": trace,
        "trace_contracts": contracts,
        "monotone": monotone,
    });
    Ok(outcome("threshold", a, None, passed, body, text, &a.out))
}

fn default_walk_gens(n: usize) -> Result<Vec<Perm>, CliError> {
    let cycle = format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(","));
    Ok(vec![Perm::parse_cycles(n, "(1,2)")?, Perm::parse_cycles(n, &cycle)?])
}

fn tv_and_deviation(p: &[f64]) -> (f64, f64) {
    let u = 1.0 / p.len() as f64;
    let tv = 0.5 * p.iter().map(|x| (x - u).abs()).sum::<f64>();
    let dev = p.iter().map(|x| (x / u - 1.0).abs()).fold(0.0, f64::max);
    (tv, dev)
}

fn cmd_walk(a: &WalkArgs) -> Result<Outcome, CliError> {
    let bound = mixing_length(a.n, a.k, a.eps)?;
    let n = usize::try_from(a.n).map_err(|_| CliError::Usage(format!("n = {} too large", a.n)))?;
    let gens = match &a.gens {
        Some(p) => parse_generator_file(&read_file(p)?)?,
        None => default_walk_gens(n)?,
    };
    if gens.iter().any(|g| g.n() != n) {
        return Err(CliError::Usage(format!("generator file is not on {n} points")));
    }
    let length = match a.len {
        Some(l) => l,
        None => u64::try_from(&bound)
            .map_err(|_| CliError::Usage(format!("mixing length {bound} does not fit a walk; pass --len")))?,
    };
    let spec = WalkSpec::new(gens, a.k as usize, length)?;
    let start: Vec<u32> = (1..=a.k).collect();
    let (scope, rows) = match exact_walk_matrix(&spec) {
        Ok(m) => ("all starts", m),
        Err(WalkError::StateSpace(_)) => ("start tuple (1..k)", vec![exact_walk_distribution(&spec, &start)?]),
        Err(e) => return Err(e.into()),
    };
    let (mut tv, mut dev) = (0.0f64, 0.0f64);
    for r in &rows {
        let (t, d) = tv_and_deviation(r);
        tv = tv.max(t);
        dev = dev.max(d);
    }
    let within = dev <= a.eps;
    let mut text = format!(
        "mixing length bound: {bound}\nwalk length: {length}\nexact law over {scope}: max TV {tv:.3e}, max relative deviation {dev:.3e} ({} eps = {})\n",
        if within { "within" } else { "NOT within" },
        a.eps
    );
    let mut body = json!({
        "mixing_length": bound.to_string(),
        "length": length,
        "states": rows[0].len(),
        "exact_scope": scope,
        "max_tv": tv,
        "max_relative_deviation": dev,
        "within_eps": within,
    });
    if a.samples > 0 {
        let counts = sampled_walk_counts(&spec, &start, a.samples, a.seed)?;
        let m = rows[0].len() as f64;
        let emp_tv = 0.5
            * (counts.values().map(|&c| (c as f64 / a.samples as f64 - 1.0 / m).abs()).sum::<f64>()
                + (m - counts.len() as f64) / m);
        text.push_str(&format!("{} sampled walks: empirical TV {emp_tv:.3e}\n", a.samples));
        body["samples"] = json!({
            "count": a.samples,
            "empirical_tv": emp_tv,
            "end_tuples": counts.iter().map(|(t, c)| json!({"tuple": t, "count": c})).collect::<Vec<_>>(),
        });
    }
    Ok(outcome("walk", a, Some(a.seed), within, body, text, &a.out))
}

fn sampled_walk_counts(
    spec: &WalkSpec,
    start: &[u32],
    samples: usize,
    seed: u64,
) -> Result<std::collections::BTreeMap<Vec<u32>, usize>, CliError> {
    use rayon::prelude::*;
    let ends: Vec<Vec<u32>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let (r, _) = realize_lazy_walk(spec, &mut rng::child(seed, i))?;
            Ok(start.iter().map(|&x| r.image(x)).collect())
        })
        .collect::<Result<_, WalkError>>()?;
    let mut counts = std::collections::BTreeMap::new();
    for e in ends {
        *counts.entry(e).or_insert(0usize) += 1;
    }
    Ok(counts)
}

fn cmd_reduce(a: &ReduceArgs) -> Result<Outcome, CliError> {
    let gens = parse_generator_file(&read_file(&a.gens)?)?;
    if a.start_elt == 0 || a.start_elt > gens.len() {
        return Err(CliError::Usage(format!("--start-elt {} outside 1..={}", a.start_elt, gens.len())));
    }
    let a0 = gens[a.start_elt - 1].clone();
    let generation = if a.check_gens {
        Some(check_generates(&gens, false, rng::derive(a.seed, rng::tag("generation")))?)
    } else {
        None
    };
    let cfg = ReductionConfig { target: a.target, trials: a.trials, max_steps: a.max_steps, seed: a.seed };
    let run = run_reduction(&gens, &a0, &cfg, &UniformConditional)?;
    let replays = run.replays();
    let passed = run.reached() && replays;
    let mut text = format!("n = {}, generators: {}", run.n, gens.len());
    if let Some(g) = &generation {
        let digits = g.order.to_str_radix(10).len();
        text.push_str(&format!(" (generate {:?}, order has {digits} digits)", g.class));
    }
    text.push_str(&format!("\nstart support {} ({:.4})\n", a0.support_size(), run.delta_trace[0]));
    for s in &run.steps {
        text.push_str(&format!(
            "step {:>2} {:<12} power {:>4}: support {} -> {} -> {}, fixed {}, 7-cycle {}{}\n",
            s.index,
            format!("{:?}", s.case),
            s.power,
            s.support_before,
            s.support_powered,
            s.support_after,
            s.fixed_after,
            s.seven_cycle,
            if s.degenerate { " (degenerate)" } else { "" }
        ));
    }
    text.push_str(&format!(
        "status: {:?}\nfinal support {} ({:.4}), ledger exponent n^{:.1}, replays: {}\n",
        run.status,
        run.final_support,
        run.delta_trace.last().copied().unwrap_or(0.0),
        run.ledger_exponent,
        mark(replays)
    ));
    let body = json!({
        "generation": generation,
        "start": a0.to_string(),
        "reduction": run,
        "replays": replays,
        "final_element": run.a_final.to_string(),
    });
    Ok(outcome("reduce", a, Some(a.seed), passed, body, text, &a.report))
}

fn cmd_lemma5(a: &OutArgs) -> Result<Outcome, CliError> {
    let r = verify_lemma5();
    let mut text = String::new();
    for c in &r.cases {
        text.push_str(&format!(
            "{:<24} {} 7-cycle {}\n",
            c.case,
            if c.passed { "PASS" } else { "FAIL" },
            c.seven_cycle.as_ref().map_or("-".to_string(), |v| format!("{v:?}"))
        ));
    }
    let body = serde_json::to_value(&r).expect("serializable");
    Ok(outcome("lemma5", a, None, r.passed, body, text, &a.out))
}

fn cmd_wordsearch(a: &WordsearchArgs) -> Result<Outcome, CliError> {
    let cfg = WordSearchConfig { n: a.n, delta: a.delta, samples: a.samples, seed: a.seed };
    let scores = if a.exact_len {
        if a.max_len % 4 != 0 || a.max_len == 0 || a.max_len > 20 {
            return Err(CliError::Usage(format!("--max-len {} must be a multiple of 4 in 4..=20", a.max_len)));
        }
        score_words(&balanced_alternating_words(a.max_len), &cfg)?
    } else {
        word_search(a.max_len, &cfg)?
    };
    let w0_class = canonical_representative(&Word::w0());
    let top_is_w0 = scores.first().is_some_and(|s| s.word == w0_class);
    let margin = top_margin(&scores);
    let has_w0 = a.max_len >= 8;
    let passed = !has_w0 || (top_is_w0 && margin.is_some_and(|m| m >= 2.0));
    let mut text = String::from("rank class       size  mean       std.err\n");
    for (i, s) in scores.iter().enumerate() {
        text.push_str(&format!(
            "{:>4} {:<12} {:>4}  {:<10.3} {:.3}{}\n",
            i + 1,
            s.word,
            s.class_size,
            s.mean,
            s.std_err,
            if s.word == w0_class { "  <- w0" } else { "" }
        ));
    }
    if let Some(m) = margin {
        text.push_str(&format!("top margin: {m:.2} standard errors\n"));
    }
    let body = json!({ "w0_class": w0_class, "top_is_w0": top_is_w0, "margin": margin, "ranking": scores });
    Ok(outcome("wordsearch", a, Some(a.seed), passed, body, text, &a.out))
}

fn cmd_verify_all(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let suite = verify::verify_all(a.seed);
    let mut text: String = suite.criteria.iter().map(|c| c.line() + "\n").collect();
    text.push_str(&format!("{} passed, {} failed\n", suite.passed, suite.failed));
    let passed = suite.failed == 0;
    let body = serde_json::to_value(&suite).expect("serializable");
    Ok(outcome("verify-all", a, Some(a.seed), passed, body, text, &a.out))
}

/// Runs one parsed command on a pool of `cli.workers` threads.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    if cli.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Trees(a) => cmd_trees(a),
        Command::Poly(a) => cmd_poly(a),
        Command::Threshold(a) => cmd_threshold(a),
        Command::Walk(a) => cmd_walk(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Lemma5(a) => cmd_lemma5(a),
        Command::Wordsearch(a) => cmd_wordsearch(a),
        Command::VerifyAll(a) => cmd_verify_all(a),
    })
}

/// Parses `args`, runs the command, writes outputs and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|o| {
        if let Some(path) = &o.out {
            write_file(path, &o.report.to_json())?;
        }
        Ok(o)
    });
    match result {
        Ok(o) => {
            if cli.json {
                print!("{}", o.report.to_json());
            } else {
                print!("{}", o.text);
            }
            if o.report.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
