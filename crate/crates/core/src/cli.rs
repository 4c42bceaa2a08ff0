//! Command line front end.
//!
//! Exit codes: 0 affirmative, 1 negative (certificate emitted), 2 budget ran
//! out, 3 bad input. `--format json` is the machine contract; text output is
//! for people.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{cache_key, Cache, CacheRecord};
use crate::coloring::{generate, Coloring, GammaSpec, GenKind};
use crate::density::{
    bound_ks_exponent, bound_psrt_density_exponent, bound_psrt_exponent, find_m_dense_subset, h_chain, is_m_dense,
    DenseSubset, DensityOutcome, DensityParams,
};
use crate::error::{Error, Result};
use crate::extract::{
    extract_homogeneous_rt22, extract_pseudo_homogeneous, extract_transitive, ExtractionReport, Rt22Params,
    TransitiveParams,
};
use crate::finset::FinSet;
use crate::gamma::{is_large_gamma, threshold, GammaOutcome, SearchConfig, Stats, ThresholdMemo};
use crate::grouping::{check_grouping, fgp_check, find_grouping_with, FgpOutcome, GroupingOptions, GroupingSearch, GroupingWitness, LargenessNotion};
use crate::largeness::{extract_large_subset, is_large, is_large_star, minimal_large_within, residual, MINIMAL_LARGE_CAP};
use crate::ordinal::Ordinal;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "largeness", version, about = "Ordinal largeness, Ramsey-type largeness certificates, groupings and density")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for every generator.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Node budget for searches.
    #[arg(long, global = true, default_value_t = 2_000_000_000)]
    pub budget: u64,
    /// Worker threads for coloring searches.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// JSONL cache of decided results.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Recompute cached results and fail if they differ.
    #[arg(long, global = true)]
    pub refresh: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ordinal utilities.
    #[command(subcommand)]
    Ord(OrdCmd),
    /// α-largeness of finite sets.
    #[command(subcommand)]
    Large(LargeCmd),
    /// α-largeness relative to RT / psRT / EM.
    #[command(subcommand)]
    Gamma(GammaCmd),
    /// Groupings and the finite grouping principle.
    #[command(subcommand)]
    Grouping(GroupingCmd),
    /// Witness extraction pipelines.
    #[command(subcommand)]
    Extract(ExtractCmd),
    /// m-density.
    #[command(subcommand)]
    Dense(DenseCmd),
    /// Exponent bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Test-case generators.
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Debug, Args)]
pub struct SetArgs {
    /// A set like "[2,3,4]".
    #[arg(long, conflicts_with = "interval")]
    pub set: Option<FinSet>,
    /// Closed interval LO HI.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    pub interval: Option<Vec<u64>>,
}

impl SetArgs {
    fn get(&self) -> Result<FinSet> {
        match (&self.set, &self.interval) {
            (Some(s), _) => Ok(s.clone()),
            (None, Some(iv)) if iv[0] <= iv[1] => Ok(FinSet::interval(iv[0], iv[1])),
            (None, Some(iv)) => Err(Error::InvalidSet(format!("empty interval {} {}", iv[0], iv[1]))),
            (None, None) => Err(Error::Missing("--set or --interval".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenName {
    Uniform,
    Constant,
    Linear,
}

#[derive(Debug, Args)]
pub struct ColoringArgs {
    /// JSON coloring file (as written by `gen coloring`).
    #[arg(long, conflicts_with = "gen")]
    pub coloring: Option<PathBuf>,
    /// Generate a 2-coloring of pairs instead (uses --seed).
    #[arg(long, value_enum, default_value = "uniform")]
    pub gen: GenName,
}

impl ColoringArgs {
    fn get(&self, max: u64, seed: u64) -> Result<Coloring> {
        if let Some(p) = &self.coloring {
            let text = std::fs::read_to_string(p)?;
            return Ok(serde_json::from_str(&text)?);
        }
        let kind = match self.gen {
            GenName::Uniform => GenKind::Uniform { n: 2, k: 2 },
            GenName::Constant => GenKind::Constant { n: 2, k: 2, c: 0 },
            GenName::Linear => GenKind::LinearOrder { order: None },
        };
        generate(&kind, max, seed)
    }
}

#[derive(Debug, Subcommand)]
pub enum OrdCmd {
    /// α[m].
    Fund {
        #[arg(long)]
        alpha: Ordinal,
        #[arg(long)]
        m: u64,
    },
    /// Compare two ordinals.
    Cmp { a: Ordinal, b: Ordinal },
    /// Parse and print in normal form.
    Parse { text: String },
}

#[derive(Debug, Subcommand)]
pub enum LargeCmd {
    /// Is the set α-large (or α-large* with --star)?
    Check {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        alpha: Ordinal,
        #[arg(long)]
        star: bool,
    },
    /// Least α-large interval starting at --start.
    Minimal {
        #[arg(long)]
        start: u64,
        #[arg(long)]
        alpha: Ordinal,
        #[arg(long, default_value_t = MINIMAL_LARGE_CAP)]
        max_len: u64,
    },
    /// Greedy α-large subset of a pool.
    Extract {
        #[arg(long)]
        pool: FinSet,
        #[arg(long)]
        alpha: Ordinal,
    },
}

#[derive(Debug, Subcommand)]
pub enum GammaCmd {
    /// Certified α-largeness(Γ) of a set.
    Check {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        alpha: Ordinal,
        /// rt:N:K, psrt:K or em.
        #[arg(long)]
        gamma: GammaSpec,
        /// Positive witnesses kept in the certificate.
        #[arg(long, default_value_t = 64)]
        witness_cap: usize,
    },
    /// Least N with [start, N] α-large(Γ).
    Threshold {
        #[arg(long)]
        start: u64,
        #[arg(long)]
        alpha: Ordinal,
        #[arg(long)]
        gamma: GammaSpec,
        #[arg(long, default_value_t = 64)]
        max_n: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GroupingCmd {
    /// First (L1, L2)-grouping of a coloring inside a set.
    Find {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        coloring: ColoringArgs,
        #[arg(long)]
        l1: LargenessNotion,
        #[arg(long)]
        l2: LargenessNotion,
        #[arg(long)]
        intervals_only: bool,
    },
    /// Check a grouping witness (JSON file) against a coloring.
    Verify {
        #[arg(long)]
        witness: PathBuf,
        #[command(flatten)]
        coloring: ColoringArgs,
        #[arg(long)]
        l1: LargenessNotion,
        #[arg(long)]
        l2: LargenessNotion,
    },
    /// Does every k-coloring of the set admit a grouping?
    Fgp {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        l1: LargenessNotion,
        #[arg(long)]
        l2: LargenessNotion,
        #[arg(long, default_value_t = 2)]
        k: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExtractCmd {
    /// Pseudo-homogeneous set.
    Psrt {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        coloring: ColoringArgs,
        /// Level of the refined coloring (2k+2 colors).
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Largeness of the result (default ω^k).
        #[arg(long)]
        target: Option<Ordinal>,
    },
    /// Transitive subtournament.
    Em {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        coloring: ColoringArgs,
        #[command(flatten)]
        params: TransitiveArgs,
    },
    /// Homogeneous set for a 2-coloring of pairs.
    Rt22 {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        coloring: ColoringArgs,
        #[command(flatten)]
        params: TransitiveArgs,
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Largeness of the homogeneous set.
        #[arg(long, default_value = "2")]
        homogeneous_target: Ordinal,
    },
}

#[derive(Debug, Args)]
pub struct TransitiveArgs {
    /// Comma-separated ordinals: base largeness, then block largeness per depth.
    #[arg(long, value_delimiter = ',')]
    pub level_map: Option<Vec<Ordinal>>,
    /// Recursion depth for the default level map.
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    #[arg(long, default_value = "card:2")]
    pub l2: LargenessNotion,
    #[arg(long, default_value = "2")]
    pub tilde_alpha: Ordinal,
    /// Largeness checked on the transitive set (default: first level).
    #[arg(long)]
    pub target: Option<Ordinal>,
}

impl TransitiveArgs {
    fn params(&self, size: usize) -> TransitiveParams {
        let mut p = TransitiveParams::demo(self.depth, size);
        if let Some(lm) = &self.level_map {
            p.level_map = lm.clone();
        }
        p.l2 = self.l2.clone();
        p.tilde_alpha = self.tilde_alpha.clone();
        p.target = self.target.clone();
        p
    }
}

#[derive(Debug, Subcommand)]
pub enum DenseCmd {
    /// Is the set m-dense(Γ)?
    Check {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        gamma: GammaSpec,
    },
    /// Shortest m-dense prefix of a pool.
    Find {
        #[arg(long)]
        pool: FinSet,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        gamma: GammaSpec,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// 2k+6.
    PsrtExponent {
        #[arg(long)]
        k: u64,
    },
    /// 3^(m+1).
    DensityExponent {
        #[arg(long)]
        m: u32,
    },
    /// k+4.
    KsExponent {
        #[arg(long)]
        k: u64,
    },
    /// h(0)=1, h(m+1)=max(n(h(m)), h(m)+1).
    HChain {
        #[arg(long)]
        m: u64,
        /// `psrt` (2x+6), `ks` (x+4), `identity`, or a table "1=8,8=22".
        #[arg(long, default_value = "psrt")]
        n_of: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenCmd {
    /// Write a coloring of [0, max] as JSON.
    Coloring {
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value = "uniform")]
        kind: GenKindArg,
        #[arg(long, default_value_t = 2)]
        n: u8,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Color for `constant`.
        #[arg(long, default_value_t = 0)]
        c: u8,
        /// Blocks for `partition`, e.g. "[0,1,2];[3,4]".
        #[arg(long)]
        blocks: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKindArg {
    Uniform,
    Constant,
    Linear,
    Partition,
}

/// What a command produced.
struct Output {
    code: i32,
    doc: Value,
    text: String,
}

fn out(code: i32, doc: impl Serialize, text: impl Into<String>) -> Result<Output> {
    Ok(Output {
        code,
        doc: serde_json::to_value(doc)?,
        text: text.into(),
    })
}

fn verdict_code(v: Option<bool>) -> i32 {
    match v {
        Some(true) => EXIT_OK,
        Some(false) => EXIT_NEGATIVE,
        None => EXIT_INDETERMINATE,
    }
}

/// Runs the command line `argv` (including the program name) and returns
/// `(exit code, stdout, stderr)`.
pub fn dispatch<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, rendered, String::new()),
                _ => (EXIT_INPUT, String::new(), rendered),
            };
        }
    };
    let mut warnings = String::new();
    match run(&cli, &mut warnings) {
        Ok(o) => {
            let stdout = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&o.doc).expect("values serialize");
                    s.push('\n');
                    s
                }
                Format::Text => {
                    let mut s = o.text;
                    if !s.ends_with('\n') {
                        s.push('\n');
                    }
                    s
                }
            };
            (o.code, stdout, warnings)
        }
        Err(e) => (EXIT_INPUT, String::new(), format!("{warnings}error: {e}\n")),
    }
}

fn config(cli: &Cli) -> SearchConfig {
    SearchConfig {
        budget: cli.budget,
        jobs: cli.jobs.max(1),
        ..SearchConfig::default()
    }
}

fn open_cache(cli: &Cli, warnings: &mut String) -> Result<Option<Cache>> {
    let Some(p) = &cli.cache else { return Ok(None) };
    let c = Cache::open(p)?;
    if c.skipped() > 0 {
        warnings.push_str(&format!("warning: skipped {} corrupt cache line(s)\n", c.skipped()));
    }
    Ok(Some(c))
}

/// Removes the stats block so that documents compare by content.
fn strip_stats(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.remove("stats");
    }
    v
}

fn with_stats(mut v: Value, stats: &Stats) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("stats".into(), serde_json::to_value(stats).expect("stats serialize"));
    }
    v
}

/// Cached computation: returns `(document, exit code)`; only decided
/// results (`code` 0 or 1) are stored.
fn cached(
    cli: &Cli,
    key: String,
    warnings: &mut String,
    compute: impl FnOnce() -> Result<(Value, i32)>,
) -> Result<(Value, i32, bool)> {
    let mut cache = open_cache(cli, warnings)?;
    if let Some(c) = &cache {
        if !cli.refresh {
            if let Some(r) = c.lookup(&key) {
                let code = r.value.get("exit").and_then(Value::as_i64).unwrap_or(0) as i32;
                let doc = r.value.get("doc").cloned().unwrap_or(Value::Null);
                let stats = Stats {
                    cache_hit: true,
                    ..Stats::default()
                };
                return Ok((with_stats(doc, &stats), code, true));
            }
        }
    }
    let (doc, code) = compute()?;
    if let Some(c) = &mut cache {
        if code == EXIT_OK || code == EXIT_NEGATIVE {
            let value = json!({ "exit": code, "doc": strip_stats(doc.clone()) });
            c.append(CacheRecord::new(key, value))?;
        }
    }
    Ok((doc, code, false))
}

fn run(cli: &Cli, warnings: &mut String) -> Result<Output> {
    match &cli.command {
        Command::Ord(c) => run_ord(c),
        Command::Large(c) => run_large(c),
        Command::Gamma(c) => run_gamma(cli, c, warnings),
        Command::Grouping(c) => run_grouping(cli, c),
        Command::Extract(c) => run_extract(cli, c),
        Command::Dense(c) => run_dense(cli, c),
        Command::Bounds(c) => run_bounds(c),
        Command::Gen(c) => run_gen(cli, c),
    }
}

fn run_ord(c: &OrdCmd) -> Result<Output> {
    match c {
        OrdCmd::Fund { alpha, m } => {
            let r = alpha.fund(*m);
            out(EXIT_OK, json!({"alpha": alpha, "m": m, "result": r}), r.to_string())
        }
        OrdCmd::Cmp { a, b } => {
            let sym = match a.cmp(b) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            out(EXIT_OK, json!({"a": a, "b": b, "cmp": sym}), format!("{a} {sym} {b}"))
        }
        OrdCmd::Parse { text } => {
            let a: Ordinal = text.parse()?;
            out(
                EXIT_OK,
                json!({"ordinal": a, "terms": a.terms().iter().map(|t| (t.exp, t.coef)).collect::<Vec<_>>()}),
                a.to_string(),
            )
        }
    }
}

fn run_large(c: &LargeCmd) -> Result<Output> {
    match c {
        LargeCmd::Check { set, alpha, star } => {
            let xs = set.get()?;
            let (large, res) = if *star {
                (is_large_star(&xs, alpha), None)
            } else {
                let r = residual(&xs, alpha);
                (r.is_zero(), Some(r))
            };
            let word = if *star { "large*" } else { "large" };
            let text = if large { word.to_string() } else { format!("not {word}") };
            out(
                if large { EXIT_OK } else { EXIT_NEGATIVE },
                json!({"set": xs, "alpha": alpha, "star": star, "large": large, "residual": res}),
                text,
            )
        }
        LargeCmd::Minimal { start, alpha, max_len } => match minimal_large_within(*start, alpha, *max_len)? {
            Some(s) => {
                let text = format!("{s}");
                out(EXIT_OK, json!({"start": start, "alpha": alpha, "set": s}), text)
            }
            None => out(
                EXIT_INDETERMINATE,
                json!({"start": start, "alpha": alpha, "indeterminate": true, "max_len": max_len}),
                format!("no {alpha}-large interval from {start} within {max_len} elements"),
            ),
        },
        LargeCmd::Extract { pool, alpha } => match extract_large_subset(pool, alpha) {
            Some(s) => {
                let ok = is_large(&s, alpha);
                let text = format!("{s}");
                out(if ok { EXIT_OK } else { EXIT_NEGATIVE }, json!({"pool": pool, "alpha": alpha, "set": s}), text)
            }
            None => out(
                EXIT_NEGATIVE,
                json!({"pool": pool, "alpha": alpha, "set": null}),
                format!("pool has no {alpha}-large subset"),
            ),
        },
    }
}

fn gamma_text(o: &GammaOutcome) -> String {
    match o {
        GammaOutcome::Decided(c) if c.verdict => {
            let n = c.witnesses.as_ref().map_or(0, |w| w.covers);
            format!("large ({n} covered subtrees)")
        }
        GammaOutcome::Decided(c) => {
            let bad = c
                .bad_coloring
                .as_ref()
                .map(|f| {
                    let v = c.set.as_slice();
                    let mut parts = Vec::new();
                    for b in 1..v.len() {
                        for a in 0..b {
                            if f.n() == 2 {
                                parts.push(format!("f({},{})={}", v[a], v[b], f.pair(v[a], v[b])));
                            }
                        }
                    }
                    if f.n() == 1 {
                        parts.extend(v.iter().map(|&x| format!("f({x})={}", f.single(x))));
                    }
                    parts.join(" ")
                })
                .unwrap_or_default();
            format!("not large; bad coloring: {bad}")
        }
        GammaOutcome::Indeterminate(i) => format!("indeterminate after {} nodes", i.stats.nodes),
    }
}

fn run_gamma(cli: &Cli, c: &GammaCmd, warnings: &mut String) -> Result<Output> {
    match c {
        GammaCmd::Check {
            set,
            alpha,
            gamma,
            witness_cap,
        } => {
            let xs = set.get()?;
            let key = cache_key(
                "gamma-check",
                &[
                    ("set", xs.to_string()),
                    ("alpha", alpha.to_string()),
                    ("gamma", gamma.to_string()),
                    ("witness-cap", witness_cap.to_string()),
                ],
            );
            let cfg = SearchConfig {
                witness_cap: *witness_cap,
                ..config(cli)
            };
            let (doc, code, _) = cached(cli, key, warnings, || {
                let o = is_large_gamma(&xs, alpha, *gamma, &cfg)?;
                Ok((serde_json::to_value(&o)?, verdict_code(o.verdict())))
            })?;
            let o: GammaOutcome = serde_json::from_value(doc.clone())?;
            Ok(Output {
                code,
                text: gamma_text(&o),
                doc,
            })
        }
        GammaCmd::Threshold {
            start,
            alpha,
            gamma,
            max_n,
        } => {
            let key = cache_key(
                "gamma-threshold",
                &[
                    ("start", start.to_string()),
                    ("alpha", alpha.to_string()),
                    ("gamma", gamma.to_string()),
                ],
            );
            let cfg = config(cli);
            let (doc, code, _) = cached(cli, key, warnings, || {
                let r = threshold(*start, alpha, *gamma, *max_n, &cfg, &mut ThresholdMemo::new())?;
                let code = if r.threshold.is_some() { EXIT_OK } else { EXIT_INDETERMINATE };
                Ok((serde_json::to_value(&r)?, code))
            })?;
            let text = match doc.get("threshold").and_then(Value::as_u64) {
                Some(n) => n.to_string(),
                None => format!(
                    "indeterminate (largest N proven too small: {})",
                    doc.get("largest_false").map_or("none".into(), |v| v.to_string())
                ),
            };
            Ok(Output { code, doc, text })
        }
    }
}

fn grouping_text(w: &GroupingWitness) -> String {
    w.blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
}

fn run_grouping(cli: &Cli, c: &GroupingCmd) -> Result<Output> {
    match c {
        GroupingCmd::Find {
            set,
            coloring,
            l1,
            l2,
            intervals_only,
        } => {
            let xs = set.get()?;
            let f = coloring.get(domain_max(&xs), cli.seed)?;
            let opts = GroupingOptions {
                intervals_only: *intervals_only,
                budget: cli.budget,
            };
            match find_grouping_with(&xs, &f, l1, l2, &opts)? {
                GroupingSearch::Found(w) => {
                    let text = grouping_text(&w);
                    out(EXIT_OK, json!({"set": xs, "l1": l1, "l2": l2, "grouping": w}), text)
                }
                GroupingSearch::None => out(
                    EXIT_NEGATIVE,
                    json!({"set": xs, "l1": l1, "l2": l2, "grouping": null}),
                    "no grouping",
                ),
                GroupingSearch::Exhausted => out(
                    EXIT_INDETERMINATE,
                    json!({"set": xs, "l1": l1, "l2": l2, "indeterminate": true, "budget": cli.budget}),
                    "indeterminate",
                ),
            }
        }
        GroupingCmd::Verify { witness, coloring, l1, l2 } => {
            // Accepts a bare witness or the document written by `grouping find`.
            let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(witness)?)?;
            let (w, set): (GroupingWitness, Option<FinSet>) = match doc.get("grouping") {
                Some(g) => (
                    serde_json::from_value(g.clone())?,
                    doc.get("set").map(|s| serde_json::from_value(s.clone())).transpose()?,
                ),
                None => (serde_json::from_value(doc)?, None),
            };
            let max = w
                .blocks
                .iter()
                .chain(&set)
                .map(domain_max)
                .max()
                .unwrap_or(0);
            let f = coloring.get(max, cli.seed)?;
            match check_grouping(&f, &w, l1, l2) {
                Ok(()) => out(EXIT_OK, json!({"valid": true}), "valid grouping"),
                Err(why) => out(EXIT_NEGATIVE, json!({"valid": false, "reason": why}), format!("invalid: {why}")),
            }
        }
        GroupingCmd::Fgp { set, l1, l2, k } => {
            let xs = set.get()?;
            let o = fgp_check(&xs, l1, l2, *k, &config(cli))?;
            let text = match &o {
                FgpOutcome::Decided(c) if c.verdict => format!("every {k}-coloring has a grouping"),
                FgpOutcome::Decided(_) => "fails: a coloring without grouping is in the certificate".into(),
                FgpOutcome::Indeterminate(_) => "indeterminate".into(),
            };
            out(verdict_code(o.verdict()), &o, text)
        }
    }
}

fn extraction_output(r: ExtractionReport) -> Result<Output> {
    let text = match (&r.witness, r.verified) {
        (Some(w), true) => match r.color {
            Some(c) => format!("verified {w} (color {c})"),
            None => format!("verified {w}"),
        },
        _ => format!(
            "failed at stage {}{}",
            r.failed_stage.as_deref().unwrap_or("?"),
            r.trace.last().map(|t| format!(": {t}")).unwrap_or_default()
        ),
    };
    out(if r.verified { EXIT_OK } else { EXIT_NEGATIVE }, &r, text)
}

fn run_extract(cli: &Cli, c: &ExtractCmd) -> Result<Output> {
    match c {
        ExtractCmd::Psrt { set, coloring, k, target } => {
            let xs = set.get()?;
            let f = coloring.get(domain_max(&xs), cli.seed)?;
            let target = target.clone().unwrap_or_else(|| Ordinal::omega_pow(*k as u64));
            extraction_output(extract_pseudo_homogeneous(&xs, &f, *k, &target)?)
        }
        ExtractCmd::Em { set, coloring, params } => {
            let xs = set.get()?;
            let f = coloring.get(domain_max(&xs), cli.seed)?;
            extraction_output(extract_transitive(&xs, &f, &params.params(xs.len()))?)
        }
        ExtractCmd::Rt22 {
            set,
            coloring,
            params,
            k,
            homogeneous_target,
        } => {
            let xs = set.get()?;
            let f = coloring.get(domain_max(&xs), cli.seed)?;
            let p = Rt22Params {
                transitive: params.params(xs.len()),
                target: homogeneous_target.clone(),
            };
            extraction_output(extract_homogeneous_rt22(&xs, &f, *k, &p)?)
        }
    }
}

fn run_dense(cli: &Cli, c: &DenseCmd) -> Result<Output> {
    match c {
        DenseCmd::Check { set, m, gamma } => {
            let xs = set.get()?;
            let p = DensityParams {
                m: *m,
                gamma: *gamma,
                budget: cli.budget,
            };
            let o = is_m_dense(&xs, &p)?;
            let text = match &o {
                DensityOutcome::Decided(c) if c.verdict => format!("{m}-dense"),
                DensityOutcome::Decided(_) => format!("not {m}-dense"),
                DensityOutcome::Indeterminate(_) => "indeterminate".into(),
            };
            out(verdict_code(o.verdict()), &o, text)
        }
        DenseCmd::Find { pool, m, gamma } => {
            let p = DensityParams {
                m: *m,
                gamma: *gamma,
                budget: cli.budget,
            };
            let r = find_m_dense_subset(pool, &p)?;
            let (code, text) = match &r {
                DenseSubset::Found { set, .. } => (EXIT_OK, set.to_string()),
                DenseSubset::Absent { .. } => (EXIT_NEGATIVE, format!("no {m}-dense prefix")),
                DenseSubset::Indeterminate { .. } => (EXIT_INDETERMINATE, "indeterminate".into()),
            };
            out(code, &r, text)
        }
    }
}

fn parse_n_of(text: &str) -> Result<Box<dyn Fn(u64) -> Option<u64>>> {
    Ok(match text {
        "psrt" => Box::new(|x: u64| x.checked_mul(2)?.checked_add(6)),
        "ks" => Box::new(|x: u64| x.checked_add(4)),
        "identity" => Box::new(Some),
        table => {
            let mut map = std::collections::HashMap::new();
            for entry in table.split(',').filter(|e| !e.trim().is_empty()) {
                let (a, b) = entry
                    .split_once('=')
                    .ok_or_else(|| Error::Precondition(format!("bad table entry {entry:?} (want x=n)")))?;
                let parse = |s: &str| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|e| Error::Precondition(format!("bad number {s:?}: {e}")))
                };
                map.insert(parse(a)?, parse(b)?);
            }
            Box::new(move |x| map.get(&x).copied())
        }
    })
}

fn run_bounds(c: &BoundsCmd) -> Result<Output> {
    match c {
        BoundsCmd::PsrtExponent { k } => {
            let v = bound_psrt_exponent(*k);
            out(EXIT_OK, json!({"k": k, "exponent": v.to_string()}), v.to_string())
        }
        BoundsCmd::DensityExponent { m } => {
            let v = bound_psrt_density_exponent(*m);
            out(EXIT_OK, json!({"m": m, "exponent": v.to_string()}), v.to_string())
        }
        BoundsCmd::KsExponent { k } => {
            let v = bound_ks_exponent(*k);
            out(EXIT_OK, json!({"k": k, "exponent": v.to_string()}), v.to_string())
        }
        BoundsCmd::HChain { m, n_of } => {
            let f = parse_n_of(n_of)?;
            let h = h_chain(f, *m)?;
            out(EXIT_OK, json!({"m": m, "n_of": n_of, "h": h}), h.to_string())
        }
    }
}

fn run_gen(cli: &Cli, c: &GenCmd) -> Result<Output> {
    match c {
        GenCmd::Coloring {
            max,
            kind,
            n,
            k,
            c,
            blocks,
        } => {
            let kind = match kind {
                GenKindArg::Uniform => GenKind::Uniform { n: *n, k: *k },
                GenKindArg::Constant => GenKind::Constant { n: *n, k: *k, c: *c },
                GenKindArg::Linear => GenKind::LinearOrder { order: None },
                GenKindArg::Partition => {
                    let text = blocks.as_deref().ok_or_else(|| Error::Missing("--blocks".into()))?;
                    let blocks = text
                        .split(';')
                        .map(str::parse::<FinSet>)
                        .collect::<Result<Vec<_>>>()?;
                    GenKind::Partition { blocks }
                }
            };
            let f = generate(&kind, *max, cli.seed)?;
            // The coloring itself is the JSON document; text gets it compact.
            let text = serde_json::to_string(&f)?;
            out(EXIT_OK, &f, text)
        }
    }
}

/// Largest element, the default coloring domain.
fn domain_max(xs: &FinSet) -> u64 {
    xs.max().unwrap_or(0)
}
