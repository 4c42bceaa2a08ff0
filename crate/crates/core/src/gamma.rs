//! α-largeness relative to a Ramsey-type statement Γ.
//!
//! `X` is α-large(Γ) when every coloring of the n-subsets of `[0, max X]`
//! admits an α-large set `Y ⊆ X` satisfying Γ's solution predicate. Only
//! n-subsets *inside* `X` can influence a predicate evaluated on `Y ⊆ X`
//! (pseudo-homogeneous paths run through `Y` itself), so the search
//! enumerates colorings of `[X]^n` and extends them by 0 elsewhere.

use std::collections::HashMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::coloring::{Coloring, GammaSpec};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::largeness::{is_large, DenseOrdinal};
use crate::ordinal::Ordinal;
use crate::search::{
    self, covers_are_complete, explore, explore_seeded, parse_prefix_key, prefix_key, Limits, Outcome,
    Probe, SearchStats, Space,
};

/// Backtracking search for a Γ-solution inside a (partial) local coloring.
///
/// `mat[i*l+j]` holds the color of local pair `(i, j)`, `i < j` (or of the
/// singleton `i` at `(i, i)`); callers only query cells that are assigned.
pub(crate) struct Solver<'a> {
    xs: &'a [u64],
    gamma: GammaSpec,
    alpha: DenseOrdinal,
}

/// Incremental predicate state along a DFS branch.
enum Track {
    /// Common color of the chosen tuples, if already fixed.
    Rt(Option<u8>),
    Em,
    /// Bitmask of colors still possible and, per color, the set of chosen
    /// positions reaching each chosen position.
    Psrt { live: u64, into: Vec<Vec<u64>> },
}

impl<'a> Solver<'a> {
    pub(crate) fn new(xs: &'a [u64], gamma: GammaSpec, alpha: &Ordinal) -> Result<Self> {
        if xs.len() > search::MAX_ELEMENTS {
            return Err(Error::Unsupported(format!(
                "solution search over {} elements (limit {})",
                xs.len(),
                search::MAX_ELEMENTS
            )));
        }
        if gamma.n() > 2 {
            return Err(Error::Unsupported(format!("{gamma}: tuple size above 2")));
        }
        if let GammaSpec::Psrt { k } = gamma {
            if k > 64 {
                return Err(Error::Unsupported(format!("{gamma}: more than 64 colors")));
            }
        }
        Ok(Solver {
            xs,
            gamma,
            alpha: DenseOrdinal::new(alpha)?,
        })
    }

    fn l(&self) -> usize {
        self.xs.len()
    }

    fn track(&self) -> Track {
        match self.gamma {
            GammaSpec::Rt { .. } => Track::Rt(None),
            GammaSpec::Em => Track::Em,
            GammaSpec::Psrt { k } => Track::Psrt {
                live: if k >= 64 { u64::MAX } else { (1u64 << k) - 1 },
                into: vec![Vec::new(); k as usize],
            },
        }
    }

    #[inline]
    fn color(&self, mat: &[u8], i: usize, j: usize) -> u8 {
        mat[i * self.l() + j]
    }

    /// Tries to append local index `e` (larger than everything chosen).
    /// On success the tracker is updated and an undo token returned.
    fn push(&self, mat: &[u8], chosen: &[usize], e: usize, t: &mut Track) -> Option<Undo> {
        match t {
            Track::Rt(col) => {
                if self.gamma.n() == 1 {
                    let c = self.color(mat, e, e);
                    return match *col {
                        Some(d) if d != c => None,
                        Some(_) => Some(Undo::None),
                        None => {
                            *col = Some(c);
                            Some(Undo::RtColor)
                        }
                    };
                }
                let mut fixed = *col;
                for &a in chosen {
                    let c = self.color(mat, a, e);
                    match fixed {
                        None => fixed = Some(c),
                        Some(d) if d != c => return None,
                        _ => {}
                    }
                }
                if col.is_none() && fixed.is_some() {
                    *col = fixed;
                    Some(Undo::RtColor)
                } else {
                    Some(Undo::None)
                }
            }
            Track::Em => {
                for (p, &a) in chosen.iter().enumerate() {
                    let ae = self.color(mat, a, e);
                    for &b in &chosen[p + 1..] {
                        let ab = self.color(mat, a, b);
                        if ab == self.color(mat, b, e) && ab != ae {
                            return None;
                        }
                    }
                }
                Some(Undo::None)
            }
            Track::Psrt { live, into } => {
                let p = chosen.len();
                let full: u64 = if p == 64 { u64::MAX } else { (1u64 << p) - 1 };
                let mut new_live = 0u64;
                let mut bits = *live;
                let mut rows: Vec<(usize, u64)> = Vec::new();
                while bits != 0 {
                    let c = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let mut acc = 0u64;
                    for (q, &a) in chosen.iter().enumerate() {
                        if self.color(mat, a, e) as usize == c {
                            acc |= 1 << q;
                            acc |= into[c][q];
                        }
                    }
                    if acc == full {
                        new_live |= 1 << c;
                        rows.push((c, acc));
                    }
                }
                if new_live == 0 {
                    return None;
                }
                let old = *live;
                *live = new_live;
                for (c, acc) in rows {
                    into[c].push(acc);
                }
                Some(Undo::Psrt { old_live: old, pushed: new_live })
            }
        }
    }

    fn pop(&self, t: &mut Track, undo: Undo) {
        match (t, undo) {
            (Track::Rt(col), Undo::RtColor) => *col = None,
            (Track::Psrt { live, into }, Undo::Psrt { old_live, pushed }) => {
                let mut bits = pushed;
                while bits != 0 {
                    let c = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    into[c].pop();
                }
                *live = old_live;
            }
            _ => {}
        }
    }

    /// Lexicographically first Γ-solution `S ++ tail` with `S ⊆ pool` that is
    /// α-large, where `tail` (increasing, above `pool`) is mandatory.
    pub(crate) fn find(&self, mat: &[u8], pool: &[usize], tail: &[usize], work: &mut u64) -> Option<Vec<usize>> {
        let mut chosen = Vec::with_capacity(pool.len() + tail.len());
        let mut track = self.track();
        let found = self.rec(mat, pool, 0, tail, &mut chosen, self.alpha, &mut track, work);
        found.then_some(chosen)
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        &self,
        mat: &[u8],
        pool: &[usize],
        from: usize,
        tail: &[usize],
        chosen: &mut Vec<usize>,
        res: DenseOrdinal,
        track: &mut Track,
        work: &mut u64,
    ) -> bool {
        *work += 1;
        if tail.is_empty() && res.is_zero() {
            return true;
        }
        for t in from..pool.len() {
            let rest = pool[t..].iter().chain(tail).map(|&q| self.xs[q]);
            if !res.consumed_by(rest) {
                break;
            }
            let e = pool[t];
            if let Some(undo) = self.push(mat, chosen, e, track) {
                chosen.push(e);
                let mut r = res;
                r.fund(self.xs[e]);
                if self.rec(mat, pool, t + 1, tail, chosen, r, track, work) {
                    return true;
                }
                chosen.pop();
                self.pop(track, undo);
            }
        }
        if !tail.is_empty() {
            // All extensions failed; try closing with the mandatory tail.
            let base = chosen.len();
            let mut undos = Vec::with_capacity(tail.len());
            let mut r = res;
            let mut ok = true;
            for &e in tail {
                match self.push(mat, chosen, e, track) {
                    Some(u) => {
                        undos.push(u);
                        chosen.push(e);
                        r.fund(self.xs[e]);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && r.is_zero() {
                return true;
            }
            while chosen.len() > base {
                chosen.pop();
                let u = undos.pop().expect("one undo per pushed element");
                self.pop(track, u);
            }
        }
        false
    }
}

enum Undo {
    None,
    RtColor,
    Psrt { old_live: u64, pushed: u64 },
}

/// Local coloring matrix of `f` restricted to `xs`.
fn local_matrix(f: &Coloring, xs: &[u64]) -> Vec<u8> {
    let l = xs.len();
    let mut mat = vec![0u8; l * l];
    for j in 0..l {
        if f.n() == 1 {
            mat[j * l + j] = f.single(xs[j]);
        } else {
            for i in 0..j {
                mat[i * l + j] = f.pair(xs[i], xs[j]);
            }
        }
    }
    mat
}

/// The lexicographically first α-large `Y ⊆ X` satisfying Γ's predicate for
/// `f`, or `None`.
pub fn exists_solution(xs: &FinSet, f: &Coloring, gamma: GammaSpec, alpha: &Ordinal) -> Result<Option<FinSet>> {
    gamma.check_coloring(f)?;
    if let Some(m) = xs.max() {
        if m > f.max() {
            return Err(Error::DimensionMismatch(format!(
                "set reaches {m} but the coloring stops at {}",
                f.max()
            )));
        }
    }
    let v = xs.as_slice();
    let solver = Solver::new(v, gamma, alpha)?;
    let mat = local_matrix(f, v);
    let pool: Vec<usize> = (0..v.len()).collect();
    let mut work = 0;
    Ok(solver.find(&mat, &pool, &[], &mut work).map(|ix| xs.select(&ix)))
}

/// Probe used by the coloring enumeration: after cell `(i, j)` is assigned,
/// look for a solution whose two largest elements are `x_i < x_j` (or whose
/// largest element is `x_i` for singleton colorings).
pub(crate) struct GammaProbe<'a> {
    pub(crate) solver: Solver<'a>,
    pub(crate) space: &'a Space,
}

impl Probe for GammaProbe<'_> {
    type Witness = Vec<usize>;
    type Scratch = Vec<usize>;

    fn scratch(&self) -> Vec<usize> {
        Vec::with_capacity(self.space.l())
    }

    fn root(&self, _: &mut Vec<usize>, work: &mut u64) -> Option<Vec<usize>> {
        // Sets smaller than the tuple size need no color at all.
        if self.solver.alpha.is_zero() {
            return Some(Vec::new());
        }
        if self.space.n() == 2 {
            for i in 0..self.space.l() {
                *work += 1;
                let mut r = self.solver.alpha;
                r.fund(self.solver.xs[i]);
                if r.is_zero() {
                    return Some(vec![i]);
                }
            }
        }
        None
    }

    fn after(&self, mat: &[u8], cell: usize, pool: &mut Vec<usize>, work: &mut u64) -> Option<Vec<usize>> {
        let (i, j) = self.space.cells()[cell];
        let l = self.space.l();
        pool.clear();
        if i == j {
            pool.extend(0..i);
            return self.solver.find(mat, pool, &[i], work);
        }
        match self.solver.gamma {
            GammaSpec::Rt { .. } => {
                let c = mat[i * l + j];
                pool.extend((0..i).filter(|&a| mat[a * l + i] == c && mat[a * l + j] == c));
            }
            GammaSpec::Em => {
                let ij = mat[i * l + j];
                pool.extend((0..i).filter(|&a| {
                    let ai = mat[a * l + i];
                    !(ai == ij && ai != mat[a * l + j])
                }));
            }
            GammaSpec::Psrt { .. } => pool.extend(0..i),
        }
        self.solver.find(mat, pool, &[i, j], work)
    }
}

/// Search configuration shared by all certified searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// Node budget (cell assignments).
    pub budget: u64,
    /// Worker threads.
    pub jobs: usize,
    /// Maximum number of positive witnesses recorded in a certificate.
    pub witness_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 2_000_000_000,
            jobs: 1,
            witness_cap: 64,
        }
    }
}

impl SearchConfig {
    pub(crate) fn limits(&self) -> Limits {
        Limits {
            budget: self.budget,
            jobs: self.jobs.max(1),
            cover_cap: self.witness_cap,
        }
    }
}

/// Work counters reported with certificates; never part of the verdict.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    /// Cell assignments (colorings are built one cell at a time).
    pub nodes: u64,
    /// Work units spent inside solution searches.
    pub probe_work: u64,
    /// Covered subtrees of the coloring tree.
    pub covers: u64,
    pub wall_ms: u64,
    pub cache_hit: bool,
}

impl Stats {
    pub(crate) fn from_search(s: &SearchStats, started: Instant) -> Self {
        Stats {
            nodes: s.nodes,
            probe_work: s.probe_work,
            covers: s.covers,
            wall_ms: started.elapsed().as_millis() as u64,
            cache_hit: false,
        }
    }

    /// Total search effort.
    pub fn work(&self) -> u64 {
        self.nodes + self.probe_work
    }
}

/// A covered subtree of the coloring tree and its solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    /// Colors of the first cells of `[X]^n` in colex order, dot-separated.
    pub prefix: String,
    pub witness: FinSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessLog {
    /// Number of covered subtrees.
    pub covers: u64,
    /// True when only the first `entries.len()` covers were recorded.
    pub truncated: bool,
    /// Whether colorings were enumerated up to color permutation.
    pub canonical: bool,
    pub entries: Vec<WitnessEntry>,
}

/// Evidence that a bad coloring has no solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attestation {
    pub method: String,
    /// Subsets of `X` inspected by the plain scan.
    pub subsets_scanned: u64,
    /// Solutions found by the scan (always 0 for an emitted certificate).
    pub solutions_found: u64,
}

/// Decided α-largeness(Γ) of a set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: bool,
    pub gamma: GammaSpec,
    pub alpha: Ordinal,
    pub set: FinSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bad_coloring: Option<Coloring>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attestation: Option<Attestation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<WitnessLog>,
    pub stats: Stats,
}

/// Budget ran out before a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Indeterminate {
    pub indeterminate: bool,
    pub gamma: GammaSpec,
    pub alpha: Ordinal,
    pub set: FinSet,
    pub budget: u64,
    pub stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GammaOutcome {
    Decided(Certificate),
    Indeterminate(Indeterminate),
}

impl GammaOutcome {
    pub fn verdict(&self) -> Option<bool> {
        match self {
            GammaOutcome::Decided(c) => Some(c.verdict),
            GammaOutcome::Indeterminate(_) => None,
        }
    }

    pub fn stats(&self) -> &Stats {
        match self {
            GammaOutcome::Decided(c) => &c.stats,
            GammaOutcome::Indeterminate(i) => &i.stats,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            GammaOutcome::Decided(c) => Some(c),
            GammaOutcome::Indeterminate(_) => None,
        }
    }
}

fn check_search_gamma(gamma: GammaSpec) -> Result<()> {
    if gamma.n() > 2 {
        return Err(Error::Unsupported(format!("{gamma}: searches support tuple size ≤ 2")));
    }
    Ok(())
}

/// Extends a local coloring (in cell order) to a full coloring of `[0, max X]`
/// that is 0 outside `X`.
pub fn lift_coloring(xs: &FinSet, gamma: GammaSpec, space: &Space, colors: &[u8]) -> Result<Coloring> {
    let v = xs.as_slice();
    let max = xs.max().unwrap_or(0);
    let mut f = Coloring::from_fn(gamma.n(), gamma.k(), max, |_, _| 0)?;
    for (&(i, j), &c) in space.cells().iter().zip(colors) {
        if i == j {
            f.set_single(v[i], c);
        } else {
            f.set_pair(v[i], v[j], c);
        }
    }
    Ok(f)
}

/// Plain scan over all subsets of `X` (no pruning) counting solutions for
/// `f`. Feasible for `|X| ≤ 24`.
pub fn scan_solutions(xs: &FinSet, f: &Coloring, gamma: GammaSpec, alpha: &Ordinal) -> Result<(u64, u64)> {
    let l = xs.len();
    if l > 24 {
        return Err(Error::Unsupported(format!("plain subset scan over {l} elements")));
    }
    let mut scanned = 0u64;
    let mut found = 0u64;
    for mask in 0u64..(1u64 << l) {
        scanned += 1;
        let ys = FinSet::from_sorted_unchecked(
            (0..l).filter(|&b| mask >> b & 1 == 1).map(|b| xs.as_slice()[b]).collect(),
        );
        if is_large(&ys, alpha) && gamma.holds(f, &ys) {
            found += 1;
        }
    }
    Ok((scanned, found))
}

/// Decides whether `X` is α-large(Γ).
pub fn is_large_gamma(xs: &FinSet, alpha: &Ordinal, gamma: GammaSpec, cfg: &SearchConfig) -> Result<GammaOutcome> {
    is_large_gamma_seeded(xs, alpha, gamma, cfg, &[])
}

pub(crate) fn is_large_gamma_seeded(
    xs: &FinSet,
    alpha: &Ordinal,
    gamma: GammaSpec,
    cfg: &SearchConfig,
    seed: &[u8],
) -> Result<GammaOutcome> {
    check_search_gamma(gamma)?;
    let started = Instant::now();
    let v = xs.as_slice();
    let space = Space::new(v.len(), gamma.n(), gamma.k(), true)?;
    let probe = GammaProbe {
        solver: Solver::new(v, gamma, alpha)?,
        space: &space,
    };
    let out = if seed.is_empty() {
        explore(&space, &probe, &cfg.limits())
    } else {
        explore_seeded(&space, &probe, seed, &cfg.limits())
    };
    let stats = Stats::from_search(&out.stats, started);
    Ok(match out.outcome {
        Outcome::Covered { covers, total_covers } => GammaOutcome::Decided(Certificate {
            verdict: true,
            gamma,
            alpha: alpha.clone(),
            set: xs.clone(),
            bad_coloring: None,
            attestation: None,
            witnesses: Some(WitnessLog {
                covers: total_covers,
                truncated: (covers.len() as u64) < total_covers,
                canonical: true,
                entries: covers
                    .into_iter()
                    .map(|c| WitnessEntry {
                        prefix: prefix_key(&c.prefix),
                        witness: xs.select(&c.witness),
                    })
                    .collect(),
            }),
            stats,
        }),
        Outcome::Bad { colors } => {
            let f = lift_coloring(xs, gamma, &space, &colors)?;
            let attestation = if v.len() <= 24 {
                let (scanned, found) = scan_solutions(xs, &f, gamma, alpha)?;
                if found != 0 {
                    return Err(Error::Precondition(format!(
                        "internal inconsistency: bad coloring has {found} solutions"
                    )));
                }
                Some(Attestation {
                    method: "plain subset scan".into(),
                    subsets_scanned: scanned,
                    solutions_found: 0,
                })
            } else {
                None
            };
            GammaOutcome::Decided(Certificate {
                verdict: false,
                gamma,
                alpha: alpha.clone(),
                set: xs.clone(),
                bad_coloring: Some(f),
                attestation,
                witnesses: None,
                stats,
            })
        }
        Outcome::Exhausted => GammaOutcome::Indeterminate(Indeterminate {
            indeterminate: true,
            gamma,
            alpha: alpha.clone(),
            set: xs.clone(),
            budget: cfg.budget,
            stats,
        }),
    })
}

/// Re-checks a certificate without trusting the search.
///
/// Negative: the bad coloring is re-scanned over all subsets of `X`.
/// Positive: every recorded witness is a large solution under the colors of
/// its prefix; when the log is complete the prefixes must also form an
/// exhaustive cut of the (canonical) coloring tree.
pub fn verify_certificate(cert: &Certificate) -> Result<(), String> {
    let xs = &cert.set;
    let gamma = cert.gamma;
    if cert.verdict {
        let log = cert.witnesses.as_ref().ok_or("positive certificate without witnesses")?;
        let space = Space::new(xs.len(), gamma.n(), gamma.k(), log.canonical).map_err(|e| e.to_string())?;
        let mut prefixes = Vec::with_capacity(log.entries.len());
        for entry in &log.entries {
            let prefix = parse_prefix_key(&entry.prefix).map_err(|e| e.to_string())?;
            if !space.is_valid_prefix(&prefix) {
                return Err(format!("prefix '{}' is not a valid assignment prefix", entry.prefix));
            }
            check_witness(xs, gamma, &cert.alpha, &space, &prefix, &entry.witness)?;
            prefixes.push(prefix);
        }
        if !log.truncated && !covers_are_complete(&space, &prefixes) {
            return Err("witness prefixes do not cover the coloring space".into());
        }
        Ok(())
    } else {
        let f = cert.bad_coloring.as_ref().ok_or("negative certificate without a coloring")?;
        gamma.check_coloring(f).map_err(|e| e.to_string())?;
        if xs.max().is_some_and(|m| m > f.max()) {
            return Err("bad coloring does not cover the set".into());
        }
        let (_, found) = scan_solutions(xs, f, gamma, &cert.alpha).map_err(|e| e.to_string())?;
        if found > 0 {
            return Err(format!("bad coloring admits {found} solutions"));
        }
        Ok(())
    }
}

fn check_witness(
    xs: &FinSet,
    gamma: GammaSpec,
    alpha: &Ordinal,
    space: &Space,
    prefix: &[u8],
    witness: &FinSet,
) -> Result<(), String> {
    if !witness.is_subset(xs) {
        return Err(format!("witness {witness} is not inside {xs}"));
    }
    if !is_large(witness, alpha) {
        return Err(format!("witness {witness} is not {alpha}-large"));
    }
    let pos: Vec<usize> = witness
        .iter()
        .map(|w| xs.as_slice().binary_search(&w).expect("subset checked"))
        .collect();
    let assigned = &space.cells()[..prefix.len()];
    let needed: Vec<(usize, usize)> = if gamma.n() == 1 {
        pos.iter().map(|&p| (p, p)).collect()
    } else {
        let mut v = Vec::new();
        for (b, &j) in pos.iter().enumerate() {
            for &i in &pos[..b] {
                v.push((i, j));
            }
        }
        v
    };
    if let Some(missing) = needed.iter().find(|c| !assigned.contains(c)) {
        return Err(format!(
            "witness {witness} uses the uncolored tuple ({}, {})",
            xs.as_slice()[missing.0],
            xs.as_slice()[missing.1]
        ));
    }
    let f = lift_coloring(xs, gamma, space, prefix).map_err(|e| e.to_string())?;
    if !gamma.holds(&f, witness) {
        return Err(format!("witness {witness} fails {gamma}"));
    }
    Ok(())
}

/// Result of a threshold computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub start: u64,
    pub alpha: Ordinal,
    pub gamma: GammaSpec,
    /// Least `N` with `[start, N]` α-large(Γ), when found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<u64>,
    /// Set when the search stopped without an answer.
    pub indeterminate: bool,
    /// Largest `N` proven not to work (`None` if none was tried/proven).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub largest_false: Option<u64>,
    pub stats: Stats,
}

/// `(start, N, α, Γ)`.
type IntervalKey = (u64, u64, String, GammaSpec);

/// In-memory memo of decided intervals: verdict and the bad coloring, if any.
#[derive(Debug, Default)]
pub struct ThresholdMemo {
    decided: HashMap<IntervalKey, (bool, Vec<u8>)>,
}

impl ThresholdMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.decided.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decided.is_empty()
    }
}

/// Least `N ≥ start` such that `[start, N]` is α-large(Γ), increasing `N`
/// one at a time and seeding each search with the previous bad coloring.
///
/// Stops with an indeterminate report when the node budget is spent or
/// `max_n` is passed.
pub fn threshold(
    start: u64,
    alpha: &Ordinal,
    gamma: GammaSpec,
    max_n: u64,
    cfg: &SearchConfig,
    memo: &mut ThresholdMemo,
) -> Result<ThresholdReport> {
    check_search_gamma(gamma)?;
    if start < 2 {
        return Err(Error::Precondition("threshold start must be at least 2".into()));
    }
    let started = Instant::now();
    let mut total = SearchStats::default();
    let mut seed: Vec<u8> = Vec::new();
    let mut largest_false = None;
    let mut n = start;
    let finish = |threshold: Option<u64>, largest_false: Option<u64>, total: &SearchStats| ThresholdReport {
        start,
        alpha: alpha.clone(),
        gamma,
        threshold,
        indeterminate: threshold.is_none(),
        largest_false,
        stats: Stats::from_search(total, started),
    };
    while n <= max_n {
        let xs = FinSet::interval(start, n);
        if xs.len() > search::MAX_ELEMENTS {
            break;
        }
        let key = (start, n, alpha.to_string(), gamma);
        let decided = if let Some((v, bad)) = memo.decided.get(&key) {
            Some((*v, bad.clone()))
        } else if !is_large(&xs, alpha) {
            // No subset of an α-small set is α-large; any coloring is bad.
            Some((false, Vec::new()))
        } else {
            let rest = SearchConfig {
                budget: cfg.budget.saturating_sub(total.nodes),
                witness_cap: 0,
                ..*cfg
            };
            let out = is_large_gamma_seeded(&xs, alpha, gamma, &rest, &seed)?;
            let s = out.stats();
            total.nodes += s.nodes;
            total.probe_work += s.probe_work;
            total.covers += s.covers;
            match out {
                GammaOutcome::Indeterminate(_) => None,
                GammaOutcome::Decided(c) => {
                    let bad = match &c.bad_coloring {
                        Some(f) => {
                            let space = Space::new(xs.len(), gamma.n(), gamma.k(), true)?;
                            space
                                .cells()
                                .iter()
                                .map(|&(i, j)| {
                                    let v = xs.as_slice();
                                    if i == j {
                                        f.single(v[i])
                                    } else {
                                        f.pair(v[i], v[j])
                                    }
                                })
                                .collect()
                        }
                        None => Vec::new(),
                    };
                    memo.decided.insert(key, (c.verdict, bad.clone()));
                    Some((c.verdict, bad))
                }
            }
        };
        match decided {
            None => return Ok(finish(None, largest_false, &total)),
            Some((true, _)) => return Ok(finish(Some(n), largest_false, &total)),
            Some((false, bad)) => {
                largest_false = Some(n);
                if !bad.is_empty() {
                    seed = bad;
                }
            }
        }
        n += 1;
    }
    Ok(finish(None, largest_false, &total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{generate, GenKind};

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn set(v: &[u64]) -> FinSet {
        FinSet::new(v.to_vec()).unwrap()
    }

    fn rt22() -> GammaSpec {
        GammaSpec::rt(2, 2).unwrap()
    }

    fn triangle() -> Coloring {
        let mut f = Coloring::from_fn(2, 2, 4, |_, _| 0).unwrap();
        f.set_pair(2, 4, 1);
        f.set_pair(3, 4, 1);
        f
    }

    #[test]
    fn exists_solution_examples() {
        let zero = generate(&GenKind::Constant { n: 2, k: 2, c: 0 }, 4, 0).unwrap();
        let x = set(&[2, 3, 4]);
        assert_eq!(exists_solution(&x, &zero, rt22(), &o("w")).unwrap(), Some(x.clone()));
        assert_eq!(exists_solution(&x, &triangle(), rt22(), &o("w")).unwrap(), None);
        assert_eq!(
            exists_solution(&x, &triangle(), rt22(), &Ordinal::zero()).unwrap(),
            Some(FinSet::empty())
        );
        let single = generate(&GenKind::Constant { n: 1, k: 2, c: 0 }, 4, 0).unwrap();
        assert!(exists_solution(&x, &single, rt22(), &o("w")).is_err());
    }

    #[test]
    fn exists_solution_is_lex_first() {
        let f = generate(&GenKind::Uniform { n: 2, k: 2 }, 9, 3).unwrap();
        let x = FinSet::interval(1, 9);
        for g in [rt22(), GammaSpec::psrt(2).unwrap(), GammaSpec::Em] {
            for a in ["2", "3", "w"] {
                let got = exists_solution(&x, &f, g, &o(a)).unwrap();
                let mut best: Option<Vec<u64>> = None;
                for mask in 1u32..(1 << 9) {
                    let ys: Vec<u64> = (0..9).filter(|b| mask >> b & 1 == 1).map(|b| x.as_slice()[b]).collect();
                    let y = FinSet::new(ys.clone()).unwrap();
                    if is_large(&y, &o(a)) && g.holds(&f, &y) && best.as_ref().is_none_or(|b| ys < *b) {
                        best = Some(ys);
                    }
                }
                assert_eq!(got.map(|s| s.into_vec()), best, "{g} {a}");
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let cfg = SearchConfig::default();
        let out = is_large_gamma(&set(&[2, 3, 4]), &o("w"), rt22(), &cfg).unwrap();
        let c = out.certificate().unwrap();
        assert!(!c.verdict);
        let f = c.bad_coloring.as_ref().unwrap();
        assert_eq!((f.pair(2, 3), f.pair(2, 4), f.pair(3, 4)), (0, 1, 1));
        verify_certificate(c).unwrap();

        for g in [rt22(), GammaSpec::Em, GammaSpec::psrt(3).unwrap()] {
            let out = is_large_gamma(&set(&[5, 6]), &Ordinal::zero(), g, &cfg).unwrap();
            assert_eq!(out.verdict(), Some(true));
        }
        let rt21 = GammaSpec::rt(2, 1).unwrap();
        for hi in 2..12 {
            let x = FinSet::interval(2, hi);
            let out = is_large_gamma(&x, &o("w"), rt21, &cfg).unwrap();
            assert_eq!(out.verdict(), Some(is_large(&x, &o("w"))));
            verify_certificate(out.certificate().unwrap()).unwrap();
        }
    }

    #[test]
    fn positive_certificates_verify_with_full_logs() {
        let cfg = SearchConfig {
            witness_cap: usize::MAX,
            ..SearchConfig::default()
        };
        for g in [rt22(), GammaSpec::Em, GammaSpec::psrt(2).unwrap()] {
            let out = is_large_gamma(&FinSet::interval(1, 7), &o("3"), g, &cfg).unwrap();
            let c = out.certificate().unwrap();
            verify_certificate(c).unwrap();
            if c.verdict {
                let mut broken = c.clone();
                broken.witnesses.as_mut().unwrap().entries.pop();
                assert!(verify_certificate(&broken).is_err());
            }
        }
    }

    #[test]
    fn threshold_small_cases() {
        let cfg = SearchConfig::default();
        let mut memo = ThresholdMemo::new();
        let rt21 = GammaSpec::rt(2, 1).unwrap();
        let r = threshold(2, &o("w"), rt21, 40, &cfg, &mut memo).unwrap();
        assert_eq!(r.threshold, Some(4));
        for a in 2..9 {
            let r = threshold(a, &o("1"), rt22(), 40, &cfg, &mut memo).unwrap();
            assert_eq!(r.threshold, Some(a));
        }
        let tiny = SearchConfig { budget: 5, ..cfg };
        let r = threshold(2, &o("w"), rt22(), 40, &tiny, &mut ThresholdMemo::new()).unwrap();
        assert!(r.indeterminate);
    }
}
