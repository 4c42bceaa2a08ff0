//! Constructive extraction pipelines.
//!
//! * [`extract_pseudo_homogeneous`]: refine a 2-coloring into a
//!   `2k+2`-coloring whose homogeneous sets carry ω^k-large* pseudo-homogeneous
//!   chains, then glue the chains.
//! * [`extract_transitive`]: recursive grouping; transitive pieces inside
//!   blocks, glued along a homogeneous set of block maxima.
//! * [`extract_homogeneous_rt22`]: transitive set first, then its transitive
//!   completion, then a pseudo-homogeneous (hence homogeneous) subset.
//!
//! Pipelines never assume their guarantee thresholds; they run on any input
//! and report the stage that failed. Every witness is re-checked with the
//! plain predicates in [`crate::coloring`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coloring::{first_cyclic_triple, is_homogeneous, is_pseudo_homogeneous, is_transitive_on, Coloring, GammaSpec};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::gamma::exists_solution;
use crate::grouping::{find_grouping, LargenessNotion};
use crate::largeness::{is_large, is_large_star};
use crate::ordinal::Ordinal;

/// One step of a pipeline run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub input: FinSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<FinSet>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
}

impl Stage {
    fn new(name: impl Into<String>, input: &FinSet, output: Option<&FinSet>) -> Self {
        Stage {
            name: name.into(),
            input: input.clone(),
            output: output.cloned(),
            params: BTreeMap::new(),
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

/// Result of a pipeline: the witness (if any), the stage log and the
/// outcome of the independent re-check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub pipeline: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<FinSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<u8>,
    pub stages: Vec<Stage>,
    /// True iff the witness passed the target predicate and largeness.
    pub verified: bool,
    /// Name of the stage that failed, when no verified witness came out.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<String>,
    /// Human-readable notes (e.g. which proof case broke).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

impl ExtractionReport {
    fn new(pipeline: &str) -> Self {
        ExtractionReport {
            pipeline: pipeline.into(),
            witness: None,
            color: None,
            stages: Vec::new(),
            verified: false,
            failed_stage: None,
            trace: Vec::new(),
        }
    }

    fn fail(mut self, stage: &str, why: impl Into<String>) -> Self {
        self.failed_stage = Some(stage.into());
        self.trace.push(why.into());
        self
    }

    fn absorb(&mut self, prefix: &str, sub: &ExtractionReport) {
        for s in &sub.stages {
            let mut s = s.clone();
            s.name = format!("{prefix}/{}", s.name);
            self.stages.push(s);
        }
        for t in &sub.trace {
            self.trace.push(format!("{prefix}: {t}"));
        }
    }
}

fn check_pair_2coloring(f: &Coloring, xs: &FinSet) -> Result<()> {
    if f.n() != 2 || f.k() > 2 {
        return Err(Error::Precondition(format!(
            "pipelines need a 2-coloring of pairs (got n={}, k={})",
            f.n(),
            f.k()
        )));
    }
    if xs.max().is_some_and(|m| m > f.max()) {
        return Err(Error::Precondition("set exceeds the coloring domain".into()));
    }
    if xs.len() > crate::search::MAX_ELEMENTS {
        return Err(Error::Unsupported(format!(
            "pipelines accept at most {} elements",
            crate::search::MAX_ELEMENTS
        )));
    }
    Ok(())
}

/// Search for `H ⊆ (lo, hi) ∩ X ∪ {lo}` with `lo ∈ H`, `H` α-large*, and
/// `H ∪ {hi}` pseudo-homogeneous in color `c` (paths through `H ∪ {hi}`).
/// Returns the lexicographically first such `H`.
struct ChainSearch<'a> {
    f: &'a Coloring,
    c: u8,
    alpha: &'a Ordinal,
    nodes: u64,
}

impl ChainSearch<'_> {
    fn find(&mut self, lo: u64, inner: &[u64], hi: u64) -> Option<Vec<u64>> {
        let mut all = vec![lo];
        all.extend_from_slice(inner);
        // α-large* is closed under supersets, so the whole range bounds
        // everything below it.
        if !is_large_star(&FinSet::from_sorted_unchecked(all), self.alpha) {
            return None;
        }
        let mut chosen = vec![lo];
        let mut into: Vec<Vec<bool>> = vec![Vec::new()];
        self.rec(inner, 0, hi, &mut chosen, &mut into).then_some(chosen)
    }

    /// Positions of `chosen` that reach `e` in color `c` via `chosen`.
    fn reach(&self, chosen: &[u64], into: &[Vec<bool>], e: u64) -> Vec<bool> {
        let mut acc = vec![false; chosen.len()];
        for (m, &x) in chosen.iter().enumerate() {
            if self.f.pair(x, e) == self.c {
                acc[m] = true;
                for (a, r) in into[m].iter().enumerate() {
                    if *r {
                        acc[a] = true;
                    }
                }
            }
        }
        acc
    }

    fn rec(&mut self, inner: &[u64], from: usize, hi: u64, chosen: &mut Vec<u64>, into: &mut Vec<Vec<bool>>) -> bool {
        self.nodes += 1;
        let here = FinSet::from_sorted_unchecked(chosen.clone());
        if is_large_star(&here, self.alpha) && self.reach(chosen, into, hi).iter().all(|&r| r) {
            return true;
        }
        for t in from..inner.len() {
            let mut bound = chosen.clone();
            bound.extend_from_slice(&inner[t..]);
            if !is_large_star(&FinSet::from_sorted_unchecked(bound), self.alpha) {
                break;
            }
            let e = inner[t];
            let r = self.reach(chosen, into, e);
            if r.iter().all(|&x| x) {
                chosen.push(e);
                into.push(r);
                if self.rec(inner, t + 1, hi, chosen, into) {
                    return true;
                }
                chosen.pop();
                into.pop();
            }
        }
        false
    }
}

/// The refined coloring `f̄ : [X]² → 2k+2` (0 outside `X`):
/// `f̄(x,y) = 2j + f(x,y)` where `j` is the least `j' < k` for which no
/// ω^(j'+1)-large* chain from `x` reaches `y` in color `f(x,y)`, or `k` if
/// such chains exist for every `j' < k`.
pub fn bar_coloring(xs: &FinSet, f: &Coloring, k: u32) -> Result<Coloring> {
    check_pair_2coloring(f, xs)?;
    let colors = 2 * k + 2;
    if colors > crate::coloring::MAX_COLORS {
        return Err(Error::Unsupported(format!("refined coloring with {colors} colors")));
    }
    let v = xs.as_slice();
    let max = xs.max().unwrap_or(0);
    let mut out = Coloring::from_fn(2, colors, max, |_, _| 0)?;
    let alphas: Vec<Ordinal> = (0..k).map(|j| Ordinal::omega_pow(j as u64 + 1)).collect();
    for b in 1..v.len() {
        for a in 0..b {
            let (x, y) = (v[a], v[b]);
            let i = f.pair(x, y);
            let mut j = k;
            for (jp, alpha) in alphas.iter().enumerate() {
                let mut s = ChainSearch { f, c: i, alpha, nodes: 0 };
                if s.find(x, &v[a + 1..b], y).is_none() {
                    j = jp as u32;
                    break;
                }
            }
            out.set_pair(x, y, (2 * j + i as u32) as u8);
        }
    }
    Ok(out)
}

/// Pseudo-homogeneous extraction for a 2-coloring `f` of pairs.
pub fn extract_pseudo_homogeneous(xs: &FinSet, f: &Coloring, k: u32, target: &Ordinal) -> Result<ExtractionReport> {
    check_pair_2coloring(f, xs)?;
    let mut rep = ExtractionReport::new("psrt");
    let one = Ordinal::nat(1);

    if *target <= one {
        // Small targets: the empty set or a singleton already qualifies.
        let w = if target.is_zero() {
            Some(FinSet::empty())
        } else {
            xs.min().map(|m| FinSet::new(vec![m]).expect("singleton"))
        };
        rep.stages.push(Stage::new("trivial", xs, w.as_ref()).param("target", target));
        let Some(w) = w else {
            return Ok(rep.fail("trivial", "empty input has no singleton"));
        };
        rep.color = Some(0);
        rep.verified = is_pseudo_homogeneous(f, &w).is_some() && is_large(&w, target);
        rep.witness = Some(w);
        return Ok(rep);
    }

    // Stage 1: refined coloring.
    let fbar = bar_coloring(xs, f, k)?;
    rep.stages.push(Stage::new("bar-coloring", xs, Some(xs)).param("colors", 2 * k + 2));

    // Stage 2: ω-large homogeneous set for the refined coloring.
    let g = GammaSpec::rt(2, 2 * k + 2)?;
    let y = exists_solution(xs, &fbar, g, &Ordinal::omega())?;
    rep.stages.push(Stage::new("homogeneous", xs, y.as_ref()).param("alpha", "w"));
    let Some(y) = y else {
        return Ok(rep.fail("homogeneous", "no w-large set is homogeneous for the refined coloring"));
    };
    let ys = y.as_slice();
    if ys.len() < 2 {
        return Ok(rep.fail("assemble", "homogeneous set has fewer than two elements"));
    }
    let hc = fbar.pair(ys[0], ys[1]) as u32;
    let (j, i) = (hc / 2, (hc % 2) as u8);
    if j < k {
        return Ok(rep.fail(
            "assemble",
            format!("homogeneous color {hc} has level {j} < {k}; chains cannot be glued"),
        ));
    }

    // Stage 3: glue ω^k-large* chains between consecutive elements of Y.
    let alpha = Ordinal::omega_pow(k as u64);
    let v = xs.as_slice();
    let mut h = Vec::new();
    for s in 0..ys.len() - 1 {
        let (lo, hi) = (ys[s], ys[s + 1]);
        let a = v.binary_search(&lo).expect("Y ⊆ X");
        let b = v.binary_search(&hi).expect("Y ⊆ X");
        let mut cs = ChainSearch {
            f,
            c: i,
            alpha: &alpha,
            nodes: 0,
        };
        match cs.find(lo, &v[a + 1..b], hi) {
            Some(piece) => h.extend(piece),
            None => {
                return Ok(rep.fail(
                    "assemble",
                    format!("no {alpha}-large* chain from {lo} to {hi} in color {i}"),
                ))
            }
        }
    }
    let h = FinSet::from_sorted_unchecked(h);
    rep.stages.push(
        Stage::new("assemble", &y, Some(&h))
            .param("color", i)
            .param("blocks", ys.len() - 1)
            .param("chain-alpha", &alpha),
    );
    rep.trace.push(format!(
        "union is {}-large*: {}",
        Ordinal::omega_pow(k as u64 + 1),
        is_large_star(&h, &Ordinal::omega_pow(k as u64 + 1))
    ));
    rep.verified = is_pseudo_homogeneous(f, &h).is_some() && is_large(&h, target);
    if !rep.verified {
        rep.failed_stage = Some("verify".into());
        rep.trace.push(format!("assembled set {h} is not a {target}-large pseudo-homogeneous set"));
    }
    rep.color = Some(i);
    rep.witness = Some(h);
    Ok(rep)
}

/// Parameters for [`extract_transitive`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitiveParams {
    /// `level_map[0]`: largeness of base-case transitive sets;
    /// `level_map[d]` (d ≥ 1): largeness of grouping blocks at depth `d`.
    /// The recursion depth is `level_map.len() - 1`.
    pub level_map: Vec<Ordinal>,
    /// Largeness required of block transversals.
    pub l2: LargenessNotion,
    /// Largeness of the homogeneous set chosen among block maxima.
    pub tilde_alpha: Ordinal,
    /// Largeness checked on the final witness (defaults to `level_map[0]`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Ordinal>,
}

impl TransitiveParams {
    /// Demo parameters: cardinality levels, *not* derived from any bound.
    pub fn demo(depth: usize, size: usize) -> Self {
        let base = (size as u64 / 4).max(2);
        let mut level_map = vec![Ordinal::nat(base)];
        for d in 1..=depth {
            level_map.push(Ordinal::nat(base + d as u64));
        }
        TransitiveParams {
            level_map,
            l2: LargenessNotion::Cardinality(2),
            tilde_alpha: Ordinal::nat(2),
            target: None,
        }
    }

    pub fn depth(&self) -> usize {
        self.level_map.len().saturating_sub(1)
    }

    fn target(&self) -> Ordinal {
        self.target.clone().unwrap_or_else(|| self.level_map[0].clone())
    }
}

fn transitive_rec(
    xs: &FinSet,
    f: &Coloring,
    d: usize,
    p: &TransitiveParams,
    rep: &mut ExtractionReport,
    top_blocks: &mut Option<Vec<FinSet>>,
) -> Result<Option<FinSet>> {
    if d == 0 {
        let h = exists_solution(xs, f, GammaSpec::Em, &p.level_map[0])?
            .map(|h| greedy_extend(&h, xs, |t| is_transitive_on(f, t)));
        rep.stages.push(Stage::new("base", xs, h.as_ref()).param("alpha", &p.level_map[0]));
        if h.is_none() {
            rep.trace.push(format!("no {}-large transitive subset of {xs}", p.level_map[0]));
        }
        return Ok(h);
    }
    let l1 = LargenessNotion::Ordinal(p.level_map[d].clone());
    let Some(g) = find_grouping(xs, f, &l1, &p.l2)? else {
        rep.stages.push(Stage::new(format!("grouping-{d}"), xs, None).param("l1", &l1).param("l2", &p.l2));
        rep.trace.push(format!("no ({l1}, {})-grouping at depth {d}", p.l2));
        return Ok(None);
    };
    let covered = FinSet::from_unsorted(g.blocks.iter().flat_map(|b| b.iter()));
    rep.stages.push(
        Stage::new(format!("grouping-{d}"), xs, Some(&covered))
            .param("l1", &l1)
            .param("l2", &p.l2)
            .param("blocks", g.blocks.len()),
    );
    if top_blocks.is_none() {
        *top_blocks = Some(g.blocks.clone());
    }
    let mut pieces: Vec<(u64, FinSet)> = Vec::new();
    for b in &g.blocks {
        let mut inner = None;
        if let Some(hb) = transitive_rec(b, f, d - 1, p, rep, &mut inner)? {
            pieces.push((b.max().expect("blocks are nonempty"), hb));
        }
    }
    let maxima = FinSet::from_sorted_unchecked(pieces.iter().map(|(m, _)| *m).collect());
    let tilde = exists_solution(&maxima, f, GammaSpec::rt(2, 2)?, &p.tilde_alpha)?
        .map(|t| greedy_extend(&t, &maxima, |s| is_homogeneous(f, s).is_some()));
    rep.stages.push(Stage::new(format!("maxima-{d}"), &maxima, tilde.as_ref()).param("alpha", &p.tilde_alpha));
    let Some(tilde) = tilde else {
        rep.trace.push(format!("no {}-large homogeneous set among block maxima {maxima}", p.tilde_alpha));
        return Ok(None);
    };
    let h = FinSet::from_unsorted(
        pieces
            .iter()
            .filter(|(m, _)| tilde.contains(*m))
            .flat_map(|(_, hb)| hb.iter()),
    );
    rep.stages.push(Stage::new(format!("union-{d}"), &tilde, Some(&h)));
    Ok(Some(h))
}

/// Adds elements of `pool` to `base` left to right while `keep` holds.
/// Largeness is closed under supersets, so the result stays large.
fn greedy_extend(base: &FinSet, pool: &FinSet, keep: impl Fn(&FinSet) -> bool) -> FinSet {
    let mut cur = base.clone();
    for x in pool.iter() {
        if cur.contains(x) {
            continue;
        }
        let next = cur.union(&FinSet::new(vec![x]).expect("singleton"));
        if keep(&next) {
            cur = next;
        }
    }
    cur
}

/// Names which case of the block argument a cyclic triple falls into.
fn explain_triple(blocks: &[FinSet], t: (u64, u64, u64)) -> String {
    let which = |x: u64| blocks.iter().position(|b| b.contains(x));
    let (a, b, c) = (which(t.0), which(t.1), which(t.2));
    let case = match (a, b, c) {
        (Some(p), Some(q), Some(r)) if p == q && q == r => "all three in one block",
        (Some(p), Some(q), Some(_)) if p == q => "two in an earlier block, one later",
        (Some(_), Some(q), Some(r)) if q == r => "one in an earlier block, two later",
        (Some(_), Some(_), Some(_)) => "three different blocks",
        _ => "outside the top-level blocks",
    };
    format!("cyclic triple ({}, {}, {}): {case}", t.0, t.1, t.2)
}

/// Transitive-subtournament extraction by recursive grouping.
pub fn extract_transitive(xs: &FinSet, f: &Coloring, p: &TransitiveParams) -> Result<ExtractionReport> {
    check_pair_2coloring(f, xs)?;
    if p.level_map.is_empty() {
        return Err(Error::Precondition("level map needs at least one entry".into()));
    }
    let mut rep = ExtractionReport::new("em");
    let mut top = None;
    let h = transitive_rec(xs, f, p.depth(), p, &mut rep, &mut top)?;
    let Some(h) = h else {
        let failed = rep.stages.iter().rev().find(|s| s.output.is_none()).map(|s| s.name.clone());
        rep.failed_stage = failed.or(Some("search".into()));
        return Ok(rep);
    };
    let target = p.target();
    let transitive = is_transitive_on(f, &h);
    let large = is_large(&h, &target);
    if let Some(t) = first_cyclic_triple(f, &h) {
        rep.trace.push(explain_triple(top.as_deref().unwrap_or(&[]), t));
    }
    if !large {
        rep.trace.push(format!("{h} is not {target}-large"));
    }
    rep.verified = transitive && large;
    if !rep.verified {
        rep.failed_stage = Some("verify".into());
    }
    rep.witness = Some(h);
    Ok(rep)
}

/// The transitive completion of `f` relative to `H₀` over `[0, max H₀]`:
/// `0` when `x ∉ H₀`, `1` when `x ∈ H₀, y ∉ H₀`, and `f(x,y)` inside `H₀`
/// (always `x < y`).
pub fn transitive_completion(f: &Coloring, h0: &FinSet) -> Result<Coloring> {
    if f.n() != 2 || f.k() > 2 {
        return Err(Error::Precondition("completion needs a 2-coloring of pairs".into()));
    }
    let max = h0.max().unwrap_or(0);
    if max > f.max() {
        return Err(Error::Precondition("set exceeds the coloring domain".into()));
    }
    Coloring::from_fn(2, 2, max, |x, y| match (h0.contains(x), h0.contains(y)) {
        (false, _) => 0,
        (true, false) => 1,
        (true, true) => f.pair(x, y),
    })
}

/// Parameters for [`extract_homogeneous_rt22`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rt22Params {
    pub transitive: TransitiveParams,
    /// Largeness required of the final homogeneous set.
    pub target: Ordinal,
}

/// Homogeneous extraction for 2-colorings: transitive set, transitive
/// completion, then pseudo-homogeneous extraction on the completion.
pub fn extract_homogeneous_rt22(xs: &FinSet, f: &Coloring, k_level: u32, p: &Rt22Params) -> Result<ExtractionReport> {
    check_pair_2coloring(f, xs)?;
    let mut rep = ExtractionReport::new("rt22");
    let em = extract_transitive(xs, f, &p.transitive)?;
    rep.absorb("transitive", &em);
    let h0 = match (&em.witness, em.verified || is_transitive_on_opt(f, em.witness.as_ref())) {
        (Some(h0), true) => h0.clone(),
        _ => {
            let stage = em.failed_stage.clone().unwrap_or_else(|| "search".into());
            return Ok(rep.fail(&format!("transitive/{stage}"), "no transitive set"));
        }
    };
    let fp = transitive_completion(f, &h0)?;
    rep.stages.push(Stage::new("completion", &h0, Some(&h0)).param("max", fp.max()));
    let ps = extract_pseudo_homogeneous(&h0, &fp, k_level, &p.target)?;
    rep.absorb("psrt", &ps);
    let Some(w) = ps.witness.clone() else {
        let stage = ps.failed_stage.clone().unwrap_or_else(|| "search".into());
        rep.failed_stage = Some(format!("psrt/{stage}"));
        return Ok(rep);
    };
    let homog = is_homogeneous(f, &w);
    rep.color = homog;
    rep.verified = homog.is_some() && is_large(&w, &p.target);
    if !rep.verified {
        rep.failed_stage = Some("verify".into());
        rep.trace.push(format!("{w} is not a {}-large homogeneous set", p.target));
    }
    rep.witness = Some(w);
    Ok(rep)
}

fn is_transitive_on_opt(f: &Coloring, h: Option<&FinSet>) -> bool {
    h.is_some_and(|h| is_transitive_on(f, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{generate, GenKind};

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn constant(max: u64) -> Coloring {
        generate(&GenKind::Constant { n: 2, k: 2, c: 0 }, max, 0).unwrap()
    }

    #[test]
    fn psrt_constant_coloring() {
        let x = FinSet::interval(2, 14);
        let r = extract_pseudo_homogeneous(&x, &constant(14), 1, &o("w")).unwrap();
        assert!(r.verified, "{r:?}");
        assert_eq!(r.color, Some(0));
        assert!(is_large(r.witness.as_ref().unwrap(), &o("w")));
    }

    #[test]
    fn psrt_trivial_target() {
        let f = generate(&GenKind::Uniform { n: 2, k: 2 }, 9, 1).unwrap();
        let r = extract_pseudo_homogeneous(&FinSet::interval(5, 9), &f, 0, &o("1")).unwrap();
        assert!(r.verified);
        assert_eq!(r.witness.unwrap().as_slice(), &[5]);
    }

    #[test]
    fn psrt_fails_at_homogeneous_stage() {
        let mut f = constant(4);
        f.set_pair(2, 4, 1);
        f.set_pair(3, 4, 1);
        let r = extract_pseudo_homogeneous(&FinSet::interval(2, 4), &f, 0, &o("w")).unwrap();
        assert!(!r.verified);
        assert_eq!(r.failed_stage.as_deref(), Some("homogeneous"));
    }

    #[test]
    fn bar_values_in_range() {
        for seed in 0..5 {
            let f = generate(&GenKind::Uniform { n: 2, k: 2 }, 12, seed).unwrap();
            let x = FinSet::interval(4, 12);
            for k in 0..3 {
                let fb = bar_coloring(&x, &f, k).unwrap();
                assert!(fb.entries().iter().all(|&c| (c as u32) < 2 * k + 2));
                for b in 1..x.len() {
                    for a in 0..b {
                        let (p, q) = (x.as_slice()[a], x.as_slice()[b]);
                        assert_eq!(fb.pair(p, q) % 2, f.pair(p, q));
                    }
                }
            }
        }
    }

    #[test]
    fn transitive_on_constant_and_linear() {
        let x = FinSet::interval(4, 15);
        let p = TransitiveParams::demo(1, x.len());
        let r = extract_transitive(&x, &constant(15), &p).unwrap();
        assert!(r.verified, "{r:?}");
        let lin = generate(&GenKind::LinearOrder { order: None }, 15, 3).unwrap();
        for depth in 0..2 {
            let r = extract_transitive(&x, &lin, &TransitiveParams::demo(depth, x.len())).unwrap();
            assert!(r.verified, "depth {depth}: {r:?}");
        }
    }

    #[test]
    fn completion_rule() {
        let f = generate(&GenKind::Uniform { n: 2, k: 2 }, 10, 7).unwrap();
        let h0 = FinSet::new(vec![2, 5, 7]).unwrap();
        let fp = transitive_completion(&f, &h0).unwrap();
        assert_eq!(fp.pair(3, 5), 0);
        assert_eq!(fp.pair(2, 3), 1);
        assert_eq!(fp.pair(5, 7), f.pair(5, 7));
        assert_eq!(fp.pair(2, 5), f.pair(2, 5));
    }

    #[test]
    fn rt22_constant_pipeline() {
        let x = FinSet::interval(4, 14);
        let params = Rt22Params {
            transitive: TransitiveParams::demo(0, x.len()),
            target: o("2"),
        };
        let r = extract_homogeneous_rt22(&x, &constant(14), 0, &params).unwrap();
        assert!(r.verified, "{r:?}");
        assert_eq!(r.color, Some(0));
    }
}
