//! m-density and the explicit exponent bounds.
//!
//! `Z` is 0-dense iff it is ω-large and `min Z > 1`. `Z` is (m+1)-dense iff
//! 1. every coloring of `[0, max Z]` has an m-dense solution inside `Z`, and
//! 2. for every split of `Z` into consecutive runs `Z₀ < … < Z_{ℓ-1}` with
//!    `ℓ ≤ min Z`, some run is m-dense.
//!
//! Checks run on one thread so that budgets are charged deterministically.
//! Beyond m = 1 expect indeterminate verdicts.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::coloring::{Coloring, GammaSpec};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::gamma::{lift_coloring, Stats};
use crate::largeness::is_large;
use crate::ordinal::Ordinal;
use crate::search::{explore, Limits, Outcome, Probe, SearchStats, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityParams {
    /// Density depth.
    pub m: u32,
    pub gamma: GammaSpec,
    /// Node budget shared by every nested search.
    pub budget: u64,
}

/// Why a set is not dense.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensityFailure {
    /// Depth 0: not ω-large, or `min ≤ 1`.
    Base { reason: String },
    /// A coloring without an (m-1)-dense solution.
    Coloring { coloring: Coloring },
    /// A split into runs none of which is (m-1)-dense.
    Partition { blocks: Vec<FinSet> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityCertificate {
    pub verdict: bool,
    pub m: u32,
    pub gamma: GammaSpec,
    pub set: FinSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<DensityFailure>,
    pub stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityIndeterminate {
    pub indeterminate: bool,
    pub m: u32,
    pub gamma: GammaSpec,
    pub set: FinSet,
    pub budget: u64,
    pub stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DensityOutcome {
    Decided(DensityCertificate),
    Indeterminate(DensityIndeterminate),
}

impl DensityOutcome {
    pub fn verdict(&self) -> Option<bool> {
        match self {
            DensityOutcome::Decided(c) => Some(c.verdict),
            DensityOutcome::Indeterminate(_) => None,
        }
    }

    pub fn stats(&self) -> &Stats {
        match self {
            DensityOutcome::Decided(c) => &c.stats,
            DensityOutcome::Indeterminate(i) => &i.stats,
        }
    }
}

/// Calls `visit` on every split of `z` into consecutive nonempty runs with at
/// most `min z` runs, in lexicographic order of cut positions. Stops early
/// when `visit` returns false; returns whether it ran to completion.
pub fn for_each_ordered_partition(z: &[u64], mut visit: impl FnMut(&[&[u64]]) -> bool) -> bool {
    let Some(&first) = z.first() else {
        return true;
    };
    let max_runs = first.min(z.len() as u64) as usize;
    let mut runs: Vec<&[u64]> = Vec::new();
    fn rec<'a>(rest: &'a [u64], max_runs: usize, runs: &mut Vec<&'a [u64]>, visit: &mut dyn FnMut(&[&[u64]]) -> bool) -> bool {
        if rest.is_empty() {
            return visit(runs);
        }
        if runs.len() == max_runs {
            return true;
        }
        for cut in 1..=rest.len() {
            runs.push(&rest[..cut]);
            let go = rec(&rest[cut..], max_runs, runs, visit);
            runs.pop();
            if !go {
                return false;
            }
        }
        true
    }
    rec(z, max_runs, &mut runs, &mut visit)
}

/// All admissible splits of `z` (see [`for_each_ordered_partition`]).
pub fn ordered_partitions(z: &FinSet) -> Vec<Vec<FinSet>> {
    let mut out = Vec::new();
    for_each_ordered_partition(z.as_slice(), |runs| {
        out.push(runs.iter().map(|r| FinSet::from_sorted_unchecked(r.to_vec())).collect());
        true
    });
    out
}

/// Ψ on local indices, read from an assigned matrix.
fn psi_holds(gamma: GammaSpec, mat: &[u8], l: usize, ys: &[usize]) -> bool {
    let c = |a: usize, b: usize| mat[a * l + b];
    match gamma {
        GammaSpec::Rt { n: 1, .. } => ys.windows(2).all(|w| c(w[0], w[0]) == c(w[1], w[1])),
        GammaSpec::Rt { .. } => {
            let mut first = None;
            for (q, &b) in ys.iter().enumerate() {
                for &a in &ys[..q] {
                    match first {
                        None => first = Some(c(a, b)),
                        Some(f) if f != c(a, b) => return false,
                        _ => {}
                    }
                }
            }
            true
        }
        GammaSpec::Em => {
            for (r, &z) in ys.iter().enumerate() {
                for (q, &y) in ys[..r].iter().enumerate() {
                    for &x in &ys[..q] {
                        if c(x, y) == c(y, z) && c(x, y) != c(x, z) {
                            return false;
                        }
                    }
                }
            }
            true
        }
        GammaSpec::Psrt { k } => (0..k as u8).any(|col| {
            // reach[q]: positions that reach ys[q] along increasing col-paths.
            let mut reach: Vec<Vec<bool>> = Vec::with_capacity(ys.len());
            for (q, &b) in ys.iter().enumerate() {
                let mut r = vec![false; q];
                for (p, &a) in ys[..q].iter().enumerate() {
                    if c(a, b) == col {
                        r[p] = true;
                        for (s, &x) in reach[p].iter().enumerate() {
                            if x {
                                r[s] = true;
                            }
                        }
                    }
                }
                if !r.iter().all(|&x| x) {
                    return false;
                }
                reach.push(r);
            }
            true
        }),
    }
}

struct Checker {
    gamma: GammaSpec,
    budget: u64,
    spent: AtomicU64,
    probe_work: AtomicU64,
    exhausted: AtomicBool,
    memo: Mutex<HashMap<(Vec<u64>, u32), bool>>,
}

impl Checker {
    fn new(gamma: GammaSpec, budget: u64) -> Self {
        Checker {
            gamma,
            budget,
            spent: AtomicU64::new(0),
            probe_work: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
            memo: Mutex::new(HashMap::new()),
        }
    }

    fn charge(&self, n: u64) -> bool {
        let now = self.spent.fetch_add(n, Ordering::Relaxed).saturating_add(n);
        if now > self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !self.exhausted.load(Ordering::Relaxed)
    }

    fn remaining(&self) -> u64 {
        self.budget.saturating_sub(self.spent.load(Ordering::Relaxed))
    }

    fn base(z: &[u64]) -> std::result::Result<(), String> {
        match z.first() {
            None => Err("empty set".into()),
            Some(&m) if m <= 1 => Err(format!("min {m} is not > 1")),
            _ if !is_large(&FinSet::from_sorted_unchecked(z.to_vec()), &Ordinal::omega()) => Err("not w-large".into()),
            _ => Ok(()),
        }
    }

    /// `None` when the budget ran out.
    fn dense(&self, z: &[u64], m: u32) -> Option<bool> {
        if m == 0 {
            return Some(Self::base(z).is_ok());
        }
        let key = (z.to_vec(), m);
        if let Some(&v) = self.memo.lock().expect("memo lock").get(&key) {
            return Some(v);
        }
        let v = self.decide(z, m)?.is_none();
        self.memo.lock().expect("memo lock").insert(key, v);
        Some(v)
    }

    /// `Some(None)`: dense; `Some(Some(f))`: not dense because of `f`.
    fn decide(&self, z: &[u64], m: u32) -> Option<Option<DensityFailure>> {
        if m == 0 || z.first().is_some_and(|&x| x <= 1) {
            return Some(Self::base(z).err().map(|reason| DensityFailure::Base { reason }));
        }
        if let Some(f) = self.partition_clause(z, m)? {
            return Some(Some(f));
        }
        self.coloring_clause(z, m)
    }

    /// Clause 2: some run of every admissible split is (m-1)-dense.
    fn partition_clause(&self, z: &[u64], m: u32) -> Option<Option<DensityFailure>> {
        let mut bad_split = None;
        let mut out_of_budget = false;
        for_each_ordered_partition(z, |runs| {
            if !self.charge(1) {
                out_of_budget = true;
                return false;
            }
            for r in runs {
                match self.dense(r, m - 1) {
                    Some(true) => return true,
                    Some(false) => {}
                    None => {
                        out_of_budget = true;
                        return false;
                    }
                }
            }
            bad_split = Some(runs.iter().map(|r| FinSet::from_sorted_unchecked(r.to_vec())).collect());
            false
        });
        if out_of_budget {
            return None;
        }
        if let Some(blocks) = bad_split {
            return Some(Some(DensityFailure::Partition { blocks }));
        }
        if z.is_empty() {
            // No split exists, and no coloring has a solution in ∅.
            return Some(Some(DensityFailure::Partition { blocks: Vec::new() }));
        }
        Some(None)
    }

    /// Clause 1: every coloring has an (m-1)-dense Ψ-solution.
    fn coloring_clause(&self, z: &[u64], m: u32) -> Option<Option<DensityFailure>> {
        let space = Space::new(z.len(), self.gamma.n(), self.gamma.k(), true).ok()?;
        let probe = DenseProbe {
            checker: self,
            space: &space,
            z,
            m: m - 1,
        };
        let limits = Limits {
            budget: self.remaining(),
            jobs: 1,
            cover_cap: 0,
        };
        let out = explore(&space, &probe, &limits);
        self.charge(out.stats.nodes);
        match out.outcome {
            Outcome::Covered { .. } => Some(None),
            Outcome::Bad { colors } => {
                let xs = FinSet::from_sorted_unchecked(z.to_vec());
                let coloring = lift_coloring(&xs, self.gamma, &space, &colors).ok()?;
                Some(Some(DensityFailure::Coloring { coloring }))
            }
            Outcome::Exhausted => {
                self.exhausted.store(true, Ordering::Relaxed);
                None
            }
        }
    }
}

/// Covers a subtree once some Ψ-set with max at the finished column is
/// m-dense.
struct DenseProbe<'a> {
    checker: &'a Checker,
    space: &'a Space,
    z: &'a [u64],
    m: u32,
}

impl DenseProbe<'_> {
    fn dense_local(&self, ys: &[usize]) -> Option<bool> {
        let vals: Vec<u64> = ys.iter().map(|&i| self.z[i]).collect();
        self.checker.dense(&vals, self.m)
    }

    /// Lex-first `S ∪ {top}` with `S ⊆ 0..top`, Ψ, and m-dense.
    fn search(&self, mat: &[u8], top: usize, chosen: &mut Vec<usize>, from: usize, work: &mut u64) -> Option<Vec<usize>> {
        *work += 1;
        if self.checker.exhausted.load(Ordering::Relaxed) {
            return None;
        }
        let l = self.space.l();
        chosen.push(top);
        let hit = psi_holds(self.checker.gamma, mat, l, chosen) && self.dense_local(chosen) == Some(true);
        chosen.pop();
        if hit {
            let mut w = chosen.clone();
            w.push(top);
            return Some(w);
        }
        for e in from..top {
            chosen.push(e);
            if psi_holds(self.checker.gamma, mat, l, chosen) {
                if let Some(w) = self.search(mat, top, chosen, e + 1, work) {
                    chosen.pop();
                    return Some(w);
                }
            }
            chosen.pop();
        }
        None
    }
}

impl Probe for DenseProbe<'_> {
    type Witness = Vec<usize>;
    type Scratch = Vec<usize>;

    fn scratch(&self) -> Vec<usize> {
        Vec::new()
    }

    fn root(&self, _: &mut Vec<usize>, work: &mut u64) -> Option<Vec<usize>> {
        if self.space.n() != 2 {
            return None;
        }
        for i in 0..self.space.l() {
            *work += 1;
            if self.dense_local(&[i]) == Some(true) {
                return Some(vec![i]);
            }
        }
        None
    }

    fn after(&self, mat: &[u8], cell: usize, chosen: &mut Vec<usize>, work: &mut u64) -> Option<Vec<usize>> {
        let (i, j) = self.space.cells()[cell];
        // Only complete columns are examined.
        if i != j && i + 1 != j {
            return None;
        }
        chosen.clear();
        let mut w = 0;
        let r = self.search(mat, j, chosen, 0, &mut w);
        *work += w;
        self.checker.probe_work.fetch_add(w, Ordering::Relaxed);
        r
    }

    fn aborted(&self) -> bool {
        self.checker.exhausted.load(Ordering::Relaxed)
    }
}

fn check_gamma(gamma: GammaSpec) -> Result<()> {
    if gamma.n() > 2 {
        return Err(Error::Unsupported(format!("{gamma}: density supports tuple size ≤ 2")));
    }
    Ok(())
}

fn check_size(z: &FinSet) -> Result<()> {
    if z.len() > crate::search::MAX_ELEMENTS {
        return Err(Error::Unsupported(format!(
            "density checks accept at most {} elements",
            crate::search::MAX_ELEMENTS
        )));
    }
    Ok(())
}

/// Both clauses of (m ≥ 1)-density evaluated separately; `None` marks a
/// clause whose check ran out of budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseVerdicts {
    pub coloring: Option<bool>,
    pub partition: Option<bool>,
}

pub fn density_clauses(z: &FinSet, p: &DensityParams) -> Result<ClauseVerdicts> {
    check_gamma(p.gamma)?;
    check_size(z)?;
    if p.m == 0 || z.min().is_some_and(|x| x <= 1) {
        return Err(Error::Precondition("clauses need m ≥ 1 and min Z > 1".into()));
    }
    let v = z.as_slice();
    let run = |f: &dyn Fn(&Checker) -> Option<Option<DensityFailure>>| {
        let c = Checker::new(p.gamma, p.budget);
        f(&c).filter(|_| !c.exhausted.load(Ordering::Relaxed)).map(|r| r.is_none())
    };
    Ok(ClauseVerdicts {
        coloring: run(&|c| c.coloring_clause(v, p.m)),
        partition: run(&|c| c.partition_clause(v, p.m)),
    })
}

/// Decides m-density of `z`, or reports that the budget ran out.
pub fn is_m_dense(z: &FinSet, p: &DensityParams) -> Result<DensityOutcome> {
    check_gamma(p.gamma)?;
    check_size(z)?;
    let started = Instant::now();
    let checker = Checker::new(p.gamma, p.budget);
    let r = checker.decide(z.as_slice(), p.m);
    let stats = Stats::from_search(
        &SearchStats {
            nodes: checker.spent.load(Ordering::Relaxed),
            probe_work: checker.probe_work.load(Ordering::Relaxed),
            covers: 0,
        },
        started,
    );
    Ok(match r {
        Some(failure) if !checker.exhausted.load(Ordering::Relaxed) => DensityOutcome::Decided(DensityCertificate {
            verdict: failure.is_none(),
            m: p.m,
            gamma: p.gamma,
            set: z.clone(),
            failure,
            stats,
        }),
        _ => DensityOutcome::Indeterminate(DensityIndeterminate {
            indeterminate: true,
            m: p.m,
            gamma: p.gamma,
            set: z.clone(),
            budget: p.budget,
            stats,
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum DenseSubset {
    Found { set: FinSet, stats: Stats },
    Absent { stats: Stats },
    Indeterminate { budget: u64, stats: Stats },
}

/// Shortest m-dense prefix of `pool` (elements ≤ 1 are dropped first, since
/// no dense set contains them).
pub fn find_m_dense_subset(pool: &FinSet, p: &DensityParams) -> Result<DenseSubset> {
    check_gamma(p.gamma)?;
    let started = Instant::now();
    let v: Vec<u64> = pool.iter().filter(|&x| x > 1).collect();
    let checker = Checker::new(p.gamma, p.budget);
    let mut found = None;
    let mut out_of_budget = false;
    for len in 1..=v.len() {
        match checker.dense(&v[..len], p.m) {
            Some(true) => {
                found = Some(FinSet::from_sorted_unchecked(v[..len].to_vec()));
                break;
            }
            Some(false) => {}
            None => {
                out_of_budget = true;
                break;
            }
        }
    }
    let stats = Stats::from_search(
        &SearchStats {
            nodes: checker.spent.load(Ordering::Relaxed),
            probe_work: checker.probe_work.load(Ordering::Relaxed),
            covers: 0,
        },
        started,
    );
    Ok(match (found, out_of_budget) {
        (Some(set), _) => DenseSubset::Found { set, stats },
        (None, true) => DenseSubset::Indeterminate { budget: p.budget, stats },
        (None, false) => DenseSubset::Absent { stats },
    })
}

/// Exponent `e` such that ω^e-large sets are large for pseudo-homogeneous
/// pair colorings with `k` colors: `2k + 6`.
pub fn bound_psrt_exponent(k: u64) -> u128 {
    2 * k as u128 + 6
}

/// Exponent for the Ketonen–Solovay bound with `k` colors: `k + 4`.
pub fn bound_ks_exponent(k: u64) -> u128 {
    k as u128 + 4
}

/// Exponent `3^(m+1)` for m-density of pseudo-homogeneous pair colorings.
pub fn bound_psrt_density_exponent(m: u32) -> BigUint {
    BigUint::from(3u32).pow(m + 1)
}

/// `h(0) = 1`, `h(m+1) = max(n_of(h(m)), h(m) + 1)`.
pub fn h_chain(n_of: impl Fn(u64) -> Option<u64>, m: u64) -> Result<u64> {
    let mut h: u64 = 1;
    for step in 0..m {
        let n = n_of(h).ok_or_else(|| Error::Missing(format!("no bound for level {h} (step {step})")))?;
        let next = h
            .checked_add(1)
            .ok_or_else(|| Error::Unsupported("h-chain overflows 64 bits".into()))?;
        h = n.max(next);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: u32, gamma: &str) -> DensityParams {
        DensityParams {
            m,
            gamma: gamma.parse().unwrap(),
            budget: 10_000_000,
        }
    }

    fn fs(v: &[u64]) -> FinSet {
        FinSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn depth_zero() {
        let r = is_m_dense(&fs(&[2, 3, 4]), &params(0, "rt:2:2")).unwrap();
        assert_eq!(r.verdict(), Some(true));
        let r = is_m_dense(&fs(&[1, 2, 3]), &params(0, "rt:2:2")).unwrap();
        assert_eq!(r.verdict(), Some(false));
        let r = is_m_dense(&fs(&[3, 4, 5]), &params(0, "em")).unwrap();
        assert_eq!(r.verdict(), Some(false));
    }

    #[test]
    fn find_depth_zero() {
        let r = find_m_dense_subset(&FinSet::interval(0, 20), &params(0, "rt:2:2")).unwrap();
        assert!(matches!(r, DenseSubset::Found { ref set, .. } if set.as_slice() == [2, 3, 4]));
        let r = find_m_dense_subset(&fs(&[10, 11]), &params(0, "rt:2:2")).unwrap();
        assert!(matches!(r, DenseSubset::Absent { .. }));
    }

    #[test]
    fn partitions_respect_min() {
        let z = fs(&[2, 5, 6, 9]);
        let parts = ordered_partitions(&z);
        // 1 run + 3 two-run splits.
        assert_eq!(parts.len(), 4);
        assert!(parts.iter().all(|p| p.len() <= 2));
        assert_eq!(ordered_partitions(&fs(&[7, 8, 9])).len(), 4);
    }

    #[test]
    fn depth_one_small() {
        // Too small to be 1-dense: clause 1 fails on a split or a coloring.
        let r = is_m_dense(&fs(&[2, 3, 4]), &params(1, "rt:2:2")).unwrap();
        assert_eq!(r.verdict(), Some(false));
        let r = is_m_dense(&FinSet::interval(2, 7), &params(1, "rt:2:1")).unwrap();
        assert!(r.verdict().is_some());
    }

    #[test]
    fn tiny_budget_is_indeterminate() {
        let mut p = params(2, "rt:2:2");
        p.budget = 0;
        let r = is_m_dense(&FinSet::interval(2, 9), &p).unwrap();
        assert_eq!(r.verdict(), None);
    }

    #[test]
    fn bounds() {
        assert_eq!(bound_psrt_exponent(2), 10);
        assert_eq!(bound_psrt_exponent(0), 6);
        assert_eq!(bound_ks_exponent(5), 9);
        assert_eq!(bound_psrt_density_exponent(3), BigUint::from(81u32));
        assert_eq!(h_chain(|_| None, 0).unwrap(), 1);
        assert_eq!(h_chain(Some, 7).unwrap(), 8);
        assert_eq!(h_chain(|x| Some(2 * x + 6), 1).unwrap(), 8);
        assert_eq!(h_chain(|x| Some(2 * x + 6), 2).unwrap(), 22);
        assert!(h_chain(|x| (x < 3).then_some(x + 5), 3).is_err());
    }
}
