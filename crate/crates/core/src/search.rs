//! Exhaustive enumeration of colorings of a small finite set.
//!
//! Elements are addressed by local index `0..l`. The colored cells are all
//! n-subsets of `0..l` in colex order (for pairs: `(0,1), (0,2), (1,2),
//! (0,3), …`), so the cells of a prefix `0..l'` form a prefix of the cells of
//! `0..l`. Colors are assigned cell by cell; after each assignment a
//! [`Probe`] may declare the whole subtree *covered* (typically because a
//! solution using only assigned cells exists). A complete assignment that is
//! never covered is a *bad* coloring.
//!
//! With canonical enumeration, colors follow restricted growth (a cell may
//! use at most one more color than the cells before it), which enumerates
//! one representative per color permutation. Within a cell, colors are
//! tried from the largest allowed down to 0.
//!
//! The tree is cut at a fixed depth into tasks that run on a worker pool;
//! results are merged in task order and node budgets are charged in that
//! order too, so the outcome does not depend on the number of workers.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of elements a coloring search will accept.
pub const MAX_ELEMENTS: usize = 64;

/// Depth at which the tree is split into parallel tasks.
const SPLIT_DEPTH: usize = 8;

/// Largest color count a search will accept.
pub const MAX_SEARCH_COLORS: u32 = 64;

/// The coloring space: `k` colors on the n-subsets of `0..l`.
#[derive(Debug, Clone)]
pub struct Space {
    l: usize,
    n: u8,
    k: u32,
    canonical: bool,
    cells: Vec<(usize, usize)>,
}

impl Space {
    pub fn new(l: usize, n: u8, k: u32, canonical: bool) -> Result<Self> {
        if l > MAX_ELEMENTS {
            return Err(Error::Unsupported(format!(
                "coloring search over {l} elements (limit {MAX_ELEMENTS})"
            )));
        }
        if !(1..=2).contains(&n) {
            return Err(Error::Unsupported(format!("coloring search for {n}-tuples")));
        }
        if k == 0 || k > MAX_SEARCH_COLORS {
            return Err(Error::Unsupported(format!("coloring search with {k} colors")));
        }
        let cells = if n == 1 {
            (0..l).map(|i| (i, i)).collect()
        } else {
            (1..l).flat_map(|j| (0..j).map(move |i| (i, j))).collect()
        };
        Ok(Space { l, n, k, canonical, cells })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn canonical(&self) -> bool {
        self.canonical
    }

    /// Cells in assignment order, as `(i, j)` local index pairs
    /// (`i == j` for singletons).
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    /// Colors allowed for the next cell given the largest color used so far.
    #[inline]
    pub fn allowed(&self, max_used: Option<u8>) -> u32 {
        if self.canonical {
            match max_used {
                None => 1,
                Some(m) => (m as u32 + 2).min(self.k),
            }
        } else {
            self.k
        }
    }

    /// Colors of a full matrix in cell order.
    pub fn colors_of(&self, mat: &[u8]) -> Vec<u8> {
        self.cells.iter().map(|&(i, j)| mat[i * self.l + j]).collect()
    }

    /// Writes `colors` (cell order) into an `l × l` matrix.
    pub fn matrix_of(&self, colors: &[u8]) -> Vec<u8> {
        let mut mat = vec![0u8; self.l * self.l];
        for (&(i, j), &c) in self.cells.iter().zip(colors) {
            mat[i * self.l + j] = c;
        }
        mat
    }

    /// True iff `colors` is a valid (restricted-growth when canonical)
    /// prefix of an assignment.
    pub fn is_valid_prefix(&self, colors: &[u8]) -> bool {
        if colors.len() > self.cells.len() {
            return false;
        }
        let mut max_used = None;
        for &c in colors {
            if c as u32 >= self.allowed(max_used) {
                return false;
            }
            max_used = Some(max_used.map_or(c, |m: u8| m.max(c)));
        }
        true
    }
}

/// Decides when a partial assignment is already settled.
pub trait Probe: Sync {
    type Witness: Clone + Send;
    /// Per-task scratch state.
    type Scratch: Send;

    fn scratch(&self) -> Self::Scratch;

    /// A witness needing no colored cell at all.
    fn root(&self, scratch: &mut Self::Scratch, work: &mut u64) -> Option<Self::Witness>;

    /// Called after cell `cell` was assigned (all earlier cells are assigned;
    /// `mat` is the `l × l` matrix with `mat[i*l+j]` the color of `(i, j)`).
    fn after(
        &self,
        mat: &[u8],
        cell: usize,
        scratch: &mut Self::Scratch,
        work: &mut u64,
    ) -> Option<Self::Witness>;

    /// Lets a probe abort the whole search (e.g. when a nested budget ran out).
    fn aborted(&self) -> bool {
        false
    }
}

/// A covered subtree: every completion of `prefix` has `witness`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover<W> {
    pub prefix: Vec<u8>,
    pub witness: W,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<W> {
    /// Every assignment is covered. `covers` holds the first covers in
    /// enumeration order (at most the requested cap); `total_covers` counts all.
    Covered { covers: Vec<Cover<W>>, total_covers: u64 },
    /// The first uncovered complete assignment in enumeration order.
    Bad { colors: Vec<u8> },
    /// The node budget ran out (or a probe aborted) before a decision.
    Exhausted,
}

/// Work counters; excluded from any reproducibility guarantee except `nodes`
/// on decided outcomes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Cell assignments made.
    pub nodes: u64,
    /// Probe-internal work units.
    pub probe_work: u64,
    /// Covered subtrees.
    pub covers: u64,
}

impl SearchStats {
    pub fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.probe_work += other.probe_work;
        self.covers += other.covers;
    }
}

#[derive(Debug, Clone)]
pub struct Explored<W> {
    pub outcome: Outcome<W>,
    pub stats: SearchStats,
}

/// Search limits.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Maximum number of cell assignments.
    pub budget: u64,
    /// Worker threads.
    pub jobs: usize,
    /// Maximum number of covers kept in the result.
    pub cover_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            budget: u64::MAX,
            jobs: 1,
            cover_cap: 256,
        }
    }
}

enum Flow {
    Continue,
    Bad,
    Stop,
}

struct Task<'a, P: Probe> {
    space: &'a Space,
    probe: &'a P,
    cap: u64,
    cover_cap: usize,
    depth_limit: usize,
    cancel: Option<(&'a AtomicUsize, usize)>,
    nodes: u64,
    work: u64,
    covers: Vec<Cover<P::Witness>>,
    total_covers: u64,
    frontier: Vec<Vec<u8>>,
    bad: Option<Vec<u8>>,
    scratch: P::Scratch,
}

impl<'a, P: Probe> Task<'a, P> {
    fn new(space: &'a Space, probe: &'a P, cap: u64, cover_cap: usize) -> Self {
        Task {
            space,
            probe,
            cap,
            cover_cap,
            depth_limit: usize::MAX,
            cancel: None,
            nodes: 0,
            work: 0,
            covers: Vec::new(),
            total_covers: 0,
            frontier: Vec::new(),
            bad: None,
            scratch: probe.scratch(),
        }
    }

    fn record_cover(&mut self, prefix: &[u8], witness: P::Witness) {
        self.total_covers += 1;
        if self.covers.len() < self.cover_cap {
            self.covers.push(Cover {
                prefix: prefix.to_vec(),
                witness,
            });
        }
    }

    fn cancelled(&self) -> bool {
        if self.probe.aborted() {
            return true;
        }
        match self.cancel {
            Some((flag, me)) => flag.load(Ordering::Relaxed) < me,
            None => false,
        }
    }

    fn dfs(&mut self, mat: &mut [u8], path: &mut Vec<u8>, max_used: Option<u8>) -> Flow {
        let depth = path.len();
        let cells = self.space.cells();
        if depth == cells.len() {
            self.bad = Some(path.clone());
            return Flow::Bad;
        }
        if depth == self.depth_limit {
            self.frontier.push(path.clone());
            return Flow::Continue;
        }
        let (i, j) = cells[depth];
        let l = self.space.l;
        for c in (0..self.space.allowed(max_used)).rev() {
            self.nodes += 1;
            if self.nodes > self.cap || (self.nodes & 1023 == 0 && self.cancelled()) {
                return Flow::Stop;
            }
            let c = c as u8;
            mat[i * l + j] = c;
            path.push(c);
            let next_max = Some(max_used.map_or(c, |m| m.max(c)));
            match self.probe.after(mat, depth, &mut self.scratch, &mut self.work) {
                Some(w) => {
                    self.record_cover(path, w);
                    if self.probe.aborted() {
                        path.pop();
                        return Flow::Stop;
                    }
                }
                None => {
                    if self.probe.aborted() {
                        path.pop();
                        return Flow::Stop;
                    }
                    match self.dfs(mat, path, next_max) {
                        Flow::Continue => {}
                        other => {
                            path.pop();
                            return other;
                        }
                    }
                }
            }
            path.pop();
        }
        Flow::Continue
    }

    /// Explores the subtree below `prefix` (which must not already be covered).
    fn run_from(&mut self, prefix: &[u8]) -> Flow {
        let mut mat = self.space.matrix_of(prefix);
        let mut path = prefix.to_vec();
        let max_used = prefix.iter().copied().max();
        self.dfs(&mut mat, &mut path, max_used)
    }
}

enum Item<W> {
    Cover(Cover<W>),
    Task(Vec<u8>),
}

struct TaskResult<W> {
    flow: Flow,
    nodes: u64,
    work: u64,
    covers: Vec<Cover<W>>,
    total_covers: u64,
    bad: Option<Vec<u8>>,
}

/// Enumerates the whole space.
pub fn explore<P: Probe>(space: &Space, probe: &P, limits: &Limits) -> Explored<P::Witness> {
    let mut stats = SearchStats::default();
    // Root: is anything settled before the first cell?
    {
        let mut scratch = probe.scratch();
        let mut work = 0;
        let root = probe.root(&mut scratch, &mut work);
        stats.probe_work += work;
        if probe.aborted() {
            return Explored { outcome: Outcome::Exhausted, stats };
        }
        if let Some(w) = root {
            stats.covers = 1;
            let covers = if limits.cover_cap > 0 {
                vec![Cover { prefix: Vec::new(), witness: w }]
            } else {
                Vec::new()
            };
            return Explored {
                outcome: Outcome::Covered { covers, total_covers: 1 },
                stats,
            };
        }
    }

    // Frontier: sequential DFS down to the split depth.
    let split = space.cells().len().min(SPLIT_DEPTH);
    let mut front = Task::new(space, probe, limits.budget, usize::MAX);
    front.depth_limit = split;
    let mut items: Vec<Item<P::Witness>> = Vec::new();
    {
        // Interleave covers and tasks in enumeration order by recording the
        // order in which they were produced.
        let mut mat = vec![0u8; space.l() * space.l()];
        let mut path = Vec::new();
        let flow = frontier_dfs(&mut front, &mut mat, &mut path, None, &mut items);
        stats.nodes += front.nodes;
        stats.probe_work += front.work;
        if matches!(flow, Flow::Stop) {
            return Explored { outcome: Outcome::Exhausted, stats };
        }
    }

    let remaining = limits.budget.saturating_sub(stats.nodes);
    let task_prefixes: Vec<(usize, &Vec<u8>)> = items
        .iter()
        .filter_map(|it| match it {
            Item::Task(p) => Some(p),
            Item::Cover(_) => None,
        })
        .enumerate()
        .collect();

    let stop_at = AtomicUsize::new(usize::MAX);
    let run = |(idx, prefix): &(usize, &Vec<u8>)| -> Option<TaskResult<P::Witness>> {
        if stop_at.load(Ordering::Relaxed) < *idx {
            return None;
        }
        let mut t = Task::new(space, probe, remaining, limits.cover_cap);
        t.cancel = Some((&stop_at, *idx));
        let flow = t.run_from(prefix);
        if !matches!(flow, Flow::Continue) {
            stop_at.fetch_min(*idx, Ordering::Relaxed);
        }
        Some(TaskResult {
            flow,
            nodes: t.nodes,
            work: t.work,
            covers: t.covers,
            total_covers: t.total_covers,
            bad: t.bad,
        })
    };
    let results: Vec<Option<TaskResult<P::Witness>>> = if limits.jobs <= 1 {
        task_prefixes.iter().map(run).collect()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(limits.jobs).build() {
            Ok(pool) => pool.install(|| task_prefixes.par_iter().map(run).collect()),
            Err(_) => task_prefixes.iter().map(run).collect(),
        }
    };

    // Merge in enumeration order.
    let mut covers = Vec::new();
    let mut total_covers = 0u64;
    let mut charged = stats.nodes;
    let mut results = results.into_iter();
    for item in items {
        match item {
            Item::Cover(c) => {
                total_covers += 1;
                if covers.len() < limits.cover_cap {
                    covers.push(c);
                }
            }
            Item::Task(_) => {
                let Some(Some(r)) = results.next() else {
                    // Skipped because an earlier task stopped; unreachable
                    // in order, since we return at that earlier task.
                    return Explored { outcome: Outcome::Exhausted, stats };
                };
                stats.nodes += r.nodes;
                stats.probe_work += r.work;
                charged = charged.saturating_add(r.nodes);
                if charged > limits.budget || probe.aborted() {
                    stats.covers = total_covers;
                    return Explored { outcome: Outcome::Exhausted, stats };
                }
                total_covers += r.total_covers;
                for c in r.covers {
                    if covers.len() < limits.cover_cap {
                        covers.push(c);
                    }
                }
                match r.flow {
                    Flow::Continue => {}
                    Flow::Bad => {
                        stats.covers = total_covers;
                        return Explored {
                            outcome: Outcome::Bad { colors: r.bad.expect("bad task records its coloring") },
                            stats,
                        };
                    }
                    Flow::Stop => {
                        stats.covers = total_covers;
                        return Explored { outcome: Outcome::Exhausted, stats };
                    }
                }
            }
        }
    }
    stats.covers = total_covers;
    Explored {
        outcome: Outcome::Covered { covers, total_covers },
        stats,
    }
}

fn frontier_dfs<P: Probe>(
    t: &mut Task<'_, P>,
    mat: &mut [u8],
    path: &mut Vec<u8>,
    max_used: Option<u8>,
    items: &mut Vec<Item<P::Witness>>,
) -> Flow {
    let depth = path.len();
    if depth == t.depth_limit {
        items.push(Item::Task(path.clone()));
        return Flow::Continue;
    }
    let (i, j) = t.space.cells()[depth];
    let l = t.space.l();
    for c in (0..t.space.allowed(max_used)).rev() {
        t.nodes += 1;
        if t.nodes > t.cap {
            return Flow::Stop;
        }
        let c = c as u8;
        mat[i * l + j] = c;
        path.push(c);
        match t.probe.after(mat, depth, &mut t.scratch, &mut t.work) {
            Some(w) => items.push(Item::Cover(Cover {
                prefix: path.clone(),
                witness: w,
            })),
            None => {
                let next_max = Some(max_used.map_or(c, |m| m.max(c)));
                if let Flow::Stop = frontier_dfs(t, mat, path, next_max, items) {
                    path.pop();
                    return Flow::Stop;
                }
            }
        }
        if t.probe.aborted() {
            path.pop();
            return Flow::Stop;
        }
        path.pop();
    }
    Flow::Continue
}

/// Explores the subtree below `seed` first and returns its first bad
/// coloring if there is one; otherwise falls back to [`explore`].
///
/// `seed` must be a valid prefix. The seed path is probed cell by cell; if it
/// is covered on the way, the seeded pass is skipped.
pub fn explore_seeded<P: Probe>(
    space: &Space,
    probe: &P,
    seed: &[u8],
    limits: &Limits,
) -> Explored<P::Witness> {
    let mut stats = SearchStats::default();
    if !seed.is_empty() && space.is_valid_prefix(seed) {
        let mut t = Task::new(space, probe, limits.budget, 0);
        let mut covered = {
            let mut work = 0;
            let r = probe.root(&mut t.scratch, &mut work).is_some();
            t.work += work;
            r
        };
        let mut mat = vec![0u8; space.l() * space.l()];
        for (d, &c) in seed.iter().enumerate() {
            if covered {
                break;
            }
            let (i, j) = space.cells()[d];
            mat[i * space.l() + j] = c;
            let mut work = 0;
            covered = probe.after(&mat, d, &mut t.scratch, &mut work).is_some();
            t.work += work;
        }
        if !covered && !probe.aborted() {
            let flow = t.run_from(seed);
            stats.nodes += t.nodes;
            stats.probe_work += t.work;
            match flow {
                Flow::Bad => {
                    return Explored {
                        outcome: Outcome::Bad { colors: t.bad.expect("bad task records its coloring") },
                        stats,
                    }
                }
                Flow::Stop => return Explored { outcome: Outcome::Exhausted, stats },
                Flow::Continue => {}
            }
        } else {
            stats.probe_work += t.work;
        }
    }
    let rest = Limits {
        budget: limits.budget.saturating_sub(stats.nodes),
        ..*limits
    };
    let mut out = explore(space, probe, &rest);
    out.stats.absorb(&stats);
    out
}

/// Formats a cell-color prefix as a compact key (`""`, `"0"`, `"0.1.1"`).
pub fn prefix_key(prefix: &[u8]) -> String {
    prefix.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(".")
}

/// Inverse of [`prefix_key`].
pub fn parse_prefix_key(key: &str) -> Result<Vec<u8>> {
    if key.is_empty() {
        return Ok(Vec::new());
    }
    key.split('.')
        .map(|t| {
            t.parse::<u8>()
                .map_err(|_| Error::Precondition(format!("bad prefix key '{key}'")))
        })
        .collect()
}

/// Checks that `prefixes` (in enumeration order) cover every assignment of
/// `space` exactly once as a tree cut: no complete assignment escapes and
/// every prefix is used.
pub fn covers_are_complete(space: &Space, prefixes: &[Vec<u8>]) -> bool {
    fn walk(space: &Space, path: &mut Vec<u8>, max_used: Option<u8>, prefixes: &[Vec<u8>], next: &mut usize) -> bool {
        if *next < prefixes.len() && prefixes[*next] == *path {
            *next += 1;
            return true;
        }
        if path.len() == space.cells().len() {
            return false;
        }
        // A cover strictly below this node must come next, otherwise the
        // subtree is unaccounted for.
        if *next >= prefixes.len() || !prefixes[*next].starts_with(path) {
            return false;
        }
        for c in (0..space.allowed(max_used)).rev() {
            let c = c as u8;
            path.push(c);
            let ok = walk(space, path, Some(max_used.map_or(c, |m| m.max(c))), prefixes, next);
            path.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut next = 0;
    let mut path = Vec::new();
    walk(space, &mut path, None, prefixes, &mut next) && next == prefixes.len()
}
