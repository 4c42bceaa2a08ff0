//! Independent oracles. Nothing here calls into the library's evaluators or
//! searches; only plain data (sets, ordinal terms, coloring tables) crosses
//! the boundary.

#![allow(dead_code)]

use largeness::{Coloring, Ordinal};

/// Ordinal below ω^ω as coefficients indexed by exponent.
pub type Coefs = Vec<u64>;

pub fn coefs(a: &Ordinal) -> Coefs {
    let mut c = vec![0u64; a.degree().map_or(0, |d| d as usize + 1)];
    for t in a.terms() {
        c[t.exp as usize] = t.coef;
    }
    c
}

pub fn coefs_from(terms: &[(usize, u64)]) -> Coefs {
    let mut c = vec![0u64; terms.iter().map(|t| t.0 + 1).max().unwrap_or(0)];
    for &(e, k) in terms {
        c[e] += k;
    }
    c
}

pub fn is_zero(c: &Coefs) -> bool {
    c.iter().all(|&x| x == 0)
}

fn lowest(c: &Coefs) -> Option<usize> {
    c.iter().position(|&x| x != 0)
}

/// α ↦ α[m] by hand: decrement the lowest term; a limit term ω^e
/// becomes ω^(e-1)·m.
pub fn fund(c: &mut Coefs, m: u64) {
    if let Some(e) = lowest(c) {
        c[e] -= 1;
        if e > 0 {
            c[e - 1] += m;
        }
    }
}

/// α-largeness by consuming elements one at a time.
pub fn trace_large(xs: &[u64], a: &Coefs) -> bool {
    let mut c = a.clone();
    for &x in xs {
        if is_zero(&c) {
            return true;
        }
        fund(&mut c, x);
    }
    is_zero(&c)
}

/// The residual ordinal after consuming `xs`.
pub fn trace_residual(xs: &[u64], a: &Coefs) -> Coefs {
    let mut c = a.clone();
    for &x in xs {
        fund(&mut c, x);
    }
    c
}

/// α-largeness*: successors drop the minimum, limits do not.
pub fn trace_large_star(xs: &[u64], a: &Coefs) -> bool {
    let mut c = a.clone();
    let mut i = 0;
    loop {
        match lowest(&c) {
            None => return true,
            Some(_) if i == xs.len() => return false,
            Some(0) => {
                c[0] -= 1;
                i += 1;
            }
            Some(_) => fund(&mut c, xs[i]),
        }
    }
}

/// Position after greedily consuming one ω^e-large block from `p`.
fn block(xs: &[u64], p: usize, e: usize) -> Option<usize> {
    let x = *xs.get(p)?;
    if e == 0 {
        return Some(p + 1);
    }
    let mut q = p + 1;
    for _ in 0..x {
        q = block(xs, q, e - 1)?;
    }
    Some(q)
}

/// α-largeness by structure: α = Σ ω^e·c_e is consumed from the lowest
/// term up, each ω^e as one block (an element x followed by x blocks of
/// ω^(e-1)).
pub fn structural_large(xs: &[u64], a: &Coefs) -> bool {
    let mut p = 0;
    for (e, &k) in a.iter().enumerate() {
        for _ in 0..k {
            match block(xs, p, e) {
                Some(q) => p = q,
                None => return false,
            }
        }
    }
    true
}

/// Two-colorings of pairs of local indices as bitmasks (bit = color).
#[inline]
pub fn pidx(a: usize, b: usize) -> usize {
    b * (b - 1) / 2 + a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Rt,
    Psrt,
    Em,
}

pub fn kind_of(g: &largeness::GammaSpec) -> Kind {
    match g.to_string().as_str() {
        "em" => Kind::Em,
        s if s.starts_with("psrt") => Kind::Psrt,
        _ => Kind::Rt,
    }
}

/// Ψ for a 2-coloring of pairs given as `col(a, b)` with `a < b`.
pub fn psi(kind: Kind, ys: &[usize], col: &dyn Fn(usize, usize) -> u8) -> bool {
    match kind {
        Kind::Rt => homogeneous(ys, col),
        Kind::Psrt => pseudo_homogeneous(ys, col),
        Kind::Em => transitive(ys, col),
    }
}

pub fn homogeneous<T: Copy>(ys: &[T], col: &dyn Fn(T, T) -> u8) -> bool {
    let mut seen = None;
    for j in 0..ys.len() {
        for i in 0..j {
            let c = col(ys[i], ys[j]);
            if *seen.get_or_insert(c) != c {
                return false;
            }
        }
    }
    true
}

/// Some color joins every pair by an increasing monochromatic path inside `ys`.
pub fn pseudo_homogeneous<T: Copy>(ys: &[T], col: &dyn Fn(T, T) -> u8) -> bool {
    (0..2u8).any(|c| {
        (0..ys.len()).all(|s| {
            // Forward search from s along color-c edges.
            let mut hit = vec![false; ys.len()];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for v in u + 1..ys.len() {
                    if !hit[v] && col(ys[u], ys[v]) == c {
                        hit[v] = true;
                        stack.push(v);
                    }
                }
            }
            hit[s + 1..].iter().all(|&h| h)
        })
    })
}

/// The tournament x → y is transitive on `ys`.
pub fn transitive<T: Copy>(ys: &[T], col: &dyn Fn(T, T) -> u8) -> bool {
    let n = ys.len();
    // beats[i][j]: ys[i] → ys[j]; an edge i<j with color 1 points forward.
    let beats = |i: usize, j: usize| {
        if i < j {
            col(ys[i], ys[j]) == 1
        } else {
            col(ys[j], ys[i]) == 0
        }
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != j && j != k && i != k && beats(i, j) && beats(j, k) && !beats(i, k) {
                    return false;
                }
            }
        }
    }
    true
}

/// All subsets of `0..l` (as masks) whose values are α-large.
pub fn large_masks(xs: &[u64], a: &Coefs) -> Vec<u32> {
    let l = xs.len();
    (0u32..1 << l)
        .filter(|&m| {
            let vals: Vec<u64> = (0..l).filter(|&i| m >> i & 1 == 1).map(|i| xs[i]).collect();
            trace_large(&vals, a)
        })
        .collect()
}

fn members(m: u32, l: usize) -> Vec<usize> {
    (0..l).filter(|&i| m >> i & 1 == 1).collect()
}

/// Naive α-largeness(Γ) for 2-colorings of pairs: every coloring of `[X]²`
/// against every subset. Colorings are fixed up to swapping the two colors
/// (all three predicates are invariant under the swap).
pub fn naive_gamma(xs: &[u64], a: &Coefs, kind: Kind) -> bool {
    let l = xs.len();
    assert!(l <= 8, "naive oracle is limited to 8 elements");
    let mut cands = large_masks(xs, a);
    if cands.is_empty() {
        return false;
    }
    if kind != Kind::Psrt {
        // Hereditary predicates: minimal large sets suffice.
        let all = cands.clone();
        cands.retain(|&m| !all.iter().any(|&s| s != m && s & m == s));
    }
    let cand_members: Vec<Vec<usize>> = cands.iter().map(|&m| members(m, l)).collect();
    let pairs = l * l.saturating_sub(1) / 2;
    let colorings: u64 = if pairs == 0 { 1 } else { 1 << (pairs - 1) };
    'col: for f in 0..colorings {
        let f = f << 1;
        let col = |i: usize, j: usize| (f >> pidx(i, j) & 1) as u8;
        for ys in &cand_members {
            if psi(kind, ys, &col) {
                continue 'col;
            }
        }
        return false;
    }
    true
}

/// True iff `f` has no α-large Ψ-subset of `xs` (plain scan of all subsets).
pub fn no_solution(xs: &[u64], f: &Coloring, a: &Coefs, kind: Kind) -> bool {
    let l = xs.len();
    assert!(l <= 24);
    let col = |x: u64, y: u64| f.pair(x, y);
    for m in 0u32..1 << l {
        let ys: Vec<u64> = members(m, l).into_iter().map(|i| xs[i]).collect();
        if trace_large(&ys, a) && psi_values(kind, &ys, &col) {
            return false;
        }
    }
    true
}

pub fn psi_values(kind: Kind, ys: &[u64], col: &dyn Fn(u64, u64) -> u8) -> bool {
    match kind {
        Kind::Rt => homogeneous(ys, col),
        Kind::Psrt => pseudo_homogeneous(ys, col),
        Kind::Em => transitive(ys, col),
    }
}

/// Golden threshold for `[2, N]` ω-large(RT(2,2)): computed ahead of the
/// build with the prefix-completion oracle below.
pub const GOLDEN_RT22_OMEGA_FROM_2: u64 = 12;

/// Prefix-completion oracle for ω-large(RT(2,2)) of `[2, n]`: searches for a
/// bad coloring column by column, rejecting a column as soon as the prefix
/// already contains an ω-large homogeneous set ending at that column. No
/// symmetry breaking, no largeness pruning. Returns true iff no bad
/// coloring exists.
pub fn prefix_completion_rt22_omega(n: u64) -> bool {
    let xs: Vec<u64> = (2..=n).collect();
    let l = xs.len();
    let mut c = vec![vec![0u8; l]; l];
    fn closes(c: &[Vec<u8>], xs: &[u64], j: usize) -> bool {
        for s in 0u32..(1 << j) {
            let mut els: Vec<usize> = (0..j).filter(|&i| s >> i & 1 == 1).collect();
            els.push(j);
            if els.len() as u64 <= xs[els[0]] {
                continue;
            }
            if homogeneous(&els, &|a: usize, b: usize| c[b][a]) {
                return true;
            }
        }
        false
    }
    fn bad(c: &mut Vec<Vec<u8>>, xs: &[u64], j: usize, i: usize) -> bool {
        if j == xs.len() {
            return true;
        }
        if i == j {
            return !closes(c, xs, j) && bad(c, xs, j + 1, 0);
        }
        for col in 0..2u8 {
            c[j][i] = col;
            if bad(c, xs, j, i + 1) {
                return true;
            }
        }
        false
    }
    !bad(&mut c, &xs, 0, 0)
}

/// A 2-coloring of pairs over `[0, max]` from a closure.
pub fn coloring(max: u64, f: impl Fn(u64, u64) -> u8) -> Coloring {
    Coloring::from_fn(2, 2, max, f).unwrap()
}
