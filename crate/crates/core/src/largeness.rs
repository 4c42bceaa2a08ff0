//! α-largeness and α-largeness* of finite sets.
//!
//! A set `X = {x₀ < … < x_{ℓ-1}}` is α-large when `α[x₀][x₁]…[x_{ℓ-1}] = 0`.
//! The starred variant does not consume `min X` at limit steps.

use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::ordinal::Ordinal;

/// `a[x₀][x₁]…` folded over the elements of `xs` in order.
pub fn residual(xs: &FinSet, a: &Ordinal) -> Ordinal {
    let mut r = a.clone();
    for x in xs.iter() {
        if r.is_zero() {
            break;
        }
        r.fund_in_place(x);
    }
    r
}

/// True iff the residual of `xs` against `a` is zero.
pub fn is_large(xs: &FinSet, a: &Ordinal) -> bool {
    residual(xs, a).is_zero()
}

/// α-largeness*: successor steps drop `min X`, limit steps `β+ω^n` move to
/// `β+ω^(n-1)·min X` without dropping it. The empty set is large* only for
/// `α = 0`.
pub fn is_large_star(xs: &FinSet, a: &Ordinal) -> bool {
    let xs = xs.as_slice();
    let mut a = a.clone();
    let mut idx = 0;
    loop {
        if a.is_zero() {
            return true;
        }
        let Some(&min) = xs.get(idx) else {
            return false;
        };
        if a.is_successor() {
            a.fund_in_place(0);
            idx += 1;
        } else {
            a.fund_in_place(min);
        }
    }
}

/// Greedy split of `xs` into `k` consecutive ω^n-large blocks.
///
/// Each block is cut as soon as it becomes ω^n-large; elements left over
/// after the k-th block are ignored. Returns `None` when fewer than `k`
/// blocks can be formed.
pub fn decompose(xs: &FinSet, n: u64, k: u64) -> Option<Vec<FinSet>> {
    let unit = Ordinal::omega_pow(n);
    let mut blocks = Vec::new();
    let mut current = Vec::new();
    let mut r = unit.clone();
    for x in xs.iter() {
        if blocks.len() as u64 == k {
            break;
        }
        current.push(x);
        r.fund_in_place(x);
        if r.is_zero() {
            blocks.push(FinSet::from_sorted_unchecked(std::mem::take(&mut current)));
            r = unit.clone();
        }
    }
    (blocks.len() as u64 == k).then_some(blocks)
}

/// Upper bound on the size of intervals built by [`minimal_large`].
pub const MINIMAL_LARGE_CAP: u64 = 1 << 24;

/// The shortest interval `[start, N]` that is `a`-large.
///
/// Fails when the interval would exceed [`MINIMAL_LARGE_CAP`] elements.
pub fn minimal_large(start: u64, a: &Ordinal) -> Result<FinSet> {
    minimal_large_within(start, a, MINIMAL_LARGE_CAP)?.ok_or_else(|| {
        Error::Unsupported(format!(
            "minimal {a}-large interval from {start} has more than {MINIMAL_LARGE_CAP} elements"
        ))
    })
}

/// Like [`minimal_large`] but gives up (returning `None`) past `max_len` elements.
pub fn minimal_large_within(start: u64, a: &Ordinal, max_len: u64) -> Result<Option<FinSet>> {
    if start == 0 && !a.is_zero() {
        // {0} is large for every limit and 1; keep the contract simple.
        return Err(Error::Precondition("start must be at least 1".into()));
    }
    let Some(end) = minimal_large_end(start, a, max_len) else {
        return Ok(None);
    };
    Ok(Some(match end {
        None => FinSet::empty(),
        Some(e) => FinSet::interval(start, e),
    }))
}

/// Last element of the minimal large interval; `Some(None)` means empty.
fn minimal_large_end(start: u64, a: &Ordinal, max_len: u64) -> Option<Option<u64>> {
    let mut r = a.clone();
    let mut next = start;
    let mut len = 0u64;
    loop {
        if r.is_zero() {
            return Some(if len == 0 { None } else { Some(next - 1) });
        }
        // A finite residual c is consumed by exactly c more elements.
        if r.degree() == Some(0) {
            let c = r.finite_part();
            if len + c > max_len {
                return None;
            }
            return Some(Some(next + c - 1));
        }
        if len >= max_len {
            return None;
        }
        r.fund_in_place(next);
        next += 1;
        len += 1;
    }
}

/// Greedy `a`-large subset of `pool`: its elements in order, stopping as soon
/// as the residual reaches zero. `None` if the whole pool is `a`-small.
pub fn extract_large_subset(pool: &FinSet, a: &Ordinal) -> Option<FinSet> {
    let mut r = a.clone();
    let mut taken = Vec::new();
    for x in pool.iter() {
        if r.is_zero() {
            break;
        }
        r.fund_in_place(x);
        taken.push(x);
    }
    r.is_zero().then(|| FinSet::from_sorted_unchecked(taken))
}

/// Fixed-width ordinal used inside hot search loops: coefficient of `ω^e`
/// at index `e`. Copyable, so backtracking needs no allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct DenseOrdinal {
    coef: [u64; DenseOrdinal::WIDTH],
}

impl DenseOrdinal {
    pub(crate) const WIDTH: usize = 16;

    pub(crate) fn new(a: &Ordinal) -> Result<Self> {
        let mut coef = [0u64; Self::WIDTH];
        for t in a.terms() {
            if t.exp as usize >= Self::WIDTH {
                return Err(Error::Unsupported(format!(
                    "search ordinals need exponents below {} (got {a})",
                    Self::WIDTH
                )));
            }
            coef[t.exp as usize] = t.coef;
        }
        Ok(DenseOrdinal { coef })
    }

    #[inline]
    pub(crate) fn is_zero(&self) -> bool {
        self.coef.iter().all(|&c| c == 0)
    }

    #[inline]
    pub(crate) fn fund(&mut self, m: u64) {
        if let Some(e) = self.coef.iter().position(|&c| c != 0) {
            self.coef[e] -= 1;
            if e > 0 {
                self.coef[e - 1] = m;
            }
        }
    }

    /// True iff folding every element of `rest` drives the residual to 0.
    #[inline]
    pub(crate) fn consumed_by<I: IntoIterator<Item = u64>>(mut self, rest: I) -> bool {
        for x in rest {
            if self.is_zero() {
                return true;
            }
            self.fund(x);
        }
        self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn set(v: &[u64]) -> FinSet {
        FinSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn residual_examples() {
        assert_eq!(residual(&FinSet::empty(), &o("w^2")), o("w^2"));
        assert_eq!(residual(&set(&[2, 3]), &o("w^2")), o("w+3"));
        assert_eq!(residual(&set(&[5, 6, 7]), &o("w")), o("3"));
    }

    #[test]
    fn large_examples() {
        assert!(is_large(&set(&[9, 10]), &Ordinal::zero()));
        assert!(is_large(&FinSet::empty(), &Ordinal::zero()));
        assert!(!is_large(&FinSet::empty(), &o("1")));
        assert!(!is_large(&set(&[5, 6, 7]), &o("w")));
        assert!(is_large(&FinSet::interval(2, 14), &o("w^2")));
        assert!(!is_large(&FinSet::interval(2, 13), &o("w^2")));
    }

    #[test]
    fn large_star_examples() {
        assert!(is_large_star(&set(&[7]), &Ordinal::zero()));
        assert!(is_large_star(&set(&[2, 3]), &o("w")));
        assert!(!is_large_star(&set(&[2, 3]), &o("w+1")));
        assert!(!is_large_star(&FinSet::empty(), &o("w")));
    }

    #[test]
    fn decompose_examples() {
        let blocks = decompose(&FinSet::interval(2, 10), 1, 2).unwrap();
        assert_eq!(blocks, vec![set(&[2, 3, 4]), set(&[5, 6, 7, 8, 9, 10])]);
        assert_eq!(decompose(&set(&[5, 6, 7]), 1, 0), Some(vec![]));
        assert_eq!(decompose(&set(&[5, 6, 7]), 1, 1), None);
    }

    #[test]
    fn minimal_large_examples() {
        assert_eq!(minimal_large(2, &o("w")).unwrap(), set(&[2, 3, 4]));
        assert_eq!(minimal_large(2, &o("w^2")).unwrap(), FinSet::interval(2, 14));
        assert_eq!(minimal_large(5, &Ordinal::zero()).unwrap(), FinSet::empty());
        for a in 1..40 {
            assert_eq!(minimal_large(a, &o("w")).unwrap(), FinSet::interval(a, 2 * a));
        }
        assert!(minimal_large_within(2, &o("w^4"), 1000).unwrap().is_none());
    }

    #[test]
    fn extract_examples() {
        assert_eq!(
            extract_large_subset(&FinSet::interval(2, 14), &o("w^2")),
            Some(FinSet::interval(2, 14))
        );
        assert_eq!(extract_large_subset(&set(&[10, 11]), &o("w")), None);
        assert_eq!(extract_large_subset(&set(&[3]), &Ordinal::zero()), Some(FinSet::empty()));
    }

    #[test]
    fn dense_ordinal_tracks_sparse() {
        for text in ["w^3*2+w+4", "w^2", "w*3+1", "7", "0"] {
            let a = o(text);
            let mut d = DenseOrdinal::new(&a).unwrap();
            let mut s = a.clone();
            for m in [3u64, 0, 5, 2, 9, 1, 4, 4, 8, 2, 6, 3] {
                assert_eq!(d.is_zero(), s.is_zero());
                d.fund(m);
                s.fund_in_place(m);
                assert_eq!(d, DenseOrdinal::new(&s).unwrap());
            }
        }
        assert!(DenseOrdinal::new(&Ordinal::omega_pow(16)).is_err());
    }
}
