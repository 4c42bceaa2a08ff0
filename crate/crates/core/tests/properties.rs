//! Invariants checked on random inputs.

mod common;

use std::cmp::Ordering;

use common::*;
use largeness::coloring::{generate, is_homogeneous, is_pseudo_homogeneous, is_transitive_on, GenKind};
use largeness::density::{is_m_dense, DensityOutcome, DensityParams};
use largeness::extract::{bar_coloring, extract_pseudo_homogeneous, ExtractionReport};
use largeness::gamma::{is_large_gamma, GammaOutcome, SearchConfig};
use largeness::grouping::{check_grouping, find_grouping, transversals_in, GroupingWitness, LargenessNotion};
use largeness::largeness::{is_large, is_large_star, minimal_large_within};
use largeness::ordinal::compare;
use largeness::{Coloring, FinSet, GammaSpec, Ordinal};
use proptest::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn ordinal() -> impl Strategy<Value = Ordinal> {
    prop::collection::vec(0u64..4, 0..4).prop_map(|cs| {
        Ordinal::from_terms(
            cs.iter()
                .enumerate()
                .rev()
                .filter(|(_, &c)| c > 0)
                .map(|(e, &c)| (e as u64, c)),
        )
        .unwrap()
    })
}

fn finset(max: u64, len: usize) -> impl Strategy<Value = FinSet> {
    prop::collection::btree_set(0..=max, 0..=len).prop_map(FinSet::from_unsorted)
}

/// A 2-coloring of pairs over `[0, max]` from a seed.
fn pair_coloring(max: u64) -> impl Strategy<Value = Coloring> {
    any::<u64>().prop_map(move |seed| generate(&GenKind::Uniform { n: 2, k: 2 }, max, seed).unwrap())
}

/// Lexicographic comparison of coefficient vectors from the top exponent.
fn coef_cmp(a: &Coefs, b: &Coefs) -> Ordering {
    let n = a.len().max(b.len());
    for e in (0..n).rev() {
        let (x, y) = (a.get(e).copied().unwrap_or(0), b.get(e).copied().unwrap_or(0));
        if x != y {
            return x.cmp(&y);
        }
    }
    Ordering::Equal
}

/// Pseudo-homogeneity by listing every increasing path.
fn psh_by_paths(ys: &[u64], f: &Coloring) -> Vec<u8> {
    let joined = |c: u8, a: usize, b: usize| {
        let inner = b - a - 1;
        (0u32..1 << inner).any(|m| {
            let mut path = vec![ys[a]];
            path.extend((0..inner).filter(|&i| m >> i & 1 == 1).map(|i| ys[a + 1 + i]));
            path.push(ys[b]);
            path.windows(2).all(|w| f.pair(w[0], w[1]) == c)
        })
    };
    (0..2u8)
        .filter(|&c| (0..ys.len()).all(|b| (0..b).all(|a| joined(c, a, b))))
        .collect()
}

/// Any (L₁, |·| ≥ c)-grouping with L₁ = α-large, by labelling each element
/// as unused, part of the current block, or the start of a new block.
fn naive_grouping_exists(xs: &[u64], f: &Coloring, a: &Coefs, c: usize) -> bool {
    fn rec(xs: &[u64], i: usize, blocks: &mut Vec<Vec<u64>>, f: &Coloring, a: &Coefs, c: usize) -> bool {
        if i == xs.len() {
            if blocks.len() < c || !blocks.iter().all(|b| trace_large(b, a)) {
                return false;
            }
            return (0..blocks.len()).all(|j| {
                (0..j).all(|i| {
                    let cols: Vec<u8> = blocks[i]
                        .iter()
                        .flat_map(|&x| blocks[j].iter().map(move |&y| f.pair(x, y)))
                        .collect();
                    cols.windows(2).all(|w| w[0] == w[1])
                })
            });
        }
        if rec(xs, i + 1, blocks, f, a, c) {
            return true;
        }
        if let Some(last) = blocks.last_mut() {
            last.push(xs[i]);
            let ok = rec(xs, i + 1, blocks, f, a, c);
            blocks.last_mut().unwrap().pop();
            if ok {
                return true;
            }
        }
        blocks.push(vec![xs[i]]);
        let ok = rec(xs, i + 1, blocks, f, a, c);
        blocks.pop();
        ok
    }
    rec(xs, 0, &mut Vec::new(), f, a, c)
}

fn roundtrip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(v: &T) {
    let text = serde_json::to_string(v).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, v, "{text}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fund_strictly_descends(a in ordinal(), m in 0u64..20) {
        prop_assume!(!a.is_zero());
        prop_assert_eq!(compare(&a.fund(m), &a), Ordering::Less);
    }

    #[test]
    fn fund_is_monotone_in_m_for_limits(a in ordinal(), m in 0u64..20, d in 0u64..20) {
        // Drop the finite part; ω stands in for a finite draw.
        let a = Ordinal::from_terms(a.terms().iter().filter(|t| t.exp > 0).map(|t| (t.exp, t.coef))).unwrap();
        let a = if a.is_zero() { Ordinal::omega() } else { a };
        prop_assert_ne!(compare(&a.fund(m), &a.fund(m + d)), Ordering::Greater);
    }

    #[test]
    fn fund_matches_hand_decrement(a in ordinal(), m in 1u64..20) {
        let mut c = coefs(&a);
        fund(&mut c, m);
        prop_assert_eq!(coef_cmp(&coefs(&a.fund(m)), &c), Ordering::Equal);
    }

    #[test]
    fn compare_is_a_total_order(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(compare(&a, &b), coef_cmp(&coefs(&a), &coefs(&b)));
        prop_assert_eq!(compare(&a, &b), compare(&b, &a).reverse());
        prop_assert_eq!(compare(&a, &b) == Ordering::Equal, a == b);
        if compare(&a, &b) != Ordering::Greater && compare(&b, &c) != Ordering::Greater {
            prop_assert_ne!(compare(&a, &c), Ordering::Greater);
        }
    }

    #[test]
    fn largeness_is_superset_monotone(a in ordinal(), x in finset(40, 10), extra in finset(40, 10)) {
        let y = x.union(&extra);
        if is_large(&x, &a) {
            prop_assert!(is_large(&y, &a));
        }
        prop_assert_eq!(is_large(&y, &a), trace_large(y.as_slice(), &coefs(&a)));
    }

    #[test]
    fn largeness_survives_decrementing_elements(a in ordinal(), x in finset(40, 10), seed in any::<u64>()) {
        // Replace each element by some value between its predecessor and
        // itself; a large set stays large.
        let v = x.as_slice();
        let mut lower = Vec::with_capacity(v.len());
        for (i, &e) in v.iter().enumerate() {
            let lo = if i == 0 { 0 } else { lower[i - 1] + 1 };
            let span = e - lo + 1;
            lower.push(lo + (seed.rotate_left(i as u32 * 7) % span));
        }
        if is_large(&x, &a) {
            prop_assert!(is_large(&FinSet::new(lower).unwrap(), &a));
        }
    }

    #[test]
    fn minimal_large_is_tight(a in ordinal(), start in 1u64..6) {
        prop_assume!(!a.is_zero());
        if let Some(s) = minimal_large_within(start, &a, 50_000).unwrap() {
            prop_assert!(is_large(&s, &a));
            let v = s.as_slice();
            let shorter = FinSet::new(v[..v.len() - 1].to_vec()).unwrap();
            prop_assert!(!is_large(&shorter, &a));
            prop_assert_eq!(v[0], start);
        }
    }

    #[test]
    fn large_star_is_superset_closed(a in ordinal(), x in finset(40, 10), extra in finset(40, 10)) {
        let y = x.union(&extra);
        prop_assert_eq!(is_large_star(&x, &a), trace_large_star(x.as_slice(), &coefs(&a)));
        if is_large_star(&x, &a) {
            prop_assert!(is_large_star(&y, &a));
        }
    }

    #[test]
    fn homogeneous_sets_are_pseudo_homogeneous(f in pair_coloring(20), y in finset(20, 8)) {
        if let Some(c) = is_homogeneous(&f, &y) {
            prop_assert!(y.len() < 2 || is_pseudo_homogeneous(&f, &y) == Some(c));
        }
    }

    #[test]
    fn pseudo_homogeneity_matches_path_enumeration(f in pair_coloring(20), y in finset(20, 7)) {
        let colors = psh_by_paths(y.as_slice(), &f);
        match is_pseudo_homogeneous(&f, &y) {
            Some(c) => prop_assert!(colors.contains(&c) || y.len() < 2),
            None => prop_assert!(colors.is_empty()),
        }
    }

    #[test]
    fn transitive_pseudo_homogeneous_sets_are_homogeneous(f in pair_coloring(16), y in finset(16, 8)) {
        prop_assume!(y.len() >= 2);
        if is_transitive_on(&f, &y) {
            if let Some(c) = is_pseudo_homogeneous(&f, &y) {
                prop_assert_eq!(is_homogeneous(&f, &y), Some(c));
            }
        }
    }

    #[test]
    fn refined_coloring_is_total_and_in_range(f in pair_coloring(14), x in finset(14, 10), k in 0u32..=2) {
        let g = bar_coloring(&x, &f, k).unwrap();
        let v = x.as_slice();
        for b in 0..v.len() {
            for a in 0..b {
                let c = g.pair(v[a], v[b]) as u32;
                prop_assert!(c < 2 * k + 2);
                prop_assert_eq!(c % 2, f.pair(v[a], v[b]) as u32);
            }
        }
    }

    #[test]
    fn glued_union_is_large_star(f in pair_coloring(24), lo in 2u64..6, k in 0u32..=1) {
        let x = FinSet::interval(lo, 24);
        let r = extract_pseudo_homogeneous(&x, &f, k, &Ordinal::nat(2)).unwrap();
        if let Some(st) = r.stages.iter().find(|s| s.name == "assemble") {
            let h = st.output.as_ref().unwrap();
            prop_assert!(trace_large_star(h.as_slice(), &coefs(&Ordinal::omega_pow(k as u64 + 1))));
            prop_assert!(pseudo_homogeneous(h.as_slice(), &|a: u64, b: u64| f.pair(a, b)));
        }
        if r.verified {
            let w = r.witness.as_ref().unwrap();
            prop_assert!(pseudo_homogeneous(w.as_slice(), &|a: u64, b: u64| f.pair(a, b)));
            prop_assert!(trace_large(w.as_slice(), &coefs_from(&[(0, 2)])));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn one_color_collapses_to_plain_largeness(x in finset(20, 10)) {
        let out = is_large_gamma(&x, &Ordinal::omega(), GammaSpec::rt(2, 1).unwrap(), &SearchConfig::default()).unwrap();
        prop_assert_eq!(out.verdict(), Some(is_large(&x, &Ordinal::omega())));
    }

    #[test]
    fn gamma_largeness_is_superset_monotone(x in finset(12, 6), extra in finset(12, 3), g in 0usize..3) {
        let gamma: GammaSpec = ["rt:2:2", "psrt:2", "em"][g].parse().unwrap();
        let y = x.union(&extra);
        let cfg = SearchConfig::default();
        let vx = is_large_gamma(&x, &Ordinal::omega(), gamma, &cfg).unwrap().verdict().unwrap();
        let vy = is_large_gamma(&y, &Ordinal::omega(), gamma, &cfg).unwrap().verdict().unwrap();
        prop_assert!(!vx || vy);
    }

    #[test]
    fn groupings_are_sound_and_complete(f in pair_coloring(12), x in finset(12, 8), a in 1u64..3, c in 1u64..4) {
        let l1 = LargenessNotion::Ordinal(Ordinal::nat(a));
        let l2 = LargenessNotion::Cardinality(c);
        let found = find_grouping(&x, &f, &l1, &l2).unwrap();
        if let Some(w) = &found {
            prop_assert!(check_grouping(&f, w, &l1, &l2).is_ok());
            prop_assert!(w.blocks.iter().all(|b| b.is_subset(&x)));
        }
        let naive = naive_grouping_exists(x.as_slice(), &f, &coefs_from(&[(0, a)]), c as usize);
        prop_assert_eq!(found.is_some(), naive);
    }

    #[test]
    fn regular_transversals_reduce_to_maxima(sizes in prop::collection::vec(1usize..4, 1..5), gap in 0u64..3, a in ordinal()) {
        let mut blocks = Vec::new();
        let mut next = 1 + gap;
        for s in sizes {
            blocks.push(FinSet::interval(next, next + s as u64 - 1));
            next += s as u64 + gap;
        }
        let maxes = FinSet::new(blocks.iter().map(|b| b.as_slice()[b.len() - 1]).collect()).unwrap();
        let l2 = LargenessNotion::Ordinal(a.clone());
        prop_assert_eq!(transversals_in(&blocks, &l2), Ok(is_large(&maxes, &a)));
    }

    #[test]
    fn documents_roundtrip(a in ordinal(), x in finset(9, 6), f in pair_coloring(9), seed in 0u64..4) {
        roundtrip(&a);
        roundtrip(&x);
        roundtrip(&f);
        for g in ["rt:2:2", "rt:1:3", "psrt:2", "em"] {
            roundtrip(&g.parse::<GammaSpec>().unwrap());
        }
        let gamma: GammaSpec = "rt:2:2".parse().unwrap();
        let out: GammaOutcome = is_large_gamma(&x, &Ordinal::omega(), gamma, &SearchConfig::default()).unwrap();
        roundtrip(&out);
        let d: DensityOutcome = is_m_dense(&x, &DensityParams { m: 1, gamma, budget: 1 << 20 }).unwrap();
        roundtrip(&d);
        let l = LargenessNotion::Cardinality(2);
        if let Some(w) = find_grouping(&x, &f, &l, &l).unwrap() {
            roundtrip::<GroupingWitness>(&w);
        }
        let r: ExtractionReport = extract_pseudo_homogeneous(&x, &f, (seed % 2) as u32, &Ordinal::nat(2)).unwrap();
        roundtrip(&r);
    }
}

#[test]
fn glued_union_check_is_exercised() {
    // The property above only bites when assembly runs; make sure it does.
    let x = FinSet::interval(3, 24);
    let cases = [
        (GenKind::Uniform { n: 2, k: 2 }, 0u32),
        (GenKind::Constant { n: 2, k: 2, c: 1 }, 1),
    ];
    for (kind, k) in cases {
        let f = generate(&kind, 24, 1).unwrap();
        let r = extract_pseudo_homogeneous(&x, &f, k, &Ordinal::nat(2)).unwrap();
        let h = r.stages.iter().find(|s| s.name == "assemble").and_then(|s| s.output.clone()).unwrap();
        assert!(trace_large_star(h.as_slice(), &coefs(&Ordinal::omega_pow(k as u64 + 1))));
        assert!(r.verified);
    }
}
