//! Finite colorings of singletons and pairs, solution predicates and
//! generators.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::finset::FinSet;

/// Largest supported number of colors.
pub const MAX_COLORS: u32 = 256;

/// A total coloring `f : [[0, max]]^n → k` for `n ∈ {1, 2}`.
///
/// `entries` lists the colors of all n-subsets of `[0, max]` in colex order:
/// the pair `{x < y}` sits at index `y(y-1)/2 + x`, a singleton `{x}` at `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Coloring {
    n: u8,
    k: u32,
    max: u64,
    entries: Vec<u8>,
}

#[derive(Deserialize)]
struct RawColoring {
    n: u8,
    k: u32,
    max: u64,
    entries: Vec<u8>,
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawColoring::deserialize(deserializer)?;
        Coloring::new(raw.n, raw.k, raw.max, raw.entries).map_err(serde::de::Error::custom)
    }
}

/// Number of n-subsets of `[0, max]`.
pub fn table_len(n: u8, max: u64) -> Result<usize> {
    let m = max
        .checked_add(1)
        .ok_or_else(|| Error::InvalidColoring("max too large".into()))?;
    let len = match n {
        1 => Some(m),
        2 => m.checked_mul(max).map(|v| v / 2),
        _ => None,
    }
    .ok_or_else(|| Error::InvalidColoring(format!("unsupported tuple size {n}")))?;
    if len > (1u64 << 31) {
        return Err(Error::InvalidColoring(format!("domain too large ({len} entries)")));
    }
    Ok(len as usize)
}

#[inline]
fn pair_index(x: u64, y: u64) -> usize {
    debug_assert!(x < y);
    (y * (y - 1) / 2 + x) as usize
}

impl Coloring {
    pub fn new(n: u8, k: u32, max: u64, entries: Vec<u8>) -> Result<Self> {
        if k == 0 || k > MAX_COLORS {
            return Err(Error::InvalidColoring(format!("color count {k} outside 1..={MAX_COLORS}")));
        }
        let len = table_len(n, max)?;
        if entries.len() != len {
            return Err(Error::InvalidColoring(format!(
                "expected {len} entries for n={n}, max={max}, got {}",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&c| c as u32 >= k) {
            return Err(Error::InvalidColoring(format!("color {bad} is not below k={k}")));
        }
        Ok(Coloring { n, k, max, entries })
    }

    /// Builds a coloring by evaluating `color` on every n-subset.
    pub fn from_fn(n: u8, k: u32, max: u64, mut color: impl FnMut(u64, u64) -> u8) -> Result<Self> {
        let len = table_len(n, max)?;
        let mut entries = Vec::with_capacity(len);
        match n {
            1 => entries.extend((0..=max).map(|x| color(x, x))),
            _ => {
                for y in 0..=max {
                    for x in 0..y {
                        entries.push(color(x, y));
                    }
                }
            }
        }
        Coloring::new(n, k, max, entries)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// Color of the singleton `{x}` (n = 1).
    pub fn single(&self, x: u64) -> u8 {
        assert_eq!(self.n, 1, "singleton lookup on a pair coloring");
        self.entries[x as usize]
    }

    /// Color of the pair `{x, y}` (n = 2), in either argument order.
    pub fn pair(&self, x: u64, y: u64) -> u8 {
        assert_eq!(self.n, 2, "pair lookup on a singleton coloring");
        assert_ne!(x, y, "pair needs distinct points");
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        self.entries[pair_index(a, b)]
    }

    /// Color of a canonical n-subset given as a slice.
    pub fn tuple(&self, t: &[u64]) -> u8 {
        match t {
            [x] => self.single(*x),
            [x, y] => self.pair(*x, *y),
            _ => panic!("tuple of size {} unsupported", t.len()),
        }
    }

    pub fn set_pair(&mut self, x: u64, y: u64, c: u8) {
        assert!((c as u32) < self.k);
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        self.entries[pair_index(a, b)] = c;
    }

    pub fn set_single(&mut self, x: u64, c: u8) {
        assert!((c as u32) < self.k);
        self.entries[x as usize] = c;
    }

    fn check_domain(&self, ys: &FinSet) {
        if let Some(m) = ys.max() {
            assert!(m <= self.max, "set exceeds coloring domain ({m} > {})", self.max);
        }
    }
}

/// The common color of all n-subsets of `ys`, if there is one; colour 0 when
/// `|ys| < n`.
pub fn is_homogeneous(f: &Coloring, ys: &FinSet) -> Option<u8> {
    f.check_domain(ys);
    let v = ys.as_slice();
    if v.len() < f.n as usize {
        return Some(0);
    }
    let first = if f.n == 1 { f.single(v[0]) } else { f.pair(v[0], v[1]) };
    let ok = if f.n == 1 {
        v.iter().all(|&x| f.single(x) == first)
    } else {
        (1..v.len()).all(|j| (0..j).all(|i| f.pair(v[i], v[j]) == first))
    };
    ok.then_some(first)
}

/// Smallest color `c` such that every pair of `ys` is joined by an increasing
/// path through `ys` whose edges all have color `c`.
pub fn is_pseudo_homogeneous(f: &Coloring, ys: &FinSet) -> Option<u8> {
    assert_eq!(f.n, 2, "pseudo-homogeneity is defined for pair colorings");
    f.check_domain(ys);
    let v = ys.as_slice();
    if v.len() < 2 {
        return Some(0);
    }
    let l = v.len();
    let words = l.div_ceil(64);
    'color: for c in 0..f.k {
        let c = c as u8;
        // into[b] = set of a < b with a ⇝ b in colour c.
        let mut into: Vec<Vec<u64>> = vec![vec![0u64; words]; l];
        for b in 1..l {
            let mut acc = vec![0u64; words];
            for m in 0..b {
                if f.pair(v[m], v[b]) == c {
                    acc[m / 64] |= 1 << (m % 64);
                    for w in 0..words {
                        acc[w] |= into[m][w];
                    }
                }
            }
            for a in 0..b {
                if acc[a / 64] >> (a % 64) & 1 == 0 {
                    continue 'color;
                }
            }
            into[b] = acc;
        }
        return Some(c);
    }
    None
}

/// Transitivity of the tournament encoded by a 2-coloring on `ys`:
/// for `x < y`, `x → y` iff `f(x,y) = 1`, otherwise `y → x`.
pub fn is_transitive_on(f: &Coloring, ys: &FinSet) -> bool {
    assert_eq!(f.n, 2, "tournaments come from pair colorings");
    f.check_domain(ys);
    first_cyclic_triple(f, ys).is_none()
}

/// The first triple `a < b < c` (lexicographically) inducing a 3-cycle.
pub fn first_cyclic_triple(f: &Coloring, ys: &FinSet) -> Option<(u64, u64, u64)> {
    let v = ys.as_slice();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let ab = f.pair(v[i], v[j]);
            for m in j + 1..v.len() {
                if ab == f.pair(v[j], v[m]) && ab != f.pair(v[i], v[m]) {
                    return Some((v[i], v[j], v[m]));
                }
            }
        }
    }
    None
}

/// Solution-predicate selector: `RT(n,k)`, `psRT(k)` or `EM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GammaSpec {
    Rt { n: u8, k: u32 },
    Psrt { k: u32 },
    Em,
}

impl GammaSpec {
    pub fn rt(n: u8, k: u32) -> Result<Self> {
        GammaSpec::Rt { n, k }.validated()
    }

    pub fn psrt(k: u32) -> Result<Self> {
        GammaSpec::Psrt { k }.validated()
    }

    fn validated(self) -> Result<Self> {
        let (n, k) = (self.n(), self.k());
        if n == 0 || k == 0 {
            return Err(Error::InvalidGamma(format!("{self}: parameters must be at least 1")));
        }
        if k > MAX_COLORS {
            return Err(Error::InvalidGamma(format!("{self}: at most {MAX_COLORS} colors")));
        }
        Ok(self)
    }

    /// Tuple size.
    pub fn n(&self) -> u8 {
        match *self {
            GammaSpec::Rt { n, .. } => n,
            _ => 2,
        }
    }

    /// Number of colors.
    pub fn k(&self) -> u32 {
        match *self {
            GammaSpec::Rt { k, .. } | GammaSpec::Psrt { k } => k,
            GammaSpec::Em => 2,
        }
    }

    /// Evaluates the solution predicate on `ys`.
    pub fn holds(&self, f: &Coloring, ys: &FinSet) -> bool {
        match self {
            GammaSpec::Rt { .. } => is_homogeneous(f, ys).is_some(),
            GammaSpec::Psrt { .. } => is_pseudo_homogeneous(f, ys).is_some(),
            GammaSpec::Em => is_transitive_on(f, ys),
        }
    }

    /// Checks that `f` has the tuple size and palette this selector expects.
    pub fn check_coloring(&self, f: &Coloring) -> Result<()> {
        if f.n() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "{self} needs a coloring of {}-tuples, got {}-tuples",
                self.n(),
                f.n()
            )));
        }
        if f.k() > self.k() {
            return Err(Error::DimensionMismatch(format!(
                "{self} allows {} colors, coloring has {}",
                self.k(),
                f.k()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaSpec::Rt { n, k } => write!(f, "rt:{n}:{k}"),
            GammaSpec::Psrt { k } => write!(f, "psrt:{k}"),
            GammaSpec::Em => f.write_str("em"),
        }
    }
}

impl FromStr for GammaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| -> Result<u32> {
            t.parse::<u32>()
                .map_err(|_| Error::InvalidGamma(format!("'{t}' is not a natural in '{s}'")))
        };
        match parts.as_slice() {
            ["rt", n, k] => {
                let n = num(n)?;
                let n = u8::try_from(n).map_err(|_| Error::InvalidGamma(format!("tuple size {n} too large")))?;
                GammaSpec::rt(n, num(k)?)
            }
            ["psrt", k] => GammaSpec::psrt(num(k)?),
            ["em"] => Ok(GammaSpec::Em),
            _ => Err(Error::InvalidGamma(format!(
                "expected rt:N:K, psrt:K or em, got '{s}'"
            ))),
        }
    }
}

impl Serialize for GammaSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GammaSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Generator selection for [`generate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenKind {
    /// Independent uniform colors.
    Uniform { n: u8, k: u32 },
    /// Every tuple gets color `c`.
    Constant { n: u8, k: u32, c: u8 },
    /// Pair colors read off a linear order of `[0, max]`: `f(x,y) = 1` iff `x`
    /// comes before `y`. Without an explicit order, a seeded shuffle is used.
    LinearOrder { order: Option<Vec<u64>> },
    /// `f(x,y) = 1` iff `x` and `y` lie in the same block; blocks must cover
    /// `[0, max]` disjointly.
    Partition { blocks: Vec<FinSet> },
}

/// Deterministic coloring generator over `[0, max]`.
pub fn generate(kind: &GenKind, max: u64, seed: u64) -> Result<Coloring> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        GenKind::Uniform { n, k } => {
            let len = table_len(*n, max)?;
            if *k == 0 || *k > MAX_COLORS {
                return Err(Error::InvalidColoring(format!("color count {k} outside 1..={MAX_COLORS}")));
            }
            let entries = (0..len).map(|_| rng.gen_range(0..*k) as u8).collect();
            Coloring::new(*n, *k, max, entries)
        }
        GenKind::Constant { n, k, c } => {
            let len = table_len(*n, max)?;
            Coloring::new(*n, *k, max, vec![*c; len])
        }
        GenKind::LinearOrder { order } => {
            let order = match order {
                Some(o) => {
                    let mut sorted = o.clone();
                    sorted.sort_unstable();
                    if sorted != (0..=max).collect::<Vec<_>>() {
                        return Err(Error::InvalidColoring(format!(
                            "order must be a permutation of [0,{max}]"
                        )));
                    }
                    o.clone()
                }
                None => {
                    let mut o: Vec<u64> = (0..=max).collect();
                    o.shuffle(&mut rng);
                    o
                }
            };
            let mut rank = vec![0usize; max as usize + 1];
            for (r, &x) in order.iter().enumerate() {
                rank[x as usize] = r;
            }
            Coloring::from_fn(2, 2, max, |x, y| u8::from(rank[x as usize] < rank[y as usize]))
        }
        GenKind::Partition { blocks } => {
            let mut owner = vec![usize::MAX; max as usize + 1];
            for (b, block) in blocks.iter().enumerate() {
                for x in block.iter() {
                    if x > max {
                        return Err(Error::InvalidColoring(format!("block element {x} exceeds max {max}")));
                    }
                    if owner[x as usize] != usize::MAX {
                        return Err(Error::InvalidColoring(format!("{x} lies in two blocks")));
                    }
                    owner[x as usize] = b;
                }
            }
            if let Some(x) = owner.iter().position(|&o| o == usize::MAX) {
                return Err(Error::InvalidColoring(format!("blocks do not cover {x}")));
            }
            Coloring::from_fn(2, 2, max, |x, y| u8::from(owner[x as usize] == owner[y as usize]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> FinSet {
        FinSet::new(v.to_vec()).unwrap()
    }

    fn triangle(c23: u8, c24: u8, c34: u8) -> Coloring {
        let mut f = Coloring::from_fn(2, 2, 4, |_, _| 0).unwrap();
        f.set_pair(2, 3, c23);
        f.set_pair(2, 4, c24);
        f.set_pair(3, 4, c34);
        f
    }

    #[test]
    fn colex_layout() {
        let f = Coloring::from_fn(2, 3, 3, |x, y| ((x + y) % 3) as u8).unwrap();
        assert_eq!(f.entries().len(), 6);
        // (0,1) (0,2) (1,2) (0,3) (1,3) (2,3)
        assert_eq!(f.entries(), &[1, 2, 0, 0, 1, 2]);
        assert_eq!(f.pair(3, 1), 1);
        assert!(Coloring::new(2, 2, 3, vec![0; 5]).is_err());
        assert!(Coloring::new(2, 2, 3, vec![2; 6]).is_err());
    }

    #[test]
    fn homogeneous_examples() {
        let zero = generate(&GenKind::Constant { n: 2, k: 2, c: 0 }, 6, 0).unwrap();
        assert_eq!(is_homogeneous(&zero, &set(&[1, 3, 5, 6])), Some(0));
        assert_eq!(is_homogeneous(&zero, &set(&[4])), Some(0));
        assert_eq!(is_homogeneous(&triangle(0, 1, 1), &set(&[2, 3, 4])), None);
    }

    #[test]
    fn pseudo_homogeneous_examples() {
        assert_eq!(is_pseudo_homogeneous(&triangle(0, 1, 1), &set(&[2, 3, 4])), None);
        assert_eq!(is_pseudo_homogeneous(&triangle(1, 0, 1), &set(&[2, 3, 4])), Some(1));
        let t = generate(&GenKind::LinearOrder { order: None }, 8, 5).unwrap();
        let y = set(&[0, 1]);
        assert_eq!(is_pseudo_homogeneous(&t, &y), is_homogeneous(&t, &y));
    }

    #[test]
    fn transitive_examples() {
        assert!(is_transitive_on(&triangle(1, 0, 1), &set(&[2, 4])));
        assert!(!is_transitive_on(&triangle(1, 0, 1), &set(&[2, 3, 4])));
        let t = generate(&GenKind::LinearOrder { order: None }, 12, 9).unwrap();
        assert!(is_transitive_on(&t, &FinSet::interval(0, 12)));
    }

    #[test]
    fn partition_generator() {
        let blocks = vec![set(&[0, 1]), set(&[2, 3]), set(&[4, 5])];
        let f = generate(&GenKind::Partition { blocks }, 5, 0).unwrap();
        assert_eq!(f.pair(2, 3), 1);
        assert_eq!(f.pair(2, 4), 0);
        let gap = vec![set(&[0, 1]), set(&[3, 4, 5])];
        assert!(generate(&GenKind::Partition { blocks: gap }, 5, 0).is_err());
        let overlap = vec![set(&[0, 1, 2]), set(&[2, 3, 4, 5])];
        assert!(generate(&GenKind::Partition { blocks: overlap }, 5, 0).is_err());
    }

    #[test]
    fn generators_are_seeded() {
        let kind = GenKind::Uniform { n: 2, k: 3 };
        assert_eq!(generate(&kind, 9, 4).unwrap(), generate(&kind, 9, 4).unwrap());
        assert_ne!(generate(&kind, 9, 4).unwrap(), generate(&kind, 9, 5).unwrap());
    }

    #[test]
    fn gamma_spec_round_trip() {
        for s in ["rt:2:2", "rt:1:3", "psrt:2", "em"] {
            assert_eq!(s.parse::<GammaSpec>().unwrap().to_string(), s);
        }
        assert!("rt:2".parse::<GammaSpec>().is_err());
        assert!("rt:0:2".parse::<GammaSpec>().is_err());
        assert!("em:2".parse::<GammaSpec>().is_err());
    }

    #[test]
    fn coloring_json_round_trip() {
        let f = generate(&GenKind::Uniform { n: 2, k: 2 }, 5, 1).unwrap();
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<Coloring>(&j).unwrap(), f);
        assert!(serde_json::from_str::<Coloring>(r#"{"n":2,"k":2,"max":2,"entries":[0,1]}"#).is_err());
    }
}
