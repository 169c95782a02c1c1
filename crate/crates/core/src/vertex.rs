use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A vertex of a countably infinite graph, i.e. a natural number.
///
/// Arbitrary precision: adjacency witnesses produced by the digit
/// constructions routinely exceed machine words after a few dozen stages, so
/// a fixed-width representation would turn correct runs into overflow aborts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId(BigUint);

impl VertexId {
    pub fn zero() -> Self {
        VertexId(BigUint::zero())
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Number of binary digits; 0 for the vertex 0.
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    pub fn succ(&self) -> VertexId {
        VertexId(&self.0 + 1u32)
    }

    /// Predecessor; `None` for 0.
    pub fn pred(&self) -> Option<VertexId> {
        if self.0.is_zero() {
            None
        } else {
            Some(VertexId(&self.0 - 1u32))
        }
    }

    pub fn checked_sub(&self, other: &VertexId) -> Option<VertexId> {
        if self.0 >= other.0 {
            Some(VertexId(&self.0 - &other.0))
        } else {
            None
        }
    }

    pub fn div_floor_by(&self, d: u64) -> VertexId {
        debug_assert!(d > 0);
        VertexId(self.0.div_floor(&BigUint::from(d)))
    }

    pub fn rem_by(&self, d: u64) -> u64 {
        debug_assert!(d > 0);
        (&self.0 % d).to_u64().expect("remainder fits u64")
    }

    pub fn is_multiple_of(&self, d: u64) -> bool {
        self.rem_by(d) == 0
    }
}

impl From<u64> for VertexId {
    fn from(n: u64) -> Self {
        VertexId(BigUint::from(n))
    }
}

impl From<u32> for VertexId {
    fn from(n: u32) -> Self {
        VertexId(BigUint::from(n))
    }
}

impl From<usize> for VertexId {
    fn from(n: usize) -> Self {
        VertexId(BigUint::from(n))
    }
}

impl From<BigUint> for VertexId {
    fn from(n: BigUint) -> Self {
        VertexId(n)
    }
}

impl FromStr for VertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<BigUint>()
            .map(VertexId)
            .map_err(|_| Error::Input(format!("not a natural number: {s:?}")))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An unordered pair of distinct vertices, stored with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePair {
    lo: VertexId,
    hi: VertexId,
}

impl EdgePair {
    pub fn new(a: VertexId, b: VertexId) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(EdgePair { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(EdgePair { lo: b, hi: a }),
            std::cmp::Ordering::Equal => {
                Err(Error::Input(format!("degenerate edge {{{a},{b}}}")))
            }
        }
    }

    pub fn lo(&self) -> &VertexId {
        &self.lo
    }

    pub fn hi(&self) -> &VertexId {
        &self.hi
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        &self.lo == v || &self.hi == v
    }

    pub fn other(&self, v: &VertexId) -> Option<&VertexId> {
        if v == &self.lo {
            Some(&self.hi)
        } else if v == &self.hi {
            Some(&self.lo)
        } else {
            None
        }
    }
}

/// Colex order: compare by `hi`, then by `lo`. Sorted edge containers
/// therefore iterate in enumeration order.
impl Ord for EdgePair {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.hi, &self.lo).cmp(&(&other.hi, &other.lo))
    }
}

impl PartialOrd for EdgePair {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EdgePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

/// Position of a pair in the colex enumeration of all unordered pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeIndex(BigUint);

impl EdgeIndex {
    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for EdgeIndex {
    fn from(n: u64) -> Self {
        EdgeIndex(BigUint::from(n))
    }
}

impl From<BigUint> for EdgeIndex {
    fn from(n: BigUint) -> Self {
        EdgeIndex(n)
    }
}

impl FromStr for EdgeIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<BigUint>()
            .map(EdgeIndex)
            .map_err(|_| Error::Input(format!("not an edge index: {s:?}")))
    }
}

impl fmt::Display for EdgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Index of `{lo,hi}` in colex order: hi*(hi-1)/2 + lo.
pub fn edge_index(e: &EdgePair) -> EdgeIndex {
    let hi = e.hi.as_biguint();
    let lo = e.lo.as_biguint();
    let tri = hi * (hi - 1u32) / 2u32;
    EdgeIndex(tri + lo)
}

/// Inverse of `edge_index`: recover the pair from its position.
pub fn edge_pair(k: &EdgeIndex) -> EdgePair {
    // hi is the largest h with h*(h-1)/2 <= k; seed with the integer sqrt of
    // 2k and correct by at most a couple of steps.
    let k = &k.0;
    let two_k: BigUint = k * 2u32;
    let mut hi = two_k.sqrt();
    if hi < BigUint::one() {
        hi = BigUint::one();
    }
    while &hi * (&hi - 1u32) / 2u32 > *k {
        hi -= 1u32;
    }
    loop {
        let next = &hi + 1u32;
        if &next * (&next - 1u32) / 2u32 <= *k {
            hi = next;
        } else {
            break;
        }
    }
    let lo = k - &hi * (&hi - 1u32) / 2u32;
    EdgePair {
        lo: VertexId(lo),
        hi: VertexId(hi),
    }
}

/// All unordered pairs of naturals in colex order:
/// {0,1}, {0,2}, {1,2}, {0,3}, {1,3}, {2,3}, {0,4}, ...
#[derive(Debug, Clone)]
pub struct ColexPairs {
    lo: BigUint,
    hi: BigUint,
}

impl Default for ColexPairs {
    fn default() -> Self {
        Self::new()
    }
}

impl ColexPairs {
    pub fn new() -> Self {
        ColexPairs {
            lo: BigUint::zero(),
            hi: BigUint::one(),
        }
    }
}

impl Iterator for ColexPairs {
    type Item = EdgePair;

    fn next(&mut self) -> Option<EdgePair> {
        let pair = EdgePair {
            lo: VertexId(self.lo.clone()),
            hi: VertexId(self.hi.clone()),
        };
        self.lo += 1u32;
        if self.lo == self.hi {
            self.lo = BigUint::zero();
            self.hi += 1u32;
        }
        Some(pair)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: u64) -> VertexId {
        VertexId::from(n)
    }

    fn pair(a: u64, b: u64) -> EdgePair {
        EdgePair::new(v(a), v(b)).unwrap()
    }

    // Independent enumeration oracle: list pairs by brute double loop in
    // colex order and compare against the closed forms.
    fn enumerate_colex(n: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for hi in 1..n {
            for lo in 0..hi {
                out.push((lo, hi));
            }
        }
        out
    }

    #[test]
    fn first_pair_has_index_zero() {
        assert_eq!(edge_index(&pair(0, 1)), EdgeIndex::from(0u64));
    }

    #[test]
    fn index_eight_is_two_four() {
        assert_eq!(edge_pair(&EdgeIndex::from(8u64)), pair(2, 4));
        assert_eq!(edge_index(&pair(2, 4)), EdgeIndex::from(8u64));
    }

    #[test]
    fn index_matches_enumeration_oracle() {
        for (k, (lo, hi)) in enumerate_colex(40).into_iter().enumerate() {
            let e = pair(lo, hi);
            assert_eq!(edge_index(&e), EdgeIndex::from(k as u64), "pair {e}");
            assert_eq!(edge_pair(&EdgeIndex::from(k as u64)), e, "index {k}");
        }
    }

    #[test]
    fn iterator_agrees_with_oracle() {
        let want = enumerate_colex(40);
        let got: Vec<EdgePair> = ColexPairs::new().take(want.len()).collect();
        for ((lo, hi), g) in want.into_iter().zip(got) {
            assert_eq!(g, pair(lo, hi));
        }
    }

    #[test]
    fn colex_order_is_edge_pair_order() {
        let mut prev: Option<EdgePair> = None;
        for e in ColexPairs::new().take(200) {
            if let Some(p) = &prev {
                assert!(p < &e);
            }
            prev = Some(e);
        }
    }

    #[test]
    fn round_trip_large_indices() {
        for k in [0u64, 1, 2, 3, 10, 100, 12345, 999_999_999] {
            let idx = EdgeIndex::from(k);
            assert_eq!(edge_index(&edge_pair(&idx)), idx);
        }
        let huge: BigUint = BigUint::from(7u32).pow(80);
        let idx = EdgeIndex::from(huge);
        assert_eq!(edge_index(&edge_pair(&idx)), idx);
    }

    #[test]
    fn pair_normalizes_and_rejects_loops() {
        let e = EdgePair::new(v(7), v(3)).unwrap();
        assert_eq!(e.lo(), &v(3));
        assert_eq!(e.hi(), &v(7));
        assert!(EdgePair::new(v(5), v(5)).is_err());
    }

    #[test]
    fn vertex_parse_and_arith() {
        let n: VertexId = "18446744073709551617".parse().unwrap();
        assert_eq!(n.to_u64(), None);
        assert!(n > VertexId::from(u64::MAX));
        assert_eq!(v(6).div_floor_by(4), v(1));
        assert_eq!(v(6).rem_by(4), 2);
        assert_eq!(v(5).checked_sub(&v(2)), Some(v(3)));
        assert_eq!(v(2).checked_sub(&v(5)), None);
        assert!("x".parse::<VertexId>().is_err());
        assert!("-3".parse::<VertexId>().is_err());
    }
}
