//! One Grassmann factor truncated to finitely many generators.
//!
//! A monomial `e_{i1} e_{i2} ... e_{ik}` with `i1 < ... < ik` is stored as a
//! bit mask with bit `i - 1` set for each generator `e_i`, so ranks up to 64
//! are supported.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported rank of a single Grassmann factor.
pub const MAX_RANK: u32 = 64;

/// An element of Z2, stored as 0 or 1.
pub type Z2 = u8;

/// A basis monomial of the Grassmann algebra; the empty mask is the unit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExteriorMonomial(u64);

impl ExteriorMonomial {
    pub const ONE: ExteriorMonomial = ExteriorMonomial(0);

    pub fn from_mask(mask: u64) -> Self {
        ExteriorMonomial(mask)
    }

    /// Builds a monomial from generator indices (1-based, any order, no repeats).
    pub fn from_indices(indices: &[u32]) -> Option<Self> {
        let mut mask = 0u64;
        for &i in indices {
            if i == 0 || i > MAX_RANK {
                return None;
            }
            let bit = 1u64 << (i - 1);
            if mask & bit != 0 {
                return None;
            }
            mask |= bit;
        }
        Some(ExteriorMonomial(mask))
    }

    pub fn generator(i: u32) -> Self {
        assert!((1..=MAX_RANK).contains(&i), "generator index out of range");
        ExteriorMonomial(1u64 << (i - 1))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// Parity of the length, i.e. the degree in the canonical Z2-grading of E.
    pub fn parity(self) -> Z2 {
        (self.0.count_ones() & 1) as Z2
    }

    /// Highest generator index used, 0 for the unit.
    pub fn max_index(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    pub fn indices(self) -> impl Iterator<Item = u32> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let t = m.trailing_zeros();
            m &= m - 1;
            Some(t + 1)
        })
    }

    pub fn is_disjoint(self, other: ExteriorMonomial) -> bool {
        self.0 & other.0 == 0
    }

    pub fn fits_rank(self, rank: u32) -> bool {
        self.max_index() <= rank
    }
}

impl fmt::Display for ExteriorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for i in self.indices() {
            write!(f, "e{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExteriorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ExteriorMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.indices())
    }
}

impl<'de> Deserialize<'de> for ExteriorMonomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(serde::de::Error::custom("indices must be strictly increasing"));
        }
        ExteriorMonomial::from_indices(&v)
            .ok_or_else(|| serde::de::Error::custom("invalid generator index"))
    }
}

/// Sign of moving `b` past `a`: `(-1)^#{(i, j) : i in a, j in b, i > j}`.
pub fn merge_sign(a: u64, b: u64) -> i8 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // generators of `a` strictly above position j
        let above = if j == 63 { 0 } else { a >> (j + 1) };
        inversions += above.count_ones();
    }
    if inversions & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Product of two monomials: `None` when they share a generator, otherwise
/// the sign and the sorted union.
pub fn ext_mul(a: ExteriorMonomial, b: ExteriorMonomial) -> Option<(i8, ExteriorMonomial)> {
    if !a.is_disjoint(b) {
        return None;
    }
    Some((merge_sign(a.0, b.0), ExteriorMonomial(a.0 | b.0)))
}

/// A map from generators to Z2 that induces a grading of E.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GradingMap {
    /// `||e_i|| = 1` exactly for `i <= k`.
    KStar(u32),
    /// `||e_i|| = 1` exactly for even `i`.
    Infinity,
    /// `||e_i|| = 0` exactly for `i <= k`.
    K(u32),
}

const EVEN_BITS: u64 = 0xAAAA_AAAA_AAAA_AAAA;

impl GradingMap {
    pub fn generator_degree(self, i: u32) -> Z2 {
        match self {
            GradingMap::KStar(k) => (i <= k) as Z2,
            GradingMap::Infinity => i.is_multiple_of(2) as Z2,
            GradingMap::K(k) => (i > k) as Z2,
        }
    }

    /// Mask of the generators of degree 1.
    pub fn odd_mask(self) -> u64 {
        let low = |k: u32| if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
        match self {
            GradingMap::KStar(k) => low(k),
            GradingMap::Infinity => EVEN_BITS,
            GradingMap::K(k) => !low(k),
        }
    }

    /// Short name used in scheme strings: `3*`, `inf`, `3`.
    pub fn label(self) -> String {
        match self {
            GradingMap::KStar(k) => format!("{k}*"),
            GradingMap::Infinity => "inf".to_string(),
            GradingMap::K(k) => format!("{k}"),
        }
    }
}

/// Degree of a monomial: the sum in Z2 of its generator degrees.
pub fn monomial_degree(m: ExteriorMonomial, g: GradingMap) -> Z2 {
    ((m.mask() & g.odd_mask()).count_ones() & 1) as Z2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(ix: &[u32]) -> ExteriorMonomial {
        ExteriorMonomial::from_indices(ix).unwrap()
    }

    #[test]
    fn ext_mul_examples() {
        assert_eq!(ext_mul(mono(&[1, 2]), mono(&[3])), Some((1, mono(&[1, 2, 3]))));
        assert_eq!(ext_mul(mono(&[2]), mono(&[1])), Some((-1, mono(&[1, 2]))));
        assert_eq!(ext_mul(mono(&[1]), mono(&[1])), None);
        assert_eq!(ext_mul(ExteriorMonomial::ONE, mono(&[4])), Some((1, mono(&[4]))));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(monomial_degree(mono(&[2]), GradingMap::Infinity), 1);
        assert_eq!(monomial_degree(mono(&[1, 2]), GradingMap::Infinity), 1);
        assert_eq!(monomial_degree(mono(&[1, 2]), GradingMap::KStar(2)), 0);
        assert_eq!(monomial_degree(ExteriorMonomial::ONE, GradingMap::K(0)), 0);
        assert_eq!(monomial_degree(mono(&[1, 5]), GradingMap::K(1)), 1);
    }

    #[test]
    fn grading_map_definitions() {
        for i in 1..=20 {
            assert_eq!(GradingMap::KStar(3).generator_degree(i) == 1, i <= 3);
            assert_eq!(GradingMap::Infinity.generator_degree(i) == 1, i % 2 == 0);
            assert_eq!(GradingMap::K(3).generator_degree(i) == 0, i <= 3);
            for g in [GradingMap::KStar(3), GradingMap::Infinity, GradingMap::K(3)] {
                assert_eq!(monomial_degree(ExteriorMonomial::generator(i), g), g.generator_degree(i));
            }
        }
    }

    #[test]
    fn rendering() {
        assert_eq!(mono(&[5, 1, 2]).to_string(), "e1e2e5");
        assert_eq!(ExteriorMonomial::ONE.to_string(), "1");
    }

    #[test]
    fn anticommuting_generators() {
        for i in 1..=8 {
            for j in 1..=8 {
                if i == j {
                    continue;
                }
                let (s1, _) = ext_mul(ExteriorMonomial::generator(i), ExteriorMonomial::generator(j)).unwrap();
                let (s2, _) = ext_mul(ExteriorMonomial::generator(j), ExteriorMonomial::generator(i)).unwrap();
                assert_eq!(s1, -s2);
            }
        }
    }

    // Reference sign: literally bubble-sort the concatenated index list.
    fn bubble_sign(a: ExteriorMonomial, b: ExteriorMonomial) -> Option<(i8, u64)> {
        let mut v: Vec<u32> = a.indices().chain(b.indices()).collect();
        let mut sign = 1i8;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] == v[j + 1] {
                    return None;
                }
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, v.iter().fold(0, |m, &i| m | 1 << (i - 1))))
    }

    #[test]
    fn associativity_exhaustive_rank_8() {
        let all: Vec<ExteriorMonomial> = (0u64..256).map(ExteriorMonomial::from_mask).collect();
        let mul3 = |x: Option<(i8, ExteriorMonomial)>, y: ExteriorMonomial| {
            x.and_then(|(s, m)| ext_mul(m, y).map(|(t, p)| (s * t, p)))
        };
        for &a in &all {
            for &b in &all {
                if !a.is_disjoint(b) {
                    continue;
                }
                let ab = ext_mul(a, b);
                assert_eq!(ab.map(|(s, m)| (s, m.mask())), bubble_sign(a, b));
                for &c in &all {
                    if a.len() + b.len() + c.len() > 6 {
                        continue;
                    }
                    let left = mul3(ab, c);
                    let right = ext_mul(b, c).and_then(|(s, bc)| ext_mul(a, bc).map(|(t, p)| (s * t, p)));
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn degree_is_additive() {
        let maps = [GradingMap::KStar(0), GradingMap::KStar(3), GradingMap::Infinity, GradingMap::K(0), GradingMap::K(2)];
        for a in 0u64..64 {
            for b in 0u64..64 {
                let (a, b) = (ExteriorMonomial::from_mask(a), ExteriorMonomial::from_mask(b));
                if let Some((_, p)) = ext_mul(a, b) {
                    for g in maps {
                        assert_eq!(monomial_degree(p, g), (monomial_degree(a, g) + monomial_degree(b, g)) % 2);
                    }
                }
            }
        }
    }
}
