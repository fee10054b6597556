//! The algebra `E ⊗ E` on its canonical basis, with support bookkeeping and
//! the Z2-gradings used throughout the crate.
//!
//! Multiplication is the ordinary tensor product of algebras,
//! `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`, with no sign for passing `b` over `c`.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grassmann::{ext_mul, merge_sign, monomial_degree, ExteriorMonomial, GradingMap, Z2};
use crate::scalar::{Field, Scalar};

/// Per-factor truncation ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ranks {
    pub left: u32,
    pub right: u32,
}

impl Ranks {
    pub const DEFAULT: Ranks = Ranks { left: 12, right: 12 };

    pub fn new(left: u32, right: u32) -> Self {
        Ranks { left, right }
    }

    pub fn square(n: u32) -> Self {
        Ranks { left: n, right: n }
    }
}

/// `left ⊗ right`, equivalently the ascending product of its support atoms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct BasisElement {
    pub left: ExteriorMonomial,
    pub right: ExteriorMonomial,
}

/// A generator of `E ⊗ E`: `e_i ⊗ 1` or `1 ⊗ e_j`. Left atoms sort first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Left(u32),
    Right(u32),
}

pub type Support = BTreeSet<Atom>;

/// Degree in the canonical Z2×Z2-grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiDegree(pub Z2, pub Z2);

impl BiDegree {
    pub const ALL: [BiDegree; 4] = [BiDegree(0, 0), BiDegree(1, 0), BiDegree(0, 1), BiDegree(1, 1)];

    pub fn add(self, o: BiDegree) -> BiDegree {
        BiDegree((self.0 + o.0) % 2, (self.1 + o.1) % 2)
    }

    /// Sign picked up when two disjoint basis elements of these bidegrees swap.
    pub fn commutation_sign(self, o: BiDegree) -> i8 {
        if (self.0 * o.0 + self.1 * o.1).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl BasisElement {
    pub const ONE: BasisElement = BasisElement { left: ExteriorMonomial::ONE, right: ExteriorMonomial::ONE };

    pub fn new(left: ExteriorMonomial, right: ExteriorMonomial) -> Self {
        BasisElement { left, right }
    }

    pub fn from_indices(left: &[u32], right: &[u32]) -> Option<Self> {
        Some(BasisElement {
            left: ExteriorMonomial::from_indices(left)?,
            right: ExteriorMonomial::from_indices(right)?,
        })
    }

    /// `e_i ⊗ 1`
    pub fn left_atom(i: u32) -> Self {
        BasisElement { left: ExteriorMonomial::generator(i), right: ExteriorMonomial::ONE }
    }

    /// `1 ⊗ e_j`
    pub fn right_atom(j: u32) -> Self {
        BasisElement { left: ExteriorMonomial::ONE, right: ExteriorMonomial::generator(j) }
    }

    pub fn support(self) -> Support {
        self.left
            .indices()
            .map(Atom::Left)
            .chain(self.right.indices().map(Atom::Right))
            .collect()
    }

    pub fn is_disjoint(self, o: BasisElement) -> bool {
        self.left.is_disjoint(o.left) && self.right.is_disjoint(o.right)
    }

    pub fn bidegree(self) -> BiDegree {
        BiDegree(self.left.parity(), self.right.parity())
    }

    pub fn alpha(self, scheme: GradingScheme) -> Z2 {
        scheme.degree(self)
    }

    pub fn fits(self, ranks: Ranks) -> bool {
        self.left.fits_rank(ranks.left) && self.right.fits_rank(ranks.right)
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(x){}", self.left, self.right)
    }
}

impl fmt::Debug for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Product of two basis elements; `None` exactly when the supports meet.
pub fn mul_basis(a: BasisElement, b: BasisElement) -> Option<(i8, BasisElement)> {
    let (s1, left) = ext_mul(a.left, b.left)?;
    let (s2, right) = ext_mul(a.right, b.right)?;
    Some((s1 * s2, BasisElement { left, right }))
}

/// Sign-only variant of [`mul_basis`] on raw masks, for hot loops.
#[inline]
pub(crate) fn mul_masks(al: u64, ar: u64, bl: u64, br: u64) -> Option<(i8, u64, u64)> {
    if al & bl != 0 || ar & br != 0 {
        return None;
    }
    Some((merge_sign(al, bl) * merge_sign(ar, br), al | bl, ar | br))
}

/// A Z2-grading of `E ⊗ E` under which the canonical basis is homogeneous.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradingScheme {
    /// Tensor product grading of `E` graded by `left` with `E` graded by `right`.
    Tensor(GradingMap, GradingMap),
    /// Quotient of the Z2×Z2-grading: variant 1 (`A_0 = A_00 + A_11`),
    /// 2 (`A_0 = A_00 + A_10`) or 3 (`A_0 = A_00 + A_01`).
    Quotient(u8),
}

impl GradingScheme {
    pub fn degree(self, b: BasisElement) -> Z2 {
        match self {
            GradingScheme::Tensor(gl, gr) => (monomial_degree(b.left, gl) + monomial_degree(b.right, gr)) % 2,
            GradingScheme::Quotient(v) => self.quotient_degree(v, b.bidegree()),
        }
    }

    fn quotient_degree(self, variant: u8, g: BiDegree) -> Z2 {
        match variant {
            1 => (g.0 + g.1) % 2,
            2 => g.1,
            3 => g.0,
            _ => unreachable!("quotient variant checked at construction"),
        }
    }

    /// For quotient schemes the degree is a function of the bidegree.
    pub fn degree_of_bidegree(self, g: BiDegree) -> Option<Z2> {
        match self {
            GradingScheme::Quotient(v) => Some(self.quotient_degree(v, g)),
            GradingScheme::Tensor(..) => None,
        }
    }

    pub fn is_quotient(self) -> bool {
        matches!(self, GradingScheme::Quotient(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid grading scheme `{0}` (expected Q1|Q2|Q3 or E(<k>*|inf|<k>)xE(...))")]
pub struct SchemeParseError(pub String);

fn parse_map(s: &str) -> Option<GradingMap> {
    let s = s.trim();
    if s == "inf" {
        return Some(GradingMap::Infinity);
    }
    if let Some(k) = s.strip_suffix('*') {
        return k.trim().parse().ok().map(GradingMap::KStar);
    }
    s.parse().ok().map(GradingMap::K)
}

impl FromStr for GradingScheme {
    type Err = SchemeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SchemeParseError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "Q1" => return Ok(GradingScheme::Quotient(1)),
            "Q2" => return Ok(GradingScheme::Quotient(2)),
            "Q3" => return Ok(GradingScheme::Quotient(3)),
            _ => {}
        }
        let (l, r) = t.split_once(")xE(").ok_or_else(err)?;
        let l = l.strip_prefix("E(").ok_or_else(err)?;
        let r = r.strip_suffix(')').ok_or_else(err)?;
        Ok(GradingScheme::Tensor(parse_map(l).ok_or_else(err)?, parse_map(r).ok_or_else(err)?))
    }
}

impl fmt::Display for GradingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingScheme::Quotient(v) => write!(f, "Q{v}"),
            GradingScheme::Tensor(l, r) => write!(f, "E({})xE({})", l.label(), r.label()),
        }
    }
}

impl Serialize for GradingScheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite linear combination of basis elements.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    field: Field,
    terms: BTreeMap<BasisElement, Scalar>,
}

impl TensorElement {
    pub fn zero(field: Field) -> Self {
        TensorElement { field, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::basis(field, BasisElement::ONE)
    }

    pub fn basis(field: Field, b: BasisElement) -> Self {
        Self::term(b, field.one())
    }

    pub fn term(b: BasisElement, c: Scalar) -> Self {
        let field = c.field();
        let mut t = TensorElement::zero(field);
        t.add_term(b, &c);
        t
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElement, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, b: BasisElement) -> Scalar {
        self.terms.get(&b).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, b: BasisElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, c.clone());
            }
        }
    }

    pub fn add(&self, o: &TensorElement) -> TensorElement {
        let mut r = self.clone();
        for (b, c) in &o.terms {
            r.add_term(*b, c);
        }
        r
    }

    pub fn sub(&self, o: &TensorElement) -> TensorElement {
        self.add(&o.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        if c.is_zero() {
            return TensorElement::zero(self.field);
        }
        TensorElement {
            field: self.field,
            terms: self.terms.iter().map(|(b, v)| (*b, v * c)).collect(),
        }
    }

    pub fn mul(&self, o: &TensorElement) -> TensorElement {
        let mut r = TensorElement::zero(self.field);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if let Some((s, ab)) = mul_basis(*a, *b) {
                    let c = x * y;
                    let c = if s < 0 { -c } else { c };
                    r.add_term(ab, &c);
                }
            }
        }
        r
    }

    /// Component of the given bidegree.
    pub fn project(&self, g: BiDegree) -> TensorElement {
        TensorElement {
            field: self.field,
            terms: self.terms.iter().filter(|(b, _)| b.bidegree() == g).map(|(b, c)| (*b, c.clone())).collect(),
        }
    }

    /// Degree in the scheme when every term has the same degree.
    pub fn homogeneous_degree(&self, scheme: GradingScheme) -> Option<Z2> {
        let mut it = self.terms.keys().map(|b| scheme.degree(*b));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn fits(&self, ranks: Ranks) -> bool {
        self.terms.keys().all(|b| b.fits(ranks))
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative_display() { (true, -c) } else { (false, c.clone()) };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{mag}*{b}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct JsonTerm<'a>(&'a BasisElement, &'a Scalar);

impl Serialize for JsonTerm<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 3)?;
        st.serialize_field("left", &self.0.left)?;
        st.serialize_field("right", &self.0.right)?;
        st.serialize_field("coef", self.1)?;
        st.end()
    }
}

/// Serializes as `[{"left":[1,2],"right":[3],"coef":"2"}, ...]`.
impl Serialize for TensorElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(b, c)| JsonTerm(b, c)))
    }
}

/// An algebra to check identities on: `E ⊗ E` with a grading, or one of the
/// ungraded algebras `E ⊗ E` and `E` (the latter modelled with right rank 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Graded(GradingScheme),
    Ordinary(OrdinaryAlgebra),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrdinaryAlgebra {
    /// A single Grassmann algebra.
    E,
    /// `E ⊗ E` without grading.
    EE,
}

impl FromStr for Target {
    type Err = SchemeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "E" => Ok(Target::Ordinary(OrdinaryAlgebra::E)),
            "EE" | "ExE" => Ok(Target::Ordinary(OrdinaryAlgebra::EE)),
            other => other.parse().map(Target::Graded),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Graded(g) => write!(f, "{g}"),
            Target::Ordinary(OrdinaryAlgebra::E) => write!(f, "E"),
            Target::Ordinary(OrdinaryAlgebra::EE) => write!(f, "EE"),
        }
    }
}

impl Serialize for Target {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn be(l: &[u32], r: &[u32]) -> BasisElement {
        BasisElement::from_indices(l, r).unwrap()
    }

    #[test]
    fn mul_basis_examples() {
        assert_eq!(mul_basis(be(&[1], &[]), be(&[], &[1])), Some((1, be(&[1], &[1]))));
        assert_eq!(mul_basis(be(&[], &[1]), be(&[1], &[])), Some((1, be(&[1], &[1]))));
        assert_eq!(mul_basis(be(&[1], &[]), be(&[1], &[])), None);
    }

    #[test]
    fn support_examples() {
        let s: Vec<Atom> = be(&[1, 2], &[1]).support().into_iter().collect();
        assert_eq!(s, vec![Atom::Left(1), Atom::Left(2), Atom::Right(1)]);
        assert!(BasisElement::ONE.support().is_empty());
        assert_eq!(be(&[3], &[]).support().into_iter().collect::<Vec<_>>(), vec![Atom::Left(3)]);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(be(&[1], &[1]).bidegree(), BiDegree(1, 1));
        assert_eq!(be(&[1], &[]).alpha(GradingScheme::Quotient(2)), 0);
        let s = GradingScheme::Tensor(GradingMap::Infinity, GradingMap::K(0));
        assert_eq!(be(&[2], &[]).alpha(s), 1);
    }

    #[test]
    fn scheme_strings() {
        for s in ["Q1", "Q2", "Q3", "E(inf)xE(1)", "E(1*)xE(1*)", "E(0*)xE(0)", "E(2)xE(inf)"] {
            let parsed: GradingScheme = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        assert_eq!(
            "E(1*)xE(2*)".parse::<GradingScheme>().unwrap(),
            GradingScheme::Tensor(GradingMap::KStar(1), GradingMap::KStar(2))
        );
        assert!("Q4".parse::<GradingScheme>().is_err());
        assert!("E(x)xE(1)".parse::<GradingScheme>().is_err());
        assert_eq!("EE".parse::<Target>().unwrap(), Target::Ordinary(OrdinaryAlgebra::EE));
        assert_eq!("E".parse::<Target>().unwrap().to_string(), "E");
        assert_eq!("Q2".parse::<Target>().unwrap(), Target::Graded(GradingScheme::Quotient(2)));
    }

    #[test]
    fn square_of_sum() {
        let f = Field::Rational;
        let u = TensorElement::basis(f, be(&[1], &[])).add(&TensorElement::basis(f, be(&[2], &[])));
        // e1e2 + e2e1 = 0: odd elements of one factor anticommute.
        assert!(u.mul(&u).is_zero());
        let v = TensorElement::basis(f, be(&[1], &[1])).add(&TensorElement::basis(f, be(&[2], &[2])));
        assert_eq!(v.mul(&v), TensorElement::term(be(&[1, 2], &[1, 2]), f.from_i64(2)));
        assert!(u.mul(&TensorElement::zero(f)).is_zero());
        assert_eq!(TensorElement::one(f).mul(&u), u);
    }

    #[test]
    fn json_form() {
        let t = TensorElement::term(be(&[1, 2], &[3]), Field::Rational.from_i64(-2));
        assert_eq!(serde_json::to_string(&t).unwrap(), r#"[{"left":[1,2],"right":[3],"coef":"-2"}]"#);
    }

    // Independent model: left-regular matrices of E and their Kronecker product.
    fn regular_matrix(m: ExteriorMonomial, rank: u32) -> Vec<Vec<i64>> {
        let n = 1usize << rank;
        let mut mat = vec![vec![0i64; n]; n];
        for col in 0..n as u64 {
            let c = ExteriorMonomial::from_mask(col);
            if let Some((s, p)) = ext_mul(m, c) {
                mat[p.mask() as usize][col as usize] = s as i64;
            }
        }
        mat
    }

    fn kron(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let (n, m) = (a.len(), b.len());
        let mut out = vec![vec![0; n * m]; n * m];
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        out
    }

    fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let n = a.len();
        let mut out = vec![vec![0; n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k] != 0 {
                    for j in 0..n {
                        out[i][j] += a[i][k] * b[k][j];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn matches_kronecker_model() {
        for rank in [1u32, 2] {
            let n = 1u64 << rank;
            let rep = |b: BasisElement| kron(&regular_matrix(b.left, rank), &regular_matrix(b.right, rank));
            let zero = vec![vec![0i64; (n * n) as usize]; (n * n) as usize];
            for al in 0..n {
                for ar in 0..n {
                    for bl in 0..n {
                        for br in 0..n {
                            let a = BasisElement::new(ExteriorMonomial::from_mask(al), ExteriorMonomial::from_mask(ar));
                            let b = BasisElement::new(ExteriorMonomial::from_mask(bl), ExteriorMonomial::from_mask(br));
                            let expected = matmul(&rep(a), &rep(b));
                            match mul_basis(a, b) {
                                None => assert_eq!(expected, zero),
                                Some((s, p)) => {
                                    let mut r = rep(p);
                                    r.iter_mut().flatten().for_each(|x| *x *= s as i64);
                                    assert_eq!(expected, r, "{a} * {b}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn disjoint_support_criterion_rank_4() {
        let all: Vec<BasisElement> = (0u64..16)
            .flat_map(|l| (0u64..16).map(move |r| BasisElement::new(ExteriorMonomial::from_mask(l), ExteriorMonomial::from_mask(r))))
            .collect();
        for &a in &all {
            for &b in &all {
                let meet = !a.support().is_disjoint(&b.support());
                assert_eq!(mul_basis(a, b).is_none(), meet);
            }
        }
    }

    fn panel() -> Vec<GradingScheme> {
        let maps = [GradingMap::KStar(0), GradingMap::KStar(2), GradingMap::Infinity, GradingMap::K(0), GradingMap::K(1)];
        let mut v: Vec<GradingScheme> = (1..=3).map(GradingScheme::Quotient).collect();
        for l in maps {
            for r in maps {
                v.push(GradingScheme::Tensor(l, r));
            }
        }
        v
    }

    #[test]
    fn grading_compatibility() {
        let schemes = panel();
        for al in 0u64..16 {
            for ar in 0u64..16 {
                for bl in 0u64..16 {
                    for br in (0u64..16).step_by(3) {
                        let a = BasisElement::new(ExteriorMonomial::from_mask(al), ExteriorMonomial::from_mask(ar));
                        let b = BasisElement::new(ExteriorMonomial::from_mask(bl), ExteriorMonomial::from_mask(br));
                        if let Some((_, p)) = mul_basis(a, b) {
                            assert_eq!(p.bidegree(), a.bidegree().add(b.bidegree()));
                            for &s in &schemes {
                                assert_eq!(s.degree(p), (s.degree(a) + s.degree(b)) % 2);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_two_is_tensor_zero_star_zero() {
        let t = GradingScheme::Tensor(GradingMap::KStar(0), GradingMap::K(0));
        for l in 0u64..64 {
            for r in 0u64..64 {
                let b = BasisElement::new(ExteriorMonomial::from_mask(l), ExteriorMonomial::from_mask(r));
                assert_eq!(GradingScheme::Quotient(2).degree(b), t.degree(b));
            }
        }
    }

    fn random_element(rng: &mut ChaCha8Rng, field: Field) -> TensorElement {
        let mut t = TensorElement::zero(field);
        for _ in 0..rng.gen_range(1..4) {
            let b = BasisElement::new(
                ExteriorMonomial::from_mask(rng.gen_range(0..256u64) & rng.gen_range(0..256u64)),
                ExteriorMonomial::from_mask(rng.gen_range(0..256u64) & rng.gen_range(0..256u64)),
            );
            t.add_term(b, &field.from_i64(rng.gen_range(-3..4)));
        }
        t
    }

    #[test]
    fn associativity_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [Field::Rational, Field::Prime(5)] {
            for _ in 0..1000 {
                let (a, b, c) = (random_element(&mut rng, field), random_element(&mut rng, field), random_element(&mut rng, field));
                assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            }
        }
    }

    #[test]
    fn swap_sign_depends_on_bidegrees_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let a = BasisElement::new(
                ExteriorMonomial::from_mask(rng.gen_range(0..256u64)),
                ExteriorMonomial::from_mask(rng.gen_range(0..256u64)),
            );
            let b = BasisElement::new(
                ExteriorMonomial::from_mask(rng.gen_range(0..256u64)),
                ExteriorMonomial::from_mask(rng.gen_range(0..256u64)),
            );
            if let (Some((s1, p)), Some((s2, q))) = (mul_basis(a, b), mul_basis(b, a)) {
                assert_eq!(p, q);
                assert_eq!(s1 * s2, a.bidegree().commutation_sign(b.bidegree()));
            }
        }
    }
}
