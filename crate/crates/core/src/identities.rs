//! The catalog of identity generators and the normal terms spanning the
//! Y-proper part of the relatively free algebra.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

use crate::freealg::{parse, Expr, FreeAlgError, GradedPolynomial, Variable};
use crate::grassmann::GradingMap;
use crate::scalar::{Field, Scalar};
use crate::tensor_square::{GradingScheme, OrdinaryAlgebra, Target};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentityError {
    #[error("no identity catalog for scheme {0}")]
    UnsupportedScheme(String),
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("normal term ordering violated: {0}")]
    Ordering(String),
    #[error(transparent)]
    Alg(#[from] FreeAlgError),
}

/// The seven generator families of the identity ideal `I`.
/// `x`-variables range over both parities.
pub const GENERATORS: [(&str, &str); 7] = [
    ("I.1", "[y1,y2,x3]"),
    ("I.2", "[y1,z2,y3]"),
    ("I.3", "[y1,z2] o z3"),
    ("I.4", "[z1 o z2, z3]"),
    ("I.5", "(z1 o z2)*(z3 o z4) - (z1 o z3)*(z2 o z4)"),
    ("I.6", "[x1,y2]*[y3,x4] + [x1,y3]*[y2,x4]"),
    ("I.7", "[y1,z2]*(z3 o z4) - [y1,z3]*(z2 o z4)"),
];

/// Ordinary identities of `E` and of `E ⊗ E` in characteristic zero.
pub const ORDINARY: [(&str, &str, OrdinaryAlgebra); 3] = [
    ("ORD.E.1", "[x1,x2,x3]", OrdinaryAlgebra::E),
    ("ORD.EE.1", "[x1,x2,[x3,x4],x5]", OrdinaryAlgebra::EE),
    ("ORD.EE.2", "[[x1,x2]^2,x2]", OrdinaryAlgebra::EE),
];

/// A concrete catalog polynomial with the algebra on which it is claimed to hold.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub expr: Expr,
    pub polynomial: GradedPolynomial,
    pub target: Target,
}

impl Serialize for CatalogEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CatalogEntry", 3)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("expr", &self.expr.to_string())?;
        st.serialize_field("target", &self.target)?;
        st.end()
    }
}

fn entry(id: String, expr: Expr, field: Field, target: Target) -> Result<CatalogEntry, IdentityError> {
    let polynomial = expr.expand(field)?;
    Ok(CatalogEntry { id, expr, polynomial, target })
}

/// Both parity instances of every generator family, e.g. `I.1.y`, `I.1.z`.
pub fn i_generators(field: Field) -> Vec<CatalogEntry> {
    let target = Target::Graded(GradingScheme::Quotient(2));
    let mut out = Vec::new();
    for (id, text) in GENERATORS {
        let e = parse(text).expect("catalog text parses");
        for (label, inst) in e.instantiate_parities() {
            let id = if label.is_empty() { id.to_string() } else { format!("{id}.{label}") };
            out.push(entry(id, inst, field, target).expect("integer coefficients"));
        }
    }
    out
}

fn yz_chain(count: u32) -> Vec<Expr> {
    (1..=count).map(|i| Expr::comm(vec![Expr::y(i), Expr::z(1)])).collect()
}

fn product(mut parts: Vec<Expr>) -> Expr {
    match parts.len() {
        0 => Expr::num(1),
        1 => parts.pop().expect("one part"),
        _ => Expr::Product(parts),
    }
}

/// The index pairs `(n, k)` with `2n + 2k - 1 = p`, `n = 0, ..., (p-1)/2`.
pub fn char_p_index_range(p: u64) -> Vec<(u32, u32)> {
    let half = ((p - 1) / 2) as u32;
    (0..=half).map(|n| (n, half + 1 - n)).collect()
}

/// The extra generators in characteristic `p`: `Ip.z.<n>.<k>` is
/// `[y1,z1]...[y_{2k-2},z1] (z2 o z1) z1^{2n}` and `Ip.c.<n>.<k>` is
/// `[y1,z1]...[y_{2k-1},z1] z1^{2n}`. An empty product of commutators is 1.
pub fn ip_extra(p: u64) -> Vec<CatalogEntry> {
    let field = Field::Prime(p);
    let target = Target::Graded(GradingScheme::Quotient(2));
    let mut out = Vec::new();
    for (n, k) in char_p_index_range(p) {
        let mut zp = yz_chain(2 * k - 2);
        zp.push(Expr::jordan(Expr::z(2), Expr::z(1)));
        let mut c = yz_chain(2 * k - 1);
        if n > 0 {
            zp.push(Expr::pow(Expr::z(1), 2 * n));
            c.push(Expr::pow(Expr::z(1), 2 * n));
        }
        out.push(entry(format!("Ip.z.{n}.{k}"), product(zp), field, target).expect("integer coefficients"));
        out.push(entry(format!("Ip.c.{n}.{k}"), product(c), field, target).expect("integer coefficients"));
    }
    out
}

/// `z1 z2 ... z_{k+j+1}`, the identity of `E(k*) ⊗ E(j*)`.
pub fn pigeonhole(k: u32, j: u32, field: Field) -> CatalogEntry {
    let word = product((1..=k + j + 1).map(Expr::z).collect());
    let target = Target::Graded(GradingScheme::Tensor(GradingMap::KStar(k), GradingMap::KStar(j)));
    entry(format!("PH.{k}.{j}"), word, field, target).expect("integer coefficients")
}

pub fn ordinary(field: Field) -> Vec<CatalogEntry> {
    ORDINARY
        .iter()
        .map(|(id, text, alg)| {
            entry(id.to_string(), parse(text).expect("catalog text parses"), field, Target::Ordinary(*alg))
                .expect("integer coefficients")
        })
        .collect()
}

/// The generator list asserted for a grading scheme.
pub fn catalog(scheme: GradingScheme, field: Field) -> Result<Vec<CatalogEntry>, IdentityError> {
    match scheme {
        GradingScheme::Quotient(2) | GradingScheme::Quotient(3) => {
            let mut out = i_generators(field);
            if let Field::Prime(p) = field {
                out.extend(ip_extra(p));
            }
            for e in &mut out {
                e.target = Target::Graded(scheme);
            }
            Ok(out)
        }
        GradingScheme::Tensor(GradingMap::KStar(k), GradingMap::KStar(j)) => {
            let mut out = vec![pigeonhole(k, j, field)];
            if field == Field::Rational {
                out.extend(ordinary(field).into_iter().filter(|e| e.target == Target::Ordinary(OrdinaryAlgebra::EE)));
            }
            Ok(out)
        }
        GradingScheme::Tensor(GradingMap::Infinity, _) | GradingScheme::Tensor(_, GradingMap::Infinity) => Ok(Vec::new()),
        other => Err(IdentityError::UnsupportedScheme(other.to_string())),
    }
}

/// Resolves a catalog id. A family id such as `I.6` returns all its instances.
pub fn lookup(id: &str, field: Field) -> Result<Vec<CatalogEntry>, IdentityError> {
    let unknown = || IdentityError::UnknownId(id.to_string());
    let parts: Vec<&str> = id.split('.').collect();
    let found: Vec<CatalogEntry> = match parts.as_slice() {
        ["I", ..] => i_generators(field)
            .into_iter()
            .filter(|e| e.id == id || e.id.starts_with(&format!("{id}.")))
            .collect(),
        ["Ip", ..] => match field {
            Field::Prime(p) => ip_extra(p)
                .into_iter()
                .filter(|e| e.id == id || e.id.starts_with(&format!("{id}.")))
                .collect(),
            Field::Rational => return Err(unknown()),
        },
        ["PH", k, j] => {
            let k: u32 = k.parse().map_err(|_| unknown())?;
            let j: u32 = j.parse().map_err(|_| unknown())?;
            if k + j > 60 {
                return Err(unknown());
            }
            vec![pigeonhole(k, j, field)]
        }
        ["ORD", ..] => ordinary(field)
            .into_iter()
            .filter(|e| e.id == id || e.id.starts_with(&format!("{id}.")))
            .collect(),
        _ => Vec::new(),
    };
    if found.is_empty() {
        Err(unknown())
    } else {
        Ok(found)
    }
}

/// `c · [y,y]... [y,z]... (z o z)... z_{k1}...z_{kq}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalTerm {
    pub yy: Vec<(u32, u32)>,
    pub yz: Vec<(u32, u32)>,
    pub zz: Vec<(u32, u32)>,
    pub tail: Vec<u32>,
    pub coefficient: Scalar,
}

impl NormalTerm {
    /// The canonical term on a set of y-indices and a multiset of z-indices
    /// of the h-part: pairs of y's first, then at most one `[y,z]`, then
    /// consecutive Jordan pairs. Returns `None` when the parities do not fit.
    pub fn canonical(ys: &[u32], zs: &[u32], tail: &[u32], coefficient: Scalar) -> Option<NormalTerm> {
        let mut ys = ys.to_vec();
        ys.sort_unstable();
        let mut zs = zs.to_vec();
        zs.sort_unstable();
        let n = ys.len() % 2;
        if zs.len() < n || !(zs.len() - n).is_multiple_of(2) {
            return None;
        }
        let m = ys.len() / 2;
        let yy = (0..m).map(|i| (ys[2 * i], ys[2 * i + 1])).collect();
        let yz = if n == 1 { vec![(ys[2 * m], zs[0])] } else { Vec::new() };
        let zz = zs[n..].chunks(2).map(|c| (c[0], c[1])).collect();
        Some(NormalTerm { yy, yz, zz, tail: tail.to_vec(), coefficient })
    }

    /// y-indices in h order.
    pub fn ys(&self) -> Vec<u32> {
        self.yy.iter().flat_map(|&(a, b)| [a, b]).chain(self.yz.iter().map(|&(a, _)| a)).collect()
    }

    /// z-indices of the h-part in h order.
    pub fn zs(&self) -> Vec<u32> {
        self.yz.iter().map(|&(_, b)| b).chain(self.zz.iter().flat_map(|&(a, b)| [a, b])).collect()
    }

    pub fn h_degree(&self, z: u32) -> u32 {
        self.zs().iter().filter(|&&j| j == z).count() as u32
    }

    /// The h-part shape `(ys, zs)` ignoring the coefficient and tail.
    pub fn h_key(&self) -> (Vec<u32>, Vec<u32>) {
        (self.ys(), self.zs())
    }

    pub fn check_order(&self) -> Result<(), IdentityError> {
        let ys = self.ys();
        if ys.windows(2).any(|w| w[0] >= w[1]) {
            return Err(IdentityError::Ordering(format!("y-indices {ys:?} must increase strictly")));
        }
        let zs = self.zs();
        if zs.windows(2).any(|w| w[0] > w[1]) {
            return Err(IdentityError::Ordering(format!("z-indices {zs:?} must not decrease")));
        }
        if self.tail.windows(2).any(|w| w[0] >= w[1]) {
            return Err(IdentityError::Ordering(format!("tail {:?} must increase strictly", self.tail)));
        }
        if ys.iter().chain(&zs).chain(&self.tail).any(|&i| i == 0) {
            return Err(IdentityError::Ordering("indices start at 1".into()));
        }
        Ok(())
    }

    /// The term without its coefficient, as an expression.
    pub fn shape_expr(&self) -> Expr {
        let mut parts = Vec::new();
        parts.extend(self.yy.iter().map(|&(a, b)| Expr::comm(vec![Expr::y(a), Expr::y(b)])));
        parts.extend(self.yz.iter().map(|&(a, b)| Expr::comm(vec![Expr::y(a), Expr::z(b)])));
        parts.extend(self.zz.iter().map(|&(a, b)| Expr::jordan(Expr::z(a), Expr::z(b))));
        parts.extend(self.tail.iter().map(|&k| Expr::z(k)));
        product(parts)
    }

    /// `coefficient · h · tail` in word form.
    pub fn render(&self, field: Field) -> Result<GradedPolynomial, IdentityError> {
        self.check_order()?;
        Ok(self.shape_expr().expand(field)?.scale(&self.coefficient))
    }

    /// The h-part of the term (coefficient one, no tail) in word form.
    pub fn render_h(&self, field: Field) -> GradedPolynomial {
        NormalTerm { tail: Vec::new(), coefficient: field.one(), ..self.clone() }
            .shape_expr()
            .expand(field)
            .expect("integer coefficients")
    }

    pub fn variables(&self) -> Vec<Variable> {
        let mut v: Vec<Variable> = self.ys().into_iter().map(Variable::y).collect();
        v.extend(self.zs().into_iter().chain(self.tail.iter().copied()).map(Variable::z));
        v.sort();
        v.dedup();
        v
    }

    /// Exponent of each variable in the term.
    pub fn multidegree(&self) -> BTreeMap<Variable, u32> {
        let mut m = BTreeMap::new();
        for y in self.ys() {
            *m.entry(Variable::y(y)).or_insert(0) += 1;
        }
        for z in self.zs().into_iter().chain(self.tail.iter().copied()) {
            *m.entry(Variable::z(z)).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for NormalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape = self.shape_expr();
        let neg = self.coefficient.is_negative_display();
        let abs = if neg { -&self.coefficient } else { self.coefficient.clone() };
        if neg {
            write!(f, "-")?;
        }
        match (abs.is_one(), &shape) {
            (true, _) => write!(f, "{shape}"),
            (false, Expr::Num(_)) => write!(f, "{abs}"),
            (false, _) => {
                let c = abs.to_string();
                if c.contains('/') {
                    write!(f, "({c})*{shape}")
                } else {
                    write!(f, "{c}*{shape}")
                }
            }
        }
    }
}

impl Serialize for NormalTerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NormalTerm", 6)?;
        st.serialize_field("coef", &self.coefficient)?;
        st.serialize_field("yy", &self.yy)?;
        st.serialize_field("yz", &self.yz)?;
        st.serialize_field("zz", &self.zz)?;
        st.serialize_field("tail", &self.tail)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

/// Renders a combination of normal terms as one polynomial.
pub fn render_combination(terms: &[NormalTerm], field: Field) -> Result<GradedPolynomial, IdentityError> {
    let mut acc = GradedPolynomial::zero(field);
    for t in terms {
        acc = acc.add(&t.render(field)?);
    }
    Ok(acc)
}

/// Text form of a combination, `0` when empty.
pub fn combination_text(terms: &[NormalTerm]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, t) in terms.iter().enumerate() {
        let txt = t.to_string();
        match (i, txt.strip_prefix('-')) {
            (0, _) => s.push_str(&txt),
            (_, Some(rest)) => {
                s.push_str(" - ");
                s.push_str(rest);
            }
            (_, None) => {
                s.push_str(" + ");
                s.push_str(&txt);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse_polynomial;

    fn q(s: &str) -> GradedPolynomial {
        parse_polynomial(s, Field::Rational).unwrap()
    }

    #[test]
    fn quotient_two_catalog_sizes() {
        let c0 = catalog(GradingScheme::Quotient(2), Field::Rational).unwrap();
        let families: std::collections::BTreeSet<&str> = c0.iter().map(|e| &e.id[..3]).collect();
        assert_eq!(families.len(), 7);
        assert_eq!(c0.len(), 11);
        let c3 = catalog(GradingScheme::Quotient(2), Field::Prime(3)).unwrap();
        let extra: Vec<&str> = c3.iter().map(|e| e.id.as_str()).filter(|id| id.starts_with("Ip")).collect();
        assert_eq!(extra, ["Ip.z.0.2", "Ip.c.0.2", "Ip.z.1.1", "Ip.c.1.1"]);
    }

    #[test]
    fn char_p_range_satisfies_constraint() {
        for p in [3u64, 5, 7, 11] {
            let r = char_p_index_range(p);
            assert_eq!(r.len() as u64, (p - 1) / 2 + 1);
            for (n, k) in r {
                assert_eq!(2 * n + 2 * k - 1, p as u32);
                assert!(k >= 1);
            }
        }
    }

    #[test]
    fn char_p_texts() {
        let e = ip_extra(3);
        let texts: Vec<String> = e.iter().map(|e| e.expr.to_string()).collect();
        assert_eq!(texts, ["[y1,z1]*[y2,z1]*(z2 o z1)", "[y1,z1]*[y2,z1]*[y3,z1]", "(z2 o z1)*z1^2", "[y1,z1]*z1^2"]);
    }

    #[test]
    fn pigeonhole_catalog() {
        let c = catalog(GradingScheme::Tensor(GradingMap::KStar(1), GradingMap::KStar(1)), Field::Prime(5)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].polynomial, parse_polynomial("z1*z2*z3", Field::Prime(5)).unwrap());
        assert_eq!(c[0].id, "PH.1.1");
    }

    #[test]
    fn infinity_schemes_have_no_specific_generators() {
        let s = GradingScheme::Tensor(GradingMap::Infinity, GradingMap::K(1));
        assert!(catalog(s, Field::Rational).unwrap().is_empty());
        assert!(catalog(GradingScheme::Quotient(1), Field::Rational).is_err());
    }

    #[test]
    fn entries_are_y_proper_and_homogeneous() {
        for field in [Field::Rational, Field::Prime(3), Field::Prime(5)] {
            for e in catalog(GradingScheme::Quotient(2), field).unwrap() {
                assert!(e.polynomial.is_multihomogeneous(), "{}", e.id);
                assert!(e.polynomial.is_y_proper(), "{}", e.id);
            }
        }
        assert!(pigeonhole(2, 1, Field::Rational).polynomial.is_multilinear());
    }

    #[test]
    fn lookup_ids() {
        assert_eq!(lookup("I.1", Field::Rational).unwrap().len(), 2);
        assert_eq!(lookup("I.6", Field::Rational).unwrap().len(), 4);
        assert_eq!(lookup("I.6.zy", Field::Rational).unwrap()[0].expr.to_string(), "[z1,y2]*[y3,y4] + [z1,y3]*[y2,y4]");
        assert_eq!(lookup("Ip.c.1.1", Field::Prime(3)).unwrap().len(), 1);
        assert!(lookup("Ip.c.1.1", Field::Rational).is_err());
        assert_eq!(lookup("PH.2.1", Field::Rational).unwrap()[0].polynomial.total_degree(), 4);
        assert_eq!(lookup("ORD.EE", Field::Rational).unwrap().len(), 2);
        assert!(lookup("I.9", Field::Rational).is_err());
        assert!(lookup("nonsense", Field::Rational).is_err());
    }

    #[test]
    fn render_examples() {
        let one = Field::Rational.one();
        let t = NormalTerm { yy: vec![(1, 2)], yz: vec![], zz: vec![], tail: vec![], coefficient: one.clone() };
        assert_eq!(t.render(Field::Rational).unwrap(), q("[y1,y2]"));
        let t = NormalTerm { yy: vec![], yz: vec![(1, 1)], zz: vec![], tail: vec![2], coefficient: one.clone() };
        assert_eq!(t.render(Field::Rational).unwrap(), q("[y1,z1]*z2"));
        let t = NormalTerm { yy: vec![], yz: vec![], zz: vec![(1, 1)], tail: vec![], coefficient: one.clone() };
        assert_eq!(t.render(Field::Rational).unwrap(), q("2*z1*z1"));
    }

    #[test]
    fn render_rejects_bad_order() {
        let one = Field::Rational.one();
        let t = NormalTerm { yy: vec![(2, 1)], yz: vec![], zz: vec![], tail: vec![], coefficient: one.clone() };
        assert!(t.render(Field::Rational).is_err());
        let t = NormalTerm { yy: vec![], yz: vec![], zz: vec![(2, 1)], tail: vec![], coefficient: one.clone() };
        assert!(t.render(Field::Rational).is_err());
        let t = NormalTerm { yy: vec![], yz: vec![], zz: vec![], tail: vec![2, 2], coefficient: one };
        assert!(t.render(Field::Rational).is_err());
    }

    #[test]
    fn render_respects_multidegree() {
        let t = NormalTerm::canonical(&[1, 3, 4], &[1, 2, 2], &[1, 5], Field::Rational.from_i64(3)).unwrap();
        let p = t.render(Field::Rational).unwrap();
        let md = p.multidegree().unwrap();
        for l in 1..=5 {
            let expected = t.h_degree(l) + t.tail.contains(&l) as u32;
            assert_eq!(md.get(&Variable::z(l)).copied().unwrap_or(0), expected);
        }
        assert_eq!(md, t.multidegree());
    }

    #[test]
    fn canonical_shapes() {
        let one = Field::Rational.one();
        let t = NormalTerm::canonical(&[3, 1, 2], &[4, 1, 1], &[], one.clone()).unwrap();
        assert_eq!(t.to_string(), "[y1,y2]*[y3,z1]*(z1 o z4)");
        assert!(NormalTerm::canonical(&[1], &[], &[], one.clone()).is_none());
        assert_eq!(NormalTerm::canonical(&[], &[], &[2], Field::Rational.from_i64(-2)).unwrap().to_string(), "-2*z2");
        assert_eq!(NormalTerm::canonical(&[], &[], &[], one).unwrap().to_string(), "1");
    }
}
