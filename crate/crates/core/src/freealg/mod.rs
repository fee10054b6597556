//! The free Z2-graded associative algebra `K<Y ∪ Z>`.
//!
//! Polynomials are stored as maps from words to coefficients. The expression
//! language in [`expr`] and [`parser`] is the human-facing front end.

pub mod expr;
pub mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Field, FieldError, Scalar};

pub use expr::Expr;
pub use parser::{parse, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeAlgError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("polynomial is not multihomogeneous")]
    NotMultihomogeneous,
    #[error("polynomial is not multilinear")]
    NotMultilinear,
    #[error("variable {0} has no parity; instantiate x-variables first")]
    UnresolvedParity(Variable),
}

/// `Y` variables are even, `Z` odd. `X` marks a parity still to be chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarKind {
    Y,
    Z,
    X,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub kind: VarKind,
    pub index: u32,
}

impl Variable {
    pub fn y(index: u32) -> Self {
        Variable { kind: VarKind::Y, index }
    }

    pub fn z(index: u32) -> Self {
        Variable { kind: VarKind::Z, index }
    }

    pub fn x(index: u32) -> Self {
        Variable { kind: VarKind::X, index }
    }

    /// Graded degree: 0 for `y`, 1 for `z`, `None` for unresolved `x`.
    pub fn parity(self) -> Option<u8> {
        match self.kind {
            VarKind::Y => Some(0),
            VarKind::Z => Some(1),
            VarKind::X => None,
        }
    }

    pub fn is_even(self) -> bool {
        self.kind == VarKind::Y
    }

    pub fn is_odd(self) -> bool {
        self.kind == VarKind::Z
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            VarKind::Y => 'y',
            VarKind::Z => 'z',
            VarKind::X => 'x',
        };
        write!(f, "{c}{}", self.index)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Variable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub type Word = Vec<Variable>;

/// Exponent vector of a word or of a homogeneous polynomial.
pub type Multidegree = BTreeMap<Variable, u32>;

pub fn word_multidegree(w: &[Variable]) -> Multidegree {
    let mut m = Multidegree::new();
    for v in w {
        *m.entry(*v).or_insert(0) += 1;
    }
    m
}

/// A noncommutative polynomial; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedPolynomial {
    field: Field,
    terms: BTreeMap<Word, Scalar>,
}

impl GradedPolynomial {
    pub fn zero(field: Field) -> Self {
        GradedPolynomial { field, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = GradedPolynomial::zero(c.field());
        p.add_term(Vec::new(), &c);
        p
    }

    pub fn var(field: Field, v: Variable) -> Self {
        Self::monomial(vec![v], field.one())
    }

    pub fn monomial(word: Word, c: Scalar) -> Self {
        let mut p = GradedPolynomial::zero(c.field());
        p.add_term(word, &c);
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &[Variable]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add(&self, o: &GradedPolynomial) -> GradedPolynomial {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c);
        }
        r
    }

    pub fn sub(&self, o: &GradedPolynomial) -> GradedPolynomial {
        self.add(&o.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> GradedPolynomial {
        if c.is_zero() {
            return GradedPolynomial::zero(self.field);
        }
        GradedPolynomial {
            field: self.field,
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, o: &GradedPolynomial) -> GradedPolynomial {
        let mut r = GradedPolynomial::zero(self.field);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                r.add_term(w, &(x * y));
            }
        }
        r
    }

    pub fn commutator(&self, o: &GradedPolynomial) -> GradedPolynomial {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn jordan(&self, o: &GradedPolynomial) -> GradedPolynomial {
        self.mul(o).add(&o.mul(self))
    }

    pub fn pow(&self, e: u32) -> GradedPolynomial {
        let mut acc = GradedPolynomial::constant(self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.terms.keys().flatten().copied().collect()
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// The common multidegree of all words, if there is one.
    pub fn multidegree(&self) -> Option<Multidegree> {
        let mut it = self.terms.keys().map(|w| word_multidegree(w));
        let first = it.next().unwrap_or_default();
        it.all(|m| m == first).then_some(first)
    }

    pub fn is_multihomogeneous(&self) -> bool {
        self.multidegree().is_some()
    }

    /// Multihomogeneous with every occurring variable of degree exactly one.
    pub fn is_multilinear(&self) -> bool {
        match self.multidegree() {
            Some(m) => m.values().all(|&d| d == 1),
            None => false,
        }
    }

    /// Fails on any `x`-variable.
    pub fn require_graded(&self) -> Result<(), FreeAlgError> {
        match self.variables().into_iter().find(|v| v.kind == VarKind::X) {
            Some(v) => Err(FreeAlgError::UnresolvedParity(v)),
            None => Ok(()),
        }
    }

    /// Graded degree of a homogeneous polynomial (number of odd letters mod 2).
    pub fn graded_degree(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(|w| (w.iter().filter(|v| v.is_odd()).count() % 2) as u8);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Substitutes polynomials for variables; unmapped variables stay.
    pub fn substitute(&self, images: &BTreeMap<Variable, GradedPolynomial>) -> GradedPolynomial {
        let mut r = GradedPolynomial::zero(self.field);
        for (w, c) in &self.terms {
            let mut acc = GradedPolynomial::constant(c.clone());
            for v in w {
                acc = match images.get(v) {
                    Some(p) => acc.mul(p),
                    None => acc.mul(&GradedPolynomial::var(self.field, *v)),
                };
            }
            r = r.add(&acc);
        }
        r
    }

    /// Splits into multihomogeneous components, ordered by multidegree.
    pub fn multihomogeneous_components(&self) -> Vec<GradedPolynomial> {
        let mut parts: BTreeMap<Vec<(Variable, u32)>, GradedPolynomial> = BTreeMap::new();
        for (w, c) in &self.terms {
            let key: Vec<(Variable, u32)> = word_multidegree(w).into_iter().collect();
            parts.entry(key).or_insert_with(|| GradedPolynomial::zero(self.field)).add_term(w.clone(), c);
        }
        parts.into_values().collect()
    }

    /// Full linearization of a multihomogeneous polynomial.
    ///
    /// A variable of degree `d > 1` is replaced by `d` copies: the original
    /// variable and `d - 1` fresh variables of the same kind, numbered above
    /// every index already in use.
    pub fn multilinearize(&self) -> Result<GradedPolynomial, FreeAlgError> {
        Ok(self.multilinearize_with_copies()?.0)
    }

    /// As [`Self::multilinearize`], also returning the copies of each variable.
    pub fn multilinearize_with_copies(
        &self,
    ) -> Result<(GradedPolynomial, BTreeMap<Variable, Vec<Variable>>), FreeAlgError> {
        let md = self.multidegree().ok_or(FreeAlgError::NotMultihomogeneous)?;
        let mut next: BTreeMap<VarKind, u32> = BTreeMap::new();
        for v in md.keys() {
            let e = next.entry(v.kind).or_insert(0);
            *e = (*e).max(v.index);
        }
        let mut copies: BTreeMap<Variable, Vec<Variable>> = BTreeMap::new();
        for (&v, &d) in &md {
            let mut c = vec![v];
            for _ in 1..d {
                let n = next.get_mut(&v.kind).expect("kind present");
                *n += 1;
                c.push(Variable { kind: v.kind, index: *n });
            }
            copies.insert(v, c);
        }
        let mut out = GradedPolynomial::zero(self.field);
        for (w, c) in &self.terms {
            // Each word expands to the sum over all ways of distributing the
            // copies of every variable over its occurrences.
            let mut partial: Vec<Word> = vec![Vec::with_capacity(w.len())];
            let mut used: Vec<BTreeSet<Variable>> = vec![BTreeSet::new()];
            for v in w {
                let mut np = Vec::new();
                let mut nu = Vec::new();
                for (pw, pu) in partial.iter().zip(&used) {
                    for cv in &copies[v] {
                        if !pu.contains(cv) {
                            let mut w2 = pw.clone();
                            w2.push(*cv);
                            let mut u2 = pu.clone();
                            u2.insert(*cv);
                            np.push(w2);
                            nu.push(u2);
                        }
                    }
                }
                partial = np;
                used = nu;
            }
            for pw in partial {
                out.add_term(pw, c);
            }
        }
        Ok((out, copies))
    }

    /// Membership in the subalgebra generated by `Z` and nontrivial commutators,
    /// decided by invariance under every shift `y_i -> y_i + 1`.
    pub fn is_y_proper(&self) -> bool {
        let field = self.field;
        for v in self.variables().into_iter().filter(|v| v.is_even()) {
            let mut images = BTreeMap::new();
            images.insert(v, GradedPolynomial::var(field, v).add(&GradedPolynomial::constant(field.one())));
            if self.substitute(&images) != *self {
                return false;
            }
        }
        true
    }

    /// Renders as a sum of words, e.g. `y1*y2 - y2*y1`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_display();
            let abs = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let word: Vec<String> = w.iter().map(|v| v.to_string()).collect();
            match (abs.is_one(), w.is_empty()) {
                (_, true) => write!(f, "{abs}")?,
                (true, false) => write!(f, "{}", word.join("*"))?,
                (false, false) => write!(f, "{abs}*{}", word.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses and expands in one step.
pub fn parse_polynomial(text: &str, field: Field) -> Result<GradedPolynomial, FreeAlgError> {
    parse(text)?.expand(field)
}
