//! Normal forms of Y-proper polynomials modulo the identity ideal.
//!
//! A word is first split into bare letters. Adjacent out-of-order pairs are
//! then rewritten until every term has the shape
//! `y-prefix · (commutator and Jordan factors) · strictly increasing z-tail`.
//! The middle block is canonicalized with the sign rules of the ideal.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::freealg::{FreeAlgError, GradedPolynomial, VarKind};
use crate::identities::NormalTerm;
use crate::scalar::{Field, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("input is not Y-proper")]
    NotYProper,
    #[error("rewrite budget of {0} steps exhausted")]
    BudgetExhausted(usize),
    #[error("termination measure did not decrease at step {0}")]
    MeasureViolation(usize),
    #[error("terms with a bare y-prefix survived normalization")]
    ResidualPrefix,
    #[error("ideal I_{ideal} needs coefficients in F_{ideal}, got {field}")]
    FieldMismatch { ideal: u64, field: Field },
    #[error("invalid rewrite configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Alg(#[from] FreeAlgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ideal {
    /// Generated by the seven families of the catalog.
    I,
    /// `I` together with the characteristic-`p` families.
    Ip(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RewriteConfig {
    pub ideal: Ideal,
    pub budget: usize,
}

impl RewriteConfig {
    pub const DEFAULT_BUDGET: usize = 2_000_000;

    pub fn new(ideal: Ideal, budget: usize) -> Result<Self, RewriteError> {
        if budget == 0 {
            return Err(RewriteError::InvalidConfig("budget must be positive".into()));
        }
        if let Ideal::Ip(p) = ideal {
            Field::from_characteristic(p)
                .ok()
                .filter(|f| *f != Field::Rational)
                .ok_or_else(|| RewriteError::InvalidConfig(format!("{p} is not an odd prime")))?;
        }
        Ok(RewriteConfig { ideal, budget })
    }

    /// `I` over the rationals, `I_p` over `F_p`.
    pub fn for_field(field: Field) -> Self {
        let ideal = match field {
            Field::Rational => Ideal::I,
            Field::Prime(p) => Ideal::Ip(p),
        };
        RewriteConfig { ideal, budget: Self::DEFAULT_BUDGET }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Factor {
    Y(u32),
    /// `[y_a, y_b]`
    Cyy(u32, u32),
    /// `[y_a, z_b]`
    Cyz(u32, u32),
    /// `z_a o z_b`
    J(u32, u32),
    Z(u32),
}

impl Factor {
    fn rank(self) -> u8 {
        match self {
            Factor::Y(_) => 0,
            Factor::Z(_) => 2,
            _ => 1,
        }
    }

    fn is_bare(self) -> bool {
        matches!(self, Factor::Y(_) | Factor::Z(_))
    }
}

fn inverted(a: Factor, b: Factor) -> bool {
    match (a, b) {
        (Factor::Y(i), Factor::Y(j)) => i > j,
        (Factor::Z(i), Factor::Z(j)) => i >= j,
        _ => a.rank() > b.rank(),
    }
}

/// (bare letters, out-of-order pairs); every rule lowers it lexicographically.
fn measure(seq: &[Factor]) -> (usize, usize) {
    let bare = seq.iter().filter(|f| f.is_bare()).count();
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if inverted(seq[i], seq[j]) {
                inv += 1;
            }
        }
    }
    (bare, inv)
}

type Seq = Vec<Factor>;

/// One rewrite at the leftmost out-of-order pair, or `None` when sorted.
fn step(seq: &[Factor], c: &Scalar) -> Option<Vec<(Seq, Scalar)>> {
    let pos = (0..seq.len().saturating_sub(1)).find(|&i| inverted(seq[i], seq[i + 1]))?;
    let (a, b) = (seq[pos], seq[pos + 1]);
    let swapped = || {
        let mut s = seq.to_vec();
        s.swap(pos, pos + 1);
        s
    };
    let replaced = |f: Factor| {
        let mut s = seq[..pos].to_vec();
        s.push(f);
        s.extend_from_slice(&seq[pos + 2..]);
        s
    };
    let field = c.field();
    let out = match (a, b) {
        // [y,y], [y,z] and z o z commute with every y
        (_, Factor::Y(_)) if a.rank() == 1 => vec![(swapped(), c.clone())],
        // z_j y_i = y_i z_j - [y_i, z_j]
        (Factor::Z(j), Factor::Y(i)) => vec![(swapped(), c.clone()), (replaced(Factor::Cyz(i, j)), -c)],
        // y_j y_i = y_i y_j + [y_j, y_i]
        (Factor::Y(j), Factor::Y(i)) => vec![(swapped(), c.clone()), (replaced(Factor::Cyy(j, i)), c.clone())],
        // [y,z] anticommutes with z; [y,y] and z o z are central
        (Factor::Z(_), Factor::Cyz(..)) => vec![(swapped(), -c)],
        (Factor::Z(_), _) if b.rank() == 1 => vec![(swapped(), c.clone())],
        // z_b z_a = (z_a o z_b) - z_a z_b, and z_a z_a = (z_a o z_a)/2
        (Factor::Z(p), Factor::Z(q)) if p == q => {
            let half = field.from_i64(2).inverse().expect("odd characteristic");
            vec![(replaced(Factor::J(q, q)), c * &half)]
        }
        (Factor::Z(p), Factor::Z(q)) => vec![(replaced(Factor::J(q, p)), c.clone()), (swapped(), -c)],
        _ => unreachable!("every out-of-order pair has a rule"),
    };
    Some(out)
}

/// Sign of the permutation sorting `v`, or `None` on a repeated entry.
fn sort_sign(v: &mut [u32]) -> Option<bool> {
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(odd)
}

/// Canonical `(negated, ys, zs)` of a block of commutator/Jordan factors,
/// `None` when the block vanishes modulo the ideal.
fn canonical_h(block: &[Factor]) -> Option<(bool, Vec<u32>, Vec<u32>)> {
    let mut negated = false;
    let mut yy: Vec<(u32, u32)> = Vec::new();
    let mut yz: Vec<(u32, u32)> = Vec::new();
    let mut jj: Vec<(u32, u32)> = Vec::new();
    // Central factors move freely; the relative order of [y,z] factors is kept.
    for f in block {
        match *f {
            Factor::Cyy(a, b) => yy.push((a, b)),
            Factor::Cyz(a, b) => yz.push((a, b)),
            Factor::J(a, b) => jj.push((a, b)),
            _ => unreachable!("bare letter in commutator block"),
        }
    }
    // [y_a,z_c][y_b,z_d] = -[y_a,y_b](z_c o z_d)
    let mut rest = Vec::new();
    for pair in yz.chunks(2) {
        if let [(a, c), (b, d)] = *pair {
            negated = !negated;
            yy.push((a, b));
            jj.push((c, d));
        } else {
            rest.push(pair[0]);
        }
    }
    let mut ys: Vec<u32> = yy.iter().flat_map(|&(a, b)| [a, b]).chain(rest.iter().map(|&(a, _)| a)).collect();
    if sort_sign(&mut ys)? {
        negated = !negated;
    }
    let mut zs: Vec<u32> = rest.iter().map(|&(_, b)| b).chain(jj.iter().flat_map(|&(a, b)| [a, b])).collect();
    // z-slots are fully symmetric
    zs.sort_unstable();
    Some((negated, ys, zs))
}

/// `(y-prefix, tail, ys, zs)`
type Key = (Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>);

fn finish(seq: &[Factor], c: &Scalar, cfg: &RewriteConfig, out: &mut BTreeMap<Key, Scalar>) {
    let prefix: Vec<u32> = seq.iter().filter_map(|f| if let Factor::Y(i) = f { Some(*i) } else { None }).collect();
    let tail: Vec<u32> = seq.iter().filter_map(|f| if let Factor::Z(i) = f { Some(*i) } else { None }).collect();
    let block: Vec<Factor> = seq.iter().copied().filter(|f| f.rank() == 1).collect();
    let Some((negated, ys, zs)) = canonical_h(&block) else { return };
    if let Ideal::Ip(p) = cfg.ideal {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for z in &zs {
            *counts.entry(*z).or_insert(0) += 1;
        }
        if counts.values().any(|&d| d >= p) {
            return;
        }
    }
    let v = if negated { -c } else { c.clone() };
    let key = (prefix, tail, ys, zs);
    let e = out.entry(key.clone()).or_insert_with(|| c.field().zero());
    *e += &v;
    if e.is_zero() {
        out.remove(&key);
    }
}

/// The normal-term combination equal to `f` modulo the configured ideal.
pub fn normal_form(f: &GradedPolynomial, cfg: &RewriteConfig) -> Result<Vec<NormalTerm>, RewriteError> {
    f.require_graded()?;
    let field = f.field();
    if let Ideal::Ip(p) = cfg.ideal {
        if field != Field::Prime(p) {
            return Err(RewriteError::FieldMismatch { ideal: p, field });
        }
    }
    if !f.is_y_proper() {
        return Err(RewriteError::NotYProper);
    }
    let mut pending: BTreeMap<Seq, Scalar> = BTreeMap::new();
    for (w, c) in f.terms() {
        let seq: Seq = w
            .iter()
            .map(|v| match v.kind {
                VarKind::Y => Factor::Y(v.index),
                _ => Factor::Z(v.index),
            })
            .collect();
        add_to(&mut pending, seq, c);
    }
    let mut done: BTreeMap<Key, Scalar> = BTreeMap::new();
    let mut steps = 0usize;
    while let Some((seq, c)) = pending.pop_last() {
        match step(&seq, &c) {
            None => finish(&seq, &c, cfg, &mut done),
            Some(outs) => {
                steps += 1;
                if steps > cfg.budget {
                    return Err(RewriteError::BudgetExhausted(cfg.budget));
                }
                let before = measure(&seq);
                for (s, v) in outs {
                    if measure(&s) >= before {
                        return Err(RewriteError::MeasureViolation(steps));
                    }
                    add_to(&mut pending, s, &v);
                }
            }
        }
    }
    if done.keys().any(|(prefix, ..)| !prefix.is_empty()) {
        return Err(RewriteError::ResidualPrefix);
    }
    Ok(done
        .into_iter()
        .map(|((_, tail, ys, zs), c)| NormalTerm::canonical(&ys, &zs, &tail, c).expect("parities match by construction"))
        .collect())
}

fn add_to(map: &mut BTreeMap<Seq, Scalar>, seq: Seq, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&seq) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                map.remove(&seq);
            }
        }
        None => {
            map.insert(seq, c.clone());
        }
    }
}

/// Whether `f` lies in the configured ideal.
pub fn is_member(f: &GradedPolynomial, cfg: &RewriteConfig) -> Result<bool, RewriteError> {
    Ok(normal_form(f, cfg)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse_polynomial;
    use crate::identities::{catalog, render_combination};
    use crate::tensor_square::GradingScheme;

    fn q(s: &str) -> GradedPolynomial {
        parse_polynomial(s, Field::Rational).unwrap()
    }

    fn nf(s: &str) -> Vec<NormalTerm> {
        normal_form(&q(s), &RewriteConfig::for_field(Field::Rational)).unwrap()
    }

    fn text(terms: &[NormalTerm]) -> String {
        crate::identities::combination_text(terms)
    }

    #[test]
    fn documented_examples() {
        assert!(nf("[z1 o z2, y3]").is_empty());
        assert!(nf("[y1,y2,y3]").is_empty());
        assert_eq!(text(&nf("z2*z1")), "z1 o z2 - z1*z2");
        assert_eq!(text(&nf("[z1,z2]")), "-z1 o z2 + 2*z1*z2");
    }

    #[test]
    fn membership_examples() {
        let cfg = RewriteConfig::for_field(Field::Rational);
        assert!(is_member(&q("[y1,z2]*(z3 o z4) - [y1,z3]*(z2 o z4)"), &cfg).unwrap());
        assert!(!is_member(&q("[y1,z1]"), &cfg).unwrap());
        assert!(!is_member(&q("z1 o z2"), &cfg).unwrap());
    }

    #[test]
    fn catalog_generators_are_members() {
        for field in [Field::Rational, Field::Prime(3), Field::Prime(5), Field::Prime(7)] {
            let cfg = RewriteConfig::for_field(field);
            for e in catalog(GradingScheme::Quotient(2), field).unwrap() {
                assert!(is_member(&e.polynomial, &cfg).unwrap(), "{} over {field}", e.id);
            }
        }
    }

    #[test]
    fn char_p_truncation_only_touches_h() {
        let f3 = Field::Prime(3);
        let cfg = RewriteConfig::for_field(f3);
        let g = parse_polynomial("[y1,z1]*[y2,z1]*[y3,z1]", f3).unwrap();
        assert!(is_member(&g, &cfg).unwrap());
        // deg_{z1} h = 2 < 3 with z1 in the tail survives
        let g = parse_polynomial("(z1 o z1)*z1", f3).unwrap();
        assert_eq!(normal_form(&g, &cfg).unwrap().len(), 1);
        assert!(is_member(&parse_polynomial("z1^4", f3).unwrap(), &cfg).unwrap());
    }

    #[test]
    fn rejects_non_proper_input() {
        let cfg = RewriteConfig::for_field(Field::Rational);
        assert_eq!(normal_form(&q("y1*z1"), &cfg), Err(RewriteError::NotYProper));
        assert!(matches!(normal_form(&q("x1*x2"), &cfg), Err(RewriteError::Alg(_))));
        let wrong = RewriteConfig::for_field(Field::Prime(3));
        assert!(matches!(normal_form(&q("z1"), &wrong), Err(RewriteError::FieldMismatch { .. })));
    }

    #[test]
    fn config_validation() {
        assert!(RewriteConfig::new(Ideal::I, 0).is_err());
        assert!(RewriteConfig::new(Ideal::Ip(4), 10).is_err());
        assert!(RewriteConfig::new(Ideal::Ip(2), 10).is_err());
        assert!(RewriteConfig::new(Ideal::Ip(5), 10).is_ok());
    }

    #[test]
    fn tiny_budget_is_reported() {
        let cfg = RewriteConfig::new(Ideal::I, 1).unwrap();
        assert_eq!(normal_form(&q("z3*z2*z1"), &cfg), Err(RewriteError::BudgetExhausted(1)));
    }

    #[test]
    fn normal_terms_are_fixed_points() {
        let f = Field::Rational;
        let cfg = RewriteConfig::for_field(f);
        let cases: [(&[u32], &[u32], &[u32]); 6] = [
            (&[1, 2], &[], &[]),
            (&[1], &[1], &[2]),
            (&[], &[1, 1], &[]),
            (&[1, 2, 3], &[2, 2, 3], &[1, 4]),
            (&[2, 4], &[1, 1, 3, 5], &[2]),
            (&[], &[], &[1, 2, 3]),
        ];
        for (ys, zs, tail) in cases {
            let t = NormalTerm::canonical(ys, zs, tail, f.from_i64(-3)).unwrap();
            let back = normal_form(&t.render(f).unwrap(), &cfg).unwrap();
            assert_eq!(back, vec![t]);
        }
    }

    #[test]
    fn rendering_recovers_input_for_normal_combinations() {
        let f = Field::Rational;
        let terms = nf("[z1,z2]*z3 + [y1,z2]*z1");
        let again = normal_form(&render_combination(&terms, f).unwrap(), &RewriteConfig::for_field(f)).unwrap();
        assert_eq!(terms, again);
    }

    #[test]
    fn measure_decreases_on_every_rule() {
        let one = Field::Rational.one();
        let seqs = [
            vec![Factor::Z(2), Factor::Y(1)],
            vec![Factor::Y(3), Factor::Y(1)],
            vec![Factor::Z(1), Factor::Z(1)],
            vec![Factor::Z(2), Factor::Z(1)],
            vec![Factor::Cyy(1, 2), Factor::Y(1)],
            vec![Factor::Z(1), Factor::Cyz(1, 2)],
            vec![Factor::Z(1), Factor::J(1, 2), Factor::Y(4)],
        ];
        for s in seqs {
            let m = measure(&s);
            for (t, _) in step(&s, &one).unwrap() {
                assert!(measure(&t) < m);
            }
        }
        assert!(step(&[Factor::Y(1), Factor::Cyz(1, 1), Factor::Z(1), Factor::Z(2)], &one).is_none());
    }
}
