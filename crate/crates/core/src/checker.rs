//! Identity checking on finite-rank truncations of `E ⊗ E` and `E`.
//!
//! * `degree_patterns`: for a multilinear polynomial and basis elements with
//!   disjoint supports, every monomial evaluates to `± b_1 ... b_n`, the sign
//!   depending only on the bidegrees. The polynomial is an identity iff the
//!   signed coefficient sum vanishes for every realizable bidegree pattern.
//! * `basis_exhaustive`: evaluates on every homogeneous basis substitution
//!   of the given ranks, one representative per orbit of the generator
//!   permutations that preserve the grading.
//! * generic sums: a variable of degree `d` becomes a sum of `d` basis
//!   elements with random coefficients, all supports disjoint.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

use crate::freealg::{FreeAlgError, GradedPolynomial, Variable};
use crate::grassmann::Z2;
use crate::identities::NormalTerm;
use crate::scalar::{Field, Scalar};
use crate::tensor_square::{mul_masks, BasisElement, BiDegree, GradingScheme, OrdinaryAlgebra, Ranks, Target, TensorElement};
use crate::witness::{layout, sufficient_ranks, Allocator, Side, WitnessError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("polynomial is not multilinear")]
    NotMultilinear,
    #[error("polynomial is not multihomogeneous")]
    NotMultihomogeneous,
    #[error("ranks {}x{} too small; minimal sufficient ranks are {}x{}", given.left, given.right, needed.left, needed.right)]
    RankTooSmall { given: Ranks, needed: Ranks },
    #[error("closed-form evaluation needs scheme Q2, got {0}")]
    SchemeMismatch(String),
    #[error("no image for variable {0}")]
    MissingImage(Variable),
    #[error("image of {0} is not homogeneous of the variable's degree")]
    BadImage(Variable),
    #[error("witness re-evaluated to zero")]
    WitnessMismatch,
    #[error(transparent)]
    Alg(#[from] FreeAlgError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
}

/// Images of variables in a target algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    target: Target,
    images: BTreeMap<Variable, TensorElement>,
}

impl Substitution {
    pub fn new(target: Target, images: BTreeMap<Variable, TensorElement>) -> Self {
        Substitution { target, images }
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn images(&self) -> &BTreeMap<Variable, TensorElement> {
        &self.images
    }

    pub fn image(&self, v: Variable) -> Option<&TensorElement> {
        self.images.get(&v)
    }

    /// Every image of a graded target must be homogeneous of its variable's parity.
    pub fn validate(&self) -> Result<(), CheckError> {
        if let Target::Graded(scheme) = self.target {
            for (v, img) in &self.images {
                if img.is_zero() {
                    continue;
                }
                match (v.parity(), img.homogeneous_degree(scheme)) {
                    (Some(p), Some(d)) if p == d => {}
                    _ => return Err(CheckError::BadImage(*v)),
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, f: &GradedPolynomial) -> Result<TensorElement, CheckError> {
        eval(f, &self.images)
    }
}

impl Serialize for Substitution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Substitution", 2)?;
        st.serialize_field("target", &self.target)?;
        st.serialize_field("images", &self.images)?;
        st.end()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, img)) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} = {img}")?;
        }
        Ok(())
    }
}

/// Evaluates `f` under `images`, sharing products of common word prefixes.
pub fn eval(f: &GradedPolynomial, images: &BTreeMap<Variable, TensorElement>) -> Result<TensorElement, CheckError> {
    let field = f.field();
    let mut acc = TensorElement::zero(field);
    let mut stack = vec![TensorElement::one(field)];
    let mut prev: &[Variable] = &[];
    for (w, c) in f.terms() {
        let common = prev.iter().zip(w.iter()).take_while(|(a, b)| a == b).count();
        stack.truncate(common + 1);
        for v in &w[common..] {
            let img = images.get(v).ok_or(CheckError::MissingImage(*v))?;
            let top = stack.last().expect("stack holds the empty prefix");
            let next = if top.is_zero() { top.clone() } else { top.mul(img) };
            stack.push(next);
        }
        acc = acc.add(&stack[w.len()].scale(c));
        prev = w;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    BasisExhaustive,
    DegreePatterns,
    GenericSums,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::BasisExhaustive => "basis_exhaustive",
            Mode::DegreePatterns => "degree_patterns",
            Mode::GenericSums => "generic_sums",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "basis_exhaustive" | "exhaustive" => Ok(Mode::BasisExhaustive),
            "degree_patterns" | "patterns" => Ok(Mode::DegreePatterns),
            "generic_sums" | "generic" => Ok(Mode::GenericSums),
            _ => Err(format!("unknown mode `{s}` (basis_exhaustive|degree_patterns|generic_sums)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No counterexample; `trials` is set for randomized checks.
    Holds { mode: Mode, ranks: Ranks, trials: Option<usize> },
    Fails { mode: Mode, ranks: Ranks, witness: Substitution, value: TensorElement },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn mode(&self) -> Mode {
        match self {
            Verdict::Holds { mode, .. } | Verdict::Fails { mode, .. } => *mode,
        }
    }

    pub fn witness(&self) -> Option<&Substitution> {
        match self {
            Verdict::Fails { witness, .. } => Some(witness),
            Verdict::Holds { .. } => None,
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Verdict", 6)?;
        let (mode, ranks) = match self {
            Verdict::Holds { mode, ranks, .. } | Verdict::Fails { mode, ranks, .. } => (mode, ranks),
        };
        st.serialize_field("verdict", if self.holds() { "holds" } else { "fails" })?;
        st.serialize_field("mode", mode)?;
        st.serialize_field("ranks", &[ranks.left, ranks.right])?;
        match self {
            Verdict::Holds { trials, .. } => {
                st.serialize_field("trials", trials)?;
                st.serialize_field("witness", &None::<Substitution>)?;
                st.serialize_field("value", &None::<TensorElement>)?;
            }
            Verdict::Fails { witness, value, .. } => {
                st.serialize_field("trials", &None::<usize>)?;
                st.serialize_field("witness", witness)?;
                st.serialize_field("value", value)?;
            }
        }
        st.end()
    }
}

/// Coefficients of a multilinear polynomial as small integers when possible.
enum Coeffs {
    Int { vals: Vec<i128>, modulus: Option<i128> },
    Exact(Vec<Scalar>),
}

impl Coeffs {
    fn new(cs: Vec<Scalar>) -> Coeffs {
        let field = match cs.first() {
            Some(c) => c.field(),
            None => return Coeffs::Int { vals: Vec::new(), modulus: None },
        };
        match field {
            Field::Prime(p) => Coeffs::Int {
                vals: cs
                    .iter()
                    .map(|c| match c {
                        Scalar::Modular { residue, .. } => *residue as i128,
                        Scalar::Rational(_) => unreachable!("field checked"),
                    })
                    .collect(),
                modulus: Some(p as i128),
            },
            Field::Rational => {
                let qs: Vec<_> = cs
                    .iter()
                    .map(|c| match c {
                        Scalar::Rational(q) => q.clone(),
                        Scalar::Modular { .. } => unreachable!("field checked"),
                    })
                    .collect();
                let lcd = qs.iter().fold(BigInt::one(), |a, q| a.lcm(q.denom()));
                let ints: Option<Vec<i128>> = qs
                    .iter()
                    .map(|q| (q.numer() * (&lcd / q.denom())).to_i64().map(|v| v as i128))
                    .collect();
                match ints {
                    Some(vals) => Coeffs::Int { vals, modulus: None },
                    None => Coeffs::Exact(cs),
                }
            }
        }
    }

    /// Whether `Σ sign_w · c_w` is nonzero.
    fn signed_sum_nonzero(&self, signs: &[i8]) -> bool {
        match self {
            Coeffs::Int { vals, modulus } => {
                let s: i128 = vals.iter().zip(signs).map(|(v, &s)| if s > 0 { *v } else { -*v }).sum();
                match modulus {
                    Some(p) => s.rem_euclid(*p) != 0,
                    None => s != 0,
                }
            }
            Coeffs::Exact(cs) => {
                let mut acc = cs[0].field().zero();
                for (c, &s) in cs.iter().zip(signs) {
                    acc = if s > 0 { &acc + c } else { &acc - c };
                }
                !acc.is_zero()
            }
        }
    }
}

/// A multilinear polynomial as permutations of its sorted variable list.
struct Multilinear {
    vars: Vec<Variable>,
    words: Vec<Vec<usize>>,
    coeffs: Coeffs,
}

impl Multilinear {
    fn new(f: &GradedPolynomial) -> Result<Self, CheckError> {
        if !f.is_multilinear() && !f.is_zero() {
            return Err(CheckError::NotMultilinear);
        }
        let vars: Vec<Variable> = f.variables().into_iter().collect();
        let pos: BTreeMap<Variable, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut words = Vec::new();
        let mut cs = Vec::new();
        for (w, c) in f.terms() {
            words.push(w.iter().map(|v| pos[v]).collect());
            cs.push(c.clone());
        }
        Ok(Multilinear { vars, words, coeffs: Coeffs::new(cs) })
    }
}

fn required_degrees(target: Target, vars: &[Variable]) -> Result<Vec<Option<Z2>>, CheckError> {
    match target {
        Target::Graded(_) => vars
            .iter()
            .map(|v| v.parity().map(Some).ok_or(FreeAlgError::UnresolvedParity(*v).into()))
            .collect(),
        Target::Ordinary(_) => Ok(vec![None; vars.len()]),
    }
}

fn basis_substitution(target: Target, field: Field, vars: &[Variable], bs: &[BasisElement]) -> Substitution {
    let images = vars.iter().zip(bs).map(|(v, b)| (*v, TensorElement::basis(field, *b))).collect();
    Substitution::new(target, images)
}

fn failure(
    f: &GradedPolynomial,
    mode: Mode,
    ranks: Ranks,
    witness: Substitution,
) -> Result<Verdict, CheckError> {
    let value = witness.eval(f)?;
    if value.is_zero() {
        return Err(CheckError::WitnessMismatch);
    }
    Ok(Verdict::Fails { mode, ranks, witness, value })
}

/// Checks a multilinear graded polynomial on `E ⊗ E` with `scheme`.
pub fn check_multilinear(f: &GradedPolynomial, scheme: GradingScheme, ranks: Ranks, mode: Mode) -> Result<Verdict, CheckError> {
    check_multilinear_on(f, Target::Graded(scheme), ranks, mode)
}

/// As [`check_multilinear`] for any target, graded or not.
pub fn check_multilinear_on(f: &GradedPolynomial, target: Target, ranks: Ranks, mode: Mode) -> Result<Verdict, CheckError> {
    let ml = Multilinear::new(f)?;
    let degrees = required_degrees(target, &ml.vars)?;
    match mode {
        Mode::DegreePatterns => degree_patterns(f, &ml, &degrees, target, ranks),
        Mode::BasisExhaustive => basis_exhaustive(f, &ml, &degrees, target, ranks),
        Mode::GenericSums => generic_sums(f, target, ranks, 64, 0),
    }
}

/// Sign of each word for one bidegree pattern.
fn pattern_signs(words: &[Vec<usize>], g: &[BiDegree], signs: &mut Vec<i8>) {
    signs.clear();
    for w in words {
        let mut s = 1i8;
        for a in 0..w.len() {
            for b in a + 1..w.len() {
                if w[a] > w[b] {
                    s *= g[w[a]].commutation_sign(g[w[b]]);
                }
            }
        }
        signs.push(s);
    }
}

fn degree_patterns(
    f: &GradedPolynomial,
    ml: &Multilinear,
    degrees: &[Option<Z2>],
    target: Target,
    ranks: Ranks,
) -> Result<Verdict, CheckError> {
    let n = ml.vars.len();
    let choices: Vec<Vec<BiDegree>> = degrees
        .iter()
        .map(|h| {
            BiDegree::ALL
                .iter()
                .copied()
                .filter(|&g| Allocator::new(target).allocate(&[(g, *h)]).is_ok())
                .collect()
        })
        .collect();
    let total: usize = choices.iter().map(|c| c.len()).product();
    let decode = |mut k: usize| -> Vec<BiDegree> {
        let mut g = Vec::with_capacity(n);
        for c in &choices {
            g.push(c[k % c.len()]);
            k /= c.len();
        }
        g
    };
    let found = (0..total).into_par_iter().find_map_first(|k| {
        let g = decode(k);
        let mut signs = Vec::new();
        pattern_signs(&ml.words, &g, &mut signs);
        if !ml.coeffs.signed_sum_nonzero(&signs) {
            return None;
        }
        let items: Vec<(BiDegree, Option<Z2>)> = g.iter().copied().zip(degrees.iter().copied()).collect();
        Allocator::new(target).allocate(&items).ok()
    });
    match found {
        None => Ok(Verdict::Holds { mode: Mode::DegreePatterns, ranks, trials: None }),
        Some(bs) => {
            let w = basis_substitution(target, f.field(), &ml.vars, &bs);
            failure(f, Mode::DegreePatterns, ranks, w)
        }
    }
}

/// Weak compositions of `total` into `parts + 1` parts, keeping the first `parts`.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(left - v, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Per composition and variable: generator mask and count parity.
type ClassChoices = Vec<Vec<(u64, u8)>>;

fn class_choices(side: Side, odd: bool, size: u32, n: usize) -> ClassChoices {
    compositions(size, n)
        .into_iter()
        .map(|comp| {
            let mut next = 0u32;
            comp.iter()
                .map(|&c| {
                    let mut m = 0u64;
                    for k in next..next + c {
                        m |= 1u64 << (side.class_index(odd, k) - 1);
                    }
                    next += c;
                    (m, (c % 2) as u8)
                })
                .collect()
        })
        .collect()
}

/// Declares the default exhaustive rank: `d + 2` per factor, raised to the
/// rank that fits every disjoint allocation of `d` elements.
pub fn exhaustive_ranks(target: Target, degree: u32) -> Ranks {
    let s = sufficient_ranks(target, degree);
    let r = |suff: u32, limit_zero: bool| if limit_zero { 0 } else { suff.max(degree + 2) };
    let e_only = target == Target::Ordinary(OrdinaryAlgebra::E);
    Ranks::new(r(s.left, false), r(s.right, e_only))
}

fn basis_exhaustive(
    f: &GradedPolynomial,
    ml: &Multilinear,
    degrees: &[Option<Z2>],
    target: Target,
    ranks: Ranks,
) -> Result<Verdict, CheckError> {
    let n = ml.vars.len();
    let sides = layout(target);
    let rank = [ranks.left, ranks.right];
    // classes in order: left odd, left even, right odd, right even
    let mut classes: Vec<ClassChoices> = Vec::new();
    for s in 0..2 {
        let (odd, even) = sides[s].class_sizes(rank[s]);
        classes.push(class_choices(sides[s], true, odd, n));
        classes.push(class_choices(sides[s], false, even, n));
    }
    let outer: Vec<(usize, usize)> =
        (0..classes[0].len()).flat_map(|a| (0..classes[1].len()).map(move |b| (a, b))).collect();
    let found = outer.par_iter().find_map_first(|&(a, b)| {
        let mut signs = Vec::with_capacity(ml.words.len());
        let mut masks = vec![(0u64, 0u64); n];
        for c in &classes[2] {
            'inner: for d in &classes[3] {
                for i in 0..n {
                    let (lo, lop) = classes[0][a][i];
                    let (le, _) = classes[1][b][i];
                    let (ro, rop) = c[i];
                    let (re, _) = d[i];
                    if let Some(h) = degrees[i] {
                        if (lop + rop) % 2 != h {
                            continue 'inner;
                        }
                    }
                    masks[i] = (lo | le, ro | re);
                }
                signs.clear();
                for w in &ml.words {
                    let (mut l, mut r, mut s) = (0u64, 0u64, 1i8);
                    for &i in w {
                        let (t, nl, nr) = mul_masks(l, r, masks[i].0, masks[i].1).expect("disjoint by construction");
                        s *= t;
                        l = nl;
                        r = nr;
                    }
                    signs.push(s);
                }
                if ml.coeffs.signed_sum_nonzero(&signs) {
                    return Some(masks.clone());
                }
            }
        }
        None
    });
    match found {
        None => Ok(Verdict::Holds { mode: Mode::BasisExhaustive, ranks, trials: None }),
        Some(masks) => {
            let bs: Vec<BasisElement> = masks
                .iter()
                .map(|&(l, r)| BasisElement::new(crate::grassmann::ExteriorMonomial::from_mask(l), crate::grassmann::ExteriorMonomial::from_mask(r)))
                .collect();
            let w = basis_substitution(target, f.field(), &ml.vars, &bs);
            failure(f, Mode::BasisExhaustive, ranks, w)
        }
    }
}

/// Naive enumeration of all homogeneous basis substitutions; an oracle for
/// the orbit enumeration at tiny ranks.
pub fn check_multilinear_naive(f: &GradedPolynomial, target: Target, ranks: Ranks) -> Result<bool, CheckError> {
    let ml = Multilinear::new(f)?;
    let degrees = required_degrees(target, &ml.vars)?;
    let all: Vec<BasisElement> = (0u64..1 << ranks.left)
        .flat_map(|l| (0u64..1 << ranks.right).map(move |r| (l, r)))
        .map(|(l, r)| BasisElement::new(crate::grassmann::ExteriorMonomial::from_mask(l), crate::grassmann::ExteriorMonomial::from_mask(r)))
        .collect();
    let per_var: Vec<Vec<BasisElement>> = degrees
        .iter()
        .map(|h| {
            all.iter()
                .copied()
                .filter(|b| match (target, h) {
                    (Target::Graded(s), Some(h)) => s.degree(*b) == *h,
                    _ => true,
                })
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; ml.vars.len()];
    loop {
        let bs: Vec<BasisElement> = idx.iter().zip(&per_var).map(|(&i, c)| c[i]).collect();
        if !basis_substitution(target, f.field(), &ml.vars, &bs).eval(f)?.is_zero() {
            return Ok(false);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(true);
            }
            idx[k] += 1;
            if idx[k] < per_var[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn random_nonzero(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        Field::Rational => {
            let v = rng.gen_range(1..=9i64);
            field.from_i64(if rng.gen_bool(0.5) { v } else { -v })
        }
        Field::Prime(p) => field.from_i64(rng.gen_range(1..p) as i64),
    }
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(trial as u64)
}

/// One random disjoint generic substitution, or `None` when the target
/// cannot host the requested summands.
fn generic_trial(
    md: &BTreeMap<Variable, u32>,
    target: Target,
    field: Field,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Substitution>, CheckError> {
    let vars: Vec<Variable> = md.keys().copied().collect();
    let degrees = required_degrees(target, &vars)?;
    let allowed: Vec<Vec<BiDegree>> = degrees
        .iter()
        .map(|h| {
            BiDegree::ALL
                .iter()
                .copied()
                .filter(|&g| Allocator::new(target).allocate(&[(g, *h)]).is_ok())
                .collect()
        })
        .collect();
    if allowed.iter().any(|a| a.is_empty()) {
        return Ok(None);
    }
    let mut counts: Vec<u32> = vars.iter().map(|v| md[v]).collect();
    for _ in 0..64 {
        let mut items = Vec::new();
        let mut owner = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                items.push((allowed[i][rng.gen_range(0..allowed[i].len())], degrees[i]));
                owner.push(i);
            }
        }
        match Allocator::new(target).allocate(&items) {
            Ok(bs) => {
                let mut images: BTreeMap<Variable, TensorElement> =
                    vars.iter().map(|v| (*v, TensorElement::zero(field))).collect();
                for (b, i) in bs.into_iter().zip(owner) {
                    images.get_mut(&vars[i]).expect("variable present").add_term(b, &random_nonzero(field, rng));
                }
                return Ok(Some(Substitution::new(target, images)));
            }
            Err(WitnessError::Infeasible) => {
                // shrink a random variable that still has several summands
                let big: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 1).collect();
                if !big.is_empty() && rng.gen_bool(0.5) {
                    counts[big[rng.gen_range(0..big.len())]] -= 1;
                }
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(None)
}

/// Drops summands greedily while the value stays nonzero.
fn minimize(f: &GradedPolynomial, w: Substitution) -> Result<Substitution, CheckError> {
    let mut images = w.images.clone();
    let vars: Vec<Variable> = images.keys().copied().collect();
    for v in vars {
        let terms: Vec<(BasisElement, Scalar)> = images[&v].terms().map(|(b, c)| (*b, c.clone())).collect();
        for (b, _) in terms {
            if images[&v].len() <= 1 {
                break;
            }
            let mut trial = images.clone();
            let mut img = TensorElement::zero(f.field());
            for (b2, c2) in images[&v].terms() {
                if *b2 != b {
                    img.add_term(*b2, c2);
                }
            }
            trial.insert(v, img);
            if !eval(f, &trial)?.is_zero() {
                images = trial;
            }
        }
    }
    Ok(Substitution::new(w.target, images))
}

fn generic_sums(f: &GradedPolynomial, target: Target, ranks: Ranks, trials: usize, seed: u64) -> Result<Verdict, CheckError> {
    let md = f.multidegree().ok_or(CheckError::NotMultihomogeneous)?;
    let needed = sufficient_ranks(target, md.values().sum());
    if needed.left > ranks.left || needed.right > ranks.right {
        return Err(CheckError::RankTooSmall { given: ranks, needed });
    }
    let field = f.field();
    let found: Option<Result<Substitution, CheckError>> = (0..trials).into_par_iter().find_map_first(|t| {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
        match generic_trial(&md, target, field, &mut rng) {
            Err(e) => Some(Err(e)),
            Ok(None) => None,
            Ok(Some(w)) => match w.eval(f) {
                Err(e) => Some(Err(e)),
                Ok(v) if v.is_zero() => None,
                Ok(_) => Some(Ok(w)),
            },
        }
    });
    match found {
        None => Ok(Verdict::Holds { mode: Mode::GenericSums, ranks, trials: Some(trials) }),
        Some(Err(e)) => Err(e),
        Some(Ok(w)) => {
            let w = minimize(f, w)?;
            failure(f, Mode::GenericSums, ranks, w)
        }
    }
}

/// Randomized check of a multihomogeneous graded polynomial: `trials`
/// substitutions by disjoint generic sums.
pub fn check_multihomogeneous(
    f: &GradedPolynomial,
    scheme: GradingScheme,
    ranks: Ranks,
    trials: usize,
    seed: u64,
) -> Result<Verdict, CheckError> {
    f.require_graded()?;
    generic_sums(f, Target::Graded(scheme), ranks, trials, seed)
}

/// Ordinary identity check on `E ⊗ E` or `E`: exact for multilinear input,
/// randomized otherwise.
pub fn check_ordinary(
    f: &GradedPolynomial,
    algebra: OrdinaryAlgebra,
    ranks: Ranks,
    trials: usize,
    seed: u64,
) -> Result<Verdict, CheckError> {
    let target = Target::Ordinary(algebra);
    if f.is_multilinear() {
        check_multilinear_on(f, target, ranks, Mode::DegreePatterns)
    } else {
        generic_sums(f, target, ranks, trials, seed)
    }
}

/// Dispatches to the exact multilinear check or to generic sums.
pub fn check(
    f: &GradedPolynomial,
    target: Target,
    ranks: Ranks,
    mode: Option<Mode>,
    trials: usize,
    seed: u64,
) -> Result<Verdict, CheckError> {
    if let Target::Graded(_) = target {
        f.require_graded()?;
    }
    match mode {
        Some(Mode::GenericSums) => generic_sums(f, target, ranks, trials, seed),
        Some(m) => check_multilinear_on(f, target, ranks, m),
        None if f.is_multilinear() || f.is_zero() => check_multilinear_on(f, target, ranks, Mode::DegreePatterns),
        None => generic_sums(f, target, ranks, trials, seed),
    }
}

/// `u^d` for `u` a combination of pairwise commuting square-zero basis
/// elements: `d!` times the `d`-th elementary symmetric sum.
fn commuting_power(u: &TensorElement, d: u32) -> TensorElement {
    let field = u.field();
    let mut e = vec![TensorElement::zero(field); d as usize + 1];
    e[0] = TensorElement::one(field);
    for (b, c) in u.terms() {
        let t = TensorElement::term(*b, c.clone());
        for j in (1..=d as usize).rev() {
            let add = e[j - 1].mul(&t);
            e[j] = e[j].add(&add);
        }
    }
    let fact = (1..=d as i64).fold(field.one(), |a, k| &a * &field.from_i64(k));
    e[d as usize].scale(&fact)
}

/// Value of a normal term under a substitution into `E ⊗ E` graded by `Q2`,
/// computed from the odd projections only:
/// `φ(h) = 2^{m+n+p} (-1)^{n(n-1)/2} Π φ(y)_1 · Π_l (φ(z_l)_1)^{deg_l}`,
/// times the coefficient and the images of the tail.
pub fn eval_h_closed_form(t: &NormalTerm, phi: &Substitution) -> Result<TensorElement, CheckError> {
    if phi.target() != Target::Graded(GradingScheme::Quotient(2)) {
        return Err(CheckError::SchemeMismatch(phi.target().to_string()));
    }
    let field = t.coefficient.field();
    let img = |v: Variable| phi.image(v).ok_or(CheckError::MissingImage(v));
    let (m, n, p) = (t.yy.len() as u32, t.yz.len() as u32, t.zz.len() as u32);
    let mut acc = TensorElement::one(field).scale(&field.from_i64(2).pow(m + n + p));
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        acc = acc.scale(&field.from_i64(-1));
    }
    for y in t.ys() {
        acc = acc.mul(&img(Variable::y(y))?.project(BiDegree(1, 0)));
    }
    let mut zdeg: BTreeMap<u32, u32> = BTreeMap::new();
    for z in t.zs() {
        *zdeg.entry(z).or_insert(0) += 1;
    }
    for (z, d) in zdeg {
        acc = acc.mul(&commuting_power(&img(Variable::z(z))?.project(BiDegree(1, 1)), d));
    }
    acc = acc.scale(&t.coefficient);
    for &k in &t.tail {
        acc = acc.mul(img(Variable::z(k))?);
    }
    Ok(acc)
}
