//! Builders for substitutions by basis elements with prescribed degrees and
//! pairwise disjoint supports.
//!
//! Every side of `E ⊗ E` splits its generators into the ones of degree 1
//! ("odd class") and degree 0 ("even class"). A basis element with length
//! parity `l` and degree `d` on a side needs at least `d` odd-class and
//! `l + d` (mod 2) even-class generators there. Generators are handed out by
//! a deterministic cursor, lowest free index first.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::checker::Substitution;
use crate::grassmann::{ExteriorMonomial, GradingMap, Z2, MAX_RANK};
use crate::identities::NormalTerm;
use crate::scalar::Field;
use crate::tensor_square::{BasisElement, BiDegree, GradingScheme, OrdinaryAlgebra, Ranks, Target, TensorElement};
use crate::freealg::Variable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("ranks too small: need at least {}x{}", needed.left, needed.right)]
    InsufficientRank { needed: Ranks },
    #[error("{odd} odd elements requested but at most {bound} fit with disjoint supports")]
    OddBound { odd: usize, bound: u32 },
    #[error("no disjoint basis elements with the requested degrees exist")]
    Infeasible,
    #[error("more than {MAX_RANK} generators needed on one side")]
    RankExhausted,
    #[error("separating substitution precondition violated: {0}")]
    Precondition(String),
}

/// Requested `(bidegree, degree)` pairs for a graded scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRequest {
    pub items: Vec<(BiDegree, Z2)>,
    pub scheme: GradingScheme,
}

impl DegreeRequest {
    /// Parses `"10:0,01:1"` (bidegree digits, colon, degree).
    pub fn parse(text: &str, scheme: GradingScheme) -> Result<Self, String> {
        let mut items = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || format!("bad request item `{part}` (expected e.g. 10:1)");
            let (g, h) = part.split_once(':').ok_or_else(bad)?;
            let bits: Vec<Z2> = g
                .trim()
                .chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(bad()),
                })
                .collect::<Result<_, _>>()?;
            let h = match h.trim() {
                "0" => 0,
                "1" => 1,
                _ => return Err(bad()),
            };
            match bits.as_slice() {
                [a, b] => items.push((BiDegree(*a, *b), h)),
                _ => return Err(bad()),
            }
        }
        Ok(DegreeRequest { items, scheme })
    }
}

/// How one tensor factor supplies generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    Graded(GradingMap),
    /// No grading; `cap` bounds the number of generators.
    Plain { cap: Option<u32> },
}

/// The side layout equivalent to a target. Quotient gradings are tensor
/// gradings in disguise: variant 2 is `E(0*) ⊗ E(0)`.
pub(crate) fn layout(target: Target) -> [Side; 2] {
    use GradingMap::{KStar, K};
    match target {
        Target::Graded(GradingScheme::Tensor(l, r)) => [Side::Graded(l), Side::Graded(r)],
        Target::Graded(GradingScheme::Quotient(1)) => [Side::Graded(K(0)), Side::Graded(K(0))],
        Target::Graded(GradingScheme::Quotient(2)) => [Side::Graded(KStar(0)), Side::Graded(K(0))],
        Target::Graded(GradingScheme::Quotient(_)) => [Side::Graded(K(0)), Side::Graded(KStar(0))],
        Target::Ordinary(OrdinaryAlgebra::EE) => [Side::Plain { cap: None }, Side::Plain { cap: None }],
        Target::Ordinary(OrdinaryAlgebra::E) => [Side::Plain { cap: None }, Side::Plain { cap: Some(0) }],
    }
}

impl Side {
    /// Number of generators in a class, `None` when unbounded.
    pub(crate) fn class_cap(self, odd: bool) -> Option<u32> {
        match (self, odd) {
            (Side::Graded(GradingMap::KStar(k)), true) => Some(k),
            (Side::Graded(GradingMap::K(k)), false) => Some(k),
            (Side::Graded(_), _) => None,
            (Side::Plain { cap }, false) => cap,
            (Side::Plain { .. }, true) => Some(0),
        }
    }

    /// Index of the `n`-th generator (from 0) of a class.
    pub(crate) fn class_index(self, odd: bool, n: u32) -> u32 {
        match (self, odd) {
            (Side::Graded(GradingMap::KStar(_)), true) | (Side::Graded(GradingMap::K(_)), false) => n + 1,
            (Side::Graded(GradingMap::KStar(k)), false) | (Side::Graded(GradingMap::K(k)), true) => k + n + 1,
            (Side::Graded(GradingMap::Infinity), true) => 2 * n + 2,
            (Side::Graded(GradingMap::Infinity), false) => 2 * n + 1,
            (Side::Plain { .. }, _) => n + 1,
        }
    }

    /// Class sizes `(odd, even)` inside the first `rank` generators.
    pub(crate) fn class_sizes(self, rank: u32) -> (u32, u32) {
        let odd = match self {
            Side::Graded(GradingMap::KStar(k)) => k.min(rank),
            Side::Graded(GradingMap::K(k)) => rank.saturating_sub(k),
            Side::Graded(GradingMap::Infinity) => rank / 2,
            Side::Plain { .. } => 0,
        };
        (odd, rank - odd)
    }

    /// Minimal `(odd, even)` generator counts for a monomial of length parity
    /// `len` and degree `deg` (ignored on plain sides).
    fn needs(self, len: Z2, deg: Z2) -> (u32, u32) {
        match self {
            Side::Graded(_) => (deg as u32, ((len + deg) % 2) as u32),
            Side::Plain { .. } => (0, len as u32),
        }
    }

    /// Rank that fits any allocation of `d` items.
    pub(crate) fn sufficient_rank(self, d: u32) -> u32 {
        match self {
            Side::Graded(GradingMap::KStar(k)) | Side::Graded(GradingMap::K(k)) => k + d,
            Side::Graded(GradingMap::Infinity) => 2 * d,
            Side::Plain { cap: Some(c) } => c.min(d),
            Side::Plain { cap: None } => d,
        }
    }
}

/// Ranks sufficient for any disjoint allocation of `d` items on `target`.
pub fn sufficient_ranks(target: Target, d: u32) -> Ranks {
    let [l, r] = layout(target);
    Ranks::new(l.sufficient_rank(d), r.sufficient_rank(d))
}

/// Per-item choice: `(left degree, right degree)`.
type Split = (Z2, Z2);

fn options(sides: [Side; 2], g: BiDegree, h: Option<Z2>) -> Vec<(Split, [(u32, u32); 2])> {
    let splits: Vec<Split> = match h {
        Some(h) => vec![(0, h), (1, (h + 1) % 2)],
        None => vec![(0, 0)],
    };
    let mut opts: Vec<(Split, [(u32, u32); 2])> = splits
        .into_iter()
        .map(|(dl, dr)| ((dl, dr), [sides[0].needs(g.0, dl), sides[1].needs(g.1, dr)]))
        .collect();
    opts.sort_by_key(|(s, n)| (n[0].0 + n[0].1 + n[1].0 + n[1].1, *s));
    opts
}

/// Generator cursor over both sides.
#[derive(Clone, Debug)]
pub(crate) struct Allocator {
    sides: [Side; 2],
    used: [[u32; 2]; 2],
}

impl Allocator {
    pub(crate) fn new(target: Target) -> Self {
        Allocator { sides: layout(target), used: [[0; 2]; 2] }
    }

    fn take(&mut self, side: usize, odd: bool) -> Result<u32, WitnessError> {
        let c = odd as usize;
        let n = self.used[side][c];
        if let Some(cap) = self.sides[side].class_cap(odd) {
            if n >= cap {
                return Err(WitnessError::Infeasible);
            }
        }
        let idx = self.sides[side].class_index(odd, n);
        if idx > MAX_RANK {
            return Err(WitnessError::RankExhausted);
        }
        self.used[side][c] += 1;
        Ok(idx)
    }

    /// Disjoint basis elements with the given bidegrees and, when present,
    /// degrees. Choices are made lowest-cost first with backtracking on
    /// class capacities.
    pub(crate) fn allocate(&mut self, items: &[(BiDegree, Option<Z2>)]) -> Result<Vec<BasisElement>, WitnessError> {
        let opts: Vec<_> = items.iter().map(|&(g, h)| options(self.sides, g, h)).collect();
        let mut remaining = [[None; 2]; 2];
        for s in 0..2 {
            for c in 0..2 {
                remaining[s][c] = self.sides[s].class_cap(c == 1).map(|cap| cap.saturating_sub(self.used[s][c]));
            }
        }
        let mut choice = vec![0usize; items.len()];
        if !search(&opts, 0, &mut remaining, &mut choice) {
            return Err(WitnessError::Infeasible);
        }
        let mut out = Vec::with_capacity(items.len());
        for (i, o) in opts.iter().enumerate() {
            let needs = o[choice[i]].1;
            let mut masks = [0u64; 2];
            for s in 0..2 {
                for _ in 0..needs[s].0 {
                    masks[s] |= 1u64 << (self.take(s, true)? - 1);
                }
                for _ in 0..needs[s].1 {
                    masks[s] |= 1u64 << (self.take(s, false)? - 1);
                }
            }
            out.push(BasisElement::new(ExteriorMonomial::from_mask(masks[0]), ExteriorMonomial::from_mask(masks[1])));
        }
        Ok(out)
    }

    /// Generators handed out so far, as ranks.
    pub(crate) fn extent(&self) -> Ranks {
        let ext = |s: usize| {
            let side = self.sides[s];
            let top = |odd: bool| {
                let n = self.used[s][odd as usize];
                if n == 0 {
                    0
                } else {
                    side.class_index(odd, n - 1)
                }
            };
            top(true).max(top(false))
        };
        Ranks::new(ext(0), ext(1))
    }
}

fn search(
    opts: &[Vec<(Split, [(u32, u32); 2])>],
    i: usize,
    remaining: &mut [[Option<u32>; 2]; 2],
    choice: &mut [usize],
) -> bool {
    if i == opts.len() {
        return true;
    }
    for (k, (_, needs)) in opts[i].iter().enumerate() {
        let fits = (0..2).all(|s| {
            remaining[s][1].is_none_or(|r| r >= needs[s].0) && remaining[s][0].is_none_or(|r| r >= needs[s].1)
        });
        if !fits {
            continue;
        }
        let saved = *remaining;
        for s in 0..2 {
            if let Some(r) = remaining[s][1].as_mut() {
                *r -= needs[s].0;
            }
            if let Some(r) = remaining[s][0].as_mut() {
                *r -= needs[s].1;
            }
        }
        choice[i] = k;
        if search(opts, i + 1, remaining, choice) {
            return true;
        }
        *remaining = saved;
    }
    false
}

/// Basis elements `b_i` with pairwise disjoint supports, `g(b_i) = g_i` and
/// degree `h_i`, within the given ranks.
pub fn construct(req: &DegreeRequest, ranks: Ranks) -> Result<Vec<BasisElement>, WitnessError> {
    if let GradingScheme::Tensor(GradingMap::KStar(k), GradingMap::KStar(j)) = req.scheme {
        let odd = req.items.iter().filter(|(_, h)| *h == 1).count();
        if odd > (k + j) as usize {
            return Err(WitnessError::OddBound { odd, bound: k + j });
        }
    }
    let mut alloc = Allocator::new(Target::Graded(req.scheme));
    let items: Vec<(BiDegree, Option<Z2>)> = req.items.iter().map(|&(g, h)| (g, Some(h))).collect();
    let out = alloc.allocate(&items)?;
    let needed = alloc.extent();
    if needed.left > ranks.left || needed.right > ranks.right {
        return Err(WitnessError::InsufficientRank { needed });
    }
    Ok(out)
}

/// Disjoint basis elements with the given bidegrees in an ungraded algebra.
pub fn construct_ordinary(bidegrees: &[BiDegree], algebra: OrdinaryAlgebra, ranks: Ranks) -> Result<Vec<BasisElement>, WitnessError> {
    let mut alloc = Allocator::new(Target::Ordinary(algebra));
    let items: Vec<(BiDegree, Option<Z2>)> = bidegrees.iter().map(|&g| (g, None)).collect();
    let out = alloc.allocate(&items)?;
    let needed = alloc.extent();
    if needed.left > ranks.left || needed.right > ranks.right {
        return Err(WitnessError::InsufficientRank { needed });
    }
    Ok(out)
}

/// The substitution isolating the term with tail `k0` in a family of normal
/// terms of one multidegree (scheme `Q2`).
///
/// Every `y_i` goes to a fresh `e_a ⊗ 1`; every `z_j` to
/// `1 ⊗ e_{a_j} + b_1 + ... + b_{n_j}` with fresh `(1,1)` atoms `b_l = e_a ⊗ e_b`
/// and `n_j` the degree of `z_j` in the h-part of the `k0` term. Terms whose
/// tail does not contain `k0` evaluate to zero, the `k0` term does not.
pub fn separating_substitution(family: &[NormalTerm], k0: &[u32], field: Field) -> Result<Substitution, WitnessError> {
    let pre = |m: &str| Err(WitnessError::Precondition(m.to_string()));
    let Some(first) = family.first() else { return pre("empty family") };
    let md = first.multidegree();
    if family.iter().any(|t| t.multidegree() != md) {
        return pre("family members differ in multidegree");
    }
    let k0_set: BTreeSet<u32> = k0.iter().copied().collect();
    let owners: Vec<&NormalTerm> = family.iter().filter(|t| t.tail == k0).collect();
    if owners.len() != 1 {
        return pre("exactly one term must have the given tail");
    }
    for t in family {
        if t.tail != k0 && k0_set.iter().all(|k| t.tail.contains(k)) {
            return pre("another tail contains the designated tail");
        }
    }
    let owner = owners[0];
    let scheme = GradingScheme::Quotient(2);
    let mut alloc = Allocator::new(Target::Graded(scheme));
    let mut images: BTreeMap<Variable, TensorElement> = BTreeMap::new();
    for v in md.keys() {
        let img = if v.is_even() {
            let b = alloc.allocate(&[(BiDegree(1, 0), Some(0))])?;
            TensorElement::basis(field, b[0])
        } else {
            let n = owner.h_degree(v.index) as usize;
            let mut items = vec![(BiDegree(0, 1), Some(1))];
            items.extend(std::iter::repeat_n((BiDegree(1, 1), Some(1)), n));
            let bs = alloc.allocate(&items)?;
            let mut e = TensorElement::zero(field);
            for b in bs {
                e.add_term(b, &field.one());
            }
            e
        };
        images.insert(*v, img);
    }
    Ok(Substitution::new(Target::Graded(scheme), images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor_square::GradingScheme::{Quotient, Tensor};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_output(req: &DegreeRequest, out: &[BasisElement]) {
        assert_eq!(out.len(), req.items.len());
        for (b, (g, h)) in out.iter().zip(&req.items) {
            assert_eq!(b.bidegree(), *g);
            assert_eq!(b.alpha(req.scheme), *h);
        }
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                assert!(out[i].is_disjoint(out[j]));
            }
        }
    }

    #[test]
    fn infinity_example() {
        let req = DegreeRequest { items: vec![(BiDegree(1, 0), 0)], scheme: Tensor(GradingMap::Infinity, GradingMap::K(0)) };
        let out = construct(&req, Ranks::square(4)).unwrap();
        assert_eq!(out, vec![BasisElement::left_atom(1)]);
        // odd variant needs padding by an odd generator
        let req = DegreeRequest { items: vec![(BiDegree(0, 0), 1)], scheme: Tensor(GradingMap::Infinity, GradingMap::K(0)) };
        let out = construct(&req, Ranks::square(4)).unwrap();
        check_output(&req, &out);
        assert_eq!(out[0].to_string(), "e1e2(x)1");
    }

    #[test]
    fn odd_bound_for_star_pairs() {
        let s = Tensor(GradingMap::KStar(1), GradingMap::KStar(1));
        let req = DegreeRequest { items: vec![(BiDegree(1, 0), 1); 3], scheme: s };
        assert_eq!(construct(&req, Ranks::square(8)), Err(WitnessError::OddBound { odd: 3, bound: 2 }));
        let req = DegreeRequest { items: vec![(BiDegree(1, 0), 1), (BiDegree(0, 0), 1)], scheme: s };
        check_output(&req, &construct(&req, Ranks::square(8)).unwrap());
    }

    #[test]
    fn empty_request() {
        let req = DegreeRequest { items: vec![], scheme: Quotient(2) };
        assert_eq!(construct(&req, Ranks::square(0)).unwrap(), vec![]);
    }

    #[test]
    fn rank_errors_report_needs() {
        let req = DegreeRequest { items: vec![(BiDegree(1, 1), 1); 3], scheme: Quotient(2) };
        assert_eq!(construct(&req, Ranks::square(2)), Err(WitnessError::InsufficientRank { needed: Ranks::square(3) }));
    }

    #[test]
    fn quotient_degree_mismatch_is_infeasible() {
        let req = DegreeRequest { items: vec![(BiDegree(1, 0), 1)], scheme: Quotient(2) };
        assert_eq!(construct(&req, Ranks::square(4)), Err(WitnessError::Infeasible));
    }

    #[test]
    fn request_text() {
        let r = DegreeRequest::parse("10:0, 01:1", Quotient(2)).unwrap();
        assert_eq!(r.items, vec![(BiDegree(1, 0), 0), (BiDegree(0, 1), 1)]);
        assert!(DegreeRequest::parse("1:0", Quotient(2)).is_err());
        assert!(DegreeRequest::parse("10-0", Quotient(2)).is_err());
    }

    #[test]
    fn random_requests_meet_postconditions() {
        let schemes = [
            Tensor(GradingMap::Infinity, GradingMap::K(1)),
            Tensor(GradingMap::Infinity, GradingMap::Infinity),
            Tensor(GradingMap::KStar(2), GradingMap::KStar(1)),
            Tensor(GradingMap::KStar(2), GradingMap::Infinity),
            Tensor(GradingMap::K(2), GradingMap::KStar(3)),
            Quotient(1),
            Quotient(2),
            Quotient(3),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut built = 0;
        for _ in 0..500 {
            let scheme = schemes[rng.gen_range(0..schemes.len())];
            let n = rng.gen_range(0..7);
            let items = (0..n)
                .map(|_| {
                    let g = BiDegree::ALL[rng.gen_range(0..4)];
                    let h = scheme.degree_of_bidegree(g).unwrap_or_else(|| rng.gen_range(0..2));
                    (g, h)
                })
                .collect();
            let req = DegreeRequest { items, scheme };
            match construct(&req, Ranks::square(40)) {
                Ok(out) => {
                    check_output(&req, &out);
                    built += 1;
                }
                Err(WitnessError::OddBound { .. }) | Err(WitnessError::Infeasible) => {
                    assert!(matches!(scheme, Tensor(GradingMap::KStar(_), _) | Tensor(GradingMap::K(_), _)));
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(built > 400);
    }

    #[test]
    fn ordinary_single_factor() {
        let out = construct_ordinary(&[BiDegree(1, 0), BiDegree(0, 0)], OrdinaryAlgebra::E, Ranks::new(4, 0)).unwrap();
        assert_eq!(out, vec![BasisElement::left_atom(1), BasisElement::ONE]);
        assert!(construct_ordinary(&[BiDegree(0, 1)], OrdinaryAlgebra::E, Ranks::new(4, 0)).is_err());
    }
}
