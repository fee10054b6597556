//! Cross-module properties checked against independent oracles.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eeid_core::acceptance::random_y_proper;
use eeid_core::checker::{check_multilinear, check_multilinear_on, eval, exhaustive_ranks, Mode, Verdict};
use eeid_core::identities::render_combination;
use eeid_core::rewrite::{normal_form, RewriteConfig};
use eeid_core::tensor_square::{OrdinaryAlgebra, Target};
use eeid_core::{
    parse, BasisElement, ExteriorMonomial, Expr, Field, GradedPolynomial, GradingMap, GradingScheme, Ranks, TensorElement, Variable,
};

fn random_element(rng: &mut ChaCha8Rng, field: Field, scheme: GradingScheme, alpha: u8, rank: u32) -> TensorElement {
    let mut e = TensorElement::zero(field);
    for _ in 0..rng.gen_range(1..=3) {
        let b = loop {
            let b = BasisElement::new(
                ExteriorMonomial::from_mask(rng.gen_range(0..1u64 << rank)),
                ExteriorMonomial::from_mask(rng.gen_range(0..1u64 << rank)),
            );
            if scheme.degree(b) == alpha {
                break b;
            }
        };
        e.add_term(b, &field.from_i64(rng.gen_range(1..=6)));
    }
    e
}

fn soundness(field: Field, seed: u64) {
    let scheme = GradingScheme::Quotient(2);
    let cfg = RewriteConfig::for_field(field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let f = random_y_proper(&mut rng, field, 5);
        let g = render_combination(&normal_form(&f, &cfg).unwrap(), field).unwrap();
        for _ in 0..20 {
            let images: BTreeMap<Variable, TensorElement> = f
                .variables()
                .into_iter()
                .map(|v| (v, random_element(&mut rng, field, scheme, v.parity().unwrap(), 7)))
                .collect();
            assert_eq!(eval(&f, &images).unwrap(), eval(&g, &images).unwrap(), "{f}");
        }
    }
}

#[test]
fn normal_form_preserves_values_over_q() {
    soundness(Field::Rational, 11);
}

#[test]
fn normal_form_preserves_values_over_f5() {
    soundness(Field::Prime(5), 12);
}

#[test]
fn normal_form_preserves_values_over_f3() {
    soundness(Field::Prime(3), 13);
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (1u32..4).prop_map(Expr::y),
        (1u32..4).prop_map(Expr::z),
        (1u32..3).prop_map(Expr::x),
        (-5i64..6, 1i64..4).prop_map(|(n, d)| Expr::Num(BigRational::new(BigInt::from(n), BigInt::from(d)))),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Sum),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Product),
            (inner.clone(), 0u32..3).prop_map(|(a, e)| Expr::pow(a, e)),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::comm),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::jordan(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn printed_expressions_parse_back(e in expr_strategy()) {
        let text = e.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(back.expand(Field::Rational).unwrap(), e.expand(Field::Rational).unwrap(), "{}", text);
        // parsed trees are canonical: printing and parsing them is the identity
        prop_assert_eq!(parse(&back.to_string()).unwrap(), back);
    }

    #[test]
    fn printed_polynomials_parse_back(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_y_proper(&mut rng, Field::Rational, 4);
        let g = eeid_core::parse_polynomial(&f.to_string(), Field::Rational).unwrap();
        prop_assert_eq!(f, g);
    }

    /// Identifying the copies of a full linearization multiplies by `Π d_v!`.
    #[test]
    fn linearization_restitution(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = Field::Rational;
        let f = random_y_proper(&mut rng, field, 4);
        let (lin, copies) = f.multilinearize_with_copies().unwrap();
        prop_assert!(lin.is_multilinear() || lin.is_zero());
        let mut back = BTreeMap::new();
        let mut factor = 1i64;
        for (v, cs) in &copies {
            factor *= (1..=cs.len() as i64).product::<i64>();
            for c in cs {
                back.insert(*c, GradedPolynomial::var(field, *v));
            }
        }
        prop_assert_eq!(lin.substitute(&back), f.scale(&field.from_i64(factor)));
    }

    /// Exhaustive enumeration is the oracle for the pattern argument.
    #[test]
    fn modes_agree(seed in 0u64..100_000, scheme_ix in 0usize..5) {
        let schemes = [
            GradingScheme::Quotient(2),
            GradingScheme::Quotient(3),
            GradingScheme::Tensor(GradingMap::Infinity, GradingMap::K(1)),
            GradingScheme::Tensor(GradingMap::KStar(1), GradingMap::KStar(2)),
            GradingScheme::Tensor(GradingMap::K(2), GradingMap::Infinity),
        ];
        let scheme = schemes[scheme_ix];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_multilinear(&mut rng, 4);
        let d = f.total_degree() as u32;
        let ranks = exhaustive_ranks(Target::Graded(scheme), d);
        let a = check_multilinear(&f, scheme, ranks, Mode::DegreePatterns).unwrap();
        let b = check_multilinear(&f, scheme, ranks, Mode::BasisExhaustive).unwrap();
        prop_assert_eq!(a.holds(), b.holds(), "{} on {}", f, scheme);
        for v in [a, b] {
            if let Verdict::Fails { witness, value, .. } = v {
                prop_assert_eq!(witness.eval(&f).unwrap(), value.clone());
                prop_assert!(!value.is_zero());
                prop_assert!(witness.validate().is_ok());
            }
        }
    }
}

/// A random multilinear polynomial: signed sums of permuted words and
/// commutator products, biased towards cancellation.
fn random_multilinear(rng: &mut ChaCha8Rng, max_degree: u32) -> GradedPolynomial {
    use rand::seq::SliceRandom;
    let field = Field::Rational;
    loop {
        let d = rng.gen_range(1..=max_degree);
        let vars: Vec<Variable> = (1..=d).map(|i| if rng.gen_bool(0.5) { Variable::y(i) } else { Variable::z(i) }).collect();
        let mut f = GradedPolynomial::zero(field);
        for _ in 0..rng.gen_range(1..=3) {
            let mut w = vars.clone();
            w.shuffle(rng);
            let mut t = GradedPolynomial::var(field, w[0]);
            for v in &w[1..] {
                let x = GradedPolynomial::var(field, *v);
                t = match rng.gen_range(0..3) {
                    0 => t.mul(&x),
                    1 => t.commutator(&x),
                    _ => t.jordan(&x),
                };
            }
            f = f.add(&t.scale(&field.from_i64(rng.gen_range(-2..=2))));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

#[test]
fn modes_agree_on_degree_five_corpus() {
    let corpus = [
        "[y1,y2,z3]*[z4,z5]",
        "[y1,z2] o [z3,z4,z5]",
        "(z1 o z2)*(z3 o z4)*z5 - (z1 o z3)*(z2 o z4)*z5",
        "[z1,z2,z3,z4,z5]",
        "z1*z2*z3*z4*z5",
        "[y1,y2,[y3,y4],y5]",
    ];
    for (scheme, text) in [GradingScheme::Quotient(2), GradingScheme::Tensor(GradingMap::KStar(2), GradingMap::KStar(2))]
        .into_iter()
        .flat_map(|s| corpus.iter().map(move |t| (s, *t)))
    {
        let f = eeid_core::parse_polynomial(text, Field::Rational).unwrap();
        let ranks = Ranks::square(6);
        let a = check_multilinear(&f, scheme, ranks, Mode::DegreePatterns).unwrap();
        let b = check_multilinear(&f, scheme, ranks, Mode::BasisExhaustive).unwrap();
        assert_eq!(a.holds(), b.holds(), "{text} on {scheme}");
    }
}

#[test]
fn ordinary_modes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let f = random_multilinear(&mut rng, 4);
        for alg in [OrdinaryAlgebra::E, OrdinaryAlgebra::EE] {
            let t = Target::Ordinary(alg);
            let r = exhaustive_ranks(t, f.total_degree() as u32);
            let a = check_multilinear_on(&f, t, r, Mode::DegreePatterns).unwrap();
            let b = check_multilinear_on(&f, t, r, Mode::BasisExhaustive).unwrap();
            assert_eq!(a.holds(), b.holds(), "{f} on {t}");
        }
    }
}

#[test]
fn holds_at_sufficient_rank_implies_smaller_ranks() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let scheme = GradingScheme::Tensor(GradingMap::KStar(1), GradingMap::KStar(1));
    let mut checked = 0;
    for _ in 0..200 {
        let f = random_multilinear(&mut rng, 3);
        let top = exhaustive_ranks(Target::Graded(scheme), f.total_degree() as u32);
        if check_multilinear(&f, scheme, top, Mode::BasisExhaustive).unwrap().holds() {
            checked += 1;
            for l in 0..=top.left {
                for r in 0..=top.right {
                    assert!(check_multilinear(&f, scheme, Ranks::new(l, r), Mode::BasisExhaustive).unwrap().holds(), "{f}");
                }
            }
        }
    }
    assert!(checked > 0);
}
