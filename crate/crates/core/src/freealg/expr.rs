//! Expression trees over the free graded algebra, with rendering and expansion.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use super::{FreeAlgError, GradedPolynomial, VarKind, Variable};
use crate::scalar::Field;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Num(BigRational),
    Var(Variable),
    Neg(Box<Expr>),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, u32),
    /// Left-normed commutator `[f1, ..., fn]`, `n >= 2`.
    Commutator(Vec<Expr>),
    Jordan(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn num(n: i64) -> Expr {
        Expr::Num(BigRational::from_integer(n.into()))
    }

    pub fn y(i: u32) -> Expr {
        Expr::Var(Variable::y(i))
    }

    pub fn z(i: u32) -> Expr {
        Expr::Var(Variable::z(i))
    }

    pub fn x(i: u32) -> Expr {
        Expr::Var(Variable::x(i))
    }

    pub fn comm(parts: Vec<Expr>) -> Expr {
        assert!(parts.len() >= 2, "commutator needs at least two arguments");
        Expr::Commutator(parts)
    }

    pub fn jordan(a: Expr, b: Expr) -> Expr {
        Expr::Jordan(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, e: u32) -> Expr {
        Expr::Pow(Box::new(a), e)
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    /// `a - b`
    pub fn minus(a: Expr, b: Expr) -> Expr {
        Expr::Sum(vec![a, Expr::neg(b)])
    }

    pub fn expand(&self, field: Field) -> Result<GradedPolynomial, FreeAlgError> {
        Ok(match self {
            Expr::Num(q) => GradedPolynomial::constant(field.from_rational(q)?),
            Expr::Var(v) => GradedPolynomial::var(field, *v),
            Expr::Neg(a) => a.expand(field)?.scale(&field.from_i64(-1)),
            Expr::Sum(parts) => {
                let mut acc = GradedPolynomial::zero(field);
                for p in parts {
                    acc = acc.add(&p.expand(field)?);
                }
                acc
            }
            Expr::Product(parts) => {
                let mut acc = GradedPolynomial::constant(field.one());
                for p in parts {
                    acc = acc.mul(&p.expand(field)?);
                }
                acc
            }
            Expr::Pow(a, e) => a.expand(field)?.pow(*e),
            Expr::Commutator(parts) => {
                let mut acc = parts[0].expand(field)?;
                for p in &parts[1..] {
                    acc = acc.commutator(&p.expand(field)?);
                }
                acc
            }
            Expr::Jordan(a, b) => a.expand(field)?.jordan(&b.expand(field)?),
        })
    }

    /// The `x`-variables occurring in the expression, in increasing order.
    pub fn x_variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        self.visit_vars(&mut |v| {
            if v.kind == VarKind::X && !out.contains(&v) {
                out.push(v);
            }
        });
        out.sort();
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(Variable)) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => f(*v),
            Expr::Neg(a) | Expr::Pow(a, _) => a.visit_vars(f),
            Expr::Sum(ps) | Expr::Product(ps) | Expr::Commutator(ps) => ps.iter().for_each(|p| p.visit_vars(f)),
            Expr::Jordan(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Replaces variables according to `map`; others are kept.
    pub fn rename(&self, map: &BTreeMap<Variable, Variable>) -> Expr {
        let r = |e: &Expr| e.rename(map);
        match self {
            Expr::Num(q) => Expr::Num(q.clone()),
            Expr::Var(v) => Expr::Var(*map.get(v).unwrap_or(v)),
            Expr::Neg(a) => Expr::Neg(Box::new(r(a))),
            Expr::Sum(ps) => Expr::Sum(ps.iter().map(r).collect()),
            Expr::Product(ps) => Expr::Product(ps.iter().map(r).collect()),
            Expr::Pow(a, e) => Expr::Pow(Box::new(r(a)), *e),
            Expr::Commutator(ps) => Expr::Commutator(ps.iter().map(r).collect()),
            Expr::Jordan(a, b) => Expr::Jordan(Box::new(r(a)), Box::new(r(b))),
        }
    }

    /// Every way of turning each `x_i` into `y_i` or `z_i`, labelled by the
    /// chosen letters (e.g. `"zy"` for `x1 -> z1, x4 -> y4`). An expression
    /// without `x`-variables yields itself with an empty label.
    pub fn instantiate_parities(&self) -> Vec<(String, Expr)> {
        let xs = self.x_variables();
        let mut out = Vec::with_capacity(1 << xs.len());
        for bits in 0u32..(1 << xs.len()) {
            let mut map = BTreeMap::new();
            let mut label = String::new();
            for (k, v) in xs.iter().enumerate() {
                let odd = bits >> (xs.len() - 1 - k) & 1 == 1;
                label.push(if odd { 'z' } else { 'y' });
                map.insert(*v, Variable { kind: if odd { VarKind::Z } else { VarKind::Y }, index: v.index });
            }
            out.push((label, self.rename(&map)));
        }
        out
    }

    fn is_atomic(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Commutator(_) => true,
            Expr::Num(q) => q.is_negative() || q.is_integer(),
            _ => false,
        }
    }
}

fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, bare: bool) -> fmt::Result {
    if bare {
        write!(f, "{e}")
    } else {
        write!(f, "({e})")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => {
                let s = if q.is_integer() { q.numer().to_string() } else { format!("{}/{}", q.numer(), q.denom()) };
                if q.is_negative() {
                    write!(f, "({s})")
                } else {
                    write!(f, "{s}")
                }
            }
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                paren(f, a, !matches!(**a, Expr::Sum(_) | Expr::Neg(_)))
            }
            Expr::Sum(ps) => {
                if ps.is_empty() {
                    return write!(f, "0");
                }
                for (i, p) in ps.iter().enumerate() {
                    match (i, p) {
                        (0, Expr::Neg(_)) => write!(f, "{p}")?,
                        (0, Expr::Sum(_)) => paren(f, p, false)?,
                        (0, _) => write!(f, "{p}")?,
                        (_, Expr::Neg(a)) => {
                            write!(f, " - ")?;
                            paren(f, a, !matches!(**a, Expr::Sum(_) | Expr::Neg(_)))?
                        }
                        (_, Expr::Sum(_)) => {
                            write!(f, " + ")?;
                            paren(f, p, false)?
                        }
                        (_, _) => write!(f, " + {p}")?,
                    }
                }
                Ok(())
            }
            Expr::Product(ps) => {
                if ps.is_empty() {
                    return write!(f, "1");
                }
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    paren(f, p, p.is_atomic() || matches!(p, Expr::Pow(..)))?;
                }
                Ok(())
            }
            Expr::Pow(a, e) => {
                paren(f, a, a.is_atomic())?;
                write!(f, "^{e}")
            }
            Expr::Commutator(ps) => {
                write!(f, "[")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "]")
            }
            Expr::Jordan(a, b) => {
                // left operand may itself be a Jordan chain, the right may not
                paren(f, a, a.is_atomic() || matches!(**a, Expr::Pow(..) | Expr::Jordan(..)))?;
                write!(f, " o ")?;
                paren(f, b, b.is_atomic() || matches!(**b, Expr::Pow(..)))
            }
        }
    }
}
