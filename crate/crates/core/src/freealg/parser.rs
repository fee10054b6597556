//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := jordan (['*'] jordan)*
//! jordan := power ('o' power)*
//! power  := atom ('^' int)*
//! atom   := int ['/' int] | var | '(' expr ')' | '[' expr (',' expr)+ ']'
//! var    := ('y'|'z'|'x') int
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::{Expr, VarKind, Variable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown token `{token}` at position {pos}")]
    UnknownToken { token: String, pos: usize },
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(Variable),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Jordan,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_from = |mut j: usize| {
        let start = j;
        while j < chars.len() && chars[j].1.is_ascii_digit() {
            j += 1;
        }
        (start, j)
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '/' => Some(Tok::Slash),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            'o' => Some(Tok::Jordan),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let (s, e) = digits_from(i);
            let lit: String = chars[s..e].iter().map(|&(_, c)| c).collect();
            out.push((pos, Tok::Int(lit.parse().expect("digits"))));
            i = e;
            continue;
        }
        let kind = match c {
            'y' => Some(VarKind::Y),
            'z' => Some(VarKind::Z),
            'x' => Some(VarKind::X),
            _ => None,
        };
        let (s, e) = digits_from(i + 1);
        match kind {
            Some(kind) if e > s => {
                let lit: String = chars[s..e].iter().map(|&(_, c)| c).collect();
                let index: u32 = lit.parse().map_err(|_| ParseError::Syntax {
                    pos,
                    message: format!("variable index `{lit}` out of range"),
                })?;
                if index == 0 {
                    return Err(ParseError::Syntax { pos, message: "variable indices start at 1".into() });
                }
                out.push((pos, Tok::Var(Variable { kind, index })));
                i = e;
            }
            _ => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].1.is_alphanumeric() {
                    j += 1;
                }
                let token: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                return Err(ParseError::UnknownToken { token, pos });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), message: message.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut parts = Vec::new();
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                true
            }
            Some(Tok::Plus) => {
                self.at += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            parts.push(if negate { Expr::Neg(Box::new(t)) } else { t });
            negate = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.at += 1;
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Expr::Sum(parts) })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_) | Tok::Var(_) | Tok::LParen | Tok::LBracket))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut parts = vec![self.jordan()?];
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.at += 1;
                parts.push(self.jordan()?);
            } else if self.starts_factor() {
                parts.push(self.jordan()?);
            } else {
                break;
            }
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Expr::Product(parts) })
    }

    fn jordan(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Tok::Jordan) {
            self.at += 1;
            let rhs = self.power()?;
            acc = Expr::Jordan(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    acc = Expr::Pow(Box::new(acc), e);
                }
                _ => {
                    self.at -= 1;
                    return self.err("expected integer exponent");
                }
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.bump() {
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => Ok(Expr::Num(BigRational::new(n, d))),
                        Some(Tok::Int(_)) => {
                            self.at -= 1;
                            self.err("zero denominator")
                        }
                        _ => {
                            self.at -= 1;
                            self.err("expected denominator")
                        }
                    }
                } else {
                    Ok(Expr::Num(BigRational::from_integer(n)))
                }
            }
            Some(Tok::Var(v)) => Ok(Expr::Var(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::LBracket) => {
                let mut parts = vec![self.expr()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.at += 1;
                    parts.push(self.expr()?);
                }
                if parts.len() < 2 {
                    return self.err("commutator needs at least two arguments");
                }
                self.expect(Tok::RBracket, "`]`")?;
                Ok(Expr::Commutator(parts))
            }
            Some(_) => {
                self.at -= 1;
                self.err("expected a term")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses the polynomial expression language.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected token");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_ast() {
        let e = parse("[y1,y2,z3]").unwrap();
        assert_eq!(e, Expr::Commutator(vec![Expr::y(1), Expr::y(2), Expr::z(3)]));
    }

    #[test]
    fn identity_five_ast() {
        let e = parse("(z1 o z2)*(z3 o z4) - (z1 o z3)*(z2 o z4)").unwrap();
        let j = |a, b| Expr::jordan(Expr::z(a), Expr::z(b));
        let expected = Expr::Sum(vec![
            Expr::Product(vec![j(1, 2), j(3, 4)]),
            Expr::neg(Expr::Product(vec![j(1, 3), j(2, 4)])),
        ]);
        assert_eq!(e, expected);
    }

    #[test]
    fn power_ast() {
        assert_eq!(parse("z1^2").unwrap(), Expr::pow(Expr::z(1), 2));
    }

    #[test]
    fn juxtaposition_and_precedence() {
        assert_eq!(parse("y1 z2").unwrap(), Expr::Product(vec![Expr::y(1), Expr::z(2)]));
        // `o` binds tighter than juxtaposition, `^` tighter than `o`
        assert_eq!(
            parse("y1 z1 o z2^2").unwrap(),
            Expr::Product(vec![Expr::y(1), Expr::jordan(Expr::z(1), Expr::pow(Expr::z(2), 2))])
        );
        assert_eq!(parse("-3/2 y1").unwrap(), Expr::neg(Expr::Product(vec![
            Expr::Num(BigRational::new(3.into(), 2.into())),
            Expr::y(1)
        ])));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("y1 + w2"), Err(ParseError::UnknownToken { token: "w2".into(), pos: 5 }));
        assert!(matches!(parse("[y1]"), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("(y1"), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("y1 +"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("y0"), Err(ParseError::Syntax { pos: 0, .. })));
        assert!(matches!(parse(""), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("z1^y"), Err(ParseError::UnknownToken { .. })));
    }
}
