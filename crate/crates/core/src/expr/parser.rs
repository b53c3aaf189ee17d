//! Recursive-descent parser for rational expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' int)?
//! base   := rational | var | '(' expr ')'
//! var    := 'x' digits
//! rational := digits ('/' digits)?
//! ```
//!
//! A literal `p/q` is read as one rational unless `q` is raised to a power,
//! so `3/2^2` is `3/(2^2)`. A minus sign directly in front of a literal folds
//! into it (`-3/4` is the constant `-3/4`).

use num_bigint::BigInt;
use num_traits::Zero;

use super::ast::RationalExpr;
use super::ExprError;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Var(i) => format!("variable x{i}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            b'x' => {
                i += 1;
                let d0 = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if d0 == i {
                    return Err(ExprError::Syntax {
                        position: i,
                        expected: vec!["variable index digits after 'x'".into()],
                        found: text[i..].chars().next().map_or("end of input".into(), |c| format!("{c:?}")),
                    });
                }
                let idx = text[d0..i].parse().map_err(|_| ExprError::Syntax {
                    position: d0,
                    expected: vec!["a variable index that fits in usize".into()],
                    found: text[d0..i].to_string(),
                })?;
                out.push((start, Tok::Var(idx)));
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            _ => {
                return Err(ExprError::Syntax {
                    position: start,
                    expected: vec!["number".into(), "variable".into(), "operator".into(), "parenthesis".into()],
                    found: text[start..].chars().next().map(|c| format!("{c:?}")).unwrap_or_default(),
                })
            }
        }
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    arity: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ExprError {
        ExprError::Syntax {
            position: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<RationalExpr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = RationalExpr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = RationalExpr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<RationalExpr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = RationalExpr::mul(lhs, self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = RationalExpr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<RationalExpr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            if matches!(self.peek(), Tok::Int(_)) {
                let lit = self.literal()?;
                if *self.peek() == Tok::Caret {
                    let k = self.exponent()?;
                    return Ok(RationalExpr::neg(RationalExpr::pow(RationalExpr::Const(lit), k)));
                }
                return Ok(RationalExpr::Const(-lit));
            }
            return Ok(RationalExpr::neg(self.factor()?));
        }
        let base = self.base()?;
        if *self.peek() == Tok::Caret {
            let k = self.exponent()?;
            return Ok(RationalExpr::pow(base, k));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ExprError> {
        debug_assert_eq!(*self.peek(), Tok::Caret);
        self.bump();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(n) => {
                let k = i64::try_from(&n).map_err(|_| self.error(&["an exponent that fits in i64"]))?;
                self.bump();
                Ok(if neg { -k } else { k })
            }
            _ => Err(self.error(&["integer exponent"])),
        }
    }

    /// `digits ('/' digits)?`, leaving a denominator that carries `^` alone.
    fn literal(&mut self) -> Result<Rational, ExprError> {
        let Tok::Int(p) = self.bump() else {
            unreachable!("literal() called on a non-integer token")
        };
        if *self.peek() == Tok::Slash {
            if let Tok::Int(q) = self.peek_at(1).clone() {
                if *self.peek_at(2) != Tok::Caret {
                    if q.is_zero() {
                        self.bump();
                        return Err(self.error(&["positive denominator"]));
                    }
                    self.bump();
                    self.bump();
                    return Ok(Rational::new(p, q));
                }
            }
        }
        Ok(Rational::from_integer(p))
    }

    fn base(&mut self) -> Result<RationalExpr, ExprError> {
        match self.peek().clone() {
            Tok::Int(_) => Ok(RationalExpr::Const(self.literal()?)),
            Tok::Var(i) => {
                if i >= self.arity {
                    return Err(ExprError::Arity { index: i, arity: self.arity, position: self.offset() });
                }
                self.bump();
                Ok(RationalExpr::Var(i))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["')'", "'+'", "'-'", "'*'", "'/'", "'^'"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(&["number", "variable", "'('", "'-'"])),
        }
    }
}

/// Parses `text` as an expression in the variables `x0 .. x{arity-1}`.
pub fn parse_expr(text: &str, arity: usize) -> Result<RationalExpr, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, arity };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["'+'", "'-'", "'*'", "'/'", "end of input"]));
    }
    Ok(e)
}
