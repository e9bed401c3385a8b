//! Canonical infix rendering and parsing of exact expressions.
//!
//! Rendering lists terms in descending graded lexicographic order, e.g.
//! `-x^2*w + alpha2*x + 1/2`, and writes a true quotient as
//! `(num)/(den)`. Parsing accepts the usual `+ - * / ^ ( )` grammar, so
//! anything rendered parses back to the identical expression.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Monomial, SymError, SymbolTable};
use crate::scalar::fmt_rational;
use crate::{QExpr, QPoly};

pub struct PolyDisplay<'a> {
    poly: &'a QPoly,
    table: &'a SymbolTable,
}

pub struct ExprDisplay<'a> {
    expr: &'a QExpr,
    table: &'a SymbolTable,
}

impl QPoly {
    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, table }
    }
}

impl QExpr {
    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, table }
    }

    pub fn to_infix(&self, table: &SymbolTable) -> String {
        self.display(table).to_string()
    }
}

fn fmt_monomial(m: &Monomial, table: &SymbolTable) -> String {
    m.factors()
        .map(|(s, e)| if e == 1 { table.name(s).to_string() } else { format!("{}^{}", table.name(s), e) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms().iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", fmt_monomial(m, self.table))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), fmt_monomial(m, self.table))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expr.is_polynomial() {
            write!(f, "{}", self.expr.num().display(self.table))
        } else {
            write!(f, "({})/({})", self.expr.num().display(self.table), self.expr.den().display(self.table))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SymError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Num(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(SymError::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    table: &'a SymbolTable,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SymError> {
        Err(SymError::Parse { pos: self.at(), msg: msg.into() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QExpr, SymError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QExpr, SymError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let at = self.at();
                let d = self.unary()?;
                acc = acc.try_div(&d).map_err(|_| SymError::Parse { pos: at, msg: "division by zero".into() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<QExpr, SymError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<QExpr, SymError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| SymError::Parse { pos: self.at(), msg: "exponent too large".into() })?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<QExpr, SymError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(QExpr::constant(BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                let s = self.table.get(&name).ok_or_else(|| SymError::UnknownSymbol(name.clone()))?;
                self.pos += 1;
                Ok(QExpr::var(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_expr(src: &str, table: &SymbolTable) -> Result<QExpr, SymError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, table, len: src.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_poly(src: &str, table: &SymbolTable) -> Result<QPoly, SymError> {
    let e = parse_expr(src, table)?;
    e.as_poly().ok_or(SymError::Parse { pos: 0, msg: "expected a polynomial".into() })
}

/// Builds an expression from an infix literal. Panics on malformed input;
/// meant for the fixed formulas of the model registry.
pub fn ex(src: &str, table: &SymbolTable) -> QExpr {
    parse_expr(src, table).unwrap_or_else(|e| panic!("bad literal `{src}`: {e}"))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::SymbolKind;

    fn table() -> SymbolTable {
        let mut t = SymbolTable::new();
        for n in ["x", "w", "z", "alpha2"] {
            t.push(n, SymbolKind::State).unwrap();
        }
        t
    }

    #[test]
    fn renders_canonically() {
        let t = table();
        let e = ex("-(x*w - alpha2)*x + 1/2", &t);
        assert_eq!(e.to_infix(&t), "-x^2*w + x*alpha2 + 1/2");
        let r = ex("(z^2 - 2*x)/z^2", &t);
        assert_eq!(r.to_infix(&t), "(z^2 - 2*x)/(z^2)");
    }

    #[test]
    fn round_trips() {
        let t = table();
        for src in ["x^3*w - 3/2*z + 7", "(x + 1)/(x*z - 2)", "0", "-1/3", "-(w)/(x^2)"] {
            let e = ex(src, &t);
            let back = ex(&e.to_infix(&t), &t);
            assert_eq!(e, back, "{src}");
            assert_eq!(e.to_infix(&t), back.to_infix(&t));
        }
    }

    #[test]
    fn parse_errors() {
        let t = table();
        assert!(matches!(parse_expr("x +", &t), Err(SymError::Parse { .. })));
        assert!(matches!(parse_expr("y", &t), Err(SymError::UnknownSymbol(_))));
        assert!(matches!(parse_expr("x/0", &t), Err(SymError::Parse { .. })));
        assert!(matches!(parse_expr("x $ 2", &t), Err(SymError::Parse { .. })));
    }
}
