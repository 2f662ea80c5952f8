//! Text front end for perturbations and observables.
//!
//! Grammar (LL(1), parsed by recursive descent):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT | INT '/' INT | SYMBOL | '(' expr ')'
//! SYMBOL := q | p | a | ad | N | i | sqrt2 | hbar | m | omega
//! ```
//!
//! `3/4` is a single rational literal (no whitespace around the slash); there
//! is no general division. Both `-` and the Unicode minus `−` are accepted.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::boson::OperatorPoly;
use crate::coeff::{Qi2, Rational, Scalar, ScalarSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Q,
    P,
    A,
    Ad,
    N,
    I,
    Sqrt2,
    Hbar,
    M,
    Omega,
}

impl Symbol {
    pub const ALL: [Symbol; 10] = [
        Symbol::Q,
        Symbol::P,
        Symbol::A,
        Symbol::Ad,
        Symbol::N,
        Symbol::I,
        Symbol::Sqrt2,
        Symbol::Hbar,
        Symbol::M,
        Symbol::Omega,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Symbol::Q => "q",
            Symbol::P => "p",
            Symbol::A => "a",
            Symbol::Ad => "ad",
            Symbol::N => "N",
            Symbol::I => "i",
            Symbol::Sqrt2 => "sqrt2",
            Symbol::Hbar => "hbar",
            Symbol::M => "m",
            Symbol::Omega => "omega",
        }
    }

    fn from_name(s: &str) -> Option<Symbol> {
        Symbol::ALL.into_iter().find(|sym| sym.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ast {
    Sum(Vec<Ast>),
    Product(Vec<Ast>),
    Power(Box<Ast>, u32),
    Neg(Box<Ast>),
    Int(BigInt),
    Rational(BigInt, BigInt),
    Symbol(Symbol),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String>, found: String },
    UnknownSymbol { symbol: String },
    NonIntegerExponent,
    ExponentTooLarge,
    ZeroDenominator,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error: expected one of [{}], found {}", expected.join(", "), found)
            }
            ParseErrorKind::UnknownSymbol { symbol } => write!(f, "unknown symbol `{symbol}`"),
            ParseErrorKind::NonIntegerExponent => {
                write!(f, "exponent must be a non-negative integer literal")
            }
            ParseErrorKind::ExponentTooLarge => write!(f, "exponent too large"),
            ParseErrorKind::ZeroDenominator => write!(f, "rational literal with zero denominator"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    #[serde(flatten)]
    pub kind: ParseErrorKind,
}

impl ParseError {
    /// Machine-readable diagnostic.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("plain data");
        v["message"] = serde_json::Value::String(self.kind.to_string());
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Rational(BigInt, BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Rational(p, q) => format!("rational `{p}/{q}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let ch = src[i..].chars().next().unwrap();
        let start = i;
        match ch {
            c if c.is_whitespace() => {
                i += c.len_utf8();
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' | '−' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let num: BigInt = src[i..j].parse().unwrap();
                if j + 1 < bytes.len() && bytes[j] == b'/' && bytes[j + 1].is_ascii_digit() {
                    let mut k = j + 1;
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                    let den: BigInt = src[j + 1..k].parse().unwrap();
                    if den.is_zero() {
                        return Err(ParseError { offset: start, kind: ParseErrorKind::ZeroDenominator });
                    }
                    out.push((start, Tok::Rational(num, den)));
                    i = k;
                } else {
                    out.push((start, Tok::Int(num)));
                    i = j;
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                out.push((start, Tok::Ident(src[i..j].to_string())));
                i = j;
                continue;
            }
            c => {
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::Syntax {
                        expected: vec!["expression".into()],
                        found: format!("character `{c}`"),
                    },
                })
            }
        }
        i += ch.len_utf8();
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
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

    fn syntax(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: self.peek().describe(),
            },
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut items = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    items.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    items.push(Ast::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Ast::Sum(items) })
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut items = vec![self.unary()?];
        while *self.peek() == Tok::Star {
            self.bump();
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Ast::Product(items) })
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let e = n
                    .to_u32()
                    .ok_or(ParseError { offset: at, kind: ParseErrorKind::ExponentTooLarge })?;
                Ok(Ast::Power(Box::new(base), e))
            }
            Tok::Rational(..) | Tok::Minus => {
                Err(ParseError { offset: at, kind: ParseErrorKind::NonIntegerExponent })
            }
            _ => Err(self.syntax(&["integer exponent"])),
        }
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Ast::Int(n))
            }
            Tok::Rational(p, q) => {
                self.bump();
                Ok(Ast::Rational(p, q))
            }
            Tok::Ident(name) => {
                self.bump();
                Symbol::from_name(&name)
                    .map(Ast::Symbol)
                    .ok_or(ParseError { offset: at, kind: ParseErrorKind::UnknownSymbol { symbol: name } })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.syntax(&["+", "-", "*", ")"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.syntax(&["number", "symbol", "(", "-"])),
        }
    }
}

pub fn parse(src: &str) -> Result<Ast, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let ast = p.expr()?;
    if *p.peek() != Tok::End {
        let mut expected = vec!["+", "-", "*"];
        if matches!(p.toks[p.pos.saturating_sub(1)].1, Tok::Ident(_) | Tok::Int(_) | Tok::Rational(..) | Tok::RParen) {
            expected.push("^");
        }
        expected.push("end of input");
        return Err(p.syntax(&expected));
    }
    Ok(ast)
}

/// Binding strength used by the emitter; larger binds tighter.
fn level(ast: &Ast) -> u8 {
    match ast {
        Ast::Sum(_) => 1,
        Ast::Product(_) => 2,
        Ast::Neg(_) => 3,
        Ast::Power(..) => 4,
        Ast::Int(_) | Ast::Rational(..) | Ast::Symbol(_) => 5,
    }
}

fn emit(ast: &Ast, min_level: u8, out: &mut String) {
    if level(ast) < min_level {
        out.push('(');
        emit(ast, 0, out);
        out.push(')');
        return;
    }
    match ast {
        Ast::Sum(items) => {
            for (idx, item) in items.iter().enumerate() {
                match (idx, item) {
                    (0, _) => emit(item, 2, out),
                    (_, Ast::Neg(inner)) => {
                        out.push_str(" - ");
                        emit(inner, 2, out);
                    }
                    _ => {
                        out.push_str(" + ");
                        emit(item, 2, out);
                    }
                }
            }
        }
        Ast::Product(items) => {
            for (idx, item) in items.iter().enumerate() {
                if idx > 0 {
                    out.push('*');
                }
                emit(item, 3, out);
            }
        }
        Ast::Neg(inner) => {
            out.push('-');
            emit(inner, 3, out);
        }
        Ast::Power(base, e) => {
            emit(base, 5, out);
            out.push_str(&format!("^{e}"));
        }
        Ast::Int(n) => out.push_str(&n.to_string()),
        Ast::Rational(p, q) => out.push_str(&format!("{p}/{q}")),
        Ast::Symbol(s) => out.push_str(s.name()),
    }
}

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        emit(self, 0, &mut s);
        f.write_str(&s)
    }
}

/// Expands `q` and `p` in ladder operators and normal-orders the result.
pub fn lower(ast: &Ast) -> OperatorPoly {
    match ast {
        Ast::Sum(items) => items.iter().fold(OperatorPoly::zero(), |acc, x| &acc + &lower(x)),
        Ast::Product(items) => {
            items.iter().fold(OperatorPoly::identity(), |acc, x| acc.normal_order_product(&lower(x)))
        }
        Ast::Power(base, e) => lower(base).pow(*e),
        Ast::Neg(inner) => -&lower(inner),
        Ast::Int(n) => OperatorPoly::scalar(ScalarSum::from_rational(Rational::from_integer(n.clone()))),
        Ast::Rational(p, q) => OperatorPoly::scalar(ScalarSum::from_rational(Rational::new(p.clone(), q.clone()))),
        Ast::Symbol(s) => match s {
            Symbol::Q => OperatorPoly::position(),
            Symbol::P => OperatorPoly::momentum(),
            Symbol::A => OperatorPoly::annihilation(),
            Symbol::Ad => OperatorPoly::creation(),
            Symbol::N => OperatorPoly::number(),
            Symbol::I => OperatorPoly::scalar(Scalar::new(Qi2::i(), Default::default())),
            Symbol::Sqrt2 => OperatorPoly::scalar(Scalar::new(Qi2::sqrt2(), Default::default())),
            Symbol::Hbar => OperatorPoly::scalar(Scalar::units(2, 0, 0)),
            Symbol::M => OperatorPoly::scalar(Scalar::units(0, 2, 0)),
            Symbol::Omega => OperatorPoly::scalar(Scalar::units(0, 0, 2)),
        },
    }
}

/// `parse` followed by `lower`.
pub fn parse_operator(src: &str) -> Result<OperatorPoly, ParseError> {
    Ok(lower(&parse(src)?))
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("operator is not Hermitian; x − x† = {residue}")]
pub struct HermiticityError {
    pub residue: OperatorPoly,
}

/// Passes iff `x† = x` exactly.
pub fn require_hermitian(x: &OperatorPoly) -> Result<(), HermiticityError> {
    let residue = x - &x.dagger();
    if residue.is_zero() {
        Ok(())
    } else {
        Err(HermiticityError { residue })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: Symbol) -> Ast {
        Ast::Symbol(s)
    }

    fn pow(b: Ast, e: u32) -> Ast {
        Ast::Power(Box::new(b), e)
    }

    #[test]
    fn power_literal() {
        assert_eq!(parse("p^4").unwrap(), pow(sym(Symbol::P), 4));
    }

    #[test]
    fn symmetrized_sum() {
        let expect = Ast::Sum(vec![
            Ast::Product(vec![pow(sym(Symbol::Q), 2), sym(Symbol::P)]),
            Ast::Product(vec![sym(Symbol::P), pow(sym(Symbol::Q), 2)]),
        ]);
        assert_eq!(parse("q^2*p + p*q^2").unwrap(), expect);
    }

    #[test]
    fn dangling_plus() {
        let err = parse("q +").unwrap_err();
        assert_eq!(err.offset, 3);
        assert!(matches!(err.kind, ParseErrorKind::Syntax { .. }));
    }

    #[test]
    fn error_kinds() {
        assert_eq!(parse("q^1/2").unwrap_err().kind, ParseErrorKind::NonIntegerExponent);
        assert_eq!(parse("q^-1").unwrap_err().kind, ParseErrorKind::NonIntegerExponent);
        let e = parse("x + q").unwrap_err();
        assert_eq!(e.offset, 0);
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol { symbol: "x".into() });
        assert_eq!(parse("1/0").unwrap_err().kind, ParseErrorKind::ZeroDenominator);
        assert_eq!(parse("(q").unwrap_err().offset, 2);
        assert_eq!(parse("q q").unwrap_err().offset, 2);
        let json = parse("q +").unwrap_err().to_json();
        assert_eq!(json["kind"], "syntax");
        assert_eq!(json["offset"], 3);
    }

    #[test]
    fn unicode_minus_and_offsets() {
        let ast = parse("q*p − p*q").unwrap();
        assert!(matches!(ast, Ast::Sum(ref v) if matches!(v[1], Ast::Neg(_))));
        // `−` is three bytes wide
        assert_eq!(parse("q − ?").unwrap_err().offset, 6);
    }

    #[test]
    fn canonical_commutation() {
        let x = parse_operator("q*p − p*q").unwrap();
        let i_hbar = OperatorPoly::scalar(Scalar::new(Qi2::i(), crate::coeff::UnitMonomial::new(2, 0, 0)));
        assert_eq!(x, i_hbar);
    }

    #[test]
    fn hermiticity_gate() {
        assert!(require_hermitian(&parse_operator("q").unwrap()).is_ok());
        assert!(require_hermitian(&parse_operator("q*p + p*q").unwrap()).is_ok());
        let err = require_hermitian(&parse_operator("q + i*p").unwrap()).unwrap_err();
        assert!(!err.residue.is_zero());
        assert!(require_hermitian(&parse_operator("q*p").unwrap()).is_err());
    }

    #[test]
    fn emitter_examples() {
        for src in ["q^2*p + p*q^2", "-(q + p)^2", "-q*p - -a", "(a*ad)*N", "3/4*hbar - i*sqrt2*(q - p)^3"] {
            let ast = parse(src).unwrap();
            assert_eq!(parse(&ast.to_string()).unwrap(), ast, "{src}");
        }
    }
}
