//! Symbol expressions: a small recursive-descent parser, a fully
//! parenthesized printer, and lowering to exact symbols.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := number 'i'? | 'i' | 'z' | 'conj' '(' expr ')'
//!         | 'B' '[' (expr (',' expr)*)? ']' | '(' expr ')'
//! ```
//!
//! On the circle `conj(z) = 1/z`, so `conj` lowers to conjugate reflection.

use std::fmt;

use num_complex::Complex64;
use pairker::{BlaschkeProduct, CircleTol, RationalFunction};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum SymbolExpr {
    Real(f64),
    /// `x i`.
    Imag(f64),
    Z,
    Conj(Box<SymbolExpr>),
    Blaschke(Vec<SymbolExpr>),
    Neg(Box<SymbolExpr>),
    Add(Box<SymbolExpr>, Box<SymbolExpr>),
    Sub(Box<SymbolExpr>, Box<SymbolExpr>),
    Mul(Box<SymbolExpr>, Box<SymbolExpr>),
    Div(Box<SymbolExpr>, Box<SymbolExpr>),
    Pow(Box<SymbolExpr>, i32),
}

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0}")]
    Math(#[from] pairker::Error),
    #[error("{0}")]
    Type(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Z,
    Conj,
    B,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn syntax(pos: usize, msg: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            'z' => Some(Tok::Z),
            'B' => Some(Tok::B),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((pos, tok));
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            // Exponent part, only when followed by digits.
            if i < chars.len() && matches!(chars[i].1, 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j].1, '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].1.is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lexeme: String = chars[start..i].iter().map(|(_, c)| c).collect();
            let value: f64 = lexeme
                .parse()
                .map_err(|_| syntax(pos, format!("malformed number '{lexeme}'")))?;
            if i < chars.len() && chars[i].1 == 'i' {
                out.push((pos, Tok::Imag(value)));
                i += 1;
            } else {
                out.push((pos, Tok::Num(value)));
            }
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_alphabetic() {
                i += 1;
            }
            let word: String = chars[start..i].iter().map(|(_, c)| c).collect();
            match word.as_str() {
                "conj" => out.push((pos, Tok::Conj)),
                "i" => out.push((pos, Tok::Imag(1.0))),
                _ => return Err(syntax(pos, format!("unknown identifier '{word}'"))),
            }
            continue;
        }
        return Err(syntax(pos, format!("unexpected character '{ch}'")));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.at).map(|t| t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, tok: Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ExprError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<SymbolExpr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(Tok::Plus) {
                lhs = SymbolExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(Tok::Minus) {
                lhs = SymbolExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<SymbolExpr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(Tok::Star) {
                lhs = SymbolExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(Tok::Slash) {
                lhs = SymbolExpr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<SymbolExpr, ExprError> {
        if self.eat(Tok::Minus) {
            return Ok(SymbolExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<SymbolExpr, ExprError> {
        let base = self.atom()?;
        if !self.eat(Tok::Caret) {
            return Ok(base);
        }
        let pos = self.pos();
        let negative = self.eat(Tok::Minus);
        match self.peek() {
            Some(Tok::Num(n)) if n.fract() == 0.0 && n.abs() <= i32::MAX as f64 => {
                self.at += 1;
                let k = n as i32;
                Ok(SymbolExpr::Pow(
                    Box::new(base),
                    if negative { -k } else { k },
                ))
            }
            _ => Err(syntax(pos, "exponent must be an integer")),
        }
    }

    fn atom(&mut self) -> Result<SymbolExpr, ExprError> {
        let pos = self.pos();
        let Some(tok) = self.peek() else {
            return Err(syntax(pos, "unexpected end of input"));
        };
        self.at += 1;
        match tok {
            Tok::Num(x) => Ok(SymbolExpr::Real(x)),
            Tok::Imag(x) => Ok(SymbolExpr::Imag(x)),
            Tok::Z => Ok(SymbolExpr::Z),
            Tok::Conj => {
                self.expect(Tok::LParen, "'(' after conj")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(SymbolExpr::Conj(Box::new(inner)))
            }
            Tok::B => {
                self.expect(Tok::LBracket, "'[' after B")?;
                let mut zeros = Vec::new();
                if !self.eat(Tok::RBracket) {
                    loop {
                        zeros.push(self.expr()?);
                        if self.eat(Tok::RBracket) {
                            break;
                        }
                        self.expect(Tok::Comma, "',' or ']'")?;
                    }
                }
                Ok(SymbolExpr::Blaschke(zeros))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(syntax(
                pos,
                "expected a number, z, conj(...), B[...] or '('",
            )),
        }
    }
}

pub fn parse_symbol(text: &str) -> Result<SymbolExpr, ExprError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SymbolExpr::*;
        match self {
            Real(x) if *x < 0.0 => write!(f, "(-{})", -x),
            Real(x) => write!(f, "{x}"),
            Imag(x) if *x < 0.0 => write!(f, "(-{}i)", -x),
            Imag(x) => write!(f, "{x}i"),
            Z => f.write_str("z"),
            Conj(e) => write!(f, "conj({e})"),
            Blaschke(zs) => {
                f.write_str("B[")?;
                for (i, e) in zs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("]")
            }
            Neg(e) => write!(f, "(-{e})"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Pow(e, k) => write!(f, "({e}^{k})"),
        }
    }
}

/// A lowered expression.
#[derive(Clone, Debug)]
pub enum Value {
    Rational(RationalFunction),
    Blaschke(BlaschkeProduct),
}

impl Value {
    pub fn into_rational(self) -> RationalFunction {
        match self {
            Value::Rational(f) => f,
            Value::Blaschke(b) => b.to_rational(),
        }
    }

    /// Accepts explicit `B[...]` products and rational functions that are
    /// finite Blaschke products, such as `z^3`.
    pub fn into_blaschke(self, tol: CircleTol) -> Result<BlaschkeProduct, ExprError> {
        match self {
            Value::Blaschke(b) => Ok(b),
            Value::Rational(f) => BlaschkeProduct::from_rational(&f, tol)
                .map_err(|e| ExprError::Type(format!("expected a finite Blaschke product ({e})"))),
        }
    }
}

fn constant_of(f: &RationalFunction) -> Result<Complex64, ExprError> {
    if f.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if !f.is_constant() {
        return Err(ExprError::Type(format!(
            "Blaschke zero must be a constant, got {f}"
        )));
    }
    Ok(f.gain())
}

pub fn lower(e: &SymbolExpr, tol: CircleTol) -> Result<Value, ExprError> {
    use SymbolExpr::*;
    let rational = |e: &SymbolExpr| lower(e, tol).map(Value::into_rational);
    Ok(match e {
        Real(x) => Value::Rational(RationalFunction::constant(Complex64::new(*x, 0.0))),
        Imag(x) => Value::Rational(RationalFunction::constant(Complex64::new(0.0, *x))),
        Z => Value::Rational(RationalFunction::z()),
        Conj(inner) => Value::Rational(rational(inner)?.conj_reflect()),
        Blaschke(zs) => {
            let zeros = zs
                .iter()
                .map(|z| constant_of(&rational(z)?))
                .collect::<Result<Vec<_>, _>>()?;
            Value::Blaschke(BlaschkeProduct::from_zeros(zeros, tol)?)
        }
        Neg(inner) => Value::Rational(-&rational(inner)?),
        Add(a, b) => Value::Rational(&rational(a)? + &rational(b)?),
        Sub(a, b) => Value::Rational(&rational(a)? - &rational(b)?),
        Mul(a, b) => match (lower(a, tol)?, lower(b, tol)?) {
            (Value::Blaschke(x), Value::Blaschke(y)) => Value::Blaschke(x.mul(&y)),
            (x, y) => Value::Rational(&x.into_rational() * &y.into_rational()),
        },
        Div(a, b) => Value::Rational(rational(a)?.checked_div(&rational(b)?)?),
        Pow(inner, k) => match lower(inner, tol)? {
            Value::Blaschke(b) if *k >= 0 => {
                Value::Blaschke((0..*k).fold(BlaschkeProduct::one(), |acc, _| acc.mul(&b)))
            }
            v => Value::Rational(v.into_rational().powi(*k)?),
        },
    })
}

pub fn parse_value(text: &str, tol: CircleTol) -> Result<Value, ExprError> {
    lower(&parse_symbol(text)?, tol)
}

pub fn parse_rational(text: &str, tol: CircleTol) -> Result<RationalFunction, ExprError> {
    Ok(parse_value(text, tol)?.into_rational())
}

pub fn parse_blaschke(text: &str, tol: CircleTol) -> Result<BlaschkeProduct, ExprError> {
    parse_value(text, tol)?.into_blaschke(tol)
}

fn complex_literal(c: Complex64) -> String {
    format!("({:?}{:+?}i)", c.re, c.im)
}

/// An expression text for `f` in factored form that parses back to `f`.
pub fn rational_to_expr(f: &RationalFunction) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let factor = |r: &Complex64| format!("(z - {})", complex_literal(*r));
    let num: Vec<String> = f.zeros().iter().map(factor).collect();
    let den: Vec<String> = f.poles().iter().map(factor).collect();
    let mut out = complex_literal(f.gain());
    for n in num {
        out.push_str(" * ");
        out.push_str(&n);
    }
    if !den.is_empty() {
        out.push_str(&format!(" / ({})", den.join(" * ")));
    }
    out
}

pub fn blaschke_to_expr(b: &BlaschkeProduct) -> String {
    let zeros: Vec<String> = b.zeros().iter().map(|z| complex_literal(*z)).collect();
    let product = format!("B[{}]", zeros.join(", "));
    if (b.constant() - Complex64::new(1.0, 0.0)).norm() < 1e-15 {
        product
    } else {
        format!("{} * {product}", complex_literal(b.constant()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> CircleTol {
        CircleTol::default()
    }

    #[test]
    fn conjugate_power_gives_double_pole_at_origin() {
        let f = parse_rational("conj(z)^2*(z-0.5)", tol()).unwrap();
        assert_eq!(f.poles().len(), 2);
        assert!(f.poles().iter().all(|p| p.norm() < 1e-14));
        assert_eq!(f.zeros().len(), 1);
        assert!((f.zeros()[0] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn blaschke_literal() {
        let b = parse_blaschke("B[0.5, -0.3i]", tol()).unwrap();
        assert_eq!(b.degree(), 2);
        assert!((b.zeros()[1] - Complex64::new(0.0, -0.3)).norm() < 1e-15);
        let err = parse_value("B[2]", tol()).unwrap_err();
        assert!(err.to_string().contains("Blaschke zero outside open disk"));
        assert_eq!(parse_blaschke("z^3", tol()).unwrap().degree(), 3);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_symbol("(z - 1").unwrap_err() {
            ExprError::Syntax { pos, .. } => assert_eq!(pos, 6),
            e => panic!("{e}"),
        }
        match parse_symbol("z + $").unwrap_err() {
            ExprError::Syntax { pos, .. } => assert_eq!(pos, 4),
            e => panic!("{e}"),
        }
        assert!(parse_symbol("z^0.5").is_err());
        assert!(parse_symbol("foo").is_err());
    }

    #[test]
    fn complex_literals() {
        let f = parse_rational("1.5-2i", tol()).unwrap();
        assert!((f.gain() - Complex64::new(1.5, -2.0)).norm() < 1e-15);
        let f = parse_rational("2e-1i*z", tol()).unwrap();
        assert!((f.gain() - Complex64::new(0.0, 0.2)).norm() < 1e-15);
    }

    #[test]
    fn printer_round_trip() {
        let e = parse_symbol("conj(z)^-2 * (z - 0.5) / B[0.5, -0.3i] + -i").unwrap();
        let printed = e.to_string();
        let again = parse_symbol(&printed).unwrap();
        assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn factored_text_round_trip() {
        let f = parse_rational("(1+2i) * (z - 0.25) * (z + 3i) / ((z - 2) * z^2)", tol()).unwrap();
        let back = parse_rational(&rational_to_expr(&f), tol()).unwrap();
        assert!(back.approx_eq(&f, 1e-14));
        let b = parse_blaschke("B[0.5, 0.1+0.2i]", tol()).unwrap();
        let back = parse_blaschke(&blaschke_to_expr(&b), tol()).unwrap();
        assert_eq!(back.zeros(), b.zeros());
    }
}
