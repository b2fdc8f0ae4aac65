//! A small expression language for scalars and forms.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '^' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)*
//! atom   := INT | 'i' | IDENT | '(' expr ')'
//! ```
//!
//! `*` and `^` both multiply; on forms this is the wedge product. A `^`
//! followed by an integer literal is a power instead, so `t1^2` is `t1·t1`
//! and `x1^2` vanishes for a generator `x1`. Division is only by nonzero
//! numeric constants.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::exterior::{Algebra, Form};
use crate::scalar::{GaussianRational, PolyScalar, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at offset {offset}")]
    UnexpectedChar { ch: char, offset: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token `{token}` at offset {offset}")]
    UnexpectedToken { token: String, offset: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("division by a non-constant or zero expression")]
    BadDivisor,
    #[error("expected a scalar but found a form")]
    NotScalar,
    #[error("exponent too large")]
    ExponentOverflow,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (offset, ch) = chars[k];
        match ch {
            c if c.is_whitespace() => {
                k += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, offset)),
            '-' => out.push((Tok::Minus, offset)),
            '*' => out.push((Tok::Star, offset)),
            '^' => out.push((Tok::Caret, offset)),
            '/' => out.push((Tok::Slash, offset)),
            '(' => out.push((Tok::LParen, offset)),
            ')' => out.push((Tok::RParen, offset)),
            c if c.is_ascii_digit() => {
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                let digits: String = chars[start..k].iter().map(|(_, c)| c).collect();
                out.push((Tok::Int(digits.parse().expect("ascii digits")), offset));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = k;
                while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                    k += 1;
                }
                let name: String = chars[start..k].iter().map(|(_, c)| c).collect();
                out.push((Tok::Ident(name), offset));
                continue;
            }
            ch => return Err(ParseError::UnexpectedChar { ch, offset }),
        }
        k += 1;
    }
    Ok(out)
}

#[derive(Clone)]
enum Value {
    Scalar(PolyScalar),
    Form(Form),
}

impl Value {
    fn into_form(self, alg: &Arc<Algebra>) -> Form {
        match self {
            Value::Scalar(s) => Form::scalar(alg, s),
            Value::Form(f) => f,
        }
    }

    fn add(self, rhs: Value, alg: Option<&Arc<Algebra>>) -> Value {
        match (self, rhs, alg) {
            (Value::Scalar(a), Value::Scalar(b), _) => Value::Scalar(a + b),
            (a, b, Some(alg)) => Value::Form(a.into_form(alg) + b.into_form(alg)),
            _ => unreachable!("forms only arise with an algebra"),
        }
    }

    fn mul(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a * b),
            (Value::Scalar(a), Value::Form(f)) | (Value::Form(f), Value::Scalar(a)) => {
                Value::Form(f.scale(&a))
            }
            (Value::Form(a), Value::Form(b)) => Value::Form(a * b),
        }
    }

    fn neg(self) -> Value {
        match self {
            Value::Scalar(a) => Value::Scalar(-a),
            Value::Form(f) => Value::Form(-f),
        }
    }

    fn pow(self, k: u32) -> Value {
        match self {
            Value::Scalar(a) => Value::Scalar(a.pow(k)),
            Value::Form(f) => Value::Form(f.power(k)),
        }
    }
}

enum Symbols<'a> {
    Strict(&'a VarTable),
    Free,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alg: Option<&'a Arc<Algebra>>,
    symbols: Symbols<'a>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn unexpected(&self) -> ParseError {
        match self.toks.get(self.pos) {
            None => ParseError::UnexpectedEnd,
            Some((t, offset)) => ParseError::UnexpectedToken {
                token: format!("{t:?}"),
                offset: *offset,
            },
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = acc.add(rhs, self.alg);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = acc.add(rhs.neg(), self.alg);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) | Some(Tok::Caret) => {
                    self.pos += 1;
                    acc = acc.mul(self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = match self.unary()? {
                        Value::Scalar(s) => s.as_constant().and_then(|c| c.inv()),
                        Value::Form(_) => None,
                    }
                    .ok_or(ParseError::BadDivisor)?;
                    acc = acc.mul(Value::Scalar(PolyScalar::constant(d)));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            let Some((Tok::Int(k), _)) = self.toks.get(self.pos + 1) else {
                break;
            };
            let k: u32 = k.try_into().map_err(|_| ParseError::ExponentOverflow)?;
            self.pos += 2;
            base = base.pow(k);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(Value::Scalar(PolyScalar::constant(
                BigRational::from_integer(n).into(),
            ))),
            Some(Tok::Ident(name)) => self.symbol(&name),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(v),
                    _ => {
                        self.pos -= 1;
                        Err(self.unexpected())
                    }
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected())
            }
        }
    }

    fn symbol(&self, name: &str) -> Result<Value, ParseError> {
        if name == "i" {
            return Ok(Value::Scalar(PolyScalar::constant(GaussianRational::i())));
        }
        if let Some(alg) = self.alg {
            if let Ok(f) = Form::generator(alg, name) {
                return Ok(Value::Form(f));
            }
        }
        match self.symbols {
            Symbols::Strict(table) if table.lookup(name).is_none() => {
                Err(ParseError::UnknownSymbol(name.to_string()))
            }
            _ => Ok(Value::Scalar(PolyScalar::var_name(name))),
        }
    }
}

fn run(src: &str, alg: Option<&Arc<Algebra>>, symbols: Symbols<'_>) -> Result<Value, ParseError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        alg,
        symbols,
    };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(v)
}

/// Parses a form over `alg`; identifiers resolve to generators first, then
/// to the algebra's declared scalar variables.
pub fn parse_form(src: &str, alg: &Arc<Algebra>) -> Result<Form, ParseError> {
    Ok(run(src, Some(alg), Symbols::Strict(alg.vars()))?.into_form(alg))
}

/// Parses a scalar whose variables must be declared in `table`.
pub fn parse_scalar(src: &str, table: &VarTable) -> Result<PolyScalar, ParseError> {
    match run(src, None, Symbols::Strict(table))? {
        Value::Scalar(s) => Ok(s),
        Value::Form(_) => Err(ParseError::NotScalar),
    }
}

/// Parses a scalar, accepting any identifier as a variable.
pub fn parse_scalar_free(src: &str) -> Result<PolyScalar, ParseError> {
    match run(src, None, Symbols::Free)? {
        Value::Scalar(s) => Ok(s),
        Value::Form(_) => Err(ParseError::NotScalar),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Monomial;
    use proptest::prelude::*;

    fn alg() -> Arc<Algebra> {
        let mut vars = VarTable::new();
        vars.declare_pairs([("t1", "tb1"), ("t2", "tb2")]).unwrap();
        Algebra::builder()
            .vars(vars)
            .pair("x1", "xb1")
            .pair("x2", "xb2")
            .pair("x3", "xb3")
            .build()
            .unwrap()
    }

    #[test]
    fn powers_bind_tighter_than_products() {
        let s = parse_scalar_free("2*t^2").unwrap();
        assert_eq!(
            s,
            PolyScalar::from_int(2) * PolyScalar::var_name("t").pow(2)
        );
        let s = parse_scalar_free("-3/4").unwrap();
        assert_eq!(s, PolyScalar::constant(GaussianRational::ratio(-3, 4)));
    }

    #[test]
    fn caret_is_wedge_between_generators() {
        let a = alg();
        let f = parse_form("x2^x1", &a).unwrap();
        assert_eq!(f, -Form::product(&a, &["x1", "x2"]).unwrap());
        assert!(parse_form("x1^2", &a).unwrap().is_zero());
    }

    #[test]
    fn coefficient_expressions() {
        let a = alg();
        let f = parse_form("(1 + t1)*(x1^x2 + i*x3^xb1)", &a).unwrap();
        let c = PolyScalar::one() + PolyScalar::var_name("t1");
        let expected = Form::product(&a, &["x1", "x2"]).unwrap().scale(&c)
            + Form::product(&a, &["x3", "xb1"])
                .unwrap()
                .scale(&(c * PolyScalar::constant(GaussianRational::i())));
        assert_eq!(f, expected);
    }

    #[test]
    fn errors() {
        let a = alg();
        assert_eq!(
            parse_form("x1^y9", &a).unwrap_err(),
            ParseError::UnknownSymbol("y9".into())
        );
        assert_eq!(parse_form("x1/t1", &a).unwrap_err(), ParseError::BadDivisor);
        assert_eq!(parse_form("x1/0", &a).unwrap_err(), ParseError::BadDivisor);
        assert!(matches!(
            parse_form("(x1", &a),
            Err(ParseError::UnexpectedEnd)
        ));
        assert!(matches!(
            parse_form("x1 x2", &a),
            Err(ParseError::UnexpectedToken { .. })
        ));
        assert!(matches!(
            parse_form("x1 $", &a),
            Err(ParseError::UnexpectedChar { ch: '$', .. })
        ));
        assert_eq!(
            parse_scalar("x1", a.vars()).unwrap_err(),
            ParseError::UnknownSymbol("x1".into())
        );
    }

    fn arb_form() -> impl Strategy<Value = Form> {
        let a = alg();
        let n = a.len();
        let coeff = (-5i64..=5, -3i64..=3, 1i64..=4, 0u32..3, 0u32..2);
        prop::collection::vec((0u128..(1 << n), coeff), 0..6).prop_map(move |terms| {
            let mut f = Form::zero(&a);
            for (bits, (re, im, den, e1, e2)) in terms {
                let c = PolyScalar::constant(GaussianRational::new(
                    BigRational::new(re.into(), den.into()),
                    BigRational::from_integer(im.into()),
                )) * PolyScalar::var_name("t1").pow(e1)
                    * PolyScalar::var_name("tb2").pow(e2);
                f.add_term(Monomial::from_bits(bits), c);
            }
            f
        })
    }

    proptest! {
        #[test]
        fn rendering_round_trips(f in arb_form()) {
            let text = f.to_string();
            prop_assert_eq!(parse_form(&text, f.algebra()).unwrap(), f, "{}", text);
        }
    }
}
