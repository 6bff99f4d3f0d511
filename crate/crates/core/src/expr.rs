//! Small infix parser shared by every text surface: polynomial expressions,
//! basis vectors such as `e2-2*e1`, and parametric vectors such as
//! `e1 + a2*e2 + a3e3`.
//!
//! Identifiers are letters followed by digits (`a2`, `w16`, `e5`), so
//! `a2b3` reads as the product `a2*b3`. Juxtaposition multiplies; `/` only
//! divides by constants. Names `e1 … en` are reserved for basis vectors.

use num_traits::Zero;

use crate::error::ParseError;
use crate::kernel::Rational;
use crate::lie::Vector;
use crate::parametric::ParamVector;
use crate::poly::ParamPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
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
            let n: Rational = s
                .parse::<num_bigint::BigInt>()
                .map(Rational::from_integer)
                .map_err(|_| ParseError::new(0, start, "bad number"))?;
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::new(0, i, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(0, self.column(), msg)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ParamPoly, ParseError> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
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

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('('))
        )
    }

    fn term(&mut self) -> Result<ParamPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat('/') {
                let col = self.column();
                let d = self.factor()?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    Some(_) => return Err(ParseError::new(0, col, "division by zero")),
                    None => return Err(ParseError::new(0, col, "can only divide by a constant")),
                }
            } else if self.starts_factor() {
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<ParamPoly, ParseError> {
        if self.eat('-') {
            return Ok(-&self.factor()?);
        }
        let base = self.base()?;
        if self.eat('^') {
            let col = self.column();
            match self.toks.get(self.pos) {
                Some((_, Tok::Num(n))) if n.is_integer() => {
                    let e: u32 = n
                        .numer()
                        .try_into()
                        .map_err(|_| ParseError::new(0, col, "exponent too large"))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(ParseError::new(0, col, "expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<ParamPoly, ParseError> {
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                Ok(ParamPoly::constant(n))
            }
            Some((_, Tok::Ident(name))) => {
                self.pos += 1;
                Ok(ParamPoly::var(&name))
            }
            Some((_, Tok::Op('('))) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(_) => Err(self.err("expected a number, name or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a polynomial expression.
pub fn parse_poly(src: &str) -> Result<ParamPoly, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError::new(0, 0, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.chars().count(),
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

fn basis_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

/// Parses a vector whose coefficients may be polynomials in parameters,
/// e.g. `e1 + a2*e2 - (b5 + a2*b3)*e6`.
pub fn parse_param_vector(src: &str, n: usize) -> Result<ParamVector, ParseError> {
    let poly = parse_poly(src)?;
    for v in poly.variables() {
        if let Some(k) = v.strip_prefix('e').and_then(|d| d.parse::<usize>().ok()) {
            if k == 0 || k > n {
                let col = src.find(&v).unwrap_or(0);
                return Err(ParseError::new(
                    0,
                    col,
                    format!("basis vector `{v}` out of range 1..={n}"),
                ));
            }
        }
    }
    let names = basis_names(n);
    let (coeffs, rest) = poly
        .linear_split(&names)
        .ok_or_else(|| ParseError::new(0, 0, "expression is not linear in the basis vectors"))?;
    if !rest.is_zero() {
        return Err(ParseError::new(
            0,
            0,
            format!("term `{rest}` has no basis vector"),
        ));
    }
    Ok(ParamVector::new(coeffs))
}

/// Parses a vector with rational coefficients, e.g. `-3*e5+e6` or `1/2*e3`.
pub fn parse_vector(src: &str, n: usize) -> Result<Vector, ParseError> {
    let pv = parse_param_vector(src, n)?;
    pv.to_vector()
        .ok_or_else(|| ParseError::new(0, 0, format!("`{src}` has non-constant coefficients")))
}

/// Comma-separated list of vectors, e.g. `e2-2*e1, e3-e4, -3*e5+e6`. Errors
/// carry the zero-based position of the offending vector.
pub fn parse_vector_list(src: &str, n: usize) -> Result<Vec<Vector>, ParseError> {
    src.split(',')
        .enumerate()
        .map(|(i, part)| {
            parse_vector(part, n).map_err(|mut e| {
                e.item = i;
                e
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{rat, ratio};

    #[test]
    fn vectors_in_printed_notation() {
        assert_eq!(
            parse_vector("e2-2*e1", 6).unwrap(),
            Vector::from_i64(&[-2, 1, 0, 0, 0, 0])
        );
        assert_eq!(
            parse_vector("-3*e5+e6", 6).unwrap(),
            Vector::from_i64(&[0, 0, 0, 0, -3, 1])
        );
        assert_eq!(
            parse_vector("208/7 e5", 6).unwrap().coords()[4],
            ratio(208, 7)
        );
        assert_eq!(
            parse_vector("-2(e5-e6)", 6).unwrap(),
            Vector::from_i64(&[0, 0, 0, 0, -2, 2])
        );
        assert_eq!(parse_vector("0*e1", 2).unwrap(), Vector::zeros(2));
    }

    #[test]
    fn vector_errors_have_positions() {
        let e = parse_vector("e1 + e7", 6).unwrap_err();
        assert_eq!(e.column, 5);
        assert!(parse_vector("e1 + 2", 6).is_err());
        assert!(parse_vector("e1*e2", 6).is_err());
        assert!(parse_vector("a2*e1", 6).is_err());
        let e = parse_vector_list("e1, e2 +, e3", 6).unwrap_err();
        assert_eq!(e.item, 1);
        let e = parse_poly("a2 $ b3").unwrap_err();
        assert_eq!(e.column, 3);
    }

    #[test]
    fn juxtaposition_and_precedence() {
        assert_eq!(parse_poly("a2b3").unwrap(), parse_poly("a2*b3").unwrap());
        assert_eq!(
            parse_poly("-a2^2*b3").unwrap(),
            parse_poly("-(a2*a2*b3)").unwrap()
        );
        assert_eq!(parse_poly("6/4").unwrap().as_constant(), Some(ratio(3, 2)));
        assert!(parse_poly("1/a2").is_err());
        assert!(parse_poly("1/0").is_err());
        assert_eq!(parse_poly("2 - -3").unwrap().as_constant(), Some(rat(5)));
    }

    #[test]
    fn parametric_vector() {
        let v = parse_param_vector("e1 + a2e2 - (b5 + a2*b3)*e6", 6).unwrap();
        assert_eq!(v.coords()[0], ParamPoly::one());
        assert_eq!(v.coords()[1], parse_poly("a2").unwrap());
        assert_eq!(v.coords()[5], parse_poly("-b5 - a2*b3").unwrap());
    }
}
