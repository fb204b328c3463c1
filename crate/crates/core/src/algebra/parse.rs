//! A small expression language for algebra elements.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := postfix ('*' postfix)*
//! postfix := atom ('^' ('*' | integer))*
//! atom    := 'a' | 'b' | number | number 'i' | 'i' | '(' expr ')'
//! ```
//!
//! `x^*` is the star of `x`. Products are formal; callers normalize.

use num_complex::Complex64;

use super::{AlgebraElement, Generator};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Imaginary(f64),
    Gen(Generator),
    Star,
    Plus,
    Minus,
    Caret,
    Open,
    Close,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let token = match c {
            '*' => Token::Star,
            '+' => Token::Plus,
            '-' => Token::Minus,
            '^' => Token::Caret,
            '(' => Token::Open,
            ')' => Token::Close,
            'a' => Token::Gen(Generator::A),
            'b' => Token::Gen(Generator::B),
            'i' => Token::Imaginary(1.0),
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let value: f64 = src[start..i]
                    .parse()
                    .map_err(|_| err(start, format!("bad number '{}'", &src[start..i])))?;
                if i < bytes.len() && bytes[i] == b'i' {
                    i += 1;
                    out.push((start, Token::Imaginary(value)));
                } else {
                    out.push((start, Token::Number(value)));
                }
                continue;
            }
            other => return Err(err(start, format!("unexpected character '{other}'"))),
        };
        out.push((start, token));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<AlgebraElement> {
        let mut negate = false;
        match self.peek() {
            Some(Token::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Token::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.scale(Complex64::new(-1.0, 0.0));
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<AlgebraElement> {
        let mut acc = self.postfix()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = acc.concat(&self.postfix()?);
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<AlgebraElement> {
        let mut x = self.atom()?;
        while self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let at = self.offset();
            match self.bump() {
                Some(Token::Star) => x = x.star_formal(),
                Some(Token::Number(n)) if n.fract() == 0.0 && (0.0..=64.0).contains(&n) => {
                    let mut p = AlgebraElement::one();
                    for _ in 0..n as usize {
                        p = p.concat(&x);
                    }
                    x = p;
                }
                _ => {
                    return Err(err(
                        at,
                        "expected '*' or a small non-negative integer after '^'",
                    ))
                }
            }
        }
        Ok(x)
    }

    fn atom(&mut self) -> Result<AlgebraElement> {
        let at = self.offset();
        match self.bump() {
            Some(Token::Gen(g)) => Ok(AlgebraElement::generator(g)),
            Some(Token::Number(v)) => Ok(AlgebraElement::scalar(Complex64::new(v, 0.0))),
            Some(Token::Imaginary(v)) => Ok(AlgebraElement::scalar(Complex64::new(0.0, v))),
            Some(Token::Open) => {
                let inner = self.expr()?;
                let close = self.offset();
                match self.bump() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(err(close, "expected ')'")),
                }
            }
            Some(t) => Err(err(at, format!("unexpected token {t:?}"))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

/// Parses an expression such as `2*a^* * b - (1+0.5i)*b^2` into its formal
/// (not normalized) element.
pub fn parse_element(src: &str) -> Result<AlgebraElement> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: src.len(),
    };
    let x = parser.expr()?;
    if parser.pos < parser.tokens.len() {
        return Err(err(parser.offset(), "trailing input"));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn generators_and_star() {
        assert_eq!(parse_element("a").unwrap(), AlgebraElement::generator(A));
        assert_eq!(
            parse_element("a^*").unwrap(),
            AlgebraElement::generator(AStar)
        );
        assert_eq!(parse_element(" b ").unwrap(), AlgebraElement::generator(B));
        assert_eq!(
            parse_element("(a*b)^*").unwrap(),
            AlgebraElement::monomial(c(1.0, 0.0), vec![B, AStar])
        );
    }

    #[test]
    fn coefficients_and_sums() {
        let x = parse_element("2*a^* * b - (1+0.5i)*b^2 + i").unwrap();
        assert_eq!(x.coefficient(&[AStar, B]), c(2.0, 0.0));
        assert_eq!(x.coefficient(&[B, B]), c(-1.0, -0.5));
        assert_eq!(x.coefficient(&[]), c(0.0, 1.0));
        assert_eq!(x.len(), 3);

        let y = parse_element("-3i*a").unwrap();
        assert_eq!(y.coefficient(&[A]), c(0.0, -3.0));
        let z = parse_element("1e-1*b").unwrap();
        assert_eq!(z.coefficient(&[B]), c(0.1, 0.0));
    }

    #[test]
    fn star_conjugates_coefficients() {
        let x = parse_element("(2i*a)^*").unwrap();
        assert_eq!(x.coefficient(&[AStar]), c(0.0, -2.0));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse_element(""),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            parse_element("a + c"),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(matches!(
            parse_element("(a"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            parse_element("a b"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(parse_element("a^x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_element("a^1.5"), Err(Error::Parse { .. })));
    }
}
