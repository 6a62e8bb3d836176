//! Text expression language for coordinate-algebra polynomials and exact
//! scalars.
//!
//! Grammar:
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*      division by scalar factors only
//! factor := atom ('^' nat)?
//! atom   := 'X0'|'X1'|'X2'|'X3'|'Z'|'Zb'|'tau2'|'i'|integer|qpow|'(' expr ')'
//! qpow   := 'q' ('^' qexp)?                 qexp: integer or '(p/2)'
//! ```
//!
//! X1 and X2 are desugared to (Z + Zb)/2 and (Z - Zb)/(2i). Rationals are
//! written with the division operator, so `3/2` and `(q - q^-1)/(q + q^-1)`
//! need no special lexical cases. Everything the scalar and polynomial
//! printers emit parses back to the same value.

use std::str::FromStr;

use crate::coordalg::{CoordGen, NCPoly};
use crate::error::ParseError;
use crate::scalars::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Lexer {
    fn new(input: &str) -> Result<Lexer, ParseError> {
        let bytes = input.as_bytes();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\n' | '\r' => i += 1,
                '+' => {
                    tokens.push((Token::Plus, i));
                    i += 1;
                }
                '-' => {
                    tokens.push((Token::Minus, i));
                    i += 1;
                }
                '*' => {
                    tokens.push((Token::Star, i));
                    i += 1;
                }
                '/' => {
                    tokens.push((Token::Slash, i));
                    i += 1;
                }
                '^' => {
                    tokens.push((Token::Caret, i));
                    i += 1;
                }
                '(' => {
                    tokens.push((Token::LParen, i));
                    i += 1;
                }
                ')' => {
                    tokens.push((Token::RParen, i));
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    tokens.push((Token::Int(input[start..i].to_string()), start));
                }
                'a'..='z' | 'A'..='Z' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                        i += 1;
                    }
                    tokens.push((Token::Ident(input[start..i].to_string()), start));
                }
                _ => {
                    return Err(ParseError::Syntax {
                        position: i,
                        message: format!("unexpected character `{}`", c),
                    })
                }
            }
        }
        Ok(Lexer { tokens, pos: 0 })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn position(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or_else(|| self.tokens.last().map(|&(_, p)| p + 1).unwrap_or(0))
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token) -> Result<(), ParseError> {
        let pos = self.position();
        match self.next() {
            Some(tok) if tok == t => Ok(()),
            other => Err(ParseError::Syntax {
                position: pos,
                message: format!("expected {:?}, found {:?}", t, other),
            }),
        }
    }
}

struct Parser {
    lexer: Lexer,
}

impl Parser {
    fn parse_expr(&mut self) -> Result<NCPoly, ParseError> {
        let mut negate = false;
        if self.lexer.peek() == Some(&Token::Minus) {
            self.lexer.next();
            negate = true;
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.lexer.peek() {
                Some(Token::Plus) => {
                    self.lexer.next();
                    let t = self.parse_term()?;
                    acc = acc.add(&t);
                }
                Some(Token::Minus) => {
                    self.lexer.next();
                    let t = self.parse_term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<NCPoly, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.lexer.peek() {
                Some(Token::Star) => {
                    self.lexer.next();
                    let f = self.parse_factor()?;
                    acc = acc.mul(&f);
                }
                Some(Token::Slash) => {
                    let pos = self.lexer.position();
                    self.lexer.next();
                    let f = self.parse_factor()?;
                    let divisor =
                        as_scalar(&f).ok_or(ParseError::BadDivisor { position: pos })?;
                    let inv = divisor
                        .inv()
                        .map_err(|_| ParseError::BadDivisor { position: pos })?;
                    acc = acc.scale(&inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<NCPoly, ParseError> {
        let atom = self.parse_atom()?;
        if self.lexer.peek() == Some(&Token::Caret) {
            self.lexer.next();
            let pos = self.lexer.position();
            match self.lexer.next() {
                Some(Token::Int(d)) => {
                    let e: u32 = d.parse().map_err(|_| ParseError::Syntax {
                        position: pos,
                        message: "exponent too large".to_string(),
                    })?;
                    let mut acc = NCPoly::one();
                    for _ in 0..e {
                        acc = acc.mul(&atom);
                    }
                    return Ok(acc);
                }
                other => {
                    return Err(ParseError::Syntax {
                        position: pos,
                        message: format!(
                            "expected a nonnegative integer exponent, found {:?}",
                            other
                        ),
                    })
                }
            }
        }
        Ok(atom)
    }

    fn parse_atom(&mut self) -> Result<NCPoly, ParseError> {
        let pos = self.lexer.position();
        match self.lexer.next() {
            Some(Token::LParen) => {
                let inner = self.parse_expr()?;
                self.lexer.expect(Token::RParen)?;
                Ok(inner)
            }
            Some(Token::Int(d)) => {
                let n: i64 = d.parse().map_err(|_| ParseError::Syntax {
                    position: pos,
                    message: "integer literal too large".to_string(),
                })?;
                Ok(NCPoly::scalar(Scalar::from_int(n)))
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "X0" => Ok(NCPoly::gen(CoordGen::X0)),
                "X3" => Ok(NCPoly::gen(CoordGen::X3)),
                "Z" => Ok(NCPoly::gen(CoordGen::Z)),
                "Zb" => Ok(NCPoly::gen(CoordGen::Zb)),
                "tau2" => Ok(NCPoly::gen(CoordGen::Tau2)),
                "X1" => {
                    // X1 = (Z + Zb)/2
                    let half = Scalar::from_ratio(1, 2);
                    Ok(NCPoly::gen(CoordGen::Z)
                        .add(&NCPoly::gen(CoordGen::Zb))
                        .scale(&half))
                }
                "X2" => {
                    // X2 = (Z - Zb)/(2i) = -i/2 Z + i/2 Zb
                    let half_i = &Scalar::i() * &Scalar::from_ratio(1, 2);
                    Ok(NCPoly::gen(CoordGen::Z)
                        .scale(&-&half_i)
                        .add(&NCPoly::gen(CoordGen::Zb).scale(&half_i)))
                }
                "i" => Ok(NCPoly::scalar(Scalar::i())),
                "q" => {
                    let half_exp = self.parse_q_exponent()?;
                    Ok(NCPoly::scalar(Scalar::q_half_pow(half_exp)))
                }
                _ => Err(ParseError::UnknownSymbol {
                    symbol: name,
                    position: pos,
                }),
            },
            other => Err(ParseError::Syntax {
                position: pos,
                message: format!("expected an atom, found {:?}", other),
            }),
        }
    }

    /// After the `q` identifier: an optional caret exponent, returned as a
    /// doubled (half-integer) power so q^(p/2) is exact.
    fn parse_q_exponent(&mut self) -> Result<i64, ParseError> {
        if self.lexer.peek() != Some(&Token::Caret) {
            return Ok(2); // bare q = q^1
        }
        self.lexer.next();
        let pos = self.lexer.position();
        match self.lexer.next() {
            Some(Token::Int(d)) => {
                let e: i64 = d.parse().map_err(|_| ParseError::Syntax {
                    position: pos,
                    message: "exponent too large".to_string(),
                })?;
                Ok(2 * e)
            }
            Some(Token::Minus) => {
                let pos2 = self.lexer.position();
                match self.lexer.next() {
                    Some(Token::Int(d)) => {
                        let e: i64 = d.parse().map_err(|_| ParseError::Syntax {
                            position: pos2,
                            message: "exponent too large".to_string(),
                        })?;
                        Ok(-2 * e)
                    }
                    other => Err(ParseError::Syntax {
                        position: pos2,
                        message: format!("expected an integer after `-`, found {:?}", other),
                    }),
                }
            }
            Some(Token::LParen) => {
                let mut negate = false;
                if self.lexer.peek() == Some(&Token::Minus) {
                    self.lexer.next();
                    negate = true;
                }
                let pos2 = self.lexer.position();
                let numer: i64 = match self.lexer.next() {
                    Some(Token::Int(d)) => d.parse().map_err(|_| ParseError::Syntax {
                        position: pos2,
                        message: "exponent too large".to_string(),
                    })?,
                    other => {
                        return Err(ParseError::Syntax {
                            position: pos2,
                            message: format!("expected an integer, found {:?}", other),
                        })
                    }
                };
                let mut denom = 1i64;
                if self.lexer.peek() == Some(&Token::Slash) {
                    self.lexer.next();
                    let pos3 = self.lexer.position();
                    denom = match self.lexer.next() {
                        Some(Token::Int(d)) => d.parse().map_err(|_| ParseError::Syntax {
                            position: pos3,
                            message: "exponent too large".to_string(),
                        })?,
                        other => {
                            return Err(ParseError::Syntax {
                                position: pos3,
                                message: format!("expected an integer, found {:?}", other),
                            })
                        }
                    };
                }
                self.lexer.expect(Token::RParen)?;
                let doubled = match denom {
                    1 => 2 * numer,
                    2 => numer,
                    _ => {
                        return Err(ParseError::Syntax {
                            position: pos,
                            message: "q exponents must be integers or half-integers"
                                .to_string(),
                        })
                    }
                };
                Ok(if negate { -doubled } else { doubled })
            }
            other => Err(ParseError::Syntax {
                position: pos,
                message: format!("expected a q exponent, found {:?}", other),
            }),
        }
    }
}

fn as_scalar(p: &NCPoly) -> Option<Scalar> {
    if p.is_zero() {
        return Some(Scalar::zero());
    }
    if p.num_terms() == 1 {
        let (w, c) = p.terms().next().unwrap();
        if w.is_empty() {
            return Some(c.clone());
        }
    }
    None
}

/// Parse a coordinate-algebra polynomial in the entered (unreduced) order.
pub fn parse_ncpoly(input: &str) -> Result<NCPoly, ParseError> {
    let lexer = Lexer::new(input)?;
    let mut parser = Parser { lexer };
    let result = parser.parse_expr()?;
    if parser.lexer.peek().is_some() {
        return Err(ParseError::Syntax {
            position: parser.lexer.position(),
            message: "trailing input".to_string(),
        });
    }
    Ok(result)
}

/// Parse an exact scalar: an expression with no coordinate generators.
pub fn parse_scalar(input: &str) -> Result<Scalar, ParseError> {
    let p = parse_ncpoly(input)?;
    as_scalar(&p).ok_or(ParseError::Syntax {
        position: 0,
        message: "expression contains coordinate generators".to_string(),
    })
}

impl FromStr for NCPoly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ncpoly(s)
    }
}

impl FromStr for Scalar {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordalg::RewriteSystem;

    #[test]
    fn parses_two_term_relation() {
        let p = parse_ncpoly("X3*Z - q^2*Z*X3").unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&vec![CoordGen::X3, CoordGen::Z]), Scalar::one());
        assert_eq!(p.coeff(&vec![CoordGen::Z, CoordGen::X3]), -Scalar::q_pow(2));
    }

    #[test]
    fn parses_generator_power() {
        let p = parse_ncpoly("Z^2").unwrap();
        assert_eq!(p.coeff(&vec![CoordGen::Z, CoordGen::Z]), Scalar::one());
        assert_eq!(p.num_terms(), 1);
    }

    #[test]
    fn unknown_symbol_is_reported() {
        match parse_ncpoly("X5") {
            Err(ParseError::UnknownSymbol { symbol, .. }) => assert_eq!(symbol, "X5"),
            other => panic!("expected unknown-symbol error, got {:?}", other),
        }
    }

    #[test]
    fn syntax_error_carries_position() {
        // The error points just past the dangling operator.
        match parse_ncpoly("X3 + ") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected syntax error, got {:?}", other),
        }
    }

    #[test]
    fn x1_x2_desugar() {
        // X1^2 + X2^2 = (Z Zb + Zb Z)/2 after expansion.
        let p = parse_ncpoly("X1*X1 + X2*X2").unwrap();
        let half = Scalar::from_ratio(1, 2);
        assert_eq!(p.coeff(&vec![CoordGen::Z, CoordGen::Zb]), half);
        assert_eq!(p.coeff(&vec![CoordGen::Zb, CoordGen::Z]), half);
        assert!(p.coeff(&vec![CoordGen::Z, CoordGen::Z]).is_zero());
    }

    #[test]
    fn scalar_division_strings() {
        let s = parse_scalar("(q - q^-1)/(q + q^-1)").unwrap();
        let expect = &(&Scalar::q_pow(1) - &Scalar::q_pow(-1)) / &Scalar::big_q();
        assert_eq!(s, expect);
        assert_eq!(parse_scalar("3/2").unwrap(), Scalar::from_ratio(3, 2));
    }

    #[test]
    fn division_by_generator_rejected() {
        assert!(matches!(
            parse_ncpoly("X0/Z"),
            Err(ParseError::BadDivisor { .. })
        ));
        assert!(matches!(
            parse_ncpoly("X0/0"),
            Err(ParseError::BadDivisor { .. })
        ));
    }

    #[test]
    fn q_half_powers() {
        assert_eq!(parse_scalar("q^(1/2)").unwrap(), Scalar::q_half_pow(1));
        assert_eq!(parse_scalar("q^(-3/2)").unwrap(), Scalar::q_half_pow(-3));
        assert_eq!(parse_scalar("q^-1").unwrap(), Scalar::q_pow(-1));
        assert_eq!(parse_scalar("q").unwrap(), Scalar::q_pow(1));
        assert_eq!(parse_scalar("q^(2)").unwrap(), Scalar::q_pow(2));
    }

    #[test]
    fn scalar_display_round_trips() {
        let cases = [
            -Scalar::q_half_pow(-3),
            &(&Scalar::q_pow(1) - &Scalar::q_pow(-1)) / &Scalar::big_q(),
            &Scalar::i() * &Scalar::q_half_pow(1),
            Scalar::from_ratio(-3, 2),
            Scalar::zero(),
            &Scalar::big_q() + &(&Scalar::i() * &Scalar::from_ratio(2, 3)),
        ];
        for x in cases {
            let text = x.to_string();
            assert_eq!(parse_scalar(&text).unwrap(), x, "round trip of `{}`", text);
        }
    }

    #[test]
    fn ncpoly_display_round_trips() {
        let sys = RewriteSystem::standard();
        let p = parse_ncpoly("Z*Zb - Zb*Z").unwrap();
        let nf = sys.normal_order(&p);
        let text = nf.to_string();
        let reparsed = parse_ncpoly(&text).unwrap();
        assert_eq!(reparsed, nf, "round trip of `{}`", text);
    }

    #[test]
    fn entered_order_is_preserved() {
        // Parsing does not normal-order: X3*Z stays X3*Z.
        let p = parse_ncpoly("X3*Z").unwrap();
        assert_eq!(p.coeff(&vec![CoordGen::X3, CoordGen::Z]), Scalar::one());
    }
}
