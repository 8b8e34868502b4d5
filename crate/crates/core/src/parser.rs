//! Recursive-descent parser for curve expressions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' exponent)?
//! exponent := signed-number | '(' signed-number ('/' number)? ')'
//! atom  := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func  := sin | cos | sqrt | abs
//! ```
//!
//! The parser builds trees verbatim; the only rewrite is folding a negated
//! numeric literal into a negative constant, which keeps
//! `parse(print(e)) == e`.

use num_rational::Ratio;

use crate::expr::{Exponent, Expr, Func};
use crate::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, integer: Option<i64> },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, col });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            let mut integer = true;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                integer = false;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    integer = false;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text
                .parse()
                .map_err(|_| ParseError::new(line, col, format!("malformed number '{}'", text)))?;
            let integer = if integer { text.parse::<i64>().ok() } else { None };
            out.push(Token { tok: Tok::Num { value, integer }, col });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), col });
            continue;
        }
        return Err(ParseError::new(line, col, format!("unexpected character '{}'", c)));
    }
    out.push(Token { tok: Tok::End, col: col0 + chars.len() });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn col(&self) -> usize {
        self.toks[self.pos].col
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.line, self.col(), msg))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {}", what))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.unary()?;
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Neg(Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exp = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn signed_number(&mut self) -> Result<(f64, Option<i64>), ParseError> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num { value, integer } => {
                self.bump();
                if negative {
                    Ok((-value, integer.map(|n| -n)))
                } else {
                    Ok((value, integer))
                }
            }
            _ => self.err("exponent must be a constant number"),
        }
    }

    fn exponent(&mut self) -> Result<Exponent, ParseError> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let (num, num_int) = self.signed_number()?;
            let exp = if *self.peek() == Tok::Slash {
                self.bump();
                let col = self.col();
                let (den, den_int) = self.signed_number()?;
                if den == 0.0 {
                    return Err(ParseError::new(self.line, col, "zero denominator in exponent"));
                }
                match (num_int, den_int) {
                    (Some(n), Some(d)) => Exponent::Rational(Ratio::new(n, d)),
                    _ => Exponent::Real(num / den),
                }
            } else {
                match num_int {
                    Some(n) => Exponent::integer(n),
                    None => Exponent::Real(num),
                }
            };
            self.expect(Tok::RParen, "')' closing the exponent")?;
            Ok(exp)
        } else {
            let (v, int) = self.signed_number()?;
            Ok(match int {
                Some(n) => Exponent::integer(n),
                None => Exponent::Real(v),
            })
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num { value, .. } => {
                self.bump();
                Ok(Expr::Const(value))
            }
            Tok::Ident(name) => {
                let col = self.col();
                self.bump();
                match name.as_str() {
                    "t" => Ok(Expr::T),
                    "pi" => Ok(Expr::Pi),
                    other => match Func::from_name(other) {
                        Some(func) => {
                            self.expect(Tok::LParen, &format!("'(' after {}", other))?;
                            let arg = self.expr()?;
                            self.expect(Tok::RParen, "')'")?;
                            Ok(Expr::Call(func, Box::new(arg)))
                        }
                        None => Err(ParseError::new(
                            self.line,
                            col,
                            format!("unknown identifier '{}'", other),
                        )),
                    },
                }
            }
            Tok::LParen => {
                let open = self.col();
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(ParseError::new(
                        self.line,
                        open,
                        "unmatched parenthesis",
                    ));
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => self.err("unexpected end of expression"),
            other => self.err(format!("unexpected token {:?}", other)),
        }
    }
}

/// Parses an expression; `line` and `col` locate `src` inside a larger file
/// (both 1-based) so errors point at the right place.
pub fn parse_expr_at(src: &str, line: usize, col: usize) -> Result<Expr, ParseError> {
    let toks = lex(src, line, col)?;
    let mut p = Parser { toks, pos: 0, line };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    parse_expr_at(src, 1, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("1-2-3").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), -4.0);
        let e = parse_expr("2*3^2").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 18.0);
        let e = parse_expr("-t^2").unwrap();
        assert_eq!(e.eval(3.0).unwrap(), -9.0);
        let e = parse_expr("8/4/2").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 1.0);
    }

    #[test]
    fn rational_exponent_is_single_literal() {
        let e = parse_expr("(1+4*t^2)^(3/2)/2").unwrap();
        match &e {
            Expr::Div(lhs, _) => match &**lhs {
                Expr::Pow(_, Exponent::Rational(r)) => assert_eq!(*r, Ratio::new(3, 2)),
                other => panic!("unexpected {:?}", other),
            },
            other => panic!("unexpected {:?}", other),
        }
        assert_eq!(e.eval(0.0).unwrap(), 0.5);
    }

    #[test]
    fn negative_and_decimal_exponents() {
        assert_eq!(parse_expr("t^-1").unwrap().eval(4.0).unwrap(), 0.25);
        assert_eq!(parse_expr("t^(-1/2)").unwrap().eval(4.0).unwrap(), 0.5);
        assert_eq!(parse_expr("t^0.5").unwrap().eval(4.0).unwrap(), 2.0);
    }

    #[test]
    fn unmatched_parenthesis_points_at_opening() {
        let err = parse_expr_at("(t", 3, 8).unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.column, 8);
        assert!(err.message.contains("unmatched"));
    }

    #[test]
    fn exponent_must_be_constant() {
        assert!(parse_expr("2^t").is_err());
        assert!(parse_expr("t^(1/0)").is_err());
    }

    #[test]
    fn unknown_identifier_rejected() {
        let err = parse_expr("tan(t)").unwrap_err();
        assert!(err.message.contains("tan"));
    }

    #[test]
    fn functions_and_pi() {
        let e = parse_expr("sin(pi/2) + cos(0) + sqrt(4) + abs(-3)").unwrap();
        assert!((e.eval(0.0).unwrap() - 7.0).abs() < 1e-15);
    }

    #[test]
    fn scientific_notation() {
        assert_eq!(parse_expr("1.5e-3").unwrap(), Expr::Const(1.5e-3));
    }
}
