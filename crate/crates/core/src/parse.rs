//! Text grammar shared by every element type.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'eps' | 'h' | x<i> | y<i> | dx<i> | dy<i> | z<i>
//!         | 'br(' i ',' j ')' | 'sb(' i ',' j ')' | 'inv(' expr ')' | '(' expr ')'
//! ```
//!
//! In symbol mode `(12)` and `(1,2)` denote brackets as well.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::pbw::{Generator, Index, PBWPoly};
use crate::scalar::{CycRat, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Eps,
    H,
    Gen(Generator),
    Br(Index, Index),
    Sb(Index, Index),
    Z(Index),
    Inv(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str) -> Result<Lexer> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                s.push(chars[i].1);
                i += 1;
            }
            toks.push((Tok::Num(s), pos));
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                s.push(chars[i].1);
                i += 1;
            }
            toks.push((Tok::Ident(s), pos));
        } else if "+-*/^(),".contains(c) {
            toks.push((Tok::Sym(c), pos));
            i += 1;
        } else {
            return Err(err_at(src, pos, &format!("unexpected character '{c}'")));
        }
    }
    toks.push((Tok::End, src.len()));
    Ok(Lexer { toks })
}

fn err_at(src: &str, pos: usize, msg: &str) -> Error {
    let before = &src[..pos.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
    Error::Parse { line, col, msg: msg.to_string() }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    symbol_mode: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        let tok = match self.peek() {
            Tok::Num(s) | Tok::Ident(s) => format!(" near '{s}'"),
            Tok::Sym(c) => format!(" near '{c}'"),
            Tok::End => " at end of input".to_string(),
        };
        Err(err_at(self.src, self.here(), &format!("{msg}{tok}")))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("expected '{c}'"))
        }
    }

    fn index(&mut self) -> Result<Index> {
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                s.parse::<Index>().or_else(|_| self.fail("index out of range"))
            }
            _ => self.fail("expected an index"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == &Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == &Tok::Sym('^') {
            self.bump();
            match self.peek().clone() {
                Tok::Num(s) => {
                    self.bump();
                    let e = s.parse::<u32>().or_else(|_| self.fail("exponent out of range"))?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return self.fail("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn pair(&mut self) -> Result<(Index, Index)> {
        self.expect('(')?;
        let i = self.index()?;
        self.expect(',')?;
        let j = self.index()?;
        self.expect(')')?;
        Ok((i, j))
    }

    fn symbol_bracket(&mut self) -> Option<(Index, Index)> {
        if !self.symbol_mode || self.peek() != &Tok::Sym('(') {
            return None;
        }
        match (self.peek_at(1).clone(), self.peek_at(2).clone(), self.peek_at(3).clone(), self.peek_at(4).clone()) {
            (Tok::Num(s), Tok::Sym(')'), _, _) if s.len() == 2 => {
                let b = s.as_bytes();
                self.pos += 3;
                Some(((b[0] - b'0') as Index, (b[1] - b'0') as Index))
            }
            (Tok::Num(a), Tok::Sym(','), Tok::Num(b), Tok::Sym(')')) => {
                let (a, b) = (a.parse().ok()?, b.parse().ok()?);
                self.pos += 5;
                Some((a, b))
            }
            _ => None,
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        if let Some((i, j)) = self.symbol_bracket() {
            return Ok(Expr::Br(i, j));
        }
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                Ok(Expr::Num(s.parse().expect("digits")))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(id) => {
                let split = id.find(|c: char| c.is_ascii_digit()).unwrap_or(id.len());
                let (name, digits) = id.split_at(split);
                if !digits.is_empty() && !digits.chars().all(|c| c.is_ascii_digit()) {
                    return self.fail("malformed identifier");
                }
                let idx = || digits.parse::<Index>();
                let gen = |f: fn(Index) -> Generator| idx().map(f);
                let out = match (name, digits.is_empty()) {
                    ("eps", true) => Expr::Eps,
                    ("h", true) => Expr::H,
                    ("x", false) => Expr::Gen(gen(Generator::x).or_else(|_| self.fail("bad index"))?),
                    ("y", false) => Expr::Gen(gen(Generator::y).or_else(|_| self.fail("bad index"))?),
                    ("dx", false) => Expr::Gen(gen(Generator::dx).or_else(|_| self.fail("bad index"))?),
                    ("dy", false) => Expr::Gen(gen(Generator::dy).or_else(|_| self.fail("bad index"))?),
                    ("z", false) => Expr::Z(idx().or_else(|_| self.fail("bad index"))?),
                    ("br", true) | ("sb", true) => {
                        self.bump();
                        let (i, j) = self.pair()?;
                        return Ok(if name == "br" { Expr::Br(i, j) } else { Expr::Sb(i, j) });
                    }
                    ("inv", true) => {
                        self.bump();
                        self.expect('(')?;
                        let e = self.expr()?;
                        self.expect(')')?;
                        return Ok(Expr::Inv(Box::new(e)));
                    }
                    _ => return self.fail("unknown identifier"),
                };
                self.bump();
                Ok(out)
            }
            _ => self.fail("unexpected token"),
        }
    }
}

/// Parses text into an expression tree.
pub fn parse_expr(src: &str, symbol_mode: bool) -> Result<Expr> {
    let lx = lex(src)?;
    let mut p = Parser { src, toks: lx.toks, pos: 0, symbol_mode };
    if p.peek() == &Tok::End {
        return p.fail("empty input");
    }
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return p.fail("trailing input");
    }
    Ok(e)
}

fn invalid<T>(what: &str) -> Result<T> {
    Err(Error::Invalid(what.to_string()))
}

/// Evaluates an expression that only involves numbers, `eps` and `h`.
pub fn eval_scalar(e: &Expr) -> Result<Scalar> {
    Ok(match e {
        Expr::Num(n) => Scalar::from_bigint(n.clone()),
        Expr::Eps => Scalar::eps(),
        Expr::H => Scalar::h(),
        Expr::Add(a, b) => &eval_scalar(a)? + &eval_scalar(b)?,
        Expr::Sub(a, b) => &eval_scalar(a)? - &eval_scalar(b)?,
        Expr::Neg(a) => -eval_scalar(a)?,
        Expr::Mul(a, b) => &eval_scalar(a)? * &eval_scalar(b)?,
        Expr::Div(a, b) => eval_scalar(a)?.checked_div(&eval_scalar(b)?)?,
        Expr::Pow(a, n) => eval_scalar(a)?.pow(*n),
        _ => return invalid("not a scalar expression"),
    })
}

/// Evaluates a constant divisor, as needed for `a / 2`.
pub fn const_divisor(e: &Expr) -> Result<CycRat> {
    let s = eval_scalar(e)?;
    match s.as_const() {
        Some(c) if !c.is_zero() => Ok(c),
        Some(_) => Err(Error::DivisionByZero),
        None => Err(Error::NotInvertible(s.to_string())),
    }
}

pub fn eval_pbw(e: &Expr) -> Result<PBWPoly> {
    Ok(match e {
        Expr::Num(_) | Expr::Eps | Expr::H => PBWPoly::constant(eval_scalar(e)?),
        Expr::Gen(g) => PBWPoly::gen(*g),
        Expr::Br(i, j) => crate::bracket::bracket(*i, *j),
        Expr::Add(a, b) => &eval_pbw(a)? + &eval_pbw(b)?,
        Expr::Sub(a, b) => &eval_pbw(a)? - &eval_pbw(b)?,
        Expr::Neg(a) => -eval_pbw(a)?,
        Expr::Mul(a, b) => &eval_pbw(a)? * &eval_pbw(b)?,
        Expr::Div(a, b) => {
            let c = const_divisor(b)?;
            eval_pbw(a)?.scale(&Scalar::from_cyc(c.inv()?))
        }
        Expr::Pow(a, n) => eval_pbw(a)?.pow(*n),
        Expr::Sb(..) | Expr::Z(_) | Expr::Inv(_) => {
            return invalid("localized element where a polynomial was expected")
        }
    })
}

pub fn parse_scalar(src: &str) -> Result<Scalar> {
    eval_scalar(&parse_expr(src, false)?)
}

pub fn parse_pbw(src: &str) -> Result<PBWPoly> {
    eval_pbw(&parse_expr(src, false)?)
}

/// Rational literal helper used by printers and tests.
pub fn rational(p: i64, q: i64) -> BigRational {
    if q == 0 {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_position() {
        match parse_pbw("x1 + \n  y1 ? 3") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 6)),
            other => panic!("{other:?}"),
        }
        match parse_pbw("x1 * foo2") {
            Err(Error::Parse { msg, .. }) => assert!(msg.contains("foo2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn symbol_brackets() {
        assert_eq!(parse_expr("(12)^2", true).unwrap(), Expr::Pow(Box::new(Expr::Br(1, 2)), 2));
        assert_eq!(parse_expr("(12)", false).unwrap(), Expr::Num(BigInt::from(12)));
        assert_eq!(parse_expr("(3,14)", true).unwrap(), Expr::Br(3, 14));
    }

    #[test]
    fn malformed_bracket() {
        assert!(parse_pbw("br(1 2)").is_err());
        assert!(parse_pbw("br(1,2").is_err());
    }
}
