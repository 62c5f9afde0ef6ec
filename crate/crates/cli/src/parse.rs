//! Recursive-descent parser for rational-function expressions in one
//! variable (`z` or `t`).
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' natural)?
//! base   := integer | 'z' | 't' | '(' expr ')'
//! ```
//!
//! A rational literal such as `3/4` is a quotient of two integer bases.
//! U+2212 (minus sign) is accepted wherever `-` is.

use idalg::exactnum::Field;
use idalg::polyseries::{Poly, RatFun};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("division by zero at byte {offset}")]
    DivisionByZero { offset: usize },
    #[error("literal {literal} at byte {offset} is divisible by p = {p}")]
    LiteralNotReducible { offset: usize, literal: String, p: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Byte offset of the `/` for error reporting.
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some((at, c)) = it.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'z' | 't' => Tok::Var,
            '0'..='9' => {
                let mut end = at + 1;
                while let Some(&(j, d)) = it.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = j + 1;
                    it.next();
                }
                Tok::Int(text[at..end].parse().expect("ascii digits"))
            }
            other => {
                return Err(ParseError::Syntax { offset: at, message: format!("unexpected character '{other}'") });
            }
        };
        out.push((tok, at));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, o)| o)
    }

    fn error<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.offset(), message: message.to_string() })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    let at = self.offset();
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                let Some(e) = n.to_u32() else {
                    return self.error("exponent too large");
                };
                self.pos += 1;
                Ok(Expr::Pow(Box::new(base), e))
            }
            _ => self.error("expected a natural exponent"),
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Var) => {
                self.pos += 1;
                Ok(Expr::Var)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.error("expected a number, variable or '('"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parse text into an expression tree.
pub fn parse_ast(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.error("trailing input");
    }
    Ok(e)
}

/// Evaluate an expression tree in `F(z)`.
pub fn eval<F: Field>(e: &Expr, ctx: &F::Ctx) -> Result<RatFun<F>, ParseError> {
    Ok(match e {
        Expr::Int(n) => RatFun::constant(F::from_bigint(ctx, n)),
        Expr::Var => RatFun::from_poly(Poly::x(ctx)),
        Expr::Neg(a) => -eval(a, ctx)?,
        Expr::Add(a, b) => &eval(a, ctx)? + &eval(b, ctx)?,
        Expr::Sub(a, b) => &eval(a, ctx)? - &eval(b, ctx)?,
        Expr::Mul(a, b) => &eval(a, ctx)? * &eval(b, ctx)?,
        Expr::Pow(a, k) => eval(a, ctx)?.pow(*k),
        Expr::Div(a, b, at) => {
            let den = eval(b, ctx)?;
            if den.is_zero() {
                if let Expr::Int(n) = b.as_ref() {
                    if !n.is_zero() {
                        let p = F::characteristic(ctx);
                        return Err(ParseError::LiteralNotReducible { offset: *at + 1, literal: n.to_string(), p });
                    }
                }
                return Err(ParseError::DivisionByZero { offset: *at });
            }
            eval(a, ctx)?.checked_div(&den).expect("nonzero divisor")
        }
    })
}

/// Parse and evaluate in one step.
pub fn parse_expr<F: Field>(text: &str, ctx: &F::Ctx) -> Result<RatFun<F>, ParseError> {
    eval(&parse_ast(text)?, ctx)
}
