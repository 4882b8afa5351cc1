//! A small expression language over a fixed algebra.
//!
//! Atoms: integers, the scalars `q` and `v`, lattice monomials `b[2,-1]`,
//! Hecke symbols `T[s1.1 s1.2]` (a word of simple generators, multiplied left
//! to right), sign symbols `J[1 3]` (1-based block indices), automorphism
//! symbols `phi[0,1]` (one residue per lattice coordinate), and central
//! idempotents `p[1,2]` (one 1-based residue class per coordinate).  They
//! combine with `+`, `-`, `*`, unary minus, integer powers `^n`, and
//! parentheses.  List entries are separated by commas or whitespace, so the
//! basis symbols in the engine's own rendering parse back unchanged.
//!
//! `q`, `v` and `b[..]` are units and accept negative powers; nothing else
//! does.

use std::sync::Arc;

use hecke_core::arith::VLaurent;
use hecke_core::hecke::{AlgebraCtx, HeckeElem, HeckeError};
use hecke_core::weyl::{RElem, SimpleGen};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("parse error at offset {at}: {message}")]
    Parse { at: usize, message: String },
    #[error("indices in {symbol}[..] are 1-based; got {value}")]
    BadIndex { symbol: &'static str, value: i64 },
    #[error("exponent {0} out of the supported range")]
    ExponentRange(i64),
    #[error("negative power of a non-invertible expression")]
    NegativePower,
    #[error(transparent)]
    Algebra(#[from] HeckeError),
}

/// Abstract syntax of an expression; all symbol data is kept verbatim and
/// only checked against the algebra during evaluation.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Q,
    V,
    B(Vec<i64>),
    T(Vec<(usize, usize)>),
    J(Vec<i64>),
    Phi(Vec<i64>),
    Proj(Vec<i64>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

// --- lexer ---

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(i64),
    Name(String),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Caret,
    Comma,
    Dot,
}

fn lex(input: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '[' => Token::LBrack,
            ']' => Token::RBrack,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '^' => Token::Caret,
            ',' => Token::Comma,
            '.' => Token::Dot,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &input[start..i];
                let n: i64 = text.parse().map_err(|_| ExprError::Parse {
                    at: start,
                    message: format!("integer '{text}' is too large"),
                })?;
                out.push((start, Token::Int(n)));
                continue;
            }
            'a'..='z' | 'A'..='Z' => {
                // A name like `s1` ends before its digits: generator entries
                // are lexed as a letter followed by numbers and dots.
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                out.push((start, Token::Name(input[start..i].to_string())));
                continue;
            }
            other => {
                return Err(ExprError::Parse {
                    at: i,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

// --- parser ---

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Token, what: &str) -> Result<(), ExprError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.fail(format!("expected {what}")))
        }
    }

    fn fail(&self, message: String) -> ExprError {
        ExprError::Parse {
            at: self.at(),
            message,
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.primary()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let k = self.signed_int()?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match self.advance() {
            Some(Token::Int(n)) => Ok(Expr::Int(n)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(&Token::RParen, "')'")?;
                Ok(inner)
            }
            Some(Token::Name(name)) => match name.as_str() {
                "q" => Ok(Expr::Q),
                "v" => Ok(Expr::V),
                "b" => Ok(Expr::B(self.int_list()?)),
                "phi" => Ok(Expr::Phi(self.int_list()?)),
                "J" => Ok(Expr::J(self.int_list()?)),
                "p" => Ok(Expr::Proj(self.int_list()?)),
                "T" => Ok(Expr::T(self.gen_list()?)),
                other => Err(self.fail(format!("unknown symbol '{other}'"))),
            },
            _ => Err(self.fail("expected a value".to_string())),
        }
    }

    fn signed_int(&mut self) -> Result<i64, ExprError> {
        let negative = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.advance() {
            Some(Token::Int(n)) => Ok(if negative { -n } else { n }),
            _ => Err(self.fail("expected an integer".to_string())),
        }
    }

    /// `[ n (, n)* ]` with commas optional; may be empty.
    fn int_list(&mut self) -> Result<Vec<i64>, ExprError> {
        self.expect(&Token::LBrack, "'['")?;
        let mut entries = Vec::new();
        loop {
            match self.peek() {
                Some(Token::RBrack) => {
                    self.pos += 1;
                    return Ok(entries);
                }
                Some(Token::Comma) => {
                    self.pos += 1;
                }
                Some(Token::Minus) | Some(Token::Int(_)) => {
                    entries.push(self.signed_int()?);
                }
                _ => return Err(self.fail("expected an integer or ']'".to_string())),
            }
        }
    }

    /// `[ s<int>.<int> ... ]` or `[ <int>,<int> ... ]`: a word of simple
    /// generators, each written either as the engine renders it (`s2.1`) or
    /// as a bare block/index pair (`2,1`).
    fn gen_list(&mut self) -> Result<Vec<(usize, usize)>, ExprError> {
        self.expect(&Token::LBrack, "'['")?;
        let mut word = Vec::new();
        loop {
            match self.peek() {
                Some(Token::RBrack) => {
                    self.pos += 1;
                    return Ok(word);
                }
                Some(Token::Comma) => {
                    self.pos += 1;
                }
                Some(Token::Name(n)) if n == "s" => {
                    self.pos += 1;
                    let block = self.gen_number("block")?;
                    self.expect(&Token::Dot, "'.'")?;
                    let j = self.gen_number("generator")?;
                    word.push((block, j));
                }
                Some(Token::Int(_)) => {
                    let block = self.gen_number("block")?;
                    if self.peek() == Some(&Token::Comma) {
                        self.pos += 1;
                    }
                    let j = self.gen_number("generator")?;
                    word.push((block, j));
                }
                _ => return Err(self.fail("expected 's<block>.<j>', '<block>,<j>' or ']'".to_string())),
            }
        }
    }

    fn gen_number(&mut self, what: &str) -> Result<usize, ExprError> {
        match self.advance() {
            Some(Token::Int(n)) if n >= 1 => Ok(n as usize),
            _ => Err(self.fail(format!("expected a 1-based {what} number"))),
        }
    }
}

pub fn parse(input: &str) -> Result<Expr, ExprError> {
    let tokens = lex(input)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        len: input.len(),
    };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.fail("trailing input".to_string()));
    }
    Ok(e)
}

// --- evaluation ---

const MAX_POWER: i64 = 64;

fn int_elem(ctx: &Arc<AlgebraCtx>, n: i64) -> HeckeElem {
    HeckeElem::one(ctx).scale_laurent(&VLaurent::from_int(n))
}

pub fn eval(expr: &Expr, ctx: &Arc<AlgebraCtx>) -> Result<HeckeElem, ExprError> {
    match expr {
        Expr::Int(n) => Ok(int_elem(ctx, *n)),
        Expr::Q => Ok(HeckeElem::one(ctx).scale_laurent(&VLaurent::q_pow(1))),
        Expr::V => Ok(HeckeElem::one(ctx).scale_laurent(&VLaurent::v_pow(1))),
        Expr::B(exps) => Ok(HeckeElem::b_monomial(ctx, &lattice_exps(exps)?)?),
        Expr::T(word) => {
            let mut acc = HeckeElem::one(ctx);
            for &(block, j) in word {
                let s = SimpleGen { block: block - 1, j };
                acc = acc.mul(&HeckeElem::t_gen(ctx, &s)?);
            }
            Ok(acc)
        }
        Expr::J(blocks) => {
            let mut set = Vec::new();
            for &b in blocks {
                if b < 1 {
                    return Err(ExprError::BadIndex {
                        symbol: "J",
                        value: b,
                    });
                }
                set.push(b as usize - 1);
            }
            Ok(HeckeElem::j_elem(ctx, &RElem::from_blocks(set))?)
        }
        Expr::Phi(residues) => {
            let chi = ctx.character(residues)?;
            Ok(HeckeElem::phi(ctx, &chi)?)
        }
        Expr::Proj(indices) => {
            let mut idx = Vec::new();
            for &j in indices {
                if j < 1 {
                    return Err(ExprError::BadIndex {
                        symbol: "p",
                        value: j,
                    });
                }
                idx.push(j as u32);
            }
            Ok(HeckeElem::block_projection(ctx, &idx)?)
        }
        Expr::Neg(inner) => Ok(eval(inner, ctx)?.neg()),
        Expr::Add(a, b) => Ok(eval(a, ctx)?.add(&eval(b, ctx)?)),
        Expr::Sub(a, b) => Ok(eval(a, ctx)?.sub(&eval(b, ctx)?)),
        Expr::Mul(a, b) => Ok(eval(a, ctx)?.mul(&eval(b, ctx)?)),
        Expr::Pow(base, k) => pow(base, *k, ctx),
    }
}

fn lattice_exps(exps: &[i64]) -> Result<Vec<i32>, ExprError> {
    exps.iter()
        .map(|&e| {
            i32::try_from(e).map_err(|_| ExprError::ExponentRange(e))
        })
        .collect()
}

fn pow(base: &Expr, k: i64, ctx: &Arc<AlgebraCtx>) -> Result<HeckeElem, ExprError> {
    if k.abs() > MAX_POWER {
        return Err(ExprError::ExponentRange(k));
    }
    if k < 0 {
        // Only the units of the coefficient ring invert syntactically.
        return match base {
            Expr::Q => Ok(HeckeElem::one(ctx).scale_laurent(&VLaurent::q_pow(k))),
            Expr::V => Ok(HeckeElem::one(ctx).scale_laurent(&VLaurent::v_pow(k))),
            Expr::B(exps) => {
                let scaled: Vec<i64> = exps.iter().map(|e| e * k).collect();
                eval(&Expr::B(scaled), ctx)
            }
            _ => Err(ExprError::NegativePower),
        };
    }
    match base {
        // Keep monomial powers exact in one step.
        Expr::Q => Ok(HeckeElem::one(ctx).scale_laurent(&VLaurent::q_pow(k))),
        Expr::V => Ok(HeckeElem::one(ctx).scale_laurent(&VLaurent::v_pow(k))),
        Expr::B(exps) => {
            let scaled: Vec<i64> = exps.iter().map(|e| e * k).collect();
            eval(&Expr::B(scaled), ctx)
        }
        _ => {
            let b = eval(base, ctx)?;
            let mut acc = HeckeElem::one(ctx);
            for _ in 0..k {
                acc = acc.mul(&b);
            }
            Ok(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hecke_core::langlands::{
        classify_block, BlockInput, GroupType, HDescriptor, RhoDescriptor, SelfDuality,
    };

    fn ctx() -> Arc<AlgebraCtx> {
        // One self-dual block of multiplicity 2 and twist order 2.
        let b = BlockInput {
            rho: RhoDescriptor {
                label: "rho".into(),
                k: 1,
                t: 2,
                self_dual: SelfDuality::Orthogonal,
            },
            d: 2,
            a_override: None,
            a_minus_override: None,
        };
        let h = HDescriptor {
            trivial: true,
            jord: Vec::new(),
            tau_outer_invariant: true,
        };
        let c = classify_block(GroupType::Symplectic, &b, &h).expect("classifies");
        AlgebraCtx::new(&[c])
    }

    #[test]
    fn parses_and_evaluates_atoms() {
        let ctx = ctx();
        let t = eval(&parse("T[s1.1]").unwrap(), &ctx).unwrap();
        let sq = eval(&parse("T[s1.1]^2").unwrap(), &ctx).unwrap();
        assert_eq!(sq, t.mul(&t));
        let b = eval(&parse("b[2,-2]").unwrap(), &ctx).unwrap();
        assert_eq!(b, HeckeElem::b_monomial(&ctx, &[2, -2]).unwrap());
        let phi = eval(&parse("phi[1 0]").unwrap(), &ctx).unwrap();
        assert_eq!(phi.num_terms(), 1);
    }

    #[test]
    fn numeric_generator_pairs_match_rendered_form() {
        let ctx = ctx();
        let rendered = eval(&parse("T[s1.1 s1.2]").unwrap(), &ctx).unwrap();
        let numeric = eval(&parse("T[1,1 1,2]").unwrap(), &ctx).unwrap();
        assert_eq!(rendered, numeric);
        let single = eval(&parse("T[1,1]").unwrap(), &ctx).unwrap();
        assert_eq!(single, eval(&parse("T[s1.1]").unwrap(), &ctx).unwrap());
    }

    #[test]
    fn quadratic_relation_in_rendered_form() {
        // The engine's own rendering of T^2 parses back to the same element.
        let ctx = ctx();
        let sq = eval(&parse("T[s1.1]*T[s1.1]").unwrap(), &ctx).unwrap();
        let roundtrip = eval(&parse(&sq.render()).unwrap(), &ctx).unwrap();
        assert_eq!(sq, roundtrip);
    }

    #[test]
    fn precedence_and_units() {
        let ctx = ctx();
        let e = eval(&parse("1 + 2 * 3").unwrap(), &ctx).unwrap();
        assert_eq!(e, int_elem(&ctx, 7));
        let q = eval(&parse("q^-1 * q").unwrap(), &ctx).unwrap();
        assert_eq!(q, HeckeElem::one(&ctx));
        let b = eval(&parse("b[2,0]^-1").unwrap(), &ctx).unwrap();
        assert_eq!(b, HeckeElem::b_monomial(&ctx, &[-2, 0]).unwrap());
        assert!(matches!(
            eval(&parse("T[s1.1]^-1").unwrap(), &ctx),
            Err(ExprError::NegativePower)
        ));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert!(matches!(
            parse("q + #"),
            Err(ExprError::Parse { at: 4, .. })
        ));
        assert!(parse("T[s1.1").is_err());
        assert!(parse("b[1,2] extra").is_err());
    }

    #[test]
    fn unknown_generator_is_rejected() {
        let ctx = ctx();
        let e = parse("T[s3.1]").unwrap();
        assert!(matches!(
            eval(&e, &ctx),
            Err(ExprError::Algebra(HeckeError::UnknownGenerator { .. }))
        ));
    }
}
