//! Text syntax for operators and rational functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := base ('^' digits)?
//! base   := 'x' | 'D' | digits | '(' expr ')'
//! ```
//!
//! Products are taken in the operator ring, so `D*x` is `x*D + 1`. Division
//! is only by nonzero expressions of order zero and multiplies on the right
//! by the inverse. `Display` on [`OreOp`], [`RatFun`] and [`Poly`] prints
//! text this parser reads back to the same value.

use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rat};
use crate::ore::{ore_mul, OreOp};
use crate::ratfun::RatFun;
use num_bigint::BigInt;

pub const MAX_EXPONENT: usize = 256;
pub const MAX_NESTING: usize = 128;
/// Guards against inputs whose expansion would be enormous.
pub const MAX_ORDER: usize = 64;
pub const MAX_DEGREE: usize = 1024;
/// Bound on order times coefficient degree of any intermediate result.
pub const MAX_SIZE: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    X,
    D,
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            'x' => Tok::X,
            'D' => Tok::D,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().unwrap()), start));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((tok, i));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<OreOp> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<OreOp> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    acc = checked_mul(&acc, &rhs, pos)?;
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    let inv = match rhs.order() {
                        Some(0) => rhs.coeff(0).inv()?,
                        None => {
                            return Err(Error::Parse {
                                pos,
                                msg: "division by zero".into(),
                            })
                        }
                        Some(_) => {
                            return Err(Error::Parse {
                                pos,
                                msg: "division by an expression involving D".into(),
                            })
                        }
                    };
                    acc = checked_mul(&acc, &OreOp::from_ratfun(inv), pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<OreOp> {
        match self.peek() {
            Tok::Minus | Tok::Plus => {
                let neg = self.bump() == Tok::Minus;
                self.enter()?;
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(if neg { -inner } else { inner })
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<OreOp> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let e = match self.bump() {
            Tok::Int(n) => n,
            Tok::Minus => {
                return Err(Error::Parse {
                    pos,
                    msg: "negative exponents are not allowed".into(),
                })
            }
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: "expected a nonnegative integer exponent".into(),
                })
            }
        };
        let e = usize::try_from(&e)
            .ok()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| Error::Parse {
                pos,
                msg: format!("exponent larger than {MAX_EXPONENT}"),
            })?;
        let (ob, db) = size(&base);
        if e > 1 && !within_limits(ob.saturating_mul(e), db.saturating_mul(e)) {
            return Err(too_large(pos));
        }
        let mut acc = OreOp::one();
        for _ in 0..e {
            acc = checked_mul(&acc, &base, pos)?;
        }
        Ok(acc)
    }

    fn base(&mut self) -> Result<OreOp> {
        let pos = self.pos();
        match self.bump() {
            Tok::X => Ok(OreOp::from_ratfun(RatFun::x())),
            Tok::D => Ok(OreOp::d()),
            Tok::Int(n) => Ok(OreOp::from_ratfun(RatFun::constant(Rat::from_integer(n)))),
            Tok::LParen => {
                self.enter()?;
                let inner = self.expr()?;
                self.depth -= 1;
                if *self.peek() != Tok::RParen {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(Error::Parse {
                pos,
                msg: "unexpected end of input".into(),
            }),
            t => Err(Error::Parse {
                pos,
                msg: format!("unexpected {}", describe(&t)),
            }),
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return self.err(format!("nesting deeper than {MAX_NESTING}"));
        }
        Ok(())
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::X => "'x'",
        Tok::D => "'D'",
        Tok::Int(_) => "number",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Slash => "'/'",
        Tok::Caret => "'^'",
        Tok::LParen => "'('",
        Tok::RParen => "')'",
        Tok::End => "end of input",
    }
}

fn size(op: &OreOp) -> (usize, usize) {
    let deg = op
        .coeffs()
        .iter()
        .map(|c| c.num().degree().unwrap_or(0).max(c.den().degree().unwrap_or(0)))
        .max()
        .unwrap_or(0);
    (op.order().unwrap_or(0), deg)
}

/// Multiplies after a cheap worst-case size estimate: each `D` moved past a
/// coefficient can raise the power of its denominator by one.
fn checked_mul(a: &OreOp, b: &OreOp, pos: usize) -> Result<OreOp> {
    let (oa, da) = size(a);
    let (ob, db) = size(b);
    let order = oa + ob;
    let degree = da.saturating_add(db.saturating_mul(oa + 1));
    if !within_limits(order, degree) {
        return Err(too_large(pos));
    }
    Ok(ore_mul(a, b))
}

fn within_limits(order: usize, degree: usize) -> bool {
    order <= MAX_ORDER && degree <= MAX_DEGREE && order.max(1).saturating_mul(degree.max(1)) <= MAX_SIZE
}

fn too_large(pos: usize) -> Error {
    Error::Parse {
        pos,
        msg: "expression too large to expand".into(),
    }
}

/// Parses an operator.
pub fn parse_operator(text: &str) -> Result<OreOp> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        depth: 0,
    };
    let op = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err(format!("unexpected {}", describe(p.peek())));
    }
    Ok(op)
}

/// Parses a rational function of `x` (an operator of order zero).
pub fn parse_ratfun(text: &str) -> Result<RatFun> {
    let op = parse_operator(text)?;
    match op.order() {
        None => Ok(RatFun::zero()),
        Some(0) => Ok(op.coeff(0)),
        Some(_) => Err(Error::Parse {
            pos: text.find('D').unwrap_or(0),
            msg: "expected a rational function of x, found D".into(),
        }),
    }
}

/// Parses a polynomial in `x`.
pub fn parse_poly(text: &str) -> Result<Poly> {
    let f = parse_ratfun(text)?;
    match f.as_polynomial() {
        Some(p) => Ok(p.clone()),
        None => Err(Error::Parse {
            pos: text.find('/').unwrap_or(0),
            msg: "expected a polynomial in x".into(),
        }),
    }
}

/// Parses a polynomial in `D` with constant coefficients, returned as a
/// polynomial in one variable.
pub fn parse_d_poly(text: &str) -> Result<Poly> {
    let op = parse_operator(text)?;
    let mut coeffs = Vec::with_capacity(op.coeffs().len());
    for c in op.coeffs() {
        match c.as_constant() {
            Some(k) => coeffs.push(k),
            None => {
                return Err(Error::Parse {
                    pos: text.find('x').unwrap_or(0),
                    msg: "expected constant coefficients in D".into(),
                })
            }
        }
    }
    Ok(Poly::new(coeffs))
}

/// Renders a polynomial in `D`.
pub fn fmt_d_poly(p: &Poly) -> String {
    fmt_poly_in(p, "D")
}

/// Renders a polynomial in an arbitrary variable, e.g. `s` for indicial
/// polynomials.
pub fn fmt_poly_in(p: &Poly, var: &str) -> String {
    crate::exactalg::poly::fmt_poly_in(p, var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rint};

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn grammar_examples() {
        let airy = parse_operator("D^3 - x*D").unwrap();
        assert_eq!(airy, OreOp::from_polys(vec![p(&[]), p(&[0, -1]), p(&[]), p(&[1])]));
        let dx = parse_operator("D*x").unwrap();
        assert_eq!(dx, OreOp::from_polys(vec![p(&[1]), p(&[0, 1])]));
        let op = parse_operator("(x^2+1)*D^2 + (1/2)*D").unwrap();
        assert_eq!(op.order(), Some(2));
        assert_eq!(op.lc(), RatFun::from_poly(p(&[1, 0, 1])));
        assert_eq!(op.coeff(1), RatFun::constant(rat(1, 2)));
    }

    #[test]
    fn rational_functions() {
        let f = parse_ratfun("-1/(2*x) - 1/(2*(x+1))").unwrap();
        let expect = RatFun::new(p(&[-1, -2]), p(&[0, 2, 2])).unwrap();
        assert_eq!(f, expect);
        assert_eq!(
            parse_poly("x^2 - 3/4").unwrap(),
            Poly::new(vec![rat(-3, 4), rint(0), rint(1)])
        );
        assert!(parse_poly("1/x").is_err());
        assert!(parse_ratfun("D + 1").is_err());
        assert_eq!(parse_d_poly("D^3 + D").unwrap(), p(&[0, 1, 0, 1]));
        assert!(parse_d_poly("x*D").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("D +* x", 3),
            ("x^-1", 2),
            ("(x + 1", 6),
            ("x $ 1", 2),
            ("D/D", 2),
            ("x/0", 2),
            ("x y", 2),
        ];
        for (text, pos) in cases {
            match parse_operator(text) {
                Err(Error::Parse { pos: got, .. }) => assert_eq!(got, pos, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(parse_operator("x^257").is_err());
        assert!(parse_operator("").is_err());
        let deep = format!("{}x{}", "(".repeat(200), ")".repeat(200));
        assert!(parse_operator(&deep).is_err());
        assert!(parse_operator("(D+x)^200").is_err());
        assert!(parse_operator("(D+x)^40").is_err());
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "D^3 - x*D",
            "-D^3 + (x^2 + 1)*D - 3/(2*x^2)",
            "(x+1)/(x^2-2)*D^2 - 3/4*x^2/(x+1)*D + 5",
            "x*D + 1 - x",
            "(1-x)*D",
            "-x/(x+1)",
            "0",
        ] {
            let op = parse_operator(text).unwrap();
            let printed = op.to_string();
            assert_eq!(parse_operator(&printed).unwrap(), op, "{text} -> {printed}");
        }
    }
}
