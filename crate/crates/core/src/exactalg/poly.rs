use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_rat, Rat};
use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals.
///
/// `coeffs[i]` is the coefficient of `x^i`. Trailing zeros are never stored,
/// so the zero polynomial is the empty vector and [`Poly::degree`] returns
/// `None` for it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds a polynomial from small integer coefficients, lowest degree first.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly::monomial(Rat::one(), 1)
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// `x - c`.
    pub fn linear_root(c: &Rat) -> Self {
        Poly::new(vec![-c.clone(), Rat::one()])
    }

    /// `s (s-1) ... (s-j+1)` as a polynomial in `s`.
    pub fn falling_factorial(j: usize) -> Self {
        let mut acc = Poly::one();
        for i in 0..j {
            acc = &acc * &Poly::linear_root(&Rat::from_integer(BigInt::from(i)));
        }
        acc
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn deg_or_neg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for zero and nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    /// Leading coefficient, zero for the zero polynomial.
    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn eval(&self, at: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// An antiderivative with zero constant term.
    pub fn integral(&self) -> Poly {
        let mut coeffs = vec![Rat::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / Rat::from_integer(BigInt::from(i + 1)));
        }
        Poly::new(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.lc();
        self.scale(&lc.recip())
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplication by `x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Taylor shift: the polynomial `p(x + c)`.
    pub fn shift(&self, c: &Rat) -> Poly {
        let mut acc = Poly::zero();
        let lin = Poly::new(vec![c.clone(), Rat::one()]);
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(a.clone());
        }
        acc
    }

    /// Exact quotient; fails if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = poly_divmod(self, d)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(poly_divmod(self, d)?.1)
    }

    /// Largest `m` such that `p^m` divides `self`; `self` must be nonzero and
    /// `p` nonconstant.
    pub fn multiplicity_of(&self, p: &Poly) -> usize {
        debug_assert!(!self.is_zero() && !p.is_constant());
        let mut m = 0;
        let mut cur = self.clone();
        loop {
            match poly_divmod(&cur, p) {
                Ok((q, r)) if r.is_zero() => {
                    cur = q;
                    m += 1;
                }
                _ => return m,
            }
        }
    }

    /// Writes `self = c * g` with `g` having coprime integer coefficients and a
    /// positive leading coefficient. Returns `(c, g)`.
    pub fn primitive_integer(&self) -> (Rat, Vec<BigInt>) {
        if self.is_zero() {
            return (Rat::zero(), Vec::new());
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
            .collect();
        let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(|c| c.is_negative()) {
            content = -content;
        }
        let prim = ints.iter().map(|c| c / &content).collect();
        (Rat::new(content, den), prim)
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Poly {
        Poly::new(coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }
}

/// Euclidean division `a = q*b + r` with `deg r < deg b`.
///
/// Runs as a pseudo-division on the integer primitive parts, so the only
/// rational normalisation happens once per coefficient at the end.
pub fn poly_divmod(a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let db = b.degree().ok_or(Error::DivisionByZero)?;
    let Some(da) = a.degree() else {
        return Ok((Poly::zero(), Poly::zero()));
    };
    if da < db {
        return Ok((Poly::zero(), a.clone()));
    }
    let (ca, ai) = a.primitive_integer();
    let (cb, bi) = b.primitive_integer();
    let lb = bi[db].clone();
    // lb^(da-db+1) A = Q B + R, built top-down with q_k scaled by lb^k
    let steps = da - db + 1;
    let mut rem = ai;
    let mut quot = vec![BigInt::zero(); steps];
    for k in (0..steps).rev() {
        let c = rem.pop().unwrap();
        for v in rem.iter_mut() {
            *v *= &lb;
        }
        for q in quot[k + 1..].iter_mut() {
            *q *= &lb;
        }
        if !c.is_zero() {
            for (i, bc) in bi[..db].iter().enumerate() {
                rem[k + i] -= &c * bc;
            }
        }
        quot[k] = c;
    }
    let scale = Rat::from_integer(num_traits::pow(lb, steps));
    let qf = &ca / (&cb * &scale);
    let rf = &ca / &scale;
    let q = Poly::new(quot.into_iter().map(|c| Rat::from_integer(c) * &qf).collect());
    let r = Poly::new(rem.into_iter().map(|c| Rat::from_integer(c) * &rf).collect());
    Ok((q, r))
}

/// Monic greatest common divisor, by a primitive remainder sequence over the
/// integers so that no rational normalisation happens inside the loop.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroInput("gcd of two zero polynomials"));
    }
    let (mut r0, mut r1) = (a.primitive_integer().1, b.primitive_integer().1);
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    if r1.is_empty() {
        return Ok(Poly::from_ints(&r0).monic());
    }
    if r1.len() == 1 {
        return Ok(Poly::one());
    }
    Ok(Poly::from_ints(&super::modp::modular_gcd(&r0, &r1)).monic())
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn poly_ext_gcd(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroInput("gcd of two zero polynomials"));
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (q, r) = poly_divmod(&r0, &r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = r0.lc().recip();
    Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
}

/// Monic least common multiple of two nonzero polynomials.
pub fn poly_lcm(a: &Poly, b: &Poly) -> Result<Poly> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput("lcm with the zero polynomial"));
    }
    let g = poly_gcd(a, b)?;
    Ok((a * &b.div_exact(&g)?).monic())
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn inverse_mod(a: &Poly, m: &Poly) -> Result<Option<Poly>> {
    let (g, s, _) = poly_ext_gcd(a, m)?;
    if !g.is_one() {
        return Ok(None);
    }
    Ok(Some(s.rem(m)?))
}

/// Solves `s*a + t*b = c` for `s` with `deg s < deg b`, assuming
/// `gcd(a, b) | c`. Returns `(s, t)`.
pub(crate) fn poly_diophantine(a: &Poly, b: &Poly, c: &Poly) -> Result<(Poly, Poly)> {
    let (g, s, t) = poly_ext_gcd(a, b)?;
    let (k, r) = poly_divmod(c, &g)?;
    if !r.is_zero() {
        return Err(Error::Internal("diophantine equation has no solution".into()));
    }
    let s = &s * &k;
    let t = &t * &k;
    // Reduce s modulo b/g and move the quotient into t.
    let bg = b.div_exact(&g)?;
    let ag = a.div_exact(&g)?;
    let (q, s_red) = poly_divmod(&s, &bg)?;
    let t_red = &t + &(&q * &ag);
    Ok((s_red, t_red))
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(out)
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Renders in the operator input grammar, highest degree first, using `var`
/// as the variable name.
pub(crate) fn fmt_poly_in(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let pow = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if k == 0 {
            out.push_str(&fmt_rat(&mag));
        } else if mag.is_one() {
            out.push_str(&pow);
        } else {
            out.push_str(&fmt_rat(&mag));
            out.push('*');
            out.push_str(&pow);
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_poly_in(self, "x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
