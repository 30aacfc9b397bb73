//! The operator ring `Q(x)<D>` with the commutation rule `D*f = f*D + f'`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{binomial, poly_divmod, poly_gcd, poly_lcm, Poly, Rat};
use crate::ratfun::RatFun;

/// `sum a_i D^i` with rational-function coefficients; the leading coefficient
/// is nonzero unless the operator is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct OreOp {
    coeffs: Vec<RatFun>,
}

impl OreOp {
    pub fn new(mut coeffs: Vec<RatFun>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OreOp { coeffs }
    }

    pub fn zero() -> Self {
        OreOp { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        OreOp::from_ratfun(RatFun::one())
    }

    /// The derivation `D`.
    pub fn d() -> Self {
        OreOp::new(vec![RatFun::zero(), RatFun::one()])
    }

    /// `D^k`.
    pub fn d_pow(k: usize) -> Self {
        let mut coeffs = vec![RatFun::zero(); k + 1];
        coeffs[k] = RatFun::one();
        OreOp { coeffs }
    }

    /// Multiplication by `f`, an operator of order zero.
    pub fn from_ratfun(f: RatFun) -> Self {
        OreOp::new(vec![f])
    }

    /// `D + f`.
    pub fn first_order(f: RatFun) -> Self {
        OreOp::new(vec![f, RatFun::one()])
    }

    pub fn from_polys(coeffs: Vec<Poly>) -> Self {
        OreOp::new(coeffs.into_iter().map(RatFun::from_poly).collect())
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn lc(&self) -> RatFun {
        self.coeffs.last().cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn has_polynomial_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_polynomial())
    }

    /// Left multiplication by `f`, i.e. `f * self`.
    pub fn scale_left(&self, f: &RatFun) -> OreOp {
        OreOp::new(self.coeffs.iter().map(|c| f * c).collect())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Result<OreOp> {
        if self.is_zero() {
            return Err(Error::ZeroInput("monic form of the zero operator"));
        }
        let inv = self.lc().inv()?;
        Ok(self.scale_left(&inv))
    }

    pub fn pow(&self, e: usize) -> OreOp {
        (0..e).fold(OreOp::one(), |acc, _| ore_mul(&acc, self))
    }
}

/// The noncommutative product `a * b`.
pub fn ore_mul(a: &OreOp, b: &OreOp) -> OreOp {
    let (Some(na), Some(nb)) = (a.order(), b.order()) else {
        return OreOp::zero();
    };
    let mut out = vec![RatFun::zero(); na + nb + 1];
    for (j, bj) in b.coeffs.iter().enumerate() {
        if bj.is_zero() {
            continue;
        }
        // D^i * b_j = sum_k C(i,k) b_j^(k) D^(i-k)
        let mut derivs = vec![bj.clone()];
        for _ in 0..na {
            let next = derivs.last().unwrap().derivative();
            derivs.push(next);
        }
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (k, dk) in derivs.iter().enumerate().take(i + 1) {
                if dk.is_zero() {
                    continue;
                }
                let term = (ai * dk).scale(&binomial(i, k));
                let slot = &mut out[i - k + j];
                *slot = &*slot + &term;
            }
        }
    }
    OreOp::new(out)
}

/// The adjoint `L* = sum (-D)^i a_i`.
pub fn adjoint(l: &OreOp) -> Result<OreOp> {
    let Some(n) = l.order() else {
        return Err(Error::ZeroInput("adjoint of the zero operator"));
    };
    let mut out = vec![RatFun::zero(); n + 1];
    for (i, ai) in l.coeffs.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
        // D^i a_i = sum_k C(i,k) a_i^(k) D^(i-k)
        let mut dk = ai.clone();
        for k in 0..=i {
            if !dk.is_zero() {
                let term = dk.scale(&(&sign * binomial(i, k)));
                out[i - k] = &out[i - k] + &term;
            }
            if k < i {
                dk = dk.derivative();
            }
        }
    }
    Ok(OreOp::new(out))
}

/// `L(f) = sum a_i f^(i)`.
pub fn apply(l: &OreOp, f: &RatFun) -> RatFun {
    let mut acc = RatFun::zero();
    let mut d = f.clone();
    for (i, ai) in l.coeffs.iter().enumerate() {
        if i > 0 {
            d = d.derivative();
        }
        if !ai.is_zero() && !d.is_zero() {
            acc = &acc + &(ai * &d);
        }
    }
    acc
}

/// Returns `(d, d*L)` where `d` is the monic lcm of the coefficient
/// denominators, the least-degree monic polynomial making `d*L` polynomial.
pub fn clear_denominators(l: &OreOp) -> Result<(Poly, OreOp)> {
    if l.is_zero() {
        return Err(Error::ZeroInput("clearing denominators of the zero operator"));
    }
    let mut d = Poly::one();
    for c in &l.coeffs {
        if !c.is_zero() {
            d = poly_lcm(&d, c.den())?;
        }
    }
    let df = RatFun::from_poly(d.clone());
    Ok((d, l.scale_left(&df)))
}

/// Leading-term data of `P(x^s)` at infinity: `P(x^s) = ind(s) x^(s + sigma) + ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinityData {
    /// Polynomial in `s`.
    pub indicial: Poly,
    pub sigma: i64,
}

/// Indicial polynomial and degree shift of `P` at infinity.
///
/// With `a_j = lambda_j x^(e_j) (1 + O(1/x))`, the term `a_j D^j` sends `x^s`
/// to `lambda_j s(s-1)...(s-j+1) x^(s + e_j - j) + ...`, so `sigma` is the
/// largest `e_j - j` and the indicial polynomial sums the falling factorials
/// attaining it. Polynomial coefficients are the usual case; rational ones are
/// handled the same way.
pub fn infinity_data(p: &OreOp) -> Result<InfinityData> {
    if p.is_zero() {
        return Err(Error::ZeroInput("indicial data of the zero operator"));
    }
    let terms: Vec<(usize, i64, Rat)> = p
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| {
            let e = c.num().deg_or_neg() - c.den().deg_or_neg();
            (j, e - j as i64, c.num().lc())
        })
        .collect();
    let sigma = terms.iter().map(|t| t.1).max().unwrap();
    let mut indicial = Poly::zero();
    for (j, _, lam) in terms.iter().filter(|t| t.1 == sigma) {
        indicial = &indicial + &Poly::falling_factorial(*j).scale(lam);
    }
    Ok(InfinityData { indicial, sigma })
}

/// Local indicial data of `P` at the roots of a monic square-free block `p`,
/// computed in `Q[x]/(p)` without adjoining roots.
///
/// At a root `a` of `p`, `P((x-a)^s) = e(s) (x-a)^(s+tau) (1 + ...)`. The
/// coefficients of `e` live in `Q(a)`; writing them in the basis
/// `1, a, ..., a^(deg p - 1)` gives one polynomial in `s` per basis element.
/// For blocks of degree above one, `e` is only determined up to a unit
/// `w(a)`, which changes neither the common roots of the components nor
/// separability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockIndicial {
    pub block: Poly,
    pub tau: i64,
    /// `e(s) = sum_k a^k components[k](s)`, up to a unit for nonlinear blocks.
    pub components: Vec<Poly>,
}

impl BlockIndicial {
    /// The polynomial whose roots are exactly the common roots of every
    /// component: their monic gcd.
    pub fn common_part(&self) -> Poly {
        let mut g = Poly::zero();
        for c in self.components.iter().filter(|c| !c.is_zero()) {
            g = poly_gcd(&g, c).expect("nonzero component");
        }
        g
    }

    /// True when `e(s) = w(a) r(s)` for a rational polynomial `r` and a `w`
    /// vanishing at no root of the block, so the roots of `e` (and the shift)
    /// are the same whichever root `a` is taken.
    pub fn is_separable(&self) -> bool {
        let r = self.common_part();
        if self.components.iter().any(|c| !c.is_zero() && c.degree() != r.degree()) {
            return false;
        }
        let w = Poly::new(
            self.components
                .iter()
                .map(|c| if c.is_zero() { Rat::zero() } else { c.lc() / r.lc() })
                .collect(),
        );
        !w.is_zero() && poly_gcd(&w, &self.block).is_ok_and(|g| g.is_one())
    }
}

/// See [`BlockIndicial`]. Fails with `unsupported-field` when `p` is shown to
/// be reducible in a way that changes the local data between its roots.
pub fn block_indicial(op: &OreOp, p: &Poly) -> Result<BlockIndicial> {
    if op.is_zero() {
        return Err(Error::ZeroInput("indicial data of the zero operator"));
    }
    let dp = p.derivative();
    let dp_mod = dp.rem(p)?;
    let leading = |q: &Poly| -> Result<(i64, Poly)> {
        let mut v = 0;
        let mut rest = q.clone();
        loop {
            let (quo, r) = poly_divmod(&rest, p)?;
            if !r.is_zero() {
                break;
            }
            rest = quo;
            v += 1;
        }
        let mut lead = rest.rem(p)?;
        for _ in 0..v {
            lead = (&lead * &dp_mod).rem(p)?;
        }
        Ok((v as i64, lead))
    };
    let split = || {
        Error::UnsupportedField(format!(
            "local analysis at {p}: the block splits into factors with different local data"
        ))
    };
    // (j, order, numerator lead, denominator lead)
    let mut raw = Vec::new();
    for (j, c) in op.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (vn, ln) = leading(c.num())?;
        let (vd, ld) = leading(c.den())?;
        if !poly_gcd(&ln, p)?.is_one() {
            return Err(split());
        }
        raw.push((j, vn - vd - j as i64, ln, ld));
    }
    // lead_j = ln_j / ld_j; multiplying every lead by the unit prod ld_k
    // keeps the common part and separability, and needs no inversion. Linear
    // blocks divide by the (constant) product so that e(s) comes out exact.
    let mut prefix = vec![Poly::one()];
    for (_, _, _, ld) in &raw {
        let next = (prefix.last().unwrap() * ld).rem(p)?;
        prefix.push(next);
    }
    let unit = prefix.last().unwrap().clone();
    if !poly_gcd(&unit, p)?.is_one() {
        return Err(split());
    }
    let mut suffix = Poly::one();
    let mut terms = vec![(0, 0, Poly::zero()); raw.len()];
    for (k, (j, ord, ln, ld)) in raw.iter().enumerate().rev() {
        let others = (&prefix[k] * &suffix).rem(p)?;
        terms[k] = (*j, *ord, (ln * &others).rem(p)?);
        suffix = (&suffix * ld).rem(p)?;
    }
    if p.degree() == Some(1) {
        let inv = unit.coeff(0).recip();
        for t in terms.iter_mut() {
            t.2 = t.2.scale(&inv);
        }
    }
    let tau = terms.iter().map(|t| t.1).min().unwrap();
    let dim = p.degree().unwrap_or(0).max(1);
    let mut components = vec![Poly::zero(); dim];
    for (j, _, lead) in terms.iter().filter(|t| t.1 == tau) {
        let ff = Poly::falling_factorial(*j);
        for (k, comp) in components.iter_mut().enumerate() {
            let c = lead.coeff(k);
            if !c.is_zero() {
                *comp = &*comp + &ff.scale(&c);
            }
        }
    }
    Ok(BlockIndicial {
        block: p.clone(),
        tau,
        components,
    })
}

/// The indicial polynomial `e(s)` of `P` at the rational point `c`.
pub fn indicial_at_point(op: &OreOp, c: &Rat) -> Result<Poly> {
    let lin = Poly::linear_root(c);
    Ok(block_indicial(op, &lin)?.components.swap_remove(0))
}

impl Add<&OreOp> for &OreOp {
    type Output = OreOp;
    fn add(self, rhs: &OreOp) -> OreOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        OreOp::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub<&OreOp> for &OreOp {
    type Output = OreOp;
    fn sub(self, rhs: &OreOp) -> OreOp {
        self + &(-rhs)
    }
}

impl Neg for &OreOp {
    type Output = OreOp;
    fn neg(self) -> OreOp {
        OreOp {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&OreOp> for &OreOp {
    type Output = OreOp;
    fn mul(self, rhs: &OreOp) -> OreOp {
        ore_mul(self, rhs)
    }
}

impl Add<OreOp> for OreOp {
    type Output = OreOp;
    fn add(self, rhs: OreOp) -> OreOp {
        &self + &rhs
    }
}

impl Sub<OreOp> for OreOp {
    type Output = OreOp;
    fn sub(self, rhs: OreOp) -> OreOp {
        &self - &rhs
    }
}

impl Mul<OreOp> for OreOp {
    type Output = OreOp;
    fn mul(self, rhs: OreOp) -> OreOp {
        ore_mul(&self, &rhs)
    }
}

impl Neg for OreOp {
    type Output = OreOp;
    fn neg(self) -> OreOp {
        -&self
    }
}

fn d_power(i: usize) -> String {
    if i == 1 {
        "D".to_string()
    } else {
        format!("D^{i}")
    }
}

/// Splits a rendered coefficient into `(negative, magnitude)` when the sign
/// can be pulled out front without changing the parse.
fn split_sign(s: String) -> (bool, String) {
    match s.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, s),
    }
}

impl fmt::Display for OreOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, body) = if i == 0 {
                split_sign(c.to_string())
            } else if let Some(k) = c.as_constant().filter(|k| k.is_one() || (-k).is_one()) {
                (!k.is_one(), d_power(i))
            } else if c.is_polynomial() && c.num().term_count() > 1 {
                (false, format!("({})*{}", c, d_power(i)))
            } else {
                let (neg, mag) = split_sign(c.to_string());
                (neg, format!("{mag}*{}", d_power(i)))
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for OreOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OreOp({self})")
    }
}
