//! Reduced rational functions and their local data.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{
    is_negative_integer, poly_divmod, poly_gcd, refine_factors, squarefree_factor, Certainty, Poly, Rat,
};

/// `num/den` with `gcd(num, den) = 1` and `den` monic. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFun::zero());
        }
        let g = poly_gcd(&num, &den)?;
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let lc = den.lc().recip();
        Ok(RatFun {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        RatFun::from_poly(Poly::x())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RatFun) -> Result<RatFun> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn derivative(&self) -> RatFun {
        if self.den.is_one() {
            return RatFun::from_poly(self.num.derivative());
        }
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFun::new(num, &self.den * &self.den).expect("nonzero denominator")
    }

    /// Value at `c`, or `None` at a pole.
    pub fn eval(&self, c: &Rat) -> Option<Rat> {
        let d = self.den.eval(c);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(c) / d)
    }

    pub fn pow(&self, e: u32) -> RatFun {
        RatFun {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// The logarithmic derivative `p'/p` of a nonzero polynomial.
    pub fn log_derivative(p: &Poly) -> Result<RatFun> {
        RatFun::new(p.derivative(), p.clone())
    }
}

impl Add<&RatFun> for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFun::new(num, &self.den * &rhs.den).unwrap()
    }
}

impl Sub<&RatFun> for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul<&RatFun> for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFun::from_poly(&self.num * &rhs.num);
        }
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: &RatFun) -> RatFun {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}

fn fmt_operand(p: &Poly) -> String {
    if p.term_count() == 1 {
        p.to_string()
    } else {
        format!("({p})")
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        // a single-term numerator like -3/4*x^2 reads correctly left to right
        write!(f, "{}/{}", fmt_operand(&self.num), fmt_operand(&self.den))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

// ---------------------------------------------------------------------------
// Local data

fn leading_zero_count(p: &Poly) -> usize {
    p.coeffs().iter().take_while(|c| c.is_zero()).count()
}

/// Laurent expansion of `f` at `x = c`: returns `(v, [a_v, a_{v+1}, ...])`
/// with `terms` coefficients.
pub fn laurent_at(f: &RatFun, c: &Rat, terms: usize) -> Result<(i64, Vec<Rat>)> {
    if f.is_zero() {
        return Err(Error::ZeroInput("Laurent expansion of zero"));
    }
    let num = f.num.shift(c);
    let den = f.den.shift(c);
    let vn = leading_zero_count(&num);
    let vd = leading_zero_count(&den);
    let num = &num.coeffs()[vn..];
    let den = &den.coeffs()[vd..];
    let inv0 = den[0].recip();
    let mut out: Vec<Rat> = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = num.get(k).cloned().unwrap_or_else(Rat::zero);
        for j in 1..=k.min(den.len() - 1) {
            acc -= &den[j] * &out[k - j];
        }
        out.push(acc * &inv0);
    }
    Ok((vn as i64 - vd as i64, out))
}

/// Order of `f` at `x = c`.
pub fn order_at(f: &RatFun, c: &Rat) -> Result<i64> {
    Ok(laurent_at(f, c, 0)?.0)
}

/// Coefficient of `(x-c)^-1` in the Laurent expansion at `c`.
pub fn residue_at(f: &RatFun, c: &Rat) -> Result<Rat> {
    let v = order_at(f, c)?;
    if v >= 0 {
        return Ok(Rat::zero());
    }
    let (_, coeffs) = laurent_at(f, c, (-v) as usize)?;
    Ok(coeffs[(-1 - v) as usize].clone())
}

/// `deg(den) - deg(num)`.
pub fn order_at_infinity(f: &RatFun) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::ZeroInput("order at infinity of zero"));
    }
    Ok(f.den.deg_or_neg() - f.num.deg_or_neg())
}

/// Residue at infinity with the convention `res_inf(f) = -[x^-1] f`, so that
/// all finite residues and this one sum to zero.
pub fn residue_at_infinity(f: &RatFun) -> Result<Rat> {
    if f.is_zero() {
        return Err(Error::ZeroInput("residue at infinity of zero"));
    }
    let (_, r) = poly_divmod(&f.num, &f.den)?;
    let d = f.den.degree().unwrap();
    if d == 0 {
        return Ok(Rat::zero());
    }
    // den is monic, so [x^-1] of r/den is the x^(d-1) coefficient of r
    Ok(-r.coeff(d - 1))
}

/// Simple poles with negative integer residue and the polynomial they define.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleProfile {
    /// Irreducible (or unverified) monic factors of the denominator at whose
    /// roots `f` has a simple pole with the listed negative integer residue.
    pub simple_neg_int_poles: Vec<(Poly, Rat)>,
    /// `prod factor^(-residue)`.
    pub delta: Poly,
    /// Number of such poles over an algebraic closure.
    pub s_count: usize,
    pub warnings: Vec<String>,
}

impl PoleProfile {
    pub fn is_empty(&self) -> bool {
        self.simple_neg_int_poles.is_empty()
    }
}

/// Residue of `num/den` at the roots of an irreducible simple factor `p` of
/// `den`, as an element of `Q[x]/(p)`: `num * den'^-1 mod p`.
pub(crate) fn block_residue(num: &Poly, den: &Poly, p: &Poly) -> Result<Poly> {
    let dd = den.derivative().rem(p)?;
    let inv = crate::exactalg::poly::inverse_mod(&dd, p)?
        .ok_or_else(|| Error::UnsupportedField(format!("derivative of the denominator not invertible modulo {p}")))?;
    (&num.rem(p)? * &inv).rem(p)
}

/// Collects the simple poles of `f` whose residue is a negative integer,
/// working factor by factor over the refined factorisation of `den(f)`.
pub fn pole_profile(f: &RatFun, cap: usize) -> Result<PoleProfile> {
    let mut out = PoleProfile {
        simple_neg_int_poles: Vec::new(),
        delta: Poly::one(),
        s_count: 0,
        warnings: Vec::new(),
    };
    if f.is_zero() || f.den.is_one() {
        return Ok(out);
    }
    let fact = refine_factors(&squarefree_factor(&f.den)?, cap);
    for factor in fact.factors.iter().filter(|x| x.multiplicity == 1) {
        let res = block_residue(&f.num, &f.den, &factor.poly)?;
        let is_constant = res.is_constant();
        if is_constant && is_negative_integer(&res.coeff(0)) {
            let r = res.coeff(0);
            let e: u32 = (-r.to_integer())
                .try_into()
                .map_err(|_| Error::UnsupportedField("residue exponent out of range".into()))?;
            out.delta = &out.delta * &factor.poly.pow(e);
            out.s_count += factor.poly.degree().unwrap();
            out.simple_neg_int_poles.push((factor.poly.clone(), r));
        } else if !is_constant && factor.certainty == Certainty::UnverifiedBlock {
            out.warnings.push(format!(
                "unverified-block: {} (degree {}) has a non-constant residue; S(f) and Delta(f) assume it is irreducible",
                factor.poly,
                factor.poly.degree().unwrap()
            ));
        }
    }
    Ok(out)
}

/// Hermite reduction: `f = g' + h` with `den(h)` square-free and `h` proper.
pub fn hermite_reduce(f: &RatFun) -> Result<(RatFun, RatFun)> {
    if f.is_zero() {
        return Ok((RatFun::zero(), RatFun::zero()));
    }
    let (poly_part, mut a) = poly_divmod(&f.num, &f.den)?;
    let mut g = RatFun::from_poly(poly_part.integral());
    if a.is_zero() {
        return Ok((g, RatFun::zero()));
    }
    let sqf = squarefree_factor(&f.den)?;
    let mut factors = sqf.factors.clone();
    factors.sort_by_key(|x| x.multiplicity);
    let mut d = f.den.clone();
    for factor in factors.iter().filter(|x| x.multiplicity >= 2) {
        let v = &factor.poly;
        let i = factor.multiplicity;
        let u = d.div_exact(&v.pow(i as u32))?;
        let uv1 = &u * &v.derivative();
        for j in (1..i).rev() {
            let jr = Rat::from_integer(j.into());
            let rhs = a.scale(&(-jr.recip()));
            let (b, c) = crate::exactalg::poly::poly_diophantine(&uv1, v, &rhs)?;
            g = &g + &RatFun::new(b.clone(), v.pow(j as u32))?;
            a = &c.scale(&(-jr)) - &(&u * &b.derivative());
        }
        d = &u * v;
    }
    Ok((g, RatFun::new(a, d)?))
}

/// `f` has a rational antiderivative.
pub fn is_rationally_integrable(f: &RatFun) -> Result<bool> {
    Ok(hermite_reduce(f)?.1.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rint};

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFun {
        RatFun::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn reduced_and_monic() {
        let f = RatFun::new(p(&[-2, 2]), p(&[-2, 0, 2])).unwrap();
        assert_eq!(f, rf(&[1], &[1, 1]));
        assert!(f.den().is_monic());
        assert!(RatFun::new(p(&[1]), Poly::zero()).is_err());
    }

    #[test]
    fn orders_at_points() {
        assert_eq!(order_at(&rf(&[1], &[0, 1]), &rint(0)).unwrap(), -1);
        assert_eq!(order_at(&rf(&[0, 0, 1], &[1]), &rint(0)).unwrap(), 2);
        assert_eq!(order_at(&rf(&[1, 3], &[0, 0, 1]), &rint(0)).unwrap(), -2);
        assert!(order_at(&RatFun::zero(), &rint(0)).is_err());
    }

    #[test]
    fn laurent_by_series_division() {
        // (3x+1)/x^2 = x^-2 + 3 x^-1
        let (v, c) = laurent_at(&rf(&[1, 3], &[0, 0, 1]), &rint(0), 3).unwrap();
        assert_eq!(v, -2);
        assert_eq!(c, vec![rint(1), rint(3), rint(0)]);
        // 1/(1-x) at 0 = 1 + x + x^2
        let (v, c) = laurent_at(&rf(&[1], &[1, -1]), &rint(0), 3).unwrap();
        assert_eq!(v, 0);
        assert_eq!(c, vec![rint(1); 3]);
    }

    #[test]
    fn residues() {
        assert_eq!(residue_at(&rf(&[1], &[0, 1]), &rint(0)).unwrap(), rint(1));
        assert_eq!(residue_at(&rf(&[1], &[0, 0, 1]), &rint(0)).unwrap(), rint(0));
        // 2/x + 1/(x-1)
        let f = &rf(&[2], &[0, 1]) + &rf(&[1], &[-1, 1]);
        assert_eq!(residue_at(&f, &rint(0)).unwrap(), rint(2));
        assert_eq!(residue_at(&f, &rint(1)).unwrap(), rint(1));
    }

    #[test]
    fn infinity_data() {
        assert_eq!(order_at_infinity(&rf(&[0, 0, 1], &[1])).unwrap(), -2);
        assert_eq!(order_at_infinity(&rf(&[5], &[-3, 1])).unwrap(), 1);
        assert_eq!(order_at_infinity(&rf(&[1, 1], &[0, 0, 0, 1])).unwrap(), 2);
        // q'/q, q = x^2 (x - 1)
        let q = p(&[0, 0, -1, 1]);
        let f = RatFun::log_derivative(&q).unwrap();
        assert_eq!(residue_at_infinity(&f).unwrap(), rint(-3));
        let h = p(&[0, 0, 1]);
        let g = -RatFun::log_derivative(&h).unwrap();
        assert_eq!(residue_at_infinity(&g).unwrap(), rint(2));
        assert_eq!(residue_at_infinity(&rf(&[1], &[0, 0, 1])).unwrap(), rint(0));
    }

    #[test]
    fn pole_profile_examples() {
        // -2/x + 1/(x-1)
        let f = &rf(&[-2], &[0, 1]) + &rf(&[1], &[-1, 1]);
        let prof = pole_profile(&f, 6).unwrap();
        assert_eq!(prof.simple_neg_int_poles, vec![(p(&[0, 1]), rint(-2))]);
        assert_eq!(prof.delta, p(&[0, 0, 1]));
        assert_eq!(prof.s_count, 1);

        let prof = pole_profile(&rf(&[1], &[0, 0, 1]), 6).unwrap();
        assert!(prof.is_empty());
        assert!(prof.delta.is_one());

        let q = &(&p(&[0, 1]) * &p(&[-1, 1])) * &p(&[2, 1]).pow(2);
        let prof = pole_profile(&RatFun::log_derivative(&q).unwrap(), 6).unwrap();
        assert!(prof.is_empty());
        assert!(prof.delta.is_one());
    }

    #[test]
    fn pole_profile_irreducible_block() {
        // -h'/h + 7 with h = x^2 + 1: residue -1 at both roots of x^2 + 1
        let h = p(&[1, 0, 1]);
        let f = &(-RatFun::log_derivative(&h).unwrap()) + &RatFun::constant(rint(7));
        let prof = pole_profile(&f, 6).unwrap();
        assert_eq!(prof.delta, h);
        assert_eq!(prof.s_count, 2);
        assert!(prof.warnings.is_empty());
        // x/(x^2+1): residues 1/2, not in S
        let prof = pole_profile(&rf(&[0, 1], &[1, 0, 1]), 6).unwrap();
        assert!(prof.is_empty());
    }

    #[test]
    fn pole_profile_unverified_block_warns() {
        // 1/(x^2 + 1) with the exhaustive stage disabled: residues +-i/2
        let prof = pole_profile(&rf(&[1], &[1, 0, 1]), 0).unwrap();
        assert!(prof.is_empty());
        assert_eq!(prof.warnings.len(), 1);
    }

    #[test]
    fn hermite_examples() {
        let (g, h) = hermite_reduce(&rf(&[1], &[0, 0, 1])).unwrap();
        assert_eq!(g, rf(&[-1], &[0, 1]));
        assert!(h.is_zero());

        let (g, h) = hermite_reduce(&rf(&[1], &[0, 1])).unwrap();
        assert!(g.is_zero());
        assert_eq!(h, rf(&[1], &[0, 1]));

        let f = rf(&[1, 3], &[0, 0, 1]);
        let (g, h) = hermite_reduce(&f).unwrap();
        assert_eq!(g, rf(&[-1], &[0, 1]));
        assert_eq!(h, rf(&[3], &[0, 1]));
        assert_eq!(&g.derivative() + &h, f);
    }

    #[test]
    fn hermite_higher_multiplicity() {
        // f = (x^3 + 1)/((x-1)^3 (x^2+1)^2 x)
        let den = &(&p(&[-1, 1]).pow(3) * &p(&[1, 0, 1]).pow(2)) * &p(&[0, 1]);
        let f = RatFun::new(p(&[1, 0, 0, 1]), den).unwrap();
        let (g, h) = hermite_reduce(&f).unwrap();
        assert_eq!(&g.derivative() + &h, f);
        let hd = h.den();
        assert!(poly_gcd(hd, &hd.derivative()).unwrap().is_one());
        assert!(h.num().deg_or_neg() < hd.deg_or_neg());
    }

    #[test]
    fn integrability() {
        assert!(is_rationally_integrable(&rf(&[1], &[0, 0, 1])).unwrap());
        assert!(!is_rationally_integrable(&rf(&[1], &[0, 1])).unwrap());
        // p/q with deg p = deg q - 1
        assert!(!is_rationally_integrable(&rf(&[1, 1], &[0, 0, 1])).unwrap());
        assert!(is_rationally_integrable(&RatFun::from_poly(p(&[1, 2, 3]))).unwrap());
    }

    #[test]
    fn display_forms() {
        assert_eq!(rf(&[1], &[0, 1]).to_string(), "1/x");
        assert_eq!(rf(&[-3], &[0, 0, 2]).to_string(), "-3/2/x^2");
        assert_eq!(rf(&[1, 1], &[1, 0, 1]).to_string(), "(x + 1)/(x^2 + 1)");
        assert_eq!(
            RatFun::new(Poly::new(vec![rat(0, 1), rat(-3, 4)]), p(&[1, 1]))
                .unwrap()
                .to_string(),
            "-3/4*x/(x + 1)"
        );
    }
}
