use crate::error::{Error, Result};
use crate::exactalg::{is_positive_integer, poly_gcd, Poly, Rat};
use crate::ore::OreOp;
use crate::ratfun::{order_at_infinity, pole_profile, residue_at_infinity, RatFun};

/// Sandwich for the index of `D + f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstOrderBounds {
    pub lower: i64,
    pub upper: i64,
    /// The index itself, known in closed form when `f` has no simple pole
    /// with negative integer residue.
    pub exact: Option<i64>,
    pub warnings: Vec<String>,
}

/// Normal form of a first-order coefficient after absorbing the poles with
/// negative integer residue into `h`: `f = -h'/h + g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalForm {
    Zero { h: Poly },
    Constant { h: Poly, alpha: Rat },
    OnePole { h: Poly, beta: Rat, c: Rat },
    Other { h: Poly, g: RatFun },
}

impl NormalForm {
    pub fn h(&self) -> &Poly {
        match self {
            NormalForm::Zero { h }
            | NormalForm::Constant { h, .. }
            | NormalForm::OnePole { h, .. }
            | NormalForm::Other { h, .. } => h,
        }
    }

    /// The remainder `g = f + h'/h`.
    pub fn g(&self) -> RatFun {
        match self {
            NormalForm::Zero { .. } => RatFun::zero(),
            NormalForm::Constant { alpha, .. } => RatFun::constant(alpha.clone()),
            NormalForm::OnePole { beta, c, .. } => {
                RatFun::new(Poly::constant(beta.clone()), Poly::linear_root(c)).unwrap()
            }
            NormalForm::Other { g, .. } => g.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub normal_form: NormalForm,
    pub warnings: Vec<String>,
}

/// `f` for an operator `a (D + f)` of order one.
pub fn first_order_coefficient(l: &OreOp) -> Result<RatFun> {
    if l.order() != Some(1) {
        return Err(Error::Precondition(format!("{l} is not of order one")));
    }
    Ok(l.monic()?.coeff(0))
}

/// Upper and lower bounds for the index of `D + f` from the degrees of
/// `f`, its order and residue at infinity and its simple poles with negative
/// integer residue.
pub fn first_order_sind_bounds(f: &RatFun, cap: usize) -> Result<FirstOrderBounds> {
    if f.is_zero() {
        return Err(Error::Precondition("bounds need a nonzero f".into()));
    }
    let t = order_at_infinity(f)?;
    let nu = residue_at_infinity(f)?;
    let deg_num = f.num().deg_or_neg();
    let deg_den = f.den().deg_or_neg();
    let nu_int = nu.is_integer().then(|| nu.to_integer());
    let nu_i64 = nu_int.as_ref().and_then(|n| i64::try_from(n).ok());

    let upper = if t != 1 {
        deg_num.max(deg_den)
    } else {
        match nu_i64.filter(|&n| n <= 0) {
            None => deg_den - 1,
            Some(n) => deg_den - n,
        }
    };

    let profile = pole_profile(f, cap)?;
    let n_low = deg_den - profile.s_count as i64 - profile.delta.deg_or_neg();
    let closed = |n: i64| -> i64 {
        match nu_i64.filter(|&v| t == 1 && v <= -n) {
            Some(v) => -v,
            None => n - t.min(1),
        }
    };
    let lower = closed(n_low).max(0);
    let exact = (profile.is_empty() && profile.warnings.is_empty()).then(|| closed(deg_den));
    Ok(FirstOrderBounds {
        lower,
        upper: upper.max(0),
        exact,
        warnings: profile.warnings,
    })
}

/// Stability of `D + f`: stable exactly when `f = -h'/h + g` with `g` zero,
/// a constant, or `beta/(x - c)` with `beta` not a positive integer, where
/// `h` collects the simple poles of `f` with negative integer residue.
pub fn first_order_stable(f: &RatFun, cap: usize) -> Result<StabilityVerdict> {
    let profile = pole_profile(f, cap)?;
    let h = profile.delta;
    let g = f + &RatFun::log_derivative(&h)?;
    let (stable, normal_form) = if g.is_zero() {
        (true, NormalForm::Zero { h })
    } else if let Some(alpha) = g.as_constant() {
        (true, NormalForm::Constant { h, alpha })
    } else if g.num().is_constant() && g.den().degree() == Some(1) {
        let beta = g.num().coeff(0);
        let c = -g.den().coeff(0);
        (!is_positive_integer(&beta), NormalForm::OnePole { h, beta, c })
    } else {
        (false, NormalForm::Other { h, g })
    };
    Ok(StabilityVerdict {
        stable,
        normal_form,
        warnings: profile.warnings,
    })
}

/// Orders of `L_0, ..., L_(deg q + 1)` in the chain of `D + q'/q`.
pub fn inv_q_profile(q: &Poly) -> Result<Vec<usize>> {
    let depth = q.degree().unwrap_or(0) + 1;
    inv_q_profile_to(q, depth)
}

/// Orders of `L_0, ..., L_depth` in the chain of `D + q'/q`: they rise by one
/// per step until the number of distinct roots is reached, stall, and rise
/// once more at `deg q`.
pub fn inv_q_profile_to(q: &Poly, depth: usize) -> Result<Vec<usize>> {
    if q.is_constant() {
        return Err(Error::Precondition(format!("q = {q} must be nonconstant")));
    }
    let big_n = q.degree().unwrap();
    let radical = q.div_exact(&poly_gcd(q, &q.derivative())?)?;
    let n = radical.degree().unwrap();
    Ok((0..=depth)
        .map(|j| {
            if j < n {
                1 + j
            } else if j < big_n {
                n
            } else {
                n + 1
            }
        })
        .collect())
}

impl super::Analyzer {
    pub fn first_order_sind_bounds(&self, f: &RatFun) -> Result<FirstOrderBounds> {
        first_order_sind_bounds(f, self.settings().factor_cap)
    }

    pub fn first_order_stable(&self, f: &RatFun) -> Result<StabilityVerdict> {
        first_order_stable(f, self.settings().factor_cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rint};
    use crate::stability::{bound_b, Analyzer};

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFun {
        RatFun::new(p(n), p(d)).unwrap()
    }

    const CAP: usize = 6;

    #[test]
    fn bounds_for_log_derivative() {
        let q = &p(&[0, 0, 1]) * &p(&[-1, 1]);
        let f = RatFun::log_derivative(&q).unwrap();
        let b = first_order_sind_bounds(&f, CAP).unwrap();
        assert_eq!((b.lower, b.upper, b.exact), (3, 5, Some(3)));
        let l = OreOp::first_order(f);
        assert_eq!(Analyzer::default().sind_exact(&l).unwrap().sind, 3);
        assert_eq!(bound_b(&l).unwrap(), b.upper);
    }

    #[test]
    fn bounds_exact_cases() {
        let f = RatFun::new(Poly::constant(rat(-3, 2)), p(&[-2, 1])).unwrap();
        let b = first_order_sind_bounds(&f, CAP).unwrap();
        assert_eq!(b.exact, Some(0));
        let b = first_order_sind_bounds(&RatFun::constant(rint(7)), CAP).unwrap();
        assert_eq!((b.lower, b.upper, b.exact), (0, 0, Some(0)));
        assert!(first_order_sind_bounds(&RatFun::zero(), CAP).is_err());
    }

    #[test]
    fn bounds_with_negative_residues() {
        // -2/x + 1/(x-1): S = {0}, Delta = x^2
        let f = &rf(&[-2], &[0, 1]) + &rf(&[1], &[-1, 1]);
        let b = first_order_sind_bounds(&f, CAP).unwrap();
        assert_eq!(b.exact, None);
        let s = Analyzer::default().sind_exact(&OreOp::first_order(f)).unwrap().sind as i64;
        assert!(b.lower <= s && s <= b.upper);
    }

    #[test]
    fn stability_examples() {
        let f = &rf(&[-1], &[0, 2]) + &rf(&[-1], &[2, 2]);
        assert!(!first_order_stable(&f, CAP).unwrap().stable);

        let h = p(&[1, 0, 1]);
        let f = &(-&RatFun::log_derivative(&h).unwrap()) + &RatFun::constant(rint(7));
        let v = first_order_stable(&f, CAP).unwrap();
        assert!(v.stable);
        assert_eq!(v.normal_form, NormalForm::Constant { h, alpha: rint(7) });

        let v = first_order_stable(&rf(&[1], &[0, 1]), CAP).unwrap();
        assert!(!v.stable);
        assert!(first_order_stable(&RatFun::zero(), CAP).unwrap().stable);
    }

    #[test]
    fn profiles() {
        let q = &p(&[0, 0, 1]) * &p(&[-1, 1]);
        assert_eq!(inv_q_profile(&q).unwrap(), vec![1, 2, 2, 3, 3]);
        assert_eq!(inv_q_profile(&p(&[0, 1])).unwrap(), vec![1, 2, 2]);
        assert_eq!(inv_q_profile(&p(&[0, 0, 1])).unwrap(), vec![1, 1, 2, 2]);
        assert!(inv_q_profile(&p(&[3])).is_err());
    }
}
