use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{integer_roots, Poly};
use crate::ore::{adjoint, clear_denominators, infinity_data, OreOp};
use crate::ratfun::RatFun;

use super::Analyzer;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SindReport {
    pub operator: OreOp,
    pub b: i64,
    /// Degrees below `b` that no `L*(y)` polynomial attains.
    pub missing_degrees: Vec<usize>,
    pub sind: usize,
    /// Degree to `(p, y)` with `L*(y) = p`, `deg p` the key.
    pub witnesses: BTreeMap<usize, (Poly, RatFun)>,
    pub warnings: Vec<String>,
}

/// An index from which on every degree is attained:
/// `max(0, maxV + 1 + sigma + deg d)` with `ind`, `sigma` the indicial data of
/// `L*` at infinity, `maxV` the largest nonnegative integer root of `ind`
/// (`-1` if there is none) and `d` the denominator of `L`.
///
/// Clearing denominators first would shift the roots of `ind` by `deg d` and
/// can give a smaller valid bound; this is the coarser, closed-form one.
pub fn bound_b(l: &OreOp) -> Result<i64> {
    let (d, _) = clear_denominators(l)?;
    let inf = infinity_data(&adjoint(l)?)?;
    let max_v = integer_roots(&inf.indicial)?
        .into_iter()
        .filter_map(|r| i64::try_from(r).ok())
        .filter(|&r| r >= 0)
        .max()
        .unwrap_or(-1);
    Ok((max_v + 1 + inf.sigma + d.deg_or_neg()).max(0))
}

impl Analyzer {
    /// The stability index by exhaustive check of every degree below
    /// [`bound_b`], with a sanity check of the next three degrees.
    pub fn sind_exact(&mut self, l: &OreOp) -> Result<SindReport> {
        let b = bound_b(l)?;
        let warnings = self.warnings_for(l)?;
        let mut missing = Vec::new();
        let mut witnesses = BTreeMap::new();
        let top = b as usize + 2;
        for i in 0..=top {
            let e = self.solver().exists_degree(l, i)?;
            match (e.witness_p, e.witness_y) {
                (Some(p), Some(y)) => {
                    witnesses.insert(i, (p, y));
                }
                _ if i < b as usize => missing.push(i),
                _ => {
                    return Err(Error::Internal(format!(
                        "no polynomial of degree {i} in the image although B = {b}"
                    )))
                }
            }
        }
        let sind = missing.last().map_or(0, |&m| m + 1);
        Ok(SindReport {
            operator: l.clone(),
            b,
            missing_degrees: missing,
            sind,
            witnesses,
            warnings,
        })
    }
}

/// `p(D) + q(x)`, `p` given by its coefficients in `D`.
pub fn katz_operator(p: &Poly, q: &Poly) -> Result<OreOp> {
    check_katz(p)?;
    let mut coeffs: Vec<RatFun> = p.coeffs().iter().map(|c| RatFun::constant(c.clone())).collect();
    coeffs[0] = RatFun::from_poly(q.clone());
    Ok(OreOp::new(coeffs))
}

fn check_katz(p: &Poly) -> Result<()> {
    if p.is_constant() {
        return Err(Error::Precondition(format!("p = {p} must be nonconstant")));
    }
    if !p.coeff(0).is_zero() {
        return Err(Error::Precondition(format!(
            "p = {} must vanish at 0",
            crate::parse::fmt_d_poly(p)
        )));
    }
    Ok(())
}

/// Closed-form index of `p(D) + q(x)`: the degree of `q` (`0` for `q = 0`).
pub fn katz_sind(p: &Poly, q: &Poly) -> Result<usize> {
    check_katz(p)?;
    Ok(q.degree().unwrap_or(0))
}
