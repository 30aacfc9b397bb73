use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::Poly;
use crate::ore::{adjoint, apply, ore_mul, OreOp};
use crate::ratfun::RatFun;

use super::Analyzer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepCase {
    /// `L*(y) = 1` has no rational solution; the integral is `L*D`.
    Delta0,
    /// `l*L + D*H = 1`; the integral is `(1/l)(1 - H*D)`.
    Delta1,
}

impl fmt::Display for StepCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepCase::Delta0 => "delta0",
            StepCase::Delta1 => "delta1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    /// Monic.
    pub operator: OreOp,
    pub case: StepCase,
    pub certificate_l: Option<RatFun>,
    pub certificate_h: Option<OreOp>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    /// The monic input `L_0`.
    pub base: OreOp,
    pub steps: Vec<ChainStep>,
    /// Orders of `L_0, ..., L_n`.
    pub orders: Vec<usize>,
    pub verified_identity: bool,
}

impl ChainReport {
    pub fn operators(&self) -> impl Iterator<Item = &OreOp> {
        std::iter::once(&self.base).chain(self.steps.iter().map(|s| &s.operator))
    }
}

/// `H` with `D*H = M`, or an error when `M` is not a left multiple of `D`.
pub fn left_divide_by_d(m: &OreOp) -> Result<OreOp> {
    let Some(n) = m.order() else {
        return Ok(OreOp::zero());
    };
    if n == 0 {
        return Err(Error::Internal(format!("{m} is not a left multiple of D")));
    }
    // D*H = sum (h_{k-1} + h_k') D^k
    let mut h = vec![RatFun::zero(); n];
    h[n - 1] = m.coeff(n);
    for k in (1..n).rev() {
        h[k - 1] = &m.coeff(k) - &h[k].derivative();
    }
    if m.coeff(0) != h[0].derivative() {
        return Err(Error::Internal(format!("{m} is not a left multiple of D")));
    }
    Ok(OreOp::new(h))
}

/// The principal integral of a monic `L` built from a given solution `l` of
/// `L*(y) = 1`.
pub fn integral_from_certificate(l_op: &OreOp, l: &RatFun) -> Result<ChainStep> {
    let ls = adjoint(l_op)?;
    if !apply(&ls, l).is_one() {
        return Err(Error::Precondition(format!("{l} does not solve L*(y) = 1")));
    }
    let one = OreOp::one();
    let m = &one - &l_op.scale_left(l);
    let h = left_divide_by_d(&m)?;
    if (&l_op.scale_left(l) + &ore_mul(&OreOp::d(), &h)) != one {
        return Err(Error::Internal("certificate identity l*L + D*H = 1 fails".into()));
    }
    let op = (&one - &ore_mul(&h, &OreOp::d())).scale_left(&l.inv()?);
    Ok(ChainStep {
        operator: op.monic()?,
        case: StepCase::Delta1,
        certificate_l: Some(l.clone()),
        certificate_h: Some(h),
    })
}

fn step_factor(step: &ChainStep) -> Option<OreOp> {
    match step.case {
        StepCase::Delta0 => Some(OreOp::one()),
        StepCase::Delta1 => {
            let l = step.certificate_l.as_ref()?;
            Some(OreOp::first_order(&l.derivative() * &l.inv().ok()?))
        }
    }
}

/// Checks `L_i D = I_i L_(i+1)` for every step, where `I_i` is `1` or
/// `D + l_i'/l_i` according to the step case. By induction this is
/// equivalent to `L D^n = I_0 ... I_(n-1) L_n` for every prefix, without
/// expanding the growing product.
pub fn verify_chain_steps(base: &OreOp, steps: &[ChainStep]) -> bool {
    let mut prev = base;
    for step in steps {
        let Some(factor) = step_factor(step) else {
            return false;
        };
        if ore_mul(prev, &OreOp::d()) != ore_mul(&factor, &step.operator) {
            return false;
        }
        prev = &step.operator;
    }
    true
}

/// Checks `L D^n = I_0 I_1 ... I_(n-1) L_n` for every prefix of the chain by
/// expanding both sides. The right side is multiplied out from the right,
/// `I_0 (I_1 (... (I_(n-1) L_n)))`, which keeps intermediate coefficients as
/// small as those of `L_k D^(n-k)` instead of forming the product of the
/// `I_i` first. Quadratic in the depth; see [`verify_chain_steps`] for the
/// linear check.
pub fn verify_chain_identity(base: &OreOp, steps: &[ChainStep]) -> bool {
    let mut factors = Vec::with_capacity(steps.len());
    for step in steps {
        let Some(factor) = step_factor(step) else {
            return false;
        };
        factors.push((step.case == StepCase::Delta1).then_some(factor));
    }
    let mut lhs = base.clone();
    for (n, step) in steps.iter().enumerate() {
        lhs = ore_mul(&lhs, &OreOp::d());
        let mut rhs = step.operator.clone();
        for factor in factors[..=n].iter().rev().flatten() {
            rhs = ore_mul(factor, &rhs);
        }
        if lhs != rhs {
            return false;
        }
    }
    true
}

impl Analyzer {
    /// The principal integral of a monic operator, with the canonical
    /// certificate (the solver's particular solution of `L*(y) = 1`).
    pub fn principal_integral(&mut self, l: &OreOp) -> Result<ChainStep> {
        if l.is_zero() {
            return Err(Error::ZeroInput("principal integral of the zero operator"));
        }
        if !l.is_monic() {
            return Err(Error::Precondition(format!("{l} is not monic")));
        }
        let m = adjoint(l)?;
        let sols = self.solver().rational_solutions(&m, &Poly::one())?;
        match sols.particular {
            None => Ok(ChainStep {
                operator: ore_mul(l, &OreOp::d()),
                case: StepCase::Delta0,
                certificate_l: None,
                certificate_h: None,
            }),
            Some(cert) => integral_from_certificate(l, &cert),
        }
    }

    /// Iterated principal integrals `L_0 = monic(L), ..., L_depth`.
    pub fn principal_chain(&mut self, l: &OreOp, depth: usize) -> Result<ChainReport> {
        let base = l.monic()?;
        let mut steps: Vec<ChainStep> = Vec::with_capacity(depth);
        let mut orders = vec![base.order().unwrap()];
        for _ in 0..depth {
            let prev = steps.last().map_or(&base, |s| &s.operator);
            let step = self.principal_integral(prev)?;
            orders.push(step.operator.order().unwrap());
            steps.push(step);
        }
        let verified_identity = verify_chain_steps(&base, &steps);
        Ok(ChainReport {
            base,
            steps,
            orders,
            verified_identity,
        })
    }

    /// Warnings raised while bounding the denominators for `L*`.
    pub fn warnings_for(&mut self, l: &OreOp) -> Result<Vec<String>> {
        Ok(self.solver().universal_denominator(&adjoint(l)?)?.1)
    }
}
