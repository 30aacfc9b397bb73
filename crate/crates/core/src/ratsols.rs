//! Rational solutions of `M(y) = p` for polynomial right-hand sides.
//!
//! Denominators are bounded factor by factor from local indicial data at the
//! roots of the leading coefficient; numerators are bounded by the indicial
//! data at infinity. What remains is exact linear algebra.

use std::collections::HashMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::linalg::solve_affine;
use crate::exactalg::{binomial, integer_roots, refine_factors, squarefree_factor, Certainty, Poly, Rat};
use crate::ore::{adjoint, apply, block_indicial, clear_denominators, infinity_data, OreOp};
use crate::ratfun::RatFun;
use crate::Settings;

/// All rational solutions of one equation `M(y) = p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub particular: Option<RatFun>,
    /// Basis of the rational solutions of `M(y) = 0`.
    pub kernel_basis: Vec<RatFun>,
    pub denominator_bound: Poly,
    /// Numerator degree bound used for the ansatz; `-1` means only zero.
    pub degree_bound: i64,
    pub warnings: Vec<String>,
}

/// Whether some polynomial `p` of exactly the given degree satisfies
/// `L*(y) = p` for a rational `y`, with a witness pair when it does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeExistence {
    pub degree: usize,
    pub exists: bool,
    pub witness_p: Option<Poly>,
    pub witness_y: Option<RatFun>,
}

/// Per-operator data shared by every right-hand side.
#[derive(Debug, Clone)]
struct Prepared {
    denominator: Poly,
    /// `M(z/U) = p` iff `reduced(z) = scale * p`.
    scale: Poly,
    reduced: OreOp,
    sigma: i64,
    max_root: i64,
    images: Vec<Poly>,
    warnings: Vec<String>,
}

impl Prepared {
    fn image(&mut self, j: usize) -> Poly {
        while self.images.len() <= j {
            let k = self.images.len();
            let y = RatFun::from_poly(Poly::monomial(Rat::one(), k));
            let img = apply(&self.reduced, &y);
            self.images.push(img.num().clone());
        }
        self.images[j].clone()
    }

    /// Numerator degree bound for a right-hand side of degree `rhs_deg`.
    fn degree_bound(&self, rhs_deg: Option<usize>) -> i64 {
        let from_rhs = rhs_deg.map_or(-1, |d| d as i64 - self.sigma);
        from_rhs.max(self.max_root).max(-1)
    }
}

/// Solves rational-solution problems, caching the universal denominator and
/// the reduced polynomial system of every operator it has seen.
#[derive(Debug, Clone, Default)]
pub struct RationalSolver {
    settings: Settings,
    cache: HashMap<OreOp, Prepared>,
}

impl RationalSolver {
    pub fn new(settings: Settings) -> Self {
        RationalSolver {
            settings,
            cache: HashMap::new(),
        }
    }

    pub fn settings(&self) -> Settings {
        self.settings
    }

    fn prepared(&mut self, m: &OreOp) -> Result<&mut Prepared> {
        if !self.cache.contains_key(m) {
            let prep = prepare(m, self.settings.factor_cap)?;
            self.cache.insert(m.clone(), prep);
        }
        Ok(self.cache.get_mut(m).unwrap())
    }

    /// A monic `U` with `den(y) | U` for every rational solution of
    /// `M(y) = p`, `p` any polynomial, together with analysis warnings.
    pub fn universal_denominator(&mut self, m: &OreOp) -> Result<(Poly, Vec<String>)> {
        let prep = self.prepared(m)?;
        Ok((prep.denominator.clone(), prep.warnings.clone()))
    }

    pub fn rational_solutions(&mut self, m: &OreOp, p: &Poly) -> Result<SolutionSet> {
        let prep = self.prepared(m)?;
        let rhs = &prep.scale * p;
        let bound = prep.degree_bound(rhs.degree());
        let (particular, kernel) = solve_columns(prep, bound, &[], &rhs);
        let u = prep.denominator.clone();
        let to_ratfun = |z: Poly| RatFun::new(z, u.clone()).expect("nonzero denominator");
        Ok(SolutionSet {
            particular: particular.map(|(z, _)| to_ratfun(z)),
            kernel_basis: kernel.into_iter().map(|(z, _)| to_ratfun(z)).collect(),
            denominator_bound: prep.denominator.clone(),
            degree_bound: bound,
            warnings: prep.warnings.clone(),
        })
    }

    /// `L*(y) = p` has a rational solution.
    pub fn delta(&mut self, l: &OreOp, p: &Poly) -> Result<bool> {
        if p.is_zero() {
            return Err(Error::Precondition("delta needs a nonzero polynomial".into()));
        }
        let m = adjoint(l)?;
        Ok(self.rational_solutions(&m, p)?.particular.is_some())
    }

    /// Decides whether `L*(y) = p` is solvable for some `p` of degree exactly
    /// `i`. The lower coefficients of `p` are unknowns next to the ansatz for
    /// `y`; since the image is a vector space, `p` may be taken monic.
    pub fn exists_degree(&mut self, l: &OreOp, i: usize) -> Result<DegreeExistence> {
        let m = adjoint(l)?;
        let prep = self.prepared(&m)?;
        let rhs = prep.scale.shl(i);
        let bound = prep.degree_bound(rhs.degree());
        let extra: Vec<Poly> = (0..i).map(|k| -&prep.scale.shl(k)).collect();
        let (particular, _) = solve_columns(prep, bound, &extra, &rhs);
        let u = prep.denominator.clone();
        Ok(match particular {
            Some((z, low)) => {
                let p = &Poly::monomial(Rat::one(), i) + &low;
                DegreeExistence {
                    degree: i,
                    exists: true,
                    witness_p: Some(p),
                    witness_y: Some(RatFun::new(z, u)?),
                }
            }
            None => DegreeExistence {
                degree: i,
                exists: false,
                witness_p: None,
                witness_y: None,
            },
        })
    }
}

fn prepare(m: &OreOp, cap: usize) -> Result<Prepared> {
    let (denominator, warnings, blocks) = universal_denominator_with(m, cap)?;
    let (scale, reduced) = divide_by_denominator(m, &denominator, &blocks)?;
    let inf = infinity_data(&reduced)?;
    let max_root = integer_roots(&inf.indicial)?
        .into_iter()
        .filter_map(|r| i64::try_from(r).ok())
        .max()
        .map_or(-1, |r| r.max(-1));
    Ok(Prepared {
        denominator,
        scale,
        reduced,
        sigma: inf.sigma,
        max_root,
        images: Vec::new(),
        warnings,
    })
}

/// `(s, R)` with `R` polynomial, `s` monic and `M(z/U) = p` iff `R(z) = s p`.
///
/// Works fraction-free: with `P = d M` polynomial, `(1/U)^(k) = N_k / U^(k+1)`
/// where `N_0 = 1` and `N_(k+1) = N_k' U - (k+1) N_k U'`, so
/// `U^(r+1) P (1/U) = sum_j (sum_i C(i, j) p_i N_(i-j) U^(r-i+j)) D^j`.
/// Every common factor of `s` and `R` is a factor of `U` or `d`; those in
/// `blocks` or in the square-free parts of `d` are divided out.
fn divide_by_denominator(m: &OreOp, u: &Poly, blocks: &[Poly]) -> Result<(Poly, OreOp)> {
    let (d, p) = clear_denominators(m)?;
    let r = p.order().unwrap();
    let du = u.derivative();
    let mut n = vec![Poly::one()];
    for k in 0..r {
        let next = &(&n[k].derivative() * u) - &(&n[k] * &du).scale(&Rat::from_integer((k + 1).into()));
        n.push(next);
    }
    let mut u_pow = vec![Poly::one()];
    for k in 0..=r {
        u_pow.push(&u_pow[k] * u);
    }
    let mut coeffs: Vec<Poly> = (0..=r)
        .map(|j| {
            (j..=r).fold(Poly::zero(), |acc, i| {
                let pi = p.coeff(i);
                let pi = pi.as_polynomial().expect("cleared operator");
                let term = &(pi * &n[i - j]) * &u_pow[r - (i - j)];
                &acc + &term.scale(&binomial(i, j))
            })
        })
        .collect();
    let mut scale = &u_pow[r + 1] * &d;

    let mut candidates: Vec<Poly> = blocks.to_vec();
    if !d.is_constant() {
        candidates.extend(squarefree_factor(&d)?.factors.into_iter().map(|f| f.poly));
    }
    for f in &candidates {
        while let Ok(s) = scale.div_exact(f) {
            let divided: Option<Vec<Poly>> = coeffs.iter().map(|c| c.div_exact(f).ok()).collect();
            let Some(divided) = divided else { break };
            scale = s;
            coeffs = divided;
        }
    }
    let unit = Rat::one() / scale.lc();
    let reduced = coeffs.iter().map(|c| c.scale(&unit)).collect();
    Ok((scale.monic(), OreOp::from_polys(reduced)))
}

type Solved = (Poly, Poly);

/// Solves `reduced(z) + sum c_k extra_k = rhs` with `deg z <= bound`.
/// Returns the canonical particular `(z, sum c_k x^k)` and the kernel.
fn solve_columns(prep: &mut Prepared, bound: i64, extra: &[Poly], rhs: &Poly) -> (Option<Solved>, Vec<Solved>) {
    let nz = (bound + 1).max(0) as usize;
    let mut cols: Vec<Poly> = (0..nz).map(|j| prep.image(j)).collect();
    cols.extend(extra.iter().cloned());
    let ncols = cols.len();
    let nrows = cols
        .iter()
        .chain(std::iter::once(rhs))
        .map(|c| c.degree().map_or(0, |d| d + 1))
        .max()
        .unwrap_or(0);
    let a: Vec<Vec<Rat>> = (0..nrows).map(|r| cols.iter().map(|c| c.coeff(r)).collect()).collect();
    let b: Vec<Rat> = (0..nrows).map(|r| rhs.coeff(r)).collect();
    let split = |v: &[Rat]| -> Solved { (Poly::new(v[..nz].to_vec()), Poly::new(v[nz..].to_vec())) };
    match solve_affine(&a, &b, ncols) {
        Some(sol) => (
            Some(split(&sol.particular)),
            sol.kernel.iter().map(|k| split(k)).collect(),
        ),
        None => (None, Vec::new()),
    }
}

/// The bound, its warnings and the blocks it was assembled from.
fn universal_denominator_with(m: &OreOp, cap: usize) -> Result<(Poly, Vec<String>, Vec<Poly>)> {
    let (_, p) = clear_denominators(m)?;
    let lc = p.lc().num().clone();
    let mut warnings = Vec::new();
    let mut u = Poly::one();
    if lc.is_constant() {
        return Ok((u, warnings, Vec::new()));
    }
    let factors = refine_factors(&squarefree_factor(&lc)?, cap);
    for f in &factors.factors {
        let block = &f.poly;
        // the local data of `m` itself: clearing denominators would only
        // shift tau by the order of the denominator
        let bi = block_indicial(m, block)?;
        if f.certainty == Certainty::UnverifiedBlock {
            if !bi.is_separable() {
                return Err(Error::UnsupportedField(format!(
                    "local exponents at the roots of {block} differ between roots; \
                     the block would have to be split over an extension of the rationals"
                )));
            }
            warnings.push(format!(
                "unverified-block: {block} (degree {}) analysed as if irreducible",
                block.degree().unwrap()
            ));
        }
        // a pole of order k at a root contributes e(-k) (x-a)^(tau-k), which
        // must vanish unless k <= tau
        let min_root = integer_roots(&bi.common_part())?
            .into_iter()
            .filter_map(|r| i64::try_from(r).ok())
            .min();
        let order = min_root.map_or(0, |r| -r).max(bi.tau).max(0);
        if order > 0 {
            u = &u * &block.pow(order as u32);
        }
    }
    let blocks = factors.factors.into_iter().map(|f| f.poly).collect();
    Ok((u, warnings, blocks))
}

/// See [`RationalSolver::universal_denominator`].
pub fn universal_denominator(m: &OreOp) -> Result<Poly> {
    Ok(universal_denominator_with(m, Settings::default().factor_cap)?.0)
}

/// Rational solutions of `M(y) = p` with polynomial coefficients, found by a
/// plain polynomial ansatz (no denominator).
pub fn polynomial_solutions(m: &OreOp, p: &Poly) -> Result<SolutionSet> {
    if !m.has_polynomial_coeffs() {
        return Err(Error::Precondition(
            "polynomial_solutions needs polynomial coefficients".into(),
        ));
    }
    let inf = infinity_data(m)?;
    let max_root = integer_roots(&inf.indicial)?
        .into_iter()
        .filter_map(|r| i64::try_from(r).ok())
        .max()
        .map_or(-1, |r| r.max(-1));
    let mut prep = Prepared {
        denominator: Poly::one(),
        scale: Poly::one(),
        reduced: m.clone(),
        sigma: inf.sigma,
        max_root,
        images: Vec::new(),
        warnings: Vec::new(),
    };
    let bound = prep.degree_bound(p.degree());
    let (particular, kernel) = solve_columns(&mut prep, bound, &[], p);
    Ok(SolutionSet {
        particular: particular.map(|(z, _)| RatFun::from_poly(z)),
        kernel_basis: kernel.into_iter().map(|(z, _)| RatFun::from_poly(z)).collect(),
        denominator_bound: Poly::one(),
        degree_bound: bound,
        warnings: Vec::new(),
    })
}

pub fn rational_solutions(m: &OreOp, p: &Poly) -> Result<SolutionSet> {
    RationalSolver::default().rational_solutions(m, p)
}

pub fn delta(l: &OreOp, p: &Poly) -> Result<bool> {
    RationalSolver::default().delta(l, p)
}

pub fn exists_degree(l: &OreOp, i: usize) -> Result<DegreeExistence> {
    RationalSolver::default().exists_degree(l, i)
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

    fn airy() -> OreOp {
        OreOp::from_polys(vec![p(&[]), p(&[0, -1]), p(&[]), p(&[1])])
    }

    fn log_derivative_op(q: &Poly) -> OreOp {
        OreOp::first_order(RatFun::log_derivative(q).unwrap())
    }

    fn check(m: &OreOp, rhs: &Poly, s: &SolutionSet) {
        if let Some(y) = &s.particular {
            assert_eq!(apply(m, y), RatFun::from_poly(rhs.clone()));
        }
        for k in &s.kernel_basis {
            assert!(apply(m, k).is_zero());
        }
    }

    #[test]
    fn universal_denominators() {
        let f = &rf(&[-2], &[0, 1]) + &rf(&[1], &[-1, 1]);
        let m = adjoint(&OreOp::first_order(f)).unwrap();
        assert_eq!(universal_denominator(&m).unwrap(), p(&[0, 0, 1]));

        let q = &p(&[0, 0, 1]) * &p(&[-1, 1]);
        let m = adjoint(&log_derivative_op(&q)).unwrap();
        assert!(universal_denominator(&m).unwrap().is_one());

        assert!(universal_denominator(&-OreOp::d()).unwrap().is_one());
    }

    #[test]
    fn positive_shift_admits_poles() {
        // x^2 y' = -1 has y = 1/x
        let m = OreOp::from_polys(vec![p(&[]), p(&[0, 0, 1])]);
        assert_eq!(universal_denominator(&m).unwrap(), p(&[0, 1]));
        let s = rational_solutions(&m, &p(&[-1])).unwrap();
        check(&m, &p(&[-1]), &s);
        assert!(s.particular.is_some());
    }

    #[test]
    fn polynomial_solution_examples() {
        let m = adjoint(&airy()).unwrap();
        let s = polynomial_solutions(&m, &p(&[1])).unwrap();
        assert_eq!(s.particular, Some(RatFun::one()));

        let m = adjoint(&(&OreOp::d() - &OreOp::one())).unwrap();
        let s = polynomial_solutions(&m, &p(&[1])).unwrap();
        assert_eq!(s.particular, Some(RatFun::constant(rint(-1))));

        // -x y' + y = x^2 has no polynomial solution: the image misses x
        let m = OreOp::from_polys(vec![p(&[1]), p(&[0, -1])]);
        let s = polynomial_solutions(&m, &p(&[0, 1])).unwrap();
        assert!(s.particular.is_none());
        assert!(polynomial_solutions(&OreOp::first_order(rf(&[1], &[0, 1])), &p(&[1])).is_err());
    }

    #[test]
    fn rational_solution_examples() {
        let m = adjoint(&OreOp::d()).unwrap();
        let s = rational_solutions(&m, &p(&[1])).unwrap();
        assert_eq!(s.particular, Some(rf(&[0, -1], &[1])));
        assert_eq!(s.kernel_basis, vec![RatFun::one()]);

        let m = adjoint(&OreOp::first_order(rf(&[1], &[0, 1]))).unwrap();
        assert!(rational_solutions(&m, &p(&[1])).unwrap().particular.is_none());
    }

    #[test]
    fn one_pole_family() {
        for (beta, c) in [(rat(-3, 2), rint(2)), (rint(-2), rint(0)), (rat(1, 3), rat(-1, 2))] {
            let lin = Poly::linear_root(&c);
            let f = RatFun::new(Poly::constant(beta.clone()), lin.clone()).unwrap();
            let m = adjoint(&OreOp::first_order(f)).unwrap();
            for s in 1..5u32 {
                let rhs = lin.pow(s - 1).scale(&(&beta - rint(s as i64)));
                let sol = rational_solutions(&m, &rhs).unwrap();
                check(&m, &rhs, &sol);
                assert_eq!(sol.particular, Some(RatFun::from_poly(lin.pow(s))));
            }
        }
    }

    #[test]
    fn delta_examples() {
        assert!(delta(&airy(), &p(&[1])).unwrap());
        assert!(!delta(&OreOp::first_order(rf(&[1], &[0, 1])), &p(&[1])).unwrap());
        let katz = OreOp::from_polys(vec![p(&[0, 1]), p(&[]), p(&[1])]);
        for c in [1, -3, 7] {
            assert!(!delta(&katz, &p(&[c])).unwrap());
        }
        assert!(delta(&airy(), &Poly::zero()).is_err());
    }

    #[test]
    fn exists_degree_examples() {
        let l = log_derivative_op(&p(&[0, 0, 1]));
        let e0 = exists_degree(&l, 0).unwrap();
        assert!(e0.exists);
        assert_eq!(e0.witness_y, Some(RatFun::x()));
        assert_eq!(e0.witness_p, Some(p(&[1])));
        assert!(!exists_degree(&l, 1).unwrap().exists);
        for i in 2..6 {
            let e = exists_degree(&l, i).unwrap();
            assert!(e.exists);
            let m = adjoint(&l).unwrap();
            let wp = e.witness_p.unwrap();
            assert_eq!(wp.degree(), Some(i));
            assert_eq!(apply(&m, &e.witness_y.unwrap()), RatFun::from_poly(wp));
        }

        let katz = OreOp::from_polys(vec![p(&[1, 0, 0, 1]), p(&[]), p(&[1])]);
        assert!(!exists_degree(&katz, 2).unwrap().exists);
        assert!(exists_degree(&katz, 3).unwrap().exists);
    }

    #[test]
    fn irreducible_quadratic_block() {
        // M = (x^2+1) D + 2x = D*(x^2+1): M(y) = p is solved by y = P/(x^2+1)
        let m = OreOp::from_polys(vec![p(&[0, 2]), p(&[1, 0, 1])]);
        assert_eq!(universal_denominator(&m).unwrap(), p(&[1, 0, 1]));
        let s = rational_solutions(&m, &p(&[0, 3])).unwrap();
        check(&m, &p(&[0, 3]), &s);
        assert_eq!(s.kernel_basis, vec![rf(&[1], &[1, 0, 1])]);
    }
}
