use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::{poly_divmod, poly_gcd, rational_roots, Poly, Rat};
use crate::error::{Error, Result};

/// How much is known about a factor's irreducibility over the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certainty {
    /// Degree one.
    Linear,
    /// Certified irreducible by rational-root extraction plus exhaustive search.
    ProvedIrreducible,
    /// Square-free, no rational roots, but not searched (degree above the cap,
    /// or the search gave up). May still split.
    UnverifiedBlock,
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::Linear => "linear",
            Certainty::ProvedIrreducible => "proved-irreducible",
            Certainty::UnverifiedBlock => "unverified-block",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    /// Monic, square-free.
    pub poly: Poly,
    pub multiplicity: usize,
    pub certainty: Certainty,
}

/// `unit * prod(factor^multiplicity)` with pairwise coprime monic square-free factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rat,
    pub factors: Vec<Factor>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors.iter().fold(Poly::constant(self.unit.clone()), |acc, f| {
            &acc * &f.poly.pow(f.multiplicity as u32)
        })
    }

    pub fn has_unverified(&self) -> bool {
        self.factors.iter().any(|f| f.certainty == Certainty::UnverifiedBlock)
    }

    fn sort(&mut self) {
        self.factors.sort_by(|a, b| {
            b.multiplicity
                .cmp(&a.multiplicity)
                .then_with(|| cmp_poly(&a.poly, &b.poly))
        });
    }
}

fn cmp_poly(a: &Poly, b: &Poly) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

fn certainty_of(p: &Poly) -> Certainty {
    if p.degree() == Some(1) {
        Certainty::Linear
    } else {
        Certainty::UnverifiedBlock
    }
}

/// Yun's square-free decomposition.
pub fn squarefree_factor(a: &Poly) -> Result<Factorization> {
    if a.is_zero() {
        return Err(Error::ZeroInput("square-free factorisation of zero"));
    }
    let unit = a.lc();
    let mut out = Factorization {
        unit,
        factors: Vec::new(),
    };
    if a.is_constant() {
        return Ok(out);
    }
    let a = a.monic();
    let da = a.derivative();
    let b = poly_gcd(&a, &da)?;
    let mut c = a.div_exact(&b)?;
    let mut d = &da.div_exact(&b)? - &c.derivative();
    let mut i = 1;
    while !c.is_one() {
        let ai = poly_gcd(&c, &d)?;
        c = c.div_exact(&ai)?;
        d = &d.div_exact(&ai)? - &c.derivative();
        if !ai.is_one() {
            out.factors.push(Factor {
                certainty: certainty_of(&ai),
                poly: ai,
                multiplicity: i,
            });
        }
        i += 1;
    }
    out.sort();
    Ok(out)
}

/// Splits every block further: rational roots are peeled off as linear
/// factors, and leftover blocks of degree at most `cap` are either split or
/// certified irreducible by an exhaustive Kronecker search.
pub fn refine_factors(f: &Factorization, cap: usize) -> Factorization {
    let mut out = Factorization {
        unit: f.unit.clone(),
        factors: Vec::new(),
    };
    for factor in &f.factors {
        if factor.certainty != Certainty::UnverifiedBlock {
            out.factors.push(factor.clone());
            continue;
        }
        let mut rest = factor.poly.clone();
        // square-free input: every rational root is simple
        let roots = rational_roots(&rest).unwrap_or_default();
        for (r, _) in roots {
            let lin = Poly::linear_root(&r);
            rest = poly_divmod(&rest, &lin).expect("nonzero divisor").0;
            out.factors.push(Factor {
                poly: lin,
                multiplicity: factor.multiplicity,
                certainty: Certainty::Linear,
            });
        }
        for (piece, certainty) in split_rootless(&rest.monic(), cap) {
            out.factors.push(Factor {
                poly: piece,
                multiplicity: factor.multiplicity,
                certainty,
            });
        }
    }
    out.sort();
    out
}

// `p` is monic with no rational roots.
fn split_rootless(p: &Poly, cap: usize) -> Vec<(Poly, Certainty)> {
    let deg = match p.degree() {
        None | Some(0) => return Vec::new(),
        Some(d) => d,
    };
    if deg > cap {
        return vec![(p.clone(), Certainty::UnverifiedBlock)];
    }
    // below degree 4 any proper factorisation would have a linear factor
    if deg <= 3 {
        return vec![(p.clone(), Certainty::ProvedIrreducible)];
    }
    match kronecker_split(p) {
        Search::Irreducible => vec![(p.clone(), Certainty::ProvedIrreducible)],
        Search::GaveUp => vec![(p.clone(), Certainty::UnverifiedBlock)],
        Search::Found(g) => {
            let g = g.monic();
            let h = p.div_exact(&g).expect("Kronecker factor divides").monic();
            let mut out = split_rootless(&g, cap);
            out.extend(split_rootless(&h, cap));
            out
        }
    }
}

enum Search {
    Found(Poly),
    Irreducible,
    GaveUp,
}

const MAX_CANDIDATES: u64 = 2_000_000;
const MAX_FACTOR_VALUE: u64 = 10_000_000_000;

/// Kronecker's method: any integer factor `g` of degree `d` has `g(a) | f(a)`
/// at every integer `a`, so interpolating all divisor choices at `d + 1`
/// points enumerates every candidate.
fn kronecker_split(p: &Poly) -> Search {
    let (_, ints) = p.primitive_integer();
    let f = Poly::from_ints(&ints);
    let deg = f.degree().unwrap();

    // candidate evaluation points ranked by how many divisors f(a) has
    let mut points: Vec<(usize, i64, Vec<i64>)> = Vec::new();
    for k in 0..40i64 {
        let a = if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 };
        let v = f.eval(&Rat::from_integer(a.into())).to_integer();
        let Some(mag) = v.abs().to_u64() else { continue };
        if mag == 0 || mag > MAX_FACTOR_VALUE {
            continue;
        }
        let divs = divisors(mag);
        points.push((divs.len(), a, divs.iter().map(|&d| d as i64).collect()));
    }
    points.sort();

    for d in 2..=deg / 2 {
        if points.len() < d + 1 {
            return Search::GaveUp;
        }
        let chosen = &points[..d + 1];
        let total: u64 = chosen
            .iter()
            .enumerate()
            .map(|(i, (n, _, _))| if i == 0 { *n as u64 } else { 2 * *n as u64 })
            .product();
        if total > MAX_CANDIDATES {
            return Search::GaveUp;
        }
        let xs: Vec<i64> = chosen.iter().map(|(_, a, _)| *a).collect();
        let basis = lagrange_integer_basis(&xs);
        let choices: Vec<Vec<i64>> = chosen
            .iter()
            .enumerate()
            .map(|(i, (_, _, divs))| {
                if i == 0 {
                    // g and -g are both factors; fix the sign at the first point
                    divs.clone()
                } else {
                    divs.iter().flat_map(|&v| [v, -v]).collect()
                }
            })
            .collect();
        match search_combinations(&f, &basis, &choices) {
            Some(Some(g)) => return Search::Found(g),
            Some(None) => {}
            None => return Search::GaveUp,
        }
    }
    Search::Irreducible
}

/// Lagrange basis scaled to integers: returns `(w, B_k)` with
/// `w * L_k(x) = B_k(x)` for a common positive integer `w`.
struct IntBasis {
    w: i128,
    polys: Vec<Vec<i128>>,
}

fn lagrange_integer_basis(xs: &[i64]) -> IntBasis {
    let n = xs.len();
    let mut rat_polys = Vec::with_capacity(n);
    for k in 0..n {
        let mut num = Poly::one();
        let mut den = Rat::one();
        for (j, &xj) in xs.iter().enumerate() {
            if j == k {
                continue;
            }
            num = &num * &Poly::linear_root(&Rat::from_integer(xj.into()));
            den *= Rat::from_integer((xs[k] - xj).into());
        }
        rat_polys.push(num.scale(&den.recip()));
    }
    let w = rat_polys
        .iter()
        .flat_map(|p| p.coeffs().iter())
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let wr = Rat::from_integer(w.clone());
    let polys = rat_polys
        .iter()
        .map(|p| {
            let mut v: Vec<i128> = p
                .coeffs()
                .iter()
                .map(|c| (c * &wr).to_integer().to_i128().unwrap())
                .collect();
            v.resize(n, 0);
            v
        })
        .collect();
    IntBasis {
        w: w.to_i128().unwrap(),
        polys,
    }
}

// Some(Some(g)): factor found; Some(None): exhausted; None: overflow.
fn search_combinations(f: &Poly, basis: &IntBasis, choices: &[Vec<i64>]) -> Option<Option<Poly>> {
    let n = choices.len();
    let mut idx = vec![0usize; n];
    let mut acc = vec![0i128; n];
    loop {
        acc.iter_mut().for_each(|a| *a = 0);
        for (k, &i) in idx.iter().enumerate() {
            let v = choices[k][i] as i128;
            for (a, b) in acc.iter_mut().zip(&basis.polys[k]) {
                *a = a.checked_add(v.checked_mul(*b)?)?;
            }
        }
        if acc.iter().all(|a| a % basis.w == 0) {
            let g = Poly::from_ints(&acc.iter().map(|a| BigInt::from(a / basis.w)).collect::<Vec<_>>());
            if g.degree().is_some_and(|d| d >= 2) {
                let (_, r) = poly_divmod(f, &g).ok()?;
                if r.is_zero() {
                    let (q, _) = poly_divmod(f, &g).ok()?;
                    if q.coeffs().iter().all(|c| c.is_integer()) && q.degree() > Some(0) {
                        return Some(Some(g));
                    }
                }
            }
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == n {
                return Some(None);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rint;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    fn pairs(f: &Factorization) -> Vec<(Poly, usize)> {
        f.factors.iter().map(|x| (x.poly.clone(), x.multiplicity)).collect()
    }

    #[test]
    fn squarefree_already_factored() {
        let a = &p(&[0, 0, 1]) * &p(&[-1, 1]);
        let f = squarefree_factor(&a).unwrap();
        assert_eq!(f.unit, rint(1));
        assert_eq!(pairs(&f), vec![(p(&[0, 1]), 2), (p(&[-1, 1]), 1)]);
    }

    #[test]
    fn squarefree_constant() {
        let f = squarefree_factor(&p(&[5])).unwrap();
        assert_eq!(f.unit, rint(5));
        assert!(f.factors.is_empty());
        assert!(squarefree_factor(&Poly::zero()).is_err());
    }

    #[test]
    fn squarefree_expanded_input() {
        // x^5 + 2x^4 + x^3 = x^3 (x+1)^2
        let f = squarefree_factor(&p(&[0, 0, 0, 1, 2, 1])).unwrap();
        assert_eq!(pairs(&f), vec![(p(&[0, 1]), 3), (p(&[1, 1]), 2)]);
        assert_eq!(f.expand(), p(&[0, 0, 0, 1, 2, 1]));
    }

    #[test]
    fn squarefree_groups_same_multiplicity() {
        // 3 (x^2 - 1)(x^2 + 1)^3
        let a = (&p(&[-1, 0, 1]) * &p(&[1, 0, 1]).pow(3)).scale(&rint(3));
        let f = squarefree_factor(&a).unwrap();
        assert_eq!(pairs(&f), vec![(p(&[1, 0, 1]), 3), (p(&[-1, 0, 1]), 1)]);
        assert_eq!(f.factors[1].certainty, Certainty::UnverifiedBlock);
        assert_eq!(f.expand(), a);
    }

    #[test]
    fn refine_linear_split() {
        let f = squarefree_factor(&p(&[-1, 0, 1])).unwrap();
        let r = refine_factors(&f, 6);
        assert_eq!(pairs(&r), vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
        assert!(r.factors.iter().all(|x| x.certainty == Certainty::Linear));
    }

    #[test]
    fn refine_irreducible_quadratic() {
        let f = squarefree_factor(&p(&[1, 0, 1])).unwrap();
        let r = refine_factors(&f, 2);
        assert_eq!(r.factors[0].certainty, Certainty::ProvedIrreducible);
        let r0 = refine_factors(&f, 0);
        assert_eq!(r0.factors[0].certainty, Certainty::UnverifiedBlock);
    }

    #[test]
    fn refine_product_of_quadratics() {
        // (x^2 - 2)(x^2 - 3): hand expansion x^4 - 5x^2 + 6
        let a = p(&[6, 0, -5, 0, 1]);
        let f = squarefree_factor(&a).unwrap();
        let r = refine_factors(&f, 4);
        assert_eq!(pairs(&r), vec![(p(&[-3, 0, 1]), 1), (p(&[-2, 0, 1]), 1)]);
        assert!(r.factors.iter().all(|x| x.certainty == Certainty::ProvedIrreducible));
        assert_eq!(r.expand(), a);
        // below the cap the quartic stays a block
        let r3 = refine_factors(&f, 3);
        assert_eq!(r3.factors.len(), 1);
        assert_eq!(r3.factors[0].certainty, Certainty::UnverifiedBlock);
    }

    #[test]
    fn refine_quartic_irreducible_and_sextic_split() {
        // x^4 + 1 is irreducible over Q
        let r = refine_factors(&squarefree_factor(&p(&[1, 0, 0, 0, 1])).unwrap(), 6);
        assert_eq!(r.factors[0].certainty, Certainty::ProvedIrreducible);
        // (x^3 - 2)(x^3 + x + 1)
        let a = &p(&[-2, 0, 0, 1]) * &p(&[1, 1, 0, 1]);
        let r = refine_factors(&squarefree_factor(&a).unwrap(), 6);
        assert_eq!(r.factors.len(), 2);
        assert!(r.factors.iter().all(|x| x.certainty == Certainty::ProvedIrreducible));
        assert_eq!(r.expand(), a);
    }

    #[test]
    fn refine_mixed_multiplicities() {
        // 2 x^2 (x - 1)(x^2 + 1)^2
        let a = (&(&p(&[0, 0, 1]) * &p(&[-1, 1])) * &p(&[1, 0, 1]).pow(2)).scale(&rint(2));
        let r = refine_factors(&squarefree_factor(&a).unwrap(), 6);
        assert_eq!(r.expand(), a);
        assert!(!r.has_unverified());
        assert_eq!(r.factors.len(), 3);
    }
}
