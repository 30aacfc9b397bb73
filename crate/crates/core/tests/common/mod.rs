// Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use dfstab_core::exactalg::{rat, rint};
use dfstab_core::{OreOp, Poly, Rat, RatFun};
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p(c: &[i64]) -> Poly {
    Poly::from_i64(c)
}

pub fn rand_small_rat(r: &mut ChaCha8Rng) -> Rat {
    let n = r.gen_range(-6i64..=6);
    let d = r.gen_range(1i64..=4);
    rat(n, d)
}

/// Random polynomial of degree at most `deg` with small integer coefficients.
pub fn rand_poly(r: &mut ChaCha8Rng, deg: usize) -> Poly {
    Poly::new((0..=deg).map(|_| rint(r.gen_range(-4i64..=4))).collect())
}

/// Random polynomial of degree exactly `deg`.
pub fn rand_poly_exact(r: &mut ChaCha8Rng, deg: usize) -> Poly {
    loop {
        let q = rand_poly(r, deg);
        if q.degree() == Some(deg) {
            return q;
        }
    }
}

/// Monic product of `k` linear factors with small integer roots (repeats allowed).
pub fn rand_linear_product(r: &mut ChaCha8Rng, k: usize) -> (Poly, Vec<Rat>) {
    let roots: Vec<Rat> = (0..k).map(|_| rint(r.gen_range(-3i64..=3))).collect();
    let q = roots.iter().fold(Poly::one(), |acc, c| &acc * &Poly::linear_root(c));
    (q, roots)
}

/// Random operator of order exactly `order` with polynomial coefficients of
/// degree at most `deg`, whose leading coefficient splits into linear factors
/// over the integers. Returns the operator and the distinct roots of the
/// leading coefficient.
pub fn rand_operator(r: &mut ChaCha8Rng, order: usize, deg: usize) -> (OreOp, Vec<Rat>) {
    let k = r.gen_range(0..=deg.min(2));
    let (lc, mut roots) = rand_linear_product(r, k);
    let lc = lc.scale(&rint(r.gen_range(1i64..=3)));
    let mut coeffs: Vec<Poly> = (0..order).map(|_| rand_poly(r, deg)).collect();
    coeffs.push(lc);
    roots.sort();
    roots.dedup();
    (OreOp::from_polys(coeffs), roots)
}

/// Random rational function with a denominator that splits over the integers.
pub fn rand_ratfun(r: &mut ChaCha8Rng, num_deg: usize, poles: usize) -> RatFun {
    let (den, _) = rand_linear_product(r, poles);
    RatFun::new(rand_poly(r, num_deg), den).unwrap()
}

// ---------------------------------------------------------------------------
// Brute-force rational-solution oracle.
//
// Decides whether M(y) = p has a solution y = N/Q with Q the product of
// (x - c)^3 over the given roots and deg N <= 8 + deg Q (so every denominator
// dividing the roots' cube product with numerator degree <= 8 is covered).
// It shares no code with the library's solver: M(y) is evaluated at sample
// points through truncated Taylor series, and the linear system is reduced by
// a separate elimination routine.

fn horner(c: &[Rat], t: &Rat) -> Rat {
    c.iter().rev().fold(Rat::zero(), |acc, a| acc * t + a)
}

/// Taylor coefficients of `f` around `t` up to `h^(n-1)`, `f` given densely.
fn taylor(c: &[Rat], t: &Rat, n: usize) -> Vec<Rat> {
    // repeated synthetic division by (x - t)
    let mut work = c.to_vec();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        if work.is_empty() {
            out.push(Rat::zero());
            continue;
        }
        let mut acc = Rat::zero();
        let mut quotient = vec![Rat::zero(); work.len().saturating_sub(1)];
        for i in (0..work.len()).rev() {
            acc = acc * t + &work[i];
            if i > 0 {
                quotient[i - 1] = acc.clone();
            }
        }
        out.push(acc);
        work = quotient;
    }
    out
}

fn series_div(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len();
    let mut q = vec![Rat::zero(); n];
    for i in 0..n {
        let mut v = a[i].clone();
        for j in 1..=i {
            v -= &b[j] * &q[i - j];
        }
        q[i] = v / &b[0];
    }
    q
}

fn factorial(k: usize) -> Rat {
    (1..=k).fold(Rat::one(), |acc, i| acc * rint(i as i64))
}

fn dense(p: &Poly) -> Vec<Rat> {
    p.coeffs().to_vec()
}

/// Row reduction; true when `A v = b` is consistent.
fn consistent(mut rows: Vec<Vec<Rat>>) -> bool {
    let ncols = rows.first().map_or(0, |r| r.len() - 1);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let pr = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let f = &row[c] / &pr[c];
                for (v, pv) in row.iter_mut().zip(&pr) {
                    *v -= &f * pv;
                }
            }
        }
        rank += 1;
    }
    rows[rank..].iter().all(|r| r[ncols].is_zero())
}

/// See the module comment. `m` must have polynomial coefficients.
pub fn brute_force_solvable(m: &OreOp, rhs: &Poly, roots: &[Rat]) -> bool {
    let coeffs: Vec<Vec<Rat>> = m
        .coeffs()
        .iter()
        .map(|c| dense(c.as_polynomial().expect("polynomial coefficients")))
        .collect();
    let order = coeffs.len() - 1;
    let q = roots.iter().fold(vec![Rat::one()], |acc, c| {
        let mut out = acc;
        for _ in 0..3 {
            // multiply by (x - c)
            let mut next = vec![Rat::zero(); out.len() + 1];
            for (i, a) in out.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * c;
            }
            out = next;
        }
        out
    });
    let deg_q = q.len() - 1;
    let nmax = 8 + deg_q;
    let max_coeff_deg = coeffs.iter().map(|c| c.len()).max().unwrap_or(1);
    let npoints = max_coeff_deg + nmax + (order + 1) * deg_q + rhs.coeffs().len() + 8;
    // integer points away from the roots keep the entries small; each row is
    // scaled by Q(t)^(order+1) so that it is integral
    let points = (1i64..)
        .flat_map(|k| [k, -k])
        .map(rint)
        .filter(|t| !roots.contains(t))
        .take(npoints);
    let mut rows = Vec::with_capacity(npoints);
    for t in points {
        let qs = taylor(&q, &t, order + 1);
        let scale = (0..=order).fold(Rat::one(), |acc, _| acc * &qs[0]);
        let a: Vec<Rat> = coeffs.iter().map(|c| horner(c, &t)).collect();
        let mut row = Vec::with_capacity(nmax + 2);
        for k in 0..=nmax {
            let mut mono = vec![Rat::zero(); k + 1];
            mono[k] = Rat::one();
            let ys = series_div(&taylor(&mono, &t, order + 1), &qs);
            let val = (0..=order).fold(Rat::zero(), |acc, i| acc + &a[i] * &ys[i] * factorial(i));
            row.push(val * &scale);
        }
        row.push(horner(&dense(rhs), &t) * &scale);
        rows.push(row);
    }
    consistent(rows)
}
