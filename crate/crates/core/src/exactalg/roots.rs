//! Rational root extraction by modular lifting.
//!
//! A rational root `a/b` in lowest terms of a square-free integer polynomial
//! `f` has `|a| <= |f(0)|` and `b <= |lc f|`, and reduces to a simple root of
//! `f` modulo any prime `p` with `p` not dividing `lc f` and `f mod p`
//! square-free. Such roots are found by evaluation, lifted by Newton
//! iteration past `2 max(|f(0)|, |lc f|)^2`, turned back into fractions by
//! rational reconstruction and checked exactly. No integer factorisation is
//! needed, so large coefficients are fine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{eval_mod_u64, gcd_degree_mod, is_prime, mod_u64};
use super::{squarefree_factor, Poly, Rat};
use crate::error::{Error, Result};

/// All rational roots of `a` with exact multiplicities, sorted by decreasing value.
pub fn rational_roots(a: &Poly) -> Result<Vec<(Rat, usize)>> {
    if a.is_zero() {
        return Err(Error::ZeroInput("rational roots of the zero polynomial"));
    }
    let sqf = squarefree_factor(a)?;
    let mut out = Vec::new();
    for f in &sqf.factors {
        for r in squarefree_rational_roots(&f.poly) {
            out.push((r, f.multiplicity));
        }
    }
    out.sort_by(|x, y| y.0.cmp(&x.0));
    Ok(out)
}

/// Distinct integer roots of `a` in increasing order. The zero polynomial has none.
pub fn integer_roots(a: &Poly) -> Result<Vec<BigInt>> {
    if a.is_zero() {
        return Ok(Vec::new());
    }
    let mut roots: Vec<BigInt> = rational_roots(a)?
        .into_iter()
        .filter(|(r, _)| r.is_integer())
        .map(|(r, _)| r.to_integer())
        .collect();
    roots.sort();
    Ok(roots)
}

fn squarefree_rational_roots(p: &Poly) -> Vec<Rat> {
    let (_, mut ints) = p.primitive_integer();
    let mut found = Vec::new();
    if ints.first().is_some_and(|c| c.is_zero()) {
        found.push(Rat::zero());
        ints.remove(0);
    }
    match ints.len() {
        0 | 1 => return found,
        2 => {
            found.push(Rat::new(-ints[0].clone(), ints[1].clone()));
            return found;
        }
        _ => {}
    }
    let prime = good_prime(&ints).expect("a square-free polynomial has finitely many bad primes");
    let bound = ints[0].abs().max(ints.last().unwrap().abs());
    let target = &bound * &bound * 2;
    let p = BigInt::from(prime);
    let df: Vec<BigInt> = ints
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    for r0 in (0..prime).filter(|&r| eval_mod_u64(&ints, r, prime) == 0) {
        let root = lift(&ints, &df, BigInt::from(r0), &p, &target);
        let (root, modulus) = root;
        if let Some((a, b)) = reconstruct(&root, &modulus) {
            if homogeneous_eval(&ints, &a, &b).is_zero() {
                found.push(Rat::new(a, b));
            }
        }
    }
    found
}

/// The first prime above 100 not dividing the leading coefficient and
/// keeping the polynomial square-free.
fn good_prime(ints: &[BigInt]) -> Option<u64> {
    (101u64..1 << 31).filter(|&n| is_prime(n)).find(|&p| {
        let f: Vec<u64> = ints.iter().map(|c| mod_u64(c, p)).collect();
        if *f.last().unwrap() == 0 {
            return false;
        }
        let df: Vec<u64> = f
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ((c as u128 * i as u128) % p as u128) as u64)
            .collect();
        gcd_degree_mod(f, df, p) == 0
    })
}

fn eval_mod(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| (acc * x + a).mod_floor(m))
}

/// Newton iteration from a simple root modulo `p` until the modulus exceeds
/// `target`. Returns the lifted root and its modulus.
fn lift(f: &[BigInt], df: &[BigInt], mut r: BigInt, p: &BigInt, target: &BigInt) -> (BigInt, BigInt) {
    let mut m = p.clone();
    while &m <= target {
        m = &m * &m;
        let fv = eval_mod(f, &r, &m);
        let dv = eval_mod(df, &r, &m);
        let inv = dv.extended_gcd(&m).x.mod_floor(&m);
        r = (&r - fv * inv).mod_floor(&m);
    }
    (r, m)
}

/// `(a, b)` with `a = b r (mod m)`, `b > 0` and `2 a^2, 2 b^2 < m`, if any.
fn reconstruct(r: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (m.clone(), r.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &(&r1 * &r1 * 2) >= m {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &(&t1 * &t1 * 2) >= m {
        return None;
    }
    let (a, b) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    (a.gcd(&b).is_one()).then_some((a, b))
}

/// `b^n f(a/b)`.
fn homogeneous_eval(f: &[BigInt], a: &BigInt, b: &BigInt) -> BigInt {
    let n = f.len() - 1;
    let mut acc = BigInt::zero();
    let mut bp = BigInt::one();
    let mut terms = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        terms.push(bp.clone());
        bp *= b;
    }
    let mut ap = BigInt::one();
    for (i, c) in f.iter().enumerate() {
        acc += c * &ap * &terms[n - i];
        ap *= a;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rint};

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn simple_roots() {
        assert_eq!(
            rational_roots(&p(&[-1, 0, 1])).unwrap(),
            vec![(rint(1), 1), (rint(-1), 1)]
        );
        assert!(rational_roots(&p(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn repeated_fractional_root() {
        // (2x-1)^2 (x+3)
        let q = &p(&[-1, 2]).pow(2) * &p(&[3, 1]);
        assert_eq!(rational_roots(&q).unwrap(), vec![(rat(1, 2), 2), (rint(-3), 1)]);
    }

    #[test]
    fn zero_input_rejected() {
        assert!(rational_roots(&Poly::zero()).is_err());
    }

    #[test]
    fn large_coefficients_and_close_roots() {
        // (1000x - 999)(999x - 998)(x^2 + 7)
        let q = &(&p(&[-999, 1000]) * &p(&[-998, 999])) * &p(&[7, 0, 1]);
        let roots = rational_roots(&q).unwrap();
        assert_eq!(roots, vec![(rat(999, 1000), 1), (rat(998, 999), 1)]);
    }

    #[test]
    fn root_at_bisection_midpoint() {
        let q = &p(&[0, 1]) * &p(&[-1, 1]);
        let roots = rational_roots(&q).unwrap();
        assert_eq!(roots, vec![(rint(1), 1), (rint(0), 1)]);
    }

    #[test]
    fn huge_coefficients() {
        // (123456789012345 x - 98765432109876)(x^3 + 2x + 7)(x + 11/13)
        let q = &(&p(&[-98765432109876, 123456789012345]) * &p(&[7, 2, 0, 1])) * &p(&[11, 13]);
        let roots = rational_roots(&q).unwrap();
        assert_eq!(
            roots,
            vec![(rat(98765432109876, 123456789012345), 1), (rat(-11, 13), 1)]
        );
    }

    #[test]
    fn products_of_known_factors() {
        // deterministic sweep over small fractions, with and without a rootless cofactor
        for k in 0..60i64 {
            let a = rat((k * 7) % 23 - 11, 1 + (k * 5) % 9);
            let b = rat((k * 3) % 17 - 8, 1 + (k * 11) % 7);
            let mut q = &Poly::linear_root(&a) * &Poly::linear_root(&b).pow(2);
            if k % 2 == 0 {
                q = &q * &p(&[k + 1, 0, 1]);
            }
            let mut expected = if a == b { vec![(a, 3)] } else { vec![(a, 1), (b, 2)] };
            expected.sort_by(|x, y| y.0.cmp(&x.0));
            assert_eq!(rational_roots(&q).unwrap(), expected, "{q}");
        }
    }

    #[test]
    fn integer_roots_only() {
        let q = &(&p(&[-1, 2]) * &p(&[3, 1])) * &p(&[-5, 1]);
        assert_eq!(integer_roots(&q).unwrap(), vec![BigInt::from(-3), BigInt::from(5)]);
    }
}
