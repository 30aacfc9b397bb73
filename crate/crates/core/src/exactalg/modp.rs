//! Arithmetic in `F_p` for word-sized primes: cheap certificates
//! (coprimality, square-freeness), the base of Hensel lifting, and the
//! modular gcd of integer polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn pow_mod(base: u64, mut e: u64, n: u64) -> u64 {
    let (mut b, mut acc, n) = (base as u128 % n as u128, 1u128, n as u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % n;
        }
        b = b * b % n;
        e >>= 1;
    }
    acc as u64
}

/// Miller-Rabin with bases 2, 3, 5, 7: deterministic below 3 215 031 751.
pub(crate) fn is_prime(n: u64) -> bool {
    assert!(n < 3_215_031_751, "primality test only certified for 32-bit inputs");
    if n < 2 {
        return false;
    }
    for q in [2, 3, 5, 7] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    [2, 3, 5, 7].iter().all(|&a| {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                return true;
            }
        }
        false
    })
}

/// Primes below `2^31`, largest first, so products fit comfortably in `u128`.
fn word_primes() -> impl Iterator<Item = u64> {
    (1u64 << 20..1 << 31).rev().filter(|&n| n % 2 == 1 && is_prime(n))
}

pub(crate) fn mod_u64(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

pub(crate) fn eval_mod_u64(ints: &[BigInt], x: u64, p: u64) -> u64 {
    ints.iter().rev().fold(0u64, |acc, c| {
        ((acc as u128 * x as u128 + mod_u64(c, p) as u128) % p as u128) as u64
    })
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn inv_mod_u64(a: u64, p: u64) -> u64 {
    // Fermat
    pow_mod(a, p - 2, p)
}

/// Degree of `gcd(a, b)` over `F_p`; `b = 0` gives the degree of `a`.
pub(crate) fn gcd_degree_mod(a: Vec<u64>, b: Vec<u64>, p: u64) -> usize {
    gcd_mod(a, b, p).len().saturating_sub(1)
}

/// Monic `gcd(a, b)` over `F_p` (empty when both vanish).
fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = inv_mod_u64(*b.last().unwrap(), p) as u128;
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let q = (*a.last().unwrap() as u128 * inv % p as u128) as u64;
            for (i, &c) in b.iter().enumerate() {
                let sub = (q as u128 * c as u128 % p as u128) as u64;
                a[i + shift] = (a[i + shift] + p - sub) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lead) = a.last() {
        let inv = inv_mod_u64(lead, p) as u128;
        for c in a.iter_mut() {
            *c = (*c as u128 * inv % p as u128) as u64;
        }
    }
    a
}

/// `f` reduced modulo `p`, lowest degree first.
pub(crate) fn reduce(f: &[BigInt], p: u64) -> Vec<u64> {
    f.iter().map(|c| mod_u64(c, p)).collect()
}

/// `q` with `a = q b` over the integers, or `None`; fails fast on the first
/// non-integral quotient coefficient.
fn exact_quotient(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); (a.len() + 1).saturating_sub(b.len())];
    while r.len() >= b.len() {
        let (c, rem) = r.last().unwrap().div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        let shift = r.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r.is_empty().then_some(q)
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if v.last().is_some_and(|c| c.is_negative()) {
        content = -content;
    }
    if !content.is_one() {
        for c in v.iter_mut() {
            *c /= &content;
        }
    }
    v
}

/// Primitive gcd (positive leading coefficient) of two nonzero integer
/// polynomials, lowest degree first.
///
/// Images modulo word primes not dividing either leading coefficient are
/// scaled by `gamma = gcd(lc a, lc b)`, which the leading coefficient of the
/// true gcd divides, and combined by the Chinese remainder theorem; primes
/// giving a larger degree than seen before are unlucky and skipped. Once the
/// symmetric reconstruction stops changing it is confirmed by exact trial
/// division, so the result never depends on a coefficient bound.
pub(crate) fn modular_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (la, lb) = (a.last().unwrap(), b.last().unwrap());
    let gamma = la.gcd(lb);
    let mut best = usize::MAX;
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut previous: Option<Vec<BigInt>> = None;
    for p in word_primes() {
        if mod_u64(la, p) == 0 || mod_u64(lb, p) == 0 {
            continue;
        }
        let g = gcd_mod(reduce(a, p), reduce(b, p), p);
        let deg = g.len() - 1;
        if deg == 0 {
            return vec![BigInt::one()];
        }
        if deg > best {
            continue;
        }
        let gm = mod_u64(&gamma, p) as u128;
        let image: Vec<u64> = g.iter().map(|&c| (c as u128 * gm % p as u128) as u64).collect();
        if deg < best {
            best = deg;
            acc = image.iter().map(|&c| BigInt::from(c)).collect();
            modulus = BigInt::from(p);
            previous = None;
            continue;
        }
        // x = acc + M t with t = (image - acc) / M mod p
        let m_inv = inv_mod_u64(mod_u64(&modulus, p), p) as u128;
        for (c, &r) in acc.iter_mut().zip(&image) {
            let diff = (r + p - mod_u64(c, p)) % p;
            let t = (diff as u128 * m_inv % p as u128) as u64;
            *c += &modulus * t;
        }
        modulus *= p;
        let half = &modulus >> 1;
        let sym: Vec<BigInt> = acc
            .iter()
            .map(|c| if *c > half { c - &modulus } else { c.clone() })
            .collect();
        if previous.as_ref() == Some(&sym) {
            let candidate = primitive(sym.clone());
            if exact_quotient(a, &candidate).is_some() && exact_quotient(b, &candidate).is_some() {
                return candidate;
            }
        }
        previous = Some(sym);
    }
    unreachable!("ran out of word primes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn primality() {
        assert!(is_prime(2_147_483_647));
        let by_trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in (0..2000).chain(2_147_480_000..2_147_483_648) {
            assert_eq!(is_prime(n), by_trial(n), "{n}");
        }
    }

    #[test]
    fn modular_gcd_examples() {
        // (2x + 3)(x - 1) and (2x + 3)(3x + 5)
        assert_eq!(modular_gcd(&ints(&[-3, 1, 2]), &ints(&[15, 19, 6])), ints(&[3, 2]));
        assert_eq!(modular_gcd(&ints(&[-1, 0, 1]), &ints(&[0, 1])), ints(&[1]));
        // a common factor with coefficients far beyond one word
        let big: BigInt = BigInt::from(10).pow(40u32) + 7;
        let f = vec![big.clone(), BigInt::from(3), BigInt::from(5)];
        let mul = |u: &[BigInt], v: &[BigInt]| {
            let mut w = vec![BigInt::zero(); u.len() + v.len() - 1];
            for (i, x) in u.iter().enumerate() {
                for (j, y) in v.iter().enumerate() {
                    w[i + j] += x * y;
                }
            }
            w
        };
        let a = mul(&f, &ints(&[-2, 7, 1]));
        let b = mul(&mul(&f, &f), &ints(&[4, 0, -3]));
        assert_eq!(modular_gcd(&a, &b), f);
        // x - p and x - 2p agree modulo p but not over the integers
        let p = 2_147_483_647;
        assert_eq!(modular_gcd(&ints(&[-p, 1]), &ints(&[-2 * p, 1])), ints(&[1]));
    }
}
