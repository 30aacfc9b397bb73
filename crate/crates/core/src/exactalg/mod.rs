//! Exact scalar and univariate polynomial arithmetic over the rationals.

mod factor;
pub mod linalg;
mod modp;
pub(crate) mod poly;
mod roots;

pub use factor::{refine_factors, squarefree_factor, Certainty, Factor, Factorization};
pub use poly::{poly_divmod, poly_ext_gcd, poly_gcd, poly_lcm, Poly};
pub use roots::{integer_roots, rational_roots};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

/// `n/d` as a [`Rat`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rat`].
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical `a/b` rendering (`a` for integers).
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Returns `Some(n)` if `r` is an integer fitting in `i64`.
pub fn rat_to_i64(r: &Rat) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    i64::try_from(r.numer()).ok()
}

/// `s (s-1) ... (s-j+1)` evaluated at a rational point.
pub fn falling_factorial(s: &Rat, j: usize) -> Rat {
    let mut acc = Rat::one();
    let mut t = s.clone();
    for _ in 0..j {
        acc *= &t;
        t -= Rat::one();
    }
    acc
}

/// Binomial coefficient as a rational.
pub fn binomial(n: usize, k: usize) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rat::from_integer(acc)
}

pub(crate) fn is_negative_integer(r: &Rat) -> bool {
    r.is_integer() && r.is_negative()
}

pub(crate) fn is_positive_integer(r: &Rat) -> bool {
    r.is_integer() && r.is_positive()
}
