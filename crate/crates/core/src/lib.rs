//! Exact arithmetic for linear differential operators with rational-function
//! coefficients over the rationals.
//!
//! The crate is layered bottom-up:
//!
//! * [`exactalg`]: rationals, dense polynomials, gcd, square-free
//!   decomposition, factor refinement, rational roots and a small exact
//!   linear solver.
//! * [`ratfun`]: reduced rational functions with local data (orders, residues,
//!   simple poles with negative integer residue), Hermite reduction.
//! * [`ore`]: the operator ring `Q(x)<D>` with `D*f = f*D + f'`, adjoints,
//!   application, denominator clearing and indicial data.
//! * [`ratsols`]: rational solutions of `M(y) = p` for polynomial `p`.
//! * [`stability`]: principal integrals and chains, the bound `B(L)`, exact
//!   stability indices and closed forms for special families.
//! * [`parse`]: the textual operator grammar and its printer.

pub mod error;
pub mod exactalg;
pub mod ore;
pub mod parse;
pub mod ratfun;
pub mod ratsols;
pub mod stability;

pub use error::{Error, Result};
pub use exactalg::{Poly, Rat};
pub use ore::OreOp;
pub use ratfun::RatFun;

/// Tunables shared by every analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    /// Largest degree for which square-free blocks are split (or certified
    /// irreducible) by exhaustive search. `0` disables the search.
    pub factor_cap: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { factor_cap: 6 }
    }
}
