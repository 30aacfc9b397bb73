//! Principal integrals, stability indices and the closed forms for special
//! operator families.
//!
//! Everything that needs rational solutions goes through an [`Analyzer`],
//! which owns the solver cache for one analysis. The closed forms
//! ([`bound_b`], [`katz_sind`], [`inv_q_profile`], the first-order bounds)
//! are plain functions.

mod chain;
mod first_order;
mod sind;

pub use chain::{
    integral_from_certificate, left_divide_by_d, verify_chain_identity, verify_chain_steps, ChainReport, ChainStep,
    StepCase,
};
pub use first_order::{
    first_order_coefficient, first_order_sind_bounds, first_order_stable, inv_q_profile, inv_q_profile_to,
    FirstOrderBounds, NormalForm, StabilityVerdict,
};
pub use sind::{bound_b, katz_operator, katz_sind, SindReport};

use crate::ratsols::RationalSolver;
use crate::Settings;

/// One analysis context: a rational-solution cache plus the settings it was
/// built with. Contexts share nothing and can run on separate threads.
#[derive(Debug, Clone, Default)]
pub struct Analyzer {
    solver: RationalSolver,
}

impl Analyzer {
    pub fn new(settings: Settings) -> Self {
        Analyzer {
            solver: RationalSolver::new(settings),
        }
    }

    pub fn settings(&self) -> Settings {
        self.solver.settings()
    }

    pub fn solver(&mut self) -> &mut RationalSolver {
        &mut self.solver
    }
}
