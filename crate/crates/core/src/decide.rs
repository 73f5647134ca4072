//! Decision procedures modulo delay: inclusion, equivalence and variable
//! minimization.

mod game;
mod incl;
mod varmin;

pub use game::{solve_safety, Player, SafetyGame};
pub use incl::{build_d_in, check_equivalence, check_inclusion, union_context, Counterexample, DecideStats, Outcome, Verdict};
pub use varmin::{enumerate_bounded_subs, varmin_det, varmin_nondet, VarminCfg};
