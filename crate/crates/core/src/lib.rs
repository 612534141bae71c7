//! Quasi-Newton minimization with the self-scaled Broyden family.
//!
//! Six update rules are provided: BFGS, DFP and the Broyden family member
//! with a per-iteration `theta`, each with or without Oren-Luenberger style
//! self-scaling (`SSBFGS`, `SSDFP`, `SSBroyden`). Every solver pairs the
//! update with a strong-Wolfe zoom line search and counts outer iterations
//! separately from line-search evaluations.
//!
//! ```
//! use ssbroyden::{problems::RosenbrockProblem, solve, SolverConfig, UpdateVariant};
//!
//! let problem = RosenbrockProblem::new(2).unwrap();
//! let config = SolverConfig::new(UpdateVariant::SsBroyden).with_grad_tol(1e-6);
//! let solution = solve(&problem, &problem.default_start(), config).unwrap();
//! assert!(solution.state.g.norm_inf() <= 1e-6);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod linalg;
pub mod linesearch;
pub mod problems;
pub mod solver;
pub mod updates;

pub use error::{Error, Result};
pub use linalg::{CountingObjective, Objective, SymMatrix, Vector};
pub use linesearch::{LineSearchOutcome, LineSearchParams, LineSearchStatus};
pub use solver::{
    solve, ConvergenceTrace, Counters, H0Scaling, IterationRecord, Solution, Solver, SolverConfig,
    SolverState, TerminationStatus,
};
pub use updates::{UpdateRule, UpdateVariant};
