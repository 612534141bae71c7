//! The quasi-Newton driver.
//!
//! Each outer iteration computes `d = -H g`, runs the strong-Wolfe line
//! search along `d`, and updates `H` with the configured family member. Outer
//! iterations and line-search evaluations are counted separately.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Objective, SymMatrix, Vector};
use crate::linesearch::{self, LineSearchParams, LineSearchStatus, ScalarRestriction};
use crate::updates::{self, UpdateRule, UpdateVariant, CURVATURE_EPS};

/// Initial inverse Hessian strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum H0Scaling {
    Identity,
    /// Start from the identity and rescale it by `y's / y'y` just before the
    /// first update.
    ScaledIdentity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub variant: UpdateVariant,
    /// Stop once `|g|_inf <= grad_tol`.
    pub grad_tol: f64,
    pub max_iters: usize,
    pub line_search: LineSearchParams,
    pub h0_scaling: H0Scaling,
    pub curvature_eps: f64,
    /// Replaces the variant's update rule. Used to check that the general
    /// form reproduces the specialized ones.
    pub rule_override: Option<UpdateRule>,
}

impl SolverConfig {
    pub fn new(variant: UpdateVariant) -> Self {
        SolverConfig {
            variant,
            grad_tol: 1e-8,
            max_iters: 1000,
            line_search: LineSearchParams::default(),
            h0_scaling: H0Scaling::Identity,
            curvature_eps: CURVATURE_EPS,
            rule_override: None,
        }
    }

    pub fn with_grad_tol(mut self, tol: f64) -> Self {
        self.grad_tol = tol;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_line_search(mut self, params: LineSearchParams) -> Self {
        self.line_search = params;
        self
    }

    pub fn with_h0_scaling(mut self, scaling: H0Scaling) -> Self {
        self.h0_scaling = scaling;
        self
    }

    pub fn rule(&self) -> UpdateRule {
        self.rule_override.unwrap_or_else(|| self.variant.rule())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidParameters("grad_tol must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameters(
                "max_iters must be at least 1".into(),
            ));
        }
        self.line_search.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub x: Vector,
    pub f: f64,
    pub g: Vector,
    pub h_inv: SymMatrix,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub qn_iters: usize,
    pub f_evals: usize,
    pub g_evals: usize,
    /// Line-search trial evaluations over the whole run.
    pub ls_steps: usize,
    pub update_skips: usize,
    pub tau_fallbacks: usize,
    /// Times `H` was reset to the identity because `-H g` was not a descent
    /// direction.
    pub h_resets: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub f: f64,
    pub gnorm_inf: f64,
    pub gnorm_2: f64,
    pub alpha: f64,
    /// `NaN` when the update was skipped before `theta` was computed.
    pub theta: f64,
    pub tau: f64,
    pub ls_evals: usize,
    pub ls_status: LineSearchStatus,
    pub skipped: bool,
    pub tau_fallback: bool,
    pub h_reset: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationStatus {
    Converged,
    MaxIters,
    LineSearchFailure,
}

impl TerminationStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminationStatus::Converged => "converged",
            TerminationStatus::MaxIters => "max_iters",
            TerminationStatus::LineSearchFailure => "line_search_failure",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub initial_f: f64,
    pub initial_gnorm_inf: f64,
    pub records: Vec<IterationRecord>,
    pub status: TerminationStatus,
}

/// `|g|_inf <= tol`.
pub fn convergence_check(g: &Vector, tol: f64) -> bool {
    g.norm_inf() <= tol
}

/// Evaluates the objective at `x0` and sets `H0 = I`.
pub fn init_state<O: Objective + ?Sized>(problem: &O, x0: &Vector) -> Result<SolverState> {
    if x0.len() != problem.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.dim(),
            found: x0.len(),
        });
    }
    if !x0.is_finite() {
        return Err(Error::InvalidStart("starting point is not finite".into()));
    }
    let (f, g) = problem
        .value_and_gradient(x0)
        .map_err(|e| Error::InvalidStart(e.to_string()))?;
    Ok(SolverState {
        x: x0.clone(),
        f,
        g,
        h_inv: SymMatrix::identity(x0.len()),
        k: 0,
    })
}

/// A single solver run, advanced one outer iteration at a time.
pub struct Solver<'a, O: Objective + ?Sized> {
    problem: &'a O,
    config: SolverConfig,
    rule: UpdateRule,
    state: SolverState,
    counters: Counters,
    updated_once: bool,
}

impl<'a, O: Objective + ?Sized> Solver<'a, O> {
    pub fn new(problem: &'a O, x0: &Vector, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let state = init_state(problem, x0)?;
        Ok(Solver {
            problem,
            rule: config.rule(),
            config,
            state,
            counters: Counters {
                f_evals: 1,
                g_evals: 1,
                ..Counters::default()
            },
            updated_once: false,
        })
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn converged(&self) -> bool {
        convergence_check(&self.state.g, self.config.grad_tol)
    }

    /// Current search direction `-H g`.
    pub fn direction(&self) -> Result<Vector> {
        Ok(self.state.h_inv.matvec(&self.state.g)?.scaled(-1.0))
    }

    /// Performs one outer iteration.
    ///
    /// Fails with [`Error::LineSearchFailure`] when the line search returns no
    /// point with sufficient decrease; the state is left unchanged then.
    pub fn step(&mut self) -> Result<IterationRecord> {
        let n = self.state.x.len();
        let mut h_reset = false;
        let mut d = self.direction()?;
        let descent = d.dot(&self.state.g)?;
        if !(descent < 0.0) || !d.is_finite() {
            self.state.h_inv = SymMatrix::identity(n);
            self.counters.h_resets += 1;
            h_reset = true;
            d = self.state.g.scaled(-1.0);
        }

        let outcome = {
            let mut restriction = ScalarRestriction::new(
                self.problem,
                &self.state.x,
                self.state.f,
                &self.state.g,
                &d,
            )?;
            let res = linesearch::search(&mut restriction, &self.config.line_search);
            let evals = restriction.evaluations();
            self.counters.ls_steps += evals;
            self.counters.f_evals += evals;
            self.counters.g_evals += evals;
            res?
        };
        if outcome.status != LineSearchStatus::WolfeSatisfied && !outcome.sufficient_decrease {
            return Err(Error::LineSearchFailure);
        }

        let x_new = self.state.x.axpy(outcome.alpha, &d)?;
        let s = d.scaled(outcome.alpha);
        let y = outcome.g_new.sub(&self.state.g)?;

        let mut theta = f64::NAN;
        let mut tau = f64::NAN;
        let mut skipped = true;
        let mut tau_fallback = false;
        if updates::curvature_guard(&s, &y, self.config.curvature_eps) {
            if !self.updated_once && self.config.h0_scaling == H0Scaling::ScaledIdentity {
                let scale = y.dot(&s)? / y.dot(&y)?;
                self.state.h_inv.scale(scale);
            }
            match updates::update_inverse_hessian(
                &self.rule,
                &self.state.h_inv,
                &s,
                &y,
                &self.state.g,
                outcome.alpha,
            ) {
                Ok(up) => {
                    theta = up.coefficients.theta.theta;
                    tau = up.coefficients.tau.tau;
                    tau_fallback = up.tau_fallback;
                    self.state.h_inv = up.h_inv;
                    self.updated_once = true;
                    skipped = false;
                }
                Err(
                    Error::CurvatureViolation { .. }
                    | Error::LostPositiveDefiniteness { .. }
                    | Error::SingularUpdate { .. },
                ) => {}
                Err(e) => return Err(e),
            }
        }
        if skipped {
            self.counters.update_skips += 1;
        }
        if tau_fallback {
            self.counters.tau_fallbacks += 1;
        }

        self.state.x = x_new;
        self.state.f = outcome.f_new;
        self.state.g = outcome.g_new;
        self.state.k += 1;
        self.counters.qn_iters += 1;

        Ok(IterationRecord {
            k: self.state.k,
            f: self.state.f,
            gnorm_inf: self.state.g.norm_inf(),
            gnorm_2: self.state.g.norm2(),
            alpha: outcome.alpha,
            theta,
            tau,
            ls_evals: outcome.n_evals,
            ls_status: outcome.status,
            skipped,
            tau_fallback,
            h_reset,
        })
    }

    /// Iterates until convergence, the iteration cap, or a line-search failure.
    pub fn run(mut self) -> Result<Solution> {
        let initial_f = self.state.f;
        let initial_gnorm_inf = self.state.g.norm_inf();
        let mut records = Vec::new();
        let status = loop {
            if self.converged() {
                break TerminationStatus::Converged;
            }
            if self.state.k >= self.config.max_iters {
                break TerminationStatus::MaxIters;
            }
            match self.step() {
                Ok(record) => records.push(record),
                Err(Error::LineSearchFailure) => break TerminationStatus::LineSearchFailure,
                Err(e) => return Err(e),
            }
        };
        Ok(Solution {
            trace: ConvergenceTrace {
                initial_f,
                initial_gnorm_inf,
                records,
                status,
            },
            state: self.state,
            counters: self.counters,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub trace: ConvergenceTrace,
    pub state: SolverState,
    pub counters: Counters,
}

impl Solution {
    pub fn status(&self) -> TerminationStatus {
        self.trace.status
    }
}

/// Minimizes `problem` from `x0`.
pub fn solve<O: Objective + ?Sized>(
    problem: &O,
    x0: &Vector,
    config: SolverConfig,
) -> Result<Solution> {
    Solver::new(problem, x0, config)?.run()
}
