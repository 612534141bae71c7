//! Strong-Wolfe line search: bracketing followed by zoom, with safeguarded
//! cubic interpolation inside the bracket.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Objective, Vector};

/// Trial points never land closer than this fraction of the bracket width to
/// either end.
pub const SAFEGUARD_FRACTION: f64 = 0.1;
/// Bracket growth factor during the bracketing stage.
pub const EXPANSION_FACTOR: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSearchParams {
    /// Sufficient decrease constant.
    pub c1: f64,
    /// Curvature constant.
    pub c2: f64,
    pub alpha_init: f64,
    pub alpha_max: f64,
    pub max_bracket_iters: usize,
    pub max_zoom_iters: usize,
}

impl Default for LineSearchParams {
    fn default() -> Self {
        LineSearchParams {
            c1: 1e-4,
            c2: 0.9,
            alpha_init: 1.0,
            alpha_max: 1e10,
            max_bracket_iters: 20,
            max_zoom_iters: 30,
        }
    }
}

impl LineSearchParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.c1 && self.c1 < self.c2 && self.c2 < 1.0) {
            return Err(Error::InvalidParameters(format!(
                "need 0 < c1 < c2 < 1, got c1 = {}, c2 = {}",
                self.c1, self.c2
            )));
        }
        if !(0.0 < self.alpha_init && self.alpha_init <= self.alpha_max) {
            return Err(Error::InvalidParameters(format!(
                "need 0 < alpha_init <= alpha_max, got {} and {}",
                self.alpha_init, self.alpha_max
            )));
        }
        if self.max_bracket_iters == 0 {
            return Err(Error::InvalidParameters(
                "max_bracket_iters must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of [`wolfe_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WolfeCheck {
    pub armijo: bool,
    pub curvature: bool,
}

impl WolfeCheck {
    pub fn strong_wolfe(self) -> bool {
        self.armijo && self.curvature
    }
}

/// Evaluates both strong Wolfe inequalities for a step `alpha`.
pub fn wolfe_check(
    phi0: f64,
    dphi0: f64,
    alpha: f64,
    phi_a: f64,
    dphi_a: f64,
    c1: f64,
    c2: f64,
) -> WolfeCheck {
    WolfeCheck {
        armijo: phi_a <= phi0 + c1 * alpha * dphi0,
        curvature: dphi_a.abs() <= c2 * dphi0.abs(),
    }
}

/// A sample `(alpha, phi(alpha), phi'(alpha))` of the one-dimensional restriction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinePoint {
    pub alpha: f64,
    pub phi: f64,
    pub dphi: f64,
}

impl LinePoint {
    pub fn new(alpha: f64, phi: f64, dphi: f64) -> Self {
        LinePoint { alpha, phi, dphi }
    }
}

/// Minimizer of the cubic Hermite interpolant through `lo` and `hi`, kept at
/// least 10% of the bracket width away from either end. Falls back to the
/// midpoint when the cubic has no minimizer inside the bracket.
pub fn interpolate_trial(lo: LinePoint, hi: LinePoint) -> f64 {
    let left = lo.alpha.min(hi.alpha);
    let right = lo.alpha.max(hi.alpha);
    let width = right - left;
    let midpoint = 0.5 * (left + right);

    let d1 = lo.dphi + hi.dphi - 3.0 * (lo.phi - hi.phi) / (lo.alpha - hi.alpha);
    let disc = d1 * d1 - lo.dphi * hi.dphi;
    if !(disc >= 0.0) {
        return midpoint;
    }
    let d2 = (hi.alpha - lo.alpha).signum() * disc.sqrt();
    let denom = hi.dphi - lo.dphi + 2.0 * d2;
    if denom == 0.0 || !denom.is_finite() {
        return midpoint;
    }
    let trial = hi.alpha - (hi.alpha - lo.alpha) * (hi.dphi + d2 - d1) / denom;
    if !trial.is_finite() || trial <= left || trial >= right {
        return midpoint;
    }
    let band = SAFEGUARD_FRACTION * width;
    trial.clamp(left + band, right - band)
}

/// `phi(alpha) = f(x + alpha d)` along a descent direction.
pub struct ScalarRestriction<'a, O: Objective + ?Sized> {
    objective: &'a O,
    x: &'a Vector,
    d: &'a Vector,
    phi0: f64,
    dphi0: f64,
    evals: usize,
}

/// One evaluated trial step.
#[derive(Clone, Debug)]
struct Trial {
    point: LinePoint,
    gradient: Option<Vector>,
}

impl<'a, O: Objective + ?Sized> ScalarRestriction<'a, O> {
    /// `f0` and `g0` must be the value and gradient at `x`.
    pub fn new(
        objective: &'a O,
        x: &'a Vector,
        f0: f64,
        g0: &Vector,
        d: &'a Vector,
    ) -> Result<Self> {
        if x.len() != objective.dim() {
            return Err(Error::DimensionMismatch {
                expected: objective.dim(),
                found: x.len(),
            });
        }
        let dphi0 = d.dot(g0)?;
        if !(dphi0 < 0.0) {
            return Err(Error::NotDescent { slope: dphi0 });
        }
        Ok(ScalarRestriction {
            objective,
            x,
            d,
            phi0: f0,
            dphi0,
            evals: 0,
        })
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn dphi0(&self) -> f64 {
        self.dphi0
    }

    pub fn evaluations(&self) -> usize {
        self.evals
    }

    /// Point `x + alpha d`.
    pub fn point(&self, alpha: f64) -> Vector {
        self.x
            .axpy(alpha, self.d)
            .expect("lengths checked at construction")
    }

    /// A non-finite evaluation is reported as `phi = +inf` so that the search
    /// treats it as a failed step rather than a broken problem.
    fn evaluate(&mut self, alpha: f64) -> Result<Trial> {
        self.evals += 1;
        match self.objective.value_and_gradient(&self.point(alpha)) {
            Ok((phi, g)) => {
                let dphi = g.dot(self.d)?;
                Ok(Trial {
                    point: LinePoint::new(alpha, phi, dphi),
                    gradient: Some(g),
                })
            }
            Err(Error::NonFiniteEvaluation { .. }) => Ok(Trial {
                point: LinePoint::new(alpha, f64::INFINITY, f64::NAN),
                gradient: None,
            }),
            Err(e) => Err(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineSearchStatus {
    WolfeSatisfied,
    MaxItersReached,
    DegenerateInterval,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineSearchOutcome {
    pub alpha: f64,
    pub f_new: f64,
    pub g_new: Vector,
    /// Combined value-and-gradient evaluations consumed.
    pub n_evals: usize,
    pub status: LineSearchStatus,
    /// Whether the returned step satisfies the Armijo condition.
    pub sufficient_decrease: bool,
}

struct Search<'r, 'a, O: Objective + ?Sized> {
    restriction: &'r mut ScalarRestriction<'a, O>,
    params: LineSearchParams,
    best: Option<Trial>,
    smallest: Option<Trial>,
}

impl<O: Objective + ?Sized> Search<'_, '_, O> {
    fn check(&self, p: LinePoint) -> WolfeCheck {
        wolfe_check(
            self.restriction.phi0,
            self.restriction.dphi0,
            p.alpha,
            p.phi,
            p.dphi,
            self.params.c1,
            self.params.c2,
        )
    }

    fn evaluate(&mut self, alpha: f64) -> Result<(Trial, WolfeCheck)> {
        let trial = self.restriction.evaluate(alpha)?;
        let check = self.check(trial.point);
        if trial.gradient.is_some() {
            if check.armijo
                && self
                    .best
                    .as_ref()
                    .is_none_or(|b| trial.point.phi < b.point.phi)
            {
                self.best = Some(trial.clone());
            }
            if self.smallest.as_ref().is_none_or(|b| alpha < b.point.alpha) {
                self.smallest = Some(trial.clone());
            }
        }
        Ok((trial, check))
    }

    fn finish(&self, trial: Trial, status: LineSearchStatus) -> LineSearchOutcome {
        let sufficient_decrease = self.check(trial.point).armijo;
        LineSearchOutcome {
            alpha: trial.point.alpha,
            f_new: trial.point.phi,
            g_new: trial.gradient.expect("accepted trials are finite"),
            n_evals: self.restriction.evals,
            status,
            sufficient_decrease,
        }
    }

    fn best_effort(&mut self, status: LineSearchStatus) -> Result<LineSearchOutcome> {
        match self.best.take().or_else(|| self.smallest.take()) {
            Some(trial) => Ok(self.finish(trial, status)),
            None => Err(Error::LineSearchFailure),
        }
    }

    fn bracket(&mut self) -> Result<LineSearchOutcome> {
        let r = &*self.restriction;
        let mut prev = LinePoint::new(0.0, r.phi0, r.dphi0);
        let mut alpha = self.params.alpha_init;
        for i in 0..self.params.max_bracket_iters {
            let (trial, check) = self.evaluate(alpha)?;
            let p = trial.point;
            if !check.armijo || (i > 0 && p.phi >= prev.phi) {
                return self.zoom(prev, p);
            }
            if check.curvature {
                return Ok(self.finish(trial, LineSearchStatus::WolfeSatisfied));
            }
            if p.dphi >= 0.0 {
                return self.zoom(p, prev);
            }
            if alpha >= self.params.alpha_max {
                break;
            }
            prev = p;
            alpha = (EXPANSION_FACTOR * alpha).min(self.params.alpha_max);
        }
        self.best_effort(LineSearchStatus::MaxItersReached)
    }

    fn zoom(&mut self, mut lo: LinePoint, mut hi: LinePoint) -> Result<LineSearchOutcome> {
        for _ in 0..self.params.max_zoom_iters {
            let width = (hi.alpha - lo.alpha).abs();
            if width < 1e-14 * lo.alpha.max(hi.alpha).max(1.0) {
                return self.best_effort(LineSearchStatus::DegenerateInterval);
            }
            let alpha = interpolate_trial(lo, hi);
            let (trial, check) = self.evaluate(alpha)?;
            let p = trial.point;
            if !check.armijo || p.phi >= lo.phi {
                hi = p;
            } else {
                if check.curvature {
                    return Ok(self.finish(trial, LineSearchStatus::WolfeSatisfied));
                }
                if p.dphi * (hi.alpha - lo.alpha) >= 0.0 {
                    hi = lo;
                }
                lo = p;
            }
        }
        self.best_effort(LineSearchStatus::MaxItersReached)
    }
}

/// Finds a step satisfying the strong Wolfe conditions along `restriction`.
///
/// When the iteration budgets run out, or the bracket collapses, the lowest
/// sufficient-decrease point seen is returned with the corresponding status
/// (or the smallest finite trial when there is none). Only when no trial
/// produced a finite evaluation is [`Error::LineSearchFailure`] returned.
pub fn search<O: Objective + ?Sized>(
    restriction: &mut ScalarRestriction<'_, O>,
    params: &LineSearchParams,
) -> Result<LineSearchOutcome> {
    params.validate()?;
    Search {
        restriction,
        params: *params,
        best: None,
        smallest: None,
    }
    .bracket()
}
