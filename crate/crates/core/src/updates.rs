//! The self-scaled Broyden family of inverse Hessian updates.
//!
//! Every member has the form
//!
//! ```text
//! H' = (1/tau) (H - H y y'H / y'Hy + phi (y'Hy) v v') + rho s s'
//! v  = s / y's - H y / y'Hy
//! ```
//!
//! and is selected by two rules: how `theta` is chosen (fixed at 0 for BFGS,
//! at 1 for DFP, or computed per iteration for the Broyden members) and
//! whether `tau` is computed (self-scaled) or held at 1. BFGS and DFP
//! members use closed specialized forms; the Broyden members use the general
//! form above.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{SymMatrix, Vector};

/// Below this `a = b h - 1` is treated as zero.
pub const A_DEGENERACY: f64 = 1e-12;
/// Guard on `|1 + a theta|` in the `phi` denominator.
pub const PHI_DENOMINATOR_EPS: f64 = 1e-12;
/// Self-scaling factors at or below this fall back to `tau = 1`.
pub const TAU_MIN: f64 = 1e-8;
/// Default relative curvature threshold for [`curvature_guard`].
pub const CURVATURE_EPS: f64 = 1e-10;

/// The six concrete members of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UpdateVariant {
    Bfgs,
    SsBfgs,
    Dfp,
    SsDfp,
    Broyden,
    SsBroyden,
}

impl UpdateVariant {
    /// All variants in canonical order.
    pub const ALL: [UpdateVariant; 6] = [
        UpdateVariant::Bfgs,
        UpdateVariant::SsBfgs,
        UpdateVariant::Dfp,
        UpdateVariant::SsDfp,
        UpdateVariant::Broyden,
        UpdateVariant::SsBroyden,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UpdateVariant::Bfgs => "bfgs",
            UpdateVariant::SsBfgs => "ssbfgs",
            UpdateVariant::Dfp => "dfp",
            UpdateVariant::SsDfp => "ssdfp",
            UpdateVariant::Broyden => "broyden",
            UpdateVariant::SsBroyden => "ssbroyden",
        }
    }

    pub fn theta_rule(self) -> ThetaRule {
        match self {
            UpdateVariant::Bfgs | UpdateVariant::SsBfgs => ThetaRule::Fixed(0.0),
            UpdateVariant::Dfp | UpdateVariant::SsDfp => ThetaRule::Fixed(1.0),
            UpdateVariant::Broyden | UpdateVariant::SsBroyden => ThetaRule::Dynamic,
        }
    }

    pub fn tau_rule(self) -> TauRule {
        match self {
            UpdateVariant::Bfgs | UpdateVariant::Dfp | UpdateVariant::Broyden => {
                TauRule::Fixed(1.0)
            }
            _ => TauRule::SelfScaled,
        }
    }

    pub fn is_self_scaled(self) -> bool {
        self.tau_rule() == TauRule::SelfScaled
    }

    pub fn rule(self) -> UpdateRule {
        let form = match self {
            UpdateVariant::Bfgs | UpdateVariant::SsBfgs => UpdateForm::Bfgs,
            UpdateVariant::Dfp | UpdateVariant::SsDfp => UpdateForm::Dfp,
            UpdateVariant::Broyden | UpdateVariant::SsBroyden => UpdateForm::General,
        };
        UpdateRule {
            theta: self.theta_rule(),
            tau: self.tau_rule(),
            form,
        }
    }
}

impl fmt::Display for UpdateVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UpdateVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        UpdateVariant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown solver `{s}`"))
    }
}

/// How `theta` is chosen each iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThetaRule {
    Fixed(f64),
    /// Clamped Broyden choice `max(theta-, min(theta+, (1 - b) / b))`.
    Dynamic,
}

/// How `tau` is chosen each iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TauRule {
    Fixed(f64),
    SelfScaled,
}

/// Which closed form assembles the new matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateForm {
    /// `(1/tau)(I - rho s y')H(I - rho y s') + rho s s'`; ignores `theta`.
    Bfgs,
    /// `(1/tau)(H - Hy Hy'/y'Hy) + rho s s'`; ignores `theta`.
    Dfp,
    General,
}

/// A complete update recipe. [`UpdateVariant::rule`] gives the six standard
/// ones; other combinations are useful for testing the specializations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpdateRule {
    pub theta: ThetaRule,
    pub tau: TauRule,
    pub form: UpdateForm,
}

/// Quantities that depend only on `(H, s, y)` and the step that produced `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseCoefficients {
    /// `y's`
    pub ys: f64,
    /// `1 / y's`
    pub rho: f64,
    /// `y'Hy / y's`
    pub h: f64,
    /// `s'Bs / y's` with `B = H^-1`
    pub b: f64,
    /// `b h - 1`, clamped at zero
    pub a: f64,
    /// `sqrt(a / (1 + a))`
    pub c: f64,
    pub hy: Vector,
    pub y_hy: f64,
    pub v: Vector,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaCoefficients {
    pub theta: f64,
    pub theta_minus: f64,
    pub theta_plus: f64,
    pub rho_minus: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauCoefficients {
    pub tau: f64,
    pub sigma: f64,
    pub sigma_pow: f64,
    pub rho_plus: f64,
}

/// Every per-iteration scalar and vector of one update.
#[derive(Clone, Debug, PartialEq)]
pub struct UpdateCoefficients {
    pub base: BaseCoefficients,
    pub theta: ThetaCoefficients,
    pub tau: TauCoefficients,
    /// `(1 - theta) / (1 + a theta)`
    pub phi: f64,
}

/// Computes the `theta`/`tau`-independent coefficients.
///
/// `s` must be exactly `alpha * (-H g_prev)`: then `B s = -alpha g_prev`, so
/// `b = -alpha (s'g_prev) / (y's)` without forming or inverting `B`.
pub fn compute_base_coefficients(
    h_inv: &SymMatrix,
    s: &Vector,
    y: &Vector,
    g_prev: &Vector,
    alpha: f64,
) -> Result<BaseCoefficients> {
    let ys = y.dot(s)?;
    if !(ys > 0.0) {
        return Err(Error::CurvatureViolation { ys });
    }
    let hy = h_inv.matvec(y)?;
    let y_hy = y.dot(&hy)?;
    if !(y_hy > 0.0) {
        return Err(Error::LostPositiveDefiniteness { y_hy });
    }
    let rho = 1.0 / ys;
    let h = y_hy / ys;
    let b = -alpha * s.dot(g_prev)? / ys;
    let a = (b * h - 1.0).max(0.0);
    let c = (a / (1.0 + a)).sqrt();
    let v = s.scaled(rho).sub(&hy.scaled(1.0 / y_hy))?;
    Ok(BaseCoefficients {
        ys,
        rho,
        h,
        b,
        a,
        c,
        hy,
        y_hy,
        v,
    })
}

/// Chooses `theta`. Fixed rules report `theta- = theta+ = theta` and `rho- = 1`.
pub fn compute_theta(rule: ThetaRule, base: &BaseCoefficients) -> ThetaCoefficients {
    match rule {
        ThetaRule::Fixed(theta) => ThetaCoefficients {
            theta,
            theta_minus: theta,
            theta_plus: theta,
            rho_minus: 1.0,
        },
        ThetaRule::Dynamic => {
            let (rho_minus, theta_minus) = if base.a < A_DEGENERACY {
                // a -> 0: s is H-parallel to y; clamp to the convex class.
                (base.h.min(1.0), 0.0)
            } else {
                let rho_minus = (base.h * (1.0 - base.c)).min(1.0);
                (rho_minus, (rho_minus - 1.0) / base.a)
            };
            let theta_plus = 1.0 / rho_minus;
            let unclamped = (1.0 - base.b) / base.b;
            ThetaCoefficients {
                theta: theta_minus.max(theta_plus.min(unclamped)),
                theta_minus,
                theta_plus,
                rho_minus,
            }
        }
    }
}

/// `|sigma|^(1/(1-n))`, with the conventions `n = 1 -> 1` and `sigma = 0 -> 0`.
pub fn sigma_power(sigma: f64, n: usize) -> f64 {
    if n <= 1 {
        1.0
    } else if sigma == 0.0 {
        0.0
    } else {
        sigma.abs().powf(1.0 / (1.0 - n as f64))
    }
}

/// Chooses `tau` for a finalized `theta`.
///
/// Fails with [`Error::ScalingDegeneracy`] when a self-scaled `tau` is not
/// finite or not above [`TAU_MIN`]; callers fall back to `tau = 1`.
pub fn compute_tau(
    rule: TauRule,
    theta: f64,
    base: &BaseCoefficients,
    n: usize,
) -> Result<TauCoefficients> {
    let rho_plus = (1.0 / base.b).min(1.0);
    let sigma = 1.0 + theta * base.a;
    let sigma_pow = sigma_power(sigma, n);
    let tau = match rule {
        TauRule::Fixed(tau) => tau,
        TauRule::SelfScaled if theta <= 0.0 => (rho_plus * sigma_pow).min(sigma),
        TauRule::SelfScaled => rho_plus * sigma_pow.min(1.0 / theta),
    };
    if !tau.is_finite() || tau <= TAU_MIN {
        return Err(Error::ScalingDegeneracy { tau });
    }
    Ok(TauCoefficients {
        tau,
        sigma,
        sigma_pow,
        rho_plus,
    })
}

/// `phi = (1 - theta) / (1 + (h b - 1) theta)`.
pub fn compute_phi(theta: f64, base: &BaseCoefficients) -> Result<f64> {
    let denominator = 1.0 + base.a * theta;
    if denominator.abs() <= PHI_DENOMINATOR_EPS {
        return Err(Error::SingularUpdate { denominator });
    }
    Ok((1.0 - theta) / denominator)
}

/// The general family member.
pub fn apply_general_update(
    h_inv: &SymMatrix,
    s: &Vector,
    coeffs: &UpdateCoefficients,
) -> Result<SymMatrix> {
    let base = &coeffs.base;
    // Recheck the denominator here: callers may hand-assemble coefficients.
    let denominator = 1.0 + base.a * coeffs.theta.theta;
    if denominator.abs() <= PHI_DENOMINATOR_EPS {
        return Err(Error::SingularUpdate { denominator });
    }
    let mut out = h_inv.clone();
    out.add_rank_one(-1.0 / base.y_hy, &base.hy)?;
    out.add_rank_one(coeffs.phi * base.y_hy, &base.v)?;
    out.scale(1.0 / coeffs.tau.tau);
    out.add_rank_one(base.rho, s)?;
    Ok(out)
}

/// `(1/tau)(I - rho s y') H (I - rho y s') + rho s s'`, expanded as
/// `H - rho (s Hy' + Hy s') + rho^2 (y'Hy) s s'` before scaling.
pub fn apply_bfgs_update(
    h_inv: &SymMatrix,
    s: &Vector,
    y: &Vector,
    rho: f64,
    tau: f64,
) -> Result<SymMatrix> {
    let hy = h_inv.matvec(y)?;
    let y_hy = y.dot(&hy)?;
    let mut out = h_inv.clone();
    out.add_rank_two(-rho, s, &hy)?;
    out.add_rank_one(rho * rho * y_hy, s)?;
    out.scale(1.0 / tau);
    out.add_rank_one(rho, s)?;
    Ok(out)
}

/// `(1/tau)(H - Hy Hy' / y'Hy) + rho s s'`.
pub fn apply_dfp_update(
    h_inv: &SymMatrix,
    s: &Vector,
    coeffs: &UpdateCoefficients,
) -> Result<SymMatrix> {
    let base = &coeffs.base;
    let mut out = h_inv.clone();
    out.add_rank_one(-1.0 / base.y_hy, &base.hy)?;
    out.scale(1.0 / coeffs.tau.tau);
    out.add_rank_one(base.rho, s)?;
    Ok(out)
}

/// Accepts the pair iff `y's > epsilon |s| |y|`.
pub fn curvature_guard(s: &Vector, y: &Vector, epsilon: f64) -> bool {
    match y.dot(s) {
        Ok(ys) => ys > epsilon * s.norm2() * y.norm2(),
        Err(_) => false,
    }
}

/// Result of [`update_inverse_hessian`].
#[derive(Clone, Debug, PartialEq)]
pub struct UpdateOutcome {
    pub h_inv: SymMatrix,
    pub coefficients: UpdateCoefficients,
    /// The self-scaling factor degenerated and `tau = 1` was used instead.
    pub tau_fallback: bool,
}

/// Runs the full pipeline: base coefficients, `theta`, `tau`, `phi`, then the
/// update form named by `rule`.
///
/// Curvature violations, loss of positive definiteness and singular `phi`
/// denominators are returned as errors; the caller decides whether to skip.
pub fn update_inverse_hessian(
    rule: &UpdateRule,
    h_inv: &SymMatrix,
    s: &Vector,
    y: &Vector,
    g_prev: &Vector,
    alpha: f64,
) -> Result<UpdateOutcome> {
    let base = compute_base_coefficients(h_inv, s, y, g_prev, alpha)?;
    let theta = compute_theta(rule.theta, &base);
    let (tau, tau_fallback) = match compute_tau(rule.tau, theta.theta, &base, s.len()) {
        Ok(tau) => (tau, false),
        Err(Error::ScalingDegeneracy { .. }) => {
            let tau = compute_tau(TauRule::Fixed(1.0), theta.theta, &base, s.len())?;
            (tau, true)
        }
        Err(e) => return Err(e),
    };
    let phi = match rule.form {
        UpdateForm::General => compute_phi(theta.theta, &base)?,
        _ => 1.0 - theta.theta,
    };
    let coefficients = UpdateCoefficients {
        base,
        theta,
        tau,
        phi,
    };
    let h_inv = match rule.form {
        UpdateForm::Bfgs => {
            apply_bfgs_update(h_inv, s, y, coefficients.base.rho, coefficients.tau.tau)?
        }
        UpdateForm::Dfp => apply_dfp_update(h_inv, s, &coefficients)?,
        UpdateForm::General => apply_general_update(h_inv, s, &coefficients)?,
    };
    Ok(UpdateOutcome {
        h_inv,
        coefficients,
        tau_fallback,
    })
}
