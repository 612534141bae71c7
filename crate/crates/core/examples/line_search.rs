//! Runs a single strong Wolfe line search along the steepest-descent direction
//! of the Rosenbrock function.
//!
//! ```text
//! cargo run --example line_search
//! ```

use ssbroyden::linesearch::{search, wolfe_check, ScalarRestriction};
use ssbroyden::problems::RosenbrockProblem;
use ssbroyden::{LineSearchParams, Objective};

fn main() -> Result<(), ssbroyden::Error> {
    let problem = RosenbrockProblem::new(2)?;
    let x = problem.default_start();
    let (f0, g0) = problem.value_and_gradient(&x)?;
    let d = g0.scaled(-1.0);

    let params = LineSearchParams::default();
    let mut restriction = ScalarRestriction::new(&problem, &x, f0, &g0, &d)?;
    let (phi0, dphi0) = (restriction.phi0(), restriction.dphi0());
    let out = search(&mut restriction, &params)?;

    println!("phi(0) = {phi0:.6e}, phi'(0) = {dphi0:.6e}");
    println!(
        "alpha = {:.6e} after {} evaluations ({:?})",
        out.alpha, out.n_evals, out.status
    );
    let dphi = out.g_new.dot(&d)?;
    let check = wolfe_check(
        phi0, dphi0, out.alpha, out.f_new, dphi, params.c1, params.c2,
    );
    println!("phi(alpha) = {:.6e}, phi'(alpha) = {dphi:.6e}", out.f_new);
    println!("armijo: {}, curvature: {}", check.armijo, check.curvature);
    Ok(())
}
