//! Runs all six solvers on every benchmark problem and prints a comparison.
//!
//! ```text
//! cargo run --release --example compare_variants
//! ```

use ssbroyden::problems::{PinnPoisson1D, Problem, QuadraticProblem, RosenbrockProblem};
use ssbroyden::{solve, Objective, SolverConfig, UpdateVariant};

fn main() -> Result<(), ssbroyden::Error> {
    let problems = [
        (Problem::Quadratic(QuadraticProblem::graded(10)?), 1e-8),
        (Problem::Rosenbrock(RosenbrockProblem::new(2)?), 1e-6),
        (Problem::Rosenbrock(RosenbrockProblem::new(8)?), 1e-6),
        (Problem::Pinn(PinnPoisson1D::new(8, 32)?), 1e-8),
    ];
    for (problem, tol) in &problems {
        let x0 = problem.default_start();
        println!(
            "\n{} (N = {}, f0 = {:.6e}, tol = {tol:e})",
            problem.name(),
            problem.dim(),
            problem.value(&x0)?
        );
        println!(
            "{:<10} {:<12} {:>6} {:>8} {:>6} {:>6} {:>14} {:>12}",
            "solver", "status", "iters", "ls_evals", "skips", "fallbk", "final f", "|g|_inf"
        );
        for variant in UpdateVariant::ALL {
            let config = SolverConfig::new(variant)
                .with_grad_tol(*tol)
                .with_max_iters(500);
            let sol = solve(problem, &x0, config)?;
            let c = sol.counters;
            println!(
                "{:<10} {:<12} {:>6} {:>8} {:>6} {:>6} {:>14.6e} {:>12.3e}",
                variant.name(),
                sol.status().as_str(),
                c.qn_iters,
                c.ls_steps,
                c.update_skips,
                c.tau_fallbacks,
                sol.state.f,
                sol.state.g.norm_inf()
            );
        }
    }
    Ok(())
}
