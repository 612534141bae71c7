//! Minimizes the 2D Rosenbrock function with the self-scaled Broyden update
//! and prints the iteration trace.
//!
//! ```text
//! cargo run --example minimize_rosenbrock
//! ```

use ssbroyden::problems::RosenbrockProblem;
use ssbroyden::{solve, SolverConfig, UpdateVariant};

fn main() -> Result<(), ssbroyden::Error> {
    let problem = RosenbrockProblem::new(2)?;
    let config = SolverConfig::new(UpdateVariant::SsBroyden).with_grad_tol(1e-8);
    let sol = solve(&problem, &problem.default_start(), config)?;

    println!(
        "{:>4} {:>14} {:>11} {:>10} {:>10} {:>10}",
        "k", "f", "|g|_inf", "alpha", "theta", "tau"
    );
    for r in &sol.trace.records {
        println!(
            "{:>4} {:>14.6e} {:>11.3e} {:>10.4} {:>10.4} {:>10.4}",
            r.k, r.f, r.gnorm_inf, r.alpha, r.theta, r.tau
        );
    }
    println!("\nstatus: {}", sol.status().as_str());
    println!("x* = {:?}", sol.state.x.as_slice());
    println!("counters: {:?}", sol.counters);
    Ok(())
}
