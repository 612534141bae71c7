//! Trains the one-hidden-layer tanh network on the 1D Poisson toy problem and
//! compares the fit with the exact solution sin(pi x).
//!
//! ```text
//! cargo run --release --example pinn_poisson
//! ```

use std::f64::consts::PI;

use ssbroyden::problems::PinnPoisson1D;
use ssbroyden::{solve, SolverConfig, UpdateVariant};

fn main() -> Result<(), ssbroyden::Error> {
    let pinn = PinnPoisson1D::new(PinnPoisson1D::DEFAULT_WIDTH, PinnPoisson1D::DEFAULT_POINTS)?;
    let x0 = pinn.default_start();
    let config = SolverConfig::new(UpdateVariant::SsBroyden).with_max_iters(300);
    let sol = solve(&pinn, &x0, config)?;

    println!(
        "loss {:.4e} -> {:.4e} in {} iterations ({})",
        sol.trace.initial_f,
        sol.state.f,
        sol.counters.qn_iters,
        sol.status().as_str()
    );
    println!("RMS error on grid: {:.3e}\n", pinn.l2_error(&sol.state.x));
    println!("{:>6} {:>12} {:>12}", "x", "u(x)", "sin(pi x)");
    for i in 0..=10 {
        let x = i as f64 / 10.0;
        println!(
            "{x:>6.2} {:>12.6} {:>12.6}",
            pinn.predict(sol.state.x.as_slice(), x),
            (PI * x).sin()
        );
    }
    Ok(())
}
