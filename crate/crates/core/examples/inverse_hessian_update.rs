//! Applies each update variant to one curvature pair and shows the
//! coefficients and the secant residual.
//!
//! ```text
//! cargo run --example inverse_hessian_update
//! ```

use ssbroyden::updates::update_inverse_hessian;
use ssbroyden::{SymMatrix, UpdateVariant, Vector};

fn main() -> Result<(), ssbroyden::Error> {
    let h = SymMatrix::identity(3);
    let g_prev = Vector::from_vec(vec![1.0, -2.0, 0.5]);
    let alpha = 0.8;
    let s = g_prev.scaled(-alpha);
    // y = A s for A = diag(4, 1, 0.25) plus a small coupling term.
    let y = Vector::from_vec(vec![
        4.0 * s[0] + 0.1 * s[1],
        s[1] + 0.1 * s[0],
        0.25 * s[2],
    ]);

    println!(
        "{:<10} {:>9} {:>9} {:>10} {:>9} {:>10} {:>11}",
        "variant", "b", "h", "theta", "tau", "phi", "|Hy - s|"
    );
    for variant in UpdateVariant::ALL {
        let out = update_inverse_hessian(&variant.rule(), &h, &s, &y, &g_prev, alpha)?;
        let c = out.coefficients;
        let residual = out.h_inv.matvec(&y)?.sub(&s)?.norm_inf();
        println!(
            "{:<10} {:>9.4} {:>9.4} {:>10.5} {:>9.5} {:>10.5} {:>11.2e}",
            variant.name(),
            c.base.b,
            c.base.h,
            c.theta.theta,
            c.tau.tau,
            c.phi,
            residual
        );
    }
    Ok(())
}
