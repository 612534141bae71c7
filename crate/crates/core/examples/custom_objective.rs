//! Implements `Objective` for a user-defined function and solves it with
//! every update variant.
//!
//! ```text
//! cargo run --example custom_objective
//! ```

use ssbroyden::{solve, Objective, SolverConfig, UpdateVariant, Vector};

/// Log-sum-exp plus a quadratic, f(x) = log(sum exp(a_i x_i)) + 0.5 |x - c|^2.
struct LogSumExp {
    a: Vec<f64>,
    c: Vec<f64>,
}

impl Objective for LogSumExp {
    fn dim(&self) -> usize {
        self.a.len()
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let z: Vec<f64> = x.iter().zip(&self.a).map(|(xi, ai)| ai * xi).collect();
        let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = z.iter().map(|zi| (zi - zmax).exp()).collect();
        let total: f64 = weights.iter().sum();
        let mut f = zmax + total.ln();
        for i in 0..x.len() {
            let r = x[i] - self.c[i];
            f += 0.5 * r * r;
            grad[i] = self.a[i] * weights[i] / total + r;
        }
        f
    }
}

fn main() -> Result<(), ssbroyden::Error> {
    let problem = LogSumExp {
        a: vec![3.0, -1.0, 0.5, 2.0, -4.0],
        c: vec![1.0, 0.0, -1.0, 2.0, 0.5],
    };
    let x0 = Vector::zeros(problem.dim());
    for variant in UpdateVariant::ALL {
        let sol = solve(&problem, &x0, SolverConfig::new(variant))?;
        println!(
            "{:<10} {:<10} iters {:>3}  f = {:.12}",
            variant.name(),
            sol.status().as_str(),
            sol.counters.qn_iters,
            sol.state.f
        );
    }
    Ok(())
}
