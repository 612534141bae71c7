//! Benchmark objectives with analytic gradients.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{Objective, Vector};

/// `f(x) = sum_i lambda_i x_i^2 / 2` with positive `lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticProblem {
    diag: Vec<f64>,
}

impl QuadraticProblem {
    pub fn new(diag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || diag.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidParameters(
                "quadratic eigenvalues must be finite and positive".into(),
            ));
        }
        Ok(QuadraticProblem { diag })
    }

    /// `diag(1, 2, ..., n)`.
    pub fn graded(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i as f64).collect())
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn default_start(&self) -> Vector {
        Vector::from(vec![1.0; self.diag.len()])
    }
}

impl Objective for QuadraticProblem {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let mut f = 0.0;
        for ((g, xi), l) in grad.iter_mut().zip(x).zip(&self.diag) {
            *g = l * xi;
            f += 0.5 * l * xi * xi;
        }
        f
    }
}

/// Extended Rosenbrock: `sum over pairs (x_i, x_{i+1})` of
/// `100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RosenbrockProblem {
    n: usize,
}

impl RosenbrockProblem {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameters(format!(
                "Rosenbrock dimension must be even and positive, got {n}"
            )));
        }
        Ok(RosenbrockProblem { n })
    }

    /// `(-1.2, 1)` repeated per pair.
    pub fn default_start(&self) -> Vector {
        Vector::from_fn(self.n, |i| if i % 2 == 0 { -1.2 } else { 1.0 })
    }
}

impl Objective for RosenbrockProblem {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let mut f = 0.0;
        for i in (0..self.n).step_by(2) {
            let (a, b) = (x[i], x[i + 1]);
            let t = b - a * a;
            let u = 1.0 - a;
            f += 100.0 * t * t + u * u;
            grad[i] = -400.0 * a * t - 2.0 * u;
            grad[i + 1] = 200.0 * t;
        }
        f
    }
}

/// Seed, multiplier and increment of the parameter initializer.
pub const LCG_SEED: u64 = 42;
pub const LCG_MULTIPLIER: u64 = 6364136223846793005;
pub const LCG_INCREMENT: u64 = 1442695040888963407;

/// 64-bit LCG mapped to uniform(-0.5, 0.5) through the top 53 bits.
#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(LCG_MULTIPLIER)
            .wrapping_add(LCG_INCREMENT);
        self.state
    }

    pub fn next_centered(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

/// `sin(pi x)`, exactly zero at integers.
fn sin_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        0.0
    } else {
        (PI * x).sin()
    }
}

/// One-hidden-layer tanh network trained on `-u'' = pi^2 sin(pi x)` on (0, 1)
/// with `u(0) = u(1) = 0`, exact solution `sin(pi x)`.
///
/// Parameters are laid out as `[w1 (M), b1 (M), w2 (M), b2]` and
/// `u(x) = sum_j w2_j tanh(w1_j x + b1_j) + b2`. The loss is
///
/// ```text
/// 1/(2 N_int) sum_i (u''(x_i) + f(x_i))^2 + 1/(2 N_bd) sum_j (u(x_j) - u*(x_j))^2
/// ```
///
/// with interior points `x_i = i / (N_int + 1)` and boundary points `{0, 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PinnPoisson1D {
    width: usize,
    interior: Vec<f64>,
    forcing: Vec<f64>,
    boundary: [f64; 2],
    boundary_target: [f64; 2],
}

impl PinnPoisson1D {
    pub const DEFAULT_WIDTH: usize = 8;
    pub const DEFAULT_POINTS: usize = 32;

    pub fn new(width: usize, n_points: usize) -> Result<Self> {
        if width == 0 || n_points == 0 {
            return Err(Error::InvalidParameters(
                "PINN width and point count must be positive".into(),
            ));
        }
        let interior: Vec<f64> = (1..=n_points)
            .map(|i| i as f64 / (n_points + 1) as f64)
            .collect();
        let forcing = interior.iter().map(|&x| PI * PI * sin_pi(x)).collect();
        let boundary = [0.0, 1.0];
        Ok(PinnPoisson1D {
            width,
            interior,
            forcing,
            boundary,
            boundary_target: boundary.map(sin_pi),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn interior_points(&self) -> &[f64] {
        &self.interior
    }

    /// Deterministic start drawn from [`Lcg`] with [`LCG_SEED`].
    pub fn default_start(&self) -> Vector {
        let mut rng = Lcg::new(LCG_SEED);
        Vector::from_fn(self.dim(), |_| rng.next_centered())
    }

    /// Network output `u(x)` for the given parameters.
    pub fn predict(&self, params: &[f64], x: f64) -> f64 {
        let m = self.width;
        let (w1, rest) = params.split_at(m);
        let (b1, rest) = rest.split_at(m);
        let (w2, b2) = rest.split_at(m);
        let hidden: f64 = (0..m).map(|j| w2[j] * (w1[j] * x + b1[j]).tanh()).sum();
        hidden + b2[0]
    }

    /// Root-mean-square error of `u` against `sin(pi x)` on the interior grid.
    pub fn l2_error(&self, params: &Vector) -> f64 {
        let sum: f64 = self
            .interior
            .iter()
            .map(|&x| {
                let e = self.predict(params.as_slice(), x) - sin_pi(x);
                e * e
            })
            .sum();
        (sum / self.interior.len() as f64).sqrt()
    }
}

impl Objective for PinnPoisson1D {
    fn dim(&self) -> usize {
        3 * self.width + 1
    }

    fn eval(&self, params: &[f64], grad: &mut [f64]) -> f64 {
        let m = self.width;
        let (w1, rest) = params.split_at(m);
        let (b1, rest) = rest.split_at(m);
        let (w2, b2) = rest.split_at(m);
        let b2 = b2[0];
        grad.fill(0.0);

        // Residual term. With t = tanh(z): tanh' = 1 - t^2,
        // tanh'' = -2 t (1 - t^2), tanh''' = -2 (1 - t^2)(1 - 3 t^2).
        let n_int = self.interior.len() as f64;
        let mut loss = 0.0;
        let mut t2 = vec![0.0; m];
        let mut t3 = vec![0.0; m];
        for (&x, &f) in self.interior.iter().zip(&self.forcing) {
            let mut u_xx = 0.0;
            for j in 0..m {
                let t = (w1[j] * x + b1[j]).tanh();
                let d1 = 1.0 - t * t;
                t2[j] = -2.0 * t * d1;
                t3[j] = -2.0 * d1 * (1.0 - 3.0 * t * t);
                u_xx += w2[j] * w1[j] * w1[j] * t2[j];
            }
            let r = u_xx + f;
            loss += r * r;
            let scale = r / n_int;
            for j in 0..m {
                let w1sq = w1[j] * w1[j];
                grad[j] += scale * w2[j] * (2.0 * w1[j] * t2[j] + w1sq * t3[j] * x);
                grad[m + j] += scale * w2[j] * w1sq * t3[j];
                grad[2 * m + j] += scale * w1sq * t2[j];
            }
        }
        loss /= 2.0 * n_int;

        let n_bd = self.boundary.len() as f64;
        let mut boundary_loss = 0.0;
        for (&x, &target) in self.boundary.iter().zip(&self.boundary_target) {
            let mut u = b2;
            let mut t1 = vec![0.0; m];
            for j in 0..m {
                t1[j] = (w1[j] * x + b1[j]).tanh();
                u += w2[j] * t1[j];
            }
            let e = u - target;
            boundary_loss += e * e;
            let scale = e / n_bd;
            for j in 0..m {
                let d1 = 1.0 - t1[j] * t1[j];
                grad[j] += scale * w2[j] * d1 * x;
                grad[m + j] += scale * w2[j] * d1;
                grad[2 * m + j] += scale * t1[j];
            }
            grad[3 * m] += scale;
        }
        loss + boundary_loss / (2.0 * n_bd)
    }
}

/// Central differences `(f(x + h e_i) - f(x - h e_i)) / 2h`.
pub fn finite_difference_gradient<O: Objective + ?Sized>(
    problem: &O,
    x: &Vector,
    h: f64,
) -> Result<Vector> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameters(
            "finite-difference step must be positive".into(),
        ));
    }
    let mut probe = x.clone();
    (0..x.len())
        .map(|i| {
            let xi = x[i];
            probe.as_mut_slice()[i] = xi + h;
            let plus = problem.value(&probe)?;
            probe.as_mut_slice()[i] = xi - h;
            let minus = problem.value(&probe)?;
            probe.as_mut_slice()[i] = xi;
            Ok((plus - minus) / (2.0 * h))
        })
        .collect::<Result<Vec<_>>>()
        .map(Vector::from)
}

/// The registered benchmark problems.
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Quadratic(QuadraticProblem),
    Rosenbrock(RosenbrockProblem),
    Pinn(PinnPoisson1D),
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::Quadratic(_) => "quadratic",
            Problem::Rosenbrock(_) => "rosenbrock",
            Problem::Pinn(_) => "pinn1d",
        }
    }

    pub fn default_start(&self) -> Vector {
        match self {
            Problem::Quadratic(p) => p.default_start(),
            Problem::Rosenbrock(p) => p.default_start(),
            Problem::Pinn(p) => p.default_start(),
        }
    }
}

impl Objective for Problem {
    fn dim(&self) -> usize {
        match self {
            Problem::Quadratic(p) => p.dim(),
            Problem::Rosenbrock(p) => p.dim(),
            Problem::Pinn(p) => p.dim(),
        }
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        match self {
            Problem::Quadratic(p) => p.eval(x, grad),
            Problem::Rosenbrock(p) => p.eval(x, grad),
            Problem::Pinn(p) => p.eval(x, grad),
        }
    }
}
