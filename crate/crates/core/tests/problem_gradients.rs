use ssbroyden::problems::{
    finite_difference_gradient, Lcg, PinnPoisson1D, Problem, QuadraticProblem, RosenbrockProblem,
};
use ssbroyden::{Objective, Vector};

/// 20 deterministic points around the problem's default start.
fn test_points(problem: &Problem, seed: u64) -> Vec<Vector> {
    let mut rng = Lcg::new(seed);
    let start = problem.default_start();
    (0..20)
        .map(|_| Vector::from_fn(start.len(), |i| start[i] + rng.next_centered()))
        .collect()
}

fn relative_error(fd: &Vector, exact: &Vector) -> f64 {
    fd.sub(exact).unwrap().norm_inf() / exact.norm_inf().max(1.0)
}

fn check(problem: Problem, tol: f64) {
    for x in test_points(&problem, 2024) {
        let exact = problem.gradient(&x).unwrap();
        let fd = finite_difference_gradient(&problem, &x, 1e-6).unwrap();
        let err = relative_error(&fd, &exact);
        assert!(err <= tol, "{}: {err:e}", problem.name());
    }
}

#[test]
fn quadratic_gradient() {
    check(
        Problem::Quadratic(QuadraticProblem::graded(10).unwrap()),
        1e-8,
    );
}

#[test]
fn rosenbrock_gradients() {
    check(
        Problem::Rosenbrock(RosenbrockProblem::new(2).unwrap()),
        1e-5,
    );
    check(
        Problem::Rosenbrock(RosenbrockProblem::new(8).unwrap()),
        1e-5,
    );
}

#[test]
fn pinn_gradients() {
    check(Problem::Pinn(PinnPoisson1D::new(4, 16).unwrap()), 1e-5);
    check(Problem::Pinn(PinnPoisson1D::new(8, 32).unwrap()), 1e-5);
}

#[test]
fn rosenbrock_is_nonnegative() {
    let p = Problem::Rosenbrock(RosenbrockProblem::new(8).unwrap());
    for x in test_points(&p, 99) {
        assert!(p.value(&x).unwrap() >= 0.0);
    }
    assert_eq!(p.value(&Vector::from(vec![1.0; 8])).unwrap(), 0.0);
}

#[test]
fn pinn_loss_is_nonnegative() {
    let p = Problem::Pinn(PinnPoisson1D::new(8, 32).unwrap());
    for x in test_points(&p, 5) {
        assert!(p.value(&x).unwrap() >= 0.0);
    }
}

#[test]
fn dimension_mismatch_is_rejected() {
    let p = RosenbrockProblem::new(4).unwrap();
    assert!(p.value_and_gradient(&Vector::zeros(2)).is_err());
}
