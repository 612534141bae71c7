//! Test-only oracles, independent of the library's code paths: dense matrix
//! arithmetic, Gaussian elimination, Jacobi eigenvalues, a random instance
//! generator for the update suite, and a textbook BFGS/DFP driver.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ssbroyden::{Objective, SymMatrix, Vector};

pub type Dense = Vec<Vec<f64>>;

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for j in 0..m {
            for l in 0..k {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &Dense, x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn outer(u: &[f64], v: &[f64]) -> Dense {
    u.iter()
        .map(|a| v.iter().map(|b| a * b).collect())
        .collect()
}

pub fn add(a: &Dense, b: &Dense, cb: f64) -> Dense {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + cb * y).collect())
        .collect()
}

pub fn scale(a: &Dense, c: f64) -> Dense {
    a.iter()
        .map(|r| r.iter().map(|x| c * x).collect())
        .collect()
}

pub fn dotv(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn max_abs_diff(a: &Dense, b: &SymMatrix) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            m = m.max((a[i][j] - b.get(i, j)).abs());
        }
    }
    m
}

/// Solves `A z = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(a: &Dense, b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Dense = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(*bi);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..=n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    let mut z = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| m[i][k] * z[k]).sum();
        z[i] = (m[i][n] - s) / m[i][i];
    }
    z
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(a: &Dense) -> Vec<f64> {
    let n = a.len();
    let mut m = a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        let diag: f64 = (0..n).map(|i| m[i][i] * m[i][i]).sum();
        if off <= 1e-30 * diag.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

/// One random update instance: SPD `H`, gradient `g`, step `s = alpha (-H g)`
/// and `y = A s` for an independent SPD `A`, so `y's > 0`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub n: usize,
    pub h: Dense,
    pub g: Vec<f64>,
    pub alpha: f64,
    pub s: Vec<f64>,
    pub y: Vec<f64>,
}

impl Instance {
    pub fn h_sym(&self) -> SymMatrix {
        SymMatrix::from_lower_fn(self.n, |i, j| self.h[i][j])
    }
    pub fn s_vec(&self) -> Vector {
        Vector::from(self.s.clone())
    }
    pub fn y_vec(&self) -> Vector {
        Vector::from(self.y.clone())
    }
    pub fn g_vec(&self) -> Vector {
        Vector::from(self.g.clone())
    }
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> Dense {
    let a: Dense = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let v: f64 = (0..n).map(|k| a[i][k] * a[j][k]).sum::<f64>() / n as f64;
            m[i][j] = v;
            m[j][i] = v;
        }
        m[i][i] += shift;
    }
    m
}

pub fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(2..=12);
    let h = random_spd(rng, n, 0.1);
    let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let alpha = rng.gen_range(0.1..2.0);
    let s: Vec<f64> = mat_vec(&h, &g).iter().map(|v| -alpha * v).collect();
    let curvature = random_spd(rng, n, 0.05);
    let y = mat_vec(&curvature, &s);
    Instance {
        n,
        h,
        g,
        alpha,
        s,
        y,
    }
}

pub fn suite(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng)).collect()
}

pub const SUITE_SEED: u64 = 0x5eed_b70d;

/// Textbook inverse update formulas on dense matrices.
pub fn dense_bfgs(h: &Dense, s: &[f64], y: &[f64], tau: f64) -> Dense {
    let n = s.len();
    let rho = 1.0 / dotv(y, s);
    let left = add(&identity(n), &outer(s, y), -rho);
    let right = add(&identity(n), &outer(y, s), -rho);
    let core = matmul(&matmul(&left, h), &right);
    add(&scale(&core, 1.0 / tau), &outer(s, s), rho)
}

pub fn dense_dfp(h: &Dense, s: &[f64], y: &[f64], tau: f64) -> Dense {
    let hy = mat_vec(h, y);
    let yhy = dotv(y, &hy);
    let core = add(h, &outer(&hy, &hy), -1.0 / yhy);
    add(&scale(&core, 1.0 / tau), &outer(s, s), 1.0 / dotv(y, s))
}

/// Strong-Wolfe bracketing/zoom line search and a textbook quasi-Newton loop
/// on dense matrices. Shares the algorithm (and interpolation rule) with the
/// library but none of its code.
pub mod textbook {
    use super::*;

    fn eval<O: Objective>(obj: &O, x: &[f64]) -> (f64, Vec<f64>) {
        let mut g = vec![0.0; x.len()];
        let f = obj.eval(x, &mut g);
        (f, g)
    }

    fn cubic_min(a0: f64, f0: f64, d0: f64, a1: f64, f1: f64, d1s: f64) -> f64 {
        let (lo, hi) = (a0.min(a1), a0.max(a1));
        let mid = 0.5 * (lo + hi);
        let d1 = d0 + d1s - 3.0 * (f0 - f1) / (a0 - a1);
        let disc = d1 * d1 - d0 * d1s;
        if !(disc >= 0.0) {
            return mid;
        }
        let d2 = (a1 - a0).signum() * disc.sqrt();
        let den = d1s - d0 + 2.0 * d2;
        if den == 0.0 || !den.is_finite() {
            return mid;
        }
        let t = a1 - (a1 - a0) * (d1s + d2 - d1) / den;
        if !t.is_finite() || t <= lo || t >= hi {
            return mid;
        }
        let w = 0.1 * (hi - lo);
        t.max(lo + w).min(hi - w)
    }

    /// Returns `(alpha, f, g)`.
    pub fn line_search<O: Objective>(
        obj: &O,
        x: &[f64],
        f0: f64,
        g0: &[f64],
        d: &[f64],
        c1: f64,
        c2: f64,
    ) -> (f64, f64, Vec<f64>) {
        let dphi0 = dotv(g0, d);
        let at = |a: f64| -> (f64, f64, Vec<f64>) {
            let p: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + a * di).collect();
            let (f, g) = eval(obj, &p);
            (f, dotv(&g, d), g)
        };
        let zoom = |mut lo: (f64, f64, f64), mut hi: (f64, f64, f64)| {
            for _ in 0..30 {
                let a = cubic_min(lo.0, lo.1, lo.2, hi.0, hi.1, hi.2);
                let (f, dphi, g) = at(a);
                if f > f0 + c1 * a * dphi0 || f >= lo.1 {
                    hi = (a, f, dphi);
                } else {
                    if dphi.abs() <= c2 * dphi0.abs() {
                        return (a, f, g);
                    }
                    if dphi * (hi.0 - lo.0) >= 0.0 {
                        hi = lo;
                    }
                    lo = (a, f, dphi);
                }
            }
            panic!("textbook zoom did not finish");
        };
        let mut prev = (0.0, f0, dphi0);
        let mut a = 1.0;
        for i in 0..20 {
            let (f, dphi, g) = at(a);
            if f > f0 + c1 * a * dphi0 || (i > 0 && f >= prev.1) {
                return zoom(prev, (a, f, dphi));
            }
            if dphi.abs() <= c2 * dphi0.abs() {
                return (a, f, g);
            }
            if dphi >= 0.0 {
                return zoom((a, f, dphi), prev);
            }
            prev = (a, f, dphi);
            a *= 2.0;
        }
        panic!("textbook bracketing did not finish");
    }

    #[derive(Clone, Copy, PartialEq, Eq)]
    pub enum Update {
        Bfgs,
        Dfp,
    }

    /// Returns the objective value after every iteration.
    pub fn minimize<O: Objective>(
        obj: &O,
        x0: &[f64],
        update: Update,
        tol: f64,
        max_iters: usize,
    ) -> Vec<f64> {
        let n = x0.len();
        let mut x = x0.to_vec();
        let (mut f, mut g) = eval(obj, &x);
        let mut h = identity(n);
        let mut out = Vec::new();
        for _ in 0..max_iters {
            if g.iter().fold(0.0f64, |m, v| m.max(v.abs())) <= tol {
                break;
            }
            let d: Vec<f64> = mat_vec(&h, &g).iter().map(|v| -v).collect();
            let (a, fnew, gnew) = line_search(obj, &x, f, &g, &d, 1e-4, 0.9);
            let s: Vec<f64> = d.iter().map(|di| a * di).collect();
            let y: Vec<f64> = gnew.iter().zip(&g).map(|(a, b)| a - b).collect();
            for i in 0..n {
                x[i] += a * d[i];
            }
            h = match update {
                Update::Bfgs => dense_bfgs(&h, &s, &y, 1.0),
                Update::Dfp => dense_dfp(&h, &s, &y, 1.0),
            };
            f = fnew;
            g = gnew;
            out.push(f);
        }
        out
    }
}
