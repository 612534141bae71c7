//! Dense vectors, packed symmetric matrices and the objective contract.
//!
//! Everything here is `f64`. Symmetric matrices store only their lower
//! triangle, so `get(i, j) == get(j, i)` holds bit for bit.

use std::ops::Index;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A dense real vector of fixed length.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn from_vec(entries: Vec<f64>) -> Self {
        Vector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> f64) -> Self {
        Vector((0..n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Inner product `sum a_i b_i`.
    pub fn dot(&self, other: &Vector) -> Result<f64> {
        check_len(self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn norm2(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: f64) -> Vector {
        Vector(self.0.iter().map(|v| c * v).collect())
    }

    /// `self + alpha * d`.
    pub fn axpy(&self, alpha: f64, d: &Vector) -> Result<Vector> {
        check_len(self.len(), d.len())?;
        Ok(Vector(
            self.0
                .iter()
                .zip(&d.0)
                .map(|(x, di)| x + alpha * di)
                .collect(),
        ))
    }

    /// `self - other`.
    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        check_len(self.len(), other.len())?;
        Ok(Vector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl From<&[f64]> for Vector {
    fn from(v: &[f64]) -> Self {
        Vector(v.to_vec())
    }
}

impl FromIterator<f64> for Vector {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}

/// Dense symmetric `n x n` matrix in packed lower-triangular storage.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, c: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[packed(i, i)] = c;
        }
        m
    }

    /// Builds a matrix from its lower triangle; `f` is called with `i >= j` only.
    pub fn from_lower_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        SymMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of bounds");
        self.data[packed(i, j)]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of bounds");
        self.data[packed(i, j)] = value;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// `M x`, summed row by row in column order.
    pub fn matvec(&self, x: &Vector) -> Result<Vector> {
        check_len(self.n, x.len())?;
        let x = x.as_slice();
        Ok((0..self.n)
            .map(|i| {
                let mut acc = 0.0;
                for (j, xj) in x.iter().enumerate() {
                    acc += self.data[packed(i, j)] * xj;
                }
                acc
            })
            .collect())
    }

    pub fn scale(&mut self, c: f64) {
        self.data.iter_mut().for_each(|v| *v *= c);
    }

    /// In place `M += c u u'`.
    pub fn add_rank_one(&mut self, c: f64, u: &Vector) -> Result<()> {
        check_len(self.n, u.len())?;
        if c == 0.0 {
            return Ok(());
        }
        let u = u.as_slice();
        let mut idx = 0;
        for i in 0..self.n {
            let cu = c * u[i];
            for uj in &u[..=i] {
                self.data[idx] += cu * uj;
                idx += 1;
            }
        }
        Ok(())
    }

    /// In place `M += c (u v' + v u')`.
    pub fn add_rank_two(&mut self, c: f64, u: &Vector, v: &Vector) -> Result<()> {
        check_len(self.n, u.len())?;
        check_len(self.n, v.len())?;
        let (u, v) = (u.as_slice(), v.as_slice());
        let mut idx = 0;
        for i in 0..self.n {
            for j in 0..=i {
                self.data[idx] += c * (u[i] * v[j] + v[i] * u[j]);
                idx += 1;
            }
        }
        Ok(())
    }

    /// Returns `M + c u u'`.
    pub fn rank_one_update(&self, c: f64, u: &Vector) -> Result<SymMatrix> {
        let mut out = self.clone();
        out.add_rank_one(c, u)?;
        Ok(out)
    }
}

/// A differentiable objective `f: R^N -> R`.
///
/// Implementors provide [`Objective::eval`], which writes the gradient into a
/// caller-provided buffer. The provided methods validate dimensions and reject
/// non-finite output.
pub trait Objective {
    fn dim(&self) -> usize;

    /// Returns `f(x)` and stores `grad f(x)` in `grad`. Both slices have length `dim()`.
    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64;

    fn value_and_gradient(&self, x: &Vector) -> Result<(f64, Vector)> {
        check_len(self.dim(), x.len())?;
        let mut g = Vector::zeros(self.dim());
        let f = self.eval(x.as_slice(), g.as_mut_slice());
        if !f.is_finite() {
            return Err(Error::NonFiniteEvaluation { what: "value" });
        }
        if !g.is_finite() {
            return Err(Error::NonFiniteEvaluation { what: "gradient" });
        }
        Ok((f, g))
    }

    fn value(&self, x: &Vector) -> Result<f64> {
        self.value_and_gradient(x).map(|(f, _)| f)
    }

    fn gradient(&self, x: &Vector) -> Result<Vector> {
        self.value_and_gradient(x).map(|(_, g)| g)
    }
}

impl<O: Objective + ?Sized> Objective for &O {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        (**self).eval(x, grad)
    }
}

/// Wraps an objective and counts calls to `eval`.
#[derive(Debug)]
pub struct CountingObjective<O> {
    inner: O,
    calls: AtomicUsize,
}

impl<O> CountingObjective<O> {
    pub fn new(inner: O) -> Self {
        CountingObjective {
            inner,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: Objective> Objective for CountingObjective<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.eval(x, grad)
    }
}
