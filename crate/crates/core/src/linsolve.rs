//! Solves `A u = b` for the symmetric positive definite SIPDG matrix.
//!
//! The direct path is a sparse Cholesky factorization (faer, sequential,
//! fixed fill-reducing ordering) followed by iterative refinement when the
//! residual misses the tolerance. The iterative path is Jacobi-preconditioned
//! conjugate gradients capped at `20 × dim` iterations.

use std::time::{Duration, Instant};

use faer::sparse::{SparseColMat, Triplet};
use faer::{Col, Side};

use crate::assembly::{CoeffVector, SystemMatrix};
use crate::{Error, Result};

const MAX_REFINEMENT_STEPS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Direct,
    Iterative,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub method: SolveMethod,
    /// Relative residual tolerance `‖Au - b‖₂ / ‖b‖₂`.
    pub tol: f64,
}

impl SolveOptions {
    pub fn direct() -> Self {
        Self {
            method: SolveMethod::Direct,
            tol: 1e-12,
        }
    }

    pub fn iterative() -> Self {
        Self {
            method: SolveMethod::Iterative,
            tol: 1e-10,
        }
    }
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self::direct()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub method: SolveMethod,
    /// CG iterations, or refinement steps on the direct path.
    pub iterations: usize,
    pub relative_residual: f64,
    pub wall_time: Duration,
}

pub fn solve(a: &SystemMatrix, b: &[f64], opts: &SolveOptions) -> Result<(CoeffVector, SolveReport)> {
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.len(),
        });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let start = Instant::now();
    let (x, iterations) = match opts.method {
        SolveMethod::Direct => solve_direct(a, b, opts.tol)?,
        SolveMethod::Iterative => solve_cg(a, b, opts.tol)?,
    };
    let relative_residual = relative_residual(a, &x, b);
    if relative_residual > opts.tol {
        return Err(Error::NotConverged {
            iterations,
            residual: relative_residual,
        });
    }
    Ok((
        CoeffVector(x),
        SolveReport {
            method: opts.method,
            iterations,
            relative_residual,
            wall_time: start.elapsed(),
        },
    ))
}

pub fn relative_residual(a: &SystemMatrix, x: &[f64], b: &[f64]) -> f64 {
    let r = residual(a, x, b);
    let bn = norm(b);
    let rn = norm(&r);
    if bn == 0.0 {
        rn
    } else {
        rn / bn
    }
}

fn residual(a: &SystemMatrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    a.matvec(x).iter().zip(b).map(|(ax, bi)| bi - ax).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn solve_direct(a: &SystemMatrix, b: &[f64], tol: f64) -> Result<(Vec<f64>, usize)> {
    let n = a.dim();
    // Lower triangle only; the factorization reads one side.
    let triplets: Vec<_> = a
        .triplets()
        .filter(|&(i, j, _)| i >= j)
        .map(|(i, j, v)| Triplet::new(i, j, v))
        .collect();
    let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| Error::InvalidInput(format!("sparse matrix construction failed: {e:?}")))?;
    let llt = mat
        .sp_cholesky(Side::Lower)
        .map_err(|e| Error::Indefinite(format!("Cholesky factorization failed: {e:?}")))?;

    let solve_col = |rhs: &[f64]| -> Vec<f64> {
        let col = Col::<f64>::from_fn(n, |i| rhs[i]);
        let sol = faer::prelude::Solve::solve(&llt, &col);
        (0..n).map(|i| sol[i]).collect()
    };
    let mut x = solve_col(b);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Indefinite("non-finite solution".into()));
    }
    let mut steps = 0;
    while steps < MAX_REFINEMENT_STEPS && relative_residual(a, &x, b) > tol {
        let d = solve_col(&residual(a, &x, b));
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += di;
        }
        steps += 1;
    }
    Ok((x, steps))
}

fn solve_cg(a: &SystemMatrix, b: &[f64], tol: f64) -> Result<(Vec<f64>, usize)> {
    let n = a.dim();
    let diag = a.diagonal();
    if let Some(i) = diag.iter().position(|&d| !(d > 0.0)) {
        return Err(Error::Indefinite(format!("non-positive diagonal entry at row {i}")));
    }
    let bn = norm(b);
    let mut x = vec![0.0; n];
    if bn == 0.0 {
        return Ok((x, 0));
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, d)| ri / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let cap = 20 * n.max(1);
    for it in 1..=cap {
        let ap = a.matvec(&p);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::Indefinite(format!(
                "non-positive curvature pᵀAp = {pap:e} at iteration {it}"
            )));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if norm(&r) <= tol * bn {
            // Guard against drift of the recursive residual.
            if relative_residual(a, &x, b) <= tol {
                return Ok((x, it));
            }
            r = residual(a, &x, b);
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NotConverged {
        iterations: cap,
        residual: relative_residual(a, &x, b),
    })
}
