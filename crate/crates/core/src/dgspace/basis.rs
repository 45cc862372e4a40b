//! Nodal Lagrange bases on the reference triangle.

use faer::prelude::*;
use faer::Mat;

use crate::{Error, Result};

/// Lagrange basis of degree `r` on the reference triangle, with nodes at the
/// equispaced lattice `(i/r, j/r)`, `i + j ≤ r`. The three vertex nodes come
/// first (`(0,0)`, `(1,0)`, `(0,1)`), followed by the remaining lattice points
/// in lexicographic `(j, i)` order.
#[derive(Clone, Debug)]
pub struct ReferenceBasis {
    degree: usize,
    nodes: Vec<[f64; 2]>,
    exponents: Vec<(i32, i32)>,
    /// `coeffs[i * n + k]`: coefficient of monomial `k` in basis function `i`.
    coeffs: Vec<f64>,
}

pub fn make_basis(r: usize) -> Result<ReferenceBasis> {
    ReferenceBasis::new(r)
}

impl ReferenceBasis {
    pub fn new(r: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::UnsupportedDegree(r));
        }
        let rf = r as f64;
        let mut nodes = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        for j in 0..=r {
            for i in 0..=(r - j) {
                let is_vertex = (i, j) == (0, 0) || (i, j) == (r, 0) || (i, j) == (0, r);
                if !is_vertex {
                    nodes.push([i as f64 / rf, j as f64 / rf]);
                }
            }
        }
        let exponents: Vec<(i32, i32)> = (0..=r as i32)
            .flat_map(|total| (0..=total).map(move |b| (total - b, b)))
            .collect();
        let n = nodes.len();
        debug_assert_eq!(n, exponents.len());

        // Vandermonde V[j][k] = m_k(node_j); basis coefficients are V^{-1}.
        let vander = Mat::<f64>::from_fn(n, n, |j, k| monomial(exponents[k], nodes[j]));
        let inv = vander.partial_piv_lu().solve(Mat::<f64>::identity(n, n));
        let mut coeffs = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                coeffs[i * n + k] = inv[(k, i)];
            }
        }
        Ok(Self {
            degree: r,
            nodes,
            exponents,
            coeffs,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `(r + 1)(r + 2) / 2`.
    pub fn n_loc(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn eval_into(&self, xi: [f64; 2], out: &mut [f64]) {
        let n = self.n_loc();
        let m: Vec<f64> = self.exponents.iter().map(|&e| monomial(e, xi)).collect();
        for (i, o) in out.iter_mut().enumerate().take(n) {
            *o = dot(&self.coeffs[i * n..(i + 1) * n], &m);
        }
    }

    /// Reference gradients `∂/∂ξ`, `∂/∂η` of every basis function.
    pub fn grad_into(&self, xi: [f64; 2], out: &mut [[f64; 2]]) {
        let n = self.n_loc();
        let (dx, dy): (Vec<f64>, Vec<f64>) = self
            .exponents
            .iter()
            .map(|&(a, b)| {
                let dx = if a > 0 { a as f64 * monomial((a - 1, b), xi) } else { 0.0 };
                let dy = if b > 0 { b as f64 * monomial((a, b - 1), xi) } else { 0.0 };
                (dx, dy)
            })
            .unzip();
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let c = &self.coeffs[i * n..(i + 1) * n];
            *o = [dot(c, &dx), dot(c, &dy)];
        }
    }

    pub fn eval(&self, xi: [f64; 2]) -> Vec<f64> {
        let mut v = vec![0.0; self.n_loc()];
        self.eval_into(xi, &mut v);
        v
    }

    pub fn grad(&self, xi: [f64; 2]) -> Vec<[f64; 2]> {
        let mut g = vec![[0.0; 2]; self.n_loc()];
        self.grad_into(xi, &mut g);
        g
    }

    /// Values and reference gradients at a fixed point set.
    pub fn tabulate(&self, points: &[[f64; 2]]) -> Tabulation {
        let n = self.n_loc();
        let mut values = vec![0.0; n * points.len()];
        let mut grads = vec![[0.0; 2]; n * points.len()];
        for (q, &p) in points.iter().enumerate() {
            self.eval_into(p, &mut values[q * n..(q + 1) * n]);
            self.grad_into(p, &mut grads[q * n..(q + 1) * n]);
        }
        Tabulation { n_loc: n, values, grads }
    }
}

/// Basis values and reference gradients at a list of points, point-major.
#[derive(Clone, Debug)]
pub struct Tabulation {
    n_loc: usize,
    values: Vec<f64>,
    grads: Vec<[f64; 2]>,
}

impl Tabulation {
    pub fn num_points(&self) -> usize {
        self.values.len() / self.n_loc
    }

    pub fn values(&self, q: usize) -> &[f64] {
        &self.values[q * self.n_loc..(q + 1) * self.n_loc]
    }

    pub fn ref_grads(&self, q: usize) -> &[[f64; 2]] {
        &self.grads[q * self.n_loc..(q + 1) * self.n_loc]
    }
}

fn monomial((a, b): (i32, i32), [x, y]: [f64; 2]) -> f64 {
    x.powi(a) * y.powi(b)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_ref_points(n: usize, seed: u64) -> Vec<[f64; 2]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| loop {
                let p = [rng.gen::<f64>(), rng.gen::<f64>()];
                if p[0] + p[1] <= 1.0 {
                    break p;
                }
            })
            .collect()
    }

    #[test]
    fn lagrange_property() {
        for r in 1..=4 {
            let b = make_basis(r).unwrap();
            assert_eq!(b.n_loc(), (r + 1) * (r + 2) / 2);
            for (j, &node) in b.nodes().iter().enumerate() {
                let v = b.eval(node);
                for (i, vi) in v.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((vi - expect).abs() < 1e-12, "r={r} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn partition_of_unity_and_zero_gradient_sum() {
        for r in 1..=2 {
            let b = make_basis(r).unwrap();
            let mut pts = random_ref_points(50, r as u64);
            pts.push([1.0 / 3.0, 1.0 / 3.0]);
            for p in pts {
                let s: f64 = b.eval(p).iter().sum();
                assert!((s - 1.0).abs() < 1e-12);
                let g = b.grad(p);
                let gx: f64 = g.iter().map(|g| g[0]).sum();
                let gy: f64 = g.iter().map(|g| g[1]).sum();
                assert!(gx.abs() < 1e-12 && gy.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn linear_basis_is_barycentric() {
        let b = make_basis(1).unwrap();
        assert_eq!(b.eval([0.0, 0.0])[0], 1.0);
        for p in random_ref_points(10, 7) {
            let v = b.eval(p);
            let lam = [1.0 - p[0] - p[1], p[0], p[1]];
            for i in 0..3 {
                assert!((v[i] - lam[i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn quadratic_midpoint_functions_are_bubble_products() {
        let b = make_basis(2).unwrap();
        let lam = |p: [f64; 2]| [1.0 - p[0] - p[1], p[0], p[1]];
        for p in random_ref_points(20, 11) {
            let v = b.eval(p);
            let l = lam(p);
            for (i, node) in b.nodes().iter().enumerate().skip(3) {
                // Midpoint between the two vertices whose barycentric coordinate is 1/2.
                let ln = lam(*node);
                let pair: Vec<usize> = (0..3).filter(|&k| (ln[k] - 0.5).abs() < 1e-12).collect();
                assert_eq!(pair.len(), 2);
                let expect = 4.0 * l[pair[0]] * l[pair[1]];
                assert!((v[i] - expect).abs() < 1e-12);
            }
            for k in 0..3 {
                let expect = l[k] * (2.0 * l[k] - 1.0);
                assert!((v[k] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let b = make_basis(2).unwrap();
        let h = 1e-6;
        for p in random_ref_points(10, 3) {
            let g = b.grad(p);
            let vx = b.eval([p[0] + h, p[1]]);
            let vx0 = b.eval([p[0] - h, p[1]]);
            let vy = b.eval([p[0], p[1] + h]);
            let vy0 = b.eval([p[0], p[1] - h]);
            for i in 0..b.n_loc() {
                assert!((g[i][0] - (vx[i] - vx0[i]) / (2.0 * h)).abs() < 1e-7);
                assert!((g[i][1] - (vy[i] - vy0[i]) / (2.0 * h)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn degree_zero_rejected() {
        assert!(matches!(make_basis(0), Err(Error::UnsupportedDegree(0))));
    }
}
