//! Gauss rules on `[0, 1]` and collapsed (Duffy) Gauss product rules on the
//! reference triangle. All weights are positive and all points interior.

use crate::{Error, Result};

/// Highest exactness degree the constructors accept.
pub const MAX_QUAD_DEGREE: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadRuleEdge {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadRuleEdge {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadRuleTri {
    /// Reference coordinates `(ξ, η)`.
    pub points: Vec<[f64; 2]>,
    /// Weights summing to the reference area `1/2`.
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadRuleTri {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Barycentric coordinates `(λ0, λ1, λ2)` of point `i`.
    pub fn barycentric(&self, i: usize) -> [f64; 3] {
        let [xi, eta] = self.points[i];
        [1.0 - xi - eta, xi, eta]
    }

    pub fn iter(&self) -> impl Iterator<Item = ([f64; 2], f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss rule on `[0, 1]` exact for polynomials of degree `≤ d`.
pub fn make_quad_edge(d: usize) -> Result<QuadRuleEdge> {
    if d > MAX_QUAD_DEGREE {
        return Err(Error::UnsupportedQuadrature(d, MAX_QUAD_DEGREE));
    }
    let n = d / 2 + 1;
    let (x, w) = gauss_legendre(n);
    Ok(QuadRuleEdge {
        points: x.iter().map(|&t| 0.5 * (t + 1.0)).collect(),
        weights: w.iter().map(|&wi| 0.5 * wi).collect(),
        degree: 2 * n - 1,
    })
}

/// Triangle rule exact for polynomials of total degree `≤ d`, obtained from
/// the collapsed map `ξ = u (1 - v)`, `η = v` and Gauss rules in `u` and `v`.
pub fn make_quad_tri(d: usize) -> Result<QuadRuleTri> {
    if d > MAX_QUAD_DEGREE {
        return Err(Error::UnsupportedQuadrature(d, MAX_QUAD_DEGREE));
    }
    // The Jacobian factor (1 - v) raises the degree in v by one.
    let n = (d + 3) / 2;
    let (x, w) = gauss_legendre(n);
    let g: Vec<(f64, f64)> = x
        .iter()
        .zip(&w)
        .map(|(&t, &wi)| (0.5 * (t + 1.0), 0.5 * wi))
        .collect();
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for &(v, wv) in &g {
        for &(u, wu) in &g {
            points.push([u * (1.0 - v), v]);
            weights.push(wu * wv * (1.0 - v));
        }
    }
    Ok(QuadRuleTri {
        points,
        weights,
        degree: 2 * n - 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `∫_T ξ^a η^b = a! b! / (a + b + 2)!`.
    fn dirichlet(a: u32, b: u32) -> f64 {
        let f = |n: u32| (1..=n).map(f64::from).product::<f64>();
        f(a) * f(b) / f(a + b + 2)
    }

    #[test]
    fn edge_rules_exact_up_to_degree() {
        for d in 0..=MAX_QUAD_DEGREE {
            let q = make_quad_edge(d).unwrap();
            assert!(q.degree >= d);
            assert!(q.weights.iter().all(|&w| w > 0.0));
            assert!((q.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for k in 0..=d as i32 {
                let approx: f64 = q.iter().map(|(t, w)| w * t.powi(k)).sum();
                assert!((approx - 1.0 / (k as f64 + 1.0)).abs() < 1e-13, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn three_point_gauss_integrates_t5() {
        let q = make_quad_edge(5).unwrap();
        assert_eq!(q.len(), 3);
        let v: f64 = q.iter().map(|(t, w)| w * t.powi(5)).sum();
        assert!((v - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn triangle_rules_exact_for_all_monomials() {
        for d in 0..=MAX_QUAD_DEGREE {
            let q = make_quad_tri(d).unwrap();
            assert!(q.degree >= d);
            assert!(q.weights.iter().all(|&w| w > 0.0));
            assert!((q.weights.iter().sum::<f64>() - 0.5).abs() < 1e-14);
            for a in 0..=d as u32 {
                for b in 0..=(d as u32 - a) {
                    let approx: f64 = q
                        .iter()
                        .map(|([x, y], w)| w * x.powi(a as i32) * y.powi(b as i32))
                        .sum();
                    assert!((approx - dirichlet(a, b)).abs() < 1e-13, "d={d} a={a} b={b}");
                }
            }
            for i in 0..q.len() {
                let l = q.barycentric(i);
                assert!(l.iter().all(|&c| c > 0.0));
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let q = make_quad_tri(2).unwrap();
        let v: f64 = q.iter().map(|([x, y], w)| w * x * y).sum();
        assert!((v - 1.0 / 24.0).abs() < 1e-15);
        let q = make_quad_tri(6).unwrap();
        let v: f64 = q.iter().map(|([x, y], w)| w * x.powi(3) * y.powi(3)).sum();
        assert!((v - 1.0 / 1120.0).abs() < 1e-13);
    }

    #[test]
    fn unsupported_degree_is_rejected() {
        assert!(matches!(make_quad_tri(11), Err(Error::UnsupportedQuadrature(11, 10))));
        assert!(make_quad_edge(11).is_err());
    }
}
