use std::fmt;
use std::sync::Arc;

use crate::mesh::Point2;

type ValueFn = dyn Fn(Point2) -> f64 + Send + Sync;
type GradFn = dyn Fn(Point2) -> [f64; 2] + Send + Sync;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    /// Global polynomial of the given total degree.
    Polynomial(usize),
    Smooth,
    /// Not `C¹` somewhere on the closure of the domain.
    Singular,
}

/// A scalar function of `(x, y)` together with its gradient.
#[derive(Clone)]
pub struct ScalarField {
    value: Arc<ValueFn>,
    gradient: Arc<GradFn>,
    pub smoothness: Smoothness,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("smoothness", &self.smoothness)
            .finish_non_exhaustive()
    }
}

impl ScalarField {
    pub fn new(
        value: impl Fn(Point2) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(Point2) -> [f64; 2] + Send + Sync + 'static,
        smoothness: Smoothness,
    ) -> Self {
        Self {
            value: Arc::new(value),
            gradient: Arc::new(gradient),
            smoothness,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c, |_| [0.0, 0.0], Smoothness::Polynomial(0))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn value(&self, p: Point2) -> f64 {
        (self.value)(p)
    }

    pub fn gradient(&self, p: Point2) -> [f64; 2] {
        (self.gradient)(p)
    }

    /// Largest relative discrepancy between the analytic gradient and central
    /// differences with step `step` over `points`.
    pub fn gradient_fd_error(&self, points: &[Point2], step: f64) -> f64 {
        points
            .iter()
            .map(|&p| {
                let g = self.gradient(p);
                let fx = (self.value(p + Point2::new(step, 0.0))
                    - self.value(p - Point2::new(step, 0.0)))
                    / (2.0 * step);
                let fy = (self.value(p + Point2::new(0.0, step))
                    - self.value(p - Point2::new(0.0, step)))
                    / (2.0 * step);
                let diff = (g[0] - fx).hypot(g[1] - fy);
                diff / g[0].hypot(g[1]).max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gradient_consistency_check_detects_errors() {
        let good = ScalarField::new(
            |p| (PI * p.x).sin() * (PI * p.y).sin(),
            |p| {
                [
                    PI * (PI * p.x).cos() * (PI * p.y).sin(),
                    PI * (PI * p.x).sin() * (PI * p.y).cos(),
                ]
            },
            Smoothness::Smooth,
        );
        let pts: Vec<_> = (0..10)
            .map(|i| Point2::new(0.05 + 0.09 * i as f64, 0.9 - 0.08 * i as f64))
            .collect();
        assert!(good.gradient_fd_error(&pts, 1e-6) < 1e-5);

        let bad = ScalarField::new(|p| p.x * p.x, |p| [p.x, 0.0], Smoothness::Polynomial(2));
        assert!(bad.gradient_fd_error(&pts, 1e-6) > 1e-2);
        assert_eq!(ScalarField::constant(3.0).value(Point2::new(1.0, 2.0)), 3.0);
    }
}
