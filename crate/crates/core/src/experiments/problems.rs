use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::dgspace::{ScalarField, Smoothness};
use crate::mesh::{build_lshape_mesh_with, build_square_mesh_with, Mesh, MeshPattern, Point2};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    /// `(0,1)²`.
    Square,
    /// `(-1,1)² \ [0,1]×[-1,0]`, re-entrant corner at the origin.
    LShape,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Square => "square",
            Domain::LShape => "lshape",
        }
    }

    /// Uniform mesh with `n` cells per unit length.
    pub fn mesh(self, n: usize) -> Result<Mesh> {
        self.mesh_with(n, MeshPattern::Diagonal)
    }

    pub fn mesh_with(self, n: usize, pattern: MeshPattern) -> Result<Mesh> {
        match self {
            Domain::Square => build_square_mesh_with(n, pattern),
            Domain::LShape => build_lshape_mesh_with(n, pattern),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Domain::Square),
            "lshape" | "l-shape" => Ok(Domain::LShape),
            _ => Err(Error::InvalidInput(format!("unknown domain `{s}` (square|lshape)"))),
        }
    }
}

/// Test problems with a known exact solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    /// `u = sin(πx) sin(πy)`, `f = 2π² u`.
    Manufactured,
    /// `u = x + y`, `f = 0`.
    Linear,
    /// `u = x² - y²`, `f = 0`.
    HarmonicQuadratic,
    /// `u = x² + y²`, `f = -4`.
    Quadratic,
    /// `u = ρ^{2/3} sin(2θ/3)` with `θ ∈ [0, 2π)`, `f = 0`. Harmonic on the
    /// L-shape and zero on both edges meeting at the re-entrant corner.
    Corner,
}

impl Problem {
    pub const ALL: [Problem; 5] = [
        Problem::Manufactured,
        Problem::Linear,
        Problem::HarmonicQuadratic,
        Problem::Quadratic,
        Problem::Corner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Manufactured => "manufactured",
            Problem::Linear => "linear",
            Problem::HarmonicQuadratic => "harmonic-quadratic",
            Problem::Quadratic => "quadratic",
            Problem::Corner => "corner",
        }
    }

    /// Exact solution, source and Dirichlet data. None of the fields
    /// depend on the domain; it is taken so callers state the pairing.
    pub fn data(self, _domain: Domain) -> ProblemData {
        match self {
            Problem::Manufactured => {
                let exact = ScalarField::new(
                    |p| (PI * p.x).sin() * (PI * p.y).sin(),
                    |p| {
                        [
                            PI * (PI * p.x).cos() * (PI * p.y).sin(),
                            PI * (PI * p.x).sin() * (PI * p.y).cos(),
                        ]
                    },
                    Smoothness::Smooth,
                );
                let source = ScalarField::new(
                    |p| 2.0 * PI * PI * (PI * p.x).sin() * (PI * p.y).sin(),
                    |p| {
                        [
                            2.0 * PI.powi(3) * (PI * p.x).cos() * (PI * p.y).sin(),
                            2.0 * PI.powi(3) * (PI * p.x).sin() * (PI * p.y).cos(),
                        ]
                    },
                    Smoothness::Smooth,
                );
                ProblemData::new(exact, source)
            }
            Problem::Linear => ProblemData::new(
                ScalarField::new(|p| p.x + p.y, |_| [1.0, 1.0], Smoothness::Polynomial(1)),
                ScalarField::zero(),
            ),
            Problem::HarmonicQuadratic => ProblemData::new(
                ScalarField::new(
                    |p| p.x * p.x - p.y * p.y,
                    |p| [2.0 * p.x, -2.0 * p.y],
                    Smoothness::Polynomial(2),
                ),
                ScalarField::zero(),
            ),
            Problem::Quadratic => ProblemData::new(
                ScalarField::new(
                    |p| p.x * p.x + p.y * p.y,
                    |p| [2.0 * p.x, 2.0 * p.y],
                    Smoothness::Polynomial(2),
                ),
                ScalarField::constant(-4.0),
            ),
            Problem::Corner => ProblemData::new(
                ScalarField::new(corner_value, corner_gradient, Smoothness::Singular),
                ScalarField::zero(),
            ),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown problem `{s}` (manufactured|linear|harmonic-quadratic|quadratic|corner)"
                ))
            })
    }
}

#[derive(Clone, Debug)]
pub struct ProblemData {
    pub exact: ScalarField,
    pub source: ScalarField,
    /// Dirichlet data; the trace of `exact`.
    pub boundary: ScalarField,
}

impl ProblemData {
    fn new(exact: ScalarField, source: ScalarField) -> Self {
        Self {
            boundary: exact.clone(),
            exact,
            source,
        }
    }
}

const CORNER_EXPONENT: f64 = 2.0 / 3.0;

fn corner_angle(p: Point2) -> f64 {
    let t = p.y.atan2(p.x);
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

fn corner_value(p: Point2) -> f64 {
    let rho = p.x.hypot(p.y);
    if rho == 0.0 {
        return 0.0;
    }
    rho.powf(CORNER_EXPONENT) * (CORNER_EXPONENT * corner_angle(p)).sin()
}

// ∇(ρ^α sin αθ) = α ρ^{α-1} (sin((α-1)θ), cos((α-1)θ)); unbounded at the
// origin, where zero is returned.
fn corner_gradient(p: Point2) -> [f64; 2] {
    let rho = p.x.hypot(p.y);
    if rho == 0.0 {
        return [0.0, 0.0];
    }
    let a = CORNER_EXPONENT;
    let t = corner_angle(p);
    let s = a * rho.powf(a - 1.0);
    [s * ((a - 1.0) * t).sin(), s * ((a - 1.0) * t).cos()]
}

/// Dirichlet data of the maximum-principle experiment, `cos(πx) cos(πy)`.
pub fn wmp_boundary() -> ScalarField {
    ScalarField::new(
        |p| (PI * p.x).cos() * (PI * p.y).cos(),
        |p| {
            [
                -PI * (PI * p.x).sin() * (PI * p.y).cos(),
                -PI * (PI * p.x).cos() * (PI * p.y).sin(),
            ]
        },
        Smoothness::Smooth,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_fd(f: &ScalarField, p: Point2) -> f64 {
        let h = 1e-4;
        let v = |dx: f64, dy: f64| f.value(Point2::new(p.x + dx, p.y + dy));
        (v(h, 0.0) + v(-h, 0.0) + v(0.0, h) + v(0.0, -h) - 4.0 * v(0.0, 0.0)) / (h * h)
    }

    #[test]
    fn sources_match_negative_laplacian() {
        let pts = [
            Point2::new(0.3, 0.7),
            Point2::new(-0.4, 0.2),
            Point2::new(-0.6, -0.5),
            Point2::new(0.8, 0.45),
        ];
        for pr in Problem::ALL {
            let d = pr.data(Domain::LShape);
            for &p in &pts {
                let lap = laplacian_fd(&d.exact, p);
                assert!((lap + d.source.value(p)).abs() < 1e-5, "{pr} at {p:?}");
            }
            assert!(d.exact.gradient_fd_error(&pts, 1e-6) < 1e-7, "{pr}");
        }
    }

    #[test]
    fn corner_solution_vanishes_on_corner_edges() {
        let d = Problem::Corner.data(Domain::LShape);
        for s in [0.1, 0.5, 1.0] {
            assert!(d.exact.value(Point2::new(s, 0.0)).abs() < 1e-15);
            assert!(d.exact.value(Point2::new(0.0, -s)).abs() < 1e-15);
            // θ = π/2 and π.
            let up = d.exact.value(Point2::new(0.0, s));
            assert!((up - s.powf(2.0 / 3.0) * (PI / 3.0).sin()).abs() < 1e-14);
        }
        assert_eq!(d.exact.value(Point2::new(0.0, 0.0)), 0.0);
        assert_eq!(d.exact.gradient(Point2::new(0.0, 0.0)), [0.0, 0.0]);
    }

    #[test]
    fn names_round_trip() {
        for p in Problem::ALL {
            assert_eq!(p.name().parse::<Problem>().unwrap(), p);
        }
        for d in [Domain::Square, Domain::LShape] {
            assert_eq!(d.name().parse::<Domain>().unwrap(), d);
        }
        assert!("disk".parse::<Domain>().is_err());
    }
}
