//! Discontinuous piecewise-polynomial spaces `V_h` of degree `r`.
//!
//! Element `K` carries `n_loc = (r+1)(r+2)/2` nodal basis functions with
//! global indices `K * n_loc + i`; no DOF is shared between elements.

mod basis;
mod field;
mod quadrature;

use std::ops::{Deref, DerefMut};

use crate::mesh::{reference_edge_point, Mesh, Point2};
use crate::{Error, Result};

pub use basis::{make_basis, ReferenceBasis, Tabulation};
pub use field::{ScalarField, Smoothness};
pub use quadrature::{make_quad_edge, make_quad_tri, QuadRuleEdge, QuadRuleTri, MAX_QUAD_DEGREE};

/// Barycentric tolerance for point-location checks.
const INSIDE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DofMap {
    pub n_loc: usize,
    pub n_elements: usize,
}

impl DofMap {
    pub fn total_dofs(&self) -> usize {
        self.n_loc * self.n_elements
    }

    pub fn global(&self, element: usize, local: usize) -> usize {
        debug_assert!(element < self.n_elements && local < self.n_loc);
        element * self.n_loc + local
    }

    pub fn local(&self, global: usize) -> (usize, usize) {
        (global / self.n_loc, global % self.n_loc)
    }

    pub fn element_dofs(&self, element: usize) -> std::ops::Range<usize> {
        element * self.n_loc..(element + 1) * self.n_loc
    }
}

/// Coefficients of a function in `V_h`, indexed by global DOF.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoeffVector(pub Vec<f64>);

impl CoeffVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for CoeffVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for CoeffVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for CoeffVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Degree-`r` DG space data that does not depend on a particular mesh:
/// reference basis, quadrature rules and basis tabulations on them.
#[derive(Clone, Debug)]
pub struct DgSpace {
    basis: ReferenceBasis,
    /// Degree `2r`, for stiffness and mass terms.
    pub quad_stiffness: QuadRuleTri,
    /// Degree `2r + 4`, for load integrals and norms of non-polynomial data.
    pub quad_load: QuadRuleTri,
    /// Degree `2r + 2`.
    pub quad_edge: QuadRuleEdge,
    tab_stiffness: Tabulation,
    tab_load: Tabulation,
    /// `tab_edge[k]`: tabulation at the edge rule mapped onto local edge `k`,
    /// in the element's local edge direction.
    tab_edge: [Tabulation; 3],
}

/// Highest supported polynomial degree.
pub const MAX_DEGREE: usize = 2;

impl DgSpace {
    pub fn new(degree: usize) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::UnsupportedDegree(degree));
        }
        let basis = make_basis(degree)?;
        let quad_stiffness = make_quad_tri(2 * degree)?;
        let quad_load = make_quad_tri(2 * degree + 4)?;
        let quad_edge = make_quad_edge(2 * degree + 2)?;
        let tab_stiffness = basis.tabulate(&quad_stiffness.points);
        let tab_load = basis.tabulate(&quad_load.points);
        let tab_edge = [0, 1, 2].map(|k| {
            let pts: Vec<_> = quad_edge
                .points
                .iter()
                .map(|&t| reference_edge_point(k, t))
                .collect();
            basis.tabulate(&pts)
        });
        Ok(Self {
            basis,
            quad_stiffness,
            quad_load,
            quad_edge,
            tab_stiffness,
            tab_load,
            tab_edge,
        })
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn basis(&self) -> &ReferenceBasis {
        &self.basis
    }

    pub fn n_loc(&self) -> usize {
        self.basis.n_loc()
    }

    pub fn dofmap(&self, mesh: &Mesh) -> DofMap {
        DofMap {
            n_loc: self.n_loc(),
            n_elements: mesh.num_elements(),
        }
    }

    pub fn total_dofs(&self, mesh: &Mesh) -> usize {
        self.dofmap(mesh).total_dofs()
    }

    pub fn tab_stiffness(&self) -> &Tabulation {
        &self.tab_stiffness
    }

    pub fn tab_load(&self) -> &Tabulation {
        &self.tab_load
    }

    pub fn tab_edge(&self, local_edge: usize) -> &Tabulation {
        &self.tab_edge[local_edge]
    }

    /// Edge-rule point index on `local_edge` of an element corresponding to
    /// edge-rule point `q` in a possibly reversed traversal.
    pub fn edge_point_index(&self, q: usize, reversed: bool) -> usize {
        if reversed {
            // Gauss points are symmetric about 1/2.
            self.quad_edge.len() - 1 - q
        } else {
            q
        }
    }
}

/// Nodal interpolant: coefficient `(K, i)` is the field value at the image of
/// reference node `i` in `K`.
pub fn interpolate(mesh: &Mesh, space: &DgSpace, field: &ScalarField) -> CoeffVector {
    let n = space.n_loc();
    let mut c = Vec::with_capacity(mesh.num_elements() * n);
    for k in 0..mesh.num_elements() {
        let g = mesh.geometry(k);
        c.extend(space.basis().nodes().iter().map(|&xi| field.value(g.map(xi))));
    }
    CoeffVector(c)
}

/// A function that is smooth on each element and may jump across edges,
/// evaluated through element-local reference coordinates.
pub trait BrokenFunction {
    fn mesh(&self) -> &Mesh;
    fn value(&self, element: usize, xi: [f64; 2]) -> f64;
    /// Physical gradient.
    fn gradient(&self, element: usize, xi: [f64; 2]) -> [f64; 2];
}

/// `u_h ∈ V_h` given by its coefficient vector.
#[derive(Clone, Copy, Debug)]
pub struct DiscreteFunction<'a> {
    pub mesh: &'a Mesh,
    pub space: &'a DgSpace,
    pub coeffs: &'a [f64],
}

impl<'a> DiscreteFunction<'a> {
    pub fn new(mesh: &'a Mesh, space: &'a DgSpace, coeffs: &'a [f64]) -> Result<Self> {
        let expected = space.total_dofs(mesh);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Self { mesh, space, coeffs })
    }

    pub fn element_coeffs(&self, element: usize) -> &'a [f64] {
        let n = self.space.n_loc();
        &self.coeffs[element * n..(element + 1) * n]
    }

    fn locate(&self, element: usize, point: Point2) -> Result<[f64; 2]> {
        let xi = self.mesh.geometry(element).to_reference(point);
        let lam = [1.0 - xi[0] - xi[1], xi[0], xi[1]];
        if lam.iter().any(|&l| l < -INSIDE_TOL) {
            return Err(Error::PointOutsideElement {
                element,
                x: point.x,
                y: point.y,
            });
        }
        Ok(xi)
    }

    /// Value at a physical point on the closure of `element`.
    pub fn eval_on_element(&self, element: usize, point: Point2) -> Result<f64> {
        let xi = self.locate(element, point)?;
        Ok(self.value(element, xi))
    }

    pub fn grad_on_element(&self, element: usize, point: Point2) -> Result<[f64; 2]> {
        let xi = self.locate(element, point)?;
        Ok(self.gradient(element, xi))
    }
}

impl BrokenFunction for DiscreteFunction<'_> {
    fn mesh(&self) -> &Mesh {
        self.mesh
    }

    fn value(&self, element: usize, xi: [f64; 2]) -> f64 {
        let c = self.element_coeffs(element);
        let mut phi = vec![0.0; c.len()];
        self.space.basis().eval_into(xi, &mut phi);
        c.iter().zip(&phi).map(|(a, b)| a * b).sum()
    }

    fn gradient(&self, element: usize, xi: [f64; 2]) -> [f64; 2] {
        let c = self.element_coeffs(element);
        let mut g = vec![[0.0; 2]; c.len()];
        self.space.basis().grad_into(xi, &mut g);
        let mut r = [0.0; 2];
        for (ci, gi) in c.iter().zip(&g) {
            r[0] += ci * gi[0];
            r[1] += ci * gi[1];
        }
        self.mesh.geometry(element).grad_to_physical(r)
    }
}

/// `u - u_h` for an exact field `u`.
#[derive(Clone, Copy, Debug)]
pub struct ErrorFunction<'a> {
    pub discrete: DiscreteFunction<'a>,
    pub exact: &'a ScalarField,
}

impl<'a> ErrorFunction<'a> {
    /// Panics if `coeffs` does not match the space on `mesh`.
    pub fn new(
        mesh: &'a Mesh,
        space: &'a DgSpace,
        coeffs: &'a [f64],
        exact: &'a ScalarField,
    ) -> Self {
        Self {
            discrete: DiscreteFunction::new(mesh, space, coeffs)
                .expect("coefficient vector does not match the space"),
            exact,
        }
    }
}

impl BrokenFunction for ErrorFunction<'_> {
    fn mesh(&self) -> &Mesh {
        self.discrete.mesh
    }

    fn value(&self, element: usize, xi: [f64; 2]) -> f64 {
        let p = self.discrete.mesh.geometry(element).map(xi);
        self.exact.value(p) - self.discrete.value(element, xi)
    }

    fn gradient(&self, element: usize, xi: [f64; 2]) -> [f64; 2] {
        let p = self.discrete.mesh.geometry(element).map(xi);
        let g = self.exact.gradient(p);
        let gh = self.discrete.gradient(element, xi);
        [g[0] - gh[0], g[1] - gh[1]]
    }
}

/// A [`ScalarField`] seen as a broken function on a mesh.
#[derive(Clone, Copy, Debug)]
pub struct FieldOnMesh<'a> {
    pub mesh: &'a Mesh,
    pub field: &'a ScalarField,
}

impl BrokenFunction for FieldOnMesh<'_> {
    fn mesh(&self) -> &Mesh {
        self.mesh
    }

    fn value(&self, element: usize, xi: [f64; 2]) -> f64 {
        self.field.value(self.mesh.geometry(element).map(xi))
    }

    fn gradient(&self, element: usize, xi: [f64; 2]) -> [f64; 2] {
        self.field.gradient(self.mesh.geometry(element).map(xi))
    }
}
