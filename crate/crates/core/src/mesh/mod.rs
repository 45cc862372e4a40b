//! Conforming triangular meshes with derived edge topology.
//!
//! A [`Mesh`] is built from a vertex list and a counterclockwise triangle
//! list; edges, normals, element geometry and edge sizes are always derived,
//! never supplied. Local edge `k` of a triangle is the edge opposite its local
//! vertex `k`, running from vertex `k+1` to vertex `k+2` (mod 3).

mod generate;
mod io;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use crate::{Error, Result};

pub use generate::{
    build_lshape_mesh, build_lshape_mesh_with, build_square_mesh, build_square_mesh_with,
    refine_uniform, MeshPattern,
};
pub use io::{read_mesh, write_mesh};

/// Relative area threshold below which a triangle counts as degenerate.
const MIN_AREA_RATIO: f64 = 1e-14;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// Three vertex indices in counterclockwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub v: [usize; 3],
}

impl Triangle {
    pub const fn new(a: usize, b: usize, c: usize) -> Self {
        Self { v: [a, b, c] }
    }

    /// Global endpoints of local edge `k`, in local orientation.
    pub fn local_edge(&self, k: usize) -> (usize, usize) {
        (self.v[(k + 1) % 3], self.v[(k + 2) % 3])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Interior,
    Boundary,
}

/// One element adjacent to an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeSide {
    pub element: usize,
    /// Local edge index within `element`.
    pub local_edge: usize,
    /// True when the element's local edge runs from `endpoints[1]` to `endpoints[0]`.
    pub reversed: bool,
}

impl EdgeSide {
    /// Element-local edge parameter for edge parameter `t` (0 at `endpoints[0]`).
    pub fn local_param(&self, t: f64) -> f64 {
        if self.reversed {
            1.0 - t
        } else {
            t
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    /// Sorted global vertex indices.
    pub endpoints: [usize; 2],
    pub first: EdgeSide,
    pub second: Option<EdgeSide>,
    /// Unit normal, outward from `first` (and hence outward from the domain on
    /// boundary edges).
    pub normal: Point2,
    pub length: f64,
    /// `(h_K1 + h_K2) / 2` on interior edges, `h_K` on boundary edges.
    pub h_e: f64,
}

impl Edge {
    pub fn kind(&self) -> EdgeKind {
        if self.second.is_some() {
            EdgeKind::Interior
        } else {
            EdgeKind::Boundary
        }
    }

    pub fn is_boundary(&self) -> bool {
        self.second.is_none()
    }

    pub fn sides(&self) -> impl Iterator<Item = &EdgeSide> {
        std::iter::once(&self.first).chain(self.second.as_ref())
    }
}

/// Affine map from the reference triangle `{(ξ, η) : ξ, η ≥ 0, ξ + η ≤ 1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementGeometry {
    pub origin: Point2,
    /// Columns are `v1 - v0` and `v2 - v0`.
    pub jacobian: [[f64; 2]; 2],
    pub inv_jacobian: [[f64; 2]; 2],
    pub det: f64,
    pub area: f64,
    /// Circumscribed-circle diameter `h_K`.
    pub diameter: f64,
    /// Inscribed-circle diameter `ρ_K`.
    pub inscribed_diameter: f64,
}

impl ElementGeometry {
    pub fn new(p: [Point2; 3]) -> Self {
        let e1 = p[1] - p[0];
        let e2 = p[2] - p[0];
        let det = e1.cross(e2);
        let jacobian = [[e1.x, e2.x], [e1.y, e2.y]];
        let inv_jacobian = [[e2.y / det, -e2.x / det], [-e1.y / det, e1.x / det]];
        let a = (p[2] - p[1]).norm();
        let b = (p[0] - p[2]).norm();
        let c = e1.norm();
        let area = 0.5 * det;
        Self {
            origin: p[0],
            jacobian,
            inv_jacobian,
            det,
            area,
            diameter: a * b * c / (2.0 * area),
            inscribed_diameter: 4.0 * area / (a + b + c),
        }
    }

    pub fn map(&self, xi: [f64; 2]) -> Point2 {
        let j = &self.jacobian;
        Point2::new(
            self.origin.x + j[0][0] * xi[0] + j[0][1] * xi[1],
            self.origin.y + j[1][0] * xi[0] + j[1][1] * xi[1],
        )
    }

    pub fn to_reference(&self, p: Point2) -> [f64; 2] {
        let d = p - self.origin;
        let m = &self.inv_jacobian;
        [m[0][0] * d.x + m[0][1] * d.y, m[1][0] * d.x + m[1][1] * d.y]
    }

    /// Maps a reference gradient to a physical one (`J^{-T} g`).
    pub fn grad_to_physical(&self, g: [f64; 2]) -> [f64; 2] {
        let m = &self.inv_jacobian;
        [m[0][0] * g[0] + m[1][0] * g[1], m[0][1] * g[0] + m[1][1] * g[1]]
    }

    pub fn shape_ratio(&self) -> f64 {
        self.diameter / self.inscribed_diameter
    }
}

/// Reference coordinates of the point at parameter `t` along local edge `k`.
pub fn reference_edge_point(k: usize, t: f64) -> [f64; 2] {
    const V: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    let a = V[(k + 1) % 3];
    let b = V[(k + 2) % 3];
    [(1.0 - t) * a[0] + t * b[0], (1.0 - t) * a[1] + t * b[1]]
}

/// Size and shape metrics of a triangulation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshMetrics {
    /// `h = max h_K`.
    pub h: f64,
    /// `max h_K / ρ_K`.
    pub max_shape_ratio: f64,
    /// `max h / h_K`.
    pub quasi_uniformity: f64,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    vertices: Vec<Point2>,
    triangles: Vec<Triangle>,
    edges: Vec<Edge>,
    element_edges: Vec<[usize; 3]>,
    geometry: Vec<ElementGeometry>,
    boundary_vertex: Vec<bool>,
}

impl Mesh {
    /// Validates the triangulation and derives all topology.
    pub fn new(vertices: Vec<Point2>, triangles: Vec<Triangle>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidMesh(format!("vertex {i} is not finite")));
        }
        let mut geometry = Vec::with_capacity(triangles.len());
        for (k, t) in triangles.iter().enumerate() {
            if let Some(&bad) = t.v.iter().find(|&&i| i >= vertices.len()) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {k} references missing vertex {bad}"
                )));
            }
            let [a, b, c] = t.v;
            if a == b || b == c || a == c {
                return Err(Error::InvalidMesh(format!(
                    "triangle {k} has repeated vertices"
                )));
            }
            let p = [vertices[a], vertices[b], vertices[c]];
            let longest = (p[1] - p[0])
                .norm()
                .max((p[2] - p[1]).norm())
                .max((p[0] - p[2]).norm());
            let signed_area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
            if !(signed_area >= MIN_AREA_RATIO * longest * longest) {
                return Err(Error::DegenerateTriangle(k));
            }
            geometry.push(ElementGeometry::new(p));
        }

        let (edges, element_edges) = extract_edges_with_map(&triangles, &vertices, &geometry)?;

        let mut boundary_degree = vec![0usize; vertices.len()];
        for e in edges.iter().filter(|e| e.is_boundary()) {
            boundary_degree[e.endpoints[0]] += 1;
            boundary_degree[e.endpoints[1]] += 1;
        }
        if let Some(i) = boundary_degree.iter().position(|&d| d % 2 == 1) {
            return Err(Error::InvalidMesh(format!(
                "boundary edges do not form closed loops at vertex {i}"
            )));
        }
        let boundary_vertex = boundary_degree.iter().map(|&d| d > 0).collect();

        Ok(Self {
            vertices,
            triangles,
            edges,
            element_edges,
            geometry,
            boundary_vertex,
        })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_elements(&self) -> usize {
        self.triangles.len()
    }

    /// Global edge indices of the three local edges of element `k`.
    pub fn element_edges(&self, k: usize) -> [usize; 3] {
        self.element_edges[k]
    }

    pub fn geometry(&self, k: usize) -> &ElementGeometry {
        &self.geometry[k]
    }

    pub fn boundary_vertex_flags(&self) -> &[bool] {
        &self.boundary_vertex
    }

    pub fn element_vertices(&self, k: usize) -> [Point2; 3] {
        self.triangles[k].v.map(|i| self.vertices[i])
    }

    pub fn area(&self) -> f64 {
        self.geometry.iter().map(|g| g.area).sum()
    }

    pub fn h(&self) -> f64 {
        self.geometry.iter().map(|g| g.diameter).fold(0.0, f64::max)
    }

    pub fn metrics(&self) -> MeshMetrics {
        mesh_metrics(self)
    }

    /// Outward unit normal of local edge `k` of element `elem`, computed from
    /// the element alone.
    pub fn local_outward_normal(&self, elem: usize, k: usize) -> Point2 {
        let (a, b) = self.triangles[elem].local_edge(k);
        let t = self.vertices[b] - self.vertices[a];
        // Counterclockwise elements have the interior on the left of each edge.
        Point2::new(t.y, -t.x) * (1.0 / t.norm())
    }

    /// Copy of the mesh with the stored orientation of interior edge `e`
    /// reversed: the adjacent elements swap roles and the normal flips.
    pub fn with_flipped_edge(&self, e: usize) -> Result<Mesh> {
        let mut out = self.clone();
        let edge = &mut out.edges[e];
        let second = edge
            .second
            .ok_or_else(|| Error::InvalidInput(format!("edge {e} is a boundary edge")))?;
        edge.second = Some(edge.first);
        edge.first = second;
        edge.normal = edge.normal * -1.0;
        Ok(out)
    }
}

/// Size and shape metrics: `h = max h_K`, `max h_K/ρ_K`, `max h/h_K`.
pub fn mesh_metrics(mesh: &Mesh) -> MeshMetrics {
    let h = mesh.h();
    let mut max_shape_ratio: f64 = 0.0;
    let mut quasi_uniformity: f64 = 0.0;
    for g in &mesh.geometry {
        max_shape_ratio = max_shape_ratio.max(g.shape_ratio());
        quasi_uniformity = quasi_uniformity.max(h / g.diameter);
    }
    MeshMetrics {
        h,
        max_shape_ratio,
        quasi_uniformity,
    }
}

/// Derives the edge list of a conforming triangulation, ordered
/// lexicographically by sorted endpoint indices.
pub fn extract_edges(triangles: &[Triangle], vertices: &[Point2]) -> Result<Vec<Edge>> {
    let geometry: Vec<_> = triangles
        .iter()
        .map(|t| ElementGeometry::new(t.v.map(|i| vertices[i])))
        .collect();
    extract_edges_with_map(triangles, vertices, &geometry).map(|(edges, _)| edges)
}

fn extract_edges_with_map(
    triangles: &[Triangle],
    vertices: &[Point2],
    geometry: &[ElementGeometry],
) -> Result<(Vec<Edge>, Vec<[usize; 3]>)> {
    let mut incidence: BTreeMap<(usize, usize), Vec<EdgeSide>> = BTreeMap::new();
    for (elem, t) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = t.local_edge(k);
            let key = (a.min(b), a.max(b));
            incidence.entry(key).or_default().push(EdgeSide {
                element: elem,
                local_edge: k,
                reversed: a > b,
            });
        }
    }

    let mut edges = Vec::with_capacity(incidence.len());
    let mut element_edges = vec![[usize::MAX; 3]; triangles.len()];
    for ((a, b), mut sides) in incidence {
        if sides.len() > 2 {
            return Err(Error::Nonconforming(a, b, sides.len()));
        }
        if sides.len() == 2 && sides[0].element == sides[1].element {
            return Err(Error::InvalidMesh(format!(
                "edge ({a}, {b}) appears twice in triangle {}",
                sides[0].element
            )));
        }
        if sides.len() == 2 && sides[0].reversed == sides[1].reversed {
            // Two counterclockwise neighbours traverse a shared edge in opposite directions.
            return Err(Error::InvalidMesh(format!(
                "elements {} and {} overlap along edge ({a}, {b})",
                sides[0].element, sides[1].element
            )));
        }
        sides.sort_by_key(|s| s.element);
        let first = sides[0];
        let second = sides.get(1).copied();

        let pa = vertices[a];
        let pb = vertices[b];
        let tangent = pb - pa;
        let length = tangent.norm();
        // Interior of `first` lies to the left of its local (counterclockwise)
        // traversal; the outward normal is the right-hand normal of that direction.
        let dir = if first.reversed { -1.0 } else { 1.0 };
        let normal = Point2::new(tangent.y, -tangent.x) * (dir / length);

        let h_first = geometry[first.element].diameter;
        let h_e = match second {
            Some(s) => 0.5 * (h_first + geometry[s.element].diameter),
            None => h_first,
        };

        let idx = edges.len();
        for s in std::iter::once(&first).chain(second.as_ref()) {
            element_edges[s.element][s.local_edge] = idx;
        }
        edges.push(Edge {
            endpoints: [a, b],
            first,
            second,
            normal,
            length,
            h_e,
        });
    }
    Ok((edges, element_edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square_two_triangles() -> Mesh {
        let v = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        Mesh::new(v, vec![Triangle::new(0, 1, 2), Triangle::new(0, 2, 3)]).unwrap()
    }

    #[test]
    fn two_triangle_square_topology() {
        let m = unit_square_two_triangles();
        assert_eq!(m.edges().len(), 5);
        let interior: Vec<_> = m.edges().iter().filter(|e| !e.is_boundary()).collect();
        assert_eq!(interior.len(), 1);
        assert_eq!(interior[0].endpoints, [0, 2]);
        // Outward from element 0 (below the diagonal).
        let n = interior[0].normal;
        let s = 1.0 / 2f64.sqrt();
        assert!((n.x + s).abs() < 1e-15 && (n.y - s).abs() < 1e-15);
        assert!(m.boundary_vertex_flags().iter().all(|&b| b));
    }

    #[test]
    fn boundary_normals_point_outward() {
        let m = unit_square_two_triangles();
        for e in m.edges().iter().filter(|e| e.is_boundary()) {
            let mid = (m.vertices()[e.endpoints[0]] + m.vertices()[e.endpoints[1]]) * 0.5;
            let probe = mid + e.normal * 1e-3;
            let inside = probe.x > 0.0 && probe.x < 1.0 && probe.y > 0.0 && probe.y < 1.0;
            assert!(!inside, "normal of {:?} points inward", e.endpoints);
            assert_eq!(e.h_e, m.geometry(e.first.element).diameter);
        }
    }

    #[test]
    fn local_normals_agree_with_stored_orientation() {
        let m = unit_square_two_triangles();
        for e in m.edges() {
            let n1 = m.local_outward_normal(e.first.element, e.first.local_edge);
            assert!((n1 - e.normal).norm() < 1e-15);
            if let Some(s) = e.second {
                let n2 = m.local_outward_normal(s.element, s.local_edge);
                assert!((n1 + n2).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn flipping_edge_swaps_sides_and_normal() {
        let m = unit_square_two_triangles();
        let e = m.edges().iter().position(|e| !e.is_boundary()).unwrap();
        let f = m.with_flipped_edge(e).unwrap();
        assert_eq!(f.edges()[e].first, m.edges()[e].second.unwrap());
        assert_eq!(f.edges()[e].normal, m.edges()[e].normal * -1.0);
        assert!(m.with_flipped_edge(0).is_err() || !m.edges()[0].is_boundary());
    }

    #[test]
    fn right_isoceles_metrics() {
        let g = ElementGeometry::new([
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ]);
        let s2 = 2f64.sqrt();
        assert!((g.diameter - s2).abs() < 1e-15);
        assert!((g.inscribed_diameter - (2.0 - s2)).abs() < 1e-15);
        assert!((g.shape_ratio() - (s2 + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn equilateral_ratio_is_two() {
        let g = ElementGeometry::new([
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3f64.sqrt() / 2.0),
        ]);
        assert!((g.diameter - 2.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((g.inscribed_diameter - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((g.shape_ratio() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn reference_map_round_trip() {
        let g = ElementGeometry::new([
            Point2::new(0.3, -0.2),
            Point2::new(1.1, 0.4),
            Point2::new(-0.1, 0.9),
        ]);
        let xi = [0.2, 0.35];
        let back = g.to_reference(g.map(xi));
        assert!((back[0] - xi[0]).abs() < 1e-14 && (back[1] - xi[1]).abs() < 1e-14);
    }

    #[test]
    fn rejects_clockwise_and_degenerate() {
        let v = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(2.0, 0.0),
        ];
        assert!(matches!(
            Mesh::new(v.clone(), vec![Triangle::new(0, 2, 1)]),
            Err(Error::DegenerateTriangle(0))
        ));
        assert!(matches!(
            Mesh::new(v.clone(), vec![Triangle::new(0, 1, 3)]),
            Err(Error::DegenerateTriangle(0))
        ));
        assert!(Mesh::new(v.clone(), vec![Triangle::new(0, 0, 1)]).is_err());
        assert!(Mesh::new(v, vec![Triangle::new(0, 1, 7)]).is_err());
    }

    #[test]
    fn rejects_vertex_pair_in_three_triangles() {
        let v = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 1.0),
            Point2::new(0.5, -1.0),
            Point2::new(0.5, 2.0),
        ];
        let t = vec![
            Triangle::new(0, 1, 2),
            Triangle::new(1, 0, 3),
            Triangle::new(0, 1, 4),
        ];
        assert!(matches!(
            extract_edges(&t, &v),
            Err(Error::Nonconforming(0, 1, 3))
        ));
    }
}
