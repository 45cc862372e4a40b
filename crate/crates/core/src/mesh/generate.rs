use super::{Mesh, Point2, Triangle};
use crate::{Error, Result};

/// How each grid cell is split into two triangles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MeshPattern {
    /// Every cell along its `(i, j) → (i+1, j+1)` diagonal.
    #[default]
    Diagonal,
    /// Checkerboard of the two diagonals: cell `(i, j)`, counted from the
    /// lower-left corner of the bounding box, uses the `(i, j) → (i+1, j+1)`
    /// diagonal when `i + j` is odd and the other one otherwise. For even
    /// `n` no corner of the square or the L-shape lies on a diagonal.
    Alternating,
}

impl MeshPattern {
    pub fn name(self) -> &'static str {
        match self {
            MeshPattern::Diagonal => "diagonal",
            MeshPattern::Alternating => "alternating",
        }
    }
}

impl std::str::FromStr for MeshPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diagonal" => Ok(MeshPattern::Diagonal),
            "alternating" => Ok(MeshPattern::Alternating),
            _ => Err(Error::InvalidInput(format!(
                "unknown mesh pattern `{s}` (diagonal|alternating)"
            ))),
        }
    }
}

/// Uniform mesh of `(0,1)²` with `n × n` cells, each split along the
/// `(i, j) → (i+1, j+1)` diagonal.
pub fn build_square_mesh(n: usize) -> Result<Mesh> {
    build_square_mesh_with(n, MeshPattern::Diagonal)
}

pub fn build_square_mesh_with(n: usize, pattern: MeshPattern) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::InvalidInput("square mesh needs n >= 1".into()));
    }
    grid_mesh(n, 0.0, n, pattern, |_, _| true)
}

/// Uniform mesh of the L-shape `(-1,1)² \ [0,1]×[-1,0]`. Each of the three
/// unit blocks is meshed like [`build_square_mesh`] at resolution `n`, so the
/// re-entrant corner at the origin is always a vertex.
pub fn build_lshape_mesh(n: usize) -> Result<Mesh> {
    build_lshape_mesh_with(n, MeshPattern::Diagonal)
}

pub fn build_lshape_mesh_with(n: usize, pattern: MeshPattern) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::InvalidInput("L-shape mesh needs n >= 1".into()));
    }
    // Cell (i, j) of the 2n × 2n grid on (-1,1)² is dropped when it lies in
    // the removed quadrant x > 0, y < 0.
    grid_mesh(2 * n, -1.0, n, pattern, move |i, j| !(i >= n && j < n))
}

fn grid_mesh(
    cells: usize,
    origin: f64,
    per_unit: usize,
    pattern: MeshPattern,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<Mesh> {
    let side = cells + 1;
    let mut index = vec![usize::MAX; side * side];
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut id = |i: usize, j: usize, vertices: &mut Vec<Point2>| {
        let slot = &mut index[j * side + i];
        if *slot == usize::MAX {
            *slot = vertices.len();
            vertices.push(Point2::new(
                origin + i as f64 / per_unit as f64,
                origin + j as f64 / per_unit as f64,
            ));
        }
        *slot
    };
    // Row-major numbering over vertices touching a kept cell.
    for j in 0..side {
        for i in 0..side {
            let touches_kept_cell = [(0isize, 0isize), (-1, 0), (0, -1), (-1, -1)]
                .iter()
                .any(|&(di, dj)| {
                    let (ci, cj) = (i as isize + di, j as isize + dj);
                    ci >= 0
                        && cj >= 0
                        && (ci as usize) < cells
                        && (cj as usize) < cells
                        && keep(ci as usize, cj as usize)
                });
            if touches_kept_cell {
                id(i, j, &mut vertices);
            }
        }
    }
    for j in 0..cells {
        for i in 0..cells {
            if !keep(i, j) {
                continue;
            }
            let v00 = id(i, j, &mut vertices);
            let v10 = id(i + 1, j, &mut vertices);
            let v11 = id(i + 1, j + 1, &mut vertices);
            let v01 = id(i, j + 1, &mut vertices);
            if pattern == MeshPattern::Diagonal || (i + j) % 2 == 1 {
                triangles.push(Triangle::new(v00, v10, v11));
                triangles.push(Triangle::new(v00, v11, v01));
            } else {
                triangles.push(Triangle::new(v00, v10, v01));
                triangles.push(Triangle::new(v10, v11, v01));
            }
        }
    }
    Mesh::new(vertices, triangles)
}

/// Splits every triangle into four congruent children through its edge
/// midpoints. Midpoint vertices are appended after the parent vertices in
/// edge order; children of triangle `k` occupy indices `4k..4k+4`.
pub fn refine_uniform(mesh: &Mesh) -> Result<Mesh> {
    let nv = mesh.vertices().len();
    let mut vertices = mesh.vertices().to_vec();
    vertices.extend(mesh.edges().iter().map(|e| {
        (mesh.vertices()[e.endpoints[0]] + mesh.vertices()[e.endpoints[1]]) * 0.5
    }));
    let mut triangles = Vec::with_capacity(4 * mesh.num_elements());
    for (k, t) in mesh.triangles().iter().enumerate() {
        let [v0, v1, v2] = t.v;
        let [m0, m1, m2] = mesh.element_edges(k).map(|e| nv + e);
        triangles.push(Triangle::new(v0, m2, m1));
        triangles.push(Triangle::new(m2, v1, m0));
        triangles.push(Triangle::new(m1, m0, v2));
        triangles.push(Triangle::new(m0, m1, m2));
    }
    Mesh::new(vertices, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_points(m: &Mesh) -> Vec<(i64, i64)> {
        // Exact dyadic coordinates on these meshes; scale to integers.
        let mut p: Vec<_> = m
            .vertices()
            .iter()
            .map(|p| ((p.x * 1024.0).round() as i64, (p.y * 1024.0).round() as i64))
            .collect();
        p.sort_unstable();
        p
    }

    #[test]
    fn square_counts() {
        let m = build_square_mesh(1).unwrap();
        assert_eq!((m.vertices().len(), m.num_elements(), m.edges().len()), (4, 2, 5));
        let m = build_square_mesh(2).unwrap();
        assert_eq!((m.vertices().len(), m.num_elements(), m.edges().len()), (9, 8, 16));
        assert_eq!(m.edges().iter().filter(|e| !e.is_boundary()).count(), 8);
        assert!(build_square_mesh(0).is_err());
    }

    #[test]
    fn lshape_counts() {
        let m = build_lshape_mesh(1).unwrap();
        assert_eq!((m.vertices().len(), m.num_elements()), (8, 6));
        let m = build_lshape_mesh(2).unwrap();
        assert_eq!(m.num_elements(), 24);
        assert_eq!(m.edges().iter().filter(|e| e.is_boundary()).count(), 16);
        assert!(build_lshape_mesh(0).is_err());
        for n in 1..5 {
            let m = build_lshape_mesh(n).unwrap();
            assert!(m.vertices().iter().any(|p| p.x == 0.0 && p.y == 0.0));
        }
    }

    #[test]
    fn lshape_boundary_on_six_segments() {
        let m = build_lshape_mesh(2).unwrap();
        for e in m.edges().iter().filter(|e| e.is_boundary()) {
            let a = m.vertices()[e.endpoints[0]];
            let b = m.vertices()[e.endpoints[1]];
            let on = |p: Point2| {
                (p.y == -1.0 && p.x <= 0.0)
                    || (p.x == 0.0 && p.y <= 0.0)
                    || (p.y == 0.0 && p.x >= 0.0)
                    || (p.x == 1.0 && p.y >= 0.0)
                    || (p.y == 1.0)
                    || (p.x == -1.0)
            };
            let same_segment = (a.x == b.x && (a.x.abs() == 1.0 || a.x == 0.0))
                || (a.y == b.y && (a.y.abs() == 1.0 || a.y == 0.0));
            assert!(on(a) && on(b) && same_segment, "{a:?} {b:?}");
        }
    }

    #[test]
    fn refinement_of_square_matches_finer_grid() {
        let coarse = build_square_mesh(1).unwrap();
        let r = refine_uniform(&coarse).unwrap();
        assert_eq!(r.num_elements(), 8);
        assert!((r.h() - 2f64.sqrt() / 2.0).abs() < 1e-15);

        let r = refine_uniform(&build_square_mesh(2).unwrap()).unwrap();
        let fine = build_square_mesh(4).unwrap();
        assert_eq!(sorted_points(&r), sorted_points(&fine));
        assert_eq!(r.edges().len(), fine.edges().len());
    }

    #[test]
    fn square_h_and_shape() {
        let m = build_square_mesh(8).unwrap();
        let metrics = m.metrics();
        assert!((metrics.h - 2f64.sqrt() / 8.0).abs() < 1e-15);
        assert!((metrics.max_shape_ratio - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!((metrics.quasi_uniformity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alternating_pattern_keeps_corners_off_diagonals() {
        let incident = |m: &Mesh, p: Point2| {
            m.triangles()
                .iter()
                .filter(|t| t.v.iter().any(|&v| m.vertices()[v] == p))
                .count()
        };
        let sq = build_square_mesh_with(6, MeshPattern::Alternating).unwrap();
        assert_eq!(sq.num_elements(), 72);
        assert!((sq.h() - 2f64.sqrt() / 6.0).abs() < 1e-15);
        for (x, y) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
            assert_eq!(incident(&sq, Point2::new(x, y)), 1, "({x}, {y})");
        }
        let l = build_lshape_mesh_with(4, MeshPattern::Alternating).unwrap();
        for (x, y) in [(-1.0, -1.0), (0.0, -1.0), (1.0, 0.0), (1.0, 1.0), (-1.0, 1.0)] {
            assert_eq!(incident(&l, Point2::new(x, y)), 1, "({x}, {y})");
        }
        assert_eq!(incident(&l, Point2::new(0.0, 0.0)), 3);
        // The default pattern puts (0,0) and (1,1) on diagonals.
        let d = build_square_mesh(6).unwrap();
        assert_eq!(incident(&d, Point2::new(0.0, 0.0)), 2);
        assert_eq!("alternating".parse::<MeshPattern>().unwrap(), MeshPattern::Alternating);
    }
}
