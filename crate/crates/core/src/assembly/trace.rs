//! One-sided traces on edges and the jump / mean operators built from them.
//!
//! With `n` the stored normal of an edge (outward from its first element):
//!
//! - interior: `⟦v⟧ = (v₁ - v₂) n`, `{v} = (v₁ + v₂)/2`,
//!   `⟦∇v⟧ = (∇v₁ - ∇v₂)·n`, `{∇v} = (∇v₁ + ∇v₂)/2`;
//! - boundary: `⟦v⟧ = v n`, `{v} = v`, `⟦∇v⟧ = ∇v·n`, `{∇v} = ∇v`.

use crate::dgspace::{BrokenFunction, DgSpace, QuadRuleEdge};
use crate::mesh::{reference_edge_point, EdgeSide, Point2};

/// Traces of a broken function on one edge, at edge quadrature points.
#[derive(Clone, Debug)]
pub struct EdgeTrace {
    pub edge: usize,
    pub normal: Point2,
    pub points: Vec<Point2>,
    /// Quadrature weights scaled by the edge length.
    pub weights: Vec<f64>,
    /// `values[0]` from the first element; `values[1]` empty on boundary edges.
    pub values: [Vec<f64>; 2],
    pub grads: [Vec<[f64; 2]>; 2],
}

impl EdgeTrace {
    pub fn is_boundary(&self) -> bool {
        self.values[1].is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpMean {
    pub jump: [f64; 2],
    pub mean: f64,
    pub grad_jump: f64,
    pub grad_mean: [f64; 2],
}

/// Reference point on `side`'s element for edge parameter `t`.
pub fn side_reference_point(side: &EdgeSide, t: f64) -> [f64; 2] {
    reference_edge_point(side.local_edge, side.local_param(t))
}

pub fn edge_traces(f: &impl BrokenFunction, space: &DgSpace, edge: usize) -> EdgeTrace {
    edge_traces_with(f, &space.quad_edge, edge)
}

pub fn edge_traces_with(f: &impl BrokenFunction, rule: &QuadRuleEdge, edge: usize) -> EdgeTrace {
    let mesh = f.mesh();
    let e = &mesh.edges()[edge];
    let a = mesh.vertices()[e.endpoints[0]];
    let b = mesh.vertices()[e.endpoints[1]];
    let mut trace = EdgeTrace {
        edge,
        normal: e.normal,
        points: rule.points.iter().map(|&t| a + (b - a) * t).collect(),
        weights: rule.weights.iter().map(|&w| w * e.length).collect(),
        values: [Vec::new(), Vec::new()],
        grads: [Vec::new(), Vec::new()],
    };
    for (s, side) in e.sides().enumerate() {
        for &t in &rule.points {
            let xi = side_reference_point(side, t);
            trace.values[s].push(f.value(side.element, xi));
            trace.grads[s].push(f.gradient(side.element, xi));
        }
    }
    trace
}

/// Jump and mean quantities at each trace point, relative to `normal`.
pub fn jump_mean(trace: &EdgeTrace, normal: Point2) -> Vec<JumpMean> {
    let n = [normal.x, normal.y];
    (0..trace.points.len())
        .map(|q| {
            let v1 = trace.values[0][q];
            let g1 = trace.grads[0][q];
            if trace.is_boundary() {
                JumpMean {
                    jump: [v1 * n[0], v1 * n[1]],
                    mean: v1,
                    grad_jump: g1[0] * n[0] + g1[1] * n[1],
                    grad_mean: g1,
                }
            } else {
                let v2 = trace.values[1][q];
                let g2 = trace.grads[1][q];
                let d = v1 - v2;
                JumpMean {
                    jump: [d * n[0], d * n[1]],
                    mean: 0.5 * (v1 + v2),
                    grad_jump: (g1[0] - g2[0]) * n[0] + (g1[1] - g2[1]) * n[1],
                    grad_mean: [0.5 * (g1[0] + g2[0]), 0.5 * (g1[1] + g2[1])],
                }
            }
        })
        .collect()
}
