//! SIPDG system assembly.
//!
//! The bilinear form is
//!
//! ```text
//! a(u, v) = Σ_K ∫_K ∇u·∇v
//!         - Σ_e ∫_e ({∇u}·⟦v⟧ + {∇v}·⟦u⟧)
//!         + Σ_e (σ / h_e) ∫_e ⟦u⟧·⟦v⟧
//! ```
//!
//! with sums over all edges, and the load is
//! `F(v) = ∫_Ω f v + Σ_{e ⊂ ∂Ω} ∫_e g (σ/h_e v - ∇v·n)`. Dirichlet data
//! enters only through `F`.

mod matrix;
mod trace;

use crate::dgspace::{interpolate, BrokenFunction, DgSpace, DiscreteFunction, ScalarField};
use crate::mesh::{reference_edge_point, Mesh};
use crate::{Error, Result};

pub use crate::dgspace::CoeffVector;
pub use matrix::SystemMatrix;
pub use trace::{edge_traces, edge_traces_with, jump_mean, side_reference_point, EdgeTrace, JumpMean};

/// Default penalty `σ = 10 r²`.
pub fn default_sigma(degree: usize) -> f64 {
    10.0 * (degree * degree) as f64
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidPenalty(sigma))
    }
}

/// Physical basis gradients of element `k` from reference gradients.
fn physical_grads(mesh: &Mesh, k: usize, ref_grads: &[[f64; 2]], out: &mut [[f64; 2]]) {
    let g = mesh.geometry(k);
    for (o, &rg) in out.iter_mut().zip(ref_grads) {
        *o = g.grad_to_physical(rg);
    }
}

pub fn assemble_matrix(mesh: &Mesh, space: &DgSpace, sigma: f64) -> Result<SystemMatrix> {
    check_sigma(sigma)?;
    let n = space.n_loc();
    let dofs = space.dofmap(mesh);
    let mut triplets = Vec::with_capacity(n * n * (mesh.num_elements() + 4 * mesh.edges().len()));

    // Volume terms.
    let tab = space.tab_stiffness();
    let mut grads = vec![[0.0; 2]; n];
    let mut local = vec![0.0; n * n];
    for k in 0..mesh.num_elements() {
        let det = mesh.geometry(k).det;
        local.fill(0.0);
        for (q, &w) in space.quad_stiffness.weights.iter().enumerate() {
            physical_grads(mesh, k, tab.ref_grads(q), &mut grads);
            let wq = w * det;
            for i in 0..n {
                for j in i..n {
                    local[i * n + j] +=
                        wq * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
                }
            }
        }
        push_symmetric(&mut triplets, &local, n, |i| dofs.global(k, i));
    }

    // Edge terms. For each edge the local DOF list is the first element's DOFs
    // followed by the second's; `jmp[a]` is the coefficient of basis function
    // `a` in the scalar jump `(v₁ - v₂)` and `avg[a]` that in `{∇v}·n`.
    let m_max = 2 * n;
    let mut jmp = vec![0.0; m_max];
    let mut avg = vec![0.0; m_max];
    let mut local = vec![0.0; m_max * m_max];
    let mut side_grads = vec![[0.0; 2]; n];
    for e in mesh.edges() {
        let nrm = e.normal;
        let interior = !e.is_boundary();
        let m = if interior { 2 * n } else { n };
        let mean_factor = if interior { 0.5 } else { 1.0 };
        let penalty = sigma / e.h_e;
        local[..m * m].fill(0.0);
        for (q, &w) in space.quad_edge.weights.iter().enumerate() {
            for (s, side) in e.sides().enumerate() {
                let tab = space.tab_edge(side.local_edge);
                let qs = space.edge_point_index(q, side.reversed);
                physical_grads(mesh, side.element, tab.ref_grads(qs), &mut side_grads);
                let sign = if s == 0 { 1.0 } else { -1.0 };
                for (i, &phi) in tab.values(qs).iter().enumerate() {
                    jmp[s * n + i] = sign * phi;
                    avg[s * n + i] =
                        mean_factor * (side_grads[i][0] * nrm.x + side_grads[i][1] * nrm.y);
                }
            }
            let wq = w * e.length;
            for a in 0..m {
                for b in a..m {
                    local[a * m + b] += wq
                        * (penalty * jmp[a] * jmp[b] - (avg[b] * jmp[a] + avg[a] * jmp[b]));
                }
            }
        }
        let sides: Vec<_> = e.sides().map(|s| s.element).collect();
        push_symmetric(&mut triplets, &local[..m * m], m, |a| {
            dofs.global(sides[a / n], a % n)
        });
    }

    SystemMatrix::from_triplets(dofs.total_dofs(), triplets)
}

/// Pushes the upper triangle of `local` (row-major, `m × m`) and its mirror.
fn push_symmetric(
    triplets: &mut Vec<(usize, usize, f64)>,
    local: &[f64],
    m: usize,
    global: impl Fn(usize) -> usize,
) {
    for a in 0..m {
        let ga = global(a);
        triplets.push((ga, ga, local[a * m + a]));
        for b in a + 1..m {
            let gb = global(b);
            let v = local[a * m + b];
            triplets.push((ga, gb, v));
            triplets.push((gb, ga, v));
        }
    }
}

/// Load vector `F(φ_i)` for every global basis function.
pub fn assemble_rhs(
    mesh: &Mesh,
    space: &DgSpace,
    f: &ScalarField,
    g: &ScalarField,
    sigma: f64,
) -> Result<CoeffVector> {
    check_sigma(sigma)?;
    let n = space.n_loc();
    let dofs = space.dofmap(mesh);
    let mut b = CoeffVector::zeros(dofs.total_dofs());

    let tab = space.tab_load();
    for k in 0..mesh.num_elements() {
        let geo = mesh.geometry(k);
        let out = &mut b[dofs.element_dofs(k)];
        for (q, (xi, w)) in space.quad_load.iter().enumerate() {
            let fw = f.value(geo.map(xi)) * w * geo.det;
            for (o, phi) in out.iter_mut().zip(tab.values(q)) {
                *o += fw * phi;
            }
        }
    }

    let mut grads = vec![[0.0; 2]; n];
    for e in mesh.edges().iter().filter(|e| e.is_boundary()) {
        let side = &e.first;
        let geo = mesh.geometry(side.element);
        let tab = space.tab_edge(side.local_edge);
        let penalty = sigma / e.h_e;
        let out = &mut b[dofs.element_dofs(side.element)];
        for (q, &w) in space.quad_edge.weights.iter().enumerate() {
            // Iterate in the element's local direction; the sum is the same.
            let xi = reference_edge_point(side.local_edge, space.quad_edge.points[q]);
            let gw = g.value(geo.map(xi)) * w * e.length;
            physical_grads(mesh, side.element, tab.ref_grads(q), &mut grads);
            for ((o, phi), gr) in out.iter_mut().zip(tab.values(q)).zip(&grads) {
                *o += gw * (penalty * phi - (gr[0] * e.normal.x + gr[1] * e.normal.y));
            }
        }
    }
    Ok(b)
}

/// `max_i |a(I u, φ_i) - F(φ_i)|` for the degree-`r` interpolant `I u`.
/// Vanishes (to rounding) when `u` is a global polynomial of degree `≤ r`
/// with `f = -Δu` and `g = u|∂Ω`.
pub fn residual_consistency_check(
    mesh: &Mesh,
    space: &DgSpace,
    u_exact: &ScalarField,
    f: &ScalarField,
    g: &ScalarField,
    sigma: f64,
) -> Result<f64> {
    let a = assemble_matrix(mesh, space, sigma)?;
    let b = assemble_rhs(mesh, space, f, g, sigma)?;
    let iu = interpolate(mesh, space, u_exact);
    Ok(a
        .matvec(&iu)
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// `|LHS - RHS|` of the broken integration-by-parts identity
///
/// ```text
/// Σ_K ∫_{∂K} (∇u·n_K) v = Σ_{e interior} ∫_e ({∇u}·⟦v⟧ + ⟦∇u⟧{v})
///                        + Σ_{e boundary} ∫_e (∇u·n) v
/// ```
///
/// The left side is evaluated element by element with element normals, the
/// right side through edge traces.
pub fn integration_by_parts_defect(
    mesh: &Mesh,
    space: &DgSpace,
    u: &[f64],
    v: &[f64],
) -> Result<f64> {
    let uf = DiscreteFunction::new(mesh, space, u)?;
    let vf = DiscreteFunction::new(mesh, space, v)?;
    let rule = &space.quad_edge;

    let mut lhs = 0.0;
    for k in 0..mesh.num_elements() {
        let verts = mesh.element_vertices(k);
        for le in 0..3 {
            let nk = mesh.local_outward_normal(k, le);
            let len = (verts[(le + 2) % 3] - verts[(le + 1) % 3]).norm();
            for (t, w) in rule.iter() {
                let xi = reference_edge_point(le, t);
                let gu = uf.gradient(k, xi);
                lhs += w * len * (gu[0] * nk.x + gu[1] * nk.y) * vf.value(k, xi);
            }
        }
    }

    let mut rhs = 0.0;
    for e in 0..mesh.edges().len() {
        let tu = edge_traces(&uf, space, e);
        let tv = edge_traces(&vf, space, e);
        let ju = jump_mean(&tu, tu.normal);
        let jv = jump_mean(&tv, tv.normal);
        for q in 0..tu.weights.len() {
            let (a, b) = (&ju[q], &jv[q]);
            let integrand = if tu.is_boundary() {
                b.mean * a.grad_jump
            } else {
                a.grad_mean[0] * b.jump[0] + a.grad_mean[1] * b.jump[1] + a.grad_jump * b.mean
            };
            rhs += tu.weights[q] * integrand;
        }
    }
    Ok((lhs - rhs).abs())
}
