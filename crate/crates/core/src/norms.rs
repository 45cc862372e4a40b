//! Error measures and broken norms.
//!
//! Integrals use the space's load rule (degree `2r + 4`) on elements and its
//! edge rule (degree `2r + 2`) on edges. Maxima are taken over a sampling
//! set: every node of the barycentric lattice of resolution
//! [`LINF_RESOLUTION`] in each triangle, plus all volume and edge quadrature
//! points. A boundary sample is the same reference point seen from the
//! element owning the boundary edge, so boundary extrema are a subset of the
//! global ones.

use std::fmt;
use std::sync::Arc;

use crate::assembly::{edge_traces_with, jump_mean, side_reference_point, EdgeTrace};
use crate::dgspace::{BrokenFunction, DgSpace, DiscreteFunction, ErrorFunction, ScalarField};
use crate::mesh::{reference_edge_point, Edge, Mesh, Point2};
use crate::{Error, Result};

pub const LINF_RESOLUTION: usize = 20;

/// Exponent `p ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    fn validate(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if !(p >= 1.0) || !p.is_finite() => Err(Error::InvalidInput(
                format!("norm exponent must lie in [1, ∞], got {p}"),
            )),
            e => Ok(e),
        }
    }
}

/// Subdomain for restricted norms. Rectangles are clipped exactly; other
/// regions include whole elements whose barycenter lies inside, and whole
/// edges whose midpoint does.
#[derive(Clone)]
pub enum Region {
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
    Predicate(Arc<dyn Fn(Point2) -> bool + Send + Sync>),
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Rect { x0, y0, x1, y1 } => {
                write!(f, "Rect[{x0}, {x1}] x [{y0}, {y1}]")
            }
            Region::Predicate(_) => f.write_str("Predicate"),
        }
    }
}

impl Region {
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) || ![x0, y0, x1, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "rectangle needs x0 < x1 and y0 < y1, got {x0},{y0},{x1},{y1}"
            )));
        }
        Ok(Region::Rect { x0, y0, x1, y1 })
    }

    /// Closed membership test.
    pub fn contains(&self, p: Point2) -> bool {
        match self {
            Region::Rect { x0, y0, x1, y1 } => p.x >= *x0 && p.x <= *x1 && p.y >= *y0 && p.y <= *y1,
            Region::Predicate(f) => f(p),
        }
    }

    /// Distance from the closed region to a point (rectangles only).
    pub fn distance_to(&self, p: Point2) -> Option<f64> {
        match self {
            Region::Rect { x0, y0, x1, y1 } => {
                let dx = (x0 - p.x).max(0.0).max(p.x - x1);
                let dy = (y0 - p.y).max(0.0).max(p.y - y1);
                Some(dx.hypot(dy))
            }
            Region::Predicate(_) => None,
        }
    }
}

fn in_region(region: Option<&Region>, p: Point2) -> bool {
    region.is_none_or(|r| r.contains(p))
}

/// Reference points at which maxima are sampled on each element.
#[derive(Clone, Debug)]
pub struct SampleSet {
    /// All sample points of an element.
    pub element: Vec<[f64; 2]>,
    /// Sample points lying on local edge `k`, generated identically to the
    /// corresponding entries of `element`.
    pub on_edge: [Vec<[f64; 2]>; 3],
    /// Edge parameters used for edge maxima.
    pub edge_params: Vec<f64>,
}

impl SampleSet {
    pub fn new(space: &DgSpace, resolution: usize) -> Self {
        let nres = resolution.max(1);
        let nf = nres as f64;
        let mut element = Vec::new();
        let mut on_edge: [Vec<[f64; 2]>; 3] = Default::default();
        for j in 0..=nres {
            for i in 0..=(nres - j) {
                let xi = [i as f64 / nf, j as f64 / nf];
                element.push(xi);
                if i + j == nres {
                    on_edge[0].push(xi);
                }
                if i == 0 {
                    on_edge[1].push(xi);
                }
                if j == 0 {
                    on_edge[2].push(xi);
                }
            }
        }
        element.extend_from_slice(&space.quad_load.points);
        for (k, pts) in on_edge.iter_mut().enumerate() {
            for &t in &space.quad_edge.points {
                let xi = reference_edge_point(k, t);
                pts.push(xi);
                element.push(xi);
            }
        }
        let mut edge_params: Vec<f64> = (0..=nres).map(|i| i as f64 / nf).collect();
        edge_params.extend_from_slice(&space.quad_edge.points);
        Self {
            element,
            on_edge,
            edge_params,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extrema {
    pub min: f64,
    pub max: f64,
}

impl Extrema {
    fn empty() -> Self {
        Self {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, v: f64) {
        self.min = self.min.min(v);
        self.max = self.max.max(v);
    }
}

/// Min and max over all element sample points.
pub fn global_extrema(space: &DgSpace, f: &impl BrokenFunction) -> Extrema {
    let samples = SampleSet::new(space, LINF_RESOLUTION);
    let mut ext = Extrema::empty();
    for k in 0..f.mesh().num_elements() {
        for &xi in &samples.element {
            ext.push(f.value(k, xi));
        }
    }
    ext
}

/// Min and max over boundary-edge sample points, from the owning element.
pub fn boundary_extrema(space: &DgSpace, f: &impl BrokenFunction) -> Extrema {
    let samples = SampleSet::new(space, LINF_RESOLUTION);
    let mut ext = Extrema::empty();
    for e in f.mesh().edges().iter().filter(|e| e.is_boundary()) {
        for &xi in &samples.on_edge[e.first.local_edge] {
            ext.push(f.value(e.first.element, xi));
        }
    }
    ext
}

/// `max |f|` over the sampling set, restricted to `region` when given.
pub fn error_linf(space: &DgSpace, f: &impl BrokenFunction, region: Option<&Region>) -> Result<f64> {
    error_linf_with_resolution(space, f, region, LINF_RESOLUTION)
}

pub fn error_linf_with_resolution(
    space: &DgSpace,
    f: &impl BrokenFunction,
    region: Option<&Region>,
    resolution: usize,
) -> Result<f64> {
    let samples = SampleSet::new(space, resolution);
    let mesh = f.mesh();
    let mut max: Option<f64> = None;
    for k in 0..mesh.num_elements() {
        let geo = mesh.geometry(k);
        for &xi in &samples.element {
            if in_region(region, geo.map(xi)) {
                let v = f.value(k, xi).abs();
                max = Some(max.map_or(v, |m| m.max(v)));
            }
        }
    }
    max.ok_or(Error::EmptySubdomain)
}

/// `‖f‖_{L∞(∂Ω)}` over boundary samples.
pub fn error_linf_boundary(space: &DgSpace, f: &impl BrokenFunction) -> f64 {
    let ext = boundary_extrema(space, f);
    ext.max.abs().max(ext.min.abs())
}

pub fn error_l2(space: &DgSpace, f: &impl BrokenFunction) -> f64 {
    let mesh = f.mesh();
    let mut s = 0.0;
    for k in 0..mesh.num_elements() {
        let det = mesh.geometry(k).det;
        for (xi, w) in space.quad_load.iter() {
            let v = f.value(k, xi);
            s += w * det * v * v;
        }
    }
    s.sqrt()
}

/// Broken `H¹` norm `(Σ_K ‖f‖²_{L²(K)} + ‖∇f‖²_{L²(K)})^{1/2}`.
pub fn error_broken_h1(space: &DgSpace, f: &impl BrokenFunction) -> f64 {
    let mesh = f.mesh();
    let mut s = 0.0;
    for k in 0..mesh.num_elements() {
        let det = mesh.geometry(k).det;
        for (xi, w) in space.quad_load.iter() {
            let v = f.value(k, xi);
            let g = f.gradient(k, xi);
            s += w * det * (v * v + g[0] * g[0] + g[1] * g[1]);
        }
    }
    s.sqrt()
}

/// Quadrature points `(element, reference point, weight)` covering `K ∩ O`.
fn element_quadrature(
    space: &DgSpace,
    mesh: &Mesh,
    k: usize,
    region: Option<&Region>,
) -> Vec<([f64; 2], f64)> {
    let geo = mesh.geometry(k);
    let full = || -> Vec<_> { space.quad_load.iter().map(|(xi, w)| (xi, w * geo.det)).collect() };
    match region {
        None => full(),
        Some(Region::Predicate(f)) => {
            let v = mesh.element_vertices(k);
            if f((v[0] + v[1] + v[2]) * (1.0 / 3.0)) {
                full()
            } else {
                Vec::new()
            }
        }
        Some(r @ Region::Rect { .. }) => {
            let verts = mesh.element_vertices(k);
            if verts.iter().all(|&p| r.contains(p)) {
                return full();
            }
            let poly = clip_to_rect(&verts, r);
            let mut out = Vec::new();
            for i in 1..poly.len().saturating_sub(1) {
                let (p0, p1, p2) = (poly[0], poly[i], poly[i + 1]);
                let det = (p1 - p0).cross(p2 - p0);
                if det <= 0.0 {
                    continue;
                }
                for ([a, b], w) in space.quad_load.iter() {
                    let x = p0 + (p1 - p0) * a + (p2 - p0) * b;
                    out.push((geo.to_reference(x), w * det));
                }
            }
            out
        }
    }
}

/// Sutherland-Hodgman clipping of a counterclockwise triangle by a rectangle.
fn clip_to_rect(tri: &[Point2; 3], r: &Region) -> Vec<Point2> {
    let Region::Rect { x0, y0, x1, y1 } = *r else {
        unreachable!()
    };
    // Each half-plane as (inside(p), signed distance(p)).
    let planes: [Box<dyn Fn(Point2) -> f64>; 4] = [
        Box::new(move |p| p.x - x0),
        Box::new(move |p| x1 - p.x),
        Box::new(move |p| p.y - y0),
        Box::new(move |p| y1 - p.y),
    ];
    let mut poly: Vec<Point2> = tri.to_vec();
    for d in &planes {
        if poly.is_empty() {
            break;
        }
        let mut out = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let a = poly[i];
            let b = poly[(i + 1) % poly.len()];
            let (da, db) = (d(a), d(b));
            if da >= 0.0 {
                out.push(a);
            }
            if (da >= 0.0) != (db >= 0.0) {
                let t = da / (da - db);
                out.push(a + (b - a) * t);
            }
        }
        poly = out;
    }
    poly
}

/// Parameter sub-interval of edge `e` inside the closed region.
fn edge_interval(mesh: &Mesh, e: &Edge, region: Option<&Region>) -> Option<(f64, f64)> {
    let a = mesh.vertices()[e.endpoints[0]];
    let b = mesh.vertices()[e.endpoints[1]];
    match region {
        None => Some((0.0, 1.0)),
        Some(Region::Predicate(f)) => f((a + b) * 0.5).then_some((0.0, 1.0)),
        Some(Region::Rect { x0, y0, x1, y1 }) => {
            // Liang-Barsky.
            let d = b - a;
            let (mut t0, mut t1) = (0.0f64, 1.0f64);
            for (p, q) in [
                (-d.x, a.x - x0),
                (d.x, x1 - a.x),
                (-d.y, a.y - y0),
                (d.y, y1 - a.y),
            ] {
                if p == 0.0 {
                    if q < 0.0 {
                        return None;
                    }
                } else {
                    let t = q / p;
                    if p < 0.0 {
                        t0 = t0.max(t);
                    } else {
                        t1 = t1.min(t);
                    }
                }
            }
            (t1 > t0).then_some((t0, t1))
        }
    }
}

/// Traces on the part of edge `idx` inside the region, with weights scaled
/// to the clipped length.
fn clipped_traces(
    space: &DgSpace,
    f: &impl BrokenFunction,
    idx: usize,
    region: Option<&Region>,
) -> Option<EdgeTrace> {
    let mesh = f.mesh();
    let e = &mesh.edges()[idx];
    let (t0, t1) = edge_interval(mesh, e, region)?;
    if (t0, t1) == (0.0, 1.0) {
        return Some(edge_traces_with(f, &space.quad_edge, idx));
    }
    let mut rule = space.quad_edge.clone();
    for (t, w) in rule.points.iter_mut().zip(rule.weights.iter_mut()) {
        *t = t0 + (t1 - t0) * *t;
        *w *= t1 - t0;
    }
    Some(edge_traces_with(f, &rule, idx))
}

/// The broken `Vᵖ` norm
///
/// ```text
/// ‖v‖ᵖ = Σ_K ‖v‖ᵖ_{W^{1,p}(K∩O)} + Σ_e h_e^{1-p} ‖⟦v⟧‖ᵖ_{Lᵖ(e∩Ō)} + Σ_e h_e ‖{∇v}‖ᵖ_{Lᵖ(e∩Ō)}
/// ```
///
/// over all edges, boundary ones included, with `‖v‖ᵖ_{W^{1,p}} = ‖v‖ᵖ_{Lᵖ} + ‖|∇v|‖ᵖ_{Lᵖ}`.
/// For `p = ∞` the sums become maxima,
/// `max_K ‖v‖_{W^{1,∞}(K∩O)} + max_e h_e⁻¹ ‖⟦v⟧‖_{L∞(e∩Ō)} + max_e ‖{∇v}‖_{L∞(e∩Ō)}`,
/// with `‖v‖_{W^{1,∞}} = ‖v‖_{L∞} + ‖|∇v|‖_{L∞}` evaluated on the sampling set.
pub fn norm_vp(
    space: &DgSpace,
    f: &impl BrokenFunction,
    p: Exponent,
    region: Option<&Region>,
) -> Result<f64> {
    match p.validate()? {
        Exponent::Finite(p) => Ok(norm_vp_finite(space, f, p, region)),
        Exponent::Infinity => Ok(norm_v_inf(space, f, region)),
    }
}

fn norm_vp_finite(space: &DgSpace, f: &impl BrokenFunction, p: f64, region: Option<&Region>) -> f64 {
    let mesh = f.mesh();
    let pow = |x: f64| if p == 2.0 { x * x } else { x.powf(p) };
    let mut total = 0.0;
    for k in 0..mesh.num_elements() {
        for (xi, w) in element_quadrature(space, mesh, k, region) {
            let v = f.value(k, xi);
            let g = f.gradient(k, xi);
            total += w * (pow(v.abs()) + pow(g[0].hypot(g[1])));
        }
    }
    for (idx, e) in mesh.edges().iter().enumerate() {
        let Some(trace) = clipped_traces(space, f, idx, region) else {
            continue;
        };
        let (mut jumps, mut means) = (0.0, 0.0);
        for (jm, w) in jump_mean(&trace, trace.normal).iter().zip(&trace.weights) {
            jumps += w * pow(jm.jump[0].hypot(jm.jump[1]));
            means += w * pow(jm.grad_mean[0].hypot(jm.grad_mean[1]));
        }
        total += e.h_e.powf(1.0 - p) * jumps + e.h_e * means;
    }
    total.powf(1.0 / p)
}

fn norm_v_inf(space: &DgSpace, f: &impl BrokenFunction, region: Option<&Region>) -> f64 {
    let mesh = f.mesh();
    let samples = SampleSet::new(space, LINF_RESOLUTION);
    let mut vol: f64 = 0.0;
    for k in 0..mesh.num_elements() {
        let geo = mesh.geometry(k);
        let (mut vmax, mut gmax) = (0.0f64, 0.0f64);
        for &xi in &samples.element {
            if in_region(region, geo.map(xi)) {
                vmax = vmax.max(f.value(k, xi).abs());
                let g = f.gradient(k, xi);
                gmax = gmax.max(g[0].hypot(g[1]));
            }
        }
        vol = vol.max(vmax + gmax);
    }
    let (mut jmax, mut mmax) = (0.0f64, 0.0f64);
    for e in mesh.edges() {
        let a = mesh.vertices()[e.endpoints[0]];
        let b = mesh.vertices()[e.endpoints[1]];
        for &t in &samples.edge_params {
            if !in_region(region, a + (b - a) * t) {
                continue;
            }
            let s1 = &e.first;
            let xi1 = side_reference_point(s1, t);
            let (v1, g1) = (f.value(s1.element, xi1), f.gradient(s1.element, xi1));
            let (jump, mean) = match &e.second {
                None => (v1.abs(), g1[0].hypot(g1[1])),
                Some(s2) => {
                    let xi2 = side_reference_point(s2, t);
                    let (v2, g2) = (f.value(s2.element, xi2), f.gradient(s2.element, xi2));
                    ((v1 - v2).abs(), (0.5 * (g1[0] + g2[0])).hypot(0.5 * (g1[1] + g2[1])))
                }
            };
            jmax = jmax.max(jump / e.h_e);
            mmax = mmax.max(mean);
        }
    }
    vol + jmax + mmax
}

/// All error measures of `u - u_h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorReport {
    pub l2: f64,
    pub broken_h1: f64,
    pub v2: f64,
    pub linf: f64,
    pub linf_boundary: f64,
    pub linf_subdomain: Option<f64>,
    pub h: f64,
    pub dofs: usize,
}

pub fn error_report(
    uh: &DiscreteFunction<'_>,
    exact: &ScalarField,
    subdomain: Option<&Region>,
) -> Result<ErrorReport> {
    let space = uh.space;
    let err = ErrorFunction::new(uh.mesh, space, uh.coeffs, exact);
    Ok(ErrorReport {
        l2: error_l2(space, &err),
        broken_h1: error_broken_h1(space, &err),
        v2: norm_vp(space, &err, Exponent::Finite(2.0), None)?,
        linf: error_linf(space, &err, None)?,
        linf_boundary: error_linf_boundary(space, &err),
        linf_subdomain: subdomain.map(|r| error_linf(space, &err, Some(r))).transpose()?,
        h: uh.mesh.h(),
        dofs: uh.coeffs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgspace::{interpolate, FieldOnMesh, Smoothness};
    use crate::mesh::{build_lshape_mesh, build_square_mesh, refine_uniform};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_coeffs(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    fn x_field() -> ScalarField {
        ScalarField::new(|p| p.x, |_| [1.0, 0.0], Smoothness::Polynomial(1))
    }

    #[test]
    fn v2_norm_of_one_on_two_triangle_square() {
        let mesh = build_square_mesh(1).unwrap();
        let space = DgSpace::new(1).unwrap();
        let ones = vec![1.0; space.total_dofs(&mesh)];
        let f = DiscreteFunction::new(&mesh, &space, &ones).unwrap();
        let v = norm_vp(&space, &f, Exponent::Finite(2.0), None).unwrap();
        // |Ω| + Σ_{boundary} |e| / h_e with h_e = √2, |e| = 1.
        let expected = 1.0 + 4.0 / 2f64.sqrt();
        assert!((v * v - expected).abs() < 1e-13, "{}", v * v);
    }

    #[test]
    fn v2_norm_of_x_on_square_n2() {
        let mesh = build_square_mesh(2).unwrap();
        let space = DgSpace::new(1).unwrap();
        let c = interpolate(&mesh, &space, &x_field());
        let f = DiscreteFunction::new(&mesh, &space, &c).unwrap();
        let v = norm_vp(&space, &f, Exponent::Finite(2.0), None).unwrap();
        // Volume: ∫ x² + 1 = 4/3. Boundary jumps |⟦v⟧| = |x|, h_e = √2/2, so
        // each boundary term is h_e⁻¹ ∫_e x². Bottom and top: 2 · ∫₀¹ x² = 2/3;
        // right: ∫ 1 over length 1 = 1; left: 0. Mean gradients {∇v} = (1, 0):
        // Σ_e h_e |e| over all 16 edges.
        let he = 2f64.sqrt() / 2.0;
        let boundary_jumps = (2.0 / 3.0 + 1.0) / he;
        let mut means = 0.0;
        for e in mesh.edges() {
            means += e.h_e * e.length;
        }
        let expected = 4.0 / 3.0 + boundary_jumps + means;
        assert!((v * v - expected).abs() < 1e-12, "{} vs {expected}", v * v);
    }

    #[test]
    fn homogeneity_and_triangle_inequality() {
        let mesh = build_lshape_mesh(2).unwrap();
        for r in 1..=2 {
            let space = DgSpace::new(r).unwrap();
            let n = space.total_dofs(&mesh);
            let u = random_coeffs(n, 1);
            let v = random_coeffs(n, 2);
            let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let su: Vec<f64> = u.iter().map(|a| -2.5 * a).collect();
            for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
                let nrm = |c: &[f64]| {
                    norm_vp(&space, &DiscreteFunction::new(&mesh, &space, c).unwrap(), p, None)
                        .unwrap()
                };
                let (nu, nv, nw, ns) = (nrm(&u), nrm(&v), nrm(&w), nrm(&su));
                assert!((ns - 2.5 * nu).abs() <= 1e-11 * ns, "{p:?}");
                assert!(nw <= (nu + nv) * (1.0 + 1e-11), "{p:?}");
            }
        }
    }

    #[test]
    fn rejects_exponent_below_one() {
        let mesh = build_square_mesh(1).unwrap();
        let space = DgSpace::new(1).unwrap();
        let c = vec![0.0; space.total_dofs(&mesh)];
        let f = DiscreteFunction::new(&mesh, &space, &c).unwrap();
        assert!(norm_vp(&space, &f, Exponent::Finite(0.5), None).is_err());
    }

    #[test]
    fn continuous_interpolants_have_no_interior_jumps() {
        let mesh = build_square_mesh(4).unwrap();
        let space = DgSpace::new(2).unwrap();
        let field = ScalarField::new(
            |p| (p.x * 3.0).sin() + p.y * p.y,
            |p| [3.0 * (p.x * 3.0).cos(), 2.0 * p.y],
            Smoothness::Smooth,
        );
        let c = interpolate(&mesh, &space, &field);
        let f = DiscreteFunction::new(&mesh, &space, &c).unwrap();
        for (i, e) in mesh.edges().iter().enumerate().filter(|(_, e)| !e.is_boundary()) {
            let t = edge_traces_with(&f, &space.quad_edge, i);
            let s: f64 = jump_mean(&t, e.normal)
                .iter()
                .zip(&t.weights)
                .map(|(jm, w)| w * (jm.jump[0].powi(2) + jm.jump[1].powi(2)))
                .sum();
            assert!(s / e.h_e <= 1e-11);
        }
    }

    #[test]
    fn linf_of_self_and_constants() {
        let mesh = build_square_mesh(3).unwrap();
        let space = DgSpace::new(2).unwrap();
        let c = interpolate(&mesh, &space, &x_field());
        // P² reproduces x.
        let x = x_field();
        let err = ErrorFunction::new(&mesh, &space, &c, &x);
        let xh = FieldOnMesh { mesh: &mesh, field: &x };
        assert!((error_l2(&space, &xh) - (1.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!(error_linf(&space, &err, None).unwrap() < 1e-13);
        assert!(error_l2(&space, &err) < 1e-12 && error_broken_h1(&space, &err) < 1e-12);

        let ones = vec![1.0; c.len()];
        let f = DiscreteFunction::new(&mesh, &space, &ones).unwrap();
        assert!((error_linf(&space, &f, None).unwrap() - 1.0).abs() < 1e-14);
        let g = global_extrema(&space, &f);
        let b = boundary_extrema(&space, &f);
        for v in [g.min, g.max, b.min, b.max] {
            assert!((v - 1.0).abs() < 1e-14);
        }

        let f = DiscreteFunction::new(&mesh, &space, &c).unwrap();
        let g = global_extrema(&space, &f);
        let b = boundary_extrema(&space, &f);
        assert!(g.min.abs() < 1e-14 && (g.max - 1.0).abs() < 1e-14);
        assert_eq!((g.min, g.max), (b.min, b.max));
    }

    #[test]
    fn subdomain_restrictions() {
        let mesh = build_square_mesh(4).unwrap();
        let space = DgSpace::new(1).unwrap();
        let c = interpolate(&mesh, &space, &x_field());
        let f = DiscreteFunction::new(&mesh, &space, &c).unwrap();
        let whole = Region::rect(-1.0, -1.0, 2.0, 2.0).unwrap();
        assert_eq!(
            error_linf(&space, &f, Some(&whole)).unwrap(),
            error_linf(&space, &f, None).unwrap()
        );
        let left = Region::rect(0.0, 0.0, 0.3, 1.0).unwrap();
        assert!((error_linf(&space, &f, Some(&left)).unwrap() - 0.3).abs() < 1e-14);
        let outside = Region::rect(5.0, 5.0, 6.0, 6.0).unwrap();
        assert!(matches!(error_linf(&space, &f, Some(&outside)), Err(Error::EmptySubdomain)));
        assert!(Region::rect(1.0, 0.0, 0.0, 1.0).is_err());

        // Exact clipping: the L² part of the V² norm of 1 over [0, 0.3] × [0, 1]
        // (cutting through elements) is the area 0.3, which we isolate as
        // ‖1‖² minus edge terms computed by hand: only boundary edges pieces
        // inside contribute jumps.
        let ones = vec![1.0; c.len()];
        let f1 = DiscreteFunction::new(&mesh, &space, &ones).unwrap();
        let v = norm_vp(&space, &f1, Exponent::Finite(2.0), Some(&left)).unwrap();
        // Boundary inside the closed strip: left side (length 1) plus bottom
        // and top pieces (length 0.3 each), h_e = √2/4.
        let he = 2f64.sqrt() / 4.0;
        let expected = 0.3 + (1.0 + 0.6) / he;
        assert!((v * v - expected).abs() < 1e-12, "{} vs {expected}", v * v);

        let pred = Region::Predicate(Arc::new(|_| true));
        let a = norm_vp(&space, &f, Exponent::Finite(2.0), Some(&pred)).unwrap();
        let b = norm_vp(&space, &f, Exponent::Finite(2.0), None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn v1_bounded_by_v2_with_stable_constant() {
        // ‖v‖_{V¹} ≤ C |Ω|^{1/2} ‖v‖_{V²}; record the worst ratio on two levels.
        let space = DgSpace::new(1).unwrap();
        let coarse = build_square_mesh(4).unwrap();
        let fine = refine_uniform(&coarse).unwrap();
        let ratio = |mesh: &Mesh| {
            (0..10)
                .map(|s| {
                    let c = random_coeffs(space.total_dofs(mesh), 100 + s);
                    let f = DiscreteFunction::new(mesh, &space, &c).unwrap();
                    norm_vp(&space, &f, Exponent::Finite(1.0), None).unwrap()
                        / norm_vp(&space, &f, Exponent::Finite(2.0), None).unwrap()
                })
                .fold(0.0, f64::max)
        };
        let (rc, rf) = (ratio(&coarse), ratio(&fine));
        assert!(rc > 0.0 && rf > 0.0);
        assert!(rf <= 2.0 * rc && rc <= 2.0 * rf, "{rc} {rf}");
    }

    #[test]
    fn denser_sampling_changes_little() {
        let mesh = build_square_mesh(8).unwrap();
        let space = DgSpace::new(1).unwrap();
        let u = ScalarField::new(
            |p| (3.0 * p.x).sin() * (2.0 * p.y).cos(),
            |p| [3.0 * (3.0 * p.x).cos() * (2.0 * p.y).cos(), -2.0 * (3.0 * p.x).sin() * (2.0 * p.y).sin()],
            Smoothness::Smooth,
        );
        let c = interpolate(&mesh, &space, &u);
        let err = ErrorFunction::new(&mesh, &space, &c, &u);
        let a = error_linf_with_resolution(&space, &err, None, 20).unwrap();
        let b = error_linf_with_resolution(&space, &err, None, 40).unwrap();
        assert!((a - b).abs() <= 0.01 * b);
    }
}
