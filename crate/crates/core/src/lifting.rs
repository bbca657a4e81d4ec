//! Maxwell–Cremona lifting of a stressed Schlegel diagram, and the metric
//! quantities of the resulting solid: face angles, vertex curvatures and
//! dihedral angles.
//!
//! Lifting walks the interior dual breadth-first. Crossing a directed edge
//! `u -> v` from the face on its left (`f`) to the face on its right (`g`)
//! sets `grad g = grad f + w_uv * rot90(p_v - p_u)`, with the offset chosen
//! so both planes agree along the edge. Positive stress then bends the
//! surface downward across every edge, so the lift is the graph of a concave
//! function over the base polygon.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::combinatorics::{FaceId, PolyhedralGraph, VertexId};
use crate::embedding::{verify_embedding, PlanarEmbedding, EPS_GEOM};
use crate::geometry::{corner_angle3, diameter3, newell_normal, rot90, Vec2, Vec3};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LiftError {
    #[error("{expected} coordinates required, got {got}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("coordinate of vertex {0} is not finite")]
    NonFinite(VertexId),
    #[error("base face {0} does not exist")]
    NoSuchFace(FaceId),
    #[error("embedding fails verification: {0}")]
    InvalidEmbedding(String),
    #[error("interior edge {0} has non-positive stress")]
    NonPositiveStress(usize),
    #[error("lifting does not close: residual {0:e}")]
    ClosureViolation(f64),
    #[error("interior vertex {vertex} lifted to z = {z:e}, expected > 0")]
    NonPositiveHeights { vertex: VertexId, z: f64 },
    #[error("base vertices are not coplanar: deviation {0:e}")]
    BaseNotPlanar(f64),
    #[error("vertex {vertex} is not on face {face}")]
    VertexNotOnFace { face: FaceId, vertex: VertexId },
}

/// `h(x, y) = gradient . (x, y) + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineHeight {
    pub gradient: Vec2,
    pub offset: f64,
}

impl AffineHeight {
    pub const ZERO: AffineHeight = AffineHeight { gradient: Vec2::new(0.0, 0.0), offset: 0.0 };

    pub fn eval(&self, p: Vec2) -> f64 {
        self.gradient.dot(&p) + self.offset
    }
}

/// A convex polyhedron realizing a [`PolyhedralGraph`].
#[derive(Debug, Clone)]
pub struct LiftedPolyhedron {
    graph: PolyhedralGraph,
    coords: Vec<Vec3>,
    base_face: Option<FaceId>,
    /// Per-face height functions, present when produced by lifting.
    heights: Option<Vec<AffineHeight>>,
}

impl LiftedPolyhedron {
    pub fn from_coords(graph: PolyhedralGraph, coords: Vec<Vec3>, base_face: Option<FaceId>) -> Result<Self, LiftError> {
        if coords.len() != graph.vertex_count() {
            return Err(LiftError::CoordinateCount { expected: graph.vertex_count(), got: coords.len() });
        }
        if let Some(v) = coords.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(LiftError::NonFinite(v));
        }
        if let Some(b) = base_face.filter(|&b| b >= graph.face_count()) {
            return Err(LiftError::NoSuchFace(b));
        }
        Ok(LiftedPolyhedron { graph, coords, base_face, heights: None })
    }

    pub fn graph(&self) -> &PolyhedralGraph {
        &self.graph
    }

    pub fn coords(&self) -> &[Vec3] {
        &self.coords
    }

    pub fn base_face(&self) -> Option<FaceId> {
        self.base_face
    }

    pub fn heights(&self) -> Option<&[AffineHeight]> {
        self.heights.as_deref()
    }

    pub fn with_base_face(mut self, base: Option<FaceId>) -> Self {
        self.base_face = base;
        self
    }

    /// Apply a linear map to every coordinate. Height functions, when
    /// present, are transported if the map is block diagonal (horizontal
    /// part and vertical factor); otherwise they are dropped.
    pub(crate) fn map_linear(&self, horizontal: nalgebra::Matrix2<f64>, vertical: f64) -> LiftedPolyhedron {
        let coords = self
            .coords
            .iter()
            .map(|p| {
                let xy = horizontal * Vec2::new(p.x, p.y);
                Vec3::new(xy.x, xy.y, p.z * vertical)
            })
            .collect();
        let heights = self.heights.as_ref().and_then(|hs| {
            let inv_t = horizontal.try_inverse()?.transpose();
            Some(hs.iter().map(|h| AffineHeight { gradient: inv_t * h.gradient * vertical, offset: h.offset * vertical }).collect())
        });
        LiftedPolyhedron { graph: self.graph.clone(), coords, base_face: self.base_face, heights }
    }

    pub fn face_points(&self, f: FaceId) -> Vec<Vec3> {
        self.graph.face(f).iter().map(|&v| self.coords[v]).collect()
    }

    /// Unit outward normal (faces are counter-clockwise from outside).
    pub fn face_normal(&self, f: FaceId) -> Vec3 {
        newell_normal(&self.face_points(f)).normalize()
    }

    pub fn face_area(&self, f: FaceId) -> f64 {
        0.5 * newell_normal(&self.face_points(f)).norm()
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.graph.face_count()).map(|f| self.face_area(f)).sum()
    }

    pub fn diameter(&self) -> f64 {
        diameter3(&self.coords)
    }

    pub fn edge_length(&self, u: VertexId, v: VertexId) -> f64 {
        (self.coords[u] - self.coords[v]).norm()
    }

    /// Subtract the affine function through three base vertices so they sit
    /// at z = 0. Picks the base corner triple with the largest area.
    pub fn normalize_to_base(&mut self) {
        let Some(base) = self.base_face else { return };
        let cycle = self.graph.face(base).to_vec();
        let mut best = (0.0, [cycle[0], cycle[1], cycle[2]]);
        for i in 0..cycle.len() {
            for j in i + 1..cycle.len() {
                for k in j + 1..cycle.len() {
                    let (a, b, c) = (self.coords[cycle[i]], self.coords[cycle[j]], self.coords[cycle[k]]);
                    let area = crate::geometry::cross2(Vec2::new(b.x - a.x, b.y - a.y), Vec2::new(c.x - a.x, c.y - a.y)).abs();
                    if area > best.0 {
                        best = (area, [cycle[i], cycle[j], cycle[k]]);
                    }
                }
            }
        }
        let m = nalgebra::Matrix3::from_fn(|r, c| {
            let p = self.coords[best.1[r]];
            [p.x, p.y, 1.0][c]
        });
        let rhs = nalgebra::Vector3::from_fn(|r, _| self.coords[best.1[r]].z);
        let Some(sol) = m.lu().solve(&rhs) else { return };
        let correction = AffineHeight { gradient: Vec2::new(sol[0], sol[1]), offset: sol[2] };
        for p in &mut self.coords {
            p.z -= correction.eval(Vec2::new(p.x, p.y));
        }
        if let Some(hs) = self.heights.as_mut() {
            for h in hs {
                h.gradient -= correction.gradient;
                h.offset -= correction.offset;
            }
        }
    }
}

/// Residuals measured while lifting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftDiagnostics {
    /// Worst disagreement of the edge rule over all interior edges,
    /// including those not used by the propagation.
    pub closure_residual: f64,
    /// Largest |z| over base vertices after normalization.
    pub base_deviation: f64,
    pub min_interior_height: f64,
}

/// Lift without the base planarity and height sign checks.
fn lift_unchecked(e: &PlanarEmbedding) -> Result<(LiftedPolyhedron, f64), LiftError> {
    let g = &e.graph;
    let base = e.base_face;
    for edge in 0..g.edge_count() {
        if !e.is_base_edge(edge) && e.stress[edge].partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(LiftError::NonPositiveStress(edge));
        }
    }
    let check = verify_embedding(e);
    if !check.passed {
        return Err(LiftError::InvalidEmbedding(check.failures.join("; ")));
    }

    let nf = g.face_count();
    let mut heights: Vec<Option<AffineHeight>> = vec![None; nf];
    let seed = (0..nf).find(|&f| f != base).expect("at least one interior face");
    heights[seed] = Some(AffineHeight::ZERO);
    heights[base] = Some(AffineHeight::ZERO);
    let mut queue = VecDeque::from([seed]);
    let mut visited = vec![false; nf];
    visited[seed] = true;
    visited[base] = true;
    while let Some(f) = queue.pop_front() {
        let hf = heights[f].expect("visited face has a height");
        let cycle = g.face(f);
        let n = cycle.len();
        for i in 0..n {
            let (u, v) = (cycle[i], cycle[(i + 1) % n]);
            let right = g.left_face(v, u).expect("coherent");
            if visited[right] {
                continue;
            }
            let w = e.stress[g.edge_id(u, v).expect("edge")];
            let jump = rot90(e.coords[v] - e.coords[u]) * w;
            let gradient = hf.gradient + jump;
            let offset = hf.offset - jump.dot(&e.coords[u]);
            heights[right] = Some(AffineHeight { gradient, offset });
            visited[right] = true;
            queue.push_back(right);
        }
    }
    let heights: Vec<AffineHeight> = heights.into_iter().map(|h| h.expect("interior dual is connected")).collect();

    let diam = e.base_diameter().max(1e-300);
    let mut closure: f64 = 0.0;
    for edge in 0..g.edge_count() {
        if e.is_base_edge(edge) {
            continue;
        }
        let [u, v] = g.edges()[edge];
        let [left, right] = g.edge_faces(edge);
        let (hl, hr) = (heights[left], heights[right]);
        let jump = rot90(e.coords[v] - e.coords[u]) * e.stress[edge];
        let grad_err = (hr.gradient - hl.gradient - jump).norm();
        let h_err = (hl.eval(e.coords[u]) - hr.eval(e.coords[u])).abs().max((hl.eval(e.coords[v]) - hr.eval(e.coords[v])).abs());
        closure = closure.max(grad_err).max(h_err / diam);
    }
    if closure > 1e-10 {
        return Err(LiftError::ClosureViolation(closure));
    }

    // Vertex heights from any incident interior face.
    let coords = (0..g.vertex_count())
        .map(|v| {
            let f = g.faces_at(v).into_iter().find(|&f| f != base).expect("vertex on an interior face");
            let p = e.coords[v];
            Vec3::new(p.x, p.y, heights[f].eval(p))
        })
        .collect();
    let mut poly = LiftedPolyhedron { graph: g.clone(), coords, base_face: Some(base), heights: None };
    poly.normalize_to_base();
    Ok((poly, closure))
}

pub fn maxwell_cremona_lift(e: &PlanarEmbedding) -> Result<(LiftedPolyhedron, LiftDiagnostics), LiftError> {
    let (mut poly, closure) = lift_unchecked(e)?;
    let g = &e.graph;
    let base = e.base_face;
    let diam = e.base_diameter().max(1e-300);
    poly.heights = Some(fit_heights(&poly));

    let scale = poly.diameter().max(diam);
    let base_deviation = g.face(base).iter().map(|&v| poly.coords[v].z.abs()).fold(0.0, f64::max);
    if base_deviation > EPS_GEOM * scale {
        return Err(LiftError::BaseNotPlanar(base_deviation));
    }
    let mut min_interior = f64::INFINITY;
    for v in (0..g.vertex_count()).filter(|&v| !e.on_base[v]) {
        let z = poly.coords[v].z;
        min_interior = min_interior.min(z);
        if z <= EPS_GEOM * scale {
            return Err(LiftError::NonPositiveHeights { vertex: v, z });
        }
    }
    for &v in g.face(base) {
        poly.coords[v].z = 0.0;
    }
    Ok((poly, LiftDiagnostics { closure_residual: closure, base_deviation, min_interior_height: min_interior }))
}

/// Signed distances of the lifted base vertices from their least-squares
/// plane, in base cycle order. All zero exactly when the base lifts flat.
pub fn base_plane_residuals(e: &PlanarEmbedding) -> Result<Vec<f64>, LiftError> {
    let (poly, _) = lift_unchecked(e)?;
    let cycle = e.graph.face(e.base_face);
    let a = nalgebra::DMatrix::from_fn(cycle.len(), 3, |r, c| {
        let p = poly.coords[cycle[r]];
        [p.x, p.y, 1.0][c]
    });
    let z = nalgebra::DVector::from_fn(cycle.len(), |r, _| poly.coords[cycle[r]].z);
    let fit = a.clone().svd(true, true).solve(&z, 1e-14).map_err(|m| LiftError::InvalidEmbedding(m.to_string()))?;
    Ok((z - a * fit).iter().copied().collect())
}

/// Affine height per face from its Newell plane (faces with a vertical
/// plane get a zero placeholder).
fn fit_heights(p: &LiftedPolyhedron) -> Vec<AffineHeight> {
    (0..p.graph.face_count())
        .map(|f| {
            let pts = p.face_points(f);
            let n = newell_normal(&pts);
            if n.z.abs() < 1e-300 {
                return AffineHeight::ZERO;
            }
            let c = pts.iter().sum::<Vec3>() / pts.len() as f64;
            // n . (x - c) = 0  =>  z = c.z - (n.x (x - c.x) + n.y (y - c.y)) / n.z
            let gradient = Vec2::new(-n.x / n.z, -n.y / n.z);
            AffineHeight { gradient, offset: c.z - gradient.dot(&Vec2::new(c.x, c.y)) }
        })
        .collect()
}

/// Outcome of [`verify_convex_polyhedron`]; failures are listed, never raised.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvexityReport {
    pub passed: bool,
    /// Worst distance of a face vertex from its face plane, relative to diameter.
    pub max_planarity_error: f64,
    /// Smallest depth of a non-incident vertex below a face plane, relative.
    pub min_separation: f64,
    pub max_dihedral: f64,
    pub min_curvature: f64,
    pub failures: Vec<String>,
}

pub fn verify_convex_polyhedron(p: &LiftedPolyhedron) -> ConvexityReport {
    let g = &p.graph;
    let d = p.diameter().max(1e-300);
    let mut r = ConvexityReport { min_separation: f64::INFINITY, min_curvature: f64::INFINITY, ..Default::default() };
    for f in 0..g.face_count() {
        let pts = p.face_points(f);
        let raw = newell_normal(&pts);
        if raw.norm() <= EPS_GEOM * d * d {
            r.failures.push(format!("face {f} has no area"));
            r.max_planarity_error = f64::INFINITY;
            continue;
        }
        let n = raw.normalize();
        let c = pts.iter().sum::<Vec3>() / pts.len() as f64;
        let planarity = pts.iter().map(|q| (q - c).dot(&n).abs() / d).fold(0.0, f64::max);
        r.max_planarity_error = r.max_planarity_error.max(planarity);
        if planarity > EPS_GEOM {
            r.failures.push(format!("face {f} is not planar ({planarity:e})"));
        }
        let face = g.face(f);
        for v in (0..g.vertex_count()).filter(|v| !face.contains(v)) {
            let depth = -(p.coords[v] - c).dot(&n) / d;
            r.min_separation = r.min_separation.min(depth);
            if depth <= EPS_GEOM {
                r.failures.push(format!("vertex {v} is not strictly inside the plane of face {f}"));
            }
        }
    }
    let metrics = metric_report(p);
    r.max_dihedral = metrics.dihedral.iter().copied().fold(0.0, f64::max);
    if r.max_dihedral >= PI - 1e-9 {
        r.failures.push(format!("dihedral angle {:.6} rad is not below pi", r.max_dihedral));
    }
    r.min_curvature = metrics.curvature.iter().copied().fold(f64::INFINITY, f64::min);
    if r.min_curvature <= 1e-9 {
        r.failures.push(format!("curvature {:e} is not positive", r.min_curvature));
    }
    r.passed = r.failures.is_empty();
    r
}

pub fn face_angle(p: &LiftedPolyhedron, f: FaceId, v: VertexId) -> Result<f64, LiftError> {
    let cycle = p.graph.face(f);
    let i = cycle.iter().position(|&w| w == v).ok_or(LiftError::VertexNotOnFace { face: f, vertex: v })?;
    let n = cycle.len();
    let prev = p.coords[cycle[(i + n - 1) % n]];
    let next = p.coords[cycle[(i + 1) % n]];
    Ok(corner_angle3(prev, p.coords[v], next))
}

/// Angle gap `2 pi - sum of incident face angles`.
pub fn vertex_curvature(p: &LiftedPolyhedron, v: VertexId) -> f64 {
    let total: f64 = p.graph.faces_at(v).into_iter().map(|f| face_angle(p, f, v).expect("incident face")).sum();
    TAU - total
}

/// Per-edge dihedral: `pi` minus the angle between the outward normals.
pub fn dihedral_angle(p: &LiftedPolyhedron, e: usize) -> f64 {
    let [f, g] = p.graph.edge_faces(e);
    let (a, b) = (p.face_normal(f), p.face_normal(g));
    PI - a.cross(&b).norm().atan2(a.dot(&b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    /// `angles[f][i]`: angle at the i-th corner of face f.
    pub angles: Vec<Vec<f64>>,
    pub curvature: Vec<f64>,
    pub dihedral: Vec<f64>,
}

impl MetricReport {
    pub fn total_curvature(&self) -> f64 {
        self.curvature.iter().sum()
    }
}

pub fn metric_report(p: &LiftedPolyhedron) -> MetricReport {
    let g = &p.graph;
    let angles: Vec<Vec<f64>> =
        (0..g.face_count()).map(|f| g.face(f).iter().map(|&v| face_angle(p, f, v).expect("own corner")).collect()).collect();
    let mut curvature = vec![TAU; g.vertex_count()];
    for (f, list) in angles.iter().enumerate() {
        for (&v, a) in g.face(f).iter().zip(list) {
            curvature[v] -= a;
        }
    }
    let dihedral = (0..g.edge_count()).map(|e| dihedral_angle(p, e)).collect();
    MetricReport { angles, curvature, dihedral }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{embed_base_polygon, tutte_embed, BaseShape};
    use crate::fixtures;
    use approx::assert_relative_eq;

    fn deg(x: f64) -> f64 {
        x.to_degrees()
    }

    fn lift_default(g: &PolyhedralGraph, base: FaceId) -> (LiftedPolyhedron, LiftDiagnostics) {
        let pins = embed_base_polygon(g.face(base), &BaseShape::default()).unwrap();
        let e = tutte_embed(g, base, &pins, None).unwrap();
        maxwell_cremona_lift(&e).unwrap()
    }

    #[test]
    fn k4_apex_lifts_upward() {
        let (p, diag) = lift_default(&fixtures::tetrahedron_graph(), 0);
        assert!(p.coords()[3].z > 0.0);
        for v in 0..3 {
            assert!(p.coords()[v].z.abs() <= 1e-9);
        }
        assert!(diag.closure_residual <= 1e-10);
        assert!(verify_convex_polyhedron(&p).passed);
    }

    #[test]
    fn cube_inner_vertices_share_a_height() {
        let g = fixtures::cube_graph();
        let (p, diag) = lift_default(&g, 0);
        let h = p.coords()[4].z;
        assert!(h > 0.0);
        for v in 5..8 {
            assert!((p.coords()[v].z - h).abs() <= 1e-9);
        }
        assert!(diag.closure_residual <= 1e-10);
        let r = verify_convex_polyhedron(&p);
        assert!(r.passed, "{:?}", r.failures);
    }

    #[test]
    fn lifts_are_convex_and_affine_per_face() {
        for (g, base) in [
            (fixtures::octahedron_graph(), 0),
            (fixtures::icosahedron_graph(), 0),
            (fixtures::dodecahedron_graph(), 0),
            (fixtures::square_pyramid_graph(), 1),
        ] {
            let (p, diag) = lift_default(&g, base);
            assert!(diag.closure_residual <= 1e-10);
            let r = verify_convex_polyhedron(&p);
            assert!(r.passed, "{:?}", r.failures);
            let hs = p.heights().unwrap();
            let scale = p.diameter();
            for (f, h) in hs.iter().enumerate() {
                for &v in g.face(f) {
                    let q = p.coords()[v];
                    assert!((h.eval(Vec2::new(q.x, q.y)) - q.z).abs() <= 1e-10 * scale);
                }
            }
            assert_relative_eq!(metric_report(&p).total_curvature(), 2.0 * TAU, epsilon = 1e-8);
        }
    }

    #[test]
    fn normalization_is_idempotent() {
        let (p, _) = lift_default(&fixtures::icosahedron_graph(), 0);
        let mut q = p.clone();
        q.normalize_to_base();
        for (a, b) in p.coords().iter().zip(q.coords()) {
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn propagation_order_does_not_matter() {
        // Relabel the cube's faces so the BFS reaches the trapezoids in a
        // different order; heights must agree.
        let g = fixtures::cube_graph();
        let mut faces = g.faces().to_vec();
        faces.swap(2, 4);
        faces.swap(3, 5);
        let h = crate::combinatorics::validate_graph(8, faces).unwrap();
        let (a, _) = lift_default(&g, 0);
        let (b, _) = lift_default(&h, 0);
        for v in 0..8 {
            assert!((a.coords()[v].z - b.coords()[v].z).abs() <= 1e-10);
        }
    }

    #[test]
    fn diamond_frustum_metrics() {
        let p = fixtures::diamond_frustum();
        assert!(verify_convex_polyhedron(&p).passed);
        assert_relative_eq!(face_angle(&p, 1, 3).unwrap(), 2.0 * 0.5f64.atan(), epsilon = 1e-12);
        assert!((deg(face_angle(&p, 1, 3).unwrap()) - 53.13).abs() < 0.01);
        // Trapezoid corner at (0, 2, 0.5): arccos(-4 / (sqrt(4.25) sqrt(5))).
        let expect = (-4.0 / (4.25f64.sqrt() * 5f64.sqrt())).acos();
        assert_relative_eq!(face_angle(&p, 2, 3).unwrap(), expect, epsilon = 1e-12);
        assert!((deg(expect) - 150.2).abs() < 0.05);
        assert!((deg(vertex_curvature(&p, 3)) - 6.5).abs() < 0.05);
        assert!((deg(vertex_curvature(&p, 1)) - 6.0).abs() < 0.05);
        assert!(matches!(face_angle(&p, 1, 7), Err(LiftError::VertexNotOnFace { .. })));
    }

    #[test]
    fn unit_cube_metrics() {
        let p = fixtures::unit_cube();
        assert!(verify_convex_polyhedron(&p).passed);
        assert_relative_eq!(face_angle(&p, 0, 0).unwrap(), PI / 2.0, epsilon = 1e-15);
        let m = metric_report(&p);
        for &k in &m.curvature {
            assert_relative_eq!(k, PI / 2.0, epsilon = 1e-12);
        }
        assert_relative_eq!(deg(m.total_curvature()), 720.0, epsilon = 1e-9);
        for &d in &m.dihedral {
            assert_relative_eq!(d, PI / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn flattened_solid_fails_convexity() {
        let p = fixtures::unit_cube();
        let flat: Vec<Vec3> = p.coords().iter().map(|q| Vec3::new(q.x, q.y, 0.0)).collect();
        let q = LiftedPolyhedron::from_coords(p.graph().clone(), flat, Some(0)).unwrap();
        assert!(!verify_convex_polyhedron(&q).passed);
    }
}
