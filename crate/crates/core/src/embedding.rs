//! Pinned base polygon and Tutte equilibrium embedding.
//!
//! The base face is pinned as a strictly convex polygon and every other
//! vertex is placed at the stress-weighted average of its neighbours. For a
//! 3-connected graph this yields a Schlegel diagram: convex interior faces,
//! no crossings.
//!
//! Orientation: faces are counter-clockwise seen from outside the solid. The
//! solid sits above the base plane, so interior faces appear counter-clockwise
//! from above and the base face, seen from below, runs clockwise. The pinned
//! polygon is therefore assigned to the base cycle in reverse.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::combinatorics::{EdgeId, FaceId, PolyhedralGraph, VertexId};
use crate::geometry::{cross2, diameter2, min_corner_turn, segments_cross, strictly_inside_convex, Vec2};

/// Geometry tolerance, relative to the base polygon's diameter.
pub const EPS_GEOM: f64 = 1e-9;

/// Interior-vertex count up to which the equilibrium system is solved directly.
pub const DIRECT_SOLVE_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbeddingError {
    #[error("base polygon needs at least 3 vertices, got {0}")]
    TooFewBaseVertices(usize),
    #[error("{expected} base coordinates required, got {got}")]
    BaseCountMismatch { expected: usize, got: usize },
    #[error("base polygon is not strictly convex and counter-clockwise at corner {0}")]
    NonConvexBase(usize),
    #[error("base polygon has collinear corner {0}")]
    CollinearBase(usize),
    #[error("face {0} does not exist")]
    NoSuchFace(FaceId),
    #[error("pinned vertex {0} is not on the base face")]
    PinnedNotOnBase(VertexId),
    #[error("stress on interior edge {edge} must be positive and finite, got {value}")]
    NonPositiveStress { edge: EdgeId, value: f64 },
    #[error("stress vector has {got} entries for {expected} edges")]
    StressLength { expected: usize, got: usize },
    #[error("equilibrium system is singular")]
    SingularSystem,
    #[error("equilibrium residual {0:e} exceeds tolerance")]
    ResidualTooLarge(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BaseShape {
    /// Regular polygon centred at the origin, first vertex at 90 degrees.
    Regular { radius: f64 },
    /// Explicit counter-clockwise coordinates.
    Explicit(Vec<Vec2>),
}

impl Default for BaseShape {
    fn default() -> Self {
        BaseShape::Regular { radius: 1.0 }
    }
}

/// Planar positions for a base face cycle. The returned list runs
/// counter-clockwise in the plane: `c0, c[k-1], ..., c1`.
pub fn embed_base_polygon(cycle: &[VertexId], shape: &BaseShape) -> Result<Vec<(VertexId, Vec2)>, EmbeddingError> {
    let k = cycle.len();
    if k < 3 {
        return Err(EmbeddingError::TooFewBaseVertices(k));
    }
    let coords: Vec<Vec2> = match shape {
        BaseShape::Regular { radius } => (0..k)
            .map(|i| {
                let theta = std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * i as f64 / k as f64;
                Vec2::new(radius * theta.cos(), radius * theta.sin())
            })
            .collect(),
        BaseShape::Explicit(pts) => {
            if pts.len() != k {
                return Err(EmbeddingError::BaseCountMismatch { expected: k, got: pts.len() });
            }
            pts.clone()
        }
    };
    check_strictly_convex(&coords)?;
    let order = std::iter::once(cycle[0]).chain(cycle[1..].iter().rev().copied());
    Ok(order.zip(coords).collect())
}

fn check_strictly_convex(pts: &[Vec2]) -> Result<(), EmbeddingError> {
    let k = pts.len();
    let scale = diameter2(pts).max(1e-300);
    let tol = EPS_GEOM * scale * scale;
    let mut winding = 0.0;
    for i in 0..k {
        let a = pts[(i + k - 1) % k];
        let b = pts[i];
        let c = pts[(i + 1) % k];
        let turn = cross2(b - a, c - b);
        if turn.abs() <= tol {
            return Err(EmbeddingError::CollinearBase(i));
        }
        if turn < 0.0 {
            return Err(EmbeddingError::NonConvexBase(i));
        }
        winding += (b - a).angle(&(c - b));
    }
    // All left turns but wrapping twice means a star polygon.
    if winding > std::f64::consts::TAU + 1e-6 {
        return Err(EmbeddingError::NonConvexBase(0));
    }
    Ok(())
}

/// A straight-line drawing with a pinned convex outer face and a positive
/// stress on interior edges.
#[derive(Debug, Clone)]
pub struct PlanarEmbedding {
    pub graph: PolyhedralGraph,
    pub base_face: FaceId,
    pub coords: Vec<Vec2>,
    /// Per-edge stress; entries for base-face edges are zero and unused.
    pub stress: Vec<f64>,
    pub on_base: Vec<bool>,
}

impl PlanarEmbedding {
    pub fn is_base_edge(&self, e: EdgeId) -> bool {
        self.graph.edge_faces(e).contains(&self.base_face)
    }

    pub fn base_polygon(&self) -> Vec<Vec2> {
        let cycle = self.graph.face(self.base_face);
        std::iter::once(cycle[0]).chain(cycle[1..].iter().rev().copied()).map(|v| self.coords[v]).collect()
    }

    pub fn base_diameter(&self) -> f64 {
        diameter2(&self.base_polygon())
    }

    /// Counter-clockwise planar polygon of an interior face.
    pub fn face_polygon(&self, f: FaceId) -> Vec<Vec2> {
        self.graph.face(f).iter().map(|&v| self.coords[v]).collect()
    }

    /// Net stress force on `v`: `sum over neighbours u of w_uv (p_u - p_v)`.
    pub fn force_at(&self, v: VertexId) -> Vec2 {
        self.graph
            .neighbors(v)
            .iter()
            .map(|&u| {
                let e = self.graph.edge_id(u, v).expect("neighbour edge");
                (self.coords[u] - self.coords[v]) * self.stress[e]
            })
            .sum()
    }

    /// Worst interior equilibrium residual relative to the base diameter.
    pub fn equilibrium_residual(&self) -> f64 {
        let d = self.base_diameter().max(1e-300);
        (0..self.graph.vertex_count()).filter(|&v| !self.on_base[v]).map(|v| self.force_at(v).norm() / d).fold(0.0, f64::max)
    }
}

/// Unit stress on every interior edge.
pub fn uniform_stress(g: &PolyhedralGraph, base_face: FaceId) -> Vec<f64> {
    (0..g.edge_count()).map(|e| if g.edge_faces(e).contains(&base_face) { 0.0 } else { 1.0 }).collect()
}

pub fn tutte_embed(
    g: &PolyhedralGraph,
    base_face: FaceId,
    pinned: &[(VertexId, Vec2)],
    stress: Option<&[f64]>,
) -> Result<PlanarEmbedding, EmbeddingError> {
    if base_face >= g.face_count() {
        return Err(EmbeddingError::NoSuchFace(base_face));
    }
    let cycle = g.face(base_face);
    if pinned.len() != cycle.len() {
        return Err(EmbeddingError::BaseCountMismatch { expected: cycle.len(), got: pinned.len() });
    }
    let n = g.vertex_count();
    let mut on_base = vec![false; n];
    let mut coords = vec![Vec2::zeros(); n];
    for &(v, p) in pinned {
        if !cycle.contains(&v) {
            return Err(EmbeddingError::PinnedNotOnBase(v));
        }
        on_base[v] = true;
        coords[v] = p;
    }

    let mut weights = match stress {
        Some(s) if s.len() != g.edge_count() => return Err(EmbeddingError::StressLength { expected: g.edge_count(), got: s.len() }),
        Some(s) => s.to_vec(),
        None => uniform_stress(g, base_face),
    };
    for (e, w) in weights.iter_mut().enumerate() {
        if g.edge_faces(e).contains(&base_face) {
            *w = 0.0;
        } else if !(w.is_finite() && *w > 0.0) {
            return Err(EmbeddingError::NonPositiveStress { edge: e, value: *w });
        }
    }

    let interior: Vec<VertexId> = (0..n).filter(|&v| !on_base[v]).collect();
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in interior.iter().enumerate() {
        slot[v] = i;
    }
    let weight = |u: VertexId, v: VertexId| weights[g.edge_id(u, v).expect("edge")];

    if interior.len() <= DIRECT_SOLVE_LIMIT {
        let m = interior.len();
        let mut a = DMatrix::<f64>::zeros(m, m);
        let mut rhs = DMatrix::<f64>::zeros(m, 2);
        for (i, &v) in interior.iter().enumerate() {
            for &u in g.neighbors(v) {
                let w = weight(u, v);
                a[(i, i)] += w;
                if on_base[u] {
                    rhs[(i, 0)] += w * coords[u].x;
                    rhs[(i, 1)] += w * coords[u].y;
                } else {
                    a[(i, slot[u])] -= w;
                }
            }
        }
        if m > 0 {
            let sol = a.lu().solve(&rhs).ok_or(EmbeddingError::SingularSystem)?;
            for (i, &v) in interior.iter().enumerate() {
                coords[v] = Vec2::new(sol[(i, 0)], sol[(i, 1)]);
            }
        }
    } else {
        gauss_seidel(g, &interior, &weights, &mut coords);
    }

    let emb = PlanarEmbedding { graph: g.clone(), base_face, coords, stress: weights, on_base };
    let residual = emb.equilibrium_residual();
    if residual > EPS_GEOM {
        return Err(EmbeddingError::ResidualTooLarge(residual));
    }
    Ok(emb)
}

fn gauss_seidel(g: &PolyhedralGraph, interior: &[VertexId], weights: &[f64], coords: &mut [Vec2]) {
    for _sweep in 0..1_000_000 {
        let mut change: f64 = 0.0;
        for &v in interior {
            let mut acc = Vec2::zeros();
            let mut total = 0.0;
            for &u in g.neighbors(v) {
                let w = weights[g.edge_id(u, v).expect("edge")];
                acc += coords[u] * w;
                total += w;
            }
            let next = acc / total;
            change = change.max((next - coords[v]).norm());
            coords[v] = next;
        }
        if change < 1e-12 {
            break;
        }
    }
}

/// Outcome of [`verify_embedding`]. Never an error: failures are listed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmbeddingReport {
    pub passed: bool,
    pub equilibrium_residual: f64,
    /// Smallest corner turn over interior faces, relative to diameter squared.
    pub min_face_turn: f64,
    pub nonconvex_faces: Vec<FaceId>,
    pub crossings: Vec<(EdgeId, EdgeId)>,
    pub outside_base: Vec<VertexId>,
    pub failures: Vec<String>,
}

pub fn verify_embedding(e: &PlanarEmbedding) -> EmbeddingReport {
    let g = &e.graph;
    let d = e.base_diameter().max(1e-300);
    let mut report = EmbeddingReport { equilibrium_residual: e.equilibrium_residual(), min_face_turn: f64::INFINITY, ..Default::default() };
    if report.equilibrium_residual > EPS_GEOM {
        report.failures.push(format!("equilibrium residual {:e}", report.equilibrium_residual));
    }

    for f in (0..g.face_count()).filter(|&f| f != e.base_face) {
        let turn = min_corner_turn(&e.face_polygon(f)) / (d * d);
        report.min_face_turn = report.min_face_turn.min(turn);
        if turn <= EPS_GEOM {
            report.nonconvex_faces.push(f);
        }
    }
    if !report.nonconvex_faces.is_empty() {
        report.failures.push(format!("faces not strictly convex: {:?}", report.nonconvex_faces));
    }

    let edges = g.edges();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let [a, b] = edges[i];
            let [c, dd] = edges[j];
            if a == c || a == dd || b == c || b == dd {
                continue;
            }
            if segments_cross(e.coords[a], e.coords[b], e.coords[c], e.coords[dd], EPS_GEOM) {
                report.crossings.push((i, j));
            }
        }
    }
    if !report.crossings.is_empty() {
        report.failures.push(format!("{} edge crossings", report.crossings.len()));
    }

    let base = e.base_polygon();
    for v in (0..g.vertex_count()).filter(|&v| !e.on_base[v]) {
        if !strictly_inside_convex(&base, e.coords[v], EPS_GEOM * d) {
            report.outside_base.push(v);
        }
    }
    if !report.outside_base.is_empty() {
        report.failures.push(format!("vertices outside base polygon: {:?}", report.outside_base));
    }
    report.passed = report.failures.is_empty();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_relative_eq;

    fn square_pins(g: &PolyhedralGraph) -> Vec<(VertexId, Vec2)> {
        let sq = vec![Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0), Vec2::new(-1.0, -1.0), Vec2::new(1.0, -1.0)];
        embed_base_polygon(g.face(0), &BaseShape::Explicit(sq)).unwrap()
    }

    #[test]
    fn regular_base_polygons() {
        let sq = embed_base_polygon(&[0, 1, 2, 3], &BaseShape::default()).unwrap();
        assert_eq!(sq.iter().map(|p| p.0).collect::<Vec<_>>(), vec![0, 3, 2, 1]);
        assert_relative_eq!(sq[0].1, Vec2::new(0.0, 1.0), epsilon = 1e-15);
        for (_, p) in &sq {
            assert_relative_eq!(p.norm(), 1.0, epsilon = 1e-15);
        }
        let tri = embed_base_polygon(&[0, 1, 2], &BaseShape::default()).unwrap();
        let side = (tri[0].1 - tri[1].1).norm();
        assert_relative_eq!(side, 3f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn explicit_base_checks() {
        let rect = vec![Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(2.0, 1.0), Vec2::new(0.0, 1.0)];
        assert!(embed_base_polygon(&[0, 1, 2, 3], &BaseShape::Explicit(rect.clone())).is_ok());
        let cw: Vec<Vec2> = rect.iter().rev().copied().collect();
        assert!(matches!(embed_base_polygon(&[0, 1, 2, 3], &BaseShape::Explicit(cw)), Err(EmbeddingError::NonConvexBase(_))));
        let flat = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(1.0, 1.0)];
        assert!(matches!(embed_base_polygon(&[0, 1, 2, 3], &BaseShape::Explicit(flat)), Err(EmbeddingError::CollinearBase(_))));
    }

    #[test]
    fn cube_inner_square_is_one_third() {
        // Symmetry ansatz: inner vertex (s, s) has neighbours (1, 1), (-s, s), (s, -s):
        // 3s = 1 + (-s + s) + (s - s)  =>  s = 1/3.
        let g = fixtures::cube_graph();
        let e = tutte_embed(&g, 0, &square_pins(&g), None).unwrap();
        for v in 4..8 {
            assert_relative_eq!(e.coords[v].x.abs(), 1.0 / 3.0, epsilon = 1e-12);
            assert_relative_eq!(e.coords[v].y.abs(), 1.0 / 3.0, epsilon = 1e-12);
            // Each inner vertex sits in the quadrant of the base corner below it.
            assert!(e.coords[v].x * e.coords[v - 4].x > 0.0 && e.coords[v].y * e.coords[v - 4].y > 0.0);
        }
        let report = verify_embedding(&e);
        assert!(report.passed, "{:?}", report.failures);
    }

    #[test]
    fn k4_and_wheel_hubs_are_central() {
        let k4 = fixtures::tetrahedron_graph();
        let pins = embed_base_polygon(k4.face(0), &BaseShape::default()).unwrap();
        let e = tutte_embed(&k4, 0, &pins, None).unwrap();
        assert_relative_eq!(e.coords[3], Vec2::zeros(), epsilon = 1e-14);

        let wheel = fixtures::square_pyramid_graph();
        let e = tutte_embed(&wheel, 0, &square_pins(&wheel), None).unwrap();
        assert_relative_eq!(e.coords[4], Vec2::zeros(), epsilon = 1e-14);
    }

    #[test]
    fn stress_scaling_invariance() {
        let g = fixtures::icosahedron_graph();
        let pins = embed_base_polygon(g.face(0), &BaseShape::default()).unwrap();
        let base: Vec<f64> = (0..g.edge_count()).map(|e| 1.0 + (e % 5) as f64 * 0.3).collect();
        let scaled: Vec<f64> = base.iter().map(|w| w * 7.5).collect();
        let a = tutte_embed(&g, 0, &pins, Some(&base)).unwrap();
        let b = tutte_embed(&g, 0, &pins, Some(&scaled)).unwrap();
        for v in 0..g.vertex_count() {
            assert_relative_eq!(a.coords[v], b.coords[v], epsilon = 1e-12);
        }
        assert!(verify_embedding(&a).passed);
    }

    #[test]
    fn rejects_non_positive_stress() {
        let g = fixtures::cube_graph();
        let mut w = uniform_stress(&g, 0);
        let interior = (0..g.edge_count()).find(|&e| !g.edge_faces(e).contains(&0)).unwrap();
        w[interior] = 0.0;
        assert!(matches!(tutte_embed(&g, 0, &square_pins(&g), Some(&w)), Err(EmbeddingError::NonPositiveStress { .. })));
    }

    #[test]
    fn verification_catches_defects() {
        let g = fixtures::cube_graph();
        let good = tutte_embed(&g, 0, &square_pins(&g), None).unwrap();

        let mut outside = good.clone();
        outside.coords[4] = Vec2::new(3.0, 3.0);
        let r = verify_embedding(&outside);
        assert!(!r.passed && r.outside_base.contains(&4));

        let mut reflex = good.clone();
        // Push an inner corner past the diagonal of its faces.
        reflex.coords[6] = Vec2::new(0.2, 0.2);
        let r = verify_embedding(&reflex);
        assert!(!r.passed && !r.nonconvex_faces.is_empty());
    }

    #[test]
    fn gauss_seidel_matches_direct_solve() {
        let g = fixtures::dodecahedron_graph();
        let pins = embed_base_polygon(g.face(0), &BaseShape::default()).unwrap();
        let direct = tutte_embed(&g, 0, &pins, None).unwrap();
        let mut coords = vec![Vec2::zeros(); g.vertex_count()];
        for &(v, p) in &pins {
            coords[v] = p;
        }
        let interior: Vec<usize> = (0..g.vertex_count()).filter(|&v| !direct.on_base[v]).collect();
        gauss_seidel(&g, &interior, &direct.stress, &mut coords);
        for (c, d) in coords.iter().zip(&direct.coords) {
            assert_relative_eq!(*c, *d, epsilon = 1e-10);
        }
    }
}
