//! Edge unfolding along a cut tree, pairwise overlap detection, congruence
//! classes of layouts, and the planar kinematic model of the cut banks
//! meeting along `a2 a3`.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{enumerate_spanning_trees, CutTree, EdgeId, FaceId, GraphError, VertexId};
use crate::geometry::{centroid2, clip_convex, cross2, newell_normal, penetration_depth, rotate_about, signed_area, Vec2, Vec3};
use crate::lifting::LiftedPolyhedron;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnfoldError {
    #[error("cut tree is not a spanning tree: {0}")]
    NotSpanningTree(GraphError),
    #[error("face {0} does not exist")]
    NoSuchFace(FaceId),
    #[error("face {0} is too thin to flatten reliably")]
    NumericalDegeneracy(FaceId),
    #[error("{0} of the layouts overlap; congruence classes need nets")]
    OverlapPresent(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Planar layout of every face. `polygons[f][i]` is the image of corner
/// `faces[f][i]`; placed polygons are counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Unfolding {
    pub root: FaceId,
    pub faces: Vec<Vec<VertexId>>,
    pub polygons: Vec<Vec<Vec2>>,
    /// `(parent face, shared edge)` per face; `None` for the root.
    pub parent: Vec<Option<(FaceId, EdgeId)>>,
    /// Faces in placement order.
    pub order: Vec<FaceId>,
    pub cut_edges: Vec<[VertexId; 2]>,
}

impl Unfolding {
    pub fn corner(&self, f: FaceId, i: usize) -> (FaceId, VertexId) {
        (f, self.faces[f][i])
    }

    pub fn placed_area(&self) -> f64 {
        self.polygons.iter().map(|p| signed_area(p)).sum()
    }

    /// Every placed copy of vertex `v`.
    pub fn images_of(&self, v: VertexId) -> Vec<Vec2> {
        let mut out = Vec::new();
        for (f, cycle) in self.faces.iter().enumerate() {
            for (i, &w) in cycle.iter().enumerate() {
                if w == v {
                    out.push(self.polygons[f][i]);
                }
            }
        }
        out
    }
}

/// Face coordinates in the frame with origin at the first corner, `e1`
/// along the first edge and `e2 = n x e1`.
fn flatten_face(p: &LiftedPolyhedron, f: FaceId) -> Result<Vec<Vec2>, UnfoldError> {
    let pts = p.face_points(f);
    let raw = newell_normal(&pts);
    let scale = pts.iter().map(|q| (q - pts[0]).norm()).fold(0.0, f64::max);
    if raw.norm() <= 1e-12 * scale * scale || scale == 0.0 {
        return Err(UnfoldError::NumericalDegeneracy(f));
    }
    let n = raw.normalize();
    let e1: Vec3 = (pts[1] - pts[0]).normalize();
    let e2 = n.cross(&e1);
    Ok(pts.iter().map(|q| Vec2::new((q - pts[0]).dot(&e1), (q - pts[0]).dot(&e2))).collect())
}

/// Rigid motion (no reflection) taking `(a, b)` to `(a2, b2)`.
fn rigid_match(a: Vec2, b: Vec2, a2: Vec2, b2: Vec2) -> impl Fn(Vec2) -> Vec2 {
    let d = b - a;
    let d2 = b2 - a2;
    let theta = cross2(d, d2).atan2(d.dot(&d2));
    move |q: Vec2| rotate_about(q, a, theta) - a + a2
}

pub fn unfold(p: &LiftedPolyhedron, tree: &CutTree, root: Option<FaceId>) -> Result<Unfolding, UnfoldError> {
    let g = p.graph();
    let tree = CutTree::new(g, tree.edges().iter().map(|&[u, v]| (u, v)), None).map_err(UnfoldError::NotSpanningTree)?;
    tree.check_dual_complement(g).map_err(UnfoldError::NotSpanningTree)?;
    let root = root.or(p.base_face()).unwrap_or(0);
    if root >= g.face_count() {
        return Err(UnfoldError::NoSuchFace(root));
    }
    let nf = g.face_count();
    let mut polygons: Vec<Vec<Vec2>> = vec![Vec::new(); nf];
    let mut parent = vec![None; nf];
    let mut order = vec![root];
    let mut uncut = vec![false; g.edge_count()];
    for e in tree.uncut_edges(g) {
        uncut[e] = true;
    }
    polygons[root] = flatten_face(p, root)?;
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        let cycle = g.face(f);
        let n = cycle.len();
        for i in 0..n {
            let (u, v) = (cycle[i], cycle[(i + 1) % n]);
            let e = g.edge_id(u, v).expect("face edge");
            if !uncut[e] {
                continue;
            }
            let child = g.left_face(v, u).expect("coherent");
            if child == root || !polygons[child].is_empty() {
                continue;
            }
            let local = flatten_face(p, child)?;
            let ccycle = g.face(child);
            let iu = ccycle.iter().position(|&w| w == u).expect("shared vertex");
            let iv = ccycle.iter().position(|&w| w == v).expect("shared vertex");
            let place = rigid_match(local[iu], local[iv], polygons[f][i], polygons[f][(i + 1) % n]);
            polygons[child] = local.into_iter().map(&place).collect();
            parent[child] = Some((f, e));
            order.push(child);
            queue.push_back(child);
        }
    }
    Ok(Unfolding { root, faces: g.faces().to_vec(), polygons, parent, order, cut_edges: tree.edges().to_vec() })
}

/// Isometry residuals of a layout against its solid.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LayoutResiduals {
    /// Worst relative edge-length error over all placed face edges and
    /// diagonals from the first corner.
    pub max_length_error: f64,
    /// Worst endpoint gap of a shared uncut edge, relative to diameter.
    pub max_seam_gap: f64,
}

pub fn layout_residuals(p: &LiftedPolyhedron, u: &Unfolding) -> LayoutResiduals {
    let g = p.graph();
    let mut r = LayoutResiduals::default();
    for f in 0..g.face_count() {
        let cycle = g.face(f);
        let n = cycle.len();
        let poly = &u.polygons[f];
        for i in 0..n {
            for j in [(i + 1) % n, 0] {
                if i == j {
                    continue;
                }
                let true_len = p.edge_length(cycle[i], cycle[j]);
                let placed = (poly[i] - poly[j]).norm();
                r.max_length_error = r.max_length_error.max((placed - true_len).abs() / true_len);
            }
        }
    }
    let d = p.diameter();
    for f in 0..g.face_count() {
        if let Some((parent, e)) = u.parent[f] {
            for &v in &g.edges()[e] {
                let a = u.polygons[f][g.face_position(f, v).expect("on face")];
                let b = u.polygons[parent][g.face_position(parent, v).expect("on face")];
                r.max_seam_gap = r.max_seam_gap.max((a - b).norm() / d);
            }
        }
    }
    r
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapWitness {
    /// Lower face index first.
    pub faces: [FaceId; 2],
    pub area: f64,
    pub depth: f64,
    /// A point inside the intersection.
    pub point: [f64; 2],
    pub region: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub overlapping: bool,
    pub is_net: bool,
    pub eps_area: f64,
    /// Sorted by area, largest first.
    pub witnesses: Vec<OverlapWitness>,
}

/// Relative area below which an intersection counts as boundary contact.
pub const EPS_AREA_REL: f64 = 1e-9;

fn bbox(p: &[Vec2]) -> [f64; 4] {
    p.iter().fold([f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY], |b, q| {
        [b[0].min(q.x), b[1].min(q.y), b[2].max(q.x), b[3].max(q.y)]
    })
}

pub fn detect_overlap(u: &Unfolding) -> OverlapReport {
    detect_overlap_with(u, EPS_AREA_REL)
}

/// As [`detect_overlap`] with the contact tolerance `eps_rel` times the
/// total placed area.
pub fn detect_overlap_with(u: &Unfolding, eps_rel: f64) -> OverlapReport {
    let eps_area = eps_rel * u.placed_area();
    let boxes: Vec<[f64; 4]> = u.polygons.iter().map(|p| bbox(p)).collect();
    let mut witnesses = Vec::new();
    for a in 0..u.polygons.len() {
        for b in a + 1..u.polygons.len() {
            let (ba, bb) = (boxes[a], boxes[b]);
            if ba[2] <= bb[0] || bb[2] <= ba[0] || ba[3] <= bb[1] || bb[3] <= ba[1] {
                continue;
            }
            let region = clip_convex(&u.polygons[a], &u.polygons[b]);
            let area = signed_area(&region);
            if area > eps_area {
                let c = centroid2(&region);
                witnesses.push(OverlapWitness {
                    faces: [a, b],
                    area,
                    depth: penetration_depth(&u.polygons[a], &u.polygons[b]),
                    point: [c.x, c.y],
                    region: region.iter().map(|q| [q.x, q.y]).collect(),
                });
            }
        }
    }
    witnesses.sort_by(|x, y| y.area.total_cmp(&x.area).then(x.faces.cmp(&y.faces)));
    let overlapping = !witnesses.is_empty();
    OverlapReport { overlapping, is_net: !overlapping, eps_area, witnesses }
}

/// Planar model of the two cut banks at `a2`: with `a2` at the origin,
/// `a3 = (len23, 0)` and `a1` at angle `alpha` above the x-axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZModelInstance {
    pub alpha: f64,
    pub len12: f64,
    pub len23: f64,
    pub omega1: f64,
    pub omega2: f64,
}

impl ZModelInstance {
    pub fn symmetric(alpha: f64, len12: f64, len23: f64, omega: f64) -> Self {
        ZModelInstance { alpha, len12, len23, omega1: omega, omega2: omega }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZModelOutcome {
    pub overlapping: bool,
    /// Where the moved copy of `a2 a3` meets the line through `a2 a3`.
    pub crossing_offset: f64,
    pub a2_moved: [f64; 2],
    pub a3_moved: [f64; 2],
}

/// Turn `a2 a3` clockwise by `omega2` about `a2`, then the rigid path
/// `a1 a2 a3'` clockwise by `omega1` about `a1`; report whether the moved
/// edge crosses the open original edge.
pub fn z_overlap_model(m: &ZModelInstance) -> ZModelOutcome {
    let a1 = Vec2::new(m.alpha.cos(), m.alpha.sin()) * m.len12;
    let a2 = Vec2::zeros();
    let a3 = Vec2::new(m.len23, 0.0);
    let a3p = rotate_about(a3, a2, -m.omega2);
    let b2 = rotate_about(a2, a1, -m.omega1);
    let b3 = rotate_about(a3p, a1, -m.omega1);
    let dy = b3.y - b2.y;
    let tol = 1e-12 * m.len23.max(m.len12);
    let (overlapping, offset) = if dy.abs() <= tol {
        (false, 0.0)
    } else {
        let t = -b2.y / dy;
        let x = b2.x + t * (b3.x - b2.x);
        let within = (-1e-12..=1.0 + 1e-12).contains(&t);
        (within && x > tol && x < m.len23 - tol, x)
    };
    ZModelOutcome { overlapping, crossing_offset: offset, a2_moved: [b2.x, b2.y], a3_moved: [b3.x, b3.y] }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZModelError {
    #[error("angle must lie in (0, 60] degrees, got {0:.6} deg")]
    AngleOutOfRange(f64),
    #[error("side lengths must be positive with len12 <= len23")]
    BadLengths,
    #[error("the model does not switch from overlap to clearance on the search interval")]
    NoTransition,
}

pub const CRITICAL_OMEGA_TOL: f64 = 1e-4;

/// Smallest equal curvature at `a1` and `a2` that swings the banks clear,
/// by bisection over `(0, 90 deg]`.
pub fn critical_omega(alpha: f64, len12: f64, len23: f64, tol: f64) -> Result<f64, ZModelError> {
    if !(alpha > 0.0 && alpha <= std::f64::consts::FRAC_PI_3 + 1e-12) {
        return Err(ZModelError::AngleOutOfRange(alpha.to_degrees()));
    }
    if !(len12 > 0.0 && len23 > 0.0 && len12 <= len23) {
        return Err(ZModelError::BadLengths);
    }
    let overlaps = |w: f64| z_overlap_model(&ZModelInstance::symmetric(alpha, len12, len23, w)).overlapping;
    let (mut lo, mut hi) = (1e-9, FRAC_PI_2);
    if !overlaps(lo) || overlaps(hi) {
        return Err(ZModelError::NoTransition);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if overlaps(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Congruence key of a layout: rounded face point sets in the lexicographically
/// smallest frame over all boundary-edge alignments and reflections.
pub type CanonicalForm = Vec<Vec<(i64, i64)>>;

const CANON_GRID: f64 = 1e6;

pub fn canonical_form(u: &Unfolding) -> CanonicalForm {
    let mut segments: Vec<(Vec2, Vec2)> = Vec::new();
    for &[a, b] in &u.cut_edges {
        for (f, cycle) in u.faces.iter().enumerate() {
            let n = cycle.len();
            for i in 0..n {
                let (x, y) = (cycle[i], cycle[(i + 1) % n]);
                if (x == a && y == b) || (x == b && y == a) {
                    let (p, q) = (u.polygons[f][i], u.polygons[f][(i + 1) % n]);
                    segments.push((p, q));
                    segments.push((q, p));
                }
            }
        }
    }
    if segments.is_empty() {
        // A single face has no cut edges; align its first edge.
        let p = &u.polygons[u.root];
        segments.push((p[0], p[1]));
        segments.push((p[1], p[0]));
    }
    let mut best: Option<CanonicalForm> = None;
    for (p, q) in segments {
        let d = (q - p).normalize();
        for mirror in [1.0, -1.0] {
            let mut form: CanonicalForm = u
                .polygons
                .iter()
                .map(|poly| {
                    let mut pts: Vec<(i64, i64)> = poly
                        .iter()
                        .map(|&r| {
                            let w = r - p;
                            let x = w.dot(&d);
                            let y = mirror * cross2(d, w);
                            ((x * CANON_GRID).round() as i64, (y * CANON_GRID).round() as i64)
                        })
                        .collect();
                    pts.sort_unstable();
                    pts
                })
                .collect();
            form.sort_unstable();
            if best.as_ref().is_none_or(|b| form < *b) {
                best = Some(form);
            }
        }
    }
    best.expect("at least one alignment")
}

/// Tallies over every spanning-tree unfolding of a solid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub trees: usize,
    pub nets: usize,
    pub overlapping: usize,
    /// Sizes of the congruence classes formed by the nets, largest first.
    pub class_sizes: Vec<usize>,
}

impl Census {
    pub fn classes(&self) -> usize {
        self.class_sizes.len()
    }
}

pub fn unfolding_census(p: &LiftedPolyhedron, limit: Option<usize>) -> Result<Census, UnfoldError> {
    let trees = enumerate_spanning_trees(p.graph(), limit)?;
    let mut classes: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
    let mut overlapping = 0;
    for t in &trees {
        let u = unfold(p, t, None)?;
        if detect_overlap(&u).overlapping {
            overlapping += 1;
        } else {
            *classes.entry(canonical_form(&u)).or_default() += 1;
        }
    }
    let mut class_sizes: Vec<usize> = classes.into_values().collect();
    class_sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Census { trees: trees.len(), nets: trees.len() - overlapping, overlapping, class_sizes })
}

pub fn count_incongruent_unfoldings(p: &LiftedPolyhedron, limit: Option<usize>) -> Result<usize, UnfoldError> {
    let c = unfolding_census(p, limit)?;
    if c.overlapping > 0 {
        return Err(UnfoldError::OverlapPresent(c.overlapping));
    }
    Ok(c.classes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::build_cut_tree;
    use crate::fixtures;
    use approx::assert_relative_eq;

    fn rad(x: f64) -> f64 {
        x.to_radians()
    }

    #[test]
    fn cube_cross_layout() {
        let p = fixtures::unit_cube();
        let g = p.graph();
        // All verticals plus a path round the top: each side hangs off the
        // bottom and the top hangs off the side at 7-4.
        let t = CutTree::new(g, [(4, 5), (5, 6), (6, 7), (0, 4), (1, 5), (2, 6), (3, 7)], None).unwrap();
        let u = unfold(&p, &t, None).unwrap();
        assert_eq!(u.root, 0);
        assert_eq!(u.polygons.len(), 6);
        let r = layout_residuals(&p, &u);
        assert!(r.max_length_error <= 1e-12 && r.max_seam_gap <= 1e-12);
        assert_relative_eq!(u.placed_area(), 6.0, epsilon = 1e-12);
        for poly in &u.polygons {
            assert_relative_eq!(signed_area(poly), 1.0, epsilon = 1e-12);
        }
        assert!(detect_overlap(&u).is_net);
    }

    #[test]
    fn rejects_non_trees() {
        let p = fixtures::unit_cube();
        let g = p.graph().clone();
        let t = enumerate_spanning_trees(&g, None).unwrap().remove(0);
        assert!(matches!(unfold(&p, &t, Some(99)), Err(UnfoldError::NoSuchFace(99))));
        let bogus: CutTree = serde_json::from_str(r#"{"edges":[[0,1],[1,2]],"z_path":null}"#).unwrap();
        assert!(matches!(unfold(&p, &bogus, None), Err(UnfoldError::NotSpanningTree(_))));
    }

    #[test]
    fn unit_cube_census() {
        let c = unfolding_census(&fixtures::unit_cube(), None).unwrap();
        assert_eq!(c.trees, 384);
        assert_eq!(c.nets, 384);
        assert_eq!(c.classes(), 11);
        assert_eq!(c.class_sizes.iter().sum::<usize>(), 384);
    }

    #[test]
    fn regular_tetrahedron_census() {
        let p = fixtures::regular_tetrahedron();
        assert_eq!(count_incongruent_unfoldings(&p, None).unwrap(), 2);
        let c = unfolding_census(&p, None).unwrap();
        assert_eq!(c.class_sizes, vec![12, 4]);
    }

    #[test]
    fn diamond_frustum_z_cut_overlaps_next_to_a2a3() {
        let p = fixtures::diamond_frustum();
        let g = p.graph();
        // a2 = 3 (sharp top corner), a1 = 0, a3 = 1, a4 = 5 across 3-1.
        let t = build_cut_tree(g, [0, 3, 1, 5], None).unwrap();
        let u = unfold(&p, &t, None).unwrap();
        let r = detect_overlap(&u);
        assert!(r.overlapping);
        let top = 1;
        let across = g.left_face(3, 1).unwrap();
        let w = &r.witnesses[0];
        assert!(w.faces.contains(&top) || w.faces.contains(&across), "{:?}", w.faces);
        assert!(w.area > r.eps_area && w.depth > 0.0);
    }

    #[test]
    fn overlap_report_is_order_symmetric() {
        let p = fixtures::diamond_frustum();
        let t = build_cut_tree(p.graph(), [0, 3, 1, 5], None).unwrap();
        let u = unfold(&p, &t, None).unwrap();
        let mut v = u.clone();
        v.polygons.reverse();
        v.faces.reverse();
        let (a, b) = (detect_overlap(&u), detect_overlap(&v));
        assert_eq!(a.witnesses.len(), b.witnesses.len());
        let nf = u.polygons.len() - 1;
        for (x, y) in a.witnesses.iter().zip(&b.witnesses) {
            let mut flipped = [nf - y.faces[1], nf - y.faces[0]];
            flipped.sort_unstable();
            assert_eq!(x.faces, flipped);
            assert_relative_eq!(x.area, y.area, epsilon = 1e-12);
        }
    }

    #[test]
    fn root_choice_does_not_change_the_shape() {
        let p = fixtures::icosahedron();
        let t = build_cut_tree(p.graph(), [6, 8, 5, 11], None).unwrap();
        let a = canonical_form(&unfold(&p, &t, Some(0)).unwrap());
        for root in 1..p.graph().face_count() {
            assert_eq!(canonical_form(&unfold(&p, &t, Some(root)).unwrap()), a);
        }
    }

    #[test]
    fn equilateral_model_values() {
        let m = |w: f64| z_overlap_model(&ZModelInstance::symmetric(rad(60.0), 1.0, 1.0, rad(w)));
        let flat = m(0.0);
        assert!(!flat.overlapping);
        assert_eq!(flat.crossing_offset, 0.0);
        assert!(m(10.0).overlapping);
        assert!(m(10.0).crossing_offset > 0.1);
        assert!(m(20.0).crossing_offset.abs() < 1e-9);
        assert!(!m(25.0).overlapping);
        assert!(m(25.0).crossing_offset < 0.0);
    }

    #[test]
    fn model_offsets_match_closed_form() {
        // Independent construction: compose the two rotations as complex
        // multiplications and intersect with y = 0.
        let (alpha, l12, l23, w1, w2) = (rad(50.0), 0.8, 1.3, rad(7.0), rad(11.0));
        let out = z_overlap_model(&ZModelInstance { alpha, len12: l12, len23: l23, omega1: w1, omega2: w2 });
        let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
        let cis = |t: f64| (t.cos(), t.sin());
        let a1 = (l12 * alpha.cos(), l12 * alpha.sin());
        let a3p = mul((l23, 0.0), cis(-w2));
        let mv = |z: (f64, f64)| {
            let r = mul((z.0 - a1.0, z.1 - a1.1), cis(-w1));
            (r.0 + a1.0, r.1 + a1.1)
        };
        let (b2, b3) = (mv((0.0, 0.0)), mv(a3p));
        let x = b2.0 - b2.1 * (b3.0 - b2.0) / (b3.1 - b2.1);
        assert_relative_eq!(out.crossing_offset, x, epsilon = 1e-12);
    }

    #[test]
    fn critical_omega_values() {
        let eq = critical_omega(rad(60.0), 1.0, 1.0, CRITICAL_OMEGA_TOL).unwrap();
        assert!((eq.to_degrees() - 20.0).abs() < 0.05);
        let forty = critical_omega(rad(40.0), 1.0, 1.0, CRITICAL_OMEGA_TOL).unwrap();
        assert!(forty > eq);
        let thirty = critical_omega(rad(30.0), 1.0, 1.0, CRITICAL_OMEGA_TOL).unwrap();
        let fifty = critical_omega(rad(50.0), 1.0, 1.0, CRITICAL_OMEGA_TOL).unwrap();
        assert!(thirty >= fifty && fifty >= eq);
        assert!(matches!(critical_omega(rad(70.0), 1.0, 1.0, 1e-4), Err(ZModelError::AngleOutOfRange(_))));
        assert_eq!(critical_omega(rad(50.0), 2.0, 1.0, 1e-4), Err(ZModelError::BadLengths));
    }
}
