//! Combinatorial polyhedra: validated face lattices, duals, spanning trees
//! and cut-trees.
//!
//! A [`PolyhedralGraph`] is given by its faces, each a vertex cycle listed
//! counter-clockwise as seen from outside the solid. Coherent orientation
//! plus Euler's formula stand in for a planarity test.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type FaceId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("face {face} references vertex {vertex}, but only {vertex_count} vertices exist")]
    VertexOutOfRange { face: FaceId, vertex: VertexId, vertex_count: usize },
    #[error("face {face} is degenerate: {reason}")]
    DegenerateFace { face: FaceId, reason: String },
    #[error("edge {from}->{to} is not traversed coherently: {reason}")]
    NonCoherentOrientation { from: VertexId, to: VertexId, reason: String },
    #[error("Euler characteristic V - E + F = {chi} (V={v}, E={e}, F={f}), expected 2")]
    EulerViolation { v: usize, e: usize, f: usize, chi: i64 },
    #[error("vertex {0} is not a disk: its incident faces do not form one cycle")]
    NonManifoldVertex(VertexId),
    #[error("graph is not 3-connected: {0}")]
    NotThreeConnected(String),
    #[error("{0}-{1} is not an edge of the graph")]
    NotAnEdge(VertexId, VertexId),
    #[error("not a spanning tree: {0}")]
    NotSpanningTree(String),
    #[error("Z-path constraint violated: {0}")]
    ZViolation(String),
    #[error("Z-path cannot be completed to a cut-tree: {0}")]
    InfeasibleZ(String),
    #[error("spanning-tree count overflows 128-bit integers")]
    Overflow,
    #[error("more than {0} spanning trees")]
    LimitExceeded(usize),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

/// The combinatorial type of a convex polyhedron.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralGraph {
    vertex_count: usize,
    faces: Vec<Vec<VertexId>>,
    edges: Vec<[VertexId; 2]>,
    edge_lookup: HashMap<(VertexId, VertexId), EdgeId>,
    /// For edge `[u, v]` (u < v): the face traversing `u -> v`, then the one
    /// traversing `v -> u`.
    edge_faces: Vec<[FaceId; 2]>,
    neighbors: Vec<Vec<VertexId>>,
}

/// Validate a raw face list and build the derived edge structure.
pub fn validate_graph(vertex_count: usize, faces: Vec<Vec<VertexId>>) -> Result<PolyhedralGraph, GraphError> {
    for (fi, face) in faces.iter().enumerate() {
        if face.len() < 3 {
            return Err(GraphError::DegenerateFace { face: fi, reason: format!("{} vertices", face.len()) });
        }
        for &v in face {
            if v >= vertex_count {
                return Err(GraphError::VertexOutOfRange { face: fi, vertex: v, vertex_count });
            }
        }
        let mut sorted = face.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::DegenerateFace { face: fi, reason: "repeated vertex".into() });
        }
    }

    let mut directed: HashMap<(VertexId, VertexId), FaceId> = HashMap::new();
    for (fi, face) in faces.iter().enumerate() {
        let n = face.len();
        for i in 0..n {
            let (u, v) = (face[i], face[(i + 1) % n]);
            if let Some(other) = directed.insert((u, v), fi) {
                return Err(GraphError::NonCoherentOrientation {
                    from: u,
                    to: v,
                    reason: format!("traversed in the same direction by faces {other} and {fi}"),
                });
            }
        }
    }
    let mut edges: Vec<[VertexId; 2]> = Vec::new();
    for &(u, v) in directed.keys() {
        if !directed.contains_key(&(v, u)) {
            return Err(GraphError::NonCoherentOrientation { from: u, to: v, reason: "no face traverses the reverse direction".into() });
        }
        if u < v {
            edges.push([u, v]);
        }
    }
    edges.sort_unstable();

    let (v, e, f) = (vertex_count, edges.len(), faces.len());
    let chi = v as i64 - e as i64 + f as i64;
    if chi != 2 {
        return Err(GraphError::EulerViolation { v, e, f, chi });
    }

    let mut edge_lookup = HashMap::with_capacity(2 * e);
    let mut edge_faces = Vec::with_capacity(e);
    let mut neighbors = vec![Vec::new(); v];
    for (id, &[a, b]) in edges.iter().enumerate() {
        edge_lookup.insert((a, b), id);
        edge_lookup.insert((b, a), id);
        edge_faces.push([directed[&(a, b)], directed[&(b, a)]]);
        neighbors[a].push(b);
        neighbors[b].push(a);
    }
    for list in &mut neighbors {
        list.sort_unstable();
    }

    let g = PolyhedralGraph { vertex_count, faces, edges, edge_lookup, edge_faces, neighbors };
    g.check_vertex_links()?;
    g.check_three_connected()?;
    Ok(g)
}

impl PolyhedralGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn faces(&self) -> &[Vec<VertexId>] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &[VertexId] {
        &self.faces[f]
    }

    /// Edges as sorted vertex pairs, in lexicographic order.
    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edge_lookup.get(&(u, v)).copied()
    }

    /// Faces on either side of an edge: first the one traversing it from
    /// its smaller to its larger endpoint.
    pub fn edge_faces(&self, e: EdgeId) -> [FaceId; 2] {
        self.edge_faces[e]
    }

    /// The face whose boundary runs `u -> v`.
    pub fn left_face(&self, u: VertexId, v: VertexId) -> Option<FaceId> {
        let e = self.edge_id(u, v)?;
        let [fwd, back] = self.edge_faces[e];
        Some(if u < v { fwd } else { back })
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors[v].len()
    }

    pub fn is_triangulated(&self) -> bool {
        self.faces.iter().all(|f| f.len() == 3)
    }

    pub fn face_position(&self, f: FaceId, v: VertexId) -> Option<usize> {
        self.faces[f].iter().position(|&w| w == v)
    }

    /// Faces containing `v`, in increasing index order.
    pub fn faces_at(&self, v: VertexId) -> Vec<FaceId> {
        (0..self.faces.len()).filter(|&f| self.faces[f].contains(&v)).collect()
    }

    fn check_vertex_links(&self) -> Result<(), GraphError> {
        for v in 0..self.vertex_count {
            let incident = self.faces_at(v);
            let Some(&start) = incident.first() else {
                return Err(GraphError::NotThreeConnected(format!("vertex {v} lies on no face")));
            };
            // Walk around v: from face f with u -> v, cross edge (u, v).
            let mut f = start;
            let mut seen = 0;
            loop {
                let face = &self.faces[f];
                let n = face.len();
                let i = face.iter().position(|&w| w == v).expect("v on face");
                let u = face[(i + n - 1) % n];
                f = self.left_face(v, u).expect("coherent edge");
                seen += 1;
                if f == start || seen > incident.len() {
                    break;
                }
            }
            if seen != incident.len() || f != start {
                return Err(GraphError::NonManifoldVertex(v));
            }
        }
        Ok(())
    }

    fn connected_without(&self, removed: &[VertexId]) -> bool {
        let alive = |v: VertexId| !removed.contains(&v);
        let Some(start) = (0..self.vertex_count).find(|&v| alive(v)) else {
            return true;
        };
        let mut seen = vec![false; self.vertex_count];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.neighbors[u] {
                if alive(w) && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count - removed.len()
    }

    fn check_three_connected(&self) -> Result<(), GraphError> {
        if self.vertex_count < 4 {
            return Err(GraphError::NotThreeConnected(format!("only {} vertices", self.vertex_count)));
        }
        if !self.connected_without(&[]) {
            return Err(GraphError::NotThreeConnected("graph is disconnected".into()));
        }
        for v in 0..self.vertex_count {
            if self.degree(v) < 3 {
                return Err(GraphError::NotThreeConnected(format!("vertex {v} has degree {}", self.degree(v))));
            }
        }
        for a in 0..self.vertex_count {
            for b in a + 1..self.vertex_count {
                if !self.connected_without(&[a, b]) {
                    return Err(GraphError::NotThreeConnected(format!("removing {{{a}, {b}}} disconnects the graph")));
                }
            }
        }
        Ok(())
    }
}

/// One dual edge per primal edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualEdge {
    pub primal: EdgeId,
    /// `faces[0]` traverses the primal edge from its smaller endpoint.
    pub faces: [FaceId; 2],
    /// Index of the primal edge's first vertex within each face cycle.
    pub positions: [usize; 2],
}

#[derive(Debug, Clone)]
pub struct DualGraph {
    pub node_count: usize,
    pub edges: Vec<DualEdge>,
    pub adjacency: Vec<Vec<(FaceId, EdgeId)>>,
}

impl DualGraph {
    pub fn degree(&self, f: FaceId) -> usize {
        self.adjacency[f].len()
    }
}

pub fn build_dual(g: &PolyhedralGraph) -> DualGraph {
    let mut adjacency = vec![Vec::new(); g.face_count()];
    let mut edges = Vec::with_capacity(g.edge_count());
    for (e, &[u, v]) in g.edges().iter().enumerate() {
        let [f0, f1] = g.edge_faces(e);
        let p0 = g.face_position(f0, u).expect("edge on face");
        let p1 = g.face_position(f1, v).expect("edge on face");
        edges.push(DualEdge { primal: e, faces: [f0, f1], positions: [p0, p1] });
        adjacency[f0].push((f1, e));
        adjacency[f1].push((f0, e));
    }
    DualGraph { node_count: g.face_count(), edges, adjacency }
}

/// Outcome of the face-pair inspection that chooses the construction route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FacePairClass {
    Disjoint { base: FaceId, host: FaceId },
    SharedVertex { base: FaceId, host: FaceId, shared: VertexId },
    TetrahedronOnly,
}

impl FacePairClass {
    pub fn tag(&self) -> &'static str {
        match self {
            FacePairClass::Disjoint { .. } => "disjoint",
            FacePairClass::SharedVertex { .. } => "shared_vertex",
            FacePairClass::TetrahedronOnly => "tetrahedron",
        }
    }
}

fn shared_vertices(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    a.iter().copied().filter(|v| b.contains(v)).collect()
}

/// Face pairs `(base, host)` sharing no vertex, best base first: larger
/// base, then lower indices.
pub fn disjoint_face_pairs(g: &PolyhedralGraph) -> Vec<(FaceId, FaceId)> {
    ordered_pairs(g, |a, b| shared_vertices(a, b).is_empty())
}

/// Face pairs `(base, host)` sharing exactly one vertex, in the same order.
pub fn single_vertex_face_pairs(g: &PolyhedralGraph) -> Vec<(FaceId, FaceId, VertexId)> {
    ordered_pairs(g, |a, b| shared_vertices(a, b).len() == 1)
        .into_iter()
        .map(|(b, h)| (b, h, shared_vertices(g.face(b), g.face(h))[0]))
        .collect()
}

fn ordered_pairs(g: &PolyhedralGraph, keep: impl Fn(&[VertexId], &[VertexId]) -> bool) -> Vec<(FaceId, FaceId)> {
    let mut bases: Vec<FaceId> = (0..g.face_count()).collect();
    bases.sort_by_key(|&f| (std::cmp::Reverse(g.face(f).len()), f));
    let mut out = Vec::new();
    for &b in &bases {
        for h in 0..g.face_count() {
            if h != b && keep(g.face(b), g.face(h)) {
                out.push((b, h));
            }
        }
    }
    out
}

pub fn classify_face_pairs(g: &PolyhedralGraph) -> Result<FacePairClass, GraphError> {
    if let Some(&(base, host)) = disjoint_face_pairs(g).first() {
        return Ok(FacePairClass::Disjoint { base, host });
    }
    if let Some(&(base, host, shared)) = single_vertex_face_pairs(g).first() {
        return Ok(FacePairClass::SharedVertex { base, host, shared });
    }
    if g.vertex_count() == 4 && g.face_count() == 4 && g.is_triangulated() {
        Ok(FacePairClass::TetrahedronOnly)
    } else {
        Err(GraphError::InternalInvariantViolation("every face pair shares an edge, yet the graph is not a tetrahedron".into()))
    }
}

/// Exact spanning-tree count via the matrix-tree theorem, using Bareiss
/// fraction-free elimination on the reduced Laplacian.
pub fn count_spanning_trees(g: &PolyhedralGraph) -> Result<u128, GraphError> {
    let n = g.vertex_count() - 1;
    if n == 0 {
        return Ok(1);
    }
    let mut m = vec![vec![0i128; n]; n];
    for (v, row) in m.iter_mut().enumerate() {
        row[v] = g.degree(v) as i128;
        for &w in g.neighbors(v) {
            if w < n {
                row[w] -= 1;
            }
        }
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Ok(0);
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k]).ok_or(GraphError::Overflow)?;
                let b = m[i][k].checked_mul(m[k][j]).ok_or(GraphError::Overflow)?;
                m[i][j] = a.checked_sub(b).ok_or(GraphError::Overflow)? / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    let det = sign * m[n - 1][n - 1];
    u128::try_from(det).map_err(|_| GraphError::InternalInvariantViolation(format!("negative determinant {det}")))
}

/// A spanning tree of the 1-skeleton, with an optional distinguished
/// `a1 a2 a3 a4` path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CutTree {
    edges: Vec<[VertexId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    z_path: Option<[VertexId; 4]>,
}

impl CutTree {
    /// Validate `edges` as a spanning tree of `g`, and check the Z-path
    /// constraint when one is given.
    pub fn new(
        g: &PolyhedralGraph,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
        z_path: Option<[VertexId; 4]>,
    ) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if g.edge_id(u, v).is_none() {
                return Err(GraphError::NotAnEdge(u, v));
            }
            list.push([u.min(v), u.max(v)]);
        }
        list.sort_unstable();
        list.dedup();
        let n = g.vertex_count();
        if list.len() != n - 1 {
            return Err(GraphError::NotSpanningTree(format!("{} edges, expected {}", list.len(), n - 1)));
        }
        let mut uf = UnionFind::new(n);
        for &[u, v] in &list {
            if !uf.union(u, v) {
                return Err(GraphError::NotSpanningTree(format!("edge {u}-{v} closes a cycle")));
            }
        }
        let tree = CutTree { edges: list, z_path };
        if let Some(z) = z_path {
            tree.check_z(z)?;
        }
        Ok(tree)
    }

    fn check_z(&self, [a1, a2, a3, a4]: [VertexId; 4]) -> Result<(), GraphError> {
        for (u, v) in [(a1, a2), (a2, a3), (a3, a4)] {
            if !self.contains(u, v) {
                return Err(GraphError::ZViolation(format!("tree lacks Z edge {u}-{v}")));
            }
        }
        let at = |x: VertexId| self.edges.iter().filter(|e| e.contains(&x)).count();
        if at(a1) != 1 || at(a2) != 2 {
            return Err(GraphError::ZViolation(format!("{} tree edges at a1={a1} and {} at a2={a2}, expected 1 and 2", at(a1), at(a2))));
        }
        Ok(())
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn z_path(&self) -> Option<[VertexId; 4]> {
        self.z_path
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.binary_search(&[u.min(v), u.max(v)]).is_ok()
    }

    /// Edges of `g` not in the tree.
    pub fn uncut_edges(&self, g: &PolyhedralGraph) -> Vec<EdgeId> {
        (0..g.edge_count()).filter(|&e| !self.contains(g.edges()[e][0], g.edges()[e][1])).collect()
    }

    /// The uncut complement must be a spanning tree of the dual.
    pub fn check_dual_complement(&self, g: &PolyhedralGraph) -> Result<(), GraphError> {
        let uncut = self.uncut_edges(g);
        let f = g.face_count();
        if uncut.len() != f - 1 {
            return Err(GraphError::NotSpanningTree(format!("{} uncut edges, expected {}", uncut.len(), f - 1)));
        }
        let mut uf = UnionFind::new(f);
        for e in uncut {
            let [a, b] = g.edge_faces(e);
            if !uf.union(a, b) {
                return Err(GraphError::NotSpanningTree("uncut edges close a dual cycle".into()));
            }
        }
        Ok(())
    }
}

/// Build a cut-tree through the path `a1 a2 a3 a4`, grown breadth-first
/// from `a3` and `a4` without touching `a1` or `a2`. With a seed the
/// neighbor order is shuffled reproducibly; without one it is ascending.
pub fn build_cut_tree(g: &PolyhedralGraph, z: [VertexId; 4], seed: Option<u64>) -> Result<CutTree, GraphError> {
    let [a1, a2, a3, a4] = z;
    for (i, &x) in z.iter().enumerate() {
        if x >= g.vertex_count() {
            return Err(GraphError::InfeasibleZ(format!("vertex {x} out of range")));
        }
        if z[..i].contains(&x) {
            return Err(GraphError::InfeasibleZ(format!("vertex {x} repeated")));
        }
    }
    for (u, v) in [(a1, a2), (a2, a3), (a3, a4)] {
        if g.edge_id(u, v).is_none() {
            return Err(GraphError::NotAnEdge(u, v));
        }
    }
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut edges = vec![(a1, a2), (a2, a3), (a3, a4)];
    let mut seen = vec![false; g.vertex_count()];
    for x in z {
        seen[x] = true;
    }
    let mut queue = VecDeque::from([a3, a4]);
    while let Some(u) = queue.pop_front() {
        let mut next: Vec<VertexId> = g.neighbors(u).iter().copied().filter(|&w| w != a1 && w != a2).collect();
        if let Some(rng) = rng.as_mut() {
            next.shuffle(rng);
        }
        for w in next {
            if !seen[w] {
                seen[w] = true;
                edges.push((u, w));
                queue.push_back(w);
            }
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(GraphError::InfeasibleZ(format!("vertex {v} unreachable without a1, a2")));
    }
    CutTree::new(g, edges, Some(z))
}

/// Depth-first enumeration of all spanning trees in lexicographic edge
/// order (include before exclude), pruned by acyclicity and connectivity.
pub struct SpanningTrees<'a> {
    g: &'a PolyhedralGraph,
    chosen: Vec<bool>,
    picked: usize,
    /// Per decided edge: 0 = untried, 1 = included, 2 = excluded, 3 = emitted.
    stack: Vec<u8>,
}

impl<'a> SpanningTrees<'a> {
    pub fn new(g: &'a PolyhedralGraph) -> Self {
        SpanningTrees { g, chosen: vec![false; g.edge_count()], picked: 0, stack: vec![0] }
    }

    fn can_include(&self, i: usize) -> bool {
        let mut uf = UnionFind::new(self.g.vertex_count());
        for (e, &c) in self.chosen[..i].iter().enumerate() {
            if c {
                let [u, v] = self.g.edges()[e];
                uf.union(u, v);
            }
        }
        let [u, v] = self.g.edges()[i];
        uf.find(u) != uf.find(v)
    }

    fn can_exclude(&self, i: usize) -> bool {
        let mut uf = UnionFind::new(self.g.vertex_count());
        let mut parts = self.g.vertex_count();
        for (e, &[u, v]) in self.g.edges().iter().enumerate() {
            let usable = if e < i { self.chosen[e] } else { e > i };
            if usable && uf.union(u, v) {
                parts -= 1;
            }
        }
        parts == 1
    }

    fn current(&self) -> CutTree {
        let edges = self.chosen.iter().enumerate().filter(|(_, &c)| c).map(|(e, _)| self.g.edges()[e]).collect();
        CutTree { edges, z_path: None }
    }
}

impl Iterator for SpanningTrees<'_> {
    type Item = CutTree;

    fn next(&mut self) -> Option<CutTree> {
        let target = self.g.vertex_count() - 1;
        loop {
            let depth = self.stack.len().checked_sub(1)?;
            if self.stack[depth] == 0 && self.picked == target {
                // Complete tree: every later edge is implicitly excluded.
                self.stack[depth] = 3;
                return Some(self.current());
            }
            if depth == self.g.edge_count() {
                self.stack.pop();
                continue;
            }
            match self.stack[depth] {
                0 => {
                    self.stack[depth] = 1;
                    if self.can_include(depth) {
                        self.chosen[depth] = true;
                        self.picked += 1;
                        self.stack.push(0);
                    }
                }
                1 => {
                    self.stack[depth] = 2;
                    if self.chosen[depth] {
                        self.chosen[depth] = false;
                        self.picked -= 1;
                    }
                    if self.can_exclude(depth) {
                        self.stack.push(0);
                    }
                }
                _ => {
                    self.stack.pop();
                }
            }
        }
    }
}

/// Collect all spanning trees, failing once more than `limit` are found.
pub fn enumerate_spanning_trees(g: &PolyhedralGraph, limit: Option<usize>) -> Result<Vec<CutTree>, GraphError> {
    let mut out = Vec::new();
    for tree in SpanningTrees::new(g) {
        if limit.is_some_and(|l| out.len() >= l) {
            return Err(GraphError::LimitExceeded(limit.unwrap_or_default()));
        }
        out.push(tree);
    }
    Ok(out)
}

/// Uniformly random spanning tree (Wilson's loop-erased random walks).
pub fn random_spanning_tree<R: Rng>(g: &PolyhedralGraph, rng: &mut R) -> CutTree {
    let n = g.vertex_count();
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    in_tree[0] = true;
    for start in 1..n {
        let mut u = start;
        while !in_tree[u] {
            let nbrs = g.neighbors(u);
            next[u] = nbrs[rng.gen_range(0..nbrs.len())];
            u = next[u];
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next[u];
        }
    }
    let mut edges: Vec<[VertexId; 2]> = (1..n).map(|v| [v.min(next[v]), v.max(next[v])]).collect();
    edges.sort_unstable();
    CutTree { edges, z_path: None }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
