//! Graph documents, mesh and layout exporters, certificate serialization.
//!
//! Every number written by this module is rounded to nine significant
//! digits, so identical inputs give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::combinatorics::{validate_graph, PolyhedralGraph};
use crate::geometry::Vec3;
use crate::lifting::{verify_convex_polyhedron, vertex_curvature, LiftedPolyhedron};
use crate::pipeline::{OverlapCertificate, PipelineError};
use crate::unfolding::{OverlapReport, Unfolding};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl IoError {
    fn validation(field: impl Into<String>, message: impl ToString) -> Self {
        IoError::Validation { field: field.into(), message: message.to_string() }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::Io { path: path.to_path_buf(), source }
    }
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexSpec {
    Count(usize),
    Labels(Vec<Label>),
}

impl VertexSpec {
    pub fn count(&self) -> usize {
        match self {
            VertexSpec::Count(n) => *n,
            VertexSpec::Labels(l) => l.len(),
        }
    }
}

/// On-disk graph. Face entries index vertices by position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: VertexSpec,
    pub faces: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords3d: Option<Vec<[f64; 3]>>,
}

impl GraphDocument {
    pub fn from_graph(g: &PolyhedralGraph, coords: Option<&[Vec3]>) -> Self {
        GraphDocument {
            vertices: VertexSpec::Count(g.vertex_count()),
            faces: g.faces().to_vec(),
            coords3d: coords.map(|c| c.iter().map(|p| [round9(p.x), round9(p.y), round9(p.z)]).collect()),
        }
    }
}

/// A validated graph document.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: PolyhedralGraph,
    pub labels: Option<Vec<Label>>,
    /// Present when the document carries coordinates.
    pub solid: Option<LiftedPolyhedron>,
}

pub fn parse_graph(text: &str) -> Result<LoadedGraph, IoError> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    load_document(doc)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<LoadedGraph, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
    parse_graph(&text)
}

pub fn load_document(doc: GraphDocument) -> Result<LoadedGraph, IoError> {
    let n = doc.vertices.count();
    for (f, cycle) in doc.faces.iter().enumerate() {
        if let Some(i) = cycle.iter().position(|&v| v >= n) {
            return Err(IoError::validation(format!("faces[{f}][{i}]"), format!("vertex {} out of range for {n} vertices", cycle[i])));
        }
    }
    let graph = validate_graph(n, doc.faces).map_err(|e| IoError::validation("faces", e))?;
    let solid = match doc.coords3d {
        None => None,
        Some(c) => {
            if c.len() != n {
                return Err(IoError::validation("coords3d", format!("{} triples for {n} vertices", c.len())));
            }
            if let Some(i) = c.iter().position(|p| p.iter().any(|x| !x.is_finite())) {
                return Err(IoError::validation(format!("coords3d[{i}]"), "non-finite coordinate"));
            }
            let coords = c.into_iter().map(Vec3::from).collect();
            let solid = LiftedPolyhedron::from_coords(graph.clone(), coords, None).map_err(|e| IoError::validation("coords3d", e))?;
            let report = verify_convex_polyhedron(&solid);
            if !report.passed {
                return Err(IoError::validation("coords3d", format!("not a convex realization: {}", report.failures.join("; "))));
            }
            Some(solid)
        }
    };
    let labels = match doc.vertices {
        VertexSpec::Count(_) => None,
        VertexSpec::Labels(l) => Some(l),
    };
    Ok(LoadedGraph { graph, labels, solid })
}

pub fn graph_json(g: &PolyhedralGraph, coords: Option<&[Vec3]>) -> String {
    to_json(&GraphDocument::from_graph(g, coords))
}

pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.8e}").parse().expect("formatted float")
}

fn num(x: f64) -> String {
    format!("{}", round9(x))
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round9(x))) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with floats at nine significant digits.
pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut v = serde_json::to_value(x).expect("serializable");
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

/// `v` records then one `f` record per face, 1-based, untriangulated.
pub fn obj_string(p: &LiftedPolyhedron) -> String {
    let mut s = String::new();
    for c in p.coords() {
        let _ = writeln!(s, "v {} {} {}", num(c.x), num(c.y), num(c.z));
    }
    for f in p.graph().faces() {
        let idx: Vec<String> = f.iter().map(|v| (v + 1).to_string()).collect();
        let _ = writeln!(s, "f {}", idx.join(" "));
    }
    s
}

/// Layout drawing with y pointing up. Cut edges are solid red, fold edges
/// dashed grey, and overlap regions translucent.
pub fn svg_string(u: &Unfolding, overlap: Option<&OverlapReport>) -> String {
    let pts = u.polygons.iter().flatten();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let m = 0.05 * span;
    let (w, h) = (x1 - x0 + 2.0 * m, y1 - y0 + 2.0 * m);
    let stroke = num(span / 400.0);
    let pt = |x: f64, y: f64| format!("{},{}", num(x), num(-y));
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#, num(x0 - m), num(-y1 - m), num(w), num(h));
    for (f, poly) in u.polygons.iter().enumerate() {
        let list: Vec<String> = poly.iter().map(|p| pt(p.x, p.y)).collect();
        let _ = writeln!(s, r##"<polygon class="face" data-face="{f}" points="{}" fill="#dde6f0" stroke="none"/>"##, list.join(" "));
    }
    for (f, poly) in u.polygons.iter().enumerate() {
        let cycle = &u.faces[f];
        for i in 0..poly.len() {
            let j = (i + 1) % poly.len();
            let (a, b) = (cycle[i], cycle[j]);
            let cut = u.cut_edges.contains(&[a.min(b), a.max(b)]);
            // Fold edges are shared by two polygons; draw them once.
            if !cut && a > b {
                continue;
            }
            let style = if cut {
                format!(r##"class="cut" stroke="#c0392b" stroke-width="{stroke}""##)
            } else {
                format!(
                    r##"class="fold" stroke="#7f8c8d" stroke-width="{stroke}" stroke-dasharray="{} {}""##,
                    num(4.0 * span / 400.0),
                    num(2.0 * span / 400.0)
                )
            };
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#,
                num(poly[i].x),
                num(-poly[i].y),
                num(poly[j].x),
                num(-poly[j].y)
            );
        }
    }
    if let Some(r) = overlap {
        for wit in &r.witnesses {
            let list: Vec<String> = wit.region.iter().map(|p| pt(p[0], p[1])).collect();
            let _ = writeln!(
                s,
                r##"<polygon class="overlap" data-faces="{} {}" points="{}" fill="#e74c3c" fill-opacity="0.5" stroke="none"/>"##,
                wit.faces[0],
                wit.faces[1],
                list.join(" ")
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Angle summary in degrees attached to a serialized certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub alpha: Option<f64>,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    pub curvatures: Vec<f64>,
}

pub fn degree_summary(cert: &OverlapCertificate) -> Result<DegreeSummary, PipelineError> {
    let p = cert.solid()?;
    let sel = cert.selection.as_ref();
    Ok(DegreeSummary {
        alpha: sel.map(|s| s.alpha.to_degrees()),
        omega1: sel.map(|s| s.omega1.to_degrees()),
        omega2: sel.map(|s| s.omega2.to_degrees()),
        curvatures: (0..p.graph().vertex_count()).map(|v| vertex_curvature(&p, v).to_degrees()).collect(),
    })
}

/// Certificate fields plus a `degrees` block.
pub fn certificate_json(cert: &OverlapCertificate) -> Result<String, PipelineError> {
    let mut v = serde_json::to_value(cert).expect("serializable");
    let deg = serde_json::to_value(degree_summary(cert)?).expect("serializable");
    v.as_object_mut().expect("object").insert("degrees".into(), deg);
    Ok(to_json(&v))
}

pub fn parse_certificate(text: &str) -> Result<OverlapCertificate, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub enum Bundle<'a> {
    Certificate(&'a OverlapCertificate),
    Unfolding { unfolding: &'a Unfolding, overlap: &'a OverlapReport },
    Solid(&'a LiftedPolyhedron),
}

fn write_file(dir: &Path, name: &str, body: &str, out: &mut Vec<PathBuf>) -> Result<(), IoError> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| IoError::io(&path, e))?;
    out.push(path);
    Ok(())
}

/// Writes the files for `bundle` into `dir`, creating it if needed, and
/// returns their paths.
pub fn write_artifacts(bundle: &Bundle<'_>, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>, IoError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| IoError::io(dir, e))?;
    let mut out = Vec::new();
    match bundle {
        Bundle::Certificate(cert) => {
            let p = cert.solid().map_err(|e| IoError::validation("certificate", e))?;
            let tree = crate::combinatorics::CutTree::new(p.graph(), cert.cut_tree.edges().iter().map(|&[u, v]| (u, v)), None)
                .map_err(|e| IoError::validation("cut_tree", e))?;
            let u = crate::unfolding::unfold(&p, &tree, Some(cert.base_face)).map_err(|e| IoError::validation("cut_tree", e))?;
            let json = certificate_json(cert).map_err(|e| IoError::validation("certificate", e))?;
            write_file(dir, "solid.obj", &obj_string(&p), &mut out)?;
            write_file(dir, "unfolding.svg", &svg_string(&u, Some(&cert.overlap)), &mut out)?;
            write_file(dir, "certificate.json", &json, &mut out)?;
        }
        Bundle::Unfolding { unfolding, overlap } => {
            write_file(dir, "unfolding.svg", &svg_string(unfolding, Some(overlap)), &mut out)?;
            write_file(dir, "overlap.json", &to_json(overlap), &mut out)?;
        }
        Bundle::Solid(p) => {
            write_file(dir, "solid.obj", &obj_string(p), &mut out)?;
            write_file(dir, "solid.json", &graph_json(p.graph(), Some(p.coords())), &mut out)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::SpanningTrees;
    use crate::fixtures;
    use crate::unfolding::{detect_overlap, unfold};

    fn data(name: &str) -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
    }

    #[test]
    fn bundled_cube_is_combinatorial() {
        let g = read_graph(data("cube.json")).unwrap();
        assert_eq!(g.graph.face_count(), 6);
        assert_eq!(g.graph.vertex_count(), 8);
        assert!(g.solid.is_none());
    }

    #[test]
    fn bundled_diamond_frustum_carries_a_convex_solid() {
        let g = read_graph(data("diamond_frustum.json")).unwrap();
        let s = g.solid.unwrap();
        assert_eq!(s.coords()[0], Vec3::new(-1.0, 0.0, 0.5));
        assert!(verify_convex_polyhedron(&s).passed);
    }

    #[test]
    fn out_of_range_vertex_names_the_field() {
        let err = parse_graph(r#"{"vertices": 4, "faces": [[0,1,2],[0,3,1],[1,3,2],[2,3,7]]}"#).unwrap_err();
        match err {
            IoError::Validation { field, .. } => assert_eq!(field, "faces[3][2]"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_graph("{\"vertices\": 4,\n \"faces\": [[0,1,2],}").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn labels_and_coordinate_count() {
        let doc = r#"{"vertices": ["a","b","c",7], "faces": [[0,1,2],[0,3,1],[1,3,2],[0,2,3]]}"#;
        let g = parse_graph(doc).unwrap();
        assert_eq!(g.labels.unwrap()[3], Label::Int(7));
        let bad = r#"{"vertices": 4, "faces": [[0,1,2],[0,3,1],[1,3,2],[0,2,3]], "coords3d": [[0,0,0]]}"#;
        assert!(matches!(parse_graph(bad), Err(IoError::Validation { field, .. }) if field == "coords3d"));
    }

    #[test]
    fn non_convex_coordinates_rejected() {
        let s = fixtures::unit_cube();
        let mut c = s.coords().to_vec();
        c[0] = Vec3::new(0.5, 0.5, 0.5);
        let text = graph_json(s.graph(), Some(&c));
        assert!(matches!(parse_graph(&text), Err(IoError::Validation { .. })));
    }

    #[test]
    fn graph_round_trip() {
        let s = fixtures::dodecahedron();
        let back = parse_graph(&graph_json(s.graph(), Some(s.coords()))).unwrap();
        assert_eq!(back.graph.faces(), s.graph().faces());
        let c = back.solid.unwrap();
        for (a, b) in c.coords().iter().zip(s.coords()) {
            assert!((a - b).norm() <= 1e-8);
        }
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(num(1.0 / 3.0), "0.333333333");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(123456789012.0), "123456789000");
        assert_eq!(num(2.0), "2");
    }

    #[test]
    fn obj_records() {
        let obj = obj_string(&fixtures::diamond_frustum());
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 8);
        let faces: Vec<&str> = obj.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(faces.len(), 6);
        assert!(faces.iter().all(|l| l.split_whitespace().count() == 5));
    }

    #[test]
    fn net_svg_has_no_overlap_layer() {
        let p = fixtures::unit_cube();
        let tree = SpanningTrees::new(p.graph()).next().unwrap();
        let u = unfold(&p, &tree, None).unwrap();
        let r = detect_overlap(&u);
        assert!(r.is_net);
        let svg = svg_string(&u, Some(&r));
        assert_eq!(svg.matches("<polygon").count(), 6);
        assert!(!svg.contains("overlap"));
        assert_eq!(svg.matches(r#"class="cut""#).count(), 2 * 7);
        assert_eq!(svg.matches(r#"class="fold""#).count(), 5);
    }

    #[test]
    fn certificate_artifacts_are_deterministic() {
        let cert = crate::pipeline::realize_with_overlap(&fixtures::cube_graph(), &Default::default()).unwrap();
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let fa = write_artifacts(&Bundle::Certificate(&cert), a.path()).unwrap();
        let fb = write_artifacts(&Bundle::Certificate(&cert), b.path()).unwrap();
        assert_eq!(fa.len(), 3);
        for (x, y) in fa.iter().zip(&fb) {
            assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
        }
        let obj = fs::read_to_string(&fa[0]).unwrap();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 8);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 6);
        let svg = fs::read_to_string(&fa[1]).unwrap();
        assert!(svg.contains(r#"class="overlap""#) && svg.contains(r#"fill-opacity="0.5""#));
        let text = fs::read_to_string(&fa[2]).unwrap();
        let back = parse_certificate(&text).unwrap();
        assert!(back.replay().unwrap().overlapping);
        let v: Value = serde_json::from_str(&text).unwrap();
        let alpha = v["degrees"]["alpha"].as_f64().unwrap();
        assert!(alpha > 0.0 && alpha <= 60.0 + 1e-9);
        assert_eq!(v["degrees"]["curvatures"].as_array().unwrap().len(), 8);
    }
}
