//! Named polyhedra used by tests, the CLI and the bundled data files.

use crate::combinatorics::{validate_graph, PolyhedralGraph};
use crate::geometry::Vec3;
use crate::lifting::LiftedPolyhedron;

/// Face cycles of the convex hull of `points` (assumed in convex position),
/// each counter-clockwise from outside. Coplanar hull facets are merged.
pub fn hull_faces(points: &[Vec3]) -> Vec<Vec<usize>> {
    let n = points.len();
    let scale = crate::geometry::diameter3(points).max(1e-300);
    let tol = 1e-9 * scale;
    let mut planes: Vec<(Vec3, f64)> = Vec::new();
    let mut faces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let normal = (points[j] - points[i]).cross(&(points[k] - points[i]));
                if normal.norm() < tol * scale {
                    continue;
                }
                let mut normal = normal.normalize();
                let side: Vec<f64> = points.iter().map(|p| (p - points[i]).dot(&normal)).collect();
                if side.iter().all(|&s| s <= tol) {
                } else if side.iter().all(|&s| s >= -tol) {
                    normal = -normal;
                } else {
                    continue;
                }
                let offset = normal.dot(&points[i]);
                if planes.iter().any(|(m, d)| (m - normal).norm() < 1e-9 && (d - offset).abs() < tol) {
                    continue;
                }
                planes.push((normal, offset));
                let on: Vec<usize> = (0..n).filter(|&v| (normal.dot(&points[v]) - offset).abs() < tol).collect();
                let center = on.iter().map(|&v| points[v]).sum::<Vec3>() / on.len() as f64;
                let u = (points[on[0]] - center).normalize();
                let w = normal.cross(&u);
                let mut ring: Vec<(f64, usize)> = on
                    .iter()
                    .map(|&v| {
                        let d = points[v] - center;
                        (d.dot(&w).atan2(d.dot(&u)), v)
                    })
                    .collect();
                ring.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut face: Vec<usize> = ring.into_iter().map(|(_, v)| v).collect();
                let start = face.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap_or(0);
                face.rotate_left(start);
                faces.push(face);
            }
        }
    }
    faces
}

fn solid(points: Vec<Vec3>) -> LiftedPolyhedron {
    let faces = hull_faces(&points);
    let g = validate_graph(points.len(), faces).expect("fixture hull is a valid polyhedron");
    LiftedPolyhedron::from_coords(g, points, None).expect("fixture coordinates")
}

fn solid_with_faces(points: Vec<Vec3>, faces: Vec<Vec<usize>>, base: Option<usize>) -> LiftedPolyhedron {
    let g = validate_graph(points.len(), faces).expect("fixture faces");
    LiftedPolyhedron::from_coords(g, points, base).expect("fixture coordinates")
}

pub fn cube_faces() -> Vec<Vec<usize>> {
    vec![vec![0, 3, 2, 1], vec![4, 5, 6, 7], vec![0, 1, 5, 4], vec![1, 2, 6, 5], vec![2, 3, 7, 6], vec![3, 0, 4, 7]]
}

/// Combinatorial cube: face 0 is the bottom, face 1 the top.
pub fn cube_graph() -> PolyhedralGraph {
    validate_graph(8, cube_faces()).expect("cube")
}

/// Axis-aligned unit cube `[0, 1]^3`, labelled to match [`cube_graph`].
pub fn unit_cube() -> LiftedPolyhedron {
    let pts = [
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 1.0],
        [1.0, 1.0, 1.0],
        [0.0, 1.0, 1.0],
    ];
    solid_with_faces(pts.iter().map(|p| Vec3::from(*p)).collect(), cube_faces(), Some(0))
}

/// The combinatorial cube squeezed into two diamonds joined by congruent
/// trapezoids. Face 0 is the bottom diamond, face 1 the top one.
pub fn diamond_frustum() -> LiftedPolyhedron {
    let pts = [
        [-1.0, 0.0, 0.5],
        [1.0, 0.0, 0.5],
        [0.0, -2.0, 0.5],
        [0.0, 2.0, 0.5],
        [-2.0, 0.0, 0.0],
        [2.0, 0.0, 0.0],
        [0.0, -4.0, 0.0],
        [0.0, 4.0, 0.0],
    ];
    let faces = vec![vec![5, 6, 4, 7], vec![1, 3, 0, 2], vec![3, 1, 5, 7], vec![0, 3, 7, 4], vec![2, 0, 4, 6], vec![1, 2, 6, 5]];
    solid_with_faces(pts.iter().map(|p| Vec3::from(*p)).collect(), faces, Some(0))
}

pub fn tetrahedron_graph() -> PolyhedralGraph {
    validate_graph(4, vec![vec![0, 2, 1], vec![0, 1, 3], vec![1, 2, 3], vec![2, 0, 3]]).expect("K4")
}

pub fn regular_tetrahedron() -> LiftedPolyhedron {
    let s = 1.0 / 3f64.sqrt();
    let h = (2.0f64 / 3.0).sqrt();
    let pts = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.5, 0.5 * 3f64.sqrt(), 0.0), Vec3::new(0.5, 0.5 * s, h)];
    let faces = tetrahedron_graph().faces().to_vec();
    solid_with_faces(pts, faces, Some(0))
}

pub fn square_pyramid_faces() -> Vec<Vec<usize>> {
    vec![vec![0, 3, 2, 1], vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![3, 0, 4]]
}

/// Square pyramid with apex 4; face 0 is the square.
pub fn square_pyramid_graph() -> PolyhedralGraph {
    validate_graph(5, square_pyramid_faces()).expect("pyramid")
}

pub fn square_pyramid(height: f64) -> LiftedPolyhedron {
    let pts = vec![
        Vec3::new(-1.0, -1.0, 0.0),
        Vec3::new(1.0, -1.0, 0.0),
        Vec3::new(1.0, 1.0, 0.0),
        Vec3::new(-1.0, 1.0, 0.0),
        Vec3::new(0.0, 0.0, height),
    ];
    solid_with_faces(pts, square_pyramid_faces(), Some(0))
}

pub fn triangular_bipyramid_graph() -> PolyhedralGraph {
    let pts = vec![
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(-0.5, 0.8, 0.0),
        Vec3::new(-0.5, -0.8, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
        Vec3::new(0.0, 0.0, -1.0),
    ];
    solid(pts).graph().clone()
}

/// Triangular prism lying on a rectangle, roof planes `z = 1 - |x|`.
pub fn tent() -> LiftedPolyhedron {
    let pts = vec![
        Vec3::new(-1.0, -1.0, 0.0),
        Vec3::new(1.0, -1.0, 0.0),
        Vec3::new(1.0, 1.0, 0.0),
        Vec3::new(-1.0, 1.0, 0.0),
        Vec3::new(0.0, -1.0, 1.0),
        Vec3::new(0.0, 1.0, 1.0),
    ];
    solid(pts)
}

pub fn octahedron() -> LiftedPolyhedron {
    let mut pts = Vec::new();
    for axis in 0..3 {
        for sign in [1.0, -1.0] {
            let mut p = Vec3::zeros();
            p[axis] = sign;
            pts.push(p);
        }
    }
    solid(pts)
}

pub fn octahedron_graph() -> PolyhedralGraph {
    octahedron().graph().clone()
}

const PHI: f64 = 1.618_033_988_749_895;

pub fn dodecahedron() -> LiftedPolyhedron {
    let inv = 1.0 / PHI;
    let mut pts = Vec::new();
    for x in [-1.0, 1.0] {
        for y in [-1.0, 1.0] {
            for z in [-1.0, 1.0] {
                pts.push(Vec3::new(x, y, z));
            }
        }
    }
    for a in [-1.0, 1.0] {
        for b in [-1.0, 1.0] {
            pts.push(Vec3::new(0.0, a * inv, b * PHI));
            pts.push(Vec3::new(a * inv, b * PHI, 0.0));
            pts.push(Vec3::new(a * PHI, 0.0, b * inv));
        }
    }
    solid(pts)
}

pub fn dodecahedron_graph() -> PolyhedralGraph {
    dodecahedron().graph().clone()
}

/// Regular icosahedron labelled so that `6 8 5` is a face and `5 11` an
/// edge of the face across `8 5`.
pub fn icosahedron() -> LiftedPolyhedron {
    let raw = [
        [0.0, 1.0, PHI],
        [0.0, 1.0, -PHI],
        [0.0, -1.0, PHI],
        [0.0, -1.0, -PHI],
        [1.0, PHI, 0.0],
        [1.0, -PHI, 0.0],
        [-1.0, PHI, 0.0],
        [-1.0, -PHI, 0.0],
        [PHI, 0.0, 1.0],
        [PHI, 0.0, -1.0],
        [-PHI, 0.0, 1.0],
        [-PHI, 0.0, -1.0],
    ];
    let pts = ICOSA_ORDER.iter().map(|&i| Vec3::from(raw[i])).collect();
    solid(pts)
}

const ICOSA_ORDER: [usize; 12] = [1, 3, 4, 6, 7, 8, 0, 9, 2, 10, 11, 5];

pub fn icosahedron_graph() -> PolyhedralGraph {
    icosahedron().graph().clone()
}

/// Unit cube with the corner at `(1, 1, 1)` cut off: three squares, three
/// pentagons and a triangle, with no symmetry that keeps a square fixed.
pub fn truncated_corner_cube() -> LiftedPolyhedron {
    let mut pts = Vec::new();
    for x in [0.0, 1.0] {
        for y in [0.0, 1.0] {
            for z in [0.0, 1.0] {
                if x + y + z < 3.0 {
                    pts.push(Vec3::new(x, y, z));
                }
            }
        }
    }
    pts.extend([Vec3::new(0.6, 1.0, 1.0), Vec3::new(1.0, 0.6, 1.0), Vec3::new(1.0, 1.0, 0.6)]);
    solid(pts)
}
