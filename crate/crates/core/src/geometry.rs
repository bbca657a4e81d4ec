//! Small planar and spatial helpers shared by the pipeline stages.

use nalgebra::{Vector2, Vector3};

pub type Vec2 = Vector2<f64>;
pub type Vec3 = Vector3<f64>;

/// Counter-clockwise quarter turn: `(x, y) -> (-y, x)`.
#[inline]
pub fn rot90(v: Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

#[inline]
pub fn cross2(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Rotate `p` about `center` by `angle` radians (positive = counter-clockwise).
pub fn rotate_about(p: Vec2, center: Vec2, angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    let d = p - center;
    center + Vec2::new(c * d.x - s * d.y, s * d.x + c * d.y)
}

/// Shoelace area, positive for counter-clockwise polygons.
pub fn signed_area(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        acc += cross2(poly[i], poly[(i + 1) % n]);
    }
    0.5 * acc
}

pub fn centroid2(poly: &[Vec2]) -> Vec2 {
    let n = poly.len();
    let a = signed_area(poly);
    if n == 0 {
        return Vec2::zeros();
    }
    if a.abs() < 1e-300 {
        return poly.iter().sum::<Vec2>() / n as f64;
    }
    let mut c = Vec2::zeros();
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        c += (p + q) * cross2(p, q);
    }
    c / (6.0 * a)
}

/// Largest pairwise distance of a point set.
pub fn diameter2(points: &[Vec2]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max((p - q).norm());
        }
    }
    d
}

pub fn diameter3(points: &[Vec3]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max((p - q).norm());
        }
    }
    d
}

/// Newell normal of a (possibly slightly non-planar) polygon. Not normalized;
/// its length is twice the polygon's area.
pub fn newell_normal(poly: &[Vec3]) -> Vec3 {
    let n = poly.len();
    let mut acc = Vec3::zeros();
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        acc.x += (p.y - q.y) * (p.z + q.z);
        acc.y += (p.z - q.z) * (p.x + q.x);
        acc.z += (p.x - q.x) * (p.y + q.y);
    }
    acc
}

/// Minimum turn over consecutive corners of a polygon; strictly positive for
/// strictly convex counter-clockwise polygons.
pub fn min_corner_turn(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    let mut worst = f64::INFINITY;
    for i in 0..n {
        let a = poly[(i + n - 1) % n];
        let b = poly[i];
        let c = poly[(i + 1) % n];
        worst = worst.min(cross2(b - a, c - b));
    }
    worst
}

/// Strict interior test for a convex counter-clockwise polygon.
pub fn strictly_inside_convex(poly: &[Vec2], p: Vec2, eps: f64) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = b - a;
        cross2(e, p - a) / e.norm() > eps
    })
}

/// Proper crossing of two closed segments, ignoring contact within `eps`.
pub fn segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2, eps: f64) -> bool {
    let d1 = cross2(b - a, c - a);
    let d2 = cross2(b - a, d - a);
    let d3 = cross2(d - c, a - c);
    let d4 = cross2(d - c, b - c);
    let s = eps * (b - a).norm().max((d - c).norm()).max(1e-300);
    let opposite = |u: f64, v: f64| (u > s && v < -s) || (u < -s && v > s);
    if opposite(d1, d2) && opposite(d3, d4) {
        return true;
    }
    // Collinear overlap of positive length also counts as a crossing.
    if d1.abs() <= s && d2.abs() <= s {
        let dir = b - a;
        let len2 = dir.norm_squared();
        if len2 == 0.0 {
            return false;
        }
        let t0 = (c - a).dot(&dir) / len2;
        let t1 = (d - a).dot(&dir) / len2;
        let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
        let tol = eps.max(1e-12);
        return hi.min(1.0) - lo.max(0.0) > tol;
    }
    false
}

/// Intersection of two convex counter-clockwise polygons (Sutherland–Hodgman).
pub fn clip_convex(subject: &[Vec2], clip: &[Vec2]) -> Vec<Vec2> {
    let mut output: Vec<Vec2> = subject.to_vec();
    let m = clip.len();
    for i in 0..m {
        if output.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % m];
        let edge = b - a;
        let side = |p: Vec2| cross2(edge, p - a);
        let input = std::mem::take(&mut output);
        let n = input.len();
        for j in 0..n {
            let cur = input[j];
            let nxt = input[(j + 1) % n];
            let sc = side(cur);
            let sn = side(nxt);
            if sc >= 0.0 {
                output.push(cur);
                if sn < 0.0 {
                    output.push(cur + (nxt - cur) * (sc / (sc - sn)));
                }
            } else if sn >= 0.0 {
                output.push(cur + (nxt - cur) * (sc / (sc - sn)));
            }
        }
    }
    output
}

/// Separating-axis penetration depth between two convex polygons: the
/// smallest overlap of their projections over all edge normals. Zero or
/// negative when they are separated.
pub fn penetration_depth(p: &[Vec2], q: &[Vec2]) -> f64 {
    let mut depth = f64::INFINITY;
    for poly in [p, q] {
        let n = poly.len();
        for i in 0..n {
            let e = poly[(i + 1) % n] - poly[i];
            let len = e.norm();
            if len == 0.0 {
                continue;
            }
            let axis = rot90(e) / len;
            let (pmin, pmax) = project(p, axis);
            let (qmin, qmax) = project(q, axis);
            depth = depth.min(pmax.min(qmax) - pmin.max(qmin));
        }
    }
    depth
}

fn project(poly: &[Vec2], axis: Vec2) -> (f64, f64) {
    poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let t = p.dot(&axis);
        (lo.min(t), hi.max(t))
    })
}

/// Interior angle at `b` between rays `b->a` and `b->c`.
pub fn corner_angle3(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let u = a - b;
    let v = c - b;
    let cos = u.dot(&v) / (u.norm() * v.norm());
    // atan2 form is better conditioned than acos near 0 and pi.
    u.cross(&v).norm().atan2(cos * u.norm() * v.norm())
}
