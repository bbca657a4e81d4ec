//! Affine reshaping of a lifted solid: horizontal squeezes that sharpen a
//! chosen face corner, and vertical flattening that drains curvature from
//! chosen vertices.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{FaceId, VertexId};
use crate::geometry::Vec2;
use crate::lifting::{face_angle, verify_convex_polyhedron, vertex_curvature, LiftError, LiftedPolyhedron};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShapeError {
    #[error("scale factor must be positive and finite, got {0}")]
    InvalidFactor(f64),
    #[error("scale axis must be a non-zero vector")]
    InvalidAxis,
    #[error("scaled solid is no longer strictly convex: {0}")]
    DegenerateAfterScale(String),
    #[error("no axis and factor brings the angle to {target_deg:.3} deg (best {best_deg:.3} deg)")]
    SearchExhausted { target_deg: f64, best_deg: f64 },
    #[error("curvature still {worst_deg:.3} deg after {halvings} halvings")]
    IterationCapExceeded { halvings: u32, worst_deg: f64 },
    #[error("face {0} is the base face")]
    BaseFace(FaceId),
    #[error("vertex {0} lies on the base face")]
    BaseVertex(VertexId),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

/// Scale by `factor` along `axis`, fixing the orthogonal complement.
/// `axis` is `(x, y, 0)` for a horizontal squeeze and `(0, 0, 1)` for a
/// vertical one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleParams {
    pub axis: [f64; 3],
    pub factor: f64,
}

impl ScaleParams {
    pub const IDENTITY: ScaleParams = ScaleParams { axis: [0.0, 0.0, 1.0], factor: 1.0 };

    /// Horizontal squeeze along the direction at `angle` from +x.
    pub fn horizontal(angle: f64, factor: f64) -> Self {
        let (s, c) = angle.sin_cos();
        ScaleParams { axis: [c, s, 0.0], factor }
    }

    pub fn vertical(factor: f64) -> Self {
        ScaleParams { axis: [0.0, 0.0, 1.0], factor }
    }

    pub fn is_vertical(&self) -> bool {
        self.axis[0] == 0.0 && self.axis[1] == 0.0
    }
}

/// Apply `params`. Axes with both horizontal and vertical components are
/// rejected: only those two families keep the base plane horizontal.
pub fn affine_scale(p: &LiftedPolyhedron, params: ScaleParams) -> Result<LiftedPolyhedron, ShapeError> {
    let s = params.factor;
    if !(s > 0.0 && s.is_finite()) {
        return Err(ShapeError::InvalidFactor(s));
    }
    let [ax, ay, az] = params.axis;
    let horizontal_len = ax.hypot(ay);
    let (m, t) = if horizontal_len == 0.0 && az != 0.0 {
        (Matrix2::identity(), s)
    } else if horizontal_len > 0.0 && az == 0.0 {
        let a = Vec2::new(ax, ay) / horizontal_len;
        (Matrix2::identity() + (a * a.transpose()) * (s - 1.0), 1.0)
    } else {
        return Err(ShapeError::InvalidAxis);
    };
    let q = p.map_linear(m, t);
    let report = verify_convex_polyhedron(&q);
    if !report.passed {
        return Err(ShapeError::DegenerateAfterScale(report.failures.join("; ")));
    }
    Ok(q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpenConfig {
    /// Evenly spaced over a half turn (a squeeze axis and its negation agree).
    pub axes: usize,
    pub shrink: f64,
    pub max_steps: u32,
    pub margin: f64,
}

impl Default for SharpenConfig {
    fn default() -> Self {
        SharpenConfig { axes: 16, shrink: 0.9, max_steps: 60, margin: 1f64.to_radians() }
    }
}

/// Squeeze horizontally until the corner of `face` at `vertex` is at most
/// `target - margin`. Smaller distortion is tried first; ties go to the
/// lowest axis index.
pub fn sharpen_angle(
    p: &LiftedPolyhedron,
    face: FaceId,
    vertex: VertexId,
    target: f64,
    cfg: &SharpenConfig,
) -> Result<(LiftedPolyhedron, ScaleParams), ShapeError> {
    if p.base_face() == Some(face) {
        return Err(ShapeError::BaseFace(face));
    }
    let goal = target - cfg.margin;
    let mut best = face_angle(p, face, vertex)?;
    if best <= goal {
        return Ok((p.clone(), ScaleParams::IDENTITY));
    }
    for k in 1..=cfg.max_steps {
        let factor = cfg.shrink.powi(k as i32);
        for i in 0..cfg.axes {
            let params = ScaleParams::horizontal(PI * i as f64 / cfg.axes as f64, factor);
            let Ok(q) = affine_scale(p, params) else { continue };
            let angle = face_angle(&q, face, vertex)?;
            best = best.min(angle);
            if angle <= goal {
                return Ok((q, params));
            }
        }
    }
    Err(ShapeError::SearchExhausted { target_deg: goal.to_degrees(), best_deg: best.to_degrees() })
}

/// Halve the vertical factor until every target's curvature is below
/// `threshold`. Returns the solid and the cumulative factor.
pub fn reduce_curvatures(
    p: &LiftedPolyhedron,
    targets: &[VertexId],
    threshold: f64,
    max_halvings: u32,
) -> Result<(LiftedPolyhedron, ScaleParams), ShapeError> {
    if let Some(base) = p.base_face() {
        if let Some(&v) = targets.iter().find(|v| p.graph().face(base).contains(v)) {
            return Err(ShapeError::BaseVertex(v));
        }
    }
    let worst = |q: &LiftedPolyhedron| targets.iter().map(|&v| vertex_curvature(q, v)).fold(f64::NEG_INFINITY, f64::max);
    let mut t = 1.0;
    let mut current = p.clone();
    let mut w = worst(&current);
    for _ in 0..max_halvings {
        if w < threshold {
            return Ok((current, ScaleParams::vertical(t)));
        }
        t *= 0.5;
        current = affine_scale(p, ScaleParams::vertical(t))?;
        w = worst(&current);
    }
    if w < threshold {
        return Ok((current, ScaleParams::vertical(t)));
    }
    Err(ShapeError::IterationCapExceeded { halvings: max_halvings, worst_deg: w.to_degrees() })
}
