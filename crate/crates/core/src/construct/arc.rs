//! Circle-arc and segment primitives in the disc plane.
//!
//! All coordinates are in disc radians: the perspective disc is the circle
//! of radius `pi` about the origin and the equator is the circle of radius
//! `pi/2`.

use std::f64::consts::TAU;

use crate::construct::ConstructError;
use crate::flatten::{DiscPoint, Vec2};

/// Angular slack when deciding whether an angle lies on an arc's span.
const ANGLE_SLACK: f64 = 1e-9;

/// Area threshold below which three points count as collinear.
pub const COLLINEARITY_TOLERANCE: f64 = 1e-9;

fn wrap_pos(x: f64) -> f64 {
    let mut t = x % TAU;
    if t < 0.0 {
        t += TAU;
    }
    t
}

fn cross2(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// A directed circular arc: center, radius, start angle and signed sweep
/// (positive sweep runs counterclockwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    center: Vec2,
    radius: f64,
    start_angle: f64,
    sweep: f64,
}

impl Arc {
    pub fn new(center: Vec2, radius: f64, start_angle: f64, sweep: f64) -> Self {
        debug_assert!(radius > 1e-12, "degenerate arc radius {radius}");
        Arc {
            center,
            radius,
            start_angle,
            sweep,
        }
    }

    /// Full circle, counterclockwise from angle 0.
    pub fn full_circle(center: Vec2, radius: f64) -> Self {
        Arc::new(center, radius, 0.0, TAU)
    }

    pub fn center(&self) -> Vec2 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn start_angle(&self) -> f64 {
        self.start_angle
    }

    pub fn end_angle(&self) -> f64 {
        self.start_angle + self.sweep
    }

    /// Signed sweep; positive is counterclockwise.
    pub fn sweep(&self) -> f64 {
        self.sweep
    }

    pub fn is_ccw(&self) -> bool {
        self.sweep >= 0.0
    }

    pub fn angle_at(&self, t: f64) -> f64 {
        self.start_angle + t * self.sweep
    }

    pub fn point_at(&self, t: f64) -> Vec2 {
        let phi = self.angle_at(t);
        self.center + Vec2::new(phi.cos(), phi.sin()) * self.radius
    }

    pub fn start_point(&self) -> Vec2 {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> Vec2 {
        self.point_at(1.0)
    }

    /// Arc length.
    pub fn length(&self) -> f64 {
        self.radius * self.sweep.abs()
    }

    /// Parameter in `[0, 1]` of the given angle if it lies on the span.
    pub fn param_of_angle(&self, phi: f64) -> Option<f64> {
        let span = self.sweep.abs();
        if span == 0.0 {
            return None;
        }
        let delta = if self.sweep >= 0.0 {
            wrap_pos(phi - self.start_angle)
        } else {
            wrap_pos(self.start_angle - phi)
        };
        if delta <= span + ANGLE_SLACK {
            Some((delta / span).min(1.0))
        } else if TAU - delta <= ANGLE_SLACK {
            Some(0.0)
        } else {
            None
        }
    }

    /// Angle of `p` as seen from the arc center.
    pub fn angle_of(&self, p: Vec2) -> f64 {
        let v = p - self.center;
        v.y.atan2(v.x)
    }

    pub fn param_of_point(&self, p: Vec2) -> Option<f64> {
        self.param_of_angle(self.angle_of(p))
    }

    /// Parameter of the point on the arc closest to `p`.
    pub fn nearest_param(&self, p: Vec2) -> f64 {
        if let Some(t) = self.param_of_point(p) {
            return t;
        }
        if (p - self.start_point()).norm() <= (p - self.end_point()).norm() {
            0.0
        } else {
            1.0
        }
    }

    /// Distance from `p` to the arc.
    pub fn distance_to(&self, p: Vec2) -> f64 {
        if self.param_of_point(p).is_some() {
            ((p - self.center).norm() - self.radius).abs()
        } else {
            (p - self.start_point())
                .norm()
                .min((p - self.end_point()).norm())
        }
    }

    /// Sub-arc between parameters `t0 <= t1`.
    pub fn sub_arc(&self, t0: f64, t1: f64) -> Arc {
        Arc {
            center: self.center,
            radius: self.radius,
            start_angle: self.angle_at(t0),
            sweep: (t1 - t0) * self.sweep,
        }
    }

    pub fn reversed(&self) -> Arc {
        Arc {
            center: self.center,
            radius: self.radius,
            start_angle: self.end_angle(),
            sweep: -self.sweep,
        }
    }

    /// Intersections with the ray from the disc center at azimuth `theta`.
    /// Returns `(distance along ray, arc parameter)` pairs ordered by
    /// distance.
    pub fn ray_hits(&self, theta: f64) -> Vec<(f64, f64)> {
        let u = Vec2::new(theta.cos(), theta.sin());
        let b = u.dot(&self.center);
        let disc = b * b - (self.center.norm_squared() - self.radius * self.radius);
        if disc < 0.0 {
            return Vec::new();
        }
        let sq = disc.sqrt();
        let mut hits = Vec::new();
        for s in [b - sq, b + sq] {
            if s > 1e-12 {
                if let Some(t) = self.param_of_point(u * s) {
                    hits.push((s, t));
                }
            }
        }
        hits.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12);
        hits
    }
}

/// A straight chord of the disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StraightSegment {
    a: Vec2,
    b: Vec2,
}

impl StraightSegment {
    pub fn new(a: Vec2, b: Vec2) -> Self {
        StraightSegment { a, b }
    }

    pub fn between(a: &DiscPoint, b: &DiscPoint) -> Self {
        StraightSegment {
            a: a.cartesian(),
            b: b.cartesian(),
        }
    }

    pub fn a(&self) -> Vec2 {
        self.a
    }

    pub fn b(&self) -> Vec2 {
        self.b
    }

    pub fn point_at(&self, t: f64) -> Vec2 {
        self.a + (self.b - self.a) * t
    }

    pub fn length(&self) -> f64 {
        (self.b - self.a).norm()
    }

    pub fn nearest_param(&self, p: Vec2) -> f64 {
        let d = self.b - self.a;
        let len2 = d.norm_squared();
        if len2 == 0.0 {
            return 0.0;
        }
        ((p - self.a).dot(&d) / len2).clamp(0.0, 1.0)
    }

    pub fn distance_to(&self, p: Vec2) -> f64 {
        (p - self.point_at(self.nearest_param(p))).norm()
    }

    pub fn sub_segment(&self, t0: f64, t1: f64) -> StraightSegment {
        StraightSegment {
            a: self.point_at(t0),
            b: self.point_at(t1),
        }
    }

    pub fn reversed(&self) -> StraightSegment {
        StraightSegment {
            a: self.b,
            b: self.a,
        }
    }

    /// Intersection with the central ray at azimuth `theta`, if any.
    pub fn ray_hits(&self, theta: f64) -> Vec<(f64, f64)> {
        let u = Vec2::new(theta.cos(), theta.sin());
        let d = self.b - self.a;
        let denom = cross2(d, u);
        if denom.abs() < 1e-15 {
            return Vec::new();
        }
        let w = -cross2(self.a, u) / denom;
        let s = cross2(self.a, d) / cross2(u, d);
        if (-1e-12..=1.0 + 1e-12).contains(&w) && s > 1e-12 {
            vec![(s, w.clamp(0.0, 1.0))]
        } else {
            Vec::new()
        }
    }
}

/// A drawable piece in the disc plane: an arc or a straight segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscPath {
    Arc(Arc),
    Segment(StraightSegment),
}

impl DiscPath {
    pub fn point_at(&self, t: f64) -> Vec2 {
        match self {
            DiscPath::Arc(a) => a.point_at(t),
            DiscPath::Segment(s) => s.point_at(t),
        }
    }

    pub fn start_point(&self) -> Vec2 {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> Vec2 {
        self.point_at(1.0)
    }

    pub fn length(&self) -> f64 {
        match self {
            DiscPath::Arc(a) => a.length(),
            DiscPath::Segment(s) => s.length(),
        }
    }

    pub fn distance_to(&self, p: Vec2) -> f64 {
        match self {
            DiscPath::Arc(a) => a.distance_to(p),
            DiscPath::Segment(s) => s.distance_to(p),
        }
    }

    pub fn nearest_param(&self, p: Vec2) -> f64 {
        match self {
            DiscPath::Arc(a) => a.nearest_param(p),
            DiscPath::Segment(s) => s.nearest_param(p),
        }
    }

    pub fn sub_path(&self, t0: f64, t1: f64) -> DiscPath {
        match self {
            DiscPath::Arc(a) => DiscPath::Arc(a.sub_arc(t0, t1)),
            DiscPath::Segment(s) => DiscPath::Segment(s.sub_segment(t0, t1)),
        }
    }

    pub fn reversed(&self) -> DiscPath {
        match self {
            DiscPath::Arc(a) => DiscPath::Arc(a.reversed()),
            DiscPath::Segment(s) => DiscPath::Segment(s.reversed()),
        }
    }

    pub fn ray_hits(&self, theta: f64) -> Vec<(f64, f64)> {
        match self {
            DiscPath::Arc(a) => a.ray_hits(theta),
            DiscPath::Segment(s) => s.ray_hits(theta),
        }
    }

    /// Splits at the parameter of the point nearest to `p`.
    pub fn split_at(&self, p: Vec2) -> (DiscPath, DiscPath) {
        let t = self.nearest_param(p);
        (self.sub_path(0.0, t), self.sub_path(t, 1.0))
    }
}

/// The unique circle arc through three points in order, or the straight
/// segment `p1 -> p3` when the triangle they span has area below
/// `collinearity_tol`.
pub fn arc_through(
    p1: Vec2,
    p2: Vec2,
    p3: Vec2,
    collinearity_tol: f64,
) -> Result<DiscPath, ConstructError> {
    if (p1 - p2).norm() < 1e-12 || (p2 - p3).norm() < 1e-12 || (p1 - p3).norm() < 1e-12 {
        return Err(ConstructError::DuplicatePoints);
    }
    let area = 0.5 * cross2(p2 - p1, p3 - p1).abs();
    if area < collinearity_tol {
        return Ok(DiscPath::Segment(StraightSegment::new(p1, p3)));
    }

    // circumcenter from the perpendicular bisectors
    let d = 2.0 * (p1.x * (p2.y - p3.y) + p2.x * (p3.y - p1.y) + p3.x * (p1.y - p2.y));
    let s1 = p1.norm_squared();
    let s2 = p2.norm_squared();
    let s3 = p3.norm_squared();
    let center = Vec2::new(
        (s1 * (p2.y - p3.y) + s2 * (p3.y - p1.y) + s3 * (p1.y - p2.y)) / d,
        (s1 * (p3.x - p2.x) + s2 * (p1.x - p3.x) + s3 * (p2.x - p1.x)) / d,
    );
    let radius = (p1 - center).norm();

    let ccw = cross2(p2 - p1, p3 - p2) > 0.0;
    let phi1 = {
        let v = p1 - center;
        v.y.atan2(v.x)
    };
    let phi3 = {
        let v = p3 - center;
        v.y.atan2(v.x)
    };
    let sweep = if ccw {
        wrap_pos(phi3 - phi1)
    } else {
        -wrap_pos(phi1 - phi3)
    };
    let arc = Arc::new(center, radius, phi1, sweep);
    debug_assert!(
        arc.param_of_point(p2).is_some(),
        "middle point off the fitted arc span"
    );
    Ok(DiscPath::Arc(arc))
}

/// [`arc_through`] with the default collinearity tolerance.
pub fn arc_through_points(
    p1: &DiscPoint,
    p2: &DiscPoint,
    p3: &DiscPoint,
) -> Result<DiscPath, ConstructError> {
    arc_through(
        p1.cartesian(),
        p2.cartesian(),
        p3.cartesian(),
        COLLINEARITY_TOLERANCE,
    )
}
