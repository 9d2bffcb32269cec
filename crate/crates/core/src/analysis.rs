//! Exact-curve sampling, angular error between constructed paths and exact
//! images, and the small-sphere reflection limit for comparison.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::construct::DiscPath;
use crate::flatten::{flatten, DiscPoint, Vec2};
use crate::sphere::{GreatCircle, UnitDirection, Vec3};

/// Oracle sample density used by default; doubling it must not move a
/// reported maximum error by more than about a percent.
pub const DEFAULT_ORACLE_SAMPLES: usize = 1024;

/// Constructed paths farther than this (radians) from the exact curve's
/// endpoints indicate the wrong meridian was compared.
const SPAN_TOLERANCE: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("direction does not lie on the circle")]
    OffCircle,
    #[error("empty curve or path")]
    EmptyInput,
    #[error("constructed path does not cover the exact curve's span")]
    SpanMismatch,
    #[error("observer lies inside the reflecting sphere")]
    ObserverInsideSphere,
    #[error("sphere radius and observer distance must be positive")]
    InvalidRadius,
}

/// What a sampled curve is a picture of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveSource {
    GreatCircleMeridian,
    Parallel,
    Custom,
}

/// Exact flattened curve, sampled in order of the curve parameter.
///
/// The flattening is discontinuous only at `B`; samples landing within
/// [`BLOWUP_EPSILON`] of `B` are dropped and the curve splits there into
/// separate runs.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    points: Vec<DiscPoint>,
    params: Vec<f64>,
    run_starts: Vec<usize>,
    pub source: CurveSource,
}

impl SampledCurve {
    pub fn new(source: CurveSource) -> Self {
        SampledCurve {
            points: Vec::new(),
            params: Vec::new(),
            run_starts: Vec::new(),
            source,
        }
    }

    pub fn push(&mut self, p: DiscPoint, param: f64) {
        if self.run_starts.is_empty() {
            self.run_starts.push(0);
        }
        self.points.push(p);
        self.params.push(param);
    }

    /// Marks a discontinuity; the next pushed point starts a new run.
    pub fn break_here(&mut self) {
        if self.points.is_empty() || *self.run_starts.last().unwrap() == self.points.len() {
            return;
        }
        self.run_starts.push(self.points.len());
    }

    pub fn points(&self) -> &[DiscPoint] {
        &self.points
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Contiguous runs between discontinuities.
    pub fn runs(&self) -> Vec<&[DiscPoint]> {
        let mut out = Vec::with_capacity(self.run_starts.len());
        for (i, &start) in self.run_starts.iter().enumerate() {
            let end = self
                .run_starts
                .get(i + 1)
                .copied()
                .unwrap_or(self.points.len());
            if end > start {
                out.push(&self.points[start..end]);
            }
        }
        out
    }

    /// True when the curve closes on itself (no blowup crossing).
    pub fn is_closed(&self) -> bool {
        if self.run_starts.len() != 1 || self.points.len() < 3 {
            return false;
        }
        let first = self.points.first().unwrap();
        let last = self.points.last().unwrap();
        first.distance_to(last) < 1e-9
    }
}

/// Samples the flattened meridian of `circle` from `from` to `to`,
/// sweeping counterclockwise around the circle's normal. When `from` and
/// `to` coincide the whole circle is sampled. `n` points, uniform in arc
/// angle.
pub fn sample_meridian(
    circle: &GreatCircle,
    from: &UnitDirection,
    to: &UnitDirection,
    n: usize,
) -> Result<SampledCurve, AnalysisError> {
    let tol = 1e-9;
    if !circle.contains(from, tol) || !circle.contains(to, tol) {
        return Err(AnalysisError::OffCircle);
    }
    let n = n.max(2);
    let normal = circle.normal.vector();
    let e1 = (from.vector() - normal * from.vector().dot(&normal)).normalize();
    let e2 = normal.cross(&e1).normalize();

    let mut sweep = to.vector().dot(&e2).atan2(to.vector().dot(&e1));
    if sweep <= 1e-12 {
        sweep += TAU;
    }

    let mut curve = SampledCurve::new(CurveSource::GreatCircleMeridian);
    for i in 0..n {
        let phi = sweep * (i as f64) / ((n - 1) as f64);
        let d = UnitDirection::from_unit((e1 * phi.cos() + e2 * phi.sin()).normalize());
        match flatten(&d) {
            Ok(p) => curve.push(p, phi),
            Err(_) => curve.break_here(),
        }
    }
    Ok(curve)
}

/// Samples the full flattened image of the constant-elevation parallel at
/// `zeta`, uniform in the horizontal angle.
pub fn sample_parallel(zeta: f64, n: usize) -> Result<SampledCurve, AnalysisError> {
    if zeta.abs() >= PI / 2.0 {
        return Err(AnalysisError::OffCircle);
    }
    let n = n.max(2);
    let mut curve = SampledCurve::new(CurveSource::Parallel);
    let (sin_z, cos_z) = zeta.sin_cos();
    for i in 0..n {
        let xi = -PI + TAU * (i as f64) / ((n - 1) as f64);
        let d = UnitDirection::from_unit(Vec3::new(cos_z * xi.sin(), cos_z * xi.cos(), sin_z));
        match flatten(&d) {
            Ok(p) => curve.push(p, xi),
            Err(_) => curve.break_here(),
        }
    }
    Ok(curve)
}

/// Deviation report between a constructed path and an exact curve, in disc
/// radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub max_error: f64,
    pub mean_error: f64,
    /// Curve parameter at the worst deviation.
    pub argmax_parameter: f64,
    pub samples: usize,
}

impl ErrorReport {
    pub fn max_degrees(&self) -> f64 {
        self.max_error.to_degrees()
    }

    pub fn mean_degrees(&self) -> f64 {
        self.mean_error.to_degrees()
    }
}

impl std::fmt::Display for ErrorReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "max_deg={:.6} mean_deg={:.6} at_param={:.6} samples={}",
            self.max_degrees(),
            self.mean_degrees(),
            self.argmax_parameter,
            self.samples
        )
    }
}

/// Distance from every exact sample to the nearest point of the
/// constructed path; reports max and mean.
pub fn angular_error(
    constructed: &[DiscPath],
    exact: &SampledCurve,
) -> Result<ErrorReport, AnalysisError> {
    if constructed.is_empty() || exact.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    let nearest = |p: Vec2| -> f64 {
        constructed
            .iter()
            .map(|path| path.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    };

    if !exact.is_closed() {
        let first = exact.points().first().unwrap().cartesian();
        let last = exact.points().last().unwrap().cartesian();
        if nearest(first) > SPAN_TOLERANCE || nearest(last) > SPAN_TOLERANCE {
            return Err(AnalysisError::SpanMismatch);
        }
    }

    let mut max_error = 0.0f64;
    let mut sum = 0.0f64;
    let mut argmax = exact.params()[0];
    for (p, &param) in exact.points().iter().zip(exact.params()) {
        let d = nearest(p.cartesian());
        sum += d;
        if d > max_error {
            max_error = d;
            argmax = param;
        }
    }
    Ok(ErrorReport {
        max_error,
        mean_error: sum / exact.points().len() as f64,
        argmax_parameter: argmax,
        samples: exact.points().len(),
    })
}

/// The small-sphere reflection limit: a central perspective with radial
/// profile `sin(lambda / 2)` on the unit disc.
pub fn reflection_limit_map(lambda: f64, theta: f64) -> Vec2 {
    let r = (lambda / 2.0).sin();
    Vec2::new(r * theta.cos(), r * theta.sin())
}

/// Field of view, in degrees, captured by a reflecting sphere of radius
/// `r` seen from distance `d` (measured from the sphere center): the full
/// turn minus the cone of shadow.
pub fn reflection_fov(r: f64, d: f64) -> Result<f64, AnalysisError> {
    if r <= 0.0 || d <= 0.0 {
        return Err(AnalysisError::InvalidRadius);
    }
    if r > d {
        return Err(AnalysisError::ObserverInsideSphere);
    }
    if r == d {
        return Ok(180.0);
    }
    Ok(360.0 - 2.0 * (r / d).asin().to_degrees())
}

/// One row of the radial-profile comparison table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub lambda: f64,
    /// Equidistant image radius (equals `lambda`; rim at `pi`).
    pub equidistant: f64,
    /// Reflection-limit image radius (rim at `1`).
    pub reflection: f64,
}

/// Radial profiles of the equidistant flattening and the reflection limit
/// over `n` values of `lambda` in `[0, pi]`. Both are strictly increasing;
/// the reflection compresses the outer angles more.
pub fn compare_radial_profiles(n: usize) -> Vec<ProfileRow> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let lambda = PI * (i as f64) / ((n - 1) as f64);
            ProfileRow {
                lambda,
                equidistant: lambda,
                reflection: (lambda / 2.0).sin(),
            }
        })
        .collect()
}
