//! The azimuthal-equidistant flattening of the sphere onto the perspective
//! disc, its continuous inverse on the closed disc, and angle conversions.
//!
//! The disc has radius `pi` in internal units (radians); rendering scale is
//! applied only at SVG emission. The flattening sends the forward direction
//! `F` to the disc center, keeps distances along every diameter equal to
//! angles at the observer, and blows the single backward direction `B` up
//! into the boundary circle.

use std::f64::consts::{PI, TAU};

use nalgebra::Vector2;
use thiserror::Error;

use crate::sphere::{UnitDirection, Vec3};

/// 2D point in disc-plane units (radians).
pub type Vec2 = Vector2<f64>;

/// Directions closer than this (in radians) to `B` are rejected by
/// [`flatten`]; disc points with `lambda >= pi - BLOWUP_EPSILON` count as
/// blowup points.
pub const BLOWUP_EPSILON: f64 = 1e-9;

/// Angles in a [`DiscPoint`] are snapped to multiples of this grid
/// (2^-51, one ulp of pi). Sums and differences of grid angles up to `pi`
/// in magnitude are then exact in f64, which makes diameter arithmetic
/// (`pi - lambda`, `theta ± pi`) free of rounding.
const ANGLE_GRID_SCALE: f64 = 2251799813685248.0; // 2^51
const ANGLE_GRID_INV: f64 = 1.0 / ANGLE_GRID_SCALE;

fn snap(x: f64) -> f64 {
    (x * ANGLE_GRID_SCALE).round() * ANGLE_GRID_INV
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t <= -PI {
        t += TAU;
    } else if t > PI {
        t -= TAU;
    }
    t
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlattenError {
    /// The direction lies within [`BLOWUP_EPSILON`] of `B`; callers wanting
    /// the blowup must say which azimuth they approach it from.
    #[error("direction is at the blowup point B")]
    AtBlowup,
    /// The point coincides with the observer.
    #[error("point coincides with the observer")]
    AtObserver,
}

/// A point of the closed perspective disc in polar form.
///
/// `lambda` is the distance from the disc center (equal to the angle
/// `∠POF` at the observer), in `[0, pi]`; `theta` is the azimuth from the
/// `R` direction, counterclockwise toward `U`, in `(-pi, pi]`. Points with
/// `lambda >= pi - BLOWUP_EPSILON` lie on the blowup circle and keep their
/// azimuth as the direction of approach to `B`.
///
/// Both angles are stored on a fixed 2^-51 grid; see [`DiscPoint::new`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint {
    lambda: f64,
    theta: f64,
}

impl DiscPoint {
    /// Disc center, the image of `F`.
    pub const CENTER: DiscPoint = DiscPoint {
        lambda: 0.0,
        theta: 0.0,
    };

    /// Builds a disc point, clamping `lambda` into `[0, pi]`, wrapping
    /// `theta` into `(-pi, pi]` and snapping both to the angle grid. At the
    /// center the azimuth is canonically `0`.
    pub fn new(lambda: f64, theta: f64) -> Self {
        let lambda = snap(lambda.clamp(0.0, PI));
        if lambda == 0.0 {
            return DiscPoint::CENTER;
        }
        let mut theta = snap(wrap_angle(theta));
        if theta <= -PI {
            theta = PI;
        }
        DiscPoint { lambda, theta }
    }

    /// Blowup point approached from azimuth `theta`.
    pub fn blowup(theta: f64) -> Self {
        DiscPoint::new(PI, theta)
    }

    /// Builds from cartesian disc coordinates `(u, w)` in radians.
    pub fn from_cartesian(v: Vec2) -> Self {
        let r = v.norm();
        if r == 0.0 {
            return DiscPoint::CENTER;
        }
        DiscPoint::new(r, v.y.atan2(v.x))
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_blowup(&self) -> bool {
        self.lambda >= PI - BLOWUP_EPSILON
    }

    /// True when the point lies in the closed anterior (inner) disc,
    /// `lambda <= pi/2`. The equator boundary counts as anterior.
    pub fn is_anterior(&self) -> bool {
        self.lambda <= PI / 2.0
    }

    /// Cartesian view `lambda * (cos theta, sin theta)`.
    pub fn cartesian(&self) -> Vec2 {
        Vec2::new(
            self.lambda * self.theta.cos(),
            self.lambda * self.theta.sin(),
        )
    }

    /// Euclidean distance in the disc plane, in radians.
    pub fn distance_to(&self, other: &DiscPoint) -> f64 {
        (self.cartesian() - other.cartesian()).norm()
    }
}

/// Spherical coordinates adapted to the flattening: radial distance,
/// latitude from `F`, longitude from `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalCoords {
    /// Distance from the observer, world units, `> 0`.
    pub rho: f64,
    /// Angle from the central ray, `[0, pi]`.
    pub lambda: f64,
    /// Azimuth from `R` toward `U`, `(-pi, pi]`.
    pub theta: f64,
}

/// Horizontal angle and angular elevation, as measured with a theodolite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheodoliteAngles {
    /// Horizontal angle from `F`, positive toward `R`, `(-pi, pi]`.
    pub xi: f64,
    /// Elevation above the horizon plane, `[-pi/2, pi/2]`.
    pub zeta: f64,
}

impl TheodoliteAngles {
    pub fn new(xi: f64, zeta: f64) -> Self {
        debug_assert!((-PI / 2.0..=PI / 2.0).contains(&zeta));
        TheodoliteAngles {
            xi: wrap_angle(xi),
            zeta,
        }
    }
}

/// Flattens a direction onto the perspective disc.
///
/// `lambda` is the angle to `F`, `theta` the azimuth of the direction's
/// projection onto the `xz`-plane. `lambda` is computed as
/// `atan2(hypot(x, z), y)`, which equals `arccos(y)` for unit input but
/// stays fully accurate near both poles of the map.
pub fn flatten(d: &UnitDirection) -> Result<DiscPoint, FlattenError> {
    let planar = d.x().hypot(d.z());
    let lambda = planar.atan2(d.y());
    if lambda > PI - BLOWUP_EPSILON {
        return Err(FlattenError::AtBlowup);
    }
    if lambda == 0.0 {
        return Ok(DiscPoint::CENTER);
    }
    Ok(DiscPoint::new(lambda, d.z().atan2(d.x())))
}

/// Continuous inverse of [`flatten`] on the closed disc. Every blowup
/// point maps to `B` exactly.
pub fn unflatten(p: &DiscPoint) -> UnitDirection {
    if p.is_blowup() {
        return UnitDirection::B;
    }
    let (sin_l, cos_l) = p.lambda().sin_cos();
    let (sin_t, cos_t) = p.theta().sin_cos();
    UnitDirection::from_unit(Vec3::new(sin_l * cos_t, cos_l, sin_l * sin_t))
}

/// Natural spherical coordinates of a world point.
pub fn to_natural(point: Vec3) -> Result<NaturalCoords, FlattenError> {
    let rho = point.norm();
    if rho <= f64::MIN_POSITIVE {
        return Err(FlattenError::AtObserver);
    }
    let planar = point.x.hypot(point.z);
    Ok(NaturalCoords {
        rho,
        lambda: planar.atan2(point.y),
        theta: if planar == 0.0 {
            0.0
        } else {
            point.z.atan2(point.x)
        },
    })
}

/// Direction with horizontal angle `xi` and elevation `zeta`.
pub fn from_theodolite(a: &TheodoliteAngles) -> UnitDirection {
    let (sin_xi, cos_xi) = a.xi.sin_cos();
    let (sin_zeta, cos_zeta) = a.zeta.sin_cos();
    UnitDirection::from_unit(Vec3::new(cos_zeta * sin_xi, cos_zeta * cos_xi, sin_zeta))
}

/// A diameter of the perspective disc: the image of a great circle through
/// `F`, along which disc distance equals angle at the observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuringLine {
    theta: f64,
}

impl MeasuringLine {
    /// Azimuth of the positive radius, `(-pi, pi]`, grid-snapped.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Point at signed distance `s` from the center: `s >= 0` lies on the
    /// `theta` radius, `s < 0` on the opposite radius. `|s|` is clamped
    /// to `pi`.
    pub fn point_at(&self, s: f64) -> DiscPoint {
        if s >= 0.0 {
            DiscPoint::new(s, self.theta)
        } else {
            DiscPoint::new(-s, opposite_azimuth(self.theta))
        }
    }

    /// The two blowup endpoints, positive radius first.
    pub fn endpoints(&self) -> (DiscPoint, DiscPoint) {
        (self.point_at(PI), self.point_at(-PI))
    }
}

/// Azimuth of the opposite radius. Exact for grid angles.
pub(crate) fn opposite_azimuth(theta: f64) -> f64 {
    if theta > 0.0 {
        theta - PI
    } else {
        theta + PI
    }
}

/// The measuring line (diameter) at azimuth `theta`.
pub fn measuring_line(theta: f64) -> MeasuringLine {
    let p = DiscPoint::new(1.0, theta);
    MeasuringLine { theta: p.theta() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn flatten_reference_directions() {
        let f = flatten(&UnitDirection::F).unwrap();
        assert_eq!(f, DiscPoint::CENTER);

        // equator sits at half the disc radius
        let r = flatten(&UnitDirection::R).unwrap();
        assert_eq!(r.lambda(), FRAC_PI_2);
        assert_eq!(r.theta(), 0.0);

        let u = flatten(&UnitDirection::U).unwrap();
        assert_eq!(u.lambda(), FRAC_PI_2);
        assert_eq!(u.theta(), FRAC_PI_2);
    }

    #[test]
    fn flatten_oblique_direction() {
        let d = UnitDirection::from_unit(Vec3::new(1.0, 1.0, 0.0).normalize());
        let p = flatten(&d).unwrap();
        assert_abs_diff_eq!(p.lambda(), PI / 4.0, epsilon = 1e-15);
        assert_eq!(p.theta(), 0.0);
    }

    #[test]
    fn flatten_rejects_blowup() {
        assert_eq!(flatten(&UnitDirection::B), Err(FlattenError::AtBlowup));
    }

    #[test]
    fn unflatten_disc_points() {
        assert_eq!(unflatten(&DiscPoint::CENTER), UnitDirection::F);
        // all blowup points map to B, whatever the azimuth
        assert_eq!(unflatten(&DiscPoint::blowup(0.3)), UnitDirection::B);
        assert_eq!(unflatten(&DiscPoint::blowup(-2.0)), UnitDirection::B);

        let l = unflatten(&DiscPoint::new(FRAC_PI_2, PI));
        assert_abs_diff_eq!(l.x(), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.y(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.z(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn round_trip_direction_to_disc() {
        let dirs = [
            Vec3::new(0.2, 0.7, -0.4),
            Vec3::new(-1.0, 0.001, 0.3),
            Vec3::new(0.0, -0.9, 0.1),
            Vec3::new(5.0, -1.0, 2.0),
        ];
        for v in dirs {
            let d = UnitDirection::from_unit(v.normalize());
            let back = unflatten(&flatten(&d).unwrap());
            assert!((back.vector() - d.vector()).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trip_disc_to_direction() {
        for &(l, t) in &[
            (0.3, 1.1),
            (1e-9, 2.0),
            (FRAC_PI_2, PI),
            (3.0, -3.0),
            (PI - 1e-8, 0.5),
        ] {
            let p = DiscPoint::new(l, t);
            let q = flatten(&unflatten(&p)).unwrap();
            assert!((p.lambda() - q.lambda()).abs() < 1e-12);
            let dt = wrap_angle(p.theta() - q.theta()).abs();
            assert!(dt < 1e-12, "theta mismatch {dt} at ({l}, {t})");
        }
    }

    #[test]
    fn natural_coords() {
        let n = to_natural(Vec3::new(0.0, 2.0, 0.0)).unwrap();
        assert_eq!((n.rho, n.lambda, n.theta), (2.0, 0.0, 0.0));

        let n = to_natural(Vec3::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!((n.rho, n.lambda, n.theta), (1.0, FRAC_PI_2, 0.0));

        let n = to_natural(Vec3::new(0.0, -1.0, -1.0)).unwrap();
        assert_abs_diff_eq!(n.rho, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(n.lambda, 3.0 * PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.theta, -FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn theodolite_directions() {
        assert_eq!(
            from_theodolite(&TheodoliteAngles::new(0.0, 0.0)),
            UnitDirection::F
        );
        let r = from_theodolite(&TheodoliteAngles::new(FRAC_PI_2, 0.0));
        assert_abs_diff_eq!(r.x(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.y(), 0.0, epsilon = 1e-15);

        // 45 degrees to the right on the horizon flattens to (pi/4, 0)
        let d = from_theodolite(&TheodoliteAngles::new(PI / 4.0, 0.0));
        assert_abs_diff_eq!(d.x(), 0.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(d.y(), 0.5f64.sqrt(), epsilon = 1e-15);
        let p = flatten(&d).unwrap();
        assert_abs_diff_eq!(p.lambda(), PI / 4.0, epsilon = 1e-15);
        assert_eq!(p.theta(), 0.0);
    }

    #[test]
    fn elevation_equals_disc_distance_on_vertical_line() {
        for &zeta in &[-1.2, -0.3, 0.0, 0.7, 1.5] {
            let d = from_theodolite(&TheodoliteAngles::new(0.0, zeta));
            let p = flatten(&d).unwrap();
            assert_abs_diff_eq!(p.lambda(), zeta.abs(), epsilon = 1e-12);
        }
    }

    #[test]
    fn measuring_line_reference_diameters() {
        // theta 0: the L-F-R diameter
        let m = measuring_line(0.0);
        assert_eq!(m.point_at(FRAC_PI_2), flatten(&UnitDirection::R).unwrap());
        assert_eq!(m.point_at(-FRAC_PI_2), flatten(&UnitDirection::L).unwrap());

        // theta pi/2: the D-F-U diameter
        let m = measuring_line(FRAC_PI_2);
        assert_eq!(m.point_at(FRAC_PI_2), flatten(&UnitDirection::U).unwrap());
        assert_eq!(m.point_at(-FRAC_PI_2), flatten(&UnitDirection::D).unwrap());
    }

    #[test]
    fn measuring_line_points_at_half_turn_are_antipodal() {
        let m = measuring_line(PI / 6.0);
        for &s in &[0.4, 1.0, FRAC_PI_2, 2.9, PI] {
            let a = unflatten(&m.point_at(s));
            let b = unflatten(&m.point_at(s - PI));
            assert!((a.vector() + b.vector()).norm() < 1e-12);
        }
        let (pos, neg) = m.endpoints();
        assert!(pos.is_blowup() && neg.is_blowup());
    }

    #[test]
    fn c1_distances_along_diameters_equal_angles() {
        let m = measuring_line(0.77);
        for &(l1, l2) in &[(0.1, 2.6), (0.0, PI), (1.3, 1.3001)] {
            let p = m.point_at(l1);
            let q = m.point_at(l2);
            let disc = p.distance_to(&q);
            let sphere = unflatten(&p).angle_to(&unflatten(&q));
            assert_abs_diff_eq!(disc, (l1 - l2).abs(), epsilon = 1e-12);
            assert_abs_diff_eq!(sphere, (l1 - l2).abs(), epsilon = 1e-12);
        }
    }

    #[test]
    fn diameter_arithmetic_is_exact_on_the_grid() {
        // pi - (pi - lambda) == lambda and theta wrap round-trips, bit-exact
        for i in 0..1000 {
            let p = DiscPoint::new(0.001 + (i as f64) * 0.00313, (i as f64) * 0.0071 - 3.0);
            let l2 = PI - p.lambda();
            assert_eq!(PI - l2, p.lambda());
            let t2 = opposite_azimuth(p.theta());
            let t3 = opposite_azimuth(t2);
            assert_eq!(t3, p.theta());
        }
    }

    #[test]
    fn azimuth_matches_planar_projection() {
        for &(x, y, z) in &[(0.3, 0.5, -0.7), (-0.2, -0.1, 0.4), (1.0, 3.0, 2.0)] {
            let d = UnitDirection::from_unit(Vec3::new(x, y, z).normalize());
            let p = flatten(&d).unwrap();
            assert_abs_diff_eq!(p.theta(), z.atan2(x), epsilon = 1e-12);
        }
    }
}
