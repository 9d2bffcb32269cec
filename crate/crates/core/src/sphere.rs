//! Observer-centered geometry on the unit sphere of directions.
//!
//! The observer `O` sits at the world origin. Every point of a scene other
//! than `O` defines a ray of sight, identified with a unit 3-vector. Lines
//! project onto great circles (minus two antipodal limit directions) and
//! planes onto hemispheres bounded by a great circle.
//!
//! Axis convention: `+y` is the central ray of sight (`F`), `+x` points
//! right (`R`), `+z` points up (`U`).

use nalgebra::Vector3;
use thiserror::Error;

/// World-space 3-vector.
pub type Vec3 = Vector3<f64>;

/// Distance below which a point/line/plane counts as passing through the
/// observer, in world units.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SphereError {
    /// The input coincides with the observer within tolerance.
    #[error("point coincides with the observer")]
    AtObserver,
}

/// A ray of sight from the observer, as a unit 3-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitDirection(Vec3);

impl UnitDirection {
    /// Front: the central ray of sight.
    pub const F: UnitDirection = UnitDirection(Vec3::new(0.0, 1.0, 0.0));
    /// Back: antipode of `F`.
    pub const B: UnitDirection = UnitDirection(Vec3::new(0.0, -1.0, 0.0));
    /// Right.
    pub const R: UnitDirection = UnitDirection(Vec3::new(1.0, 0.0, 0.0));
    /// Left.
    pub const L: UnitDirection = UnitDirection(Vec3::new(-1.0, 0.0, 0.0));
    /// Up.
    pub const U: UnitDirection = UnitDirection(Vec3::new(0.0, 0.0, 1.0));
    /// Down.
    pub const D: UnitDirection = UnitDirection(Vec3::new(0.0, 0.0, -1.0));

    /// Normalizes `v`. Fails when `|v| <= tolerance`.
    pub fn try_new(v: Vec3, tolerance: f64) -> Result<Self, SphereError> {
        let n = v.norm();
        if n <= tolerance {
            return Err(SphereError::AtObserver);
        }
        Ok(UnitDirection(v / n))
    }

    /// Wraps a vector that is already unit length (|norm - 1| <= 1e-12).
    pub fn from_unit(v: Vec3) -> Self {
        debug_assert!((v.norm() - 1.0).abs() <= 1e-12, "not a unit vector: {v:?}");
        UnitDirection(v)
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn vector(&self) -> Vec3 {
        self.0
    }

    /// Diametrically opposite direction.
    pub fn antipode(&self) -> UnitDirection {
        UnitDirection(-self.0)
    }

    pub fn dot(&self, other: &UnitDirection) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn cross(&self, other: &UnitDirection) -> Vec3 {
        self.0.cross(&other.0)
    }

    /// Angle between two directions, in `[0, pi]`.
    ///
    /// Computed from both the cross and dot products so it stays accurate
    /// for nearly parallel and nearly antipodal pairs.
    pub fn angle_to(&self, other: &UnitDirection) -> f64 {
        self.0.cross(&other.0).norm().atan2(self.0.dot(&other.0))
    }
}

impl std::ops::Neg for UnitDirection {
    type Output = UnitDirection;

    fn neg(self) -> UnitDirection {
        self.antipode()
    }
}

/// A line in world space: any point on it plus a unit direction.
///
/// `(point, dir)` and `(point, -dir)` denote the same line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceLine {
    pub point: Vec3,
    pub dir: UnitDirection,
}

impl SpaceLine {
    pub fn new(point: Vec3, dir: UnitDirection) -> Self {
        SpaceLine { point, dir }
    }

    /// Line through two distinct points.
    pub fn through(a: Vec3, b: Vec3) -> Result<Self, SphereError> {
        let dir = UnitDirection::try_new(b - a, DEGENERACY_TOLERANCE)?;
        Ok(SpaceLine { point: a, dir })
    }

    pub fn point_at(&self, t: f64) -> Vec3 {
        self.point + self.dir.vector() * t
    }

    /// Distance from the observer (origin) to the line.
    pub fn distance_to_observer(&self) -> f64 {
        self.point.cross(&self.dir.vector()).norm()
    }
}

/// A plane in world space: a point on it plus a unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacePlane {
    pub point: Vec3,
    pub normal: UnitDirection,
}

impl SpacePlane {
    pub fn new(point: Vec3, normal: UnitDirection) -> Self {
        SpacePlane { point, normal }
    }

    /// Signed distance from the observer (origin) to the plane.
    pub fn observer_offset(&self) -> f64 {
        self.point.dot(&self.normal.vector())
    }
}

/// A circle cut on the unit sphere by a plane through the observer.
///
/// `normal` and `-normal` denote the same circle.
#[derive(Debug, Clone, Copy)]
pub struct GreatCircle {
    pub normal: UnitDirection,
}

impl GreatCircle {
    pub fn new(normal: UnitDirection) -> Self {
        GreatCircle { normal }
    }

    /// True when `d` lies on the circle's plane within `tol`.
    pub fn contains(&self, d: &UnitDirection, tol: f64) -> bool {
        self.normal.dot(d).abs() <= tol
    }
}

/// Sphere image of a line: its great circle and two vanishing directions.
///
/// When the line passes through the observer there is no circle; the sphere
/// image collapses to the two antipodal points `±dir` and `circle` is `None`.
#[derive(Debug, Clone, Copy)]
pub struct SphereLineImage {
    pub circle: Option<GreatCircle>,
    pub v_plus: UnitDirection,
    pub v_minus: UnitDirection,
}

impl SphereLineImage {
    pub fn is_degenerate(&self) -> bool {
        self.circle.is_none()
    }

    /// The vanishing direction on the anterior side (`y > 0`).
    ///
    /// Ties at `y = 0` break toward `+y`, then `+x`, then `+z`.
    pub fn anterior_vanishing(&self) -> UnitDirection {
        anterior_of(self.v_plus)
    }
}

/// Picks whichever of `d`, `-d` points into the anterior half-space,
/// tie-breaking toward `+y`, then `+x`, then `+z`.
pub fn anterior_of(d: UnitDirection) -> UnitDirection {
    let keep = if d.y() != 0.0 {
        d.y() > 0.0
    } else if d.x() != 0.0 {
        d.x() > 0.0
    } else {
        d.z() >= 0.0
    };
    if keep {
        d
    } else {
        d.antipode()
    }
}

/// Ray of sight through `point`, i.e. the anamorphism onto the unit sphere.
pub fn direction_of(point: Vec3, tolerance: f64) -> Result<UnitDirection, SphereError> {
    UnitDirection::try_new(point, tolerance)
}

/// Antipode of a direction.
pub fn antipode(d: UnitDirection) -> UnitDirection {
    d.antipode()
}

/// Great circle and vanishing directions of a line.
///
/// The vanishing directions are `±l.dir`; the circle is cut by the plane
/// through the observer containing the line. A line through the observer is
/// degenerate: it projects onto the two antipodal points `±l.dir` alone and
/// no circle is reported.
pub fn vanishing_points_of_line(l: &SpaceLine) -> SphereLineImage {
    vanishing_points_of_line_with_tolerance(l, DEGENERACY_TOLERANCE)
}

pub fn vanishing_points_of_line_with_tolerance(l: &SpaceLine, tolerance: f64) -> SphereLineImage {
    let cross = l.point.cross(&l.dir.vector());
    let circle = if cross.norm() <= tolerance {
        None
    } else {
        Some(GreatCircle::new(UnitDirection::from_unit(cross.normalize())))
    };
    SphereLineImage {
        circle,
        v_plus: l.dir,
        v_minus: l.dir.antipode(),
    }
}

/// Vanishing line of a plane, with a degeneracy flag.
#[derive(Debug, Clone, Copy)]
pub struct PlaneVanishingLine {
    pub circle: GreatCircle,
    /// True when the observer lies on the plane: the plane projects onto the
    /// whole circle with no vanishing points.
    pub degenerate: bool,
}

/// Vanishing line of a plane: the great circle cut by the parallel plane
/// through the observer.
pub fn vanishing_line_of_plane(h: &SpacePlane) -> PlaneVanishingLine {
    vanishing_line_of_plane_with_tolerance(h, DEGENERACY_TOLERANCE)
}

pub fn vanishing_line_of_plane_with_tolerance(h: &SpacePlane, tolerance: f64) -> PlaneVanishingLine {
    PlaneVanishingLine {
        circle: GreatCircle::new(h.normal),
        degenerate: h.observer_offset().abs() <= tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn direction_of_normalizes() {
        let d = direction_of(Vec3::new(0.0, 5.0, 0.0), 1e-9).unwrap();
        assert_eq!(d, UnitDirection::F);

        let d = direction_of(Vec3::new(3.0, 0.0, 4.0), 1e-9).unwrap();
        assert_abs_diff_eq!(d.x(), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(d.y(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.z(), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn direction_of_rejects_observer() {
        assert_eq!(
            direction_of(Vec3::zeros(), 1e-9),
            Err(SphereError::AtObserver)
        );
    }

    #[test]
    fn antipode_of_reference_directions() {
        assert_eq!(antipode(UnitDirection::F), UnitDirection::B);
        assert_eq!(antipode(UnitDirection::R), UnitDirection::L);
        let d = UnitDirection::from_unit(Vec3::new(0.6, 0.0, 0.8));
        let a = antipode(d);
        assert_eq!(a.vector(), Vec3::new(-0.6, 0.0, -0.8));
        // involution is exact
        assert_eq!(antipode(a), d);
    }

    #[test]
    fn line_vanishing_points_translated_line() {
        let l = SpaceLine::new(Vec3::new(0.0, 1.0, -1.0), UnitDirection::R);
        let img = vanishing_points_of_line(&l);
        assert_eq!(img.v_plus, UnitDirection::R);
        assert_eq!(img.v_minus, UnitDirection::L);
        let n = img.circle.unwrap().normal;
        // normal proportional to (0,1,-1) x (1,0,0) = (0,-1,-1)
        let expected = Vec3::new(0.0, -1.0, -1.0).normalize();
        assert_abs_diff_eq!(n.vector().dot(&expected).abs(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn line_through_observer_is_degenerate() {
        let dir = UnitDirection::from_unit(Vec3::new(1.0, 1.0, 1.0).normalize());
        let l = SpaceLine::new(Vec3::new(1.0, 1.0, 1.0), dir);
        let img = vanishing_points_of_line(&l);
        assert!(img.is_degenerate());
        assert_eq!(img.v_plus, dir);
    }

    #[test]
    fn line_vanishing_points_cross_product_case() {
        let l = SpaceLine::new(Vec3::new(0.0, 0.0, -1.0), UnitDirection::F);
        let img = vanishing_points_of_line(&l);
        assert_eq!(img.v_plus, UnitDirection::F);
        assert_eq!(img.v_minus, UnitDirection::B);
        let n = img.circle.unwrap().normal;
        assert_abs_diff_eq!(n.x().abs(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n.y(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n.z(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn plane_vanishing_line() {
        // z = -1, normal U: horizon circle, not degenerate
        let h = SpacePlane::new(Vec3::new(0.0, 0.0, -1.0), UnitDirection::U);
        let v = vanishing_line_of_plane(&h);
        assert!(!v.degenerate);
        assert_eq!(v.circle.normal, UnitDirection::U);

        // y = 0 through the observer: equator circle, degenerate
        let h = SpacePlane::new(Vec3::new(3.0, 0.0, 2.0), UnitDirection::F);
        let v = vanishing_line_of_plane(&h);
        assert!(v.degenerate);
        assert_eq!(v.circle.normal, UnitDirection::F);
    }

    #[test]
    fn plane_vanishing_line_normalization() {
        // x + z = 2
        let n = UnitDirection::from_unit(Vec3::new(1.0, 0.0, 1.0).normalize());
        let h = SpacePlane::new(Vec3::new(2.0, 0.0, 0.0), n);
        let v = vanishing_line_of_plane(&h);
        assert!(!v.degenerate);
        assert_abs_diff_eq!(v.circle.normal.x(), (0.5f64).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(v.circle.normal.z(), (0.5f64).sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn sampled_line_points_lie_on_vanishing_circle() {
        let lines = [
            SpaceLine::new(Vec3::new(0.0, 1.0, -1.0), UnitDirection::R),
            SpaceLine::new(
                Vec3::new(2.0, -0.5, 0.3),
                UnitDirection::from_unit(Vec3::new(1.0, 2.0, -0.5).normalize()),
            ),
        ];
        for l in &lines {
            let img = vanishing_points_of_line(l);
            let n = img.circle.unwrap().normal;
            for i in -20..=20 {
                let t = i as f64 * 0.7;
                let d = direction_of(l.point_at(t), 1e-9).unwrap();
                assert!(n.dot(&d).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn vanishing_directions_are_limits_of_sight() {
        let l = SpaceLine::new(
            Vec3::new(2.0, -0.5, 0.3),
            UnitDirection::from_unit(Vec3::new(1.0, 2.0, -0.5).normalize()),
        );
        let img = vanishing_points_of_line(&l);
        let big = 1e7 + 1.0;
        let fwd = direction_of(l.point_at(big), 1e-9).unwrap();
        let bwd = direction_of(l.point_at(-big), 1e-9).unwrap();
        assert!(fwd.angle_to(&img.v_plus) < 1e-6);
        assert!(bwd.angle_to(&img.v_minus) < 1e-6);
    }

    #[test]
    fn parallel_lines_share_vanishing_directions() {
        let dir = UnitDirection::from_unit(Vec3::new(0.3, -1.0, 0.8).normalize());
        let a = vanishing_points_of_line(&SpaceLine::new(Vec3::new(1.0, 2.0, 3.0), dir));
        let b = vanishing_points_of_line(&SpaceLine::new(Vec3::new(-4.0, 0.1, 9.0), dir));
        assert_eq!(a.v_plus, b.v_plus);
        assert_eq!(a.v_minus, b.v_minus);
    }

    #[test]
    fn anterior_vanishing_tie_breaks() {
        // y > 0 side wins
        let img = vanishing_points_of_line(&SpaceLine::new(
            Vec3::new(1.0, 0.0, 0.0),
            UnitDirection::from_unit(Vec3::new(0.0, -1.0, 0.0)),
        ));
        assert_eq!(img.anterior_vanishing(), UnitDirection::F);
        // y = 0: +x wins
        assert_eq!(anterior_of(UnitDirection::L), UnitDirection::R);
        // y = 0, x = 0: +z wins
        assert_eq!(anterior_of(UnitDirection::D), UnitDirection::U);
    }
}
