//! Emulation of the ruler-compass-nail drawing procedures: arc primitives,
//! in-disc antipodes, line and parallel images built from a handful of
//! plotted points, and grid presets.
//!
//! Everything here produces drawable paths without evaluating the exact
//! perspective map along whole curves; the exact map is used only where the
//! drawing procedure itself measures an angle (plotting a single point).

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

use crate::flatten::{opposite_azimuth, DiscPoint};

pub mod arc;
pub mod fatline;
pub mod line_image;
pub mod presets;

pub use arc::{arc_through, arc_through_points, Arc, DiscPath, StraightSegment, COLLINEARITY_TOLERANCE};
pub use fatline::{fat_line, fat_line_with_azimuths, AnteriorMeridian, FatLine};
pub use line_image::{
    exact_parallel_point, frontal_line_anterior, frontal_line_image,
    frontal_posterior_line_image, parallel_image, plane_circle_image, receding_line_image,
    reflect_across_equator, trim_chain, LineImagePath, PosteriorPath,
};
pub use presets::{generate_preset, ElementRole, PresetElement, PresetSpec};

/// A line counts as frontal when its direction is orthogonal to the central
/// ray within this tolerance.
pub const FRONTAL_TOLERANCE: f64 = 1e-9;

/// Disc points closer than this to the center have no unique antipode.
pub const CENTER_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructError {
    #[error("points are not pairwise distinct")]
    DuplicatePoints,
    #[error("point coincides with the observer")]
    AtObserver,
    #[error("line is not frontal")]
    NotFrontal,
    #[error("line is frontal; use the frontal-line construction")]
    FrontalLine,
    #[error("line passes through the observer")]
    ThroughObserver,
    #[error("line does not lie in a posterior plane")]
    NotPosterior,
    #[error("the disc center has no unique antipode; it maps to the whole blowup")]
    CenterHasNoUniqueAntipode,
    #[error("blowup points have no in-disc antipode")]
    BlowupInput,
    #[error("a fat line needs at least 3 measuring lines")]
    TooFewKnots,
    #[error("path is not an anterior meridian image")]
    AnteriorNotMeridian,
    #[error("elevation at the poles degenerates to a point")]
    PoleElevation,
    #[error("invalid preset parameters: {0}")]
    InvalidParams(String),
}

/// Marker for the antipode of the disc center: the whole blowup circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlowupToken;

/// Image of a point on the observer's plane, plotted on the disc equator at
/// the azimuth of its back orthogonal view.
pub fn equator_point(x: f64, z: f64) -> Result<DiscPoint, ConstructError> {
    if x.hypot(z) <= 1e-12 {
        return Err(ConstructError::AtObserver);
    }
    Ok(DiscPoint::new(FRAC_PI_2, z.atan2(x)))
}

/// In-disc antipode: walk from `p` through the center along its measuring
/// line a disc distance of exactly `pi` (the disc radius).
///
/// Exact and bit-exactly involutive thanks to the angle grid of
/// [`DiscPoint`].
pub fn antipode_in_disc(p: &DiscPoint) -> Result<DiscPoint, ConstructError> {
    if p.lambda() <= CENTER_EPSILON {
        return Err(ConstructError::CenterHasNoUniqueAntipode);
    }
    if p.is_blowup() {
        return Err(ConstructError::BlowupInput);
    }
    Ok(DiscPoint::new(
        PI - p.lambda(),
        opposite_azimuth(p.theta()),
    ))
}

/// The antipode of the disc center is the whole blowup circle.
pub fn center_antipode() -> BlowupToken {
    BlowupToken
}

/// In-disc antipode by the freehand rule: find the blowup point `P_B` on
/// the ray from `p` through the center, then step back toward the center by
/// the distance from the center to `p`.
///
/// Returns the same point as [`antipode_in_disc`]; the walk is measured
/// from the rim instead of from `p`.
pub fn antipode_in_disc_freehand(p: &DiscPoint) -> Result<DiscPoint, ConstructError> {
    if p.lambda() <= CENTER_EPSILON {
        return Err(ConstructError::CenterHasNoUniqueAntipode);
    }
    if p.is_blowup() {
        return Err(ConstructError::BlowupInput);
    }
    let p_b = DiscPoint::blowup(opposite_azimuth(p.theta()));
    let from_rim = PI - p.lambda();
    let result = DiscPoint::new(from_rim, p_b.theta());
    // |result -> P_B| = |center -> p| and |result -> center| = |p -> -P_B|
    debug_assert_eq!(PI - result.lambda(), p.lambda());
    debug_assert_eq!(result.lambda(), PI - p.lambda());
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flatten::{flatten, unflatten};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn disc(l: f64, t: f64) -> DiscPoint {
        DiscPoint::new(l, t)
    }

    #[test]
    fn equator_point_references() {
        assert_eq!(equator_point(1.0, 0.0).unwrap(), disc(FRAC_PI_2, 0.0));
        assert_eq!(equator_point(0.0, -3.0).unwrap(), disc(FRAC_PI_2, -FRAC_PI_2));
        let p = equator_point(1.0, 1.0).unwrap();
        assert_eq!(p.lambda(), FRAC_PI_2);
        assert_abs_diff_eq!(p.theta(), FRAC_PI_4, epsilon = 1e-12);
        assert_eq!(equator_point(0.0, 0.0), Err(ConstructError::AtObserver));
    }

    #[test]
    fn antipode_of_reference_points() {
        let r = disc(FRAC_PI_2, 0.0);
        let l = antipode_in_disc(&r).unwrap();
        assert_eq!(l, disc(FRAC_PI_2, PI));
    }

    #[test]
    fn antipode_matches_exact_map() {
        for &(lambda, theta) in &[
            (1.0, 0.0),
            (FRAC_PI_4, FRAC_PI_2),
            (2.2, -1.3),
            (0.3, 3.0),
            (FRAC_PI_2 + 0.1, 0.9),
        ] {
            let p = disc(lambda, theta);
            let constructed = antipode_in_disc(&p).unwrap();
            let exact = flatten(&unflatten(&p).antipode()).unwrap();
            assert!(constructed.distance_to(&exact) < 1e-12);
        }
    }

    #[test]
    fn antipode_is_involutive_bit_exactly() {
        for i in 0..2000 {
            let p = disc(1e-6 + (i as f64) * 0.00157, (i as f64) * 0.37 - 3.0);
            if p.lambda() <= CENTER_EPSILON || p.is_blowup() {
                continue;
            }
            let q = antipode_in_disc(&p).unwrap();
            let back = antipode_in_disc(&q).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn freehand_agrees_with_ruler() {
        // walk on the measuring line: P at (pi/3, 0), P_B at (pi, pi)
        let p = disc(PI / 3.0, 0.0);
        let fh = antipode_in_disc_freehand(&p).unwrap();
        assert_eq!(fh, disc(2.0 * PI / 3.0, PI));
        assert_abs_diff_eq!(PI - fh.lambda(), p.lambda(), epsilon = 0.0);

        for &(lambda, theta) in &[(FRAC_PI_2, 0.0), (0.8, 2.0), (2.9, -0.4)] {
            let p = disc(lambda, theta);
            assert_eq!(
                antipode_in_disc(&p).unwrap(),
                antipode_in_disc_freehand(&p).unwrap()
            );
        }

        // just past the equator reflects to just inside it
        let p = disc(FRAC_PI_2 + 0.1, 1.0);
        let q = antipode_in_disc_freehand(&p).unwrap();
        assert_abs_diff_eq!(q.lambda(), FRAC_PI_2 - 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(q.theta(), 1.0 - PI, epsilon = 1e-15);
    }

    #[test]
    fn antipode_domain_errors() {
        assert_eq!(
            antipode_in_disc(&DiscPoint::CENTER),
            Err(ConstructError::CenterHasNoUniqueAntipode)
        );
        assert_eq!(
            antipode_in_disc(&DiscPoint::blowup(1.0)),
            Err(ConstructError::BlowupInput)
        );
        assert_eq!(center_antipode(), BlowupToken);
    }

    #[test]
    fn cyclic_order_along_the_measuring_line() {
        // signed coordinates of (-P_B), P, F, antipode, P_B strictly decrease
        for &(lambda, theta) in &[(0.4, 0.0), (1.8, -2.0), (3.0, 1.1)] {
            let p = disc(lambda, theta);
            let pbar = antipode_in_disc(&p).unwrap();
            let coords = [PI, p.lambda(), 0.0, -pbar.lambda(), -PI];
            for w in coords.windows(2) {
                assert!(w[0] > w[1], "order violated: {coords:?}");
            }
        }
    }
}
