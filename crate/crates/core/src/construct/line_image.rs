//! Flattened images of spatial lines, parallels, and plane vanishing
//! circles, built the way a draughtsman would: a three-point anterior arc,
//! antipodes through the nail construction, and a fat line for the
//! posterior part.
//!
//! Every builder returns a [`LineImagePath`]: the great circle's anterior
//! and posterior images, the two points delimiting the entity's own
//! meridian, and the meridian/completion split ready for drawing (solid
//! vs dashed).

use std::f64::consts::{FRAC_PI_2, PI};

use crate::construct::arc::{arc_through_points, Arc, DiscPath, StraightSegment};
use crate::construct::fatline::{
    anterior_span, chain_through, fat_line, AnteriorMeridian, FatLine,
};
use crate::construct::{
    antipode_in_disc, equator_point, ConstructError, FRONTAL_TOLERANCE,
};
use crate::flatten::{
    flatten, from_theodolite, wrap_angle, DiscPoint, TheodoliteAngles, Vec2,
};
use crate::sphere::{
    direction_of, vanishing_points_of_line, GreatCircle, SpaceLine, UnitDirection, Vec3,
    DEGENERACY_TOLERANCE,
};

/// Posterior image of a great circle (or of the entity delimited on it).
#[derive(Debug, Clone)]
pub enum PosteriorPath {
    /// Interpolated chain of overlapping arcs.
    Fat(FatLine),
    /// Degenerate: a single straight piece.
    Segment(StraightSegment),
    /// Two collinear radius pieces, connected only through the blowup.
    Split(StraightSegment, StraightSegment),
    /// The circle has no posterior image (it is the equator itself).
    Empty,
}

/// Image of a line (or parallel, or plane circle) on the perspective disc.
#[derive(Debug, Clone)]
pub struct LineImagePath {
    /// Anterior image of the full great circle.
    pub anterior: DiscPath,
    /// Posterior image of the full great circle.
    pub posterior: PosteriorPath,
    /// The two vanishing disc points delimiting the entity's meridian (for
    /// parallels, the equator junctions).
    pub endpoints: [DiscPoint; 2],
    /// The entity's own image, drawn solid: sequential pieces from
    /// `endpoints[0]` to `endpoints[1]` (closed images carry both halves,
    /// each running between the endpoints).
    pub meridian: Vec<DiscPath>,
    /// Remainder of the great circle. Drawn dashed.
    pub completion: Vec<DiscPath>,
    /// True when the meridian passes through the blowup (the image is
    /// disconnected on the disc but connected through `B`).
    pub crosses_blowup: bool,
}

impl LineImagePath {
    /// Fatness of the posterior interpolation, when there is one.
    pub fn fatness(&self) -> Option<f64> {
        match &self.posterior {
            PosteriorPath::Fat(f) => Some(f.fatness()),
            _ => None,
        }
    }

    /// All drawable pieces, meridian first.
    pub fn all_pieces(&self) -> impl Iterator<Item = &DiscPath> {
        self.meridian.iter().chain(self.completion.iter())
    }
}

fn reverse_chain(chain: Vec<DiscPath>) -> Vec<DiscPath> {
    chain.into_iter().rev().map(|p| p.reversed()).collect()
}

/// Image of a central line (direction along the central axis): the radius
/// through its observer-plane crossing, extended to the blowup.
fn central_line_image(p: &DiscPoint, p_bar: &DiscPoint) -> LineImagePath {
    let blow = DiscPoint::blowup(p.theta());
    let blow_bar = DiscPoint::blowup(p_bar.theta());
    LineImagePath {
        anterior: DiscPath::Segment(StraightSegment::between(p_bar, p)),
        posterior: PosteriorPath::Split(
            StraightSegment::between(p, &blow),
            StraightSegment::between(p_bar, &blow_bar),
        ),
        endpoints: [DiscPoint::CENTER, blow],
        meridian: vec![DiscPath::Segment(StraightSegment::between(
            &DiscPoint::CENTER,
            &blow,
        ))],
        completion: vec![DiscPath::Segment(StraightSegment::between(
            &DiscPoint::CENTER,
            &blow_bar,
        ))],
        crosses_blowup: false,
    }
}

/// Image of a receding line (one that crosses the observer's plane at a
/// single point), solved on the full disc.
///
/// Plots the observer-plane crossing `P` on the equator, its antipode
/// `P̄`, and the anterior vanishing point `V`; the anterior arc runs
/// `P-V-P̄` and a fat line through `k` measuring lines gives the posterior
/// meridian. The line's own image keeps the `V..P..V̄` side.
pub fn receding_line_image(l: &SpaceLine, k: usize) -> Result<LineImagePath, ConstructError> {
    let img = vanishing_points_of_line(l);
    let Some(circle) = img.circle else {
        return Err(ConstructError::ThroughObserver);
    };
    if l.dir.y().abs() <= FRONTAL_TOLERANCE {
        return Err(ConstructError::FrontalLine);
    }

    let w = l.point_at(-l.point.y / l.dir.y());
    let p = equator_point(w.x, w.z)?;
    let p_bar = antipode_in_disc(&p)?;

    let v_dir = img.anterior_vanishing();
    if v_dir.x().hypot(v_dir.z()) <= FRONTAL_TOLERANCE {
        return Ok(central_line_image(&p, &p_bar));
    }
    let v = flatten(&v_dir).expect("anterior vanishing direction is not at B");
    let v_bar = antipode_in_disc(&v)?;

    match arc_through_points(&p, &v, &p_bar)? {
        DiscPath::Arc(arc) => {
            let anterior = DiscPath::Arc(arc);
            let fat = fat_line(&AnteriorMeridian {
                path: anterior,
                circle,
            }, k)?;
            let tv = arc.nearest_param(v.cartesian());
            let a_head = anterior.sub_path(0.0, tv); // P -> V
            let a_tail = anterior.sub_path(tv, 1.0); // V -> P̄
            let (chain_before, chain_after) = fat.split_reduced_at(v_bar.cartesian());

            let mut meridian = vec![a_head.reversed()]; // V -> P
            meridian.extend(reverse_chain(chain_after)); // P -> V̄
            let mut completion = vec![a_tail]; // V -> P̄
            completion.extend(chain_before); // P̄ -> V̄

            Ok(LineImagePath {
                anterior,
                posterior: PosteriorPath::Fat(fat),
                endpoints: [v, v_bar],
                meridian,
                completion,
                crosses_blowup: false,
            })
        }
        DiscPath::Segment(_) => {
            // V sits on the P-P̄ diameter: the whole great circle images
            // onto one measuring line.
            let blow_p = DiscPoint::blowup(p.theta());
            let blow_pbar = DiscPoint::blowup(p_bar.theta());
            let anterior = DiscPath::Segment(StraightSegment::between(&p_bar, &p));
            let posterior = PosteriorPath::Split(
                StraightSegment::between(&p, &blow_p),
                StraightSegment::between(&p_bar, &blow_pbar),
            );
            let same_side = wrap_angle(v.theta() - p.theta()).abs() < FRAC_PI_2;
            let (meridian, completion, crosses) = if same_side {
                // the line passes behind the observer: out through the
                // blowup and back in on the other radius
                (
                    vec![
                        DiscPath::Segment(StraightSegment::between(&v, &blow_p)),
                        DiscPath::Segment(StraightSegment::between(&blow_pbar, &v_bar)),
                    ],
                    vec![
                        DiscPath::Segment(StraightSegment::between(&DiscPoint::CENTER, &v)),
                        DiscPath::Segment(StraightSegment::between(&DiscPoint::CENTER, &v_bar)),
                    ],
                    true,
                )
            } else {
                // the line passes in front: straight through the center
                (
                    vec![DiscPath::Segment(StraightSegment::between(&v, &v_bar))],
                    vec![
                        DiscPath::Segment(StraightSegment::between(&v, &blow_pbar)),
                        DiscPath::Segment(StraightSegment::between(&v_bar, &blow_p)),
                    ],
                    false,
                )
            };
            Ok(LineImagePath {
                anterior,
                posterior,
                endpoints: [v, v_bar],
                meridian,
                completion,
                crosses_blowup: crosses,
            })
        }
    }
}

/// Shared validation for frontal lines; returns the two equatorial
/// vanishing disc points and the sagittal (or, for vertical lines,
/// horizon) crossing point.
fn frontal_setup(l: &SpaceLine) -> Result<(DiscPoint, DiscPoint, Vec3), ConstructError> {
    if l.dir.y().abs() > FRONTAL_TOLERANCE {
        return Err(ConstructError::NotFrontal);
    }
    if l.distance_to_observer() <= DEGENERACY_TOLERANCE {
        return Err(ConstructError::ThroughObserver);
    }
    let v = equator_point(l.dir.x(), l.dir.z())?;
    let v_bar = antipode_in_disc(&v)?;
    let crossing = if l.dir.x().abs() > FRONTAL_TOLERANCE {
        l.point_at(-l.point.x / l.dir.x())
    } else {
        l.point_at(-l.point.z / l.dir.z())
    };
    Ok((v, v_bar, crossing))
}

/// Anterior image of a frontal line: the arc through its two equatorial
/// vanishing points and the plotted crossing with the sagittal plane (for
/// vertical lines, with the horizon plane).
///
/// Returns the straight diameter when the crossing sits on the central
/// axis, and a half-equator arc when the line lies on the observer's
/// plane.
pub fn frontal_line_anterior(l: &SpaceLine) -> Result<DiscPath, ConstructError> {
    let (v, v_bar, crossing) = frontal_setup(l)?;
    let dir = direction_of(crossing, 1e-12).map_err(|_| ConstructError::ThroughObserver)?;
    match flatten(&dir) {
        Err(_) => Ok(DiscPath::Segment(StraightSegment::between(&v, &v_bar))),
        Ok(p) => arc_through_points(&v, &p, &v_bar),
    }
}

/// Image of a frontal line lying in a posterior plane.
///
/// The crossing `P` lands on the outer ring; its in-disc antipode `P̄`
/// gives the anterior auxiliary arc `V-P̄-V̄`, whose fat line is the actual
/// image of the line. When `P` falls on the `B` ray the image degenerates
/// to two collinear outer segments, connected only through the blowup.
pub fn frontal_posterior_line_image(
    l: &SpaceLine,
    k: usize,
) -> Result<LineImagePath, ConstructError> {
    let (v, v_bar, crossing) = frontal_setup(l)?;
    if crossing.y >= -DEGENERACY_TOLERANCE {
        return Err(ConstructError::NotPosterior);
    }
    let circle = vanishing_points_of_line(l)
        .circle
        .expect("frontal_setup rejects lines through the observer");

    let dir = direction_of(crossing, 1e-12).map_err(|_| ConstructError::ThroughObserver)?;
    let aux = match flatten(&dir) {
        Err(_) => None,
        Ok(p_post) => {
            let p_bar = antipode_in_disc(&p_post)?;
            match arc_through_points(&v, &p_bar, &v_bar)? {
                DiscPath::Arc(a) => Some(a),
                DiscPath::Segment(_) => None,
            }
        }
    };

    match aux {
        None => Ok(blowup_crossing_image(&v, &v_bar)),
        Some(arc) => {
            let path = DiscPath::Arc(arc);
            let fat = fat_line(&AnteriorMeridian { path, circle }, k)?;
            // the chain runs from the antipode of V, i.e. from V̄ back to V
            let meridian = reverse_chain(fat.reduced_chain());
            Ok(LineImagePath {
                anterior: path,
                posterior: PosteriorPath::Fat(fat),
                endpoints: [v, v_bar],
                meridian,
                completion: vec![path],
                crosses_blowup: false,
            })
        }
    }
}

/// Image of a line whose meridian runs through `B`: the two outer halves
/// of the `V`-`V̄` diameter.
fn blowup_crossing_image(v: &DiscPoint, v_bar: &DiscPoint) -> LineImagePath {
    let blow_v = DiscPoint::blowup(v.theta());
    let blow_vbar = DiscPoint::blowup(v_bar.theta());
    let out_v = StraightSegment::between(v, &blow_v);
    let out_vbar = StraightSegment::between(v_bar, &blow_vbar);
    LineImagePath {
        anterior: DiscPath::Segment(StraightSegment::between(v, v_bar)),
        posterior: PosteriorPath::Split(out_v, out_vbar),
        endpoints: [*v, *v_bar],
        meridian: vec![
            DiscPath::Segment(out_v),
            DiscPath::Segment(out_vbar.reversed()),
        ],
        completion: vec![DiscPath::Segment(StraightSegment::between(v, v_bar))],
        crosses_blowup: true,
    }
}

/// Full image of a frontal line, routed by the position of its plane:
/// anterior, on the observer's plane, or posterior.
pub fn frontal_line_image(l: &SpaceLine, k: usize) -> Result<LineImagePath, ConstructError> {
    let (v, v_bar, crossing) = frontal_setup(l)?;
    let plane_y = crossing.y;

    if plane_y < -DEGENERACY_TOLERANCE {
        return frontal_posterior_line_image(l, k);
    }

    let circle = vanishing_points_of_line(l)
        .circle
        .expect("frontal_setup rejects lines through the observer");
    let path = frontal_line_anterior(l)?;

    if plane_y <= DEGENERACY_TOLERANCE {
        // observer's plane: the circle is the equator and the line images
        // onto one half of it
        let other = match path {
            DiscPath::Arc(a) => {
                let sweep = a.sweep().signum() * (std::f64::consts::TAU - a.sweep().abs());
                DiscPath::Arc(Arc::new(a.center(), a.radius(), a.end_angle(), sweep))
            }
            // degenerate placement; no half-equator to complete
            DiscPath::Segment(s) => DiscPath::Segment(s),
        };
        return Ok(LineImagePath {
            anterior: path,
            posterior: PosteriorPath::Empty,
            endpoints: [v, v_bar],
            meridian: vec![path],
            completion: vec![other],
            crosses_blowup: false,
        });
    }

    match path {
        DiscPath::Arc(_) => {
            let fat = fat_line(&AnteriorMeridian { path, circle }, k)?;
            let completion = fat.reduced_chain();
            Ok(LineImagePath {
                anterior: path,
                posterior: PosteriorPath::Fat(fat),
                endpoints: [v, v_bar],
                meridian: vec![path],
                completion,
                crosses_blowup: false,
            })
        }
        DiscPath::Segment(_) => {
            // the line passes over the central axis: inner diameter plus
            // outer radius completions
            let blow_v = DiscPoint::blowup(v.theta());
            let blow_vbar = DiscPoint::blowup(v_bar.theta());
            let out_v = StraightSegment::between(&v, &blow_v);
            let out_vbar = StraightSegment::between(&v_bar, &blow_vbar);
            Ok(LineImagePath {
                anterior: path,
                posterior: PosteriorPath::Split(out_v, out_vbar),
                endpoints: [v, v_bar],
                meridian: vec![path],
                completion: vec![DiscPath::Segment(out_v), DiscPath::Segment(out_vbar)],
                crosses_blowup: false,
            })
        }
    }
}

/// Exact anterior point of the elevation-`zeta` parallel at disc azimuth
/// `theta` (must lie within the parallel's azimuth span).
pub fn exact_parallel_point(zeta: f64, theta: f64) -> DiscPoint {
    let ratio = (zeta.tan() / theta.tan()).clamp(-1.0, 1.0);
    let xi = ratio.asin();
    flatten(&from_theodolite(&TheodoliteAngles::new(xi, zeta)))
        .expect("parallel points are never at B")
}

/// Mirror of a disc point across the equator circle along its measuring
/// line: the reflection `Q` with the equator crossing as midpoint of `PQ`.
/// Exact on the angle grid.
pub fn reflect_across_equator(p: &DiscPoint) -> DiscPoint {
    DiscPoint::new(PI - p.lambda(), p.theta())
}

/// Image of the circle of constant angular elevation `zeta`, built from
/// the three-point anterior arc and the equator-midpoint reflection rule
/// for the posterior half.
pub fn parallel_image(zeta: f64, k: usize) -> Result<LineImagePath, ConstructError> {
    if zeta.abs() >= FRAC_PI_2 - 1e-12 {
        return Err(ConstructError::PoleElevation);
    }
    if k < 3 {
        return Err(ConstructError::TooFewKnots);
    }

    let p_r = DiscPoint::new(FRAC_PI_2, zeta);
    let p_l = DiscPoint::new(FRAC_PI_2, wrap_angle(PI - zeta));

    if zeta.abs() <= 1e-12 {
        return Ok(horizon_image(&p_r, &p_l));
    }

    let apex = DiscPoint::new(zeta.abs(), if zeta >= 0.0 { FRAC_PI_2 } else { -FRAC_PI_2 });
    let path = match arc_through_points(&p_r, &apex, &p_l)? {
        DiscPath::Arc(a) => DiscPath::Arc(a),
        // elevation so small the arc collapses onto the horizon diameter
        DiscPath::Segment(_) => return Ok(horizon_image(&p_r, &p_l)),
    };

    let (start, sweep) = anterior_span(&path)?;
    let mut reflected = Vec::with_capacity(k + 2);
    for i in 0..=(k + 1) {
        let theta_m = start + sweep * (i as f64) / ((k + 1) as f64);
        let y = exact_parallel_point(zeta, theta_m);
        reflected.push(reflect_across_equator(&y));
    }
    let fat = chain_through(&reflected)?;

    let mut meridian = vec![path];
    meridian.extend(fat.reduced_chain());
    Ok(LineImagePath {
        anterior: path,
        posterior: PosteriorPath::Fat(fat),
        endpoints: [p_r, p_l],
        meridian,
        completion: Vec::new(),
        crosses_blowup: false,
    })
}

/// The elevation-zero parallel is the horizon great circle: the full
/// horizontal measuring line, exact, fatness zero.
fn horizon_image(p_r: &DiscPoint, p_l: &DiscPoint) -> LineImagePath {
    let blow_r = DiscPoint::blowup(p_r.theta());
    let blow_l = DiscPoint::blowup(p_l.theta());
    let inner = StraightSegment::between(p_r, p_l);
    let out_r = StraightSegment::between(p_r, &blow_r);
    let out_l = StraightSegment::between(p_l, &blow_l);
    LineImagePath {
        anterior: DiscPath::Segment(inner),
        posterior: PosteriorPath::Split(out_r, out_l),
        endpoints: [*p_r, *p_l],
        meridian: vec![
            DiscPath::Segment(inner),
            DiscPath::Segment(out_r),
            DiscPath::Segment(out_l),
        ],
        completion: Vec::new(),
        crosses_blowup: true,
    }
}

/// Image of a plane's vanishing circle, drawn whole (both meridians are
/// part of the plane's image).
pub fn plane_circle_image(circle: &GreatCircle, k: usize) -> Result<LineImagePath, ConstructError> {
    let n = circle.normal;
    let planar = n.x().hypot(n.z());

    if planar <= FRONTAL_TOLERANCE {
        // frontal plane: the vanishing line is the equator itself
        let eq = DiscPath::Arc(Arc::full_circle(Vec2::zeros(), FRAC_PI_2));
        let seam = DiscPoint::new(FRAC_PI_2, 0.0);
        return Ok(LineImagePath {
            anterior: eq,
            posterior: PosteriorPath::Empty,
            endpoints: [seam, seam],
            meridian: vec![eq],
            completion: Vec::new(),
            crosses_blowup: false,
        });
    }

    let e_dir = Vec3::new(n.x(), n.y(), n.z())
        .cross(&Vec3::new(0.0, 1.0, 0.0))
        .normalize();
    let e0 = equator_point(e_dir.x, e_dir.z)?;
    let e1 = antipode_in_disc(&e0)?;

    if n.y().abs() <= FRONTAL_TOLERANCE {
        // the plane contains the central axis: its circle images onto the
        // full measuring line through e0
        let mut img = blowup_crossing_image(&e0, &e1);
        img.meridian
            .push(DiscPath::Segment(StraightSegment::between(&e0, &e1)));
        img.completion.clear();
        return Ok(img);
    }

    let y_axis = Vec3::new(0.0, 1.0, 0.0);
    let apex_dir = (y_axis - n.vector() * n.y()).normalize();
    let apex = flatten(&UnitDirection::from_unit(apex_dir)).expect("apex is anterior");
    let path = arc_through_points(&e0, &apex, &e1)?;
    let fat = fat_line(&AnteriorMeridian {
        path,
        circle: *circle,
    }, k)?;
    let mut meridian = vec![path];
    meridian.extend(fat.reduced_chain());
    Ok(LineImagePath {
        anterior: path,
        posterior: PosteriorPath::Fat(fat),
        endpoints: [e0, e1],
        meridian,
        completion: Vec::new(),
        crosses_blowup: false,
    })
}

/// Locates `p` on a sequential chain: piece index, parameter, distance.
fn locate(chain: &[DiscPath], p: Vec2) -> (usize, f64, f64) {
    let mut best = (0usize, 0.0f64, f64::INFINITY);
    for (i, piece) in chain.iter().enumerate() {
        let t = piece.nearest_param(p);
        let d = (piece.point_at(t) - p).norm();
        if d < best.2 {
            best = (i, t, d);
        }
    }
    best
}

/// Sub-chain of a sequential chain between the points nearest to `a` and
/// `b` (used to trim a spatial segment's image out of its line's
/// meridian).
pub fn trim_chain(chain: &[DiscPath], a: Vec2, b: Vec2) -> Vec<DiscPath> {
    if chain.is_empty() {
        return Vec::new();
    }
    let (ia, ta, _) = locate(chain, a);
    let (ib, tb, _) = locate(chain, b);
    let ((i0, t0), (i1, t1)) = if (ia, ta) <= (ib, tb) {
        ((ia, ta), (ib, tb))
    } else {
        ((ib, tb), (ia, ta))
    };
    if i0 == i1 {
        return vec![chain[i0].sub_path(t0, t1)];
    }
    let mut out = Vec::new();
    out.push(chain[i0].sub_path(t0, 1.0));
    out.extend_from_slice(&chain[i0 + 1..i1]);
    out.push(chain[i1].sub_path(0.0, t1));
    out.retain(|p| p.length() > 1e-12);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn dline(p: Vec3, d: Vec3) -> SpaceLine {
        SpaceLine::new(p, UnitDirection::from_unit(d.normalize()))
    }

    #[test]
    fn central_line_is_a_radius() {
        // through (1,0,0) along the central axis: radius from R through F,
        // posterior continuation on the great-circle image at theta = pi
        let img = receding_line_image(&dline(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)), 8)
            .unwrap();
        assert_eq!(img.endpoints[0], DiscPoint::CENTER);
        assert!(img.endpoints[1].is_blowup());
        assert_eq!(img.endpoints[1].theta(), 0.0);
        assert_eq!(img.meridian.len(), 1);
        // the radius passes through R's disc point
        assert!(img.meridian[0].distance_to(Vec2::new(FRAC_PI_2, 0.0)) < 1e-12);
        // completion is the opposite radius
        assert!(img.completion[0].distance_to(Vec2::new(-FRAC_PI_2, 0.0)) < 1e-12);

        let img = receding_line_image(&dline(Vec3::new(0.0, 0.0, -1.0), Vec3::new(0.0, 1.0, 0.0)), 8)
            .unwrap();
        // radius from D to F
        assert!(img.meridian[0].distance_to(Vec2::new(0.0, -FRAC_PI_2)) < 1e-12);
    }

    #[test]
    fn receding_line_anterior_arc() {
        // through (1,0,0), rising backward at 45 degrees
        let l = dline(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 1.0));
        let img = receding_line_image(&l, 8).unwrap();
        let v = img.endpoints[0];
        assert_abs_diff_eq!(v.lambda(), FRAC_PI_4, epsilon = 1e-12);
        assert_abs_diff_eq!(v.theta(), FRAC_PI_2, epsilon = 1e-12);
        // anterior arc passes P = (pi/2, 0), V, P̄ = (pi/2, pi)
        for p in [
            DiscPoint::new(FRAC_PI_2, 0.0),
            v,
            DiscPoint::new(FRAC_PI_2, PI),
        ] {
            assert!(img.anterior.distance_to(p.cartesian()) < 1e-9);
        }
        // the anterior arc stays within 1.5 degrees of the exact meridian
        let max_dev = anterior_deviation(&l, &img.anterior);
        assert!(max_dev < 1.5f64.to_radians(), "deviation {max_dev}");
    }

    /// Dense-sampled deviation between the exact anterior meridian of `l`
    /// and a constructed path.
    fn anterior_deviation(l: &SpaceLine, path: &DiscPath) -> f64 {
        let img = vanishing_points_of_line(l);
        let n = img.circle.unwrap().normal.vector();
        let e1 = img.v_plus.vector();
        let e2 = n.cross(&e1);
        let mut max_dev = 0.0f64;
        for i in 0..=512 {
            let phi = PI * (i as f64) / 512.0;
            let d = e1 * phi.cos() + e2 * phi.sin();
            let d = UnitDirection::from_unit(d.normalize());
            if d.y() < 0.0 {
                continue;
            }
            if let Ok(p) = flatten(&d) {
                max_dev = max_dev.max(path.distance_to(p.cartesian()));
            }
        }
        max_dev
    }

    #[test]
    fn frontal_vertical_line_arc() {
        // vertical line at x=1, y=1: arc U - (pi/4, 0) - D
        let l = dline(Vec3::new(1.0, 1.0, 0.0), Vec3::new(0.0, 0.0, 1.0));
        let path = frontal_line_anterior(&l).unwrap();
        for p in [
            DiscPoint::new(FRAC_PI_2, FRAC_PI_2),
            DiscPoint::new(FRAC_PI_4, 0.0),
            DiscPoint::new(FRAC_PI_2, -FRAC_PI_2),
        ] {
            assert!(path.distance_to(p.cartesian()) < 1e-9);
        }
        assert!(anterior_deviation(&l, &path) < 1.5f64.to_radians());
    }

    #[test]
    fn frontal_line_over_the_axis_is_a_diameter() {
        let l = dline(Vec3::new(0.0, 1.0, 0.0), Vec3::new(1.0, 0.0, 0.0));
        match frontal_line_anterior(&l).unwrap() {
            DiscPath::Segment(s) => {
                assert!((s.a() - Vec2::new(FRAC_PI_2, 0.0)).norm() < 1e-12);
                assert!((s.b() - Vec2::new(-FRAC_PI_2, 0.0)).norm() < 1e-12);
            }
            DiscPath::Arc(_) => panic!("expected the L-R diameter"),
        }
    }

    #[test]
    fn observer_plane_line_is_half_equator() {
        // line z = 1 on the observer's plane: half equator through U
        let l = dline(Vec3::new(0.0, 0.0, 1.0), Vec3::new(1.0, 0.0, 0.0));
        let path = frontal_line_anterior(&l).unwrap();
        match path {
            DiscPath::Arc(a) => {
                assert!(a.center().norm() < 1e-9);
                assert_abs_diff_eq!(a.radius(), FRAC_PI_2, epsilon = 1e-9);
                assert!(path.distance_to(Vec2::new(0.0, FRAC_PI_2)) < 1e-9);
            }
            DiscPath::Segment(_) => panic!("expected an arc"),
        }
        // full image: other half is the completion, no posterior
        let img = frontal_line_image(&l, 8).unwrap();
        assert!(matches!(img.posterior, PosteriorPath::Empty));
        assert_eq!(img.completion.len(), 1);
        assert!(img.completion[0].distance_to(Vec2::new(0.0, -FRAC_PI_2)) < 1e-9);
    }

    #[test]
    fn frontal_posterior_through_b_ray_splits() {
        // horizontal line y=-1, z=0 crosses the sagittal plane on the B ray
        let l = dline(Vec3::new(0.0, -1.0, 0.0), Vec3::new(1.0, 0.0, 0.0));
        let img = frontal_posterior_line_image(&l, 8).unwrap();
        assert!(img.crosses_blowup);
        match img.posterior {
            PosteriorPath::Split(a, b) => {
                // outer halves of the L-R diameter
                assert!((a.a().norm() - FRAC_PI_2).abs() < 1e-12);
                assert!((a.b().norm() - PI).abs() < 1e-12);
                assert!((b.a().norm() - FRAC_PI_2).abs() < 1e-12);
                assert!((b.b().norm() - PI).abs() < 1e-12);
            }
            _ => panic!("expected split segments"),
        }
    }

    #[test]
    fn frontal_posterior_vertical_aux_arc() {
        // vertical line x=-1, y=-1: P = (3pi/4, pi), P̄ = (pi/4, 0),
        // auxiliary arc U - P̄ - D
        let l = dline(Vec3::new(-1.0, -1.0, 0.0), Vec3::new(0.0, 0.0, 1.0));
        let img = frontal_posterior_line_image(&l, 8).unwrap();
        for p in [
            DiscPoint::new(FRAC_PI_2, FRAC_PI_2),
            DiscPoint::new(FRAC_PI_4, 0.0),
            DiscPoint::new(FRAC_PI_2, -FRAC_PI_2),
        ] {
            assert!(img.anterior.distance_to(p.cartesian()) < 1e-9);
        }
        // the meridian is the posterior chain
        match &img.posterior {
            PosteriorPath::Fat(f) => {
                // every knot on the exact posterior meridian
                let n = vanishing_points_of_line(&l).circle.unwrap().normal;
                for knot in f.knots() {
                    let d = crate::flatten::unflatten(knot);
                    assert!(n.dot(&d).abs() < 1e-9);
                    assert!(d.y() <= 1e-9);
                }
            }
            _ => panic!("expected a fat line"),
        }
    }

    #[test]
    fn frontal_posterior_oblique_aux_arc() {
        // horizontal line y=-1, z=1: P = (3pi/4, pi/2), P̄ = (pi/4, -pi/2),
        // aux arc L - P̄ - R
        let l = dline(Vec3::new(0.0, -1.0, 1.0), Vec3::new(1.0, 0.0, 0.0));
        let img = frontal_posterior_line_image(&l, 8).unwrap();
        for p in [
            DiscPoint::new(FRAC_PI_2, PI),
            DiscPoint::new(FRAC_PI_4, -FRAC_PI_2),
            DiscPoint::new(FRAC_PI_2, 0.0),
        ] {
            assert!(img.anterior.distance_to(p.cartesian()) < 1e-9);
        }
    }

    #[test]
    fn posterior_plane_rejected_in_anterior_builder() {
        let l = dline(Vec3::new(0.0, -1.0, 1.0), Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(
            frontal_posterior_line_image(
                &dline(Vec3::new(0.0, 1.0, 1.0), Vec3::new(1.0, 0.0, 0.0)),
                8
            )
            .unwrap_err(),
            ConstructError::NotPosterior
        );
        assert!(frontal_posterior_line_image(&l, 8).is_ok());
    }

    #[test]
    fn parallel_midpoint_rule() {
        // P at (pi/4, pi/2) on the 45-degree parallel reflects to
        // Q = (3pi/4, pi/2)
        let p = DiscPoint::new(FRAC_PI_4, FRAC_PI_2);
        let q = reflect_across_equator(&p);
        assert_eq!(q.lambda(), PI - FRAC_PI_4);
        assert_eq!(q.theta(), FRAC_PI_2);
    }

    #[test]
    fn horizon_parallel_is_exact() {
        let img = parallel_image(0.0, 8).unwrap();
        assert!(img.crosses_blowup);
        assert_eq!(img.fatness(), None);
        assert_eq!(img.meridian.len(), 3);
        assert!(img.completion.is_empty());
    }

    #[test]
    fn parallel_reflected_knots_are_exact() {
        for &deg in &[10.0f64, 45.0, 80.0, 85.0] {
            // 85 exceeds the arc regime only at the poles; all valid here
            if deg >= 90.0 {
                continue;
            }
            let zeta = deg.to_radians();
            let img = parallel_image(zeta, 16).unwrap();
            let PosteriorPath::Fat(fat) = &img.posterior else {
                panic!("expected fat line");
            };
            for knot in fat.knots() {
                // on the exact parallel: unflattened elevation equals zeta
                let d = crate::flatten::unflatten(knot);
                assert!(
                    (d.z() - zeta.sin()).abs() < 1e-10,
                    "zeta {deg}: knot off parallel by {}",
                    (d.z() - zeta.sin()).abs()
                );
            }
        }
    }

    #[test]
    fn parallel_halves_join_on_the_equator() {
        let img = parallel_image(0.6, 8).unwrap();
        let a0 = img.anterior.start_point();
        let a1 = img.anterior.end_point();
        let PosteriorPath::Fat(fat) = &img.posterior else {
            panic!()
        };
        let f0 = fat.start().cartesian();
        let f1 = fat.end().cartesian();
        assert!((a0 - f0).norm() < 1e-6 || (a0 - f1).norm() < 1e-6);
        assert!((a1 - f0).norm() < 1e-6 || (a1 - f1).norm() < 1e-6);
        for p in [a0, a1] {
            assert_abs_diff_eq!(p.norm(), FRAC_PI_2, epsilon = 1e-6);
        }
    }

    #[test]
    fn plane_images() {
        // frontal plane: equator circle
        let img = plane_circle_image(&GreatCircle::new(UnitDirection::F), 8).unwrap();
        assert!(matches!(img.posterior, PosteriorPath::Empty));

        // plane of the horizon: full horizontal measuring line
        let img = plane_circle_image(&GreatCircle::new(UnitDirection::U), 8).unwrap();
        assert!(img.crosses_blowup);

        // oblique plane
        let n = UnitDirection::from_unit(Vec3::new(1.0, 1.0, 1.0).normalize());
        let img = plane_circle_image(&GreatCircle::new(n), 8).unwrap();
        assert!(matches!(img.posterior, PosteriorPath::Fat(_)));
        assert!(img.completion.is_empty());
    }

    #[test]
    fn arbitrary_anterior_point_sits_on_both_frontal_arcs() {
        // plotting a point by intersecting the images of the vertical and
        // horizontal frontal lines through it agrees with its exact image
        // up to the arcs' own tolerance
        for &(x, y, z) in &[(1.0, 2.0, 0.5), (-0.4, 1.0, 1.2), (0.8, 0.6, -1.5)] {
            let p = Vec3::new(x, y, z);
            let exact = flatten(&direction_of(p, 1e-12).unwrap()).unwrap();
            let vertical = frontal_line_anterior(&dline(p, Vec3::new(0.0, 0.0, 1.0))).unwrap();
            let horizontal = frontal_line_anterior(&dline(p, Vec3::new(1.0, 0.0, 0.0))).unwrap();
            for arc in [vertical, horizontal] {
                let d = arc.distance_to(exact.cartesian());
                assert!(d < 0.03, "arc misses the plotted point by {d}");
            }
        }
    }

    #[test]
    fn trim_chain_extracts_subpath() {
        let chain = vec![
            DiscPath::Segment(StraightSegment::new(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0))),
            DiscPath::Segment(StraightSegment::new(Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0))),
        ];
        let out = trim_chain(&chain, Vec2::new(0.5, 0.0), Vec2::new(1.5, 0.0));
        assert_eq!(out.len(), 2);
        let total: f64 = out.iter().map(|p| p.length()).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn direction_sign_does_not_change_the_image() {
        // (point, dir) and (point, -dir) denote the same line
        let p = Vec3::new(0.7, 0.2, -1.1);
        let d = Vec3::new(0.3, 1.0, 0.4).normalize();
        let a = receding_line_image(&dline(p, d), 8).unwrap();
        let b = receding_line_image(&dline(p, -d), 8).unwrap();
        assert_eq!(a.endpoints[0], b.endpoints[0]);
        assert_eq!(a.endpoints[1], b.endpoints[1]);
        assert_eq!(a.anterior, b.anterior);
        assert_eq!(a.meridian.len(), b.meridian.len());
    }

    #[test]
    fn rejects_misrouted_lines() {
        let frontal = dline(Vec3::new(1.0, 1.0, 0.0), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(
            receding_line_image(&frontal, 8).unwrap_err(),
            ConstructError::FrontalLine
        );
        let receding = dline(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(
            frontal_line_anterior(&receding).unwrap_err(),
            ConstructError::NotFrontal
        );
        let through = dline(Vec3::new(1.0, 1.0, 0.0), Vec3::new(1.0, 1.0, 0.0));
        assert_eq!(
            receding_line_image(&through, 8).unwrap_err(),
            ConstructError::ThroughObserver
        );
    }
}
