//! Fat lines: posterior meridian images interpolated through antipodes of
//! measuring-line intersections.
//!
//! The nail construction pins the disc center and slides a marked ruler
//! along the anterior curve; each anterior point yields its in-disc
//! antipode on the posterior curve. Arcs through successive knot triples
//! overlap by two knots, and the spread between overlapping arcs (the
//! "fatness") estimates the interpolation error. Knots are placed exactly
//! on the meridian (intersection of measuring-line and great-circle planes),
//! so only the arcs between them approximate.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::construct::arc::{arc_through_points, DiscPath};
use crate::construct::{ConstructError, antipode_in_disc, CENTER_EPSILON};
use crate::flatten::{flatten, DiscPoint, Vec2};
use crate::sphere::{GreatCircle, UnitDirection, Vec3};

/// Anterior meridian image of a great circle: the drawn path together with
/// the circle it approximates, so that knots can be taken exactly.
#[derive(Debug, Clone, Copy)]
pub struct AnteriorMeridian {
    /// Arc or chord from one equator crossing to the other.
    pub path: DiscPath,
    pub circle: GreatCircle,
}

/// A chain of overlapping arcs through knots on a posterior curve.
///
/// Arcs are clipped to the closed disc: where an interpolating arc would
/// bulge past the blowup circle (the exact curve never does), the drawing
/// continues along the rim instead.
#[derive(Debug, Clone)]
pub struct FatLine {
    arcs: Vec<DiscPath>,
    knots: Vec<DiscPoint>,
    fatness: f64,
    chain: Vec<DiscPath>,
}

impl FatLine {
    /// Overlapping arcs through successive knot triples.
    pub fn arcs(&self) -> &[DiscPath] {
        &self.arcs
    }

    /// Interpolation points, in curve order.
    pub fn knots(&self) -> &[DiscPoint] {
        &self.knots
    }

    /// Maximum spread between overlapping consecutive arcs, in disc radians.
    pub fn fatness(&self) -> f64 {
        self.fatness
    }

    pub fn start(&self) -> DiscPoint {
        self.knots[0]
    }

    pub fn end(&self) -> DiscPoint {
        *self.knots.last().expect("fat line has knots")
    }

    /// Distance from `p` to the envelope of all arcs.
    pub fn distance_to(&self, p: Vec2) -> f64 {
        self.arcs
            .iter()
            .map(|a| a.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Non-overlapping chain: one ribbon of pieces per knot gap,
    /// sequential from the first knot to the last. This is the clean
    /// final drawing; the overlapping [`FatLine::arcs`] carry the error
    /// estimate.
    pub fn reduced_chain(&self) -> Vec<DiscPath> {
        self.chain.clone()
    }

    /// Splits the reduced chain at the point nearest `p`, returning the
    /// pieces before and after it.
    pub fn split_reduced_at(&self, p: Vec2) -> (Vec<DiscPath>, Vec<DiscPath>) {
        let chain = &self.chain;
        let (mut best, mut best_d) = (0usize, f64::INFINITY);
        for (i, piece) in chain.iter().enumerate() {
            let d = piece.distance_to(p);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        let mut before: Vec<DiscPath> = chain[..best].to_vec();
        let mut after: Vec<DiscPath> = chain[best + 1..].to_vec();
        let (head, tail) = chain[best].split_at(p);
        if head.length() > 1e-12 {
            before.push(head);
        }
        if tail.length() > 1e-12 {
            after.insert(0, tail);
        }
        (before, after)
    }
}

/// Splits a piece at the disc boundary, replacing parts outside the
/// closed disc of radius `pi` by arcs along the blowup circle.
fn clip_piece_to_disc(piece: &DiscPath) -> Vec<DiscPath> {
    use std::f64::consts::PI;
    let rim = PI;

    // boundary-crossing parameters
    let mut cuts = vec![0.0f64];
    match piece {
        DiscPath::Segment(s) => {
            // |a + t (b - a)| = rim
            let a = s.a();
            let d = s.b() - a;
            let qa = d.norm_squared();
            let qb = 2.0 * a.dot(&d);
            let qc = a.norm_squared() - rim * rim;
            let disc = qb * qb - 4.0 * qa * qc;
            if qa > 0.0 && disc > 0.0 {
                let sq = disc.sqrt();
                for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
                    if t > 1e-9 && t < 1.0 - 1e-9 {
                        cuts.push(t);
                    }
                }
            }
        }
        DiscPath::Arc(arc) => {
            // two-circle intersection with the rim circle
            let c = arc.center();
            let d = c.norm();
            let r = arc.radius();
            if d > 1e-12 {
                let along = (rim * rim - r * r + d * d) / (2.0 * d);
                let h2 = rim * rim - along * along;
                if h2 > 0.0 {
                    let h = h2.sqrt();
                    let u = c / d;
                    let perp = Vec2::new(-u.y, u.x);
                    for q in [u * along + perp * h, u * along - perp * h] {
                        if let Some(t) = arc.param_of_point(q) {
                            if t > 1e-9 && t < 1.0 - 1e-9 {
                                cuts.push(t);
                            }
                        }
                    }
                }
            }
        }
    }
    cuts.push(1.0);
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite params"));

    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 - t0 <= 1e-9 {
            continue;
        }
        let sub = piece.sub_path(t0, t1);
        let inside = sub.point_at(0.5).norm() <= rim + 1e-9;
        if inside {
            out.push(sub);
        } else {
            // continue along the blowup circle between the crossings
            let a0 = {
                let p = sub.start_point();
                p.y.atan2(p.x)
            };
            let a1 = {
                let p = sub.end_point();
                p.y.atan2(p.x)
            };
            let mut sweep = a1 - a0;
            if sweep > PI {
                sweep -= 2.0 * PI;
            } else if sweep < -PI {
                sweep += 2.0 * PI;
            }
            if sweep.abs() > 1e-12 {
                out.push(DiscPath::Arc(crate::construct::arc::Arc::new(
                    Vec2::zeros(),
                    rim,
                    a0,
                    sweep,
                )));
            }
        }
    }
    out
}

/// Chains arcs through successive triples of `knots` and measures the
/// overlap spread. Needs at least three knots.
pub(crate) fn chain_through(knots: &[DiscPoint]) -> Result<FatLine, ConstructError> {
    if knots.len() < 3 {
        return Err(ConstructError::TooFewKnots);
    }
    let pts: Vec<Vec2> = knots.iter().map(|k| k.cartesian()).collect();
    let mut raw_arcs = Vec::with_capacity(knots.len() - 2);
    for w in pts.windows(3) {
        raw_arcs.push(arc_through_points(
            &DiscPoint::from_cartesian(w[0]),
            &DiscPoint::from_cartesian(w[1]),
            &DiscPoint::from_cartesian(w[2]),
        )?);
    }

    // spread between consecutive arcs over their shared knot gap
    let mut fatness = 0.0f64;
    for i in 0..raw_arcs.len().saturating_sub(1) {
        let shared0 = pts[i + 1];
        let shared1 = pts[i + 2];
        let t0 = raw_arcs[i].nearest_param(shared0);
        let t1 = raw_arcs[i].nearest_param(shared1);
        const SPREAD_SAMPLES: usize = 9;
        for s in 0..=SPREAD_SAMPLES {
            let t = t0 + (t1 - t0) * (s as f64) / (SPREAD_SAMPLES as f64);
            let p = raw_arcs[i].point_at(t);
            fatness = fatness.max(raw_arcs[i + 1].distance_to(p));
        }
    }

    // one piece per knot gap, sequential
    let mut raw_chain = Vec::with_capacity(knots.len() - 1);
    for j in 0..knots.len() - 1 {
        let arc = &raw_arcs[j.min(raw_arcs.len() - 1)];
        let t0 = arc.nearest_param(pts[j]);
        let t1 = arc.nearest_param(pts[j + 1]);
        raw_chain.push(if t0 <= t1 {
            arc.sub_path(t0, t1)
        } else {
            arc.sub_path(t1, t0).reversed()
        });
    }

    let arcs = raw_arcs.iter().flat_map(clip_piece_to_disc).collect();
    let chain = raw_chain.iter().flat_map(clip_piece_to_disc).collect();

    Ok(FatLine {
        arcs,
        knots: knots.to_vec(),
        fatness,
        chain,
    })
}

fn wrap_pos(x: f64) -> f64 {
    let mut t = x % TAU;
    if t < 0.0 {
        t += TAU;
    }
    t
}

fn azimuth(v: Vec2) -> f64 {
    v.y.atan2(v.x)
}

/// Azimuth span of an anterior path: start azimuth and signed sweep chosen
/// so the path midpoint lies inside the span.
pub(crate) fn anterior_span(path: &DiscPath) -> Result<(f64, f64), ConstructError> {
    if path.distance_to(Vec2::zeros()) <= CENTER_EPSILON {
        // paths through the center project along measuring lines; no
        // azimuth span exists
        return Err(ConstructError::AnteriorNotMeridian);
    }
    let t0 = azimuth(path.start_point());
    let t1 = azimuth(path.end_point());
    let tm = azimuth(path.point_at(0.5));
    let ccw = wrap_pos(t1 - t0);
    if wrap_pos(tm - t0) <= ccw + 1e-9 {
        Ok((t0, ccw))
    } else {
        Ok((t0, ccw - TAU))
    }
}

/// Exact intersection of the measuring line at azimuth `theta` with the
/// anterior meridian of `circle`: the common direction of the two planes,
/// taken on the `theta` ray.
pub(crate) fn exact_anterior_knot(
    circle: &GreatCircle,
    theta: f64,
) -> Result<DiscPoint, ConstructError> {
    let measuring_normal = Vec3::new(theta.sin(), 0.0, -theta.cos());
    let w = measuring_normal.cross(&circle.normal.vector());
    let n = w.norm();
    if n <= 1e-12 {
        return Err(ConstructError::AnteriorNotMeridian);
    }
    let mut w = w / n;
    if w.x * theta.cos() + w.z * theta.sin() < 0.0 {
        w = -w;
    }
    debug_assert!(w.y >= -1e-9, "knot fell on the posterior meridian");
    flatten(&UnitDirection::from_unit(w)).map_err(|_| ConstructError::AnteriorNotMeridian)
}

/// Posterior meridian of `anterior.circle` as a fat line, with knots taken
/// where the given interior measuring-line azimuths (plus the path's
/// endpoints) cross the anterior meridian.
///
/// Azimuths outside the anterior span are folded onto the opposite radius;
/// ones still outside, or duplicating an existing knot, are dropped.
pub fn fat_line_with_azimuths(
    anterior: &AnteriorMeridian,
    interior_azimuths: &[f64],
) -> Result<FatLine, ConstructError> {
    let (start, sweep) = anterior_span(&anterior.path)?;
    check_meridian_endpoints(&anterior.path)?;
    let span = sweep.abs();

    // offsets along the span, endpoints included
    let mut offsets = vec![0.0, span];
    for &az in interior_azimuths {
        let candidates = [az, az + std::f64::consts::PI];
        for c in candidates {
            let off = if sweep >= 0.0 {
                wrap_pos(c - start)
            } else {
                wrap_pos(start - c)
            };
            if off > 1e-9 && off < span - 1e-9 {
                offsets.push(off);
            }
        }
    }
    offsets.sort_by(|a, b| a.partial_cmp(b).expect("finite offsets"));
    offsets.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    if offsets.len() < 3 {
        return Err(ConstructError::TooFewKnots);
    }

    let mut antipodes = Vec::with_capacity(offsets.len());
    for off in offsets {
        let theta = start + sweep.signum() * off;
        let y = exact_anterior_knot(&anterior.circle, theta)?;
        antipodes.push(antipode_in_disc(&y)?);
    }
    chain_through(&antipodes)
}

/// Posterior meridian of `anterior.circle` as a fat line from `k`
/// measuring lines placed uniformly in azimuth across the anterior span,
/// plus the endpoints.
pub fn fat_line(anterior: &AnteriorMeridian, k: usize) -> Result<FatLine, ConstructError> {
    if k < 3 {
        return Err(ConstructError::TooFewKnots);
    }
    let (start, sweep) = anterior_span(&anterior.path)?;
    let interior: Vec<f64> = (1..=k)
        .map(|i| start + sweep * (i as f64) / ((k + 1) as f64))
        .collect();
    fat_line_with_azimuths(anterior, &interior)
}

fn check_meridian_endpoints(path: &DiscPath) -> Result<(), ConstructError> {
    for e in [path.start_point(), path.end_point()] {
        if (e.norm() - FRAC_PI_2).abs() > 1e-6 {
            return Err(ConstructError::AnteriorNotMeridian);
        }
    }
    Ok(())
}
