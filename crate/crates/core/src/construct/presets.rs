//! Grid presets: the uniform central perspective grid, the tiled cubic
//! room seen from its center, and a yawed square behind the observer.

use std::f64::consts::PI;

use crate::construct::arc::{arc_through_points, DiscPath};
use crate::construct::fatline::{fat_line_with_azimuths, AnteriorMeridian};
use crate::construct::line_image::receding_line_image;
use crate::construct::{equator_point, ConstructError};
use crate::flatten::{opposite_azimuth, DiscPoint};
use crate::sphere::{SpaceLine, UnitDirection, Vec3};

/// Parameters for a grid preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PresetSpec {
    /// Uniform one-point grid on the ground plane: `2n - 1` receding
    /// lines spaced `spacing` apart, with the observer `height` above the
    /// ground and one line directly underneath.
    CentralGrid { n: u32, spacing: f64, height: f64 },
    /// Tiled cubical room of side `edge` seen from its center, each wall
    /// divided into `div x div` tiles.
    CubicRoom { edge: f64, div: u32 },
    /// Horizontal square of side `side` centered at `(cx, cy, cz)`, one
    /// side making angle `yaw` (radians) with the central axis.
    RotatedSquare {
        cx: f64,
        cy: f64,
        cz: f64,
        yaw: f64,
        side: f64,
    },
}

/// What a preset element depicts; drives stroke styling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementRole {
    Receding,
    Frontal,
    Edge,
    Grid,
    Auxiliary,
}

/// One drawable element of an expanded preset.
#[derive(Debug, Clone)]
pub enum PresetElement {
    /// A spatial line, drawn through the generic line pipeline.
    Line { line: SpaceLine, role: ElementRole },
    /// A spatial segment, drawn through the generic segment pipeline.
    Segment { a: Vec3, b: Vec3, role: ElementRole },
    /// Pieces already constructed by the preset (grid rows found by
    /// intersection rather than by replotting). `line` carries the spatial
    /// line for exact-mode overlays.
    Drawn {
        pieces: Vec<DiscPath>,
        role: ElementRole,
        line: Option<SpaceLine>,
    },
    /// Construction scaffolding, drawn dashed in construction mode only.
    Scaffold { pieces: Vec<DiscPath> },
    /// A labeled point on the disc.
    Marker {
        at: DiscPoint,
        label: Option<&'static str>,
    },
}

/// Expands a preset into drawable elements. `knots_k` is the measuring-line
/// count used for any fat lines the preset needs.
pub fn generate_preset(
    spec: &PresetSpec,
    knots_k: usize,
) -> Result<Vec<PresetElement>, ConstructError> {
    match *spec {
        PresetSpec::CentralGrid { n, spacing, height } => {
            if n < 1 || spacing <= 0.0 || height <= 0.0 {
                return Err(ConstructError::InvalidParams(format!(
                    "central_grid needs n >= 1, spacing > 0, height > 0 (got n={n}, spacing={spacing}, height={height})"
                )));
            }
            central_grid(n as i64, spacing, height, knots_k)
        }
        PresetSpec::CubicRoom { edge, div } => {
            if edge <= 0.0 || div < 1 {
                return Err(ConstructError::InvalidParams(format!(
                    "cubic_room needs edge > 0 and div >= 1 (got edge={edge}, div={div})"
                )));
            }
            Ok(cubic_room(edge, div as usize))
        }
        PresetSpec::RotatedSquare {
            cx,
            cy,
            cz,
            yaw,
            side,
        } => {
            if side <= 0.0 {
                return Err(ConstructError::InvalidParams(format!(
                    "rotated_square needs side > 0 (got {side})"
                )));
            }
            Ok(rotated_square(cx, cy, cz, yaw, side))
        }
    }
}

/// One-point grid on the ground plane `z = -height`, one axis along the
/// central ray. Receding lines image onto radii; the frontal rows are found
/// where the 45-degree diagonal through `D` crosses those radii.
fn central_grid(
    n: i64,
    spacing: f64,
    height: f64,
    knots_k: usize,
) -> Result<Vec<PresetElement>, ConstructError> {
    let mut out = Vec::new();

    // receding lines of the grid, one under the observer
    let mut radii_azimuths = Vec::new();
    for i in -(n - 1)..=(n - 1) {
        let x = i as f64 * spacing;
        let line = SpaceLine::new(Vec3::new(x, 0.0, -height), UnitDirection::F);
        let p = equator_point(x, -height)?;
        radii_azimuths.push((i, p.theta()));
        out.push(PresetElement::Line {
            line,
            role: ElementRole::Receding,
        });
    }

    // the 45-degree diagonal g through the point under the observer
    let diag = SpaceLine::new(
        Vec3::new(0.0, 0.0, -height),
        UnitDirection::from_unit(Vec3::new(1.0, 1.0, 0.0).normalize()),
    );
    let diag_img = receding_line_image(&diag, knots_k)?;
    let c_a = diag_img.anterior;
    {
        let mut pieces = diag_img.meridian.clone();
        pieces.extend(diag_img.completion.iter().copied());
        out.push(PresetElement::Scaffold { pieces });
    }

    let r_pt = equator_point(1.0, 0.0)?;
    let l_pt = equator_point(-1.0, 0.0)?;
    let all_azimuths: Vec<f64> = radii_azimuths.iter().map(|&(_, t)| t).collect();

    // frontal rows through the grid vertices marked on the diagonal
    for &(i, theta_i) in &radii_azimuths {
        let row_line = SpaceLine::new(
            Vec3::new(0.0, i as f64 * spacing, -height),
            UnitDirection::R,
        );
        let hits = c_a.ray_hits(theta_i);
        if let Some(&(s, _)) = hits.first() {
            // anterior vertex: run the frontal row arc L - G_i - R
            let g_i =
                DiscPoint::new(s, theta_i);
            let row_arc = arc_through_points(&r_pt, &g_i, &l_pt)?;
            out.push(PresetElement::Drawn {
                pieces: vec![row_arc],
                role: ElementRole::Frontal,
                line: Some(row_line),
            });
        } else {
            // posterior row: intersect the opposite radius with the
            // diagonal, take the antipode, and fat-line the auxiliary arc
            // using the grid radii as measuring lines
            let theta_opp = opposite_azimuth(theta_i);
            let aux_hits = c_a.ray_hits(theta_opp);
            let Some(&(s, _)) = aux_hits.first() else {
                continue;
            };
            let g_bar = DiscPoint::new(s, theta_opp);
            let aux_arc = arc_through_points(&r_pt, &g_bar, &l_pt)?;
            let circle = crate::sphere::vanishing_points_of_line(&row_line)
                .circle
                .expect("grid rows never pass through the observer");
            let fat = fat_line_with_azimuths(
                &AnteriorMeridian {
                    path: aux_arc,
                    circle,
                },
                &all_azimuths,
            )?;
            out.push(PresetElement::Scaffold {
                pieces: vec![aux_arc],
            });
            out.push(PresetElement::Drawn {
                pieces: fat.reduced_chain(),
                role: ElementRole::Frontal,
                line: Some(row_line),
            });
        }
    }

    out.push(PresetElement::Marker {
        at: DiscPoint::CENTER,
        label: Some("F"),
    });
    out.push(PresetElement::Marker {
        at: r_pt,
        label: Some("R"),
    });
    out.push(PresetElement::Marker {
        at: l_pt,
        label: Some("L"),
    });
    out.push(PresetElement::Marker {
        at: DiscPoint::blowup(-PI / 2.0),
        label: Some("B"),
    });
    Ok(out)
}

/// Segments of a tiled cubical room seen from its center: wall tile grids
/// plus the twelve cube edges, deduplicated.
fn cubic_room(edge: f64, div: usize) -> Vec<PresetElement> {
    let h = edge / 2.0;
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();

    let mut push = |a: Vec3, b: Vec3, role: ElementRole, out: &mut Vec<PresetElement>| {
        let key = segment_key(a, b);
        if seen.insert(key) {
            out.push(PresetElement::Segment { a, b, role });
        }
    };

    // walls normal to each axis; 0 = x, 1 = y, 2 = z
    for axis in 0..3usize {
        for sign in [-1.0f64, 1.0] {
            let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
            for k in 0..=div {
                let offset = -h + edge * (k as f64) / (div as f64);
                let on_edge = k == 0 || k == div;
                // line along u at v = offset
                let mut a = [0.0f64; 3];
                a[axis] = sign * h;
                a[v] = offset;
                let mut b = a;
                a[u] = -h;
                b[u] = h;
                push(
                    Vec3::from(a),
                    Vec3::from(b),
                    if on_edge { ElementRole::Edge } else { ElementRole::Grid },
                    &mut out,
                );
                // line along v at u = offset
                let mut a = [0.0f64; 3];
                a[axis] = sign * h;
                a[u] = offset;
                let mut b = a;
                a[v] = -h;
                b[v] = h;
                push(
                    Vec3::from(a),
                    Vec3::from(b),
                    if on_edge { ElementRole::Edge } else { ElementRole::Grid },
                    &mut out,
                );
            }
        }
    }
    out
}

fn segment_key(a: Vec3, b: Vec3) -> [(i64, i64, i64); 2] {
    let q = |v: Vec3| {
        (
            (v.x * 1e9).round() as i64,
            (v.y * 1e9).round() as i64,
            (v.z * 1e9).round() as i64,
        )
    };
    let (ka, kb) = (q(a), q(b));
    if ka <= kb {
        [ka, kb]
    } else {
        [kb, ka]
    }
}

/// A horizontal square, typically below and behind the observer, with its
/// side lines extended to their vanishing points.
fn rotated_square(cx: f64, cy: f64, cz: f64, yaw: f64, side: f64) -> Vec<PresetElement> {
    let center = Vec3::new(cx, cy, cz);
    let d1 = Vec3::new(yaw.sin(), yaw.cos(), 0.0);
    let d2 = Vec3::new(yaw.cos(), -yaw.sin(), 0.0);
    let h = side / 2.0;
    let corners = [
        center + (d1 + d2) * h,
        center + (d1 - d2) * h,
        center - (d1 + d2) * h,
        center - (d1 - d2) * h,
    ];

    let mut out = Vec::new();
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        // the side itself and the line extending it
        out.push(PresetElement::Segment {
            a,
            b,
            role: ElementRole::Edge,
        });
        if let Ok(line) = SpaceLine::through(a, b) {
            out.push(PresetElement::Line {
                line,
                role: ElementRole::Auxiliary,
            });
        }
        if let Ok(dir) = crate::sphere::direction_of(a, 1e-12) {
            if let Ok(p) = crate::flatten::flatten(&dir) {
                out.push(PresetElement::Marker {
                    at: p,
                    label: None,
                });
            }
        }
    }
    out
}

/// Signed horizontal angle (from `F`, positive toward `R`) of a vanishing
/// disc point lying on the horizontal measuring line.
pub fn horizontal_vanishing_azimuth(p: &DiscPoint) -> f64 {
    if p.theta().abs() < PI / 2.0 {
        p.lambda()
    } else {
        -p.lambda()
    }
}
