//! Render planning and SVG emission.
//!
//! `plan` routes every scene entity by classification (frontal, receding,
//! central, degenerate; observer-plane points; blowup points) through
//! either the construction emulation or the exact sampler and produces
//! styled drawable paths. `emit_svg` writes them out deterministically:
//! fixed 6-decimal number formatting, no timestamps, stable ordering.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use crate::analysis::{sample_meridian, sample_parallel, SampledCurve};
use crate::construct::presets::{ElementRole, PresetElement};
use crate::construct::{
    equator_point, frontal_line_image, generate_preset, parallel_image, plane_circle_image,
    receding_line_image, trim_chain, ConstructError, DiscPath, LineImagePath, FRONTAL_TOLERANCE,
};
use crate::flatten::{flatten, DiscPoint, FlattenError, Vec2};
use crate::scene::{Entity, Scene, StyleToken, StyledEntity};
use crate::sphere::{
    direction_of, vanishing_points_of_line, vanishing_line_of_plane, GreatCircle, SpaceLine,
    UnitDirection, Vec3, DEGENERACY_TOLERANCE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    Exact,
    Construction,
    Both,
}

/// Reference scaffolding drawn around the scene.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrameFlags {
    pub equator: bool,
    pub blowup: bool,
    pub labels: bool,
    /// Draw measuring lines every this many degrees of azimuth.
    pub measuring_step_deg: Option<u32>,
}

impl FrameFlags {
    pub fn all(step_deg: Option<u32>) -> Self {
        FrameFlags {
            equator: true,
            blowup: true,
            labels: true,
            measuring_step_deg: step_deg,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    pub mode: RenderMode,
    pub disc_radius_px: u32,
    pub samples_per_curve: usize,
    pub measuring_lines_k: usize,
    pub frame: FrameFlags,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            mode: RenderMode::Both,
            disc_radius_px: 500,
            samples_per_curve: 256,
            measuring_lines_k: 8,
            frame: FrameFlags::default(),
        }
    }
}

impl RenderOptions {
    /// Clamps option fields into their valid ranges.
    pub fn sanitized(mut self) -> Self {
        self.disc_radius_px = self.disc_radius_px.max(1);
        self.samples_per_curve = self.samples_per_curve.max(16);
        self.measuring_lines_k = self.measuring_lines_k.max(3);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrokeColor {
    Black,
    Gray,
    Accent,
}

impl StrokeColor {
    fn hex(self) -> &'static str {
        match self {
            StrokeColor::Black => "#000000",
            StrokeColor::Gray => "#9a9a9a",
            StrokeColor::Accent => "#c23b22",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PathStyle {
    pub color: StrokeColor,
    pub dashed: bool,
    pub width: f64,
}

impl PathStyle {
    fn solid(color: StrokeColor, width: f64) -> Self {
        PathStyle {
            color,
            dashed: false,
            width,
        }
    }

    fn dashed(color: StrokeColor, width: f64) -> Self {
        PathStyle {
            color,
            dashed: true,
            width,
        }
    }

    fn apply_token(mut self, token: Option<StyleToken>) -> Self {
        match token {
            None => self,
            Some(StyleToken::Black) => {
                self.color = StrokeColor::Black;
                self
            }
            Some(StyleToken::Gray) => {
                self.color = StrokeColor::Gray;
                self
            }
            Some(StyleToken::Accent) => {
                self.color = StrokeColor::Accent;
                self
            }
            Some(StyleToken::Dashed) => {
                self.dashed = true;
                self
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum Geometry {
    Piece(DiscPath),
    Polyline(Vec<Vec2>),
    Dot(Vec2),
    /// Annotation on the blowup circle; `None` means the approach azimuth
    /// is undefined (the point sits exactly behind the observer).
    BlowupMark { azimuth: Option<f64> },
    Label { at: Vec2, text: String },
    Circle { center: Vec2, radius: f64 },
}

#[derive(Debug, Clone)]
pub struct PlannedPath {
    /// Index into `scene.entities`; `None` for frame scaffolding.
    pub entity_index: Option<usize>,
    pub style: PathStyle,
    pub geometry: Geometry,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub entity_index: usize,
    pub line_no: usize,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "entity {} (line {}): {}", self.entity_index, self.line_no, self.message)
    }
}

struct Emitter<'a> {
    opts: &'a RenderOptions,
    paths: Vec<PlannedPath>,
    diagnostics: Vec<Diagnostic>,
    index: usize,
    line_no: usize,
    token: Option<StyleToken>,
}

impl<'a> Emitter<'a> {
    fn push(&mut self, style: PathStyle, geometry: Geometry) {
        self.paths.push(PlannedPath {
            entity_index: Some(self.index),
            style,
            geometry,
        });
    }

    fn diagnose(&mut self, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            entity_index: self.index,
            line_no: self.line_no,
            message: message.into(),
        });
    }

    fn solid_style(&self, exact_pass: bool) -> PathStyle {
        let base = if exact_pass && self.opts.mode == RenderMode::Both {
            PathStyle::solid(StrokeColor::Accent, 1.1)
        } else {
            PathStyle::solid(StrokeColor::Black, 1.6)
        };
        base.apply_token(self.token)
    }

    fn completion_style(&self, exact_pass: bool) -> PathStyle {
        if exact_pass && self.opts.mode == RenderMode::Both {
            PathStyle::dashed(StrokeColor::Accent, 0.8)
        } else {
            PathStyle::dashed(StrokeColor::Gray, 1.0)
        }
    }

    fn scaffold_style(&self) -> PathStyle {
        PathStyle::dashed(StrokeColor::Gray, 0.8)
    }

    fn role_style(&self, role: ElementRole, exact_pass: bool) -> PathStyle {
        let mut s = self.solid_style(exact_pass);
        match role {
            ElementRole::Edge => s.width = 1.8,
            ElementRole::Grid => s.width = 1.0,
            ElementRole::Auxiliary => {
                s.width = 1.0;
                if !(exact_pass && self.opts.mode == RenderMode::Both) {
                    s.color = StrokeColor::Gray;
                }
            }
            ElementRole::Receding | ElementRole::Frontal => {}
        }
        s
    }

    fn push_line_image(&mut self, img: &LineImagePath, solid: PathStyle, dashed: PathStyle) {
        for piece in &img.meridian {
            self.push(solid, Geometry::Piece(*piece));
        }
        for piece in &img.completion {
            self.push(dashed, Geometry::Piece(*piece));
        }
    }

    fn push_curve(&mut self, curve: &SampledCurve, style: PathStyle) {
        for run in curve.runs() {
            if run.len() < 2 {
                continue;
            }
            self.push(
                style,
                Geometry::Polyline(run.iter().map(|p| p.cartesian()).collect()),
            );
        }
    }

    fn push_point_mark(&mut self, point: Vec3, style: PathStyle) {
        if point.norm() <= DEGENERACY_TOLERANCE {
            self.diagnose("point coincides with the observer; it has no image");
            return;
        }
        let dir = direction_of(point, 1e-12).expect("nonzero point");
        match flatten(&dir) {
            Err(FlattenError::AtBlowup) | Err(FlattenError::AtObserver) => {
                let planar = point.x.hypot(point.z);
                let azimuth = if planar <= 1e-12 {
                    self.diagnose(
                        "point lies exactly behind the observer; blowup azimuth undefined",
                    );
                    None
                } else {
                    Some(point.z.atan2(point.x))
                };
                self.push(style, Geometry::BlowupMark { azimuth });
            }
            Ok(p) => {
                // points on the observer's plane plot on the equator by the
                // superposed back-view construction; same point either way
                let disc = if point.y.abs() <= DEGENERACY_TOLERANCE {
                    equator_point(point.x, point.z).unwrap_or(p)
                } else {
                    p
                };
                self.push(style, Geometry::Dot(disc.cartesian()));
            }
        }
    }

    fn construction_line_image(&self, l: &SpaceLine) -> Result<LineImagePath, ConstructError> {
        if l.dir.y().abs() <= FRONTAL_TOLERANCE {
            frontal_line_image(l, self.opts.measuring_lines_k)
        } else {
            receding_line_image(l, self.opts.measuring_lines_k)
        }
    }

    fn emit_line_construction(&mut self, l: &SpaceLine) {
        let style = self.solid_style(false);
        self.emit_line_construction_styled(l, style);
    }

    fn emit_degenerate_line(&mut self, l: &SpaceLine) {
        self.diagnose("line passes through the observer; it projects onto two antipodal points");
        let style = self.solid_style(false);
        for d in [l.dir, l.dir.antipode()] {
            match flatten(&d) {
                Ok(p) => self.push(style, Geometry::Dot(p.cartesian())),
                Err(_) => {
                    let azimuth = if d.x().hypot(d.z()) <= 1e-12 {
                        None
                    } else {
                        Some(d.z().atan2(d.x()))
                    };
                    self.push(style, Geometry::BlowupMark { azimuth });
                }
            }
        }
    }

    fn emit_line_exact(&mut self, l: &SpaceLine) {
        let style = self.solid_style(true);
        self.emit_line_exact_styled(l, style);
    }

    fn emit_segment_construction(&mut self, a: Vec3, b: Vec3) {
        let style = self.solid_style(false);
        self.emit_segment_construction_styled(a, b, style);
    }

    fn emit_segment_exact(&mut self, a: Vec3, b: Vec3, style: PathStyle) {
        let n = self.opts.samples_per_curve;
        let mut runs: Vec<Vec<Vec2>> = vec![Vec::new()];
        let mut dropped = false;
        for i in 0..n {
            let t = (i as f64) / ((n - 1) as f64);
            let p = a + (b - a) * t;
            let image = direction_of(p, 1e-12).ok().and_then(|d| flatten(&d).ok());
            match image {
                Some(dp) => runs.last_mut().unwrap().push(dp.cartesian()),
                None => {
                    dropped = true;
                    if !runs.last().unwrap().is_empty() {
                        runs.push(Vec::new());
                    }
                }
            }
        }
        if dropped {
            self.diagnose("segment passes the observer or the blowup; image split");
        }
        for run in runs {
            if run.len() >= 2 {
                self.push(style, Geometry::Polyline(run));
            }
        }
    }

    fn emit_plane(&mut self, plane: &crate::sphere::SpacePlane, exact_pass: bool) {
        let v = vanishing_line_of_plane(plane);
        if exact_pass {
            let e1 = circle_anchor(&v.circle);
            match sample_meridian(&v.circle, &e1, &e1, self.opts.samples_per_curve) {
                Ok(curve) => self.push_curve(&curve, self.solid_style(true)),
                Err(e) => self.diagnose(format!("exact sampling failed: {e}")),
            }
        } else {
            match plane_circle_image(&v.circle, self.opts.measuring_lines_k) {
                Ok(img) => {
                    let solid = self.solid_style(false);
                    let dashed = self.completion_style(false);
                    self.push_line_image(&img, solid, dashed);
                }
                Err(e) => self.diagnose(format!("plane construction failed: {e}")),
            }
        }
    }

    fn emit_parallel(&mut self, zeta: f64, exact_pass: bool) {
        if exact_pass {
            match sample_parallel(zeta, self.opts.samples_per_curve) {
                Ok(curve) => self.push_curve(&curve, self.solid_style(true)),
                Err(e) => self.diagnose(format!("exact sampling failed: {e}")),
            }
        } else {
            match parallel_image(zeta, self.opts.measuring_lines_k) {
                Ok(img) => {
                    let solid = self.solid_style(false);
                    let dashed = self.completion_style(false);
                    self.push_line_image(&img, solid, dashed);
                }
                Err(e) => self.diagnose(format!("parallel construction failed: {e}")),
            }
        }
    }

    fn emit_preset_elements(&mut self, elements: &[PresetElement], exact_pass: bool) {
        for el in elements {
            match el {
                PresetElement::Line { line, role } => {
                    let style = self.role_style(*role, exact_pass);
                    if exact_pass {
                        self.emit_line_exact_styled(line, style);
                    } else {
                        self.emit_line_construction_styled(line, style);
                    }
                }
                PresetElement::Segment { a, b, role } => {
                    let style = self.role_style(*role, exact_pass);
                    if exact_pass {
                        self.emit_segment_exact(*a, *b, style);
                    } else {
                        self.emit_segment_construction_styled(*a, *b, style);
                    }
                }
                PresetElement::Drawn { pieces, role, line } => {
                    if exact_pass {
                        if let Some(l) = line {
                            let style = self.role_style(*role, true);
                            self.emit_line_exact_styled_meridian_only(l, style);
                        }
                    } else {
                        let style = self.role_style(*role, false);
                        for piece in pieces {
                            self.push(style, Geometry::Piece(*piece));
                        }
                    }
                }
                PresetElement::Scaffold { pieces } => {
                    if !exact_pass {
                        let style = self.scaffold_style();
                        for piece in pieces {
                            self.push(style, Geometry::Piece(*piece));
                        }
                    }
                }
                PresetElement::Marker { at, label } => {
                    if !exact_pass || self.opts.mode == RenderMode::Exact {
                        self.push(
                            PathStyle::solid(StrokeColor::Black, 1.0),
                            Geometry::Dot(at.cartesian()),
                        );
                        if let Some(text) = label {
                            self.push(
                                PathStyle::solid(StrokeColor::Gray, 1.0),
                                Geometry::Label {
                                    at: at.cartesian(),
                                    text: (*text).to_string(),
                                },
                            );
                        }
                    }
                }
            }
        }
    }

    fn emit_line_construction_styled(&mut self, l: &SpaceLine, style: PathStyle) {
        if l.distance_to_observer() <= DEGENERACY_TOLERANCE {
            self.emit_degenerate_line(l);
            return;
        }
        match self.construction_line_image(l) {
            Ok(img) => self.push_line_image(&img, style, self.completion_style(false)),
            Err(e) => self.diagnose(format!("line construction failed: {e}")),
        }
    }

    fn emit_segment_construction_styled(&mut self, a: Vec3, b: Vec3, style: PathStyle) {
        let line = match SpaceLine::through(a, b) {
            Ok(l) => l,
            Err(_) => {
                self.diagnose("segment endpoints coincide");
                return;
            }
        };
        if line.distance_to_observer() <= DEGENERACY_TOLERANCE {
            self.diagnose("segment's line passes through the observer");
            return;
        }
        match (point_image(a), point_image(b)) {
            // an endpoint on the blowup falls back to exact sampling
            (Some(da), Some(db)) => match self.construction_line_image(&line) {
                Ok(img) => {
                    for piece in trim_chain(&img.meridian, da.cartesian(), db.cartesian()) {
                        self.push(style, Geometry::Piece(piece));
                    }
                }
                Err(e) => self.diagnose(format!("segment construction failed: {e}")),
            },
            _ => self.emit_segment_exact(a, b, style),
        }
    }

    fn emit_line_exact_styled(&mut self, l: &SpaceLine, style: PathStyle) {
        if l.distance_to_observer() <= DEGENERACY_TOLERANCE {
            self.emit_degenerate_line(l);
            return;
        }
        let img = vanishing_points_of_line(l);
        let circle = oriented_circle(l, &img);
        let n = self.opts.samples_per_curve;
        match sample_meridian(&circle, &img.v_plus, &img.v_minus, n) {
            Ok(curve) => self.push_curve(&curve, style),
            Err(e) => self.diagnose(format!("exact sampling failed: {e}")),
        }
        if let Ok(curve) = sample_meridian(&circle, &img.v_minus, &img.v_plus, n) {
            self.push_curve(&curve, self.completion_style(true));
        }
    }

    fn emit_line_exact_styled_meridian_only(&mut self, l: &SpaceLine, style: PathStyle) {
        if l.distance_to_observer() <= DEGENERACY_TOLERANCE {
            return;
        }
        let img = vanishing_points_of_line(l);
        let circle = oriented_circle(l, &img);
        match sample_meridian(&circle, &img.v_plus, &img.v_minus, self.opts.samples_per_curve) {
            Ok(curve) => self.push_curve(&curve, style),
            Err(e) => self.diagnose(format!("exact sampling failed: {e}")),
        }
    }
}

/// Circle of a line oriented so that sampling `v_plus -> v_minus`
/// counterclockwise passes through the line's own image.
fn oriented_circle(l: &SpaceLine, img: &crate::sphere::SphereLineImage) -> GreatCircle {
    let foot = l.point - l.dir.vector() * l.point.dot(&l.dir.vector());
    let d0 = direction_of(foot, 1e-12).expect("foot off the observer");
    GreatCircle::new(UnitDirection::from_unit(
        img.v_plus.vector().cross(&d0.vector()).normalize(),
    ))
}

fn point_image(p: Vec3) -> Option<DiscPoint> {
    direction_of(p, 1e-12).ok().and_then(|d| flatten(&d).ok())
}

/// A unit direction on the circle, chosen deterministically.
pub fn circle_anchor(c: &GreatCircle) -> UnitDirection {
    let n = c.normal.vector();
    let axis = if n.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    UnitDirection::from_unit(n.cross(&axis).normalize())
}

/// Plans a scene: every entity yields at least one path or one diagnostic,
/// in entity order.
pub fn plan(scene: &Scene, opts: &RenderOptions) -> (Vec<PlannedPath>, Vec<Diagnostic>) {
    let opts = opts.sanitized();
    let mut em = Emitter {
        opts: &opts,
        paths: Vec::new(),
        diagnostics: Vec::new(),
        index: 0,
        line_no: 0,
        token: None,
    };

    for (i, StyledEntity { entity, style, line_no }) in scene.entities.iter().enumerate() {
        em.index = i;
        em.line_no = *line_no;
        em.token = *style;
        let before_paths = em.paths.len();
        let before_diags = em.diagnostics.len();

        let construction = matches!(opts.mode, RenderMode::Construction | RenderMode::Both);
        let exact = matches!(opts.mode, RenderMode::Exact | RenderMode::Both);

        match entity {
            Entity::Point(p) => {
                let style = em.solid_style(false);
                em.push_point_mark(*p, style);
            }
            Entity::Line(l) => {
                if construction {
                    em.emit_line_construction(l);
                }
                if exact {
                    em.emit_line_exact(l);
                }
            }
            Entity::Segment(a, b) => {
                if construction {
                    em.emit_segment_construction(*a, *b);
                }
                if exact {
                    let style = em.solid_style(true);
                    em.emit_segment_exact(*a, *b, style);
                }
            }
            Entity::Plane(h) => {
                if construction {
                    em.emit_plane(h, false);
                }
                if exact {
                    em.emit_plane(h, true);
                }
            }
            Entity::Parallel { zeta } => {
                if construction {
                    em.emit_parallel(*zeta, false);
                }
                if exact {
                    em.emit_parallel(*zeta, true);
                }
            }
            Entity::Preset(spec) => match generate_preset(spec, opts.measuring_lines_k) {
                Ok(elements) => {
                    if construction {
                        em.emit_preset_elements(&elements, false);
                    }
                    if exact {
                        em.emit_preset_elements(&elements, true);
                    }
                }
                Err(e) => em.diagnose(format!("preset expansion failed: {e}")),
            },
        }

        if em.paths.len() == before_paths && em.diagnostics.len() == before_diags {
            em.diagnose("entity produced no drawable output");
        }
    }

    (em.paths, em.diagnostics)
}

// ---------------------------------------------------------------------------
// SVG emission
// ---------------------------------------------------------------------------

fn fmt6(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.6}")
}

struct Mapper {
    scale: f64,
    center: f64,
}

impl Mapper {
    fn map(&self, v: Vec2) -> (f64, f64) {
        (self.center + v.x * self.scale, self.center - v.y * self.scale)
    }
}

fn piece_path_data(piece: &DiscPath, m: &Mapper) -> String {
    match piece {
        DiscPath::Segment(s) => {
            let (x0, y0) = m.map(s.a());
            let (x1, y1) = m.map(s.b());
            format!(
                "M {} {} L {} {}",
                fmt6(x0),
                fmt6(y0),
                fmt6(x1),
                fmt6(y1)
            )
        }
        DiscPath::Arc(a) => {
            // SVG arcs cannot span a full turn; split wide sweeps in half
            if a.sweep().abs() >= PI {
                let first = a.sub_arc(0.0, 0.5);
                let second = a.sub_arc(0.5, 1.0);
                let mut d = arc_command(&first, m, true);
                d.push(' ');
                d.push_str(&arc_command(&second, m, false));
                d
            } else {
                arc_command(a, m, true)
            }
        }
    }
}

fn arc_command(a: &crate::construct::Arc, m: &Mapper, with_move: bool) -> String {
    let (x0, y0) = m.map(a.point_at(0.0));
    let (x1, y1) = m.map(a.point_at(1.0));
    let r = a.radius() * m.scale;
    let large = if a.sweep().abs() > PI { 1 } else { 0 };
    // the y-axis flip turns counterclockwise sweeps into SVG sweep flag 0
    let sweep_flag = if a.sweep() >= 0.0 { 0 } else { 1 };
    let arc = format!(
        "A {} {} 0 {} {} {} {}",
        fmt6(r),
        fmt6(r),
        large,
        sweep_flag,
        fmt6(x1),
        fmt6(y1)
    );
    if with_move {
        format!("M {} {} {}", fmt6(x0), fmt6(y0), arc)
    } else {
        arc
    }
}

fn style_attrs(style: &PathStyle) -> String {
    let mut s = format!(
        "fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"",
        style.color.hex(),
        fmt6(style.width)
    );
    if style.dashed {
        s.push_str(" stroke-dasharray=\"8 5\"");
    }
    s
}

/// Writes a standalone SVG document. Output is byte-identical for
/// identical inputs: fixed number formatting, no timestamps.
pub fn emit_svg(paths: &[PlannedPath], opts: &RenderOptions) -> String {
    let opts = opts.sanitized();
    let radius = opts.disc_radius_px as f64;
    let pad = radius * 0.05;
    let size = 2.0 * (radius + pad);
    let m = Mapper {
        scale: radius / PI,
        center: radius + pad,
    };

    let mut svg = String::new();
    let _ = writeln!(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{w}\" viewBox=\"0 0 {w} {w}\">",
        w = fmt6(size)
    );
    let _ = writeln!(
        svg,
        "  <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{w}\" fill=\"#ffffff\"/>",
        w = fmt6(size)
    );

    // frame scaffolding under the scene
    if opts.frame.blowup {
        let _ = writeln!(
            svg,
            "  <circle cx=\"{c}\" cy=\"{c}\" r=\"{r}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.400000\"/>",
            c = fmt6(m.center),
            r = fmt6(radius)
        );
    }
    if opts.frame.equator {
        let _ = writeln!(
            svg,
            "  <circle cx=\"{c}\" cy=\"{c}\" r=\"{r}\" fill=\"none\" stroke=\"#9a9a9a\" stroke-width=\"0.900000\"/>",
            c = fmt6(m.center),
            r = fmt6(radius / 2.0)
        );
    }
    if let Some(step) = opts.frame.measuring_step_deg {
        if step >= 1 {
            let mut deg = 0u32;
            while deg < 180 {
                let t = (deg as f64).to_radians();
                let (x0, y0) = m.map(Vec2::new(PI * t.cos(), PI * t.sin()));
                let (x1, y1) = m.map(Vec2::new(-PI * t.cos(), -PI * t.sin()));
                let _ = writeln!(
                    svg,
                    "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#d0d0d0\" stroke-width=\"0.600000\"/>",
                    fmt6(x0), fmt6(y0), fmt6(x1), fmt6(y1)
                );
                deg += step;
            }
        }
    }
    if opts.frame.labels {
        let offset = 14.0 / m.scale;
        let spots: [(&str, Vec2); 6] = [
            ("F", Vec2::new(offset * 0.6, offset * 0.6)),
            ("R", Vec2::new(FRAC_PI_2 + offset, 0.0)),
            ("L", Vec2::new(-FRAC_PI_2 - offset, 0.0)),
            ("U", Vec2::new(0.0, FRAC_PI_2 + offset)),
            ("D", Vec2::new(0.0, -FRAC_PI_2 - offset)),
            ("B", Vec2::new((PI + offset) * (0.25f64 * PI).cos(), (PI + offset) * (0.25f64 * PI).sin())),
        ];
        for (text, at) in spots {
            let (x, y) = m.map(at);
            let _ = writeln!(
                svg,
                "  <text x=\"{}\" y=\"{}\" font-family=\"serif\" font-size=\"16\" fill=\"#555555\" text-anchor=\"middle\">{}</text>",
                fmt6(x), fmt6(y), text
            );
        }
    }

    for p in paths {
        match &p.geometry {
            Geometry::Piece(piece) => {
                let _ = writeln!(
                    svg,
                    "  <path d=\"{}\" {}/>",
                    piece_path_data(piece, &m),
                    style_attrs(&p.style)
                );
            }
            Geometry::Polyline(points) => {
                if points.len() < 2 {
                    continue;
                }
                let mut d = String::new();
                for (i, v) in points.iter().enumerate() {
                    let (x, y) = m.map(*v);
                    let _ = write!(d, "{}{} {}", if i == 0 { "M " } else { " L " }, fmt6(x), fmt6(y));
                }
                let _ = writeln!(svg, "  <path d=\"{}\" {}/>", d, style_attrs(&p.style));
            }
            Geometry::Dot(v) => {
                let (x, y) = m.map(*v);
                let _ = writeln!(
                    svg,
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"3.000000\" fill=\"{}\"/>",
                    fmt6(x),
                    fmt6(y),
                    p.style.color.hex()
                );
            }
            Geometry::BlowupMark { azimuth } => match azimuth {
                Some(t) => {
                    let (x, y) = m.map(Vec2::new(PI * t.cos(), PI * t.sin()));
                    let _ = writeln!(
                        svg,
                        "  <circle cx=\"{}\" cy=\"{}\" r=\"4.000000\" fill=\"{}\"/>",
                        fmt6(x),
                        fmt6(y),
                        p.style.color.hex()
                    );
                }
                None => {
                    // the point maps to the whole blowup circle
                    let _ = writeln!(
                        svg,
                        "  <circle cx=\"{c}\" cy=\"{c}\" r=\"{r}\" fill=\"none\" stroke=\"{col}\" stroke-width=\"1.200000\" stroke-dasharray=\"3 6\"/>",
                        c = fmt6(m.center),
                        r = fmt6(radius * 0.985),
                        col = p.style.color.hex()
                    );
                }
            },
            Geometry::Label { at, text } => {
                let (x, y) = m.map(*at);
                let _ = writeln!(
                    svg,
                    "  <text x=\"{}\" y=\"{}\" font-family=\"serif\" font-size=\"14\" fill=\"{}\" text-anchor=\"middle\">{}</text>",
                    fmt6(x), fmt6(y - 6.0), p.style.color.hex(), text
                );
            }
            Geometry::Circle { center, radius: r } => {
                let (x, y) = m.map(*center);
                let _ = writeln!(
                    svg,
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" {}/>",
                    fmt6(x),
                    fmt6(y),
                    fmt6(r * m.scale),
                    style_attrs(&p.style)
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}
