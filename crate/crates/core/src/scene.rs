//! Line-oriented scene file format.
//!
//! One entity per line, whitespace-separated fields, `#` starts a comment:
//!
//! ```text
//! point x y z
//! segment x1 y1 z1 x2 y2 z2
//! line px py pz dx dy dz
//! plane px py pz nx ny nz
//! parallel zeta_deg
//! preset central_grid n=<int> spacing=<real> height=<real>
//! preset cubic_room edge=<real> div=<int>
//! preset rotated_square cx=<real> cy=<real> cz=<real> yaw_deg=<real> side=<real>
//! ```
//!
//! Any line may end with `style=<black|gray|accent|dashed>`. World units
//! are arbitrary; only angles at the observer matter.

use std::fmt;

use crate::construct::presets::PresetSpec;
use crate::sphere::{SpaceLine, SpacePlane, UnitDirection, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StyleToken {
    Black,
    Gray,
    Accent,
    Dashed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Entity {
    Point(Vec3),
    Segment(Vec3, Vec3),
    Line(SpaceLine),
    Plane(SpacePlane),
    /// Constant angular elevation, radians.
    Parallel { zeta: f64 },
    Preset(PresetSpec),
}

#[derive(Debug, Clone, Copy)]
pub struct StyledEntity {
    pub entity: Entity,
    pub style: Option<StyleToken>,
    /// 1-based source line, for diagnostics.
    pub line_no: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub entities: Vec<StyledEntity>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError {
        line,
        reason: reason.into(),
    }
}

fn parse_number(tok: &str, line: usize) -> Result<f64, ParseError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| err(line, format!("expected a number, got `{tok}`")))?;
    if !v.is_finite() {
        return Err(err(line, format!("non-finite number `{tok}`")));
    }
    Ok(v)
}

fn parse_numbers(toks: &[&str], line: usize) -> Result<Vec<f64>, ParseError> {
    toks.iter().map(|t| parse_number(t, line)).collect()
}

fn parse_style(tok: &str, line: usize) -> Result<StyleToken, ParseError> {
    match tok {
        "black" => Ok(StyleToken::Black),
        "gray" => Ok(StyleToken::Gray),
        "accent" => Ok(StyleToken::Accent),
        "dashed" => Ok(StyleToken::Dashed),
        other => Err(err(line, format!("unknown style token `{other}`"))),
    }
}

fn key_value(tok: &str, line: usize) -> Result<(&str, &str), ParseError> {
    tok.split_once('=')
        .ok_or_else(|| err(line, format!("expected key=value, got `{tok}`")))
}

fn parse_preset(toks: &[&str], line: usize) -> Result<PresetSpec, ParseError> {
    let Some((&kind, params)) = toks.split_first() else {
        return Err(err(line, "preset needs a kind"));
    };
    let get = |key: &str| -> Result<f64, ParseError> {
        for tok in params {
            let (k, v) = key_value(tok, line)?;
            if k == key {
                return parse_number(v, line);
            }
        }
        Err(err(line, format!("preset `{kind}` is missing `{key}=`")))
    };
    let spec = match kind {
        "central_grid" => {
            let n = get("n")?;
            let spacing = get("spacing")?;
            let height = get("height")?;
            if n < 1.0 || n.fract() != 0.0 {
                return Err(err(line, "central_grid: n must be an integer >= 1"));
            }
            if spacing <= 0.0 || height <= 0.0 {
                return Err(err(line, "central_grid: spacing and height must be > 0"));
            }
            PresetSpec::CentralGrid {
                n: n as u32,
                spacing,
                height,
            }
        }
        "cubic_room" => {
            let edge = get("edge")?;
            let div = get("div")?;
            if edge <= 0.0 {
                return Err(err(line, "cubic_room: edge must be > 0"));
            }
            if div < 1.0 || div.fract() != 0.0 {
                return Err(err(line, "cubic_room: div must be an integer >= 1"));
            }
            PresetSpec::CubicRoom {
                edge,
                div: div as u32,
            }
        }
        "rotated_square" => {
            let side = get("side")?;
            if side <= 0.0 {
                return Err(err(line, "rotated_square: side must be > 0"));
            }
            PresetSpec::RotatedSquare {
                cx: get("cx")?,
                cy: get("cy")?,
                cz: get("cz")?,
                yaw: get("yaw_deg")?.to_radians(),
                side,
            }
        }
        other => return Err(err(line, format!("unknown preset kind `{other}`"))),
    };
    // reject stray parameters
    for tok in params {
        let (k, _) = key_value(tok, line)?;
        let known: &[&str] = match kind {
            "central_grid" => &["n", "spacing", "height"],
            "cubic_room" => &["edge", "div"],
            _ => &["cx", "cy", "cz", "yaw_deg", "side"],
        };
        if !known.contains(&k) {
            return Err(err(line, format!("preset `{kind}`: unknown parameter `{k}`")));
        }
    }
    Ok(spec)
}

/// Parses a scene document. Comments (`#` to end of line) and blank lines
/// are ignored; errors carry the 1-based line number.
pub fn parse_scene(text: &str) -> Result<Scene, ParseError> {
    let mut entities = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks: Vec<&str> = content.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }

        let mut style = None;
        if let Some(last) = toks.last() {
            if let Some(v) = last.strip_prefix("style=") {
                style = Some(parse_style(v, line_no)?);
                toks.pop();
            }
        }

        let keyword = toks[0];
        let args = &toks[1..];
        let arity = |want: usize| -> Result<(), ParseError> {
            if args.len() == want {
                Ok(())
            } else {
                Err(err(
                    line_no,
                    format!("`{keyword}` takes {want} fields, got {}", args.len()),
                ))
            }
        };

        let entity = match keyword {
            "point" => {
                arity(3)?;
                let v = parse_numbers(args, line_no)?;
                Entity::Point(Vec3::new(v[0], v[1], v[2]))
            }
            "segment" => {
                arity(6)?;
                let v = parse_numbers(args, line_no)?;
                let a = Vec3::new(v[0], v[1], v[2]);
                let b = Vec3::new(v[3], v[4], v[5]);
                if (a - b).norm() <= 1e-12 {
                    return Err(err(line_no, "segment endpoints coincide"));
                }
                Entity::Segment(a, b)
            }
            "line" => {
                arity(6)?;
                let v = parse_numbers(args, line_no)?;
                let dir = Vec3::new(v[3], v[4], v[5]);
                if dir.norm() <= 1e-12 {
                    return Err(err(line_no, "zero-length line direction"));
                }
                Entity::Line(SpaceLine::new(
                    Vec3::new(v[0], v[1], v[2]),
                    UnitDirection::from_unit(dir.normalize()),
                ))
            }
            "plane" => {
                arity(6)?;
                let v = parse_numbers(args, line_no)?;
                let normal = Vec3::new(v[3], v[4], v[5]);
                if normal.norm() <= 1e-12 {
                    return Err(err(line_no, "zero-length plane normal"));
                }
                Entity::Plane(SpacePlane::new(
                    Vec3::new(v[0], v[1], v[2]),
                    UnitDirection::from_unit(normal.normalize()),
                ))
            }
            "parallel" => {
                arity(1)?;
                let deg = parse_number(args[0], line_no)?;
                if deg.abs() >= 90.0 {
                    return Err(err(line_no, "parallel elevation must satisfy |zeta| < 90"));
                }
                Entity::Parallel {
                    zeta: deg.to_radians(),
                }
            }
            "preset" => Entity::Preset(parse_preset(args, line_no)?),
            other => return Err(err(line_no, format!("unknown keyword `{other}`"))),
        };
        entities.push(StyledEntity {
            entity,
            style,
            line_no,
        });
    }
    Ok(Scene { entities })
}
