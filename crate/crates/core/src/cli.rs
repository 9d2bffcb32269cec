//! Command-line interface: `render`, `error`, and `table` subcommands.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{angular_error, compare_radial_profiles, sample_meridian, sample_parallel};
use crate::construct::{
    frontal_line_image, parallel_image, plane_circle_image, receding_line_image, DiscPath,
    FRONTAL_TOLERANCE,
};
use crate::render::{emit_svg, plan, FrameFlags, RenderMode, RenderOptions};
use crate::scene::{parse_scene, Entity, Scene};
use crate::sphere::{
    vanishing_line_of_plane, vanishing_points_of_line, SpaceLine, DEGENERACY_TOLERANCE,
};

#[derive(Debug, Parser)]
#[command(
    name = "persp360",
    about = "Total spherical perspective: render scenes to SVG and measure construction error",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Construction,
    Both,
}

impl From<ModeArg> for RenderMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => RenderMode::Exact,
            ModeArg::Construction => RenderMode::Construction,
            ModeArg::Both => RenderMode::Both,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render a scene file to an SVG document
    Render {
        /// Scene file path
        #[arg(long)]
        scene: PathBuf,
        /// Output SVG path
        #[arg(long)]
        out: PathBuf,
        /// What to draw: the exact map, the ruler-compass construction, or both
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        /// Disc radius in pixels
        #[arg(long = "radius-px", default_value_t = 500)]
        radius_px: u32,
        /// Samples per exact curve
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Measuring lines per fat line
        #[arg(long, default_value_t = 8)]
        knots: usize,
        /// Draw the disc frame: blowup circle, equator, reference labels
        #[arg(long)]
        frame: bool,
        /// Also draw measuring lines every N degrees
        #[arg(long = "grid-step-deg")]
        grid_step_deg: Option<u32>,
    },
    /// Measure construction error against the exact map, one row per entity
    Error {
        #[arg(long)]
        scene: PathBuf,
        /// Measuring lines per fat line
        #[arg(long, default_value_t = 8)]
        knots: usize,
        /// Exact-oracle samples per curve
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Print the equidistant vs reflection-limit radial profile table
    Table {
        /// Number of rows
        #[arg(long, default_value_t = 33)]
        profiles: usize,
    },
}

/// Runs the CLI. Exit codes: 0 success (possibly with warnings), 1 on
/// parse or I/O errors, 2 when every entity failed geometrically.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    match cli.command {
        Command::Render {
            scene,
            out,
            mode,
            radius_px,
            samples,
            knots,
            frame,
            grid_step_deg,
        } => {
            let text = match std::fs::read_to_string(&scene) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", scene.display());
                    return 1;
                }
            };
            let parsed = match parse_scene(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}: {e}", scene.display());
                    return 1;
                }
            };
            let opts = RenderOptions {
                mode: mode.into(),
                disc_radius_px: radius_px,
                samples_per_curve: samples,
                measuring_lines_k: knots,
                frame: if frame {
                    FrameFlags::all(grid_step_deg)
                } else {
                    FrameFlags {
                        measuring_step_deg: grid_step_deg,
                        ..FrameFlags::default()
                    }
                },
            }
            .sanitized();
            let (paths, diagnostics) = plan(&parsed, &opts);
            for d in &diagnostics {
                eprintln!("warning: {d}");
            }
            let svg = emit_svg(&paths, &opts);
            if let Err(e) = std::fs::write(&out, svg) {
                eprintln!("error: cannot write {}: {e}", out.display());
                return 1;
            }
            let drawable = paths.iter().any(|p| p.entity_index.is_some());
            if !parsed.entities.is_empty() && !drawable {
                eprintln!("error: no entity produced drawable output");
                return 2;
            }
            0
        }
        Command::Error {
            scene,
            knots,
            samples,
        } => {
            let text = match std::fs::read_to_string(&scene) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", scene.display());
                    return 1;
                }
            };
            let parsed = match parse_scene(&text) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}: {e}", scene.display());
                    return 1;
                }
            };
            print_error_reports(&parsed, knots.max(3), samples.max(16));
            0
        }
        Command::Table { profiles } => {
            for row in compare_radial_profiles(profiles.max(2)) {
                println!(
                    "lambda={:.6} equidistant={:.6} reflection={:.6}",
                    row.lambda, row.equidistant, row.reflection
                );
            }
            0
        }
    }
}

/// Constructed full-circle pieces for a line, by classification.
fn constructed_line_pieces(l: &SpaceLine, knots: usize) -> Result<Vec<DiscPath>, String> {
    if l.distance_to_observer() <= DEGENERACY_TOLERANCE {
        return Err("line passes through the observer".to_string());
    }
    let img = if l.dir.y().abs() <= FRONTAL_TOLERANCE {
        frontal_line_image(l, knots)
    } else {
        receding_line_image(l, knots)
    }
    .map_err(|e| e.to_string())?;
    Ok(img.all_pieces().copied().collect())
}

fn print_error_reports(scene: &Scene, knots: usize, samples: usize) {
    for (i, entity) in scene.entities.iter().enumerate() {
        let result: Result<Option<String>, String> = match &entity.entity {
            Entity::Line(l) => line_error_row(l, knots, samples).map(Some),
            Entity::Parallel { zeta } => parallel_error_row(*zeta, knots, samples).map(Some),
            Entity::Plane(h) => plane_error_row(h, knots, samples).map(Some),
            _ => Ok(None),
        };
        match result {
            Ok(Some(row)) => println!("{row}"),
            Ok(None) => {}
            Err(e) => eprintln!("warning: entity {i} (line {}): {e}", entity.line_no),
        }
    }
}

fn line_error_row(l: &SpaceLine, knots: usize, samples: usize) -> Result<String, String> {
    let pieces = constructed_line_pieces(l, knots)?;
    let img = vanishing_points_of_line(l);
    let circle = img.circle.ok_or("degenerate line")?;
    let anchor = crate::render::circle_anchor(&circle);
    let exact =
        sample_meridian(&circle, &anchor, &anchor, samples).map_err(|e| e.to_string())?;
    let report = angular_error(&pieces, &exact).map_err(|e| e.to_string())?;
    Ok(report.to_string())
}

fn parallel_error_row(zeta: f64, knots: usize, samples: usize) -> Result<String, String> {
    let img = parallel_image(zeta, knots).map_err(|e| e.to_string())?;
    let pieces: Vec<DiscPath> = img.all_pieces().copied().collect();
    let exact = sample_parallel(zeta, samples).map_err(|e| e.to_string())?;
    let report = angular_error(&pieces, &exact).map_err(|e| e.to_string())?;
    Ok(report.to_string())
}

fn plane_error_row(
    h: &crate::sphere::SpacePlane,
    knots: usize,
    samples: usize,
) -> Result<String, String> {
    let v = vanishing_line_of_plane(h);
    let img = plane_circle_image(&v.circle, knots).map_err(|e| e.to_string())?;
    let pieces: Vec<DiscPath> = img.all_pieces().copied().collect();
    let anchor = crate::render::circle_anchor(&v.circle);
    let exact =
        sample_meridian(&v.circle, &anchor, &anchor, samples).map_err(|e| e.to_string())?;
    let report = angular_error(&pieces, &exact).map_err(|e| e.to_string())?;
    Ok(report.to_string())
}
