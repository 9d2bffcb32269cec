//! Total spherical perspective: a 360-degree central perspective built from
//! anamorphosis onto the unit sphere followed by the azimuthal-equidistant
//! flattening, with both an exact evaluator and an emulation of the classic
//! ruler-compass-nail drawing constructions, an approximation-error
//! analyzer, a scene file format, and an SVG renderer.

pub mod analysis;
pub mod cli;
pub mod construct;
pub mod flatten;
pub mod render;
pub mod scene;
pub mod sphere;

pub use flatten::{flatten, unflatten, DiscPoint};
pub use sphere::{GreatCircle, SpaceLine, SpacePlane, UnitDirection, Vec3};
