//! Convex primitives, distance queries, plane fitting and planar polygons.

mod distance;
pub mod gjk;
mod plane;
mod polygon;
mod pose;
mod primitive;

pub use distance::{pairwise_distance, point_distance, segment_distance, Proximity};
pub use plane::{fit_plane, project_to_plane, Plane};
pub use polygon::{convex_hull_2d, polygon_measures, Polygon2D, PolygonMeasures};
pub use pose::Pose;
pub use primitive::Primitive;


pub type Vec3 = nalgebra::Vector3<f64>;
pub type Vec2 = nalgebra::Vector2<f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("invalid primitive: {0}")]
    InvalidPrimitive(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}
