use std::fmt;

use super::Loop;
use crate::geometry::{
    convex_hull_2d, fit_plane, polygon_measures, Plane, Polygon2D, Primitive, Pose, Vec2, Vec3,
};
use crate::scene::Scene;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelFilterParams {
    pub max_residual: f64,
    pub min_area: f64,
    pub shrink_margin: f64,
    pub interior_samples: usize,
    pub max_thickness_probe: f64,
    /// Distance at or below which a probe point counts as touching an obstacle.
    pub contact_tol: f64,
    pub allow_single_parent: bool,
}

impl Default for ChannelFilterParams {
    fn default() -> Self {
        ChannelFilterParams {
            max_residual: 0.02,
            min_area: 1e-4,
            shrink_margin: 0.01,
            interior_samples: 25,
            max_thickness_probe: 0.5,
            contact_tol: 1e-4,
            allow_single_parent: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// Contact points are collinear or the hull is flat.
    Degenerate,
    Residual,
    Area,
    SingleParent,
    Interior,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::Degenerate => "degenerate",
            RejectReason::Residual => "residual",
            RejectReason::Area => "area",
            RejectReason::SingleParent => "single_parent",
            RejectReason::Interior => "interior",
        })
    }
}

/// Planar opening bounded by a loop of contacts.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub id: String,
    pub plane: Plane,
    pub residual: f64,
    /// Hull of the projected contact points, in plane-frame coordinates.
    pub polygon: Polygon2D,
    pub area: f64,
    pub centroid: Vec2,
    pub center: Vec3,
    pub incircle_radius: f64,
    pub incircle_center: Vec3,
    /// Obstacle depth along the plane normal at the boundary (thinnest point).
    pub thickness: f64,
    pub source_loop: Loop,
}

impl Channel {
    pub fn lift(&self, uv: &Vec2) -> Vec3 {
        self.plane.lift(uv)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ChannelExtraction {
    pub channels: Vec<Channel>,
    /// Index into the input loop list and the first failed filter.
    pub rejected: Vec<(usize, RejectReason)>,
}

struct Solid {
    primitive: Primitive,
    pose: Pose,
}

fn clearance(solids: &[Solid], p: &Vec3) -> f64 {
    solids
        .iter()
        .map(|s| s.primitive.signed_distance_to_point(&s.pose, p))
        .fold(f64::INFINITY, f64::min)
}

/// Filter loops into channels. Channel ids are `ch0`, `ch1`, ... in loop order.
pub fn extract_channels(loops: &[Loop], scene: &Scene, params: &ChannelFilterParams) -> ChannelExtraction {
    let mut parent_of = std::collections::HashMap::new();
    let mut solids = Vec::new();
    for s in scene.sub_obstacles() {
        parent_of.insert(s.sub.id.as_str(), s.parent);
        solids.push(Solid {
            primitive: s.sub.primitive,
            pose: s.sub.pose,
        });
    }
    let allow_single = params.allow_single_parent || scene.allow_single_parent_loops;

    let mut out = ChannelExtraction::default();
    for (li, lp) in loops.iter().enumerate() {
        let parents: std::collections::BTreeSet<usize> = lp
            .ids
            .iter()
            .filter_map(|id| parent_of.get(id.as_str()).copied())
            .collect();
        match build_channel(lp, &solids, parents.len(), allow_single, params, out.channels.len()) {
            Ok(ch) => out.channels.push(ch),
            Err(reason) => out.rejected.push((li, reason)),
        }
    }
    out
}

fn build_channel(
    lp: &Loop,
    solids: &[Solid],
    parent_count: usize,
    allow_single: bool,
    params: &ChannelFilterParams,
    index: usize,
) -> Result<Channel, RejectReason> {
    let (plane, residual) = fit_plane(&lp.contact_points).map_err(|_| RejectReason::Degenerate)?;
    if residual > params.max_residual {
        return Err(RejectReason::Residual);
    }
    let projected: Vec<Vec2> = lp.contact_points.iter().map(|p| plane.project(p)).collect();
    let polygon = convex_hull_2d(&projected).map_err(|_| RejectReason::Degenerate)?;
    let m = polygon_measures(&polygon);
    if m.area < params.min_area {
        return Err(RejectReason::Area);
    }
    if parent_count < 2 && !allow_single {
        return Err(RejectReason::SingleParent);
    }
    let samples = interior_samples(&polygon, m.centroid, params);
    if samples.is_empty() || samples.iter().any(|uv| clearance(solids, &plane.lift(uv)) <= 0.0) {
        return Err(RejectReason::Interior);
    }
    let thickness = lp
        .contact_points
        .iter()
        .map(|p| thickness_at(solids, p, &plane.normal, params))
        .fold(f64::INFINITY, f64::min);
    Ok(Channel {
        id: format!("ch{index}"),
        plane,
        residual,
        polygon,
        area: m.area,
        centroid: m.centroid,
        center: plane.lift(&m.centroid),
        incircle_radius: m.incircle_radius,
        incircle_center: plane.lift(&m.incircle_center),
        thickness,
        source_loop: lp.clone(),
    })
}

/// Cell centres of a k x k grid over the shrunk polygon's bounding box that
/// fall inside it; the centroid alone when none do. Empty when shrinking
/// leaves nothing.
fn interior_samples(polygon: &Polygon2D, centroid: Vec2, params: &ChannelFilterParams) -> Vec<Vec2> {
    let Some(inner) = polygon.inset(params.shrink_margin) else {
        return Vec::new();
    };
    let k = (params.interior_samples.max(1) as f64).sqrt().ceil() as usize;
    let (lo, hi) = inner.bounding_box();
    let mut pts = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let uv = Vec2::new(
                lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / k as f64,
                lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / k as f64,
            );
            if inner.contains(&uv, 0.0) {
                pts.push(uv);
            }
        }
    }
    if pts.is_empty() {
        pts.push(centroid);
    }
    pts
}

/// Extent of solid material through `p` along `±normal`: march in 1 mm
/// steps while touching an obstacle, then bisect each exit.
fn thickness_at(solids: &[Solid], p: &Vec3, normal: &Vec3, params: &ChannelFilterParams) -> f64 {
    let tol = params.contact_tol;
    let limit = params.max_thickness_probe;
    let side = |dir: f64| -> f64 {
        let at = |t: f64| clearance(solids, &(p + normal * (dir * t)));
        if at(0.0) > tol {
            return 0.0;
        }
        let step = 1e-3;
        let mut inside: f64 = 0.0;
        loop {
            let next = (inside + step).min(limit);
            if at(next) > tol {
                let (mut a, mut b) = (inside, next);
                while b - a > 1e-7 {
                    let mid = 0.5 * (a + b);
                    if at(mid) > tol {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                return 0.5 * (a + b);
            }
            if next >= limit {
                return limit;
            }
            inside = next;
        }
    };
    (side(1.0) + side(-1.0)).min(limit)
}
