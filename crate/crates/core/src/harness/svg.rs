//! Two orthographic views (top: x-y, side: x-z) as an SVG 1.1 document.

use std::fmt::Write as _;

use crate::geometry::{convex_hull_2d, Primitive, Pose, Vec2, Vec3};
use crate::robot::Configuration;
use crate::scene::Scene;
use crate::topology::Channel;

const PANEL: f64 = 400.0;
const PAD: f64 = 20.0;

struct View {
    /// Workspace axes mapped to the horizontal and vertical screen axes.
    axes: (usize, usize),
    origin_x: f64,
    lo: Vec3,
    hi: Vec3,
    scale: f64,
}

impl View {
    fn map(&self, p: &Vec3) -> (f64, f64) {
        let (h, v) = self.axes;
        let x = self.origin_x + PAD + (p[h] - self.lo[h]) * self.scale;
        let y = PAD + (self.hi[v] - p[v]) * self.scale;
        (x, y)
    }

    fn flat(&self, p: &Vec3) -> Vec2 {
        Vec2::new(p[self.axes.0], p[self.axes.1])
    }

    fn height(&self) -> f64 {
        (self.hi[self.axes.1] - self.lo[self.axes.1]) * self.scale + 2.0 * PAD
    }
}

fn outline(prim: &Primitive, pose: &Pose, view: &View) -> Vec<Vec3> {
    match *prim {
        Primitive::Box { half_extents: h } => {
            let mut pts = Vec::with_capacity(8);
            for sx in [-1.0, 1.0] {
                for sy in [-1.0, 1.0] {
                    for sz in [-1.0, 1.0] {
                        pts.push(pose.transform_point(&Vec3::new(sx * h.x, sy * h.y, sz * h.z)));
                    }
                }
            }
            pts
        }
        Primitive::Sphere { radius } => ring(&pose.position, radius, view),
        Primitive::Capsule { radius, half_length } => {
            let axis = pose.rotate(&Vec3::z()) * half_length;
            let mut pts = ring(&(pose.position - axis), radius, view);
            pts.extend(ring(&(pose.position + axis), radius, view));
            pts
        }
    }
}

fn ring(c: &Vec3, r: f64, view: &View) -> Vec<Vec3> {
    (0..24)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / 24.0;
            let mut p = *c;
            p[view.axes.0] += r * a.cos();
            p[view.axes.1] += r * a.sin();
            p
        })
        .collect()
}

fn polygon(s: &mut String, pts: &[Vec3], view: &View, style: &str) {
    let flat: Vec<Vec2> = pts.iter().map(|p| view.flat(p)).collect();
    let Ok(hull) = convex_hull_2d(&flat) else {
        return;
    };
    let coords: Vec<String> = hull
        .vertices
        .iter()
        .map(|v| {
            let mut p = Vec3::zeros();
            p[view.axes.0] = v.x;
            p[view.axes.1] = v.y;
            let (x, y) = view.map(&p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(s, "  <polygon points=\"{}\" {style}/>", coords.join(" "));
}

fn draw(s: &mut String, view: &View, scene: &Scene, channels: &[Channel], path: &[Vec3]) {
    let (x0, y0) = view.map(&view.lo);
    let (x1, y1) = view.map(&view.hi);
    let _ = writeln!(
        s,
        "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>",
        x0.min(x1),
        y0.min(y1),
        (x1 - x0).abs(),
        (y1 - y0).abs()
    );
    for r in scene.sub_obstacles() {
        polygon(s, &outline(&r.sub.primitive, &r.sub.pose, view), view, "fill=\"#999\" fill-opacity=\"0.6\" stroke=\"#444\"");
    }
    for c in channels {
        let pts: Vec<Vec3> = c.polygon.vertices.iter().map(|v| c.lift(v)).collect();
        polygon(s, &pts, view, "fill=\"none\" stroke=\"#1a7f37\" stroke-width=\"2\"");
    }
    if !path.is_empty() {
        let coords: Vec<String> = path
            .iter()
            .map(|p| {
                let (x, y) = view.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(s, "  <polyline points=\"{}\" fill=\"none\" stroke=\"#cf222e\"/>", coords.join(" "));
    }
}

/// Obstacles, channel polygons and, when given, the object center at each
/// waypoint. Output depends only on the inputs.
pub fn render_svg(scene: &Scene, channels: &[Channel], waypoints: Option<&[Configuration]>) -> String {
    let (lo, hi) = (scene.workspace.min, scene.workspace.max);
    let span = (hi - lo).max();
    let scale = (PANEL - 2.0 * PAD) / span;
    let top = View { axes: (0, 1), origin_x: 0.0, lo, hi, scale };
    let side = View { axes: (0, 2), origin_x: PANEL, lo, hi, scale };
    let height = top.height().max(side.height());
    let path: Vec<Vec3> = waypoints
        .unwrap_or(&[])
        .iter()
        .map(|q| scene.robot.object_pose(q).position)
        .collect();

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0}\" height=\"{height:.0}\">",
        2.0 * PANEL
    );
    for (view, title) in [(&top, "top (x-y)"), (&side, "side (x-z)")] {
        let _ = writeln!(s, " <g>\n  <title>{title}</title>");
        draw(&mut s, view, scene, channels, &path);
        s.push_str(" </g>\n");
    }
    s.push_str("</svg>\n");
    s
}
