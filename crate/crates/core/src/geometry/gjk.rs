//! Gilbert–Johnson–Keerthi distance between convex support maps.
//!
//! Only the separation distance is computed here; the caller decides what to
//! report for overlapping shapes.

use arrayvec::ArrayVec;

use super::{Pose, Vec3};

pub const MAX_ITERATIONS: usize = 64;
pub const TOLERANCE: f64 = 1e-9;

/// Core shape of a primitive with its rounding radius stripped off.
#[derive(Clone, Copy, Debug)]
pub enum Core {
    Point(Vec3),
    Segment(Vec3, Vec3),
    Cuboid { pose: Pose, half_extents: Vec3 },
}

impl Core {
    pub fn support(&self, dir: &Vec3) -> Vec3 {
        match self {
            Core::Point(p) => *p,
            Core::Segment(a, b) => {
                if dir.dot(&(b - a)) >= 0.0 {
                    *b
                } else {
                    *a
                }
            }
            Core::Cuboid { pose, half_extents } => {
                let local = pose.orientation.inverse() * dir;
                let corner = Vec3::new(
                    half_extents.x.copysign(local.x),
                    half_extents.y.copysign(local.y),
                    half_extents.z.copysign(local.z),
                );
                pose.transform_point(&corner)
            }
        }
    }

    pub fn center(&self) -> Vec3 {
        match self {
            Core::Point(p) => *p,
            Core::Segment(a, b) => (a + b) * 0.5,
            Core::Cuboid { pose, .. } => pose.position,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum GjkOutcome {
    Separated {
        distance: f64,
        point_a: Vec3,
        point_b: Vec3,
    },
    Intersecting,
}

/// Support vertices with barycentric weights.
type Simplex = ArrayVec<(Vertex, f64), 4>;

fn simplex(items: &[(Vertex, f64)]) -> Simplex {
    items.iter().copied().collect()
}

#[derive(Clone, Copy, Debug)]
struct Vertex {
    w: Vec3,
    a: Vec3,
    b: Vec3,
}

fn support_vertex(a: &Core, b: &Core, dir: &Vec3) -> Vertex {
    let pa = a.support(&-dir);
    let pb = b.support(dir);
    Vertex {
        w: pa - pb,
        a: pa,
        b: pb,
    }
}

/// Distance between two convex cores.
pub fn gjk_distance(a: &Core, b: &Core) -> GjkOutcome {
    let mut v = a.center() - b.center();
    if v.norm_squared() < 1e-24 {
        v = Vec3::x();
    }
    let first = support_vertex(a, b, &v);
    let mut current = simplex(&[(first, 1.0)]);
    v = first.w;

    for _ in 0..MAX_ITERATIONS {
        let vv = v.norm_squared();
        if vv <= 1e-24 {
            return GjkOutcome::Intersecting;
        }
        let w = support_vertex(a, b, &v);
        let vnorm = vv.sqrt();
        // Upper bound |v| minus lower bound v.w/|v| on the distance.
        if vnorm - v.dot(&w.w) / vnorm <= TOLERANCE {
            break;
        }
        if current.iter().any(|(s, _)| (s.w - w.w).norm_squared() <= 1e-24) {
            break;
        }
        let mut verts: ArrayVec<Vertex, 4> = current.iter().map(|(s, _)| *s).collect();
        verts.push(w);
        match closest_on_simplex(&verts) {
            Some((point, reduced)) => {
                v = point;
                current = reduced;
            }
            None => return GjkOutcome::Intersecting,
        }
    }

    let mut point_a = Vec3::zeros();
    let mut point_b = Vec3::zeros();
    for (vert, lambda) in &current {
        point_a += vert.a * *lambda;
        point_b += vert.b * *lambda;
    }
    let distance = v.norm();
    if distance <= 1e-12 {
        return GjkOutcome::Intersecting;
    }
    GjkOutcome::Separated {
        distance,
        point_a,
        point_b,
    }
}

/// Closest point to the origin on the simplex spanned by `verts`, with the
/// reduced support set and barycentric weights. `None` means the origin lies
/// inside a full tetrahedron.
fn closest_on_simplex(verts: &[Vertex]) -> Option<(Vec3, Simplex)> {
    match verts.len() {
        1 => Some((verts[0].w, simplex(&[(verts[0], 1.0)]))),
        2 => Some(closest_on_segment(verts[0], verts[1])),
        3 => Some(closest_on_triangle(verts[0], verts[1], verts[2])),
        4 => closest_on_tetrahedron(verts),
        _ => unreachable!("simplex has at most four vertices"),
    }
}

fn closest_on_segment(a: Vertex, b: Vertex) -> (Vec3, Simplex) {
    let ab = b.w - a.w;
    let denom = ab.norm_squared();
    let t = if denom <= f64::MIN_POSITIVE {
        0.0
    } else {
        (-a.w).dot(&ab) / denom
    };
    if t <= 0.0 {
        (a.w, simplex(&[(a, 1.0)]))
    } else if t >= 1.0 {
        (b.w, simplex(&[(b, 1.0)]))
    } else {
        (a.w + ab * t, simplex(&[(a, 1.0 - t), (b, t)]))
    }
}

fn closest_on_triangle(a: Vertex, b: Vertex, c: Vertex) -> (Vec3, Simplex) {
    let ab = b.w - a.w;
    let ac = c.w - a.w;
    let ap = -a.w;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return (a.w, simplex(&[(a, 1.0)]));
    }
    let bp = -b.w;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return (b.w, simplex(&[(b, 1.0)]));
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let t = d1 / (d1 - d3);
        return (a.w + ab * t, simplex(&[(a, 1.0 - t), (b, t)]));
    }
    let cp = -c.w;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return (c.w, simplex(&[(c, 1.0)]));
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let t = d2 / (d2 - d6);
        return (a.w + ac * t, simplex(&[(a, 1.0 - t), (c, t)]));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (b.w + (c.w - b.w) * t, simplex(&[(b, 1.0 - t), (c, t)]));
    }
    let denom = va + vb + vc;
    if denom.abs() <= f64::MIN_POSITIVE {
        // Degenerate triangle: fall back to its longest edge.
        let candidates = [
            closest_on_segment(a, b),
            closest_on_segment(b, c),
            closest_on_segment(a, c),
        ];
        return candidates
            .into_iter()
            .min_by(|x, y| x.0.norm_squared().total_cmp(&y.0.norm_squared()))
            .unwrap();
    }
    let v = vb / denom;
    let w = vc / denom;
    (
        a.w + ab * v + ac * w,
        simplex(&[(a, 1.0 - v - w), (b, v), (c, w)]),
    )
}

fn closest_on_tetrahedron(verts: &[Vertex]) -> Option<(Vec3, Simplex)> {
    let faces = [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 3, 1), (1, 2, 3, 0)];
    let mut best: Option<(Vec3, Simplex)> = None;
    let mut outside_any = false;
    for (i, j, k, opp) in faces {
        let (a, b, c, d) = (verts[i].w, verts[j].w, verts[k].w, verts[opp].w);
        let n = (b - a).cross(&(c - a));
        let side_origin = n.dot(&(-a));
        let side_opp = n.dot(&(d - a));
        let flat = side_opp.abs() <= 1e-18 * n.norm().max(1.0);
        if flat || side_origin * side_opp < 0.0 {
            outside_any = true;
            let candidate = closest_on_triangle(verts[i], verts[j], verts[k]);
            let better = best
                .as_ref()
                .is_none_or(|b| candidate.0.norm_squared() < b.0.norm_squared());
            if better {
                best = Some(candidate);
            }
        }
    }
    if outside_any {
        best
    } else {
        None
    }
}

/// Overlap depth of two intersecting boxes along the least-overlap separating
/// axis; zero when some axis separates them.
pub fn box_box_sat_depth(pa: &Pose, ha: &Vec3, pb: &Pose, hb: &Vec3) -> f64 {
    let ra = pa.orientation.to_rotation_matrix();
    let rb = pb.orientation.to_rotation_matrix();
    let axes_a: [Vec3; 3] = [
        ra.matrix().column(0).into(),
        ra.matrix().column(1).into(),
        ra.matrix().column(2).into(),
    ];
    let axes_b: [Vec3; 3] = [
        rb.matrix().column(0).into(),
        rb.matrix().column(1).into(),
        rb.matrix().column(2).into(),
    ];
    let t = pb.position - pa.position;
    let mut candidates: Vec<Vec3> = Vec::with_capacity(15);
    candidates.extend_from_slice(&axes_a);
    candidates.extend_from_slice(&axes_b);
    for a in &axes_a {
        for b in &axes_b {
            let c = a.cross(b);
            let n = c.norm();
            if n > 1e-9 {
                candidates.push(c / n);
            }
        }
    }
    let mut depth = f64::INFINITY;
    for axis in candidates {
        let proj_a: f64 = (0..3).map(|i| ha[i] * axes_a[i].dot(&axis).abs()).sum();
        let proj_b: f64 = (0..3).map(|i| hb[i] * axes_b[i].dot(&axis).abs()).sum();
        let overlap = proj_a + proj_b - t.dot(&axis).abs();
        if overlap < 0.0 {
            return 0.0;
        }
        depth = depth.min(overlap);
    }
    depth
}
