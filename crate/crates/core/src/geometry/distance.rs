use std::cmp::Ordering;

use super::gjk::{box_box_sat_depth, gjk_distance, Core, GjkOutcome};
use super::primitive::capsule_segment;
use super::{Pose, Primitive, Vec3};

/// Result of a pairwise distance query.
///
/// `distance > 0` means the shapes are apart and the points are the mutually
/// closest surface points. For overlapping shapes `distance <= 0` is a lower
/// bound on the penetration and the points are a witness pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Proximity {
    pub distance: f64,
    pub point_a: Vec3,
    pub point_b: Vec3,
}

impl Proximity {
    fn swapped(self) -> Self {
        Proximity {
            distance: self.distance,
            point_a: self.point_b,
            point_b: self.point_a,
        }
    }
}

fn core_of(p: &Primitive, pose: &Pose) -> (Core, f64) {
    match *p {
        Primitive::Sphere { radius } => (Core::Point(pose.position), radius),
        Primitive::Capsule {
            radius,
            half_length,
        } => {
            let (a, b) = capsule_segment(pose, half_length);
            (Core::Segment(a, b), radius)
        }
        Primitive::Box { half_extents } => (
            Core::Cuboid {
                pose: *pose,
                half_extents,
            },
            0.0,
        ),
    }
}

fn sort_key(p: &Primitive, pose: &Pose) -> [f64; 11] {
    let (rank, params) = match *p {
        Primitive::Sphere { radius } => (0.0, [radius, 0.0, 0.0]),
        Primitive::Capsule {
            radius,
            half_length,
        } => (1.0, [radius, half_length, 0.0]),
        Primitive::Box { half_extents } => (2.0, [half_extents.x, half_extents.y, half_extents.z]),
    };
    let q = pose.orientation.coords;
    [
        rank,
        pose.position.x,
        pose.position.y,
        pose.position.z,
        q.x,
        q.y,
        q.z,
        q.w,
        params[0],
        params[1],
        params[2],
    ]
}

/// Signed distance and witness points between two posed primitives.
///
/// The pair is evaluated in a canonical order so that swapping the arguments
/// swaps the witness points and leaves the distance bit-identical.
pub fn pairwise_distance(a: &Primitive, pose_a: &Pose, b: &Primitive, pose_b: &Pose) -> Proximity {
    let ka = sort_key(a, pose_a);
    let kb = sort_key(b, pose_b);
    let order = ka
        .iter()
        .zip(kb.iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal);
    if order == Ordering::Greater {
        ordered_distance(b, pose_b, a, pose_a).swapped()
    } else {
        ordered_distance(a, pose_a, b, pose_b)
    }
}

fn ordered_distance(a: &Primitive, pose_a: &Pose, b: &Primitive, pose_b: &Pose) -> Proximity {
    let (core_a, ra) = core_of(a, pose_a);
    let (core_b, rb) = core_of(b, pose_b);

    let separated = |d: f64, ca: Vec3, cb: Vec3| -> Proximity {
        let n = if d > 0.0 { (cb - ca) / d } else { Vec3::x() };
        Proximity {
            distance: d - ra - rb,
            point_a: ca + n * ra,
            point_b: cb - n * rb,
        }
    };
    let overlapping = |core_depth: f64| -> Proximity {
        let (pa, pb) = witness_pair(a, pose_a, b, pose_b);
        Proximity {
            distance: -(core_depth + ra + rb),
            point_a: pa,
            point_b: pb,
        }
    };

    match (&core_a, &core_b) {
        (Core::Point(_) | Core::Segment(..), Core::Point(_) | Core::Segment(..)) => {
            let (a0, a1) = segment_ends(&core_a);
            let (b0, b1) = segment_ends(&core_b);
            let (ca, cb) = closest_segment_segment(&a0, &a1, &b0, &b1);
            let d = (cb - ca).norm();
            if d > 0.0 {
                separated(d, ca, cb)
            } else {
                overlapping(0.0)
            }
        }
        (Core::Point(p), Core::Cuboid { pose, half_extents }) => {
            point_box(p, ra, pose, half_extents, false, &overlapping)
        }
        (Core::Cuboid { pose, half_extents }, Core::Point(p)) => {
            point_box(p, rb, pose, half_extents, true, &overlapping)
        }
        _ => match gjk_distance(&core_a, &core_b) {
            GjkOutcome::Separated {
                distance,
                point_a,
                point_b,
            } => separated(distance, point_a, point_b),
            GjkOutcome::Intersecting => {
                let depth = match (&core_a, &core_b) {
                    (
                        Core::Cuboid {
                            pose: pa,
                            half_extents: ha,
                        },
                        Core::Cuboid {
                            pose: pb,
                            half_extents: hb,
                        },
                    ) => box_box_sat_depth(pa, ha, pb, hb),
                    _ => 0.0,
                };
                overlapping(depth)
            }
        },
    }
}

fn point_box(
    p: &Vec3,
    radius: f64,
    pose: &Pose,
    half: &Vec3,
    box_first: bool,
    overlapping: &dyn Fn(f64) -> Proximity,
) -> Proximity {
    let local = pose.inverse_transform_point(p);
    let clamped = local.zip_map(half, |v, h| v.clamp(-h, h));
    let d = (local - clamped).norm();
    if d > 0.0 {
        let on_box = pose.transform_point(&clamped);
        let n = (on_box - p) / d;
        let on_sphere = p + n * radius;
        let (pa, pb) = if box_first {
            (on_box, on_sphere)
        } else {
            (on_sphere, on_box)
        };
        Proximity {
            distance: d - radius,
            point_a: pa,
            point_b: pb,
        }
    } else {
        let depth = (half - local.abs()).min();
        overlapping(depth)
    }
}

fn segment_ends(c: &Core) -> (Vec3, Vec3) {
    match c {
        Core::Point(p) => (*p, *p),
        Core::Segment(a, b) => (*a, *b),
        Core::Cuboid { .. } => unreachable!("boxes have no segment form"),
    }
}

/// Closest points between segments `p1q1` and `p2q2` (either may be degenerate).
pub(crate) fn closest_segment_segment(p1: &Vec3, q1: &Vec3, p2: &Vec3, q2: &Vec3) -> (Vec3, Vec3) {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    let eps = 1e-24;
    let (s, t);
    if a <= eps && e <= eps {
        return (*p1, *p2);
    }
    if a <= eps {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e <= eps {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > eps {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    (p1 + d1 * s, p2 + d2 * t)
}

/// Witness points for overlapping shapes via alternating projections, which
/// converge into the intersection of two convex sets.
fn witness_pair(a: &Primitive, pose_a: &Pose, b: &Primitive, pose_b: &Pose) -> (Vec3, Vec3) {
    let mut q = pose_b.position;
    let mut p = a.project_point(pose_a, &q);
    for _ in 0..32 {
        q = b.project_point(pose_b, &p);
        let next = a.project_point(pose_a, &q);
        if (next - p).norm_squared() < 1e-28 {
            p = next;
            break;
        }
        p = next;
    }
    (p, b.project_point(pose_b, &p))
}

/// Signed distance from a point to a posed primitive.
pub fn point_distance(p: &Vec3, prim: &Primitive, pose: &Pose) -> f64 {
    prim.signed_distance_to_point(pose, p)
}

/// Signed distance from a line segment to a posed primitive (exact for all kinds).
pub fn segment_distance(x1: &Vec3, x2: &Vec3, prim: &Primitive, pose: &Pose) -> f64 {
    match *prim {
        Primitive::Sphere { radius } => {
            let c = super::primitive::closest_on_segment(x1, x2, &pose.position);
            (c - pose.position).norm() - radius
        }
        Primitive::Capsule {
            radius,
            half_length,
        } => {
            let (a, b) = capsule_segment(pose, half_length);
            let (c1, c2) = closest_segment_segment(x1, x2, &a, &b);
            (c2 - c1).norm() - radius
        }
        Primitive::Box { half_extents } => {
            let seg = Core::Segment(*x1, *x2);
            let cuboid = Core::Cuboid {
                pose: *pose,
                half_extents,
            };
            match gjk_distance(&seg, &cuboid) {
                GjkOutcome::Separated { distance, .. } => distance,
                GjkOutcome::Intersecting => 0.0,
            }
        }
    }
}
