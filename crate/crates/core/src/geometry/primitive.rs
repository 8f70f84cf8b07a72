use super::{GeometryError, Pose, Vec3};

/// Convex solid used for obstacle segments, robot links and the grasped object.
///
/// Capsules are aligned with their local z axis; boxes are centered on their
/// local origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Primitive {
    Sphere { radius: f64 },
    Capsule { radius: f64, half_length: f64 },
    Box { half_extents: Vec3 },
}

impl Primitive {
    pub fn sphere(radius: f64) -> Result<Self, GeometryError> {
        Self::Sphere { radius }.validated()
    }

    pub fn capsule(radius: f64, half_length: f64) -> Result<Self, GeometryError> {
        Self::Capsule {
            radius,
            half_length,
        }
        .validated()
    }

    pub fn cuboid(hx: f64, hy: f64, hz: f64) -> Result<Self, GeometryError> {
        Self::Box {
            half_extents: Vec3::new(hx, hy, hz),
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self, GeometryError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        let valid = match self {
            Primitive::Sphere { radius } => ok(radius),
            Primitive::Capsule {
                radius,
                half_length,
            } => ok(radius) && ok(half_length),
            Primitive::Box { half_extents } => half_extents.iter().all(|&v| ok(v)),
        };
        if valid {
            Ok(self)
        } else {
            Err(GeometryError::InvalidPrimitive(format!("{self:?}")))
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Primitive::Sphere { .. } => "sphere",
            Primitive::Capsule { .. } => "capsule",
            Primitive::Box { .. } => "box",
        }
    }

    /// Radius of a sphere around the local origin that encloses the shape.
    pub fn bounding_radius(&self) -> f64 {
        match *self {
            Primitive::Sphere { radius } => radius,
            Primitive::Capsule {
                radius,
                half_length,
            } => radius + half_length,
            Primitive::Box { half_extents } => half_extents.norm(),
        }
    }

    /// Half extents of the local oriented bounding box.
    pub fn obb_half_extents(&self) -> Vec3 {
        match *self {
            Primitive::Sphere { radius } => Vec3::repeat(radius),
            Primitive::Capsule {
                radius,
                half_length,
            } => Vec3::new(radius, radius, radius + half_length),
            Primitive::Box { half_extents } => half_extents,
        }
    }

    /// Unit vector (local frame) along the largest OBB extent.
    pub fn long_axis(&self) -> Vec3 {
        let h = self.obb_half_extents();
        let mut best = 2;
        for i in [1, 0] {
            if h[i] > h[best] {
                best = i;
            }
        }
        let mut axis = Vec3::zeros();
        axis[best] = 1.0;
        axis
    }

    /// Half of the second-largest OBB extent: the radius of the smallest
    /// opening the shape can be pushed through along its long axis.
    pub fn cross_section_radius(&self) -> f64 {
        let mut h: Vec<f64> = self.obb_half_extents().iter().copied().collect();
        h.sort_by(|a, b| b.total_cmp(a));
        h[1]
    }

    /// Area of the cross-section rectangle orthogonal to the long axis.
    pub fn cross_section_area(&self) -> f64 {
        let mut h: Vec<f64> = self.obb_half_extents().iter().copied().collect();
        h.sort_by(|a, b| b.total_cmp(a));
        4.0 * h[1] * h[2]
    }

    /// World axis-aligned bounding box `(min, max)` at `pose`.
    pub fn aabb(&self, pose: &Pose) -> (Vec3, Vec3) {
        let ext = match *self {
            Primitive::Sphere { radius } => Vec3::repeat(radius),
            Primitive::Capsule {
                radius,
                half_length,
            } => {
                let axis = pose.rotate(&Vec3::z()) * half_length;
                axis.abs() + Vec3::repeat(radius)
            }
            Primitive::Box { half_extents } => {
                let r = pose.orientation.to_rotation_matrix();
                r.matrix().abs() * half_extents
            }
        };
        (pose.position - ext, pose.position + ext)
    }

    /// Closest point of the solid to `p` (equal to `p` when inside).
    pub fn project_point(&self, pose: &Pose, p: &Vec3) -> Vec3 {
        match *self {
            Primitive::Sphere { radius } => {
                let d = p - pose.position;
                let n = d.norm();
                if n <= radius {
                    *p
                } else {
                    pose.position + d * (radius / n)
                }
            }
            Primitive::Capsule {
                radius,
                half_length,
            } => {
                let (a, b) = capsule_segment(pose, half_length);
                let c = closest_on_segment(&a, &b, p);
                let d = p - c;
                let n = d.norm();
                if n <= radius {
                    *p
                } else {
                    c + d * (radius / n)
                }
            }
            Primitive::Box { half_extents } => {
                let local = pose.inverse_transform_point(p);
                let clamped = local.zip_map(&half_extents, |v, h| v.clamp(-h, h));
                pose.transform_point(&clamped)
            }
        }
    }

    /// Signed distance from `p` to the surface (negative inside).
    pub fn signed_distance_to_point(&self, pose: &Pose, p: &Vec3) -> f64 {
        match *self {
            Primitive::Sphere { radius } => (p - pose.position).norm() - radius,
            Primitive::Capsule {
                radius,
                half_length,
            } => {
                let (a, b) = capsule_segment(pose, half_length);
                (p - closest_on_segment(&a, &b, p)).norm() - radius
            }
            Primitive::Box { half_extents } => {
                let local = pose.inverse_transform_point(p);
                let q = local.abs() - half_extents;
                let outside = q.map(|v| v.max(0.0)).norm();
                let inside = q.max().min(0.0);
                outside + inside
            }
        }
    }
}

/// World-frame end points of a capsule's core segment.
pub(crate) fn capsule_segment(pose: &Pose, half_length: f64) -> (Vec3, Vec3) {
    let axis = pose.rotate(&Vec3::z()) * half_length;
    (pose.position - axis, pose.position + axis)
}

pub(crate) fn closest_on_segment(a: &Vec3, b: &Vec3, p: &Vec3) -> Vec3 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 <= f64::MIN_POSITIVE {
        return *a;
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    a + ab * t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_sizes() {
        assert!(Primitive::sphere(0.0).is_err());
        assert!(Primitive::capsule(0.1, -1.0).is_err());
        assert!(Primitive::cuboid(1.0, f64::NAN, 1.0).is_err());
        assert!(Primitive::cuboid(1.0, 2.0, 3.0).is_ok());
    }

    #[test]
    fn long_axis_and_cross_section() {
        let rod = Primitive::capsule(0.02, 0.3).unwrap();
        assert_eq!(rod.long_axis(), Vec3::z());
        assert!((rod.cross_section_radius() - 0.02).abs() < 1e-15);
        let slab = Primitive::cuboid(0.5, 0.1, 0.05).unwrap();
        assert_eq!(slab.long_axis(), Vec3::x());
        assert!((slab.cross_section_radius() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn box_signed_distance_inside_and_out() {
        let b = Primitive::cuboid(1.0, 1.0, 1.0).unwrap();
        let pose = Pose::identity();
        assert!((b.signed_distance_to_point(&pose, &Vec3::new(3.0, 0.0, 0.0)) - 2.0).abs() < 1e-12);
        assert!((b.signed_distance_to_point(&pose, &Vec3::new(0.5, 0.0, 0.0)) + 0.5).abs() < 1e-12);
    }
}
