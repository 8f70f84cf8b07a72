use nalgebra::{Unit, UnitQuaternion};
use rand::Rng;

use super::Channel;
use crate::geometry::{Polygon2D, Pose, Primitive, Vec3};

/// Default half-angle of the orientation cone around the channel normal.
pub const ALIGNMENT_CONE: f64 = 15.0 * std::f64::consts::PI / 180.0;

/// Draws object poses threading a channel: position inside the opening (shrunk
/// by the object's cross-section radius), long axis near `±normal`, free roll.
#[derive(Clone, Debug)]
pub struct ChannelSampler {
    center: Vec3,
    normal: Vec3,
    frame: [Vec3; 2],
    region: Polygon2D,
    offset: f64,
    band: f64,
    cone: f64,
    long_axis: Vec3,
}

impl ChannelSampler {
    /// `band` is the half-width of the normal offset range. `None` when the
    /// opening is narrower than the object's cross-section.
    pub fn new(channel: &Channel, object: &Primitive, band: f64, cone: f64) -> Option<Self> {
        let region = channel.polygon.inset(object.cross_section_radius())?;
        Some(ChannelSampler {
            center: channel.center,
            normal: channel.plane.normal,
            frame: channel.plane.frame,
            region,
            offset: channel.plane.offset,
            band,
            cone,
            long_axis: object.long_axis(),
        })
    }

    pub fn orientation(&self, direction: &Vec3, roll: f64) -> UnitQuaternion<f64> {
        let align = UnitQuaternion::rotation_between(&self.long_axis, direction).unwrap_or_else(|| {
            // Antiparallel: half turn about any axis orthogonal to the long axis.
            let perp = if self.long_axis.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
            let axis = Unit::new_normalize(self.long_axis.cross(&perp));
            UnitQuaternion::from_axis_angle(&axis, std::f64::consts::PI)
        });
        align * UnitQuaternion::from_axis_angle(&Unit::new_unchecked(self.long_axis), roll)
    }

    /// Object centered in the opening with its long axis along `+normal`.
    pub fn center_pose(&self) -> Pose {
        Pose::new(self.center, self.orientation(&self.normal, 0.0))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Pose {
        let uv = self.region.sample_uniform(rng.gen(), rng.gen(), rng.gen());
        let along = if self.band > 0.0 {
            rng.gen_range(-self.band..=self.band)
        } else {
            0.0
        };
        let position = self.normal * (self.offset + along) + self.frame[0] * uv.x + self.frame[1] * uv.y;
        // Uniform on the spherical cap: cos(theta) uniform.
        let cos_t = rng.gen_range(self.cone.cos()..=1.0);
        let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let dir = (self.normal * cos_t
            + (self.frame[0] * phi.cos() + self.frame[1] * phi.sin()) * sin_t)
            * sign;
        let roll = rng.gen_range(0.0..std::f64::consts::TAU);
        Pose::new(position, self.orientation(&dir, roll))
    }
}
