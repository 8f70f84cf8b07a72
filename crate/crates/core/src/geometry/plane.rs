use nalgebra::{Matrix3, SymmetricEigen};

use super::{GeometryError, Vec2, Vec3};

/// Oriented plane with an in-plane orthonormal frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plane {
    pub normal: Vec3,
    /// Signed distance of the plane from the origin along `normal`.
    pub offset: f64,
    pub frame: [Vec3; 2],
}

impl Plane {
    /// Plane through `point` with the given normal; the normal is canonicalized.
    pub fn from_point_normal(point: &Vec3, normal: &Vec3) -> Result<Self, GeometryError> {
        let n = normal.try_normalize(1e-12).ok_or_else(|| {
            GeometryError::DegenerateInput("plane normal has zero length".into())
        })?;
        let n = canonical_normal(n);
        let frame = in_plane_frame(&n);
        Ok(Plane {
            normal: n,
            offset: n.dot(point),
            frame,
        })
    }

    pub fn origin(&self) -> Vec3 {
        self.normal * self.offset
    }

    pub fn signed_distance(&self, p: &Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// Coordinates of the orthogonal projection of `p`, in `frame`.
    pub fn project(&self, p: &Vec3) -> Vec2 {
        Vec2::new(self.frame[0].dot(p), self.frame[1].dot(p))
    }

    /// 3-D point on the plane with frame coordinates `uv`.
    pub fn lift(&self, uv: &Vec2) -> Vec3 {
        self.origin() + self.frame[0] * uv.x + self.frame[1] * uv.y
    }
}

/// Flip `n` so that its first non-negligible component is positive.
fn canonical_normal(n: Vec3) -> Vec3 {
    for i in 0..3 {
        if n[i].abs() > 1e-12 {
            return if n[i] < 0.0 { -n } else { n };
        }
    }
    n
}

fn in_plane_frame(n: &Vec3) -> [Vec3; 2] {
    let seed = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let u = (seed - n * n.dot(&seed)).normalize();
    let v = n.cross(&u);
    [u, v]
}

/// Project `point` onto `plane`, returning frame coordinates.
pub fn project_to_plane(point: &Vec3, plane: &Plane) -> Vec2 {
    plane.project(point)
}

/// Total-least-squares plane through `points` and its RMS perpendicular residual.
pub fn fit_plane(points: &[Vec3]) -> Result<(Plane, f64), GeometryError> {
    if points.len() < 3 {
        return Err(GeometryError::DegenerateInput(format!(
            "plane fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let centroid = points.iter().fold(Vec3::zeros(), |acc, p| acc + p) / n;
    let mut cov = Matrix3::zeros();
    for p in points {
        let d = p - centroid;
        cov += d * d.transpose();
    }
    cov /= n;
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let middle = eig.eigenvalues[order[1]].max(0.0);
    // Collinear within 1e-9 m: RMS spread along the second principal axis.
    if middle.sqrt() <= 1e-9 {
        return Err(GeometryError::DegenerateInput(
            "points are collinear; no unique plane".into(),
        ));
    }
    let normal: Vec3 = eig.eigenvectors.column(order[0]).into();
    let plane = Plane::from_point_normal(&centroid, &normal)?;
    let rms = (points
        .iter()
        .map(|p| plane.signed_distance(p).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok((plane, rms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    #[test]
    fn coplanar_square_fits_exactly() {
        let (plane, rms) =
            fit_plane(&[v(0., 0., 0.), v(1., 0., 0.), v(0., 1., 0.), v(1., 1., 0.)]).unwrap();
        assert!((plane.normal - Vec3::z()).norm() < 1e-12);
        assert!(rms <= 1e-12);
        assert!(plane.offset.abs() < 1e-12);
    }

    #[test]
    fn tilted_points_are_still_coplanar() {
        // z = eps (1 - 2x) holds for all four points.
        let e = 1e-3;
        let (_, rms) =
            fit_plane(&[v(0., 0., e), v(1., 0., -e), v(0., 1., e), v(1., 1., -e)]).unwrap();
        assert!(rms <= 1e-12);
    }

    #[test]
    fn saddle_residual_matches_svd() {
        // numpy SVD of the centered points gives normal z and RMS 1e-3.
        let e = 1e-3;
        let (plane, rms) =
            fit_plane(&[v(0., 0., e), v(1., 0., -e), v(0., 1., -e), v(1., 1., e)]).unwrap();
        assert!((rms - 1e-3).abs() < 1e-9);
        assert!((plane.normal - Vec3::z()).norm() < 1e-9);
    }

    #[test]
    fn collinear_is_degenerate() {
        let r = fit_plane(&[v(0., 0., 0.), v(1., 0., 0.), v(2., 0., 0.)]);
        assert!(matches!(r, Err(GeometryError::DegenerateInput(_))));
    }

    #[test]
    fn normal_sign_is_canonical() {
        let p = Plane::from_point_normal(&Vec3::zeros(), &v(0.0, -1.0, 1.0)).unwrap();
        assert!(p.normal.y > 0.0);
        let p = Plane::from_point_normal(&Vec3::zeros(), &v(-2.0, 0.0, 0.0)).unwrap();
        assert_eq!(p.normal, Vec3::x());
    }

    #[test]
    fn projection_of_point_above_plane() {
        let plane = Plane::from_point_normal(&Vec3::zeros(), &Vec3::z()).unwrap();
        assert_eq!(plane.frame, [Vec3::x(), Vec3::y()]);
        let uv = project_to_plane(&v(0.0, 0.0, 5.0), &plane);
        assert!(uv.norm() < 1e-15);
    }

    #[test]
    fn frame_is_orthonormal() {
        let plane = Plane::from_point_normal(&v(1.0, 2.0, 3.0), &v(0.3, -0.5, 0.8)).unwrap();
        let [u, w] = plane.frame;
        assert!((plane.normal.norm() - 1.0).abs() < 1e-9);
        assert!(u.dot(&plane.normal).abs() < 1e-9);
        assert!(w.dot(&plane.normal).abs() < 1e-9);
        assert!(u.dot(&w).abs() < 1e-9);
    }
}
