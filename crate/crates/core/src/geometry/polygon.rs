use nalgebra::{Matrix3, Vector3};

use super::{GeometryError, Vec2};

/// Convex polygon with counter-clockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon2D {
    pub vertices: Vec<Vec2>,
}

/// Area, centroid and largest inscribed circle of a convex polygon.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolygonMeasures {
    pub area: f64,
    pub centroid: Vec2,
    pub incircle_radius: f64,
    /// Center of the largest inscribed circle.
    pub incircle_center: Vec2,
}

fn cross(o: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Andrew's monotone chain; collinear boundary points are dropped.
pub fn convex_hull_2d(points: &[Vec2]) -> Result<Polygon2D, GeometryError> {
    if points.len() < 3 {
        return Err(GeometryError::DegenerateInput(format!(
            "hull needs at least 3 points, got {}",
            points.len()
        )));
    }
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();

    let mut hull: Vec<Vec2> = Vec::with_capacity(pts.len() * 2);
    for p in pts.iter() {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();

    let poly = Polygon2D { vertices: hull };
    if poly.vertices.len() < 3 || poly.signed_area() < 1e-12 {
        return Err(GeometryError::DegenerateInput(
            "hull area below 1e-12".into(),
        ));
    }
    Ok(poly)
}

impl Polygon2D {
    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        let mut twice = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            twice += a.x * b.y - b.x * a.y;
        }
        twice * 0.5
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Distance from `p` to the boundary, positive inside (min over edge lines).
    pub fn inside_distance(&self, p: &Vec2) -> f64 {
        self.edges()
            .map(|(a, b)| {
                let e = b - a;
                cross(&a, &b, p) / e.norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: &Vec2, tol: f64) -> bool {
        self.inside_distance(p) >= -tol
    }

    pub fn bounding_box(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::repeat(f64::INFINITY);
        let mut hi = Vec2::repeat(f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    /// Uniform point inside the polygon from two unit-interval draws plus a
    /// triangle selector in `[0, 1)`.
    pub fn sample_uniform(&self, pick: f64, u: f64, v: f64) -> Vec2 {
        let base = self.vertices[0];
        let n = self.vertices.len();
        let areas: Vec<f64> = (1..n - 1)
            .map(|i| cross(&base, &self.vertices[i], &self.vertices[i + 1]).abs() * 0.5)
            .collect();
        let total: f64 = areas.iter().sum();
        let mut target = pick * total;
        let mut tri = areas.len() - 1;
        for (i, a) in areas.iter().enumerate() {
            if target < *a {
                tri = i;
                break;
            }
            target -= a;
        }
        let (mut s, mut t) = (u, v);
        if s + t > 1.0 {
            s = 1.0 - s;
            t = 1.0 - t;
        }
        let p1 = self.vertices[tri + 1];
        let p2 = self.vertices[tri + 2];
        base + (p1 - base) * s + (p2 - base) * t
    }

    /// Polygon shrunk inward by `margin` (intersection of offset half-planes).
    /// Returns `None` when nothing of positive area remains.
    pub fn inset(&self, margin: f64) -> Option<Polygon2D> {
        if margin <= 0.0 {
            return Some(self.clone());
        }
        let lines: Vec<(Vec2, Vec2)> = self
            .edges()
            .map(|(a, b)| {
                let e = (b - a).normalize();
                let inward = Vec2::new(-e.y, e.x);
                (a + inward * margin, e)
            })
            .collect();
        let mut pts = Vec::new();
        let n = lines.len();
        for i in 0..n {
            let (p0, d0) = lines[(i + n - 1) % n];
            let (p1, d1) = lines[i];
            let denom = d0.x * d1.y - d0.y * d1.x;
            if denom.abs() < 1e-15 {
                continue;
            }
            let diff = p1 - p0;
            let t = (diff.x * d1.y - diff.y * d1.x) / denom;
            pts.push(p0 + d0 * t);
        }
        // Keep candidates satisfying every offset constraint.
        let kept: Vec<Vec2> = pts
            .into_iter()
            .filter(|p| self.inside_distance(p) >= margin - 1e-9)
            .collect();
        convex_hull_2d(&kept).ok()
    }
}

/// Shoelace area, lamina centroid and Chebyshev-center radius.
pub fn polygon_measures(poly: &Polygon2D) -> PolygonMeasures {
    let n = poly.vertices.len();
    let mut twice_area = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let a = poly.vertices[i];
        let b = poly.vertices[(i + 1) % n];
        let c = a.x * b.y - b.x * a.y;
        twice_area += c;
        cx += (a.x + b.x) * c;
        cy += (a.y + b.y) * c;
    }
    let area = twice_area * 0.5;
    let centroid = Vec2::new(cx / (3.0 * twice_area), cy / (3.0 * twice_area));
    let (incircle_center, incircle_radius) = chebyshev_center(poly);
    PolygonMeasures {
        area,
        centroid,
        incircle_radius,
        incircle_center,
    }
}

/// Exact largest inscribed circle: the LP `max r s.t. n_i.x + r <= b_i` attains
/// its optimum where three edge constraints are active, so every triple of
/// edges is solved and the best feasible one kept.
fn chebyshev_center(poly: &Polygon2D) -> (Vec2, f64) {
    let halfplanes: Vec<(Vec2, f64)> = poly
        .edges()
        .map(|(a, b)| {
            let e = (b - a).normalize();
            // Outward normal for a CCW polygon.
            let n = Vec2::new(e.y, -e.x);
            (n, n.dot(&a))
        })
        .collect();
    let m = halfplanes.len();
    let mut best = (polygon_vertex_mean(poly), 0.0);
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                let rows = [halfplanes[i], halfplanes[j], halfplanes[k]];
                let a = Matrix3::new(
                    rows[0].0.x, rows[0].0.y, 1.0,
                    rows[1].0.x, rows[1].0.y, 1.0,
                    rows[2].0.x, rows[2].0.y, 1.0,
                );
                let rhs = Vector3::new(rows[0].1, rows[1].1, rows[2].1);
                let Some(sol) = a.lu().solve(&rhs) else {
                    continue;
                };
                let (c, r) = (Vec2::new(sol.x, sol.y), sol.z);
                if !r.is_finite() || r <= best.1 {
                    continue;
                }
                let feasible = halfplanes
                    .iter()
                    .all(|(n, b)| n.dot(&c) + r <= b + 1e-12 * (1.0 + b.abs()));
                if feasible {
                    best = (c, r);
                }
            }
        }
    }
    best
}

fn polygon_vertex_mean(poly: &Polygon2D) -> Vec2 {
    poly.vertices.iter().fold(Vec2::zeros(), |acc, v| acc + v) / poly.vertices.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Vec2> {
        vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ]
    }

    #[test]
    fn interior_point_is_dropped() {
        let mut pts = square();
        pts.push(Vec2::new(0.5, 0.5));
        let hull = convex_hull_2d(&pts).unwrap();
        assert_eq!(hull.vertices.len(), 4);
        assert!((polygon_measures(&hull).area - 1.0).abs() < 1e-15);
    }

    #[test]
    fn collinear_boundary_points_are_dropped() {
        let mut pts = square();
        pts.push(Vec2::new(0.5, 0.0));
        pts.push(Vec2::new(1.0, 0.5));
        assert_eq!(convex_hull_2d(&pts).unwrap().vertices.len(), 4);
    }

    #[test]
    fn collinear_input_is_degenerate() {
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(2.0, 2.0)];
        assert!(convex_hull_2d(&pts).is_err());
    }

    #[test]
    fn unit_square_measures() {
        let m = polygon_measures(&convex_hull_2d(&square()).unwrap());
        assert!((m.area - 1.0).abs() < 1e-15);
        assert!((m.centroid - Vec2::new(0.5, 0.5)).norm() < 1e-15);
        assert!((m.incircle_radius - 0.5).abs() < 1e-12);
    }

    #[test]
    fn right_triangle_measures() {
        let tri = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        let m = polygon_measures(&convex_hull_2d(&tri).unwrap());
        assert!((m.area - 0.5).abs() < 1e-15);
        assert!((m.centroid - Vec2::new(1.0 / 3.0, 1.0 / 3.0)).norm() < 1e-15);
        // Inradius of the 1-1-sqrt2 triangle: area / semiperimeter.
        let r = 0.5 / ((2.0 + 2f64.sqrt()) / 2.0);
        assert!((m.incircle_radius - r).abs() < 1e-12);
    }

    #[test]
    fn regular_hexagon_apothem() {
        let pts: Vec<Vec2> = (0..6)
            .map(|k| {
                let a = std::f64::consts::PI / 3.0 * k as f64;
                Vec2::new(a.cos(), a.sin())
            })
            .collect();
        let m = polygon_measures(&convex_hull_2d(&pts).unwrap());
        assert!((m.incircle_radius - 3f64.sqrt() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn inset_square() {
        let sq = convex_hull_2d(&square()).unwrap();
        let inner = sq.inset(0.1).unwrap();
        assert!((polygon_measures(&inner).area - 0.64).abs() < 1e-12);
        assert!(sq.inset(0.6).is_none());
    }

    #[test]
    fn uniform_samples_fall_inside() {
        let sq = convex_hull_2d(&square()).unwrap();
        for (a, b, c) in [(0.0, 0.2, 0.9), (0.7, 0.99, 0.99), (0.99, 0.0, 0.0)] {
            assert!(sq.contains(&sq.sample_uniform(a, b, c), 1e-12));
        }
    }
}
