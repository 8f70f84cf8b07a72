use std::ops::{Deref, DerefMut};

/// Joint-space vector. Free-flyer layout is (x, y, z, roll, pitch, yaw).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Configuration(Vec<f64>);

impl Configuration {
    pub fn new(values: Vec<f64>) -> Self {
        Configuration(values)
    }

    pub fn zeros(dof: usize) -> Self {
        Configuration(vec![0.0; dof])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn distance(&self, other: &Configuration) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn distance_squared(&self, other: &Configuration) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// Straight-line interpolation; `t = 0` is `self`, `t = 1` is `other`.
    pub fn lerp(&self, other: &Configuration, t: f64) -> Configuration {
        Configuration(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + (b - a) * t)
                .collect(),
        )
    }

    /// Point at most `step` away from `self` on the way to `target`.
    pub fn step_toward(&self, target: &Configuration, step: f64) -> Configuration {
        let d = self.distance(target);
        if d <= step {
            target.clone()
        } else {
            self.lerp(target, step / d)
        }
    }

    /// Lexicographic order by `total_cmp`, used to canonicalize segments.
    pub fn lex_cmp(&self, other: &Configuration) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            let o = a.total_cmp(b);
            if o.is_ne() {
                return o;
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl Deref for Configuration {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Configuration {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for Configuration {
    fn from(v: Vec<f64>) -> Self {
        Configuration(v)
    }
}
