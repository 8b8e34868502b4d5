//! Plane vectors and a few sampled-curve helpers shared by every module.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn normalized(self) -> Vec2 {
        self / self.norm()
    }

    pub fn distance(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Anti-clockwise rotation by a right angle, `(x, y) -> (-y, x)`.
    pub fn rotate90(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    /// Clockwise rotation by a right angle, the inverse of [`Vec2::rotate90`].
    pub fn rotate_neg90(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl From<(f64, f64)> for Vec2 {
    fn from((x, y): (f64, f64)) -> Self {
        Vec2::new(x, y)
    }
}

/// Anti-clockwise rotation by a right angle.
pub fn rotate90(v: Vec2) -> Vec2 {
    v.rotate90()
}

/// Second-order finite-difference derivative of uniformly spaced samples.
///
/// Central differences inside, three-point one-sided differences at the ends.
/// Needs at least three samples.
pub fn derivative<T>(values: &[T], h: f64) -> Vec<T>
where
    T: Copy + Sub<Output = T> + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = values.len();
    assert!(n >= 3, "finite differences need at least three samples");
    let mut out = Vec::with_capacity(n);
    let inv = 1.0 / (2.0 * h);
    out.push((values[1] * 4.0 - values[0] * 3.0 - values[2]) * inv);
    for i in 1..n - 1 {
        out.push((values[i + 1] - values[i - 1]) * inv);
    }
    out.push((values[n - 1] * 3.0 - values[n - 2] * 4.0 + values[n - 3]) * inv);
    out
}

/// Fourth-order finite-difference derivative of uniformly spaced samples.
///
/// Five-point central differences inside, five-point one-sided differences
/// near the ends. Needs at least five samples.
pub fn derivative4<T>(values: &[T], h: f64) -> Vec<T>
where
    T: Copy + Sub<Output = T> + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = values.len();
    assert!(n >= 5, "fourth-order differences need at least five samples");
    let v = values;
    let inv = 1.0 / (12.0 * h);
    let forward = |i: usize| {
        (v[i] * -25.0 + v[i + 1] * 48.0 - v[i + 2] * 36.0 + v[i + 3] * 16.0 - v[i + 4] * 3.0) * inv
    };
    let backward = |i: usize| {
        (v[i] * 25.0 - v[i - 1] * 48.0 + v[i - 2] * 36.0 - v[i - 3] * 16.0 + v[i - 4] * 3.0) * inv
    };
    let skewed_forward = |i: usize| {
        (v[i - 1] * -3.0 - v[i] * 10.0 + v[i + 1] * 18.0 - v[i + 2] * 6.0 + v[i + 3]) * inv
    };
    let skewed_backward = |i: usize| {
        (v[i + 1] * 3.0 + v[i] * 10.0 - v[i - 1] * 18.0 + v[i - 2] * 6.0 - v[i - 3]) * inv
    };
    (0..n)
        .map(|i| match i {
            0 => forward(0),
            1 => skewed_forward(1),
            _ if i == n - 1 => backward(i),
            _ if i == n - 2 => skewed_backward(i),
            _ => (v[i - 2] - v[i - 1] * 8.0 + v[i + 1] * 8.0 - v[i + 2]) * inv,
        })
        .collect()
}

/// Centroid and the largest distance of any point from it.
pub fn centroid_spread(points: &[Vec2]) -> (Vec2, f64) {
    let n = points.len().max(1) as f64;
    let c = points.iter().fold(Vec2::ZERO, |acc, &p| acc + p) / n;
    let spread = points.iter().map(|&p| p.distance(c)).fold(0.0, f64::max);
    (c, spread)
}

/// A curve is treated as constant when every sample lies within
/// `1e-8 * (1 + |centroid|)` of the centroid.
pub fn is_constant_curve(points: &[Vec2]) -> Option<Vec2> {
    let (c, spread) = centroid_spread(points);
    (spread < 1e-8 * (1.0 + c.norm())).then_some(c)
}
