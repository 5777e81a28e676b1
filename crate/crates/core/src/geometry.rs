//! Points, balls and uniform sampling in three dimensions.

use std::f64::consts::PI;
use std::ops::{Add, Sub};

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn scale(self, k: f64) -> Self {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

/// Euclidean distance.
pub fn distance(a: Point3, b: Point3) -> f64 {
    (a - b).norm()
}

/// Closed ball in R³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Point3,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point3, radius: f64) -> Self {
        debug_assert!(radius >= 0.0, "ball radius must be nonnegative");
        Ball { center, radius }
    }

    pub fn centered(radius: f64) -> Self {
        Ball::new(Point3::ORIGIN, radius)
    }

    pub fn volume(&self) -> f64 {
        volume(self)
    }

    /// Boundary points count as inside.
    pub fn contains(&self, p: Point3) -> bool {
        (p - self.center).norm_squared() <= self.radius * self.radius
    }
}

pub fn volume(ball: &Ball) -> f64 {
    4.0 / 3.0 * PI * ball.radius.powi(3)
}

/// Uniform point in `ball`: radius by inverse CDF `R u^(1/3)`, direction
/// uniform on the sphere via (cos θ, φ) uniform.
pub fn sample_uniform_ball<R: Rng + ?Sized>(rng: &mut R, ball: &Ball) -> Point3 {
    if ball.radius == 0.0 {
        return ball.center;
    }
    let r = ball.radius * rng.random::<f64>().cbrt();
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    let phi = rng.random_range(0.0..2.0 * PI);
    let offset = Point3::new(sin_theta * phi.cos(), sin_theta * phi.sin(), cos_theta).scale(r);
    let p = ball.center + offset;
    // rounding can push |offset| a hair past the radius
    if ball.contains(p) {
        p
    } else {
        ball.center + offset.scale(ball.radius / offset.norm())
    }
}
