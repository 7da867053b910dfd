//! Unit quaternions as SU(2) elements, and first-order jets of them.

use serde::{Deserialize, Serialize};
use std::ops::Mul;

/// A quaternion `w + x·i + y·j + z·k`.  Unit quaternions are the elements of
/// SU(2); the matrix trace is `2w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quat {
    /// Real part.
    pub w: f64,
    /// `i` component.
    pub x: f64,
    /// `j` component.
    pub y: f64,
    /// `k` component.
    pub z: f64,
}

impl Quat {
    /// The identity.
    pub const ONE: Quat = Quat { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Builds a quaternion from its components.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat { w, x, y, z }
    }

    /// `exp(θ·u) = cos θ + sin θ·u` for a unit vector `u` (normalized here).
    pub fn exp(theta: f64, axis: [f64; 3]) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let (s, c) = theta.sin_cos();
        Quat::new(c, s * axis[0] / n, s * axis[1] / n, s * axis[2] / n)
    }

    /// Conjugate (the inverse of a unit quaternion).
    pub fn conj(self) -> Self {
        Quat::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Euclidean norm.
    pub fn norm(self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Matrix trace `2w` of the SU(2) element.
    pub fn trace(self) -> f64 {
        2.0 * self.w
    }

    /// The unit vector part (rotation axis).
    pub fn axis(self) -> [f64; 3] {
        let n = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        [self.x / n, self.y / n, self.z / n]
    }

    /// Distance to another quaternion.
    pub fn dist(self, other: Quat) -> f64 {
        Quat::new(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z).norm()
    }

    /// `g·self·g⁻¹` for a unit `g`.
    pub fn conjugated_by(self, g: Quat) -> Quat {
        g * self * g.conj()
    }

    /// Integer power (negative powers use the inverse).
    pub fn powi(self, k: i64) -> Quat {
        let base = if k < 0 { self.conj() } else { self };
        (0..k.unsigned_abs()).fold(Quat::ONE, |acc, _| acc * base)
    }

    /// Components as an array `[w, x, y, z]`.
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, q: Quat) -> Quat {
        let p = self;
        Quat::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl std::ops::Add for Quat {
    type Output = Quat;
    fn add(self, q: Quat) -> Quat {
        Quat::new(self.w + q.w, self.x + q.x, self.y + q.y, self.z + q.z)
    }
}

/// A unit `g` with `g·x·g⁻¹ = y` for unit quaternions of equal trace: the
/// rotation by the angle between their axes about the common normal.
pub fn conjugator(x: Quat, y: Quat) -> Quat {
    let (ax, ay) = (x.axis(), y.axis());
    let c = ax[0] * ay[0] + ax[1] * ay[1] + ax[2] * ay[2];
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    if c > 1.0 - 1e-14 {
        return Quat::ONE;
    }
    if c < -1.0 + 1e-14 {
        let perp = if ax[0].abs() < 0.9 {
            cross(ax, [1.0, 0.0, 0.0])
        } else {
            cross(ax, [0.0, 1.0, 0.0])
        };
        return Quat::exp(std::f64::consts::FRAC_PI_2, perp);
    }
    let n = cross(ax, ay);
    Quat::exp(c.clamp(-1.0, 1.0).acos() / 2.0, n)
}

/// Arithmetic shared by plain quaternions and their first-order jets, so that
/// representations can be built once and differentiated exactly in an angle.
pub trait QAlg: Copy + Mul<Output = Self> {
    /// A θ-independent element.
    fn constant(q: Quat) -> Self;
    /// The twist factor `exp(θ·u)`; its derivative is tracked when `seeded`.
    fn twist(theta: f64, axis: [f64; 3], seeded: bool) -> Self;
    /// Inverse of a unit element.
    fn inv(self) -> Self;
    /// Underlying value.
    fn value(self) -> Quat;
}

impl QAlg for Quat {
    fn constant(q: Quat) -> Self {
        q
    }
    fn twist(theta: f64, axis: [f64; 3], _seeded: bool) -> Self {
        Quat::exp(theta, axis)
    }
    fn inv(self) -> Self {
        self.conj()
    }
    fn value(self) -> Quat {
        self
    }
}

/// A quaternion together with its derivative in one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    /// Value.
    pub v: Quat,
    /// Derivative.
    pub d: Quat,
}

const ZERO: Quat = Quat { w: 0.0, x: 0.0, y: 0.0, z: 0.0 };

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d: self.d * o.v + self.v * o.d,
        }
    }
}

impl QAlg for Jet {
    fn constant(q: Quat) -> Self {
        Jet { v: q, d: ZERO }
    }
    fn twist(theta: f64, axis: [f64; 3], seeded: bool) -> Self {
        let v = Quat::exp(theta, axis);
        let d = if seeded {
            Quat::new(0.0, axis[0], axis[1], axis[2]) * v
        } else {
            ZERO
        };
        Jet { v, d }
    }
    fn inv(self) -> Self {
        let vi = self.v.conj();
        let nd = vi * self.d * vi;
        Jet {
            v: vi,
            d: Quat::new(-nd.w, -nd.x, -nd.y, -nd.z),
        }
    }
    fn value(self) -> Quat {
        self.v
    }
}
