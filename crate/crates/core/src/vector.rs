//! Small fixed-size vector helpers.

use num_complex::Complex64;

pub type Vec3 = [f64; 3];
pub type CVec3 = [Complex64; 3];

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: &Vec3) -> f64 {
    libm::sqrt(dot(a, a))
}

/// `u · f` for a real `u` and complex `f` (no conjugation).
#[inline]
pub fn project(u: &Vec3, f: &CVec3) -> Complex64 {
    f[0] * u[0] + f[1] * u[1] + f[2] * u[2]
}

#[inline]
pub fn scale(v: &Vec3, s: f64) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}
