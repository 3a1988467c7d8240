//! Quadrature over the unit sphere.
//!
//! Gauss–Legendre in `cos(theta)` times the periodic trapezoid rule in
//! `phi`; the latter is exact for trigonometric polynomials of degree below
//! the number of azimuthal nodes.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::Error;
use crate::Result;

pub const DEFAULT_POLAR_NODES: usize = 32;
pub const DEFAULT_AZIMUTH_NODES: usize = 64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// ascending.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "nodes",
            value: 0.0,
            reason: "need at least one node",
        });
    }
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess for the i-th largest root.
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let prev = if n == 0 { 0.0 } else { p0 };
    let d = n as f64 * (x * p - prev) / (x * x - 1.0);
    (p, d)
}

/// Product rule on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    /// `(cos(theta), weight)` pairs.
    polar: Vec<(f64, f64)>,
    azimuth_nodes: usize,
}

impl SphereGrid {
    pub fn new(polar_nodes: usize, azimuth_nodes: usize) -> Result<Self> {
        if azimuth_nodes == 0 {
            return Err(Error::InvalidParameter {
                name: "azimuth_nodes",
                value: 0.0,
                reason: "need at least one node",
            });
        }
        let (x, w) = gauss_legendre(polar_nodes)?;
        Ok(SphereGrid {
            polar: x.into_iter().zip(w).collect(),
            azimuth_nodes,
        })
    }

    pub fn polar_nodes(&self) -> usize {
        self.polar.len()
    }

    pub fn azimuth_nodes(&self) -> usize {
        self.azimuth_nodes
    }

    /// Polar angles `theta_i = acos(mu_i)` of the Gauss nodes, ascending in `mu`.
    pub fn polar_angles(&self) -> impl Iterator<Item = f64> + '_ {
        self.polar.iter().map(|&(mu, _)| libm::acos(mu))
    }

    pub fn polar_weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.polar.iter().map(|&(_, w)| w)
    }

    pub fn azimuths(&self) -> impl Iterator<Item = f64> + '_ {
        let step = 2.0 * PI / self.azimuth_nodes as f64;
        (0..self.azimuth_nodes).map(move |k| step * k as f64)
    }

    /// `integral f(theta, phi) dOmega`, summed in a fixed node order.
    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let step = 2.0 * PI / self.azimuth_nodes as f64;
        let mut total = 0.0;
        for &(mu, w) in &self.polar {
            let theta = libm::acos(mu);
            let ring: f64 = self.azimuths().map(|phi| f(theta, phi)).sum();
            total += w * ring * step;
        }
        total
    }
}

impl Default for SphereGrid {
    fn default() -> Self {
        SphereGrid::new(DEFAULT_POLAR_NODES, DEFAULT_AZIMUTH_NODES).expect("default grid is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules() {
        let (x, w) = gauss_legendre(3).unwrap();
        let r = libm::sqrt(0.6);
        assert!((x[0] + r).abs() < 1e-15 && x[1] == 0.0 && (x[2] - r).abs() < 1e-15);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-15 && (w[1] - 8.0 / 9.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(1).unwrap();
        assert_eq!((x[0], w[0]), (0.0, 2.0));
        assert!(gauss_legendre(0).is_err());
    }

    #[test]
    fn exact_for_polynomials() {
        let n = 32;
        let (x, w) = gauss_legendre(n).unwrap();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for p in 0..(2 * n) as i32 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            let want = if p % 2 == 1 {
                0.0
            } else {
                2.0 / (p as f64 + 1.0)
            };
            assert!((got - want).abs() < 1e-13, "p={p}");
        }
    }

    #[test]
    fn sphere_area_and_moments() {
        let g = SphereGrid::default();
        assert!((g.integrate(|_, _| 1.0) - 4.0 * PI).abs() < 1e-12);
        // integral of sin^2(theta) cos^2(phi) = 4 pi / 3
        let m = g.integrate(|t, p| (libm::sin(t) * libm::cos(p)).powi(2));
        assert!((m - 4.0 * PI / 3.0).abs() < 1e-12);
    }
}
