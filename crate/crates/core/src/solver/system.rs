//! Coupling coefficients and assembly of the per-component scalar systems.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::Component;
use crate::chain::{ChainSpec, ModeSpec};
use crate::error::Error;
use crate::Result;

/// Dipole-dipole coupling between two atoms `d` spacings apart.
///
/// Transverse components (x, y):
/// `C [ (ka0)^2 / d + i ka0 / d^2 - 1 / d^3 ] exp(i ka0 d)`.
/// Longitudinal component (z):
/// `2C [ -i ka0 / d^2 + 1 / d^3 ] exp(i ka0 d)`.
pub fn coupling_coefficient(
    component: Component,
    separation: usize,
    ka0: f64,
    coupling: f64,
) -> Result<Complex64> {
    if separation == 0 {
        return Err(Error::ZeroSeparation);
    }
    let d = separation as f64;
    let phase = Complex64::cis(ka0 * d);
    let bracket = match component {
        Component::X | Component::Y => {
            Complex64::new(ka0 * ka0 / d - 1.0 / (d * d * d), ka0 / (d * d)) * coupling
        }
        Component::Z => Complex64::new(1.0 / (d * d * d), -ka0 / (d * d)) * (2.0 * coupling),
    };
    Ok(bracket * phase)
}

/// Free-field phase factor `E_j = exp(-i ka0 (j - 1) cos(theta))`.
pub fn free_field_factor(j: usize, theta: f64, ka0: f64) -> Complex64 {
    let steps = j.saturating_sub(1) as f64;
    Complex64::cis(-ka0 * steps * libm::cos(theta))
}

/// Coupling table indexed by separation; entry 0 is the (absent) self term.
pub(crate) fn coupling_row(component: Component, chain: &ChainSpec) -> Vec<Complex64> {
    let n = chain.n_atoms();
    let ka0 = chain.ka0();
    let c = chain.coupling();
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for (d, slot) in row.iter_mut().enumerate().skip(1) {
        *slot = coupling_coefficient(component, d, ka0, c).expect("separation is non-zero");
    }
    row
}

/// One of the three decoupled equations `f_j = b_j + sum_{l != j} C_{lj} f_l`.
///
/// The coupling matrix is symmetric Toeplitz, so only one row is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSystem {
    pub component: Component,
    pub rhs: Vec<Complex64>,
    pub coupling_row: Vec<Complex64>,
    pub chain: ChainSpec,
    pub mode: ModeSpec,
}

impl ScalarSystem {
    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    /// Coupling `C_{lj}` between 0-based atoms `l` and `j`.
    #[inline]
    pub fn coupling(&self, l: usize, j: usize) -> Complex64 {
        self.coupling_row[l.abs_diff(j)]
    }

    pub fn is_driven(&self) -> bool {
        self.rhs.iter().any(|b| *b != Complex64::new(0.0, 0.0))
    }

    /// Row-major dense `I - C`.
    pub fn dense_matrix(&self) -> Vec<Complex64> {
        dense_from_row(&self.coupling_row)
    }

    /// `(I - C) f`, evaluated directly in `O(N^2)`.
    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        apply_toeplitz(&self.coupling_row, f)
    }

    /// Max-norm of `(I - C) f - b`; infinite if `f` is not finite.
    pub fn residual(&self, f: &[Complex64]) -> f64 {
        self.apply(f)
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, |acc, r| {
                if r.is_finite() {
                    acc.max(r)
                } else {
                    f64::INFINITY
                }
            })
    }
}

pub(crate) fn dense_from_row(row: &[Complex64]) -> Vec<Complex64> {
    let n = row.len();
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for l in 0..n {
        for j in 0..n {
            m[l * n + j] = if l == j {
                Complex64::new(1.0, 0.0)
            } else {
                -row[l.abs_diff(j)]
            };
        }
    }
    m
}

pub(crate) fn apply_toeplitz(row: &[Complex64], f: &[Complex64]) -> Vec<Complex64> {
    let n = row.len();
    let mut out = f.to_vec();
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (l, fl) in f.iter().enumerate().take(n) {
            if l != j {
                acc += row[l.abs_diff(j)] * fl;
            }
        }
        *o -= acc;
    }
    out
}

/// Builds the scalar system for one Cartesian component of the mode.
///
/// The driving term is `e_lambda[component] * E_j`; at `phi = pi` that is
/// `E_j cos(theta)`, `E_j` and `E_j sin(theta)` for x, y and z, switched on
/// only for the polarization that carries the component.
pub fn assemble(chain: &ChainSpec, mode: &ModeSpec, component: Component) -> ScalarSystem {
    let e = mode.polarization_vector()[component.axis()];
    let ka0 = chain.ka0();
    let rhs = (1..=chain.n_atoms())
        .map(|j| {
            if e == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                free_field_factor(j, mode.theta(), ka0) * e
            }
        })
        .collect();
    ScalarSystem {
        component,
        rhs,
        coupling_row: coupling_row(component, chain),
        chain: *chain,
        mode: *mode,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Polarization;
    use core::f64::consts::PI;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn static_limit_coefficients() {
        let c = 0.3;
        let x1 = coupling_coefficient(Component::X, 1, 0.0, c).unwrap();
        let z1 = coupling_coefficient(Component::Z, 1, 0.0, c).unwrap();
        let x2 = coupling_coefficient(Component::X, 2, 0.0, c).unwrap();
        let z2 = coupling_coefficient(Component::Z, 2, 0.0, c).unwrap();
        assert!(close(x1, Complex64::new(-c, 0.0), 1e-15));
        assert!(close(z1, Complex64::new(2.0 * c, 0.0), 1e-15));
        assert!(close(x2, Complex64::new(-c / 8.0, 0.0), 1e-15));
        assert!(close(z2, Complex64::new(c / 4.0, 0.0), 1e-15));
        assert_eq!(
            coupling_coefficient(Component::Y, 2, 0.0, c).unwrap(),
            coupling_coefficient(Component::X, 2, 0.0, c).unwrap()
        );
    }

    #[test]
    fn retarded_coefficient() {
        let got = coupling_coefficient(Component::Y, 1, 0.01, 0.1).unwrap();
        let want = Complex64::new(0.0001 - 1.0, 0.01) * 0.1 * Complex64::cis(0.01);
        assert!(close(got, want, 1e-15));
    }

    #[test]
    fn zero_separation_rejected() {
        assert_eq!(
            coupling_coefficient(Component::Z, 0, 0.01, 0.1),
            Err(Error::ZeroSeparation)
        );
    }

    #[test]
    fn free_field() {
        assert_eq!(free_field_factor(1, 0.3, 0.5), Complex64::new(1.0, 0.0));
        assert!(close(
            free_field_factor(7, PI / 2.0, 0.5),
            Complex64::new(1.0, 0.0),
            1e-15
        ));
        assert!(close(
            free_field_factor(2, 0.0, 0.01),
            Complex64::cis(-0.01),
            1e-15
        ));
    }

    #[test]
    fn assembly_selects_driven_components() {
        let chain = ChainSpec::new(5, 1.0, 628.0, 0.2).unwrap();
        let perp = ModeSpec::new(PI / 2.0, Polarization::Perpendicular).unwrap();
        let sys = assemble(&chain, &perp, Component::Y);
        assert!(sys
            .rhs
            .iter()
            .all(|b| close(*b, Complex64::new(1.0, 0.0), 1e-15)));
        assert!(!assemble(&chain, &perp, Component::X).is_driven());
        assert!(!assemble(&chain, &perp, Component::Z).is_driven());

        let par = ModeSpec::new(0.4, Polarization::Parallel).unwrap();
        assert!(!assemble(&chain, &par, Component::Y).is_driven());
        let par90 = ModeSpec::new(PI / 2.0, Polarization::Parallel).unwrap();
        let z = assemble(&chain, &par90, Component::Z);
        assert!(z
            .rhs
            .iter()
            .all(|b| close(*b, Complex64::new(1.0, 0.0), 1e-15)));
    }

    #[test]
    fn toeplitz_structure() {
        let chain = ChainSpec::new(7, 1.0, 100.0, 0.4).unwrap();
        let mode = ModeSpec::new(0.3, Polarization::Parallel).unwrap();
        for comp in [Component::X, Component::Z] {
            let sys = assemble(&chain, &mode, comp);
            let m = sys.dense_matrix();
            let n = sys.len();
            for l in 0..n {
                assert_eq!(m[l * n + l], Complex64::new(1.0, 0.0));
                for j in 0..n {
                    assert_eq!(m[l * n + j], m[j * n + l]);
                    if l + 1 < n && j + 1 < n {
                        assert_eq!(m[l * n + j], m[(l + 1) * n + j + 1]);
                    }
                }
            }
        }
    }
}
