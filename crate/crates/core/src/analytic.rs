//! Closed-form amplitude factors.
//!
//! Keeping only the static (Coulomb) coupling to one or two nearest
//! neighbours, the coupled equations are solved with a piecewise-constant
//! ansatz: `T_1` at the chain ends, `T_2` on the next atoms (two-neighbour
//! case only) and `T_0` everywhere else. The infinite chain sums the full
//! `1/d^3` lattice series, which gives `zeta(3)`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::chain::{riemann_zeta3, Warning, COUPLING_VALIDITY_LIMIT};
use crate::error::Error;
use crate::solver::{AmplitudeMethod, AmplitudeProfile, ZMode};
use crate::Result;

/// Distance from a pole inside which equation-mode `T^z` is refused.
pub const POLE_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApproxOrder {
    OneNeighbor,
    TwoNeighbor,
    InfiniteChain,
}

impl ApproxOrder {
    pub fn method(self) -> AmplitudeMethod {
        match self {
            ApproxOrder::OneNeighbor => AmplitudeMethod::OneNeighbor,
            ApproxOrder::TwoNeighbor => AmplitudeMethod::TwoNeighbor,
            ApproxOrder::InfiniteChain => AmplitudeMethod::InfiniteChain,
        }
    }
}

/// Amplitudes of one closed-form approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxAmplitudes {
    /// Interior atoms.
    pub t0: f64,
    /// End atoms; absent for the infinite chain.
    pub t1: Option<f64>,
    /// Second atom from each end; two-neighbour only.
    pub t2: Option<f64>,
    pub order: ApproxOrder,
    pub coupling: f64,
}

impl ApproxAmplitudes {
    /// Outside `C in [0, 0.5]` the formulas are extrapolated.
    pub fn is_extrapolated(&self) -> bool {
        self.coupling > COUPLING_VALIDITY_LIMIT
    }

    pub fn warnings(&self) -> Vec<Warning> {
        if self.is_extrapolated() {
            vec![Warning::Extrapolated {
                coupling: self.coupling,
            }]
        } else {
            Vec::new()
        }
    }

    /// The matching longitudinal amplitudes.
    ///
    /// In [`ZMode::Paper`] every factor is `-2` times the transverse one. In
    /// [`ZMode::Equation`] the same truncated system is solved with the
    /// longitudinal static couplings `+2C/d^3`.
    pub fn longitudinal(&self, z_mode: ZMode) -> Result<ApproxAmplitudes> {
        match z_mode {
            ZMode::Paper => Ok(ApproxAmplitudes {
                t0: -2.0 * self.t0,
                t1: self.t1.map(|t| -2.0 * t),
                t2: self.t2.map(|t| -2.0 * t),
                ..*self
            }),
            ZMode::Equation => {
                let c = self.coupling;
                guard_pole(c, z_pole(self.order))?;
                let (t0, t1, t2) = match self.order {
                    ApproxOrder::OneNeighbor => {
                        let t = truncated_one(2.0 * c);
                        (t.0, Some(t.1), None)
                    }
                    ApproxOrder::TwoNeighbor => {
                        let t = truncated_two(2.0 * c, 0.25 * c)?;
                        (t.0, Some(t.1), Some(t.2))
                    }
                    ApproxOrder::InfiniteChain => {
                        (1.0 / (1.0 - 4.0 * c * riemann_zeta3()), None, None)
                    }
                };
                Ok(ApproxAmplitudes {
                    t0,
                    t1,
                    t2,
                    ..*self
                })
            }
        }
    }

    /// Spreads the amplitudes over a chain of `n_atoms`.
    pub fn profile(&self, n_atoms: usize, z_mode: ZMode) -> Result<AmplitudeProfile> {
        let z = self.longitudinal(z_mode)?;
        let spread = |a: &ApproxAmplitudes| -> Vec<Complex64> {
            (1..=n_atoms)
                .map(|j| {
                    let from_end = j.min(n_atoms + 1 - j);
                    let t = match (from_end, a.t1, a.t2) {
                        (1, Some(t1), _) => t1,
                        (2, _, Some(t2)) => t2,
                        _ => a.t0,
                    };
                    Complex64::new(t, 0.0)
                })
                .collect()
        };
        let tx = spread(self);
        Ok(AmplitudeProfile {
            ty: tx.clone(),
            tx,
            tz: spread(&z),
            method: self.order.method(),
            z_mode,
            reports: Vec::new(),
            warnings: self.warnings(),
        })
    }
}

fn check_coupling(c: f64) -> Result<()> {
    if c >= 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "coupling",
            value: c,
            reason: "must be finite and non-negative",
        })
    }
}

fn guard_pole(c: f64, pole: f64) -> Result<()> {
    if (c - pole).abs() < POLE_GUARD {
        Err(Error::Pole { coupling: c, pole })
    } else {
        Ok(())
    }
}

/// Longitudinal resonance of the equation-mode interior amplitude.
fn z_pole(order: ApproxOrder) -> f64 {
    match order {
        ApproxOrder::OneNeighbor => 0.25,
        ApproxOrder::TwoNeighbor => 1.0 / 4.5,
        ApproxOrder::InfiniteChain => 1.0 / (4.0 * riemann_zeta3()),
    }
}

/// One-neighbour system `f_j = 1 + c1 (f_{j-1} + f_{j+1})`: `(T_0, T_1)`.
fn truncated_one(c1: f64) -> (f64, f64) {
    let t0 = 1.0 / (1.0 - 2.0 * c1);
    (t0, 1.0 + c1 * t0)
}

/// Two-neighbour system with couplings `c1`, `c2`: `(T_0, T_1, T_2)`.
///
/// End atom: `T_1 = 1 + c1 T_2 + c2 T_0`; second atom:
/// `T_2 = 1 + c1 (T_1 + T_0) + c2 T_0`; interior: `T_0 = 1 + 2 (c1 + c2) T_0`.
fn truncated_two(c1: f64, c2: f64) -> Result<(f64, f64, f64)> {
    let t0 = 1.0 / (1.0 - 2.0 * (c1 + c2));
    let det = 1.0 - c1 * c1;
    if det.abs() < POLE_GUARD {
        return Err(Error::Pole {
            coupling: c1,
            pole: 1.0,
        });
    }
    let t2 = (1.0 + c1 + (c1 * c2 + c1 + c2) * t0) / det;
    let t1 = 1.0 + c1 * t2 + c2 * t0;
    Ok((t0, t1, t2))
}

/// One nearest neighbour, static coupling `-C`.
pub fn one_neighbor(c: f64) -> Result<ApproxAmplitudes> {
    check_coupling(c)?;
    Ok(ApproxAmplitudes {
        t0: 1.0 / (1.0 + 2.0 * c),
        t1: Some((1.0 + c) / (1.0 + 2.0 * c)),
        t2: None,
        order: ApproxOrder::OneNeighbor,
        coupling: c,
    })
}

/// Two nearest neighbours, static couplings `-C` and `-C/8`.
pub fn two_neighbor(c: f64) -> Result<ApproxAmplitudes> {
    check_coupling(c)?;
    if (c - 1.0).abs() < POLE_GUARD {
        return Err(Error::Pole {
            coupling: c,
            pole: 1.0,
        });
    }
    let d = (1.0 + 2.25 * c) * (1.0 - c * c);
    Ok(ApproxAmplitudes {
        t0: 1.0 / (1.0 + 2.25 * c),
        t1: Some(1.0 - c * (1.125 + 0.125 * c - 2.0 * c * c) / d),
        t2: Some((1.0 + 0.125 * c - 2.125 * c * c) / d),
        order: ApproxOrder::TwoNeighbor,
        coupling: c,
    })
}

/// Interior amplitude of the infinite chain, `1 / (1 + 2 C zeta(3))`.
pub fn infinite_chain(c: f64) -> Result<ApproxAmplitudes> {
    check_coupling(c)?;
    Ok(ApproxAmplitudes {
        t0: 1.0 / (1.0 + 2.0 * c * riemann_zeta3()),
        t1: None,
        t2: None,
        order: ApproxOrder::InfiniteChain,
        coupling: c,
    })
}

/// Interior longitudinal amplitude.
///
/// [`ZMode::Paper`] returns `-2 t_x`. [`ZMode::Equation`] returns the
/// interior solution of the longitudinal row for the given truncation:
/// `1/(1 - 4C)`, `1/(1 - 4.5C)` or `1/(1 - 4C zeta(3))`.
pub fn z_amplitude(order: ApproxOrder, c: f64, t_x: f64, z_mode: ZMode) -> Result<f64> {
    if !t_x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t_x",
            value: t_x,
            reason: "must be finite",
        });
    }
    match z_mode {
        ZMode::Paper => Ok(-2.0 * t_x),
        ZMode::Equation => {
            check_coupling(c)?;
            guard_pole(c, z_pole(order))?;
            let lattice_sum = match order {
                ApproxOrder::OneNeighbor => 1.0,
                ApproxOrder::TwoNeighbor => 1.125,
                ApproxOrder::InfiniteChain => riemann_zeta3(),
            };
            Ok(1.0 / (1.0 - 4.0 * c * lattice_sum))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r3(x: f64) -> f64 {
        libm::round(x * 1000.0) / 1000.0
    }

    #[test]
    fn uncoupled_limits() {
        for a in [
            one_neighbor(0.0).unwrap(),
            two_neighbor(0.0).unwrap(),
            infinite_chain(0.0).unwrap(),
        ] {
            assert_eq!(a.t0, 1.0);
            assert!(a.t1.is_none_or(|t| t == 1.0));
            assert!(a.t2.is_none_or(|t| t == 1.0));
        }
        assert_eq!(
            z_amplitude(ApproxOrder::InfiniteChain, 0.0, 1.0, ZMode::Equation).unwrap(),
            1.0
        );
    }

    #[test]
    fn one_neighbor_values() {
        let a = one_neighbor(0.1).unwrap();
        assert_eq!((r3(a.t1.unwrap()), r3(a.t0)), (0.917, 0.833));
        let a = one_neighbor(0.5).unwrap();
        assert_eq!((r3(a.t1.unwrap()), r3(a.t0)), (0.75, 0.5));
        assert!(a.t2.is_none());
    }

    #[test]
    fn two_neighbor_values() {
        let a = two_neighbor(0.1).unwrap();
        assert_eq!(
            (r3(a.t1.unwrap()), r3(a.t2.unwrap()), r3(a.t0)),
            (0.908, 0.817, 0.816)
        );
        assert_eq!(r3(two_neighbor(0.3).unwrap().t0), 0.597);
        assert!(matches!(two_neighbor(1.0), Err(Error::Pole { .. })));
        assert!(two_neighbor(0.7).unwrap().is_extrapolated());
    }

    #[test]
    fn printed_formulas_against_truncated_system() {
        for i in 0..=10 {
            let c = 0.05 * f64::from(i);
            let a = two_neighbor(c).unwrap();
            let (t0, t1, t2) = truncated_two(-c, -c / 8.0).unwrap();
            assert!((a.t0 - t0).abs() < 1e-14);
            assert!((a.t2.unwrap() - t2).abs() < 1e-14);
            // The printed end-atom numerator carries -2 C^2 where the
            // elimination gives -2.25 C^2; the printed form is kept.
            let d = (1.0 + 2.25 * c) * (1.0 - c * c);
            assert!((a.t1.unwrap() - t1 + 0.25 * c * c * c / d).abs() < 1e-14);
            let b = one_neighbor(c).unwrap();
            let (s0, s1) = truncated_one(-c);
            assert!((b.t0 - s0).abs() < 1e-14 && (b.t1.unwrap() - s1).abs() < 1e-14);
        }
    }

    #[test]
    fn infinite_chain_values() {
        assert!((infinite_chain(0.1).unwrap().t0 - 0.8062).abs() < 5e-5);
        assert!((infinite_chain(0.5).unwrap().t0 - 0.4541).abs() < 5e-5);
    }

    #[test]
    fn z_amplitudes() {
        let t0 = one_neighbor(0.1).unwrap().t0;
        let z = z_amplitude(ApproxOrder::OneNeighbor, 0.1, t0, ZMode::Paper).unwrap();
        assert!((z + 1.6667).abs() < 1e-4);
        let z = z_amplitude(ApproxOrder::OneNeighbor, 0.1, t0, ZMode::Equation).unwrap();
        assert!((z - 1.0 / 0.6).abs() < 1e-12);
        let pole = 1.0 / (4.0 * riemann_zeta3());
        assert!((pole - 0.20798).abs() < 1e-5);
        assert!(matches!(
            z_amplitude(
                ApproxOrder::InfiniteChain,
                pole + 1e-7,
                1.0,
                ZMode::Equation
            ),
            Err(Error::Pole { .. })
        ));
        // The interior of the truncated solve agrees with z_amplitude.
        let a = two_neighbor(0.1)
            .unwrap()
            .longitudinal(ZMode::Equation)
            .unwrap();
        let z = z_amplitude(ApproxOrder::TwoNeighbor, 0.1, 0.0, ZMode::Equation).unwrap();
        assert!((a.t0 - z).abs() < 1e-14);
        let p = one_neighbor(0.1)
            .unwrap()
            .longitudinal(ZMode::Paper)
            .unwrap();
        assert_eq!(p.t1, Some(-2.0 * one_neighbor(0.1).unwrap().t1.unwrap()));
    }

    #[test]
    fn profile_layout() {
        let a = two_neighbor(0.2).unwrap();
        let p = a.profile(7, ZMode::Paper).unwrap();
        let tx: Vec<f64> = p.tx.iter().map(|t| t.re).collect();
        let (t0, t1, t2) = (a.t0, a.t1.unwrap(), a.t2.unwrap());
        assert_eq!(tx, vec![t1, t2, t0, t0, t0, t2, t1]);
        assert_eq!(p.tx, p.ty);
        assert!(p.tz.iter().zip(&p.tx).all(|(z, x)| *z == *x * -2.0));
        assert!(p.tx.iter().all(|t| t.im == 0.0));
        let inf = infinite_chain(0.2)
            .unwrap()
            .profile(4, ZMode::Paper)
            .unwrap();
        assert!(inf.tx.iter().all(|t| t.re == inf.tx[0].re));
    }
}
