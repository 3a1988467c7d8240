//! Gauss–Seidel and successive over-relaxation sweeps.

use alloc::vec::Vec;

use num_complex::Complex64;

/// Outcome of the sweep loop, before the residual is evaluated.
pub(crate) struct SweepOutcome {
    pub solution: Vec<Complex64>,
    pub sweeps: usize,
    pub converged: bool,
}

/// Sweeps `f_j <- (1 - w) f_j + w (b_j + sum_{l != j} c_{|l-j|} f_l)` in
/// ascending `j`, starting from `f = b`.
///
/// Stops once the max-norm change between successive iterates drops below
/// `tolerance`, on a non-finite iterate, or after `max_sweeps`.
pub(crate) fn sweep(
    row: &[Complex64],
    rhs: &[Complex64],
    tolerance: f64,
    max_sweeps: usize,
    relaxation: f64,
) -> SweepOutcome {
    let n = rhs.len();
    let mut f = rhs.to_vec();
    for s in 1..=max_sweeps {
        let mut change = 0.0_f64;
        for j in 0..n {
            let mut acc = rhs[j];
            // Left neighbours already hold this sweep's values.
            for (l, fl) in f[..j].iter().enumerate() {
                acc += row[j - l] * fl;
            }
            for (l, fl) in f[j + 1..].iter().enumerate() {
                acc += row[l + 1] * fl;
            }
            let updated = f[j] * (1.0 - relaxation) + acc * relaxation;
            change = change.max((updated - f[j]).norm());
            f[j] = updated;
        }
        if !change.is_finite() {
            return SweepOutcome {
                solution: f,
                sweeps: s,
                converged: false,
            };
        }
        if change < tolerance {
            return SweepOutcome {
                solution: f,
                sweeps: s,
                converged: true,
            };
        }
    }
    SweepOutcome {
        solution: f,
        sweeps: max_sweeps,
        converged: false,
    }
}
