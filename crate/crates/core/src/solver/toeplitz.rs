//! `O(N log N)` product with the symmetric Toeplitz operator `I - C`.
//!
//! The `N x N` Toeplitz matrix is embedded in a circulant of size `M >= 2N - 1`
//! whose first column is `[c_0, c_1, ..., c_{N-1}, 0, ..., 0, c_{N-1}, ..., c_1]`;
//! the circulant product is a cyclic convolution evaluated with FFTs.

use std::sync::Arc;
use std::vec::Vec;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// FFT plan and transformed circulant column, reusable across products.
pub struct ToeplitzOperator {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    spectrum: Vec<Complex64>,
}

impl ToeplitzOperator {
    /// `row[d]` is the coupling at separation `d`; `row[0]` is ignored.
    pub fn new(row: &[Complex64]) -> Self {
        let n = row.len();
        let m = (2 * n).max(2).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        // Column of I - C.
        let mut col = vec![Complex64::new(0.0, 0.0); m];
        if n > 0 {
            col[0] = Complex64::new(1.0, 0.0);
        }
        for d in 1..n {
            col[d] = -row[d];
            col[m - d] = -row[d];
        }
        forward.process(&mut col);
        ToeplitzOperator {
            n,
            forward,
            inverse,
            spectrum: col,
        }
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(f.len(), self.n, "vector length must match the operator");
        let m = self.spectrum.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        buf[..self.n].copy_from_slice(f);
        self.forward.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.inverse.process(&mut buf);
        let norm = 1.0 / m as f64;
        buf.truncate(self.n);
        for b in &mut buf {
            *b *= norm;
        }
        buf
    }
}
