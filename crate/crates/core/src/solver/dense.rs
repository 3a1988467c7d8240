//! Dense LU factorization with partial pivoting.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Pivots smaller than this times the largest matrix entry count as zero.
pub const SINGULAR_RELATIVE_PIVOT: f64 = 1e-14;

/// `PA = LU` stored in place, row-major.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
}

impl LuFactors {
    pub fn factor(mut a: Vec<Complex64>, n: usize) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: a.len(),
            });
        }
        let scale = a
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let threshold = SINGULAR_RELATIVE_PIVOT * scale;
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (p, pivot_abs) =
                (k..n)
                    .map(|r| (r, a[r * n + k].norm()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot_abs < threshold {
                return Err(Error::Singular {
                    row: k + 1,
                    pivot: pivot_abs,
                    threshold,
                });
            }
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
            }
            let pivot = a[k * n + k];
            let (upper, lower) = a.split_at_mut((k + 1) * n);
            let pivot_row = &upper[k * n + k + 1..k * n + n];
            for row in lower.chunks_exact_mut(n) {
                let factor = row[k] / pivot;
                row[k] = factor;
                if factor != Complex64::new(0.0, 0.0) {
                    for (x, u) in row[k + 1..].iter_mut().zip(pivot_row) {
                        *x -= factor * u;
                    }
                }
            }
        }
        Ok(LuFactors { n, lu: a, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: Complex64 = row.iter().zip(&x[..i]).map(|(l, y)| l * y).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s: Complex64 = row.iter().zip(&x[i + 1..]).map(|(u, y)| u * y).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn solves_with_pivoting() {
        // Zero leading entry forces a row swap.
        let a = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 1.0),
            Complex64::new(1.0, -1.0),
            Complex64::new(3.0, 0.0),
        ];
        let x_true = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25)];
        let b: Vec<Complex64> = (0..2)
            .map(|r| a[r * 2] * x_true[0] + a[r * 2 + 1] * x_true[1])
            .collect();
        let lu = LuFactors::factor(a, 2).unwrap();
        let x = lu.solve(&b).unwrap();
        for (g, w) in x.iter().zip(&x_true) {
            assert!((g - w).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_detected() {
        let a = vec![Complex64::new(1.0, 0.0); 4];
        assert!(matches!(
            LuFactors::factor(a, 2),
            Err(Error::Singular { row: 2, .. })
        ));
    }

    #[test]
    fn dimension_checks() {
        assert!(LuFactors::factor(vec![Complex64::new(1.0, 0.0); 3], 2).is_err());
        let lu = LuFactors::factor(vec![Complex64::new(2.0, 0.0)], 1).unwrap();
        assert!(lu.solve(&[]).is_err());
    }
}
