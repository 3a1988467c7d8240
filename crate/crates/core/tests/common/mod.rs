//! Independent reference solutions shared by the integration tests.
#![allow(dead_code)]

use dipchain_core::Complex64;

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `I - C` written straight from the coupling formulas.
pub fn oracle_matrix(n: usize, ka0: f64, c: f64, longitudinal: bool) -> Vec<Vec<Complex64>> {
    let i = Complex64::i();
    (0..n)
        .map(|l| {
            (0..n)
                .map(|j| {
                    if l == j {
                        return Complex64::new(1.0, 0.0);
                    }
                    let d = (l as f64 - j as f64).abs();
                    let phase = (i * ka0 * d).exp();
                    let cij = if longitudinal {
                        2.0 * c * (-i * ka0 / (d * d) + 1.0 / (d * d * d)) * phase
                    } else {
                        c * (ka0 * ka0 / d + i * ka0 / (d * d) - 1.0 / (d * d * d)) * phase
                    };
                    -cij
                })
                .collect()
        })
        .collect()
}

pub fn laplace_det(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut det = Complex64::new(0.0, 0.0);
    for col in 0..n {
        let minor: Vec<Vec<Complex64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != col)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += m[0][col] * laplace_det(&minor) * sign;
    }
    det
}

pub fn cramer(m: &[Vec<Complex64>], b: &[Complex64]) -> Vec<Complex64> {
    let det = laplace_det(m);
    (0..b.len())
        .map(|col| {
            let replaced: Vec<Vec<Complex64>> = m
                .iter()
                .zip(b)
                .map(|(row, bi)| {
                    let mut r = row.clone();
                    r[col] = *bi;
                    r
                })
                .collect();
            laplace_det(&replaced) / det
        })
        .collect()
}
