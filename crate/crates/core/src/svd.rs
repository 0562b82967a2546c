//! Singular values by one-sided Jacobi rotations.
//!
//! Used only for Euclidean fibers, where the spectral and nuclear norms are
//! irrational in general. Rotations are applied to the columns of a working
//! copy until every pair of columns is orthogonal to within `1e-12`
//! relative to the column norms.

const TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Singular values of a dense row-major matrix, sorted in decreasing order.
pub fn singular_values(a: &[Vec<f64>]) -> Vec<f64> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    // Work on the wider orientation's transpose so columns <= rows.
    let (m, n, mut b) = if cols <= rows {
        (rows, cols, a.to_vec())
    } else {
        let t = (0..cols)
            .map(|j| (0..rows).map(|i| a[i][j]).collect())
            .collect();
        (cols, rows, t)
    };

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for row in b.iter().take(m) {
                    alpha += row[p] * row[p];
                    beta += row[q] * row[q];
                    gamma += row[p] * row[q];
                }
                if gamma == 0.0 || gamma.abs() <= TOLERANCE * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for row in b.iter_mut().take(m) {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> = (0..n)
        .map(|j| b.iter().map(|row| row[j] * row[j]).sum::<f64>().sqrt())
        .collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

pub fn spectral_norm(a: &[Vec<f64>]) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

pub fn nuclear_norm(a: &[Vec<f64>]) -> f64 {
    singular_values(a).iter().sum()
}
