//! Gaussian elimination with row scaling and partial pivoting.

use super::NumericsError;

/// Largest system [`solve_dense`] accepts.
pub const MAX_DIM: usize = 16;
/// Pivots below this magnitude (after row scaling) mean a singular matrix.
pub const PIVOT_FLOOR: f64 = 1e-30;

/// Solves `a x = b`. `a` is given as rows.
pub fn solve_dense(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>, NumericsError> {
    let n = b.len();
    if n == 0 || n > MAX_DIM {
        return Err(NumericsError::DimensionMismatch(format!("size {n} outside 1..={MAX_DIM}")));
    }
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(NumericsError::DimensionMismatch("matrix is not square or not conformable".into()));
    }
    if a.iter().flatten().chain(b).any(|x| !x.is_finite()) {
        return Err(NumericsError::NonFinite);
    }

    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    // scale rows to unit max-norm so the pivot floor is meaningful
    for (row, r) in m.iter_mut().zip(rhs.iter_mut()) {
        let s = row.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if s == 0.0 {
            return Err(NumericsError::SingularMatrix);
        }
        row.iter_mut().for_each(|x| *x /= s);
        *r /= s;
    }

    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col].abs() < PIVOT_FLOOR {
            return Err(NumericsError::SingularMatrix);
        }
        m.swap(piv, col);
        rhs.swap(piv, col);
        for i in (col + 1)..n {
            let f = m[i][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m[i][j] -= f * m[col][j];
            }
            rhs[i] -= f * rhs[col];
        }
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (rhs[i] - s) / m[i][i];
    }
    Ok(x)
}

/// `a x` for a row-major matrix.
pub fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}
