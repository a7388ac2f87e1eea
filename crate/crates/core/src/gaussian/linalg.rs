use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Smallest eigenvalue of the Hermitian matrix S + iA (S symmetric, A
/// antisymmetric), via the real symmetric embedding [[S, −A], [A, S]] whose
/// spectrum is that of S + iA with every eigenvalue doubled.
pub(crate) fn hermitian_min_eigenvalue(s: &DMatrix<f64>, a: &DMatrix<f64>) -> f64 {
    let n = s.nrows();
    let mut big = DMatrix::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(s);
    big.view_mut((n, n), (n, n)).copy_from(s);
    big.view_mut((0, n), (n, n)).copy_from(&(-a));
    big.view_mut((n, 0), (n, n)).copy_from(a);
    symmetrize(&mut big);
    big.symmetric_eigenvalues().min()
}

/// Replaces m by (m + mᵀ)/2 in place.
pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Largest |m_ij − m_ji|.
pub(crate) fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Row-major nested vectors, the matrix exchange layout.
pub(crate) fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

pub(crate) fn from_rows(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::Dimension {
            expected: n,
            got: bad.len(),
            context: format!("row length of square matrix {what}"),
        });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Checks that `m` is 2Z×2Z and entirely finite.
pub(crate) fn check_square(m: &DMatrix<f64>, dim: usize, what: &str) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: if m.nrows() != dim { m.nrows() } else { m.ncols() },
            context: format!("{what} must be {dim}×{dim}"),
        });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidState(format!("{what} has non-finite entries")));
    }
    Ok(())
}
