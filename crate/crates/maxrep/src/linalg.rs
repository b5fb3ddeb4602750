//! Small dense linear-algebra helpers shared by the geometric modules.

use nalgebra::{DMatrix, DVector};

/// The standard symplectic form `Ω = [[0, I], [-I, 0]]` on `R²ⁿ`.
pub fn omega(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, n + i)] = 1.0;
        m[(n + i, i)] = -1.0;
    }
    m
}

/// Maximum absolute row sum.
pub fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Singular values sorted in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// `true` when the columns of `b` have full rank relative to `tol`.
pub fn has_full_column_rank(b: &DMatrix<f64>, tol: f64) -> bool {
    if b.ncols() == 0 {
        return true;
    }
    if b.ncols() > b.nrows() {
        return false;
    }
    let s = singular_values(b);
    let smax = s[0];
    smax > 0.0 && s[b.ncols() - 1] >= tol * smax
}

/// Orthonormal basis of the column span of a full-rank `b` (thin QR).
pub fn orthonormalize(b: &DMatrix<f64>) -> DMatrix<f64> {
    if b.ncols() == 0 {
        return DMatrix::zeros(b.nrows(), 0);
    }
    let q = b.clone().qr().q();
    q.columns(0, b.ncols()).into_owned()
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `q`.
pub fn orthogonal_complement(q: &DMatrix<f64>) -> DMatrix<f64> {
    let d = q.nrows();
    let k = q.ncols();
    if k == 0 {
        return DMatrix::identity(d, d);
    }
    if k == d {
        return DMatrix::zeros(d, 0);
    }
    let proj = DMatrix::identity(d, d) - q * q.transpose();
    let eig = proj.symmetric_eigen();
    let mut idx: Vec<usize> = (0..d).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let keep: Vec<usize> = idx.into_iter().filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    let mut out = DMatrix::zeros(d, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &eig.eigenvectors.column(i));
    }
    orthonormalize(&out)
}

/// Sine of the largest principal angle by which span(a) leaves span(b);
/// zero exactly when span(a) ⊂ span(b). Both inputs need full column rank.
pub fn subspace_excess(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let qa = orthonormalize(a);
    let qb = orthonormalize(b);
    let r = &qa - &qb * (qb.transpose() * &qa);
    spectral_norm(&r)
}

/// Symmetric distance between subspaces of equal dimension.
pub fn subspace_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    subspace_excess(a, b).max(subspace_excess(b, a))
}

/// Horizontal concatenation `[a | b]`.
pub fn hstack(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    assert_eq!(a.nrows(), b.nrows());
    let mut m = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.columns_mut(0, a.ncols()).copy_from(a);
    m.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    m
}

/// Vertical concatenation.
pub fn vstack(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    assert_eq!(a.ncols(), b.ncols());
    let mut m = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols());
    m.rows_mut(0, a.nrows()).copy_from(a);
    m.rows_mut(a.nrows(), b.nrows()).copy_from(b);
    m
}

/// Determinant of a small square matrix stored row-major in `a`
/// (destroyed), via Gaussian elimination with partial pivoting.
pub fn det_in_place(a: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..k {
        let mut piv = col;
        let mut best = a[col * k + col].abs();
        for r in col + 1..k {
            let v = a[r * k + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..k {
                a.swap(col * k + c, piv * k + c);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det *= p;
        for r in col + 1..k {
            let f = a[r * k + col] / p;
            if f != 0.0 {
                for c in col + 1..k {
                    a[r * k + c] -= f * a[col * k + c];
                }
            }
        }
    }
    det
}

/// Symmetrised copy `(m + mᵀ)/2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Relative asymmetry `‖m − mᵀ‖_max / max(1, ‖m‖_max)`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    max_abs(&(m - m.transpose())) / max_abs(m).max(1.0)
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = symmetrize(m).symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(|a, b| a.total_cmp(b));
    e
}

/// Frobenius norm `√tr(mᵀm)`.
pub fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

/// Unit vector along `v` with its first entry of magnitude above `tol·‖v‖`
/// made positive.
pub fn normalize_projective(v: &DVector<f64>, tol: f64) -> Option<DVector<f64>> {
    let n = v.norm();
    if !(n > 0.0) || !n.is_finite() {
        return None;
    }
    let mut u = v / n;
    if let Some(first) = u.iter().find(|x| x.abs() > tol) {
        if *first < 0.0 {
            u = -u;
        }
    }
    Some(u)
}
