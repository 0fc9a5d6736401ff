//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

/// Basis of the kernel of `a`, one column per free variable, found by
/// Gauss-Jordan elimination with partial pivoting.
///
/// Pivots smaller than `rel_tol * max|a|` are treated as zero.
pub fn nullspace(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let (rows, cols) = a.shape();
    let mut m = a.clone();
    let scale = max_abs(a).max(f64::MIN_POSITIVE);
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (best, val) = (r..rows)
            .map(|i| (i, m[(i, c)].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= rel_tol * scale {
            continue;
        }
        m.swap_rows(r, best);
        let piv = m[(r, c)];
        for j in 0..cols {
            m[(r, j)] /= piv;
        }
        for i in 0..rows {
            if i != r {
                let factor = m[(i, c)];
                if factor != 0.0 {
                    for j in 0..cols {
                        m[(i, j)] -= factor * m[(r, j)];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = DMatrix::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[(f, k)] = 1.0;
        for (row, &pc) in pivots.iter().enumerate() {
            basis[(pc, k)] = -m[(row, f)];
        }
    }
    basis
}

/// Numerical rank by the same elimination as [`nullspace`].
pub fn rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    a.ncols() - nullspace(a, rel_tol).ncols()
}

/// Euclidean modified Gram-Schmidt on the columns of `a`.
pub fn orthonormalize_columns(a: &DMatrix<f64>) -> DMatrix<f64> {
    let mut q = a.clone();
    for k in 0..q.ncols() {
        for j in 0..k {
            let proj = q.column(j).dot(&q.column(k));
            let qj = q.column(j).clone_owned();
            q.column_mut(k).axpy(-proj, &qj, 1.0);
        }
        let norm = q.column(k).norm();
        if norm > 0.0 {
            q.column_mut(k).unscale_mut(norm);
        }
    }
    q
}

pub fn solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    a.clone().lu().solve(b)
}

pub fn solve_matrix(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    a.clone().lu().solve(b)
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_vec(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// `|det(gram)| / prod_i |c_i|^2` for the Gram matrix of columns `c_i`
/// under some bilinear form; 1 for orthonormal columns, 0 when degenerate.
pub fn normalized_gram_det(gram: &DMatrix<f64>, columns: &DMatrix<f64>) -> f64 {
    if gram.nrows() == 0 {
        return 1.0;
    }
    let denom: f64 = columns.column_iter().map(|c| c.norm_squared()).product();
    if denom == 0.0 {
        return 0.0;
    }
    gram.determinant().abs() / denom
}

/// Numbers of positive and negative eigenvalues of a symmetric matrix,
/// ignoring eigenvalues with magnitude at most `threshold`.
pub fn signature(sym: &DMatrix<f64>, threshold: f64) -> (usize, usize) {
    let s = (sym + sym.transpose()) * 0.5;
    let eig = s.symmetric_eigenvalues();
    let pos = eig.iter().filter(|&&e| e > threshold).count();
    let neg = eig.iter().filter(|&&e| e < -threshold).count();
    (pos, neg)
}
