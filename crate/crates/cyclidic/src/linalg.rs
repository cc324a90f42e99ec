//! Small dense decompositions, carried out in `f64` through nalgebra.

use nalgebra::{DMatrix, DVector};

/// Singular values of a row-major `rows x cols` matrix, descending.
pub fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    if r == 0 || c == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_fn(r, c, |i, j| rows[i][j]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Orthonormal basis of the row space by pivoted Gram-Schmidt. Stops once
/// every remaining residual is below `tol` times the largest row norm.
pub fn row_space(rows: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut res: Vec<Vec<f64>> = rows.to_vec();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let smax = res.iter().map(|r| norm(r)).fold(0.0, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::new();
    if smax == 0.0 {
        return out;
    }
    loop {
        let (k, nk) = res
            .iter()
            .enumerate()
            .map(|(i, r)| (i, norm(r)))
            .fold((0, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        if nk <= tol * smax {
            break;
        }
        let q: Vec<f64> = res[k].iter().map(|x| x / nk).collect();
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for r in res.iter_mut() {
                let d: f64 = r.iter().zip(&q).map(|(a, b)| a * b).sum();
                for (a, b) in r.iter_mut().zip(&q) {
                    *a -= d * b;
                }
            }
        }
        out.push(q);
        if out.len() == rows[0].len() {
            break;
        }
    }
    out
}

/// Orthonormal basis of the null space of a row-major matrix with `cols`
/// columns, as the complement of [`row_space`].
pub fn null_space(rows: &[Vec<f64>], cols: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut basis = row_space(rows, tol);
    let rank = basis.len();
    let mut cand: Vec<Vec<f64>> = (0..cols)
        .map(|i| {
            let mut e = vec![0.0; cols];
            e[i] = 1.0;
            e
        })
        .collect();
    for _ in 0..2 {
        for q in &basis {
            for r in cand.iter_mut() {
                let d: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
                for (a, b) in r.iter_mut().zip(q) {
                    *a -= d * b;
                }
            }
        }
    }
    let extra = row_space(&cand, 1e-8);
    basis.extend(extra.into_iter().take(cols - rank));
    basis.split_off(rank)
}

/// Eigenvalues of a symmetric matrix.
pub fn sym_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    let a = DMatrix::from_fn(n, n, |i, j| 0.5 * (m[i][j] + m[j][i]));
    a.symmetric_eigenvalues().iter().copied().collect()
}

/// Unit vector minimizing `|a v|`, from the eigenvector of `a^T a` with the
/// smallest eigenvalue.
pub fn smallest_singular_vector(rows: &[Vec<f64>]) -> Vec<f64> {
    let c = rows[0].len();
    let ata = DMatrix::from_fn(c, c, |i, j| rows.iter().map(|r| r[i] * r[j]).sum::<f64>());
    let eig = ata.symmetric_eigen();
    let k = eig.eigenvalues.imin();
    eig.eigenvectors.column(k).iter().copied().collect()
}

/// Least-squares solution of `a x = b`.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let r = a.len();
    let c = a.first()?.len();
    let m = DMatrix::from_fn(r, c, |i, j| a[i][j]);
    let rhs = DVector::from_column_slice(b);
    let svd = m.svd(true, true);
    let x = svd.solve(&rhs, 1e-14).ok()?;
    Some(x.iter().copied().collect())
}
