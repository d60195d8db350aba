//! Small dense helpers over complex matrices: rank-revealing range bases,
//! nullspaces, orthocomplements, Hermitian eigenvalues and a label-preserving
//! modified Gram–Schmidt.
//!
//! Factorizations go through faer; nalgebra's own complex SVD mis-factors
//! even 3×3 projectors (reconstruction error ~1e−1), so it is not used for
//! anything rank-sensitive. nalgebra stays as the matrix carrier type.

use faer::{c64, Mat, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as Cx;

fn to_faer(m: &DMatrix<Cx>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        c64::new(z.re, z.im)
    })
}

struct RankedSvd {
    /// (σ, column index) sorted by descending σ.
    order: Vec<(f64, usize)>,
    u: Mat<c64>,
    v: Mat<c64>,
}

fn ranked_svd(m: &DMatrix<Cx>) -> RankedSvd {
    let svd = to_faer(m).svd().expect("svd did not converge");
    let k = m.nrows().min(m.ncols());
    let mut order: Vec<(f64, usize)> = (0..k).map(|i| (svd.S()[i].re, i)).collect();
    order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    RankedSvd {
        order,
        u: svd.U().to_owned(),
        v: svd.V().to_owned(),
    }
}

fn rank_of(order: &[(f64, usize)], eps_rel: f64) -> usize {
    let smax = order.first().map(|x| x.0).unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    order.iter().filter(|(s, _)| *s > eps_rel * smax).count()
}

/// Orthonormal basis of the range of `m`, singular values below
/// `eps_rel`·σ_max dropped.
pub fn orthonormal_range(m: &DMatrix<Cx>, eps_rel: f64) -> DMatrix<Cx> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = ranked_svd(m);
    let rank = rank_of(&svd.order, eps_rel);
    let mut out = DMatrix::zeros(m.nrows(), rank);
    for (j, &(_, i)) in svd.order[..rank].iter().enumerate() {
        for r in 0..m.nrows() {
            let z = svd.u[(r, i)];
            out[(r, j)] = Cx::new(z.re, z.im);
        }
    }
    out
}

/// Orthonormal basis of the nullspace of `m` (tolerance relative to σ_max).
pub fn orthonormal_nullspace(m: &DMatrix<Cx>, eps_rel: f64) -> DMatrix<Cx> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let svd = ranked_svd(m);
    let rank = rank_of(&svd.order, eps_rel);
    // columns of V paired with the dropped σ, plus any beyond min(m,n)
    let mut cols: Vec<usize> = svd.order[rank..].iter().map(|&(_, i)| i).collect();
    cols.extend(m.nrows().min(n)..n);
    let mut out = DMatrix::zeros(n, cols.len());
    for (j, &i) in cols.iter().enumerate() {
        for r in 0..n {
            let z = svd.v[(r, i)];
            out[(r, j)] = Cx::new(z.re, z.im);
        }
    }
    out
}

/// Orthonormal basis of the orthocomplement of the (orthonormal) columns of
/// `basis` inside ℂ^ambient: the nullspace of basisᴴ.
pub fn orthonormal_complement(basis: &DMatrix<Cx>, ambient: usize) -> DMatrix<Cx> {
    if basis.ncols() == 0 {
        return DMatrix::identity(ambient, ambient);
    }
    assert_eq!(basis.nrows(), ambient);
    orthonormal_nullspace(&basis.adjoint(), 0.5)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigh(m: &DMatrix<Cx>) -> (Vec<f64>, DMatrix<Cx>) {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    if n == 0 {
        return (vec![], DMatrix::zeros(0, 0));
    }
    let eig = to_faer(m)
        .self_adjoint_eigen(Side::Lower)
        .expect("eigendecomposition did not converge");
    let mut order: Vec<(f64, usize)> = (0..n).map(|i| (eig.S()[i].re, i)).collect();
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let u = eig.U();
    let mut vecs = DMatrix::zeros(n, n);
    for (j, &(_, i)) in order.iter().enumerate() {
        for r in 0..n {
            let z = u[(r, i)];
            vecs[(r, j)] = Cx::new(z.re, z.im);
        }
    }
    (order.into_iter().map(|(v, _)| v).collect(), vecs)
}

/// Modified Gram–Schmidt over the given columns, dropping columns whose
/// residual falls below `eps_rel` times the largest input norm. Returns the
/// orthonormal matrix and the indices of the surviving input columns.
pub fn mgs_with_labels(cols: &[DVector<Cx>], eps_rel: f64) -> (DMatrix<Cx>, Vec<usize>) {
    let rows = cols.first().map(|c| c.len()).unwrap_or(0);
    let max_norm = cols.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let mut kept: Vec<DVector<Cx>> = Vec::new();
    let mut labels = Vec::new();
    for (i, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        for q in &kept {
            let proj = q.dotc(&v);
            v -= q * proj;
        }
        // second pass guards against loss of orthogonality
        for q in &kept {
            let proj = q.dotc(&v);
            v -= q * proj;
        }
        let n = v.norm();
        if n > eps_rel * max_norm {
            v /= Cx::new(n, 0.0);
            kept.push(v);
            labels.push(i);
        }
    }
    let mut out = DMatrix::zeros(rows, kept.len());
    for (j, v) in kept.iter().enumerate() {
        out.set_column(j, v);
    }
    (out, labels)
}

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<Cx>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<Cx>) -> Vec<f64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return vec![];
    }
    ranked_svd(m).order.into_iter().map(|(s, _)| s).collect()
}

/// Distance between the column spans of two orthonormal bases
/// (‖P₁ − P₂‖ in operator norm).
pub fn subspace_distance(a: &DMatrix<Cx>, b: &DMatrix<Cx>) -> f64 {
    assert_eq!(a.nrows(), b.nrows());
    let pa = a * a.adjoint();
    let pb = b * b.adjoint();
    operator_norm(&(pa - pb))
}
