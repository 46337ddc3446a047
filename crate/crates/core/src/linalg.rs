//! Small dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest singular value. Empty matrices have norm zero.
pub fn op_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().cloned().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank: singular values above `tol` times the largest one.
pub fn rank(m: &CMat, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        None => 0,
        Some(&0.0) => 0,
        Some(&top) => s.iter().filter(|&&v| v > tol * top).count(),
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

/// Orthonormal basis (as columns) of the null space of `m`, at relative threshold `tol`.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let cols = m.ncols();
    if cols == 0 {
        return CMat::zeros(0, 0);
    }
    let gram = m.adjoint() * m;
    let (vals, vecs) = hermitian_eigen(&gram);
    let top = vals.first().cloned().unwrap_or(0.0).max(0.0);
    let keep: Vec<usize> = (0..cols).filter(|&i| vals[i] <= tol * tol * top || top == 0.0).collect();
    CMat::from_fn(cols, keep.len(), |r, k| vecs[(r, keep[k])])
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in comparison");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn vec_max_abs_diff(a: &CVec, b: &CVec) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch in comparison");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Kronecker product with the left factor's index varying slowest.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// `v ⊗ I_d` as a `(len(v)·d) × d` matrix: column q is `Σ_p v_p e_{(p,q)}`.
pub fn kron_vec_identity(v: &CVec, d: usize) -> CMat {
    let mut out = CMat::zeros(v.len() * d, d);
    for (p, vp) in v.iter().enumerate() {
        for q in 0..d {
            out[(p * d + q, q)] = *vp;
        }
    }
    out
}

/// Inverse square root of a Hermitian positive definite matrix.
pub fn inv_sqrt_psd(m: &CMat) -> (CMat, CMat) {
    let (vals, vecs) = hermitian_eigen(m);
    let n = vals.len();
    let d_inv = CMat::from_fn(n, n, |i, j| if i == j { c(1.0 / vals[i].sqrt(), 0.0) } else { c(0.0, 0.0) });
    let d = CMat::from_fn(n, n, |i, j| if i == j { c(vals[i].sqrt(), 0.0) } else { c(0.0, 0.0) });
    (&vecs * d_inv * vecs.adjoint(), &vecs * d * vecs.adjoint())
}

pub fn is_identity(m: &CMat, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &CMat::identity(m.nrows(), m.ncols())) <= tol
}
