//! Dense complex linear-algebra helpers shared by the Fock-space and
//! key-rate modules.
//!
//! Everything here operates on `ndarray::Array2<Complex64>`; eigenvalue and
//! factorization work is delegated to LAPACK through `ndarray-linalg`.

use ndarray::{Array1, Array2, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

pub fn identity(dim: usize) -> CMat {
    Array2::eye(dim)
}

/// Max-entry deviation from Hermitian symmetry.
pub fn hermiticity_defect(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Replace `m` by its Hermitian part `(m + m†)/2`.
pub fn hermitize(m: &mut CMat) {
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
        let d = m[(i, i)].re;
        m[(i, i)] = Complex64::new(d, 0.0);
    }
}

/// Tr(A B) without forming the product.
pub fn trace_product(a: ArrayView2<Complex64>, b: ArrayView2<Complex64>) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Real part of Tr(A B) for Hermitian A, B (the trace is real).
pub fn trace_product_re(a: ArrayView2<Complex64>, b: ArrayView2<Complex64>) -> f64 {
    trace_product(a, b).re
}

pub fn frobenius_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_entry(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix (ascending eigenvalues).
/// The returned matrix holds eigenvectors in its columns, so
/// `m = V diag(Λ) V†`.
pub fn eigh(m: &CMat) -> Result<(Array1<f64>, CMat)> {
    use ndarray_linalg::{Eigh, UPLO};
    let (vals, vecs) = m
        .eigh(UPLO::Lower)
        .map_err(|e| Error::numerics("eigh", e.to_string()))?;
    // ndarray-linalg hands back the row-major view of LAPACK's column-major
    // eigenvector buffer; conjugating restores the columns-as-eigenvectors
    // convention (checked by `eigh_reconstructs`).
    Ok((vals, vecs.mapv(|z| z.conj())))
}

/// Eigenvalues only; noticeably cheaper than [`eigh`].
pub fn eigvalsh(m: &CMat) -> Result<Array1<f64>> {
    use ndarray_linalg::{EigValsh, UPLO};
    m.eigvalsh(UPLO::Lower)
        .map_err(|e| Error::numerics("eigvalsh", e.to_string()))
}

/// Hermitian PSD square root via eigendecomposition; eigenvalues below
/// `floor` are clamped to zero before the root is taken.
pub fn sqrtm_psd(m: &CMat, floor: f64) -> Result<CMat> {
    let (vals, vecs) = eigh(m)?;
    Ok(apply_spectral(&vals, &vecs, |l| if l > floor { l.sqrt() } else { 0.0 }))
}

/// Assemble `V f(Λ) V†` from an eigendecomposition.
pub fn apply_spectral(vals: &Array1<f64>, vecs: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let dim = vecs.nrows();
    let mut scaled = vecs.clone();
    for (j, col) in scaled.columns_mut().into_iter().enumerate() {
        let fv = Complex64::new(f(vals[j]), 0.0);
        let mut col = col;
        col.mapv_inplace(|z| z * fv);
    }
    let mut out = scaled.dot(&vecs.t().mapv(|z| z.conj()));
    debug_assert_eq!(out.nrows(), dim);
    hermitize(&mut out);
    out
}

/// Kronecker product A ⊗ B.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// View of the (i, j) block of an operator on C^na ⊗ C^nb.
pub fn block<'a>(m: &'a CMat, i: usize, j: usize, nb: usize) -> ArrayView2<'a, Complex64> {
    m.slice(ndarray::s![i * nb..(i + 1) * nb, j * nb..(j + 1) * nb])
}

/// Writes `src` into the (i, j) block of `dst`.
pub fn set_block(dst: &mut CMat, i: usize, j: usize, nb: usize, src: &CMat) {
    dst.slice_mut(ndarray::s![i * nb..(i + 1) * nb, j * nb..(j + 1) * nb])
        .assign(src);
}


#[cfg(test)]
mod eigh_convention {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eigh_reconstructs() {
        let mut m = CMat::zeros((2, 2));
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        m[(1, 1)] = Complex64::new(1.0, 0.0);
        m[(0, 1)] = Complex64::new(0.0, 0.5);
        m[(1, 0)] = Complex64::new(0.0, -0.5);
        let (vals, vecs) = eigh(&m).unwrap();
        let recon = apply_spectral(&vals, &vecs, |l| l);
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(recon[(i, j)].re, m[(i, j)].re, epsilon = 1e-12);
                assert_relative_eq!(recon[(i, j)].im, m[(i, j)].im, epsilon = 1e-12);
            }
        }
    }
}
