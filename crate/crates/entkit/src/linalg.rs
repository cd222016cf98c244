//! Dense complex linear algebra helpers: Hermitian eigendecomposition,
//! singular value decomposition, Haar-random unitaries, and orthonormal frame
//! completion.
//!
//! States and operators live in `ndarray` containers elsewhere in the crate;
//! this module is the single boundary where they are converted to `nalgebra`
//! for its pure-Rust decompositions.

use nalgebra::{DMatrix, DVector};
use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{EntKitError, Result};

fn to_nalgebra(a: &Array2<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |r, c| a[[r, c]])
}

fn from_nalgebra(m: &DMatrix<Complex64>) -> Array2<Complex64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(r, c)| m[(r, c)])
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns `(eigenvalues, eigenvectors)` with real eigenvalues sorted
/// descending and the matching eigenvector in each column.
pub fn hermitian_eigen(a: &Array2<Complex64>) -> (Vec<f64>, Array2<Complex64>) {
    let dim = a.nrows();
    let eig = nalgebra::SymmetricEigen::new(to_nalgebra(a));
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = Array2::from_shape_fn((dim, dim), |(r, c)| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Thin singular value decomposition `A = U Σ V†` of a complex matrix.
///
/// Returns `(U, σ, V†)` with the singular values sorted descending and the
/// columns of `U` / rows of `V†` permuted to match.
pub fn svd(a: &Array2<Complex64>) -> (Array2<Complex64>, Vec<f64>, Array2<Complex64>) {
    let svd = nalgebra::SVD::new(to_nalgebra(a), true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u_sorted = Array2::from_shape_fn((u.nrows(), k), |(r, c)| u[(r, order[c])]);
    let vt_sorted = Array2::from_shape_fn((k, v_t.ncols()), |(r, c)| v_t[(order[r], c)]);
    (u_sorted, sigma, vt_sorted)
}

/// Draws a Haar-distributed `dim × dim` unitary.
///
/// Standard complex Gaussian matrix, QR factorization, then the phase of each
/// diagonal entry of `R` is absorbed into the matching column of `Q` so the
/// result is exactly Haar rather than merely unitary.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Array2<Complex64> {
    use rand_distr::StandardNormal;
    let gauss = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = gauss.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    from_nalgebra(&q)
}

/// Checks `U U† = I` within an absolute per-entry tolerance.
pub fn is_unitary(u: &Array2<Complex64>, tol: f64) -> bool {
    if u.nrows() != u.ncols() {
        return false;
    }
    let dim = u.nrows();
    for r in 0..dim {
        for c in 0..dim {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                s += u[[r, k]] * u[[c, k]].conj();
            }
            let expect = if r == c { 1.0 } else { 0.0 };
            if (s - expect).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Completes a unit vector to a full unitary whose first column is that
/// vector.
///
/// The remaining columns come from Gram–Schmidt over the computational basis
/// in index order; basis vectors whose residual after projection has norm
/// below `skip_tol` are skipped as near-parallel to the span already built.
pub fn complete_frame(first: &[Complex64], skip_tol: f64) -> Result<Array2<Complex64>> {
    let dim = first.len();
    let norm: f64 = first.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(EntKitError::Validation(format!(
            "frame seed must be a unit vector, norm was {norm}"
        )));
    }
    let mut columns: Vec<DVector<Complex64>> =
        vec![DVector::from_iterator(dim, first.iter().copied())];
    for k in 0..dim {
        if columns.len() == dim {
            break;
        }
        let mut v = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        v[k] = Complex64::new(1.0, 0.0);
        for col in &columns {
            let overlap = col.dotc(&v);
            v -= col * overlap;
        }
        let res_norm = v.norm();
        if res_norm < skip_tol {
            continue;
        }
        columns.push(v / Complex64::new(res_norm, 0.0));
    }
    if columns.len() != dim {
        return Err(EntKitError::InternalInconsistency(format!(
            "frame completion found {} of {dim} columns",
            columns.len()
        )));
    }
    Ok(Array2::from_shape_fn((dim, dim), |(r, c)| columns[c][r]))
}
