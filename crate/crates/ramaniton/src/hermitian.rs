//! Hermitian eigendecomposition with a layout guard.
//!
//! LAPACK's `zheev` reads a column-major buffer. Handing it the data of a
//! row-major complex array makes it diagonalize the transpose, which for a
//! Hermitian matrix is the elementwise conjugate: the eigenvalues come back
//! right, the eigenvectors come back conjugated. The backend in use does not
//! compensate, so every complex Hermitian solve in this crate goes through
//! [`eigh`] below, which normalizes the input to standard layout and
//! conjugates the returned vectors. See the Pauli-Y regression test for the
//! observable failure mode.
//!
//! Real symmetric matrices are immune (conjugation is the identity), but
//! routing them through here costs nothing and keeps one code path.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

use crate::Error;

type C64 = Complex64;

/// Eigendecomposition of a complex Hermitian matrix.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvalues ascending and the
/// k-th eigenvector in column k, satisfying `a · v_k = λ_k · v_k` for the
/// matrix as indexed (not its transpose).
pub(crate) fn eigh(a: &Array2<C64>) -> Result<(Array1<f64>, Array2<C64>), Error> {
    // Force a known layout so the conjugation below is always the right
    // correction, no matter how the caller's array is strided.
    let standard = if a.is_standard_layout() {
        a.to_owned()
    } else {
        Array2::from_shape_vec(a.dim(), a.iter().copied().collect())
            .expect("dimensions preserved")
    };
    let (vals, vecs) = standard.eigh(UPLO::Lower).map_err(Error::from)?;
    Ok((vals, vecs.mapv(|z| z.conj())))
}
