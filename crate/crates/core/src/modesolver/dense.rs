//! Dense eigenvalues of the explicitly assembled round trip. Only meant for
//! small grids, as an independent check on the Fox-Li iteration.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cavity::{CavityConfig, RoundTrip};
use crate::error::{Error, Result};

/// All eigenvalues of a square complex matrix, by complex Schur decomposition.
pub fn dense_eigenvalues(matrix: DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = matrix.nrows();
    let schur = nalgebra::Schur::try_new(matrix, f64::EPSILON, 100 * n.max(10))
        .ok_or_else(|| Error::Numeric("complex Schur decomposition did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Largest-modulus eigenvalue of the round-trip matrix assembled column by column.
pub fn dominant_dense_eigenvalue(config: &CavityConfig) -> Result<Complex64> {
    let m = RoundTrip::new(config)?.to_dense();
    let eig = dense_eigenvalues(m)?;
    eig.into_iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .ok_or_else(|| Error::Numeric("empty matrix".into()))
}
