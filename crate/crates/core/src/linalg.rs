//! Thin wrappers over nalgebra's complex SVD and Hermitian eigensolver.

use alloc::vec::Vec;

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// Smallest eigenvalue of the Hermitian part of a row-major `n × n` matrix.
pub fn hermitian_min_eigenvalue(n: usize, entries: &[C64]) -> f64 {
    assert_eq!(entries.len(), n * n);
    let a = DMatrix::from_row_slice(n, n, entries);
    let h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(h)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Right singular vector of the smallest singular value.
#[derive(Debug, Clone)]
pub struct NullVector {
    pub vector: Vec<C64>,
    /// Singular values in descending order.
    pub singular_values: Vec<f64>,
}

/// Unit vector minimising `‖A x‖` for a row-major `rows × cols` matrix.
pub fn null_vector(rows: usize, cols: usize, entries: &[C64]) -> Result<NullVector> {
    assert_eq!(entries.len(), rows * cols);
    if rows < cols || cols == 0 {
        return Err(Error::RankDeficient);
    }
    let a = DMatrix::from_row_slice(rows, cols, entries);
    let svd = a.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::RankDeficient)?;
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    if sv.iter().any(|s| !s.is_finite()) {
        return Err(Error::RankDeficient);
    }
    let (min_idx, _) = sv
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(Error::RankDeficient)?;
    let vector = v_t.row(min_idx).iter().map(|c| c.conj()).collect();
    let mut singular_values = sv;
    singular_values.sort_by(|a, b| b.total_cmp(a));
    Ok(NullVector {
        vector,
        singular_values,
    })
}
