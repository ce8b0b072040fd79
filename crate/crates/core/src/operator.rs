//! Dense complex operators on `(C^d)^{⊗N}`.
//!
//! Rows and columns are indexed by [`crate::combinatorics::tuple_to_index`]:
//! basis vector `|i_1 ... i_N⟩` sits at `sum_r i_r d^(N-r)`.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest `d^N` for which dense operators are built by default.
pub const DEFAULT_DENSE_CAP: usize = 4096;
/// Environment variable overriding [`DEFAULT_DENSE_CAP`].
pub const DENSE_CAP_ENV: &str = "DSYM_DENSE_CAP";

/// Current dense cap, honouring `DSYM_DENSE_CAP` when it parses.
pub fn dense_cap() -> usize {
    std::env::var(DENSE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(DEFAULT_DENSE_CAP)
}

/// `d^N`, rejected when above the dense cap.
pub fn dense_dim(parties: usize, local_dim: usize) -> Result<usize> {
    let cap = dense_cap();
    let dim = (local_dim as u128)
        .checked_pow(parties as u32)
        .unwrap_or(u128::MAX);
    if dim > cap as u128 {
        return Err(Error::DenseCapExceeded { dim, cap });
    }
    Ok(dim as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    parties: usize,
    local_dim: usize,
    matrix: DMatrix<C64>,
}

impl DenseOperator {
    pub fn new(parties: usize, local_dim: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = (local_dim as u128).checked_pow(parties as u32);
        if dim != Some(matrix.nrows() as u128) || !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for N = {parties}, d = {local_dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self {
            parties,
            local_dim,
            matrix,
        })
    }

    pub fn zeros(parties: usize, local_dim: usize) -> Result<Self> {
        let dim = dense_dim(parties, local_dim)?;
        Ok(Self {
            parties,
            local_dim,
            matrix: DMatrix::zeros(dim, dim),
        })
    }

    pub fn identity(parties: usize, local_dim: usize) -> Result<Self> {
        let dim = dense_dim(parties, local_dim)?;
        Ok(Self {
            parties,
            local_dim,
            matrix: DMatrix::identity(dim, dim),
        })
    }

    /// `|v⟩⟨v|`.
    pub fn projector(parties: usize, local_dim: usize, v: &DVector<C64>) -> Result<Self> {
        let dim = dense_dim(parties, local_dim)?;
        if v.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        Ok(Self {
            parties,
            local_dim,
            matrix: v * v.adjoint(),
        })
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &DenseOperator) -> C64 {
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.matrix[(i, j)] * other.matrix[(j, i)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn frobenius_distance(&self, other: &DenseOperator) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    /// Largest `|A_ij - conj(A_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// True when every imaginary part is at most `tol` in magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        self.matrix.iter().all(|z| z.im.abs() <= tol)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.matrix.map(|z| z.re)
    }

    pub fn scaled(&self, factor: f64) -> DenseOperator {
        DenseOperator {
            parties: self.parties,
            local_dim: self.local_dim,
            matrix: self.matrix.map(|z| z * factor),
        }
    }

    /// `U self U†`.
    pub fn conjugated_by(&self, unitary: &DenseOperator) -> DenseOperator {
        DenseOperator {
            parties: self.parties,
            local_dim: self.local_dim,
            matrix: &unitary.matrix * &self.matrix * unitary.matrix.adjoint(),
        }
    }

    fn check_same_space(&self, other: &DenseOperator) {
        assert_eq!(
            (self.parties, self.local_dim),
            (other.parties, other.local_dim),
            "operators act on different spaces"
        );
    }
}

impl<'a> Add<&'a DenseOperator> for &'a DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &'a DenseOperator) -> DenseOperator {
        self.check_same_space(rhs);
        DenseOperator {
            parties: self.parties,
            local_dim: self.local_dim,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl<'a> Sub<&'a DenseOperator> for &'a DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &'a DenseOperator) -> DenseOperator {
        self.check_same_space(rhs);
        DenseOperator {
            parties: self.parties,
            local_dim: self.local_dim,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl<'a> Mul<&'a DenseOperator> for &'a DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &'a DenseOperator) -> DenseOperator {
        self.check_same_space(rhs);
        DenseOperator {
            parties: self.parties,
            local_dim: self.local_dim,
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_checks_dimension() {
        assert!(DenseOperator::new(2, 2, DMatrix::zeros(4, 4)).is_ok());
        assert!(DenseOperator::new(2, 2, DMatrix::zeros(3, 3)).is_err());
        assert!(DenseOperator::new(2, 2, DMatrix::zeros(4, 3)).is_err());
    }

    #[test]
    fn cap_rejects_large_spaces() {
        assert_eq!(dense_dim(4, 3).unwrap(), 81);
        assert!(matches!(
            dense_dim(13, 2),
            Err(Error::DenseCapExceeded { .. })
        ));
        assert!(matches!(
            dense_dim(200, 7),
            Err(Error::DenseCapExceeded { .. })
        ));
    }

    #[test]
    fn trace_product_matches_product_trace() {
        let a = DenseOperator::new(
            1,
            2,
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    C64::new(1.0, 0.0),
                    C64::new(0.0, 2.0),
                    C64::new(3.0, 0.0),
                    C64::new(4.0, -1.0),
                ],
            ),
        )
        .unwrap();
        let b = a.scaled(0.5);
        assert!(((&a * &b).trace() - a.trace_product(&b)).norm() < 1e-14);
    }
}
