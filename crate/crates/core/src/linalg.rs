//! Tolerance handling and eigenvalue-based PSD classification shared by the
//! Hankel fast path and the dense oracle.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default relative band for PSD decisions.
pub const DEFAULT_PSD_TOL: f64 = 1e-10;
/// Default relative bound on moment reproduction residuals.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;

// Eigenvalues this close to zero (relative to the spectral radius, per unit
// of dimension) are indistinguishable from exact zeros in f64.
const ROUNDING_FACTOR: f64 = 64.0;

/// Tolerances used by the classification routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative band around zero for eigenvalue sign decisions.
    pub psd: f64,
    /// Relative bound on reproduced-moment residuals.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd: DEFAULT_PSD_TOL,
            residual: DEFAULT_RESIDUAL_TOL,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            psd: tol,
            residual: tol,
        }
    }
}

/// Three-valued outcome of a semidefiniteness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsdStatus {
    Psd,
    NotPsd,
    /// The smallest eigenvalue is negative but inside the tolerance band:
    /// the answer depends on the tolerance.
    Marginal,
}

/// Spectral summary of a PSD test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsdCheck {
    pub status: PsdStatus,
    pub dim: usize,
    /// `None` for an empty matrix.
    pub min_eigenvalue: Option<f64>,
    pub max_eigenvalue: Option<f64>,
    /// `min_eigenvalue` divided by the spectral radius.
    pub margin: Option<f64>,
}

impl PsdCheck {
    pub fn empty() -> Self {
        Self {
            status: PsdStatus::Psd,
            dim: 0,
            min_eigenvalue: None,
            max_eigenvalue: None,
            margin: None,
        }
    }

    /// Classify from the extreme eigenvalues of a `dim x dim` matrix.
    ///
    /// With `r` the spectral radius the verdict is `NotPsd` when
    /// `min <= -tol_rel * r`, `Marginal` when `min` lies strictly inside that
    /// band but below the f64 rounding floor, and `Psd` otherwise.
    pub fn from_extremes(min: f64, max: f64, dim: usize, tol_rel: f64) -> Self {
        let scale = min.abs().max(max.abs());
        let band = tol_rel * scale;
        let floor = (ROUNDING_FACTOR * f64::EPSILON * dim.max(1) as f64 * scale).min(band);
        let status = if min >= -floor {
            PsdStatus::Psd
        } else if min > -band {
            PsdStatus::Marginal
        } else {
            PsdStatus::NotPsd
        };
        Self {
            status,
            dim,
            min_eigenvalue: Some(min),
            max_eigenvalue: Some(max),
            margin: Some(if scale > 0.0 { min / scale } else { 0.0 }),
        }
    }

    pub fn from_eigenvalues(eigenvalues: &[f64], tol_rel: f64) -> Self {
        if eigenvalues.is_empty() {
            return Self::empty();
        }
        let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let max = eigenvalues
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        Self::from_extremes(min, max, eigenvalues.len(), tol_rel)
    }
}

/// Combine several checks: any `NotPsd` wins, then any `Marginal`.
pub fn combine_status<I: IntoIterator<Item = PsdStatus>>(statuses: I) -> PsdStatus {
    let mut out = PsdStatus::Psd;
    for s in statuses {
        match s {
            PsdStatus::NotPsd => return PsdStatus::NotPsd,
            PsdStatus::Marginal => out = PsdStatus::Marginal,
            PsdStatus::Psd => {}
        }
    }
    out
}

pub(crate) fn symmetry_deviation(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            dev = dev.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    dev
}

pub(crate) fn ensure_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let dev = symmetry_deviation(m);
    let scale = m.amax().max(1.0);
    if dev > 1e-12 * scale {
        return Err(Error::NotHermitian {
            kind: "symmetric",
            deviation: dev,
        });
    }
    Ok(())
}

/// Full symmetric eigendecomposition test of semidefiniteness.
pub fn is_psd(m: &DMatrix<f64>, tol_rel: f64) -> Result<PsdCheck> {
    ensure_symmetric(m)?;
    if m.nrows() == 0 {
        return Ok(PsdCheck::empty());
    }
    let eig = SymmetricEigen::new(m.clone());
    Ok(PsdCheck::from_eigenvalues(
        eig.eigenvalues.as_slice(),
        tol_rel,
    ))
}

/// Smallest eigenpair of a real symmetric matrix, eigenvector normalized to
/// unit length with its first non-negligible component positive.
pub(crate) fn min_eigenpair(m: &DMatrix<f64>) -> Option<(f64, DVector<f64>)> {
    if m.nrows() == 0 {
        return None;
    }
    let eig = SymmetricEigen::new(m.clone());
    let (idx, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    let mut v: DVector<f64> = eig.eigenvectors.column(idx).into_owned();
    let norm = v.norm();
    if norm > 0.0 {
        v /= norm;
    }
    if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-12) {
        if first < 0.0 {
            v = -v;
        }
    }
    Some((value, v))
}
