//! D-symmetric entanglement witnesses
//! `V_(s) = Σ_{k,l} s_k conj(s_l) |R̃_{k+l}⟩⟨R̃_{k+l}|` and
//! `U_(t) = Σ_{k,l} t_k conj(t_l) |R̃_{k+l+1}⟩⟨R̃_{k+l+1}|`.
//!
//! Their expectation on a diagonal restricted-Dicke state is the Hankel
//! quadratic form `s† (p_{k+l}) s` (resp. `t† (p_{k+l+1}) t`), so a negative
//! eigenvector of a moment Hankel is a detecting witness.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::combinatorics::{digit_sums, TupleIndexer};
use crate::error::{Error, Result};
use crate::linalg::{is_psd, min_eigenpair, PsdStatus};
use crate::moment::moment_hankels;
use crate::operator::{dense_dim, DenseOperator, C64};
use crate::states::StateSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessFamily {
    V,
    U,
}

impl WitnessFamily {
    /// Number of coefficients for `N` parties of dimension `d`.
    pub fn coeff_len(self, parties: usize, local_dim: usize) -> usize {
        let n = parties * (local_dim - 1);
        match self {
            WitnessFamily::V => n / 2 + 1,
            WitnessFamily::U => n.saturating_sub(1) / 2 + 1,
        }
    }

    fn offset(self) -> usize {
        match self {
            WitnessFamily::V => 0,
            WitnessFamily::U => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSpec {
    pub family: WitnessFamily,
    pub coeffs: Vec<C64>,
    #[serde(rename = "N")]
    pub parties: usize,
    #[serde(rename = "d")]
    pub local_dim: usize,
    /// `Tr(Wρ)` for the state the witness was built against.
    pub witness_value: Option<f64>,
}

impl WitnessSpec {
    pub fn new(
        family: WitnessFamily,
        coeffs: Vec<C64>,
        parties: usize,
        local_dim: usize,
    ) -> Result<Self> {
        if parties < 1 || local_dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "need N >= 1 and d >= 2, got N = {parties}, d = {local_dim}"
            )));
        }
        let expected = family.coeff_len(parties, local_dim);
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self {
            family,
            coeffs,
            parties,
            local_dim,
            witness_value: None,
        })
    }

    pub fn operator(&self) -> Result<DenseOperator> {
        witness_operator(self.family, &self.coeffs, self.parties, self.local_dim)
    }
}

// c_j = Σ_{k+l=j} a_k conj(a_l); real because swapping k and l conjugates.
fn autocorrelation(coeffs: &[C64]) -> Vec<f64> {
    let mut out = vec![0.0; 2 * coeffs.len().max(1) - 1];
    for (k, a) in coeffs.iter().enumerate() {
        for (l, b) in coeffs.iter().enumerate() {
            out[k + l] += (a * b.conj()).re;
        }
    }
    out
}

fn witness_operator(
    family: WitnessFamily,
    coeffs: &[C64],
    parties: usize,
    local_dim: usize,
) -> Result<DenseOperator> {
    let expected = family.coeff_len(parties, local_dim);
    if coeffs.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: coeffs.len(),
        });
    }
    let dim = dense_dim(parties, local_dim)?;
    let counts = TupleIndexer::new(parties, local_dim)?;
    let sums = digit_sums(parties, local_dim);
    let corr = autocorrelation(coeffs);
    // weight of |R̃_j⟩⟨R̃_j| indexed by j
    let mut level = vec![0.0; parties * (local_dim - 1) + 1];
    for (j, c) in corr.iter().enumerate() {
        let idx = j + family.offset();
        let norm = counts.count(parties, idx as i64) as f64;
        level[idx] = c / (norm * norm);
    }
    let m = DMatrix::from_fn(dim, dim, |i, j| {
        if sums[i] == sums[j] {
            C64::new(level[sums[i]], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    DenseOperator::new(parties, local_dim, m)
}

/// Dense `V_(s)`.
pub fn witness_v(coeffs: &[C64], parties: usize, local_dim: usize) -> Result<DenseOperator> {
    witness_operator(WitnessFamily::V, coeffs, parties, local_dim)
}

/// Dense `U_(t)`.
pub fn witness_u(coeffs: &[C64], parties: usize, local_dim: usize) -> Result<DenseOperator> {
    witness_operator(WitnessFamily::U, coeffs, parties, local_dim)
}

/// `Tr(Wρ)` through the Hankel quadratic form, no dense operators.
pub fn witness_value_fast(w: &WitnessSpec, spec: &StateSpec) -> Result<f64> {
    if (w.parties, w.local_dim) != (spec.parties(), spec.local_dim()) {
        return Err(Error::DimensionMismatch(format!(
            "witness on N = {}, d = {} against state on N = {}, d = {}",
            w.parties,
            w.local_dim,
            spec.parties(),
            spec.local_dim()
        )));
    }
    let expected = w.family.coeff_len(w.parties, w.local_dim);
    if w.coeffs.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: w.coeffs.len(),
        });
    }
    let p = spec.coeffs();
    let off = w.family.offset();
    Ok(autocorrelation(&w.coeffs)
        .iter()
        .enumerate()
        .map(|(j, c)| c * p[j + off])
        .sum())
}

/// A V or U witness built from the most negative eigenvector of a moment
/// Hankel, or `None` when neither Hankel is decisively indefinite.
pub fn find_detecting_witness(spec: &StateSpec, tol_rel: f64) -> Result<Option<WitnessSpec>> {
    let (even, odd) = moment_hankels(spec.coeffs())?;
    let mut best: Option<(f64, WitnessFamily, Vec<f64>)> = None;
    for (family, h) in [(WitnessFamily::V, even), (WitnessFamily::U, odd)] {
        if is_psd(&h, tol_rel)?.status != PsdStatus::NotPsd {
            continue;
        }
        if let Some((value, vec)) = min_eigenpair(&h) {
            if best.as_ref().is_none_or(|b| value < b.0) {
                best = Some((value, family, vec.iter().copied().collect()));
            }
        }
    }
    let Some((_, family, vec)) = best else {
        return Ok(None);
    };
    let coeffs = vec.into_iter().map(|x| C64::new(x, 0.0)).collect();
    let mut w = WitnessSpec::new(family, coeffs, spec.parties(), spec.local_dim())?;
    w.witness_value = Some(witness_value_fast(&w, spec)?);
    Ok(Some(w))
}
