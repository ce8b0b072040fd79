//! Restricted Dicke vectors, the symmetrizers `P_S` and `P_D`, diagonal
//! restricted-Dicke states and pure D-symmetric product states.
//!
//! All states are unnormalized: `ρ = Σ_k p_k |R_k⟩⟨R_k|` has trace
//! `Σ_k p_k {N choose k}_d`. Use [`normalized`] to divide by the trace.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::combinatorics::{digit_sums, index_to_tuple, TupleIndexer};
use crate::error::{Error, Result};
use crate::operator::{dense_dim, DenseOperator, C64};

/// A diagonal restricted-Dicke state `Σ_k p_k |R_{N,d;k}⟩⟨R_{N,d;k}|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateSpec {
    #[serde(rename = "N")]
    parties: usize,
    #[serde(rename = "d")]
    local_dim: usize,
    #[serde(rename = "p")]
    coeffs: Vec<f64>,
}

impl StateSpec {
    pub fn new(parties: usize, local_dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        if parties < 2 {
            return Err(Error::InvalidParameter(format!(
                "N must be >= 2, got {parties}"
            )));
        }
        if local_dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "d must be >= 2, got {local_dim}"
            )));
        }
        let expected = parties
            .checked_mul(local_dim - 1)
            .and_then(|n| n.checked_add(1))
            .ok_or_else(|| Error::InvalidParameter("N(d-1) overflows".into()))?;
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        if let Some((index, &value)) = coeffs
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidCoefficient { index, value });
        }
        Ok(Self {
            parties,
            local_dim,
            coeffs,
        })
    }

    /// `p_k = t^k`.
    pub fn geometric(parties: usize, local_dim: usize, ratio: f64) -> Result<Self> {
        let n = parties * local_dim.saturating_sub(1);
        Self::new(
            parties,
            local_dim,
            (0..=n).map(|k| ratio.powi(k as i32)).collect(),
        )
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `N(d-1)`, the index of the last coefficient.
    pub fn max_sum(&self) -> usize {
        self.parties * (self.local_dim - 1)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.parties,
            self.local_dim,
            self.coeffs.iter().map(|p| p * factor).collect(),
        )
    }
}

fn check_sum(parties: usize, local_dim: usize, k: usize) -> Result<()> {
    let max = parties * (local_dim - 1);
    if k > max {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            lo: 0,
            hi: max as i64,
        });
    }
    Ok(())
}

fn check_params(parties: usize, local_dim: usize) -> Result<()> {
    if parties < 1 || local_dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "need N >= 1 and d >= 2, got N = {parties}, d = {local_dim}"
        )));
    }
    Ok(())
}

/// `|R_{N,d;k}⟩ = Σ_{|i| = k} |i⟩`.
pub fn restricted_dicke_vector(parties: usize, local_dim: usize, k: usize) -> Result<DVector<C64>> {
    check_params(parties, local_dim)?;
    check_sum(parties, local_dim, k)?;
    let dim = dense_dim(parties, local_dim)?;
    let sums = digit_sums(parties, local_dim);
    Ok(DVector::from_fn(dim, |i, _| {
        if sums[i] == k {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Dual basis vector `{N choose k}_d^{-1} |R_{N,d;k}⟩`.
pub fn dual_restricted_dicke(parties: usize, local_dim: usize, k: usize) -> Result<DVector<C64>> {
    let v = restricted_dicke_vector(parties, local_dim, k)?;
    let count = TupleIndexer::new(parties, local_dim)?.count(parties, k as i64);
    Ok(v.unscale(count as f64))
}

/// Bosonic projector `P_S`.
pub fn symmetrizer(parties: usize, local_dim: usize) -> Result<DenseOperator> {
    check_params(parties, local_dim)?;
    let dim = dense_dim(parties, local_dim)?;
    // Averaging over S_N is averaging uniformly over the orbit of i, i.e. over
    // all tuples with the same multiset of digits.
    let mut orbits: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for i in 0..dim {
        let mut key = index_to_tuple(i, parties, local_dim);
        key.sort_unstable();
        orbits.entry(key).or_default().push(i);
    }
    let mut m = DMatrix::zeros(dim, dim);
    for members in orbits.values() {
        let w = C64::new(1.0 / members.len() as f64, 0.0);
        for &a in members {
            for &b in members {
                m[(a, b)] = w;
            }
        }
    }
    DenseOperator::new(parties, local_dim, m)
}

/// D-symmetrizer `P_D|i⟩ = {N choose |i|}_d^{-1} Σ_{|j| = |i|} |j⟩`.
pub fn d_symmetrizer(parties: usize, local_dim: usize) -> Result<DenseOperator> {
    check_params(parties, local_dim)?;
    let dim = dense_dim(parties, local_dim)?;
    let counts = TupleIndexer::new(parties, local_dim)?;
    let sums = digit_sums(parties, local_dim);
    let m = DMatrix::from_fn(dim, dim, |i, j| {
        if sums[i] == sums[j] {
            C64::new(1.0 / counts.count(parties, sums[i] as i64) as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    DenseOperator::new(parties, local_dim, m)
}

/// Dense `ρ = Σ_k p_k |R_k⟩⟨R_k|`: entry `(i, j)` is `p_{|i|}` when
/// `|i| = |j|` and zero otherwise.
pub fn build_state(spec: &StateSpec) -> Result<DenseOperator> {
    let (n, d) = (spec.parties(), spec.local_dim());
    let dim = dense_dim(n, d)?;
    let sums = digit_sums(n, d);
    let p = spec.coeffs();
    let m = DMatrix::from_fn(dim, dim, |i, j| {
        if sums[i] == sums[j] {
            C64::new(p[sums[i]], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    DenseOperator::new(n, d, m)
}

/// Divide by the trace; the zero operator is returned unchanged.
pub fn normalized(op: &DenseOperator) -> DenseOperator {
    let tr = op.trace().re;
    if tr > 0.0 {
        op.scaled(1.0 / tr)
    } else {
        op.clone()
    }
}

/// Single-party factor of a pure separable D-symmetric state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PureDSymmetricVector {
    /// `|d-1⟩`.
    Top,
    /// `C_z Σ_i z^i |i⟩` with `C_z = (Σ_i |z|^{2i})^{-1/2}`.
    Geometric(C64),
}

impl PureDSymmetricVector {
    /// The unit vector in `C^d`.
    pub fn local_vector(&self, local_dim: usize) -> DVector<C64> {
        match *self {
            PureDSymmetricVector::Top => {
                let mut v = DVector::zeros(local_dim);
                v[local_dim - 1] = C64::new(1.0, 0.0);
                v
            }
            PureDSymmetricVector::Geometric(z) => {
                let c = geometric_normalizer(z, local_dim);
                DVector::from_fn(local_dim, |i, _| z.powi(i as i32) * c)
            }
        }
    }

    /// `|ξ⟩⟨ξ|^{⊗N}`.
    pub fn product_state(&self, parties: usize, local_dim: usize) -> Result<DenseOperator> {
        check_params(parties, local_dim)?;
        let v = tensor_power(&self.local_vector(local_dim), parties);
        DenseOperator::projector(parties, local_dim, &v)
    }
}

/// `C_z = (Σ_{i<d} |z|^{2i})^{-1/2}`.
pub fn geometric_normalizer(z: C64, local_dim: usize) -> f64 {
    let r2 = z.norm_sqr();
    let s: f64 = (0..local_dim).map(|i| r2.powi(i as i32)).sum();
    s.powf(-0.5)
}

/// Trace-one pure product state `σ_z = |ξ_z⟩⟨ξ_z|^{⊗N}`; its `(i, j)` entry
/// is `C_z^{2N} z^{|i|} conj(z)^{|j|}`.
pub fn sigma_z(parties: usize, local_dim: usize, z: C64) -> Result<DenseOperator> {
    check_params(parties, local_dim)?;
    let dim = dense_dim(parties, local_dim)?;
    let sums = digit_sums(parties, local_dim);
    let c = geometric_normalizer(z, local_dim).powi(parties as i32);
    let v = DVector::from_fn(dim, |i, _| z.powi(sums[i] as i32) * c);
    DenseOperator::projector(parties, local_dim, &v)
}

/// `|d-1⟩⟨d-1|^{⊗N}`.
pub fn top_state(parties: usize, local_dim: usize) -> Result<DenseOperator> {
    PureDSymmetricVector::Top.product_state(parties, local_dim)
}

/// `v^{⊗n}` in big-endian index order.
pub(crate) fn tensor_power(v: &DVector<C64>, n: usize) -> DVector<C64> {
    let mut out = DVector::from_element(1, C64::new(1.0, 0.0));
    for _ in 0..n {
        out = out.kronecker(v);
    }
    out
}
