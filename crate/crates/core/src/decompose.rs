//! Explicit fully separable decompositions.
//!
//! For `t >= 0` the state `ρ_t = Σ_k t^k |R_k⟩⟨R_k|` equals
//! `1/(n+1) Σ_α |α̂⟩⟨α̂|^{⊗N}` with `|α̂⟩ = Σ_i t^{i/2} ω^{αi} |i⟩`,
//! `ω = exp(2πi/(n+1))` and `n = N(d-1)`: the discrete Fourier sum kills
//! every cross term between different digit sums. A representing measure
//! `Σ w_j δ_{t_j}` plus top mass `M` then yields
//! `ρ = Σ_j w_j ρ_{t_j} + M |d-1⟩⟨d-1|^{⊗N}`.

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Tolerances;
use crate::moment::{is_separable, SeparabilityStatus};
use crate::operator::{dense_dim, DenseOperator, C64};
use crate::states::{build_state, tensor_power, StateSpec};

/// Single-party factor `φ` of a term `w |φ⟩⟨φ|^{⊗N}`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProductFactor {
    Vector(Vec<C64>),
    /// `|d-1⟩`.
    Top,
}

impl Serialize for ProductFactor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ProductFactor::Top => serializer.serialize_str("top"),
            ProductFactor::Vector(v) => {
                let mut seq = serializer.serialize_seq(Some(v.len()))?;
                for z in v {
                    seq.serialize_element(&[z.re, z.im])?;
                }
                seq.end()
            }
        }
    }
}

impl ProductFactor {
    pub fn to_vector(&self, local_dim: usize) -> DVector<C64> {
        match self {
            ProductFactor::Vector(v) => DVector::from_column_slice(v),
            ProductFactor::Top => {
                let mut v = DVector::zeros(local_dim);
                v[local_dim - 1] = C64::new(1.0, 0.0);
                v
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleTerm {
    pub weight: f64,
    pub vector: ProductFactor,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparableEnsemble {
    #[serde(rename = "N")]
    pub parties: usize,
    #[serde(rename = "d")]
    pub local_dim: usize,
    pub terms: Vec<EnsembleTerm>,
    /// Frobenius distance to the target state, when it fits the dense cap.
    pub reconstruction_error: Option<f64>,
}

impl SeparableEnsemble {
    /// `Σ_j w_j |φ_j⟩⟨φ_j|^{⊗N}`.
    pub fn to_operator(&self) -> Result<DenseOperator> {
        let mut acc = DenseOperator::zeros(self.parties, self.local_dim)?;
        for term in &self.terms {
            let v = tensor_power(&term.vector.to_vector(self.local_dim), self.parties);
            let m = acc.matrix_mut();
            m.gerc(C64::new(term.weight, 0.0), &v, &v, C64::new(1.0, 0.0));
        }
        Ok(acc)
    }

    /// Fill `reconstruction_error` against `target` if it is dense-sized.
    pub fn with_reconstruction_error(mut self, target: &StateSpec) -> Result<Self> {
        if dense_dim(target.parties(), target.local_dim()).is_ok() {
            let rho = build_state(target)?;
            self.reconstruction_error = Some(self.to_operator()?.frobenius_distance(&rho));
        }
        Ok(self)
    }

    /// Rewrite as a convex combination of unit-trace product states.
    pub fn normalized(&self) -> SeparableEnsemble {
        let mut terms: Vec<EnsembleTerm> = self
            .terms
            .iter()
            .filter_map(|t| match &t.vector {
                ProductFactor::Top => Some(t.clone()),
                ProductFactor::Vector(v) => {
                    let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                    (norm2 > 0.0).then(|| EnsembleTerm {
                        weight: t.weight * norm2.powi(self.parties as i32),
                        vector: ProductFactor::Vector(v.iter().map(|z| z / norm2.sqrt()).collect()),
                    })
                }
            })
            .collect();
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        if total > 0.0 {
            for t in &mut terms {
                t.weight /= total;
            }
        }
        SeparableEnsemble {
            parties: self.parties,
            local_dim: self.local_dim,
            terms,
            reconstruction_error: None,
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }
}

fn fourier_vectors(local_dim: usize, count: usize, t: f64) -> Vec<Vec<C64>> {
    let root = 2.0 * PI / count as f64;
    (0..count)
        .map(|alpha| {
            (0..local_dim)
                .map(|i| {
                    let amp = t.sqrt().powi(i as i32);
                    C64::from_polar(amp, root * ((alpha * i) % count) as f64)
                })
                .collect()
        })
        .collect()
}

/// The `N(d-1)+1` Fourier product terms reconstructing `ρ_t`.
pub fn geometric_ensemble(parties: usize, local_dim: usize, t: f64) -> Result<SeparableEnsemble> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "geometric ratio must be a finite t >= 0, got {t}"
        )));
    }
    if parties < 1 || local_dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "need N >= 1 and d >= 2, got N = {parties}, d = {local_dim}"
        )));
    }
    let count = parties * (local_dim - 1) + 1;
    let weight = 1.0 / count as f64;
    Ok(SeparableEnsemble {
        parties,
        local_dim,
        terms: fourier_vectors(local_dim, count, t)
            .into_iter()
            .map(|v| EnsembleTerm {
                weight,
                vector: ProductFactor::Vector(v),
            })
            .collect(),
        reconstruction_error: None,
    })
}

/// Separable decomposition of a moment-feasible state: a Fourier ensemble per
/// recovered atom (one `|0⟩` term for an atom at zero) plus the top mass.
pub fn separable_ensemble(spec: &StateSpec, tol: Tolerances) -> Result<SeparableEnsemble> {
    let verdict = is_separable(spec, tol)?;
    match verdict.verdict {
        SeparabilityStatus::Separable => {}
        SeparabilityStatus::Entangled => return Err(Error::NotSeparable),
        SeparabilityStatus::Marginal => {
            return Err(Error::Precondition(
                "separability verdict is marginal at this tolerance".into(),
            ))
        }
    }
    let measure = verdict
        .measure
        .ok_or_else(|| Error::RecoveryFailed(verdict.recovery_error.unwrap_or_default()))?;
    let (n, d) = (spec.parties(), spec.local_dim());
    let mut terms = Vec::new();
    for atom in &measure.atoms {
        if atom.node == 0.0 {
            let mut v = vec![C64::new(0.0, 0.0); d];
            v[0] = C64::new(1.0, 0.0);
            terms.push(EnsembleTerm {
                weight: atom.weight,
                vector: ProductFactor::Vector(v),
            });
            continue;
        }
        let geo = geometric_ensemble(n, d, atom.node)?;
        terms.extend(geo.terms.into_iter().map(|t| EnsembleTerm {
            weight: t.weight * atom.weight,
            vector: t.vector,
        }));
    }
    if measure.top_mass > 0.0 {
        terms.push(EnsembleTerm {
            weight: measure.top_mass,
            vector: ProductFactor::Top,
        });
    }
    SeparableEnsemble {
        parties: n,
        local_dim: d,
        terms,
        reconstruction_error: None,
    }
    .with_reconstruction_error(spec)
}
