//! The generalized truncated Stieltjes moment problem and the separability
//! decision built on it.
//!
//! A sequence `(p_0, ..., p_n)` is a generalized moment sequence on
//! `[0, ∞)` when a positive measure `σ` and a mass `M >= 0` exist with
//! `p_k = ∫ t^k dσ` for `k < n` and `p_n = ∫ t^n dσ + M`. This holds iff both
//! moment Hankels `(p_{k+l})` and `(p_{k+l+1})` are positive semidefinite,
//! and `ρ = Σ p_k |R_k⟩⟨R_k|` is fully separable exactly when it does.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{combine_status, is_psd, PsdCheck, PsdStatus, Tolerances};
use crate::ppt::{is_m_ppt, PptVerdict};
use crate::states::StateSpec;
use crate::witnesses::{find_detecting_witness, WitnessSpec};

/// `H_even = (p_{k+l})_{k,l <= n/2}` and `H_odd = (p_{k+l+1})_{k,l <= (n-1)/2}`.
pub fn moment_hankels(coeffs: &[f64]) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if coeffs.is_empty() {
        return Err(Error::InvalidParameter("empty moment sequence".into()));
    }
    let n = coeffs.len() - 1;
    let even_size = n / 2 + 1;
    // floor((n-1)/2) + 1, which is 0 when n = 0
    let odd_size = n.div_ceil(2);
    let even = DMatrix::from_fn(even_size, even_size, |k, l| coeffs[k + l]);
    let odd = DMatrix::from_fn(odd_size, odd_size, |k, l| coeffs[k + l + 1]);
    Ok((even, odd))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentStatus {
    Yes,
    No,
    Marginal,
}

impl From<PsdStatus> for MomentStatus {
    fn from(s: PsdStatus) -> Self {
        match s {
            PsdStatus::Psd => MomentStatus::Yes,
            PsdStatus::NotPsd => MomentStatus::No,
            PsdStatus::Marginal => MomentStatus::Marginal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentVerdict {
    pub status: MomentStatus,
    /// Both Hankels are positive definite beyond the tolerance band, so the
    /// sequence is a moment sequence with `M = 0`.
    pub strict: bool,
    pub even: PsdCheck,
    pub odd: PsdCheck,
}

fn strictly_positive(check: &PsdCheck, tol_rel: f64) -> bool {
    match (check.min_eigenvalue, check.max_eigenvalue) {
        (Some(min), Some(max)) => min > tol_rel * min.abs().max(max.abs()) && min > 0.0,
        _ => true,
    }
}

/// Decide solvability of the generalized moment problem on `[0, ∞)`.
pub fn is_generalized_moment_solution(coeffs: &[f64], tol_rel: f64) -> Result<MomentVerdict> {
    let (even, odd) = moment_hankels(coeffs)?;
    let even = is_psd(&even, tol_rel)?;
    let odd = is_psd(&odd, tol_rel)?;
    let status: MomentStatus = combine_status([even.status, odd.status]).into();
    let strict = status == MomentStatus::Yes
        && strictly_positive(&even, tol_rel)
        && strictly_positive(&odd, tol_rel);
    Ok(MomentVerdict {
        status,
        strict,
        even,
        odd,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub node: f64,
    pub weight: f64,
}

/// Atomic representing measure `Σ w_i δ_{t_i}` plus the top-moment mass `M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureAtoms {
    pub atoms: Vec<Atom>,
    pub top_mass: f64,
    /// `max_k |p_k - reproduced_k|`.
    pub moment_residual: f64,
}

impl MeasureAtoms {
    /// `Σ w_i t_i^k` for `k <= order`, with `M` added at `k = order`.
    pub fn moments(&self, order: usize) -> Vec<f64> {
        let mut out = raw_moments(&self.atoms, order + 1);
        out[order] += self.top_mass;
        out
    }
}

fn raw_moments(atoms: &[Atom], count: usize) -> Vec<f64> {
    let mut out = vec![0.0; count];
    for a in atoms {
        let mut power = 1.0;
        for slot in out.iter_mut() {
            *slot += a.weight * power;
            power *= a.node;
        }
    }
    out
}

/// Gauss rule with `r` nodes from the moments `mu[0..2r]`, via the Chebyshev
/// algorithm for the recurrence coefficients and the eigen-decomposition of
/// the Jacobi matrix. `None` when the moments do not define `r` nodes.
pub(crate) fn gauss_from_moments(mu: &[f64], r: usize) -> Option<Vec<Atom>> {
    if r == 0 {
        return Some(Vec::new());
    }
    if mu.len() < 2 * r || mu[0].is_nan() || mu[0] <= 0.0 {
        return None;
    }
    // Rescale t -> t / c to balance the monomial moments.
    let c = (1..2 * r)
        .filter_map(|k| {
            let ratio = mu[k] / mu[0];
            (ratio > 0.0).then(|| ratio.powf(1.0 / k as f64))
        })
        .fold(0.0f64, f64::max);
    let c = if c.is_finite() && c > 0.0 { c } else { 1.0 };
    let scaled: Vec<f64> = (0..2 * r).map(|k| mu[k] / c.powi(k as i32)).collect();

    let len = 2 * r;
    let mut alpha = vec![0.0; r];
    let mut beta = vec![0.0; r];
    alpha[0] = scaled[1] / scaled[0];
    beta[0] = scaled[0];
    let mut older = vec![0.0; len];
    let mut prev = scaled.clone();
    for k in 1..r {
        let mut cur = vec![0.0; len];
        for l in k..(len - k) {
            cur[l] = prev[l + 1] - alpha[k - 1] * prev[l] - beta[k - 1] * older[l];
        }
        if !cur[k].is_finite() || cur[k] <= 0.0 {
            return None;
        }
        alpha[k] = cur[k + 1] / cur[k] - prev[k] / prev[k - 1];
        beta[k] = cur[k] / prev[k - 1];
        older = prev;
        prev = cur;
    }
    let jacobi = DMatrix::from_fn(r, r, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[j].sqrt()
        } else if j + 1 == i {
            beta[i].sqrt()
        } else {
            0.0
        }
    });
    if jacobi.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut atoms: Vec<Atom> = (0..r)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            Atom {
                node: eig.eigenvalues[i] * c,
                weight: beta[0] * v0 * v0,
            }
        })
        .collect();
    atoms.sort_by(|a, b| a.node.total_cmp(&b.node));
    Some(atoms)
}

// Least-squares refit of the weights on fixed nodes against p_0..p_{n-1},
// rows scaled by 1 / max(1, |p_k|).
fn refit_weights(atoms: &[Atom], coeffs: &[f64]) -> Option<Vec<Atom>> {
    let n = coeffs.len() - 1;
    if atoms.is_empty() || n < atoms.len() {
        return None;
    }
    let rows = n;
    let scale: Vec<f64> = coeffs[..rows].iter().map(|p| p.abs().max(1e-300)).collect();
    let a = DMatrix::from_fn(rows, atoms.len(), |k, i| {
        atoms[i].node.powi(k as i32) / scale[k]
    });
    let b = nalgebra::DVector::from_fn(rows, |k, _| coeffs[k] / scale[k]);
    let w = a.svd(true, true).solve(&b, 1e-15).ok()?;
    if w.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return None;
    }
    Some(
        atoms
            .iter()
            .zip(w.iter())
            .map(|(a, &weight)| Atom {
                node: a.node,
                weight,
            })
            .collect(),
    )
}

// Clip slightly negative nodes to zero, drop negligible weights, merge
// coincident nodes. `None` when the candidate leaves the half-line.
fn sanitize(atoms: Vec<Atom>, tol: f64, mass_scale: f64) -> Option<Vec<Atom>> {
    let node_scale = atoms.iter().map(|a| a.node.abs()).fold(1.0f64, f64::max);
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for mut a in atoms {
        if !(a.node.is_finite() && a.weight.is_finite()) {
            return None;
        }
        if a.node < 0.0 {
            if a.node < -tol * node_scale {
                return None;
            }
            a.node = 0.0;
        }
        if a.weight <= 0.0 {
            if a.weight < -tol * mass_scale {
                return None;
            }
            continue;
        }
        match out.last_mut() {
            Some(last) if a.node == last.node => last.weight += a.weight,
            _ => out.push(a),
        }
    }
    Some(out)
}

fn evaluate(atoms: Vec<Atom>, coeffs: &[f64]) -> MeasureAtoms {
    let n = coeffs.len() - 1;
    let reproduced = raw_moments(&atoms, n + 1);
    let mut residual = coeffs[..n]
        .iter()
        .zip(&reproduced)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0f64, f64::max);
    let mut top_mass = coeffs[n] - reproduced[n];
    if top_mass < 0.0 {
        residual = residual.max(-top_mass);
        top_mass = 0.0;
    }
    MeasureAtoms {
        atoms,
        top_mass,
        moment_residual: residual,
    }
}

/// Recover an atomic representing measure with the fewest atoms that
/// reproduces `p_0..p_{n-1}` and leaves `M = p_n - ∫ t^n dσ >= 0`.
///
/// Candidate `r`-point Gauss rules are built from `p_0..p_{2r-1}` for
/// `r = 0, 1, ...` until one meets `moment_residual <= tol_rel * max|p_k|`.
pub fn recover_atomic_measure(coeffs: &[f64], tol_rel: f64) -> Result<MeasureAtoms> {
    if coeffs.is_empty() {
        return Err(Error::InvalidParameter("empty moment sequence".into()));
    }
    if let Some(bad) = coeffs.iter().find(|p| !p.is_finite()) {
        return Err(Error::RecoveryFailed(format!("non-finite moment {bad}")));
    }
    let n = coeffs.len() - 1;
    let scale = coeffs.iter().map(|p| p.abs()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Ok(evaluate(Vec::new(), coeffs));
    }
    let bound = tol_rel * scale;
    let max_nodes = n.div_ceil(2);
    let mut best: Option<MeasureAtoms> = None;
    for r in 0..=max_nodes {
        let Some(raw) = gauss_from_moments(&coeffs[..2 * r], r) else {
            break;
        };
        let mut candidates = Vec::new();
        if let Some(atoms) = sanitize(raw.clone(), tol_rel, scale) {
            candidates.push(evaluate(atoms, coeffs));
        }
        if let Some(atoms) = refit_weights(&raw, coeffs).and_then(|a| sanitize(a, tol_rel, scale)) {
            candidates.push(evaluate(atoms, coeffs));
        }
        for cand in candidates {
            if cand.moment_residual <= bound {
                return Ok(cand);
            }
            if best
                .as_ref()
                .is_none_or(|b| cand.moment_residual < b.moment_residual)
            {
                best = Some(cand);
            }
        }
    }
    Err(Error::RecoveryFailed(match best {
        Some(b) => format!(
            "best residual {:e} exceeds bound {:e}",
            b.moment_residual, bound
        ),
        None => "no admissible quadrature on [0, inf)".into(),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparabilityStatus {
    Separable,
    Entangled,
    Marginal,
}

/// Which moment Hankel(s) decided the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HankelBasis {
    EvenHankel,
    OddHankel,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparabilityVerdict {
    pub verdict: SeparabilityStatus,
    pub basis: HankelBasis,
    pub even_min_eigenvalue: Option<f64>,
    pub odd_min_eigenvalue: Option<f64>,
    pub measure: Option<MeasureAtoms>,
    pub witness: Option<WitnessSpec>,
    /// Set when the state is separable but no measure met the residual bound.
    pub recovery_error: Option<String>,
}

fn basis_for(even: PsdStatus, odd: PsdStatus, target: PsdStatus) -> HankelBasis {
    match (even == target, odd == target) {
        (true, false) => HankelBasis::EvenHankel,
        (false, true) => HankelBasis::OddHankel,
        _ => HankelBasis::Both,
    }
}

/// Full separability of a diagonal restricted-Dicke state, with a measure
/// (separable) or a detecting witness (entangled) attached.
pub fn is_separable(spec: &StateSpec, tol: Tolerances) -> Result<SeparabilityVerdict> {
    let mv = is_generalized_moment_solution(spec.coeffs(), tol.psd)?;
    let (even, odd) = (mv.even.status, mv.odd.status);
    let mut out = SeparabilityVerdict {
        verdict: SeparabilityStatus::Marginal,
        basis: HankelBasis::Both,
        even_min_eigenvalue: mv.even.min_eigenvalue,
        odd_min_eigenvalue: mv.odd.min_eigenvalue,
        measure: None,
        witness: None,
        recovery_error: None,
    };
    match mv.status {
        MomentStatus::Yes => {
            out.verdict = SeparabilityStatus::Separable;
            match recover_atomic_measure(spec.coeffs(), tol.residual) {
                Ok(m) => out.measure = Some(m),
                Err(e) => out.recovery_error = Some(e.to_string()),
            }
        }
        MomentStatus::No => {
            out.verdict = SeparabilityStatus::Entangled;
            out.basis = basis_for(even, odd, PsdStatus::NotPsd);
            out.witness = find_detecting_witness(spec, tol.psd)?;
        }
        MomentStatus::Marginal => {
            out.basis = basis_for(even, odd, PsdStatus::Marginal);
        }
    }
    Ok(out)
}

/// The three equivalent conditions for even `N` (and for qubits with odd `N`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremCheck {
    pub m: usize,
    pub separable: SeparabilityStatus,
    pub ppt: PptVerdict,
    pub moment: MomentStatus,
    /// `None` when any of the three verdicts is marginal.
    pub agree: Option<bool>,
}

pub fn check_main_theorem(spec: &StateSpec, tol: Tolerances) -> Result<TheoremCheck> {
    let (n, d) = (spec.parties(), spec.local_dim());
    let m = if n % 2 == 0 {
        n / 2
    } else if d == 2 {
        (n - 1) / 2
    } else {
        return Err(Error::Precondition(format!(
            "PPT and separability are not equivalent for odd N = {n} with d = {d} >= 3"
        )));
    };
    let separable = is_separable(spec, tol)?.verdict;
    let ppt = is_m_ppt(spec, m, tol.psd)?.verdict;
    let moment = is_generalized_moment_solution(spec.coeffs(), tol.psd)?.status;
    let agree = if separable == SeparabilityStatus::Marginal
        || ppt == PptVerdict::Marginal
        || moment == MomentStatus::Marginal
    {
        None
    } else {
        let s = separable == SeparabilityStatus::Separable;
        Some(s == (ppt == PptVerdict::Ppt) && s == (moment == MomentStatus::Yes))
    };
    Ok(TheoremCheck {
        m,
        separable,
        ppt,
        moment,
        agree,
    })
}
