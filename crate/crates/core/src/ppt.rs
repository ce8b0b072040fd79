//! m-PPT decisions through Hankel blocks of the coefficient sequence.
//!
//! Transposing the first `m` parties of `ρ = Σ_k p_k |R_k⟩⟨R_k|` splits
//! `Γ_m(ρ)` into mutually orthogonal Hermitian blocks `A_s`, one per shift
//! `s ∈ [-m(d-1), (N-m)(d-1)]`. Each `A_s` is congruent to the Hankel matrix
//! `P_s = (p_{k+l+s})`, so `Γ_m(ρ) ⪰ 0` iff every `P_s ⪰ 0`, and the
//! principal-submatrix structure of the `P_s` reduces the check to a handful
//! of blocks.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::combinatorics::digit_sums;
use crate::error::{Error, Result};
use crate::linalg::{combine_status, is_psd, PsdCheck, PsdStatus};
use crate::operator::{dense_dim, DenseOperator, C64};
use crate::states::StateSpec;

/// `P_s = (p_{k+l+s})` over `lo <= k, l <= hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelBlock {
    pub shift: i64,
    pub lo: i64,
    pub hi: i64,
    pub matrix: DMatrix<f64>,
}

impl HankelBlock {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }
}

fn check_split(parties: usize, m: usize) -> Result<()> {
    if m < 1 || m >= parties {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            lo: 1,
            hi: parties as i64 - 1,
        });
    }
    Ok(())
}

/// Admissible shift range `[-m(d-1), (N-m)(d-1)]`.
pub fn shift_range(parties: usize, local_dim: usize, m: usize) -> (i64, i64) {
    let top = (local_dim - 1) as i64;
    (-(m as i64) * top, (parties - m) as i64 * top)
}

/// The Hankel block `P_s` for transposing the first `m` of `N` parties.
pub fn hankel_block(
    coeffs: &[f64],
    parties: usize,
    local_dim: usize,
    m: usize,
    shift: i64,
) -> Result<HankelBlock> {
    if local_dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "d must be >= 2, got {local_dim}"
        )));
    }
    check_split(parties, m)?;
    let expected = parties * (local_dim - 1) + 1;
    if coeffs.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: coeffs.len(),
        });
    }
    let (smin, smax) = shift_range(parties, local_dim, m);
    if shift < smin || shift > smax {
        return Err(Error::OutOfRange {
            what: "s",
            value: shift,
            lo: smin,
            hi: smax,
        });
    }
    let top = (local_dim - 1) as i64;
    let lo = 0.max(-shift);
    let hi = (m as i64 * top).min((parties - m) as i64 * top - shift);
    let size = (hi - lo + 1).max(0) as usize;
    let matrix = DMatrix::from_fn(size, size, |r, c| {
        coeffs[(2 * lo + r as i64 + c as i64 + shift) as usize]
    });
    Ok(HankelBlock {
        shift,
        lo,
        hi,
        matrix,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PptVerdict {
    Ppt,
    NotPpt,
    Marginal,
}

impl From<PsdStatus> for PptVerdict {
    fn from(s: PsdStatus) -> Self {
        match s {
            PsdStatus::Psd => PptVerdict::Ppt,
            PsdStatus::NotPsd => PptVerdict::NotPpt,
            PsdStatus::Marginal => PptVerdict::Marginal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockRecord {
    pub shift: i64,
    pub size: usize,
    pub status: PsdStatus,
    pub min_eigenvalue: Option<f64>,
    pub max_eigenvalue: Option<f64>,
    pub margin: Option<f64>,
}

impl BlockRecord {
    fn new(shift: i64, check: PsdCheck) -> Self {
        Self {
            shift,
            size: check.dim,
            status: check.status,
            min_eigenvalue: check.min_eigenvalue,
            max_eigenvalue: check.max_eigenvalue,
            margin: check.margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PptReport {
    pub m: usize,
    pub verdict: PptVerdict,
    pub checked_shifts: Vec<i64>,
    pub blocks: Vec<BlockRecord>,
}

/// Shifts whose blocks decide m-PPT: `{0, 1}` when `N = 2m`, otherwise
/// `0..=(N-2m)(d-1)`.
pub fn deciding_shifts(parties: usize, local_dim: usize, m: usize) -> Vec<i64> {
    if 2 * m == parties {
        vec![0, 1]
    } else {
        (0..=((parties - 2 * m) * (local_dim - 1)) as i64).collect()
    }
}

/// Decide whether transposing the first `m` parties leaves `ρ` positive.
pub fn is_m_ppt(spec: &StateSpec, m: usize, tol_rel: f64) -> Result<PptReport> {
    let parties = spec.parties();
    if m < 1 || m > parties / 2 {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            lo: 1,
            hi: (parties / 2) as i64,
        });
    }
    let shifts = deciding_shifts(parties, spec.local_dim(), m);
    let blocks = shifts
        .iter()
        .map(|&s| {
            let block = hankel_block(spec.coeffs(), parties, spec.local_dim(), m, s)?;
            Ok(BlockRecord::new(s, is_psd(&block.matrix, tol_rel)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = combine_status(blocks.iter().map(|b| b.status)).into();
    Ok(PptReport {
        m,
        verdict,
        checked_shifts: shifts,
        blocks,
    })
}

/// Dense `A_s` for a single shift.
///
/// The first `m` parties form the most significant digits of a basis index;
/// `A_s` lives on the span of `|a, b⟩` with `|b| - |a| = s`, and its entry
/// between `|a, b⟩` and `|c, e⟩` is `p_{|a| + |c| + s}`.
pub fn block_operator(spec: &StateSpec, m: usize, shift: i64) -> Result<DenseOperator> {
    let (parties, d) = (spec.parties(), spec.local_dim());
    check_split(parties, m)?;
    let (smin, smax) = shift_range(parties, d, m);
    if shift < smin || shift > smax {
        return Err(Error::OutOfRange {
            what: "s",
            value: shift,
            lo: smin,
            hi: smax,
        });
    }
    let support = block_support(parties, d, m)?;
    let mut op = DenseOperator::zeros(parties, d)?;
    fill_block(&mut op, spec.coeffs(), &support, shift);
    Ok(op)
}

/// All `A_s`, `s = -m(d-1)..=(N-m)(d-1)`, in increasing shift order.
pub fn block_decomposition(spec: &StateSpec, m: usize) -> Result<Vec<(i64, DenseOperator)>> {
    let (parties, d) = (spec.parties(), spec.local_dim());
    check_split(parties, m)?;
    let support = block_support(parties, d, m)?;
    let (smin, smax) = shift_range(parties, d, m);
    (smin..=smax)
        .map(|s| {
            let mut op = DenseOperator::zeros(parties, d)?;
            fill_block(&mut op, spec.coeffs(), &support, s);
            Ok((s, op))
        })
        .collect()
}

// (index, |a|, |b| - |a|) for every basis vector |a, b⟩.
fn block_support(parties: usize, d: usize, m: usize) -> Result<Vec<(usize, i64, i64)>> {
    let dim = dense_dim(parties, d)?;
    let tail = d.pow((parties - m) as u32);
    let head_sums = digit_sums(m, d);
    let tail_sums = digit_sums(parties - m, d);
    Ok((0..dim)
        .map(|i| {
            let a = head_sums[i / tail] as i64;
            let b = tail_sums[i % tail] as i64;
            (i, a, b - a)
        })
        .collect())
}

fn fill_block(op: &mut DenseOperator, coeffs: &[f64], support: &[(usize, i64, i64)], shift: i64) {
    let members: Vec<(usize, i64)> = support
        .iter()
        .filter(|(_, _, s)| *s == shift)
        .map(|&(i, a, _)| (i, a))
        .collect();
    let mat = op.matrix_mut();
    for &(i, k) in &members {
        for &(j, l) in &members {
            mat[(i, j)] = C64::new(coeffs[(k + l + shift) as usize], 0.0);
        }
    }
}
