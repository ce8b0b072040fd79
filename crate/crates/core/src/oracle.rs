//! Dense brute-force ground truth: arbitrary partial transposes, tensor
//! factor permutations and full Hermitian eigen-decompositions.
//!
//! Everything here materializes `d^N x d^N` matrices and is limited by the
//! dense cap.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::combinatorics::{digit_sums, index_to_tuple, TupleIndexer};
use crate::error::{Error, Result};
use crate::linalg::{PsdCheck, PsdStatus};
use crate::operator::{dense_dim, DenseOperator, C64};
use crate::states::{build_state, StateSpec};

/// Which parties are transposed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransposeMask(Vec<bool>);

impl TransposeMask {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Parse a bitstring such as `"100"`; the first character is party 1.
    pub fn parse(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "invalid mask character {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// The first `m` of `parties` transposed.
    pub fn first(m: usize, parties: usize) -> Self {
        Self((0..parties).map(|r| r < m).collect())
    }

    /// All masks of length `parties` with the given weight.
    pub fn all_with_weight(parties: usize, weight: usize) -> Vec<Self> {
        (0u64..(1u64 << parties))
            .filter(|b| b.count_ones() as usize == weight)
            .map(|b| {
                Self(
                    (0..parties)
                        .map(|r| b >> (parties - 1 - r) & 1 == 1)
                        .collect(),
                )
            })
            .collect()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    /// True for masks of the form `1..10..0`.
    pub fn is_leading(&self) -> bool {
        let w = self.weight();
        self.0.iter().take(w).all(|b| *b)
    }
}

impl std::fmt::Display for TransposeMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Transpose the masked parties by swapping their digits between the row
/// and column index of every entry.
pub fn partial_transpose(rho: &DenseOperator, mask: &TransposeMask) -> Result<DenseOperator> {
    let (n, d) = (rho.parties(), rho.local_dim());
    if mask.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "mask of length {} for {n} parties",
            mask.len()
        )));
    }
    let dim = rho.dim();
    // Split every index into its masked-digit and unmasked-digit parts.
    let mut masked = vec![0usize; dim];
    let mut rest = vec![0usize; dim];
    for i in 0..dim {
        let mut place = 1usize;
        let mut x = i;
        for r in (0..n).rev() {
            let digit = x % d;
            x /= d;
            if mask.bits()[r] {
                masked[i] += digit * place;
            } else {
                rest[i] += digit * place;
            }
            place *= d;
        }
    }
    let src = rho.matrix();
    let mut out = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            out[(masked[j] + rest[i], masked[i] + rest[j])] = src[(i, j)];
        }
    }
    DenseOperator::new(n, d, out)
}

/// `F_σ |ξ_1, ..., ξ_N⟩ = |ξ_{σ⁻¹(1)}, ..., ξ_{σ⁻¹(N)}⟩`: the factor in slot
/// `q` moves to slot `sigma[q]` (zero-based).
pub fn permutation_operator(sigma: &[usize], local_dim: usize) -> Result<DenseOperator> {
    let n = sigma.len();
    if n == 0 {
        return Err(Error::InvalidPermutation("empty permutation".into()));
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidPermutation(format!(
                "{sigma:?} is not a permutation of 0..{n}"
            )));
        }
    }
    let dim = dense_dim(n, local_dim)?;
    let mut m = DMatrix::zeros(dim, dim);
    let mut moved = vec![0usize; n];
    for i in 0..dim {
        let t = index_to_tuple(i, n, local_dim);
        for (q, &digit) in t.iter().enumerate() {
            moved[sigma[q]] = digit;
        }
        let target = moved.iter().fold(0usize, |acc, &x| acc * local_dim + x);
        m[(target, i)] = C64::new(1.0, 0.0);
    }
    DenseOperator::new(n, local_dim, m)
}

fn ensure_hermitian(op: &DenseOperator) -> Result<()> {
    let dev = op.hermitian_deviation();
    let scale = op.matrix().iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    if dev > 1e-12 * scale {
        return Err(Error::NotHermitian {
            kind: "Hermitian",
            deviation: dev,
        });
    }
    Ok(())
}

/// All eigenvalues of a Hermitian operator, ascending.
pub fn hermitian_eigenvalues(op: &DenseOperator) -> Result<Vec<f64>> {
    ensure_hermitian(op)?;
    let mut values: Vec<f64> = if op.is_real(0.0) {
        SymmetricEigen::new(op.real_part())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    } else {
        SymmetricEigen::new(op.matrix().clone())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Smallest eigenvalue of a Hermitian operator.
pub fn min_eigenvalue(op: &DenseOperator) -> Result<f64> {
    Ok(hermitian_eigenvalues(op)?[0])
}

/// Dense PSD test of `T^{mask}(ρ)`.
pub fn dense_ppt_check(
    rho: &DenseOperator,
    mask: &TransposeMask,
    tol_rel: f64,
) -> Result<PsdCheck> {
    let pt = partial_transpose(rho, mask)?;
    Ok(PsdCheck::from_eigenvalues(
        &hermitian_eigenvalues(&pt)?,
        tol_rel,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaskAgreement {
    pub mask_a: String,
    pub mask_b: String,
    pub min_eigenvalue_a: f64,
    pub min_eigenvalue_b: f64,
    pub difference: f64,
    pub status_a: PsdStatus,
    pub status_b: PsdStatus,
    pub agree: bool,
}

/// Compare dense PPT verdicts for two masks with the same weight.
pub fn check_mask_equivalence(
    spec: &StateSpec,
    mask_a: &TransposeMask,
    mask_b: &TransposeMask,
    tol_rel: f64,
) -> Result<MaskAgreement> {
    if mask_a.weight() != mask_b.weight() {
        return Err(Error::WeightMismatch(mask_a.weight(), mask_b.weight()));
    }
    let rho = build_state(spec)?;
    let a = dense_ppt_check(&rho, mask_a, tol_rel)?;
    let b = dense_ppt_check(&rho, mask_b, tol_rel)?;
    let (la, lb) = (
        a.min_eigenvalue.unwrap_or(0.0),
        b.min_eigenvalue.unwrap_or(0.0),
    );
    Ok(MaskAgreement {
        mask_a: mask_a.to_string(),
        mask_b: mask_b.to_string(),
        min_eigenvalue_a: la,
        min_eigenvalue_b: lb,
        difference: (la - lb).abs(),
        status_a: a.status,
        status_b: b.status,
        agree: a.status == b.status,
    })
}

/// `P_D ρ P_D` without forming `P_D`: the entry at `(a, b)` is the average of
/// `ρ` over the block of indices with digit sums `(|a|, |b|)`.
pub fn d_symmetrize(rho: &DenseOperator) -> Result<DenseOperator> {
    let (n, d) = (rho.parties(), rho.local_dim());
    let sums = digit_sums(n, d);
    let counts = TupleIndexer::new(n, d)?;
    let levels = n * (d - 1) + 1;
    let mut block = DMatrix::<C64>::zeros(levels, levels);
    for (i, &si) in sums.iter().enumerate() {
        for (j, &sj) in sums.iter().enumerate() {
            block[(si, sj)] += rho.entry(i, j);
        }
    }
    for k in 0..levels {
        for l in 0..levels {
            let norm = (counts.count(n, k as i64) * counts.count(n, l as i64)) as f64;
            block[(k, l)] /= norm;
        }
    }
    let dim = rho.dim();
    DenseOperator::new(
        n,
        d,
        DMatrix::from_fn(dim, dim, |i, j| block[(sums[i], sums[j])]),
    )
}

/// `‖ρ - P_D ρ P_D‖_F < tol ‖ρ‖_F`.
pub fn check_d_symmetry(rho: &DenseOperator, tol: f64) -> Result<bool> {
    let projected = d_symmetrize(rho)?;
    Ok(rho.frobenius_distance(&projected) < tol * rho.frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{d_symmetrizer, sigma_z};

    fn basis_op(n: usize, d: usize, entries: &[(usize, usize, f64)]) -> DenseOperator {
        let mut op = DenseOperator::zeros(n, d).unwrap();
        for &(i, j, v) in entries {
            op.matrix_mut()[(i, j)] = C64::new(v, 0.0);
        }
        op
    }

    #[test]
    fn mask_parsing() {
        let m = TransposeMask::parse("101").unwrap();
        assert_eq!(m.weight(), 2);
        assert_eq!(m.to_string(), "101");
        assert!(!m.is_leading());
        assert!(TransposeMask::first(2, 4).is_leading());
        assert!(TransposeMask::parse("10x").is_err());
        assert_eq!(TransposeMask::all_with_weight(4, 2).len(), 6);
    }

    #[test]
    fn transpose_first_qubit() {
        // |01⟩⟨10| -> |11⟩⟨00|
        let rho = basis_op(2, 2, &[(1, 2, 1.0)]);
        let pt = partial_transpose(&rho, &TransposeMask::parse("10").unwrap()).unwrap();
        assert_eq!(pt, basis_op(2, 2, &[(3, 0, 1.0)]));
        let id = partial_transpose(&rho, &TransposeMask::parse("00").unwrap()).unwrap();
        assert_eq!(id, rho);
        let twice = partial_transpose(&pt, &TransposeMask::parse("10").unwrap()).unwrap();
        assert_eq!(twice, rho);
        assert!(partial_transpose(&rho, &TransposeMask::parse("1").unwrap()).is_err());
    }

    #[test]
    fn full_transpose_is_matrix_transpose() {
        let spec = StateSpec::new(2, 3, vec![0.2, 0.5, 0.1, 0.9, 0.3]).unwrap();
        let mut rho = build_state(&spec).unwrap();
        rho.matrix_mut()[(1, 5)] = C64::new(0.3, 0.7);
        let pt = partial_transpose(&rho, &TransposeMask::parse("11").unwrap()).unwrap();
        assert_eq!(pt.matrix(), &rho.matrix().transpose());
    }

    #[test]
    fn permutation_examples() {
        let id = permutation_operator(&[0, 1, 2], 2).unwrap();
        assert_eq!(id, DenseOperator::identity(3, 2).unwrap());
        let swap = permutation_operator(&[1, 0], 2).unwrap();
        // |01⟩ -> |10⟩
        assert_eq!(swap.entry(2, 1), C64::new(1.0, 0.0));
        assert_eq!(swap.entry(1, 1), C64::new(0.0, 0.0));
        assert!(permutation_operator(&[0, 0], 2).is_err());
        assert!(permutation_operator(&[0, 2], 2).is_err());
    }

    #[test]
    fn permutation_factor_placement() {
        // factor in slot 0 goes to slot sigma[0] = 2
        let f = permutation_operator(&[2, 0, 1], 3).unwrap();
        let src = crate::combinatorics::tuple_to_index(&[2, 1, 0], 3).unwrap();
        let dst = crate::combinatorics::tuple_to_index(&[1, 0, 2], 3).unwrap();
        assert_eq!(f.entry(dst, src), C64::new(1.0, 0.0));
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(
            min_eigenvalue(&DenseOperator::identity(2, 2).unwrap()).unwrap(),
            1.0
        );
        let x = basis_op(2, 2, &[(1, 2, 1.0), (2, 1, 1.0)]);
        assert!((min_eigenvalue(&x).unwrap() + 1.0).abs() < 1e-14);
        let bad = basis_op(2, 2, &[(1, 2, 1.0)]);
        assert!(matches!(
            min_eigenvalue(&bad),
            Err(Error::NotHermitian { .. })
        ));
        let mut y = DenseOperator::zeros(1, 2).unwrap();
        y.matrix_mut()[(0, 1)] = C64::new(0.0, -1.0);
        y.matrix_mut()[(1, 0)] = C64::new(0.0, 1.0);
        assert!((min_eigenvalue(&y).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn d_symmetry_checks() {
        let spec = StateSpec::new(3, 2, vec![0.4, 0.1, 0.7, 0.2]).unwrap();
        assert!(check_d_symmetry(&build_state(&spec).unwrap(), 1e-12).unwrap());
        let s = sigma_z(3, 3, C64::new(-0.4, 1.3)).unwrap();
        assert!(check_d_symmetry(&s, 1e-12).unwrap());
        let off = basis_op(2, 2, &[(1, 1, 1.0)]);
        assert!(!check_d_symmetry(&off, 1e-12).unwrap());
    }

    #[test]
    fn fast_d_symmetrize_matches_projector() {
        let mut rho = basis_op(2, 3, &[(1, 1, 1.0), (4, 2, 0.5), (2, 4, 0.5), (7, 0, 2.0)]);
        rho.matrix_mut()[(3, 8)] = C64::new(0.1, 0.4);
        let pd = d_symmetrizer(2, 3).unwrap();
        let slow = &(&pd * &rho) * &pd;
        assert!(d_symmetrize(&rho).unwrap().frobenius_distance(&slow) < 1e-14);
    }

    #[test]
    fn equal_masks_trivially_agree() {
        let spec = StateSpec::new(3, 2, vec![0.4, 0.1, 0.7, 0.2]).unwrap();
        let m = TransposeMask::parse("010").unwrap();
        let r = check_mask_equivalence(&spec, &m, &m, 1e-10).unwrap();
        assert!(r.agree);
        assert_eq!(r.difference, 0.0);
        assert!(matches!(
            check_mask_equivalence(&spec, &m, &TransposeMask::parse("011").unwrap(), 1e-10),
            Err(Error::WeightMismatch(1, 2))
        ));
    }
}
