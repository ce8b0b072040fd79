//! Generalized binomial coefficients `{N choose k}_d` and digit tuples with
//! a fixed digit sum.
//!
//! `{N choose k}_d` counts the tuples `(i_1, ..., i_N)` with entries in
//! `0..d` whose entries sum to `k`. Tuples are always listed in
//! lexicographic order and mapped to basis indices big-endian, so the first
//! party is the most significant digit.

use crate::error::{Error, Result};

/// Count table `{n choose k}_d` for `1 <= n <= N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleIndexer {
    parties: usize,
    local_dim: usize,
    // rows[n][k] for n in 0..=parties; row 0 is the empty tuple.
    rows: Vec<Vec<u64>>,
}

impl TupleIndexer {
    pub fn new(parties: usize, local_dim: usize) -> Result<Self> {
        if parties < 1 {
            return Err(Error::InvalidParameter(format!(
                "particle count must be >= 1, got {parties}"
            )));
        }
        if local_dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "local dimension must be >= 2, got {local_dim}"
            )));
        }
        // Every count is bounded by d^N, so it is enough to reject d^N overflow.
        if (local_dim as u64).checked_pow(parties as u32).is_none() {
            return Err(Error::InvalidParameter(format!(
                "{local_dim}^{parties} overflows 64-bit counts"
            )));
        }
        let top = local_dim - 1;
        let mut rows: Vec<Vec<u64>> = vec![vec![1]];
        for n in 1..=parties {
            let prev = &rows[n - 1];
            let row: Vec<u64> = (0..=n * top)
                .map(|k| {
                    (0..=k.min(top))
                        .filter_map(|j| prev.get(k - j))
                        .sum::<u64>()
                })
                .collect();
            rows.push(row);
        }
        Ok(Self {
            parties,
            local_dim,
            rows,
        })
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// Largest digit sum, `N(d-1)`.
    pub fn max_sum(&self) -> usize {
        self.parties * (self.local_dim - 1)
    }

    /// `{n choose k}_d`, zero outside `0 <= k <= n(d-1)` or for `n > N`.
    pub fn count(&self, n: usize, k: i64) -> u64 {
        if k < 0 {
            return 0;
        }
        self.rows
            .get(n)
            .and_then(|row| row.get(k as usize))
            .copied()
            .unwrap_or(0)
    }

    /// The full row `{N choose k}_d` for `k = 0..=N(d-1)`.
    pub fn row(&self) -> &[u64] {
        &self.rows[self.parties]
    }
}

/// `{N choose k}_d`, the number of `N`-tuples over `0..d` summing to `k`.
pub fn count_compositions(parties: usize, k: i64, local_dim: usize) -> Result<u64> {
    Ok(TupleIndexer::new(parties, local_dim)?.count(parties, k))
}

/// All `N`-tuples over `0..d` with digit sum `k`, lexicographically ordered.
pub fn enumerate_tuples(parties: usize, local_dim: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    if parties < 1 || local_dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "need N >= 1 and d >= 2, got N = {parties}, d = {local_dim}"
        )));
    }
    let max = parties * (local_dim - 1);
    if k > max {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            lo: 0,
            hi: max as i64,
        });
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(parties);
    push_tuples(parties, local_dim - 1, k, &mut prefix, &mut out);
    Ok(out)
}

fn push_tuples(
    remaining: usize,
    top: usize,
    sum: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        if sum == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let rest_max = (remaining - 1) * top;
    let lo = sum.saturating_sub(rest_max);
    for digit in lo..=top.min(sum) {
        prefix.push(digit);
        push_tuples(remaining - 1, top, sum - digit, prefix, out);
        prefix.pop();
    }
}

/// Big-endian mixed-radix index `sum_r t_r d^(N-r)`.
pub fn tuple_to_index(tuple: &[usize], local_dim: usize) -> Result<usize> {
    tuple.iter().try_fold(0usize, |acc, &digit| {
        if digit >= local_dim {
            return Err(Error::OutOfRange {
                what: "tuple entry",
                value: digit as i64,
                lo: 0,
                hi: local_dim as i64 - 1,
            });
        }
        acc.checked_mul(local_dim)
            .and_then(|v| v.checked_add(digit))
            .ok_or_else(|| Error::InvalidParameter("tuple index overflows usize".into()))
    })
}

/// Inverse of [`tuple_to_index`] for a fixed tuple length.
pub fn index_to_tuple(mut index: usize, parties: usize, local_dim: usize) -> Vec<usize> {
    let mut tuple = vec![0; parties];
    for slot in tuple.iter_mut().rev() {
        *slot = index % local_dim;
        index /= local_dim;
    }
    tuple
}

/// Digit sum `|i|` of every basis index `0..d^N`.
pub(crate) fn digit_sums(parties: usize, local_dim: usize) -> Vec<usize> {
    let dim = local_dim.pow(parties as u32);
    let mut sums = vec![0usize; dim];
    // sums[i] = sums[i / d] + i % d, filled in increasing order.
    for i in 1..dim {
        sums[i] = sums[i / local_dim] + i % local_dim;
    }
    sums
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_examples() {
        assert_eq!(count_compositions(3, 0, 3).unwrap(), 1);
        assert_eq!(count_compositions(4, 2, 2).unwrap(), 6);
        assert_eq!(count_compositions(2, 2, 3).unwrap(), 3);
    }

    #[test]
    fn count_out_of_range_is_zero() {
        assert_eq!(count_compositions(3, -1, 3).unwrap(), 0);
        assert_eq!(count_compositions(3, 7, 3).unwrap(), 0);
    }

    #[test]
    fn count_rejects_bad_parameters() {
        assert!(count_compositions(0, 0, 3).is_err());
        assert!(count_compositions(3, 0, 1).is_err());
        assert!(TupleIndexer::new(64, 3).is_err());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_tuples(2, 2, 1).unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
        assert_eq!(
            enumerate_tuples(2, 3, 2).unwrap(),
            vec![vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(enumerate_tuples(3, 2, 3).unwrap(), vec![vec![1, 1, 1]]);
        assert!(enumerate_tuples(3, 2, 4).is_err());
    }

    #[test]
    fn index_examples() {
        assert_eq!(tuple_to_index(&[0, 1], 2).unwrap(), 1);
        assert_eq!(tuple_to_index(&[1, 0], 2).unwrap(), 2);
        assert_eq!(tuple_to_index(&[2, 1], 3).unwrap(), 7);
        assert!(tuple_to_index(&[3, 0], 3).is_err());
        assert_eq!(index_to_tuple(7, 2, 3), vec![2, 1]);
    }

    #[test]
    fn counts_match_enumeration() {
        for n in 1..=6 {
            for d in 2..=4 {
                let idx = TupleIndexer::new(n, d).unwrap();
                let mut total = 0u64;
                for k in 0..=n * (d - 1) {
                    let listed = enumerate_tuples(n, d, k).unwrap();
                    assert_eq!(
                        listed.len() as u64,
                        idx.count(n, k as i64),
                        "N={n} d={d} k={k}"
                    );
                    assert!(listed.windows(2).all(|w| w[0] < w[1]));
                    total += idx.count(n, k as i64);
                    assert_eq!(
                        idx.count(n, k as i64),
                        idx.count(n, (n * (d - 1) - k) as i64)
                    );
                }
                assert_eq!(total, (d as u64).pow(n as u32));
            }
        }
    }

    #[test]
    fn qubits_give_binomials() {
        for n in 1..=12usize {
            let idx = TupleIndexer::new(n, 2).unwrap();
            let mut binom = 1u64;
            for k in 0..=n {
                assert_eq!(idx.count(n, k as i64), binom);
                binom = binom * (n - k) as u64 / (k + 1) as u64;
            }
        }
    }

    #[test]
    fn digit_sums_match_tuples() {
        let sums = digit_sums(3, 3);
        for (i, &s) in sums.iter().enumerate() {
            assert_eq!(s, index_to_tuple(i, 3, 3).iter().sum::<usize>());
        }
    }
}
