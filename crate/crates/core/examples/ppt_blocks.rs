//! Block structure of the partial transpose: the Hankel blocks that decide
//! m-PPT, and the dense operators they come from.

use dsym::oracle::{partial_transpose, TransposeMask};
use dsym::ppt::{block_decomposition, deciding_shifts, hankel_block, shift_range};
use dsym::{build_state, DenseOperator, StateSpec};

fn main() -> dsym::Result<()> {
    let spec = StateSpec::new(4, 2, vec![0.9, 0.2, 0.4, 0.3, 0.8])?;
    let (n, d) = (spec.parties(), spec.local_dim());

    for m in 1..=n / 2 {
        let (lo, hi) = shift_range(n, d, m);
        println!(
            "m = {m}: shifts {lo}..={hi}, deciding {:?}",
            deciding_shifts(n, d, m)
        );
        for s in deciding_shifts(n, d, m) {
            let b = hankel_block(spec.coeffs(), n, d, m, s)?;
            println!("  P_{s} (k, l in {}..={}):{}", b.lo, b.hi, b.matrix);
        }
    }

    let m = 2;
    let rho = build_state(&spec)?;
    let pt = partial_transpose(&rho, &TransposeMask::first(m, n))?;
    let blocks = block_decomposition(&spec, m)?;
    let mut sum = DenseOperator::zeros(n, d)?;
    for (_, a) in &blocks {
        sum = &sum + a;
    }
    println!(
        "{} blocks; |Σ A_s - Γ(ρ)| = {:.1e}",
        blocks.len(),
        sum.frobenius_distance(&pt)
    );
    Ok(())
}
