//! Dense brute-force checks: every partial transpose of a four-qubit state,
//! grouped by mask weight.

use dsym::oracle::{check_d_symmetry, dense_ppt_check, permutation_operator, TransposeMask};
use dsym::{build_state, StateSpec};

fn main() -> dsym::Result<()> {
    let spec = StateSpec::new(4, 2, vec![1.0, 0.0, 0.3, 0.0, 1.0])?;
    let rho = build_state(&spec)?;
    println!("D-symmetric: {}", check_d_symmetry(&rho, 1e-12)?);

    let f = permutation_operator(&[1, 2, 3, 0], 2)?;
    println!(
        "commutes with cyclic shift: {:.1e}",
        (&f * &rho).frobenius_distance(&(&rho * &f))
    );

    for w in 1..4 {
        for mask in TransposeMask::all_with_weight(4, w) {
            let c = dense_ppt_check(&rho, &mask, 1e-10)?;
            println!("  {mask}: {:?} {:+.6}", c.status, c.min_eigenvalue.unwrap());
        }
    }
    Ok(())
}
