//! The three-qutrit state that is PPT across every cut but still entangled.
//!
//! Run with `cargo run --example counterexample`.

use dsym::moment::moment_hankels;
use dsym::oracle::{dense_ppt_check, TransposeMask};
use dsym::{build_state, is_m_ppt, is_separable, StateSpec, Tolerances};

fn main() -> dsym::Result<()> {
    let p = vec![1.0, 0.25, 0.125, 1.0 / 9.0, 0.125, 0.25, 1.0];
    let spec = StateSpec::new(3, 3, p)?;

    let ppt = is_m_ppt(&spec, 1, 1e-10)?;
    println!("1-PPT: {:?}", ppt.verdict);
    for b in &ppt.blocks {
        println!(
            "  block s = {:>2}: {}x{}, min eigenvalue {:.6}",
            b.shift,
            b.size,
            b.size,
            b.min_eigenvalue.unwrap()
        );
    }

    let (even, _) = moment_hankels(spec.coeffs())?;
    println!("4x4 moment Hankel: det {:.4e}", even.determinant());

    let sep = is_separable(&spec, Tolerances::default())?;
    println!(
        "separability: {:?} (decided by {:?})",
        sep.verdict, sep.basis
    );
    if let Some(w) = &sep.witness {
        println!(
            "  witness family {:?}, Tr(Wρ) = {:.6}",
            w.family,
            w.witness_value.unwrap()
        );
    }

    // Dense cross-check: every single-party transpose is positive.
    let rho = build_state(&spec)?;
    for mask in ["100", "010", "001"] {
        let check = dense_ppt_check(&rho, &TransposeMask::parse(mask)?, 1e-10)?;
        println!(
            "  dense mask {mask}: {:?}, min eigenvalue {:.2e}",
            check.status,
            check.min_eigenvalue.unwrap()
        );
    }
    Ok(())
}
