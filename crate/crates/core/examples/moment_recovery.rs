//! Recover an atomic representing measure from a moment sequence.

use dsym::moment::{is_generalized_moment_solution, recover_atomic_measure};

fn main() -> dsym::Result<()> {
    // 0.5 δ_0 + δ_{0.7} + 0.25 δ_{2}, six moments, extra mass 0.1 on the last
    let atoms = [(0.0, 0.5), (0.7, 1.0), (2.0, 0.25)];
    let mut p: Vec<f64> = (0..7)
        .map(|k| atoms.iter().map(|(t, w)| w * f64::powi(*t, k)).sum())
        .collect();
    p[6] += 0.1;

    let v = is_generalized_moment_solution(&p, 1e-10)?;
    println!("moment sequence: {:?} (strict: {})", v.status, v.strict);

    let mu = recover_atomic_measure(&p, 1e-9)?;
    for a in &mu.atoms {
        println!("  node {:.6}  weight {:.6}", a.node, a.weight);
    }
    println!(
        "top mass {:.6}, residual {:.1e}",
        mu.top_mass, mu.moment_residual
    );
    Ok(())
}
