//! Product-state ensemble for a geometric coefficient sequence p_k = t^k,
//! checked against the dense state.

use dsym::decompose::geometric_ensemble;
use dsym::{build_state, StateSpec};

fn main() -> dsym::Result<()> {
    let (n, d) = (3, 3);
    for t in [0.0, 0.3, 1.0, 2.5] {
        let e = geometric_ensemble(n, d, t)?;
        let target = build_state(&StateSpec::geometric(n, d, t)?)?;
        println!(
            "t = {t}: {} terms, weight {:.4}, error {:.1e}",
            e.terms.len(),
            e.total_weight(),
            e.to_operator()?.frobenius_distance(&target)
        );
    }
    let unit = geometric_ensemble(2, 2, 0.5)?.normalized();
    println!(
        "normalized weights: {:?}",
        unit.terms.iter().map(|t| t.weight).collect::<Vec<_>>()
    );
    Ok(())
}
