//! V and U witnesses: nonnegative on every symmetric product state, negative
//! on the entangled state they were built for.

use dsym::states::{sigma_z, top_state};
use dsym::witnesses::{find_detecting_witness, witness_value_fast};
use dsym::{StateSpec, C64};

fn main() -> dsym::Result<()> {
    let spec = StateSpec::new(2, 3, vec![1.0, 0.0, 0.2, 0.0, 1.0])?;
    let Some(w) = find_detecting_witness(&spec, 1e-10)? else {
        println!("no witness: state is not detectably entangled");
        return Ok(());
    };
    println!("family {:?}, coefficients {:?}", w.family, w.coeffs);
    println!("Tr(Wρ) = {:.6}", witness_value_fast(&w, &spec)?);

    let op = w.operator()?;
    let mut lowest = f64::INFINITY;
    for r in [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 4.0] {
        for k in 0..8 {
            let z = C64::from_polar(r, k as f64 * std::f64::consts::FRAC_PI_4);
            lowest = lowest.min(op.trace_product(&sigma_z(2, 3, z)?).re);
        }
    }
    println!("min over sampled product states: {lowest:.3e}");
    println!("top state: {:.3e}", op.trace_product(&top_state(2, 3)?).re);
    Ok(())
}
