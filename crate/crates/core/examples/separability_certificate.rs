//! Decide separability and print the certificate as JSON.
//!
//! Pass coefficients on the command line, e.g.
//! `cargo run --example separability_certificate -- 2 3 1 0.5 0.5 0.5 1`
//! (N, d, then p_0 ... p_{N(d-1)}).

use dsym::decompose::separable_ensemble;
use dsym::{is_separable, SeparabilityStatus, StateSpec, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let spec = if args.len() >= 2 {
        StateSpec::new(args[0] as usize, args[1] as usize, args[2..].to_vec())?
    } else {
        StateSpec::new(2, 3, vec![1.0, 0.5, 0.5, 0.5, 1.0])?
    };
    let tol = Tolerances::default();
    let verdict = is_separable(&spec, tol)?;
    println!("{:?}", verdict.verdict);
    match verdict.verdict {
        SeparabilityStatus::Separable => {
            let e = separable_ensemble(&spec, tol)?;
            println!("{}", serde_json::to_string_pretty(&e)?);
        }
        SeparabilityStatus::Entangled => {
            println!("{}", serde_json::to_string_pretty(&verdict.witness)?);
        }
        SeparabilityStatus::Marginal => println!("too close to the boundary to decide"),
    }
    Ok(())
}
