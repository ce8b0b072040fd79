//! Classification of diagonal restricted-Dicke states.
//!
//! A state on `N` parties of local dimension `d` is described by nonnegative
//! coefficients `p_0, ..., p_{N(d-1)}` and reads
//! `ρ = Σ_k p_k |R_k⟩⟨R_k|`, where `|R_k⟩` is the uniform superposition of
//! all basis vectors whose digits sum to `k`. The crate decides
//!
//! - m-PPT-ness through a family of small Hankel matrices ([`ppt`]),
//! - full separability through the truncated Stieltjes moment problem
//!   ([`moment`]),
//!
//! and backs each verdict with a certificate: an explicit product ensemble
//! ([`decompose`]) or a detecting witness ([`witnesses`]). The [`oracle`]
//! module recomputes the same quantities with dense matrices for small sizes.
//!
//! ```
//! use dsym::{is_m_ppt, is_separable, PptVerdict, SeparabilityStatus, StateSpec, Tolerances};
//!
//! let p = vec![1.0, 0.25, 0.125, 1.0 / 9.0, 0.125, 0.25, 1.0];
//! let spec = StateSpec::new(3, 3, p).unwrap();
//! assert_eq!(is_m_ppt(&spec, 1, 1e-10).unwrap().verdict, PptVerdict::Ppt);
//! let sep = is_separable(&spec, Tolerances::default()).unwrap();
//! assert_eq!(sep.verdict, SeparabilityStatus::Entangled);
//! ```

pub mod cli;
pub mod combinatorics;
pub mod decompose;
pub mod error;
pub mod linalg;
pub mod moment;
pub mod operator;
pub mod oracle;
pub mod ppt;
pub mod states;
pub mod witnesses;

pub use decompose::{geometric_ensemble, separable_ensemble, SeparableEnsemble};
pub use error::{Error, Result};
pub use linalg::{PsdCheck, PsdStatus, Tolerances};
pub use moment::{
    is_generalized_moment_solution, is_separable, recover_atomic_measure, MeasureAtoms,
    MomentStatus, SeparabilityStatus, SeparabilityVerdict,
};
pub use operator::{DenseOperator, C64};
pub use oracle::{partial_transpose, TransposeMask};
pub use ppt::{is_m_ppt, PptReport, PptVerdict};
pub use states::{build_state, StateSpec};
pub use witnesses::{find_detecting_witness, WitnessFamily, WitnessSpec};
