mod common;

use dsym::decompose::separable_ensemble;
use dsym::linalg::is_psd;
use dsym::moment::{is_generalized_moment_solution, recover_atomic_measure, MomentStatus};
use dsym::oracle::{
    check_d_symmetry, dense_ppt_check, hermitian_eigenvalues, partial_transpose,
    permutation_operator, TransposeMask,
};
use dsym::ppt::{hankel_block, is_m_ppt, shift_range, PptVerdict};
use dsym::states::{build_state, sigma_z, top_state, StateSpec};
use dsym::witnesses::{find_detecting_witness, witness_value_fast, WitnessFamily, WitnessSpec};
use dsym::{is_separable, PsdStatus, SeparabilityStatus, Tolerances, C64};
use proptest::prelude::*;

use common::RandomMeasure;

const TOL: f64 = 1e-10;

/// `(N, d, p)` with `d^N <= max_dim` and uniform coefficients in `[0, 1]`.
fn spec_strategy(
    max_parties: usize,
    max_local: usize,
    max_dim: usize,
) -> impl Strategy<Value = StateSpec> {
    let mut sizes = Vec::new();
    for n in 2..=max_parties {
        for d in 2..=max_local {
            if d.pow(n as u32) <= max_dim {
                sizes.push((n, d));
            }
        }
    }
    prop::sample::select(sizes).prop_flat_map(|(n, d)| {
        prop::collection::vec(0.0f64..1.0, n * (d - 1) + 1)
            .prop_map(move |p| StateSpec::new(n, d, p).unwrap())
    })
}

/// Moment sequences of random atomic measures, i.e. separable specs.
fn feasible_strategy(
    max_parties: usize,
    max_local: usize,
    max_dim: usize,
) -> impl Strategy<Value = StateSpec> {
    (spec_strategy(max_parties, max_local, max_dim), any::<u64>()).prop_map(|(s, seed)| {
        let mut rng = common::rng(seed);
        let mu = RandomMeasure::sample(&mut rng, 4, 2.0, true);
        StateSpec::new(s.parties(), s.local_dim(), mu.moments(s.max_sum())).unwrap()
    })
}

fn complex_unit(len: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_filter_map("zero vector", |v| {
        let v: Vec<C64> = v.into_iter().map(|(a, b)| C64::new(a, b)).collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| v.into_iter().map(|c| c / norm).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fast_ppt_matches_dense_transpose(spec in spec_strategy(5, 3, 4096), pick in any::<prop::sample::Index>()) {
        let m = 1 + pick.index(spec.parties() / 2);
        let fast = is_m_ppt(&spec, m, TOL).unwrap().verdict;
        let rho = build_state(&spec).unwrap();
        let dense = dense_ppt_check(&rho, &TransposeMask::first(m, spec.parties()), TOL).unwrap().status;
        if fast != PptVerdict::Marginal && dense != PsdStatus::Marginal {
            prop_assert_eq!(fast == PptVerdict::Ppt, dense == PsdStatus::Psd);
        }
    }

    #[test]
    fn verdicts_are_scale_invariant(spec in spec_strategy(6, 4, usize::MAX), exp in -6i32..=6) {
        let c = 10f64.powi(exp);
        let scaled = spec.scaled(c).unwrap();
        let tol = Tolerances::default();
        prop_assert_eq!(is_separable(&spec, tol).unwrap().verdict, is_separable(&scaled, tol).unwrap().verdict);
        let m = spec.parties() / 2;
        prop_assert_eq!(is_m_ppt(&spec, m, TOL).unwrap().verdict, is_m_ppt(&scaled, m, TOL).unwrap().verdict);
    }

    #[test]
    fn even_split_matches_moment_test(spec in spec_strategy(8, 4, usize::MAX)) {
        prop_assume!(spec.parties() % 2 == 0);
        let ppt = is_m_ppt(&spec, spec.parties() / 2, TOL).unwrap().verdict;
        let moment = is_generalized_moment_solution(spec.coeffs(), TOL).unwrap().status;
        let expected = match moment {
            MomentStatus::Yes => PptVerdict::Ppt,
            MomentStatus::No => PptVerdict::NotPpt,
            MomentStatus::Marginal => PptVerdict::Marginal,
        };
        prop_assert_eq!(ppt, expected);
    }

    #[test]
    fn deciding_blocks_imply_all_blocks(spec in feasible_strategy(8, 4, usize::MAX)) {
        prop_assume!(spec.parties() % 2 == 0);
        let m = spec.parties() / 2;
        let (lo, hi) = shift_range(spec.parties(), spec.local_dim(), m);
        for s in lo..=hi {
            let b = hankel_block(spec.coeffs(), spec.parties(), spec.local_dim(), m, s).unwrap();
            prop_assert_ne!(is_psd(&b.matrix, TOL).unwrap().status, PsdStatus::NotPsd, "shift {}", s);
        }
    }

    #[test]
    fn moment_round_trip(seed in any::<u64>(), extra in 0usize..3) {
        let mut rng = common::rng(seed);
        let mu = RandomMeasure::sample(&mut rng, 4, 3.0, true);
        let order = 2 * mu.nodes.len() + 1 + extra;
        let p = mu.moments(order);
        let rec = recover_atomic_measure(&p, 1e-9).unwrap();
        let q = rec.moments(order);
        let scale = p.iter().cloned().fold(0.0, f64::max);
        for (a, b) in p.iter().zip(&q) {
            prop_assert!((a - b).abs() <= 1e-8 * scale);
        }
        prop_assert!(rec.atoms.iter().all(|a| a.node >= 0.0 && a.weight > 0.0));
        prop_assert!(rec.atoms.len() <= mu.distinct_atoms());
    }

    #[test]
    fn transpose_is_an_involution(spec in spec_strategy(4, 3, 81), bits in prop::collection::vec(any::<bool>(), 4)) {
        let mask = TransposeMask::new(bits[..spec.parties()].to_vec());
        let rho = build_state(&spec).unwrap();
        let twice = partial_transpose(&partial_transpose(&rho, &mask).unwrap(), &mask).unwrap();
        prop_assert_eq!(twice, rho);
    }

    #[test]
    fn equal_weight_masks_agree(spec in spec_strategy(4, 3, 81), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let n = spec.parties();
        let mut rng = common::rng(seed);
        let w = 1 + seed as usize % (n - 1);
        let masks = TransposeMask::all_with_weight(n, w);
        let a = masks.choose(&mut rng).unwrap();
        let b = masks.choose(&mut rng).unwrap();
        let rho = build_state(&spec).unwrap();
        let (ca, cb) = (dense_ppt_check(&rho, a, TOL).unwrap(), dense_ppt_check(&rho, b, TOL).unwrap());
        prop_assert_eq!(ca.status, cb.status);
        prop_assert!((ca.min_eigenvalue.unwrap() - cb.min_eigenvalue.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn witnesses_are_sound(
        (n, d) in prop::sample::select(vec![(2usize, 2usize), (3, 2), (4, 2), (2, 3), (3, 3), (4, 3)]),
        odd in any::<bool>(),
        seed in any::<u64>(),
        coeffs in complex_unit(5),
    ) {
        let family = if odd { WitnessFamily::U } else { WitnessFamily::V };
        let coeffs = coeffs[..family.coeff_len(n, d)].to_vec();
        let w = WitnessSpec::new(family, coeffs, n, d).unwrap().operator().unwrap();
        prop_assert!(check_d_symmetry(&w, 1e-12).unwrap());
        let mut rng = common::rng(seed);
        for _ in 0..20 {
            use rand::Rng;
            let z = C64::from_polar(2.0 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
            prop_assert!(w.trace_product(&sigma_z(n, d, z).unwrap()).re >= -1e-10);
        }
        prop_assert!(w.trace_product(&top_state(n, d).unwrap()).re >= -1e-10);
    }

    #[test]
    fn fast_witness_value_matches_trace(spec in spec_strategy(4, 3, 81), odd in any::<bool>(), seed in any::<u64>()) {
        use rand::Rng;
        let family = if odd { WitnessFamily::U } else { WitnessFamily::V };
        let mut rng = common::rng(seed);
        let coeffs: Vec<C64> = (0..family.coeff_len(spec.parties(), spec.local_dim()))
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let w = WitnessSpec::new(family, coeffs, spec.parties(), spec.local_dim()).unwrap();
        let dense = w.operator().unwrap().trace_product(&build_state(&spec).unwrap()).re;
        let fast = witness_value_fast(&w, &spec).unwrap();
        prop_assert!((dense - fast).abs() <= 1e-10 * dense.abs().max(1.0));
    }

    #[test]
    fn witness_found_iff_entangled(spec in spec_strategy(6, 4, usize::MAX)) {
        let v = is_separable(&spec, Tolerances::default()).unwrap();
        let w = find_detecting_witness(&spec, TOL).unwrap();
        match v.verdict {
            SeparabilityStatus::Entangled => {
                let w = w.expect("entangled without witness");
                prop_assert!(w.witness_value.unwrap() < 0.0);
                prop_assert!(witness_value_fast(&w, &spec).unwrap() < 0.0);
            }
            SeparabilityStatus::Separable => prop_assert!(w.is_none()),
            SeparabilityStatus::Marginal => {}
        }
    }

    #[test]
    fn ensembles_close_the_loop(spec in feasible_strategy(4, 3, 81)) {
        let e = separable_ensemble(&spec, Tolerances::default()).unwrap();
        prop_assert!(e.reconstruction_error.unwrap() < 1e-8 * spec.coeffs().iter().cloned().fold(1.0, f64::max));
        let rho = e.to_operator().unwrap();
        let n = spec.parties();
        let sigma: Vec<usize> = (1..n).chain([0]).collect();
        let f = permutation_operator(&sigma, spec.local_dim()).unwrap();
        prop_assert!((&f * &rho).frobenius_distance(&(&rho * &f)) < 1e-10 * rho.frobenius_norm());
        for w in 0..=n {
            for mask in TransposeMask::all_with_weight(n, w) {
                let ev = hermitian_eigenvalues(&partial_transpose(&rho, &mask).unwrap()).unwrap();
                prop_assert!(ev[0] >= -1e-10 * ev[ev.len() - 1].max(1.0));
            }
        }
    }
}
