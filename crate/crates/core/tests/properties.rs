use approx::assert_abs_diff_eq;
use frio_coherence::analysis::{conc_coherence_closed, frio_coherence_closed, me_coherence_closed};
use frio_coherence::ensemble::{
    coefficient_family, distinguishability, input_density_matrix, RandomEnsemble,
};
use frio_coherence::linalg::{von_neumann_entropy, CMatrix};
use frio_coherence::povm::{
    concatenated_povm, frio_povm, me_povm, povm_coherence, separation_povm,
};
use frio_coherence::separation::separation_coherence;
use frio_coherence::{CoherenceReport, DensityMatrix, EnsembleSpec};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = EnsembleSpec> {
    (3usize..=5)
        .prop_flat_map(|n| prop::collection::vec(0.05f64..1.0, n))
        .prop_map(|a| EnsembleSpec::normalized(a).unwrap())
}

fn dual_path_gap(spec: &EnsembleSpec, xi: f64) -> f64 {
    let rho = input_density_matrix(spec);
    let pairs = [
        (
            povm_coherence(&rho, &separation_povm(spec, xi).unwrap()).unwrap(),
            separation_coherence(spec, xi).unwrap(),
        ),
        (
            povm_coherence(&rho, &frio_povm(spec, xi).unwrap()).unwrap(),
            frio_coherence_closed(spec, xi).unwrap(),
        ),
        (
            povm_coherence(&rho, &concatenated_povm(spec, xi).unwrap()).unwrap(),
            conc_coherence_closed(spec, xi).unwrap(),
        ),
        (
            povm_coherence(&rho, &me_povm(spec).unwrap()).unwrap(),
            me_coherence_closed(&rho, spec.n_states()).unwrap(),
        ),
    ];
    pairs.iter().map(|(g, c)| (g - c).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_forms_match_generic_evaluator(spec in spec_strategy(), xi in 0.0f64..=1.0) {
        prop_assert!(dual_path_gap(&spec, xi) <= 1e-9);
    }

    #[test]
    fn coherences_within_outcome_bounds(spec in spec_strategy(), xi in 0.0f64..=1.0) {
        let r = CoherenceReport::compute(&spec, xi, false).unwrap();
        let n = spec.n_states() as f64;
        prop_assert!(r.c_sep >= 0.0 && r.c_sep <= 1.0 + 1e-9);
        prop_assert!(r.c_me <= n.log2() + 1e-9);
        prop_assert!(r.c_frio <= (n + 1.0).log2() + 1e-9);
        prop_assert!(r.c_conc <= (2.0 * n).log2() + 1e-9);
        prop_assert!(r.c_conc >= r.c_frio - 1e-9);
    }

    #[test]
    fn failure_me_coherence_independent_of_xi(spec in spec_strategy()) {
        let values: Vec<f64> = [0.1, 0.3, 0.5, 0.7, 0.9]
            .iter()
            .filter_map(|&xi| CoherenceReport::compute(&spec, xi, false).unwrap().c_me_f)
            .collect();
        for v in &values {
            prop_assert!((v - values[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_is_unitarily_invariant(spec in spec_strategy(), seed in any::<u64>()) {
        let rho = input_density_matrix(&spec);
        let u = random_unitary(spec.n_states(), seed);
        let rotated = DensityMatrix::from_hermitian_part(&(&u * rho.matrix() * u.adjoint())).unwrap();
        prop_assert!((von_neumann_entropy(&rotated) - von_neumann_entropy(&rho)).abs() < 1e-10);
    }
}

fn random_unitary(n: usize, seed: u64) -> CMatrix {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    g.qr().q()
}

#[test]
fn closed_forms_match_generic_at_large_n() {
    for spec in RandomEnsemble::new(50, 3).unwrap().sample(4, 8) {
        for xi in [0.01, 0.6, 1.0] {
            assert!(dual_path_gap(&spec, xi) <= 1e-9);
        }
    }
}

#[test]
fn me_coherence_falls_as_families_become_distinguishable() {
    for n in [3, 4] {
        for a0 in [0.192, 0.385, 1.0 / 3f64.sqrt()] {
            let curve: Vec<(f64, f64)> = (1..=20)
                .map(|i| {
                    let s = coefficient_family(a0, a0 * i as f64 / 20.0, n).unwrap();
                    let c = me_coherence_closed(&input_density_matrix(&s), n).unwrap();
                    (distinguishability(&s), c)
                })
                .collect();
            for w in curve.windows(2) {
                assert!(w[1].0 > w[0].0 && w[1].1 < w[0].1, "N={n} a0={a0}");
            }
        }
    }
}

#[test]
fn concatenated_gap_is_strict_when_failure_carries_weight() {
    for spec in RandomEnsemble::new(4, 3).unwrap().sample(50, 21) {
        for xi in [0.2, 0.8] {
            let r = CoherenceReport::compute(&spec, xi, false).unwrap();
            if r.failure_prob > 1e-6 {
                assert!(r.c_conc - r.c_frio > 0.0);
                assert_abs_diff_eq!(r.c_conc - r.c_frio, r.c_extra, epsilon = 1e-9);
            }
        }
    }
}
