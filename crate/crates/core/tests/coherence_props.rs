use naqc_core::coherence::{
    coherence, complementarity_sum, purity_bound, qubit_l1_closed_form,
    qubit_relative_entropy_closed_form, Axis, CoherenceMeasure,
};
use naqc_core::mub::{mubs_prime_power, MubFamily};
use naqc_core::oracle::{sample_state, trial_rng, StateKind};
use naqc_core::qmatrix::{bloch_to_state, BlochVector, DensityMatrix};
use proptest::prelude::*;

fn kind(mixed: bool) -> StateKind {
    if mixed {
        StateKind::GinibreMixed
    } else {
        StateKind::HaarPure
    }
}

fn bloch_strategy() -> impl Strategy<Value = BlochVector> {
    (0.0f64..=1.0, -1.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, ct, phi)| {
        let st = (1.0 - ct * ct).sqrt();
        BlochVector::new(r * st * phi.cos(), r * st * phi.sin(), r * ct).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn coherence_is_convex_under_mixing(
        seed in any::<u64>(),
        d in 2usize..=3,
        p in 0.0f64..=1.0,
        m1 in any::<bool>(),
        m2 in any::<bool>(),
    ) {
        let mut rng = trial_rng(seed, 0);
        let a = sample_state(&mut rng, d, kind(m1));
        let b = sample_state(&mut rng, d, kind(m2));
        let mix = DensityMatrix::mix(p, &a, &b).unwrap();
        let fam = mubs_prime_power(d).unwrap();
        for basis in fam.bases() {
            for m in [CoherenceMeasure::l1(), CoherenceMeasure::relative_entropy()] {
                let lhs = coherence(&mix, basis, m).unwrap();
                let rhs = p * coherence(&a, basis, m).unwrap() + (1.0 - p) * coherence(&b, basis, m).unwrap();
                prop_assert!(lhs <= rhs + 1e-9, "{m}: {lhs} > {rhs}");
            }
        }
    }

    #[test]
    fn closed_forms_agree(r in bloch_strategy(), k in 0usize..3) {
        let axis = Axis::ALL[k];
        let rho = bloch_to_state(r);
        let basis = MubFamily::pauli().basis(k).clone();
        let l1 = coherence(&rho, &basis, CoherenceMeasure::l1()).unwrap();
        prop_assert!((l1 - qubit_l1_closed_form(r, axis)).abs() < 1e-10);
        let re = coherence(&rho, &basis, CoherenceMeasure::relative_entropy()).unwrap();
        prop_assert!((re - qubit_relative_entropy_closed_form(r, axis)).abs() < 1e-9);
    }
}

#[test]
fn qubit_relative_entropy_complementarity() {
    let fam = MubFamily::pauli();
    let mut max = 0.0f64;
    for t in 0..100_000u64 {
        let rho = sample_state(&mut trial_rng(17, t), 2, kind(t % 2 == 1));
        max = max.max(complementarity_sum(&rho, &fam, CoherenceMeasure::relative_entropy()).unwrap());
    }
    assert!(max <= 2.0 + 1e-9, "max {max}");
}

#[test]
fn purity_resolved_bound() {
    for d in [2usize, 3, 5] {
        let fam = mubs_prime_power(d).unwrap();
        let m = CoherenceMeasure::l1_normalized();
        for t in 0..10_000u64 {
            let rho = sample_state(&mut trial_rng(d as u64 * 1_000_003, t), d, StateKind::GinibreMixed);
            let s = complementarity_sum(&rho, &fam, m).unwrap();
            assert!(s <= purity_bound(&rho) + 1e-9, "d = {d}, trial {t}: {s}");
        }
    }
}

#[test]
fn pure_qutrit_complementarity_is_at_most_three() {
    let fam = mubs_prime_power(3).unwrap();
    for t in 0..1000u64 {
        let rho = sample_state(&mut trial_rng(99, t), 3, StateKind::HaarPure);
        let s = complementarity_sum(&rho, &fam, CoherenceMeasure::l1_normalized()).unwrap();
        assert!(s <= 3.0 + 1e-9);
    }
}
