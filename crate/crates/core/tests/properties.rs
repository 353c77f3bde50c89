//! Randomised invariants of the discord and density machinery.

use fermion_discord::agassi;
use fermion_discord::densities::{
    all_pairs_discord, check_canonical, natural_orbitals, overall_entropy, transform_densities,
    DensitySet,
};
use fermion_discord::discord::{self, TwoOrbitalRdm};
use fermion_discord::sampling::{
    random_canonical_transform, random_particle_transform, random_rdm, random_unitary, seeded_rng,
};
use nalgebra::Matrix4;
use num_complex::Complex64;
use proptest::prelude::*;

fn rdm_strategy() -> impl Strategy<Value = TwoOrbitalRdm> {
    (any::<u64>(), 0.0..0.5f64).prop_map(|(seed, zero_prob)| {
        random_rdm(&mut seeded_rng(seed), zero_prob).unwrap()
    })
}

fn occupations(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0..=1.0f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn discord_is_nonnegative_and_bounded(rdm in rdm_strategy()) {
        let d = discord::discord(&rdm);
        prop_assert!(d >= 0.0);
        prop_assert!(d <= discord::mutual_information(&rdm) + 1e-12);
    }

    #[test]
    fn mutual_information_splits(rdm in rdm_strategy()) {
        let i = discord::mutual_information(&rdm);
        let j = discord::classical_correlation(&rdm);
        let d = discord::discord(&rdm);
        prop_assert!((i - j - d).abs() <= 1e-12);
        prop_assert!(j >= -1e-12);
    }

    #[test]
    fn closed_form_eigenvalues_match_numeric(rdm in rdm_strategy()) {
        let m = rdm.to_matrix();
        let mut numeric: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        numeric.sort_by(f64::total_cmp);
        let mut closed = discord::eigenvalues(&rdm).to_vec();
        closed.sort_by(f64::total_cmp);
        for (a, b) in numeric.iter().zip(&closed) {
            prop_assert!((a - b).abs() <= 1e-12, "{numeric:?} vs {closed:?}");
        }
    }

    #[test]
    fn zero_coherence_means_zero_discord(seed in any::<u64>()) {
        let rdm = random_rdm(&mut seeded_rng(seed), 0.0).unwrap();
        let stripped = TwoOrbitalRdm::diagonal(rdm.rho()).unwrap();
        prop_assert_eq!(discord::discord(&stripped), 0.0);
        prop_assert_eq!(discord::discord(&discord::dephase(&rdm)), 0.0);
    }

    #[test]
    fn particle_hole_exchange_preserves_discord(rdm in rdm_strategy()) {
        // n -> 1 - n on both orbitals swaps 00 <-> 11 and 01 <-> 10.
        let [r1, r2, r3, r4] = rdm.rho();
        let flipped = TwoOrbitalRdm::new([r4, r3, r2, r1], rdm.alpha().conj(), rdm.gamma_off().conj()).unwrap();
        prop_assert!((discord::discord(&flipped) - discord::discord(&rdm)).abs() <= 1e-12);
        prop_assert!((discord::mutual_information(&flipped) - discord::mutual_information(&rdm)).abs() <= 1e-12);
    }

    #[test]
    fn matrix_round_trip(rdm in rdm_strategy()) {
        let back = TwoOrbitalRdm::from_matrix(&rdm.to_matrix()).unwrap();
        prop_assert!((back.to_matrix() - rdm.to_matrix()).camax() <= 1e-15);
    }

    #[test]
    fn h_is_increasing(x in 1.0..50.0f64, dx in 1e-3..10.0f64) {
        let a = agassi::h(x).unwrap();
        let b = agassi::h(x + dx).unwrap();
        prop_assert!(b > a);
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn canonicity_is_closed_under_composition(s1 in any::<u64>(), s2 in any::<u64>(), n in 2usize..6) {
        let a = random_canonical_transform(n, &mut seeded_rng(s1)).unwrap();
        let b = random_canonical_transform(n, &mut seeded_rng(s2)).unwrap();
        prop_assert!(check_canonical(&a.compose(&b).unwrap()).unwrap() <= 1e-10);
    }

    #[test]
    fn natural_basis_recovers_occupations(seed in any::<u64>(), p in occupations(5)) {
        let t = random_particle_transform(5, &mut seeded_rng(seed));
        let (gamma, kappa) = transform_densities(&t, &p).unwrap();
        prop_assert!(kappa.camax() <= 1e-12);
        let nat = natural_orbitals(&gamma).unwrap();
        let mut want = p.clone();
        want.sort_by(|a, b| b.total_cmp(a));
        for (got, w) in nat.occupations.iter().zip(&want) {
            prop_assert!((got - w).abs() <= 1e-10);
        }
        // In the natural basis every pair is a product of diagonal states.
        let back = nat.basis.adjoint() * &gamma * &nat.basis;
        let d = DensitySet::from_quasiparticle_vacuum(back, kappa.clone()).unwrap();
        prop_assert!(all_pairs_discord(&d).unwrap().amax() <= 1e-8);
    }

    #[test]
    fn overall_entropy_is_minimal_in_natural_basis(seed in any::<u64>(), p in occupations(4)) {
        let mut rng = seeded_rng(seed);
        let t = random_particle_transform(4, &mut rng);
        let (gamma, _) = transform_densities(&t, &p).unwrap();
        let nat = natural_orbitals(&gamma).unwrap();
        let natural = overall_entropy(&(nat.basis.adjoint() * &gamma * &nat.basis)).unwrap();
        for _ in 0..5 {
            let w = random_unitary(4, &mut rng);
            let rotated = overall_entropy(&(w.adjoint() * &gamma * &w)).unwrap();
            prop_assert!(natural <= rotated + 1e-10);
        }
    }

    #[test]
    fn quasiparticle_vacua_assemble_valid_states(seed in any::<u64>(), p in occupations(4)) {
        let t = random_canonical_transform(4, &mut seeded_rng(seed)).unwrap();
        let occ: Vec<f64> = p.iter().map(|x| x.round()).collect();
        let (gamma, kappa) = transform_densities(&t, &occ).unwrap();
        let d = DensitySet::from_quasiparticle_vacuum(gamma, kappa).unwrap();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let rdm = d.assemble_rdm(i, j).unwrap();
                let m: Matrix4<Complex64> = rdm.to_matrix();
                let min = m.symmetric_eigen().eigenvalues.min();
                prop_assert!(min >= -1e-10);
                prop_assert!(discord::discord(&rdm) >= 0.0);
            }
        }
    }
}
