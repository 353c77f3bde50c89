//! Cross-checks between the density pipeline and the occupation-basis engine.

use std::collections::BTreeMap;

use fermion_discord::agassi::{self, AgassiModelSpec, OrbitalLabel};
use fermion_discord::densities::{all_pairs_discord, natural_orbitals, DensitySet};
use fermion_discord::discord;
use fermion_discord::fock::{
    apply_string, build_agassi, build_agassi_raw, build_lmg, exact_ground_state,
    extract_densities, extract_densities_in_basis, lmg_cross_check, reduced_density_matrix,
    two_orbital_rdm_direct, two_orbital_rdm_direct_in_basis, verify_hamiltonian_basis, FockSpace,
    FockVector, ModeOp, DENSE_LIMIT,
};
use fermion_discord::lmg;
use fermion_discord::sampling::{random_sector_state, random_unitary, seeded_rng};
use num_complex::Complex64;
use rand::Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn assert_same_rdm(a: &discord::TwoOrbitalRdm, b: &discord::TwoOrbitalRdm, tol: f64) {
    let diff = (a.to_matrix() - b.to_matrix()).camax();
    assert!(diff <= tol, "rdm mismatch {diff:e}\n{a:?}\n{b:?}");
}

#[test]
fn direct_rdm_matches_assembled_on_random_states() {
    let mut rng = seeded_rng(100);
    for _ in 0..100 {
        let modes = rng.gen_range(2..=7);
        let particles = rng.gen_range(0..=modes);
        let space = FockSpace::new(modes, particles).unwrap().into_shared();
        let v = random_sector_state(space, &mut rng).unwrap();
        let d = extract_densities(&v).unwrap();
        let i = rng.gen_range(0..modes);
        let j = (i + rng.gen_range(1..modes)) % modes;
        assert_same_rdm(&two_orbital_rdm_direct(&v, i, j).unwrap(), &d.assemble_rdm(i, j).unwrap(), 1e-12);
    }
}

#[test]
fn direct_rdm_matches_assembled_in_rotated_bases() {
    let mut rng = seeded_rng(101);
    for _ in 0..20 {
        let modes = rng.gen_range(3..=6);
        let particles = rng.gen_range(1..modes);
        let space = FockSpace::new(modes, particles).unwrap().into_shared();
        let v = random_sector_state(space, &mut rng).unwrap();
        let w = random_unitary(modes, &mut rng);
        let d = extract_densities_in_basis(&v, &w).unwrap();
        // gamma transforms as W+ gamma W.
        let g0 = extract_densities(&v).unwrap();
        let rotated = w.adjoint() * g0.gamma() * &w;
        assert!((rotated - d.gamma()).camax() <= 1e-12);
        for i in 0..modes {
            for j in 0..modes {
                if i != j {
                    assert_same_rdm(
                        &two_orbital_rdm_direct_in_basis(&v, &w, i, j).unwrap(),
                        &d.assemble_rdm(i, j).unwrap(),
                        1e-12,
                    );
                }
            }
        }
    }
}

#[test]
fn pairing_coherence_sign_convention() {
    // (u + v a+_0 a+_1)|0>: kappa_01 = <a_1 a_0> = u v.
    let space = FockSpace::number_parity(2, 0).unwrap().into_shared();
    let (u, v) = (0.8, 0.6);
    let state = FockVector::from_states(space, &[(0b00, c(u)), (0b11, c(v))]).unwrap();
    let d = extract_densities(&state).unwrap();
    assert!((d.kappa()[(0, 1)] - c(u * v)).norm() < 1e-15);
    let direct = two_orbital_rdm_direct(&state, 0, 1).unwrap();
    assert!((direct.alpha() - d.kappa()[(1, 0)].conj()).norm() < 1e-15);
    assert_same_rdm(&direct, &d.assemble_rdm(0, 1).unwrap(), 1e-15);
}

#[test]
fn parity_forbidden_entries_are_exact_zeros() {
    let mut rng = seeded_rng(102);
    for _ in 0..20 {
        let space = FockSpace::new(5, rng.gen_range(1..5)).unwrap().into_shared();
        let v = random_sector_state(space, &mut rng).unwrap();
        let m = reduced_density_matrix(&v, &[1, 3]).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                if r != col && r + col != 3 {
                    assert_eq!(m[(r, col)], c(0.0));
                }
            }
        }
    }
    let space = FockSpace::number_parity(4, 0).unwrap().into_shared();
    let v = random_sector_state(space, &mut rng).unwrap();
    let m = reduced_density_matrix(&v, &[0, 2]).unwrap();
    for (r, col) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
        assert_eq!(m[(r, col)], c(0.0));
    }
}

/// Applies `sum_k coeff_k * string_k` to a sparse state.
fn apply_sum(state: &BTreeMap<u64, Complex64>, terms: &[(Complex64, Vec<(ModeOp, usize)>)]) -> BTreeMap<u64, Complex64> {
    let mut out = BTreeMap::new();
    for (&s, &a) in state {
        for (coef, ops) in terms {
            if let Some((sign, next)) = apply_string(ops, s) {
                *out.entry(next).or_insert(c(0.0)) += coef * a * sign;
            }
        }
    }
    out
}

fn fock_vector(space: FockSpace, state: &BTreeMap<u64, Complex64>) -> FockVector {
    let terms: Vec<(u64, Complex64)> = state.iter().map(|(&s, &a)| (s, a)).collect();
    FockVector::from_states(space.into_shared(), &terms).unwrap()
}

#[test]
fn deformed_mean_field_matches_rotated_determinant() {
    let omega = 4;
    let spec = AgassiModelSpec::new(omega, 2.5, 0.3).unwrap();
    let phi = agassi::classify_phase(&spec).phi;
    let (s, co) = (0.5 * phi).sin_cos();
    let mut state = BTreeMap::from([(0u64, c(1.0))]);
    for slot in 0..omega {
        let (lo, up) = (2 * slot, 2 * slot + 1);
        state = apply_sum(
            &state,
            &[(c(co), vec![(ModeOp::Create, lo)]), (c(-s), vec![(ModeOp::Create, up)])],
        );
    }
    let v = fock_vector(FockSpace::new(2 * omega, omega).unwrap(), &state);
    let exact = extract_densities(&v).unwrap();
    let mf = agassi::hfb_densities(&spec).unwrap();
    assert!((exact.gamma() - mf.gamma()).camax() <= 1e-10);
    assert!((exact.two_body_diag() - mf.two_body_diag()).amax() <= 1e-10);
    assert!(exact.kappa().camax() <= 1e-12);
}

#[test]
fn bcs_mean_field_matches_pair_condensate() {
    let omega = 4;
    let spec = AgassiModelSpec::new(omega, 0.2, 2.5).unwrap();
    let alpha = agassi::classify_phase(&spec).alpha;
    let mut state = BTreeMap::from([(0u64, c(1.0))]);
    for sigma in [-1, 1] {
        let (s, co) = (0.5 * alpha).sin_cos();
        // Lower level mostly filled, upper mostly empty.
        let (u, v) = if sigma == -1 { (s, co) } else { (co, s) };
        for m in 1..=(omega as i32 / 2) {
            let a = OrbitalLabel::new(sigma, m, omega).unwrap().index();
            let b = OrbitalLabel::new(sigma, -m, omega).unwrap().index();
            state = apply_sum(
                &state,
                &[(c(u), vec![]), (c(v), vec![(ModeOp::Create, a), (ModeOp::Create, b)])],
            );
        }
    }
    let v = fock_vector(FockSpace::number_parity(2 * omega, 0).unwrap(), &state);
    let exact = extract_densities(&v).unwrap();
    let mf = agassi::hfb_densities(&spec).unwrap();
    assert!((exact.gamma() - mf.gamma()).camax() <= 1e-10);
    assert!((exact.kappa() - mf.kappa()).camax() <= 1e-10);
    assert!((exact.two_body_diag() - mf.two_body_diag()).amax() <= 1e-10);
    for i in 0..2 * omega {
        for j in 0..2 * omega {
            if i != j {
                assert_same_rdm(&two_orbital_rdm_direct(&v, i, j).unwrap(), &mf.assemble_rdm(i, j).unwrap(), 1e-10);
            }
        }
    }
}

#[test]
fn lmg_energies_agree_across_solvers() {
    for n in [2, 4, 6] {
        for chi in [0.3, 1.0, 1.7, 4.0] {
            let r = lmg_cross_check(n, chi).unwrap();
            assert!(r.energy_gap() <= 1e-10, "{r:?}");
            assert!(r.discord_gap() <= 1e-10, "{r:?}");
        }
    }
}

#[test]
fn agassi_without_pairing_is_lmg() {
    let a = build_agassi(&AgassiModelSpec::new(4, 1.8, 0.0).unwrap()).unwrap();
    let b = build_lmg(4, 1.8).unwrap();
    assert_eq!(a.to_dense(), b.to_dense());
}

#[test]
fn lmg_hamiltonian_basis_is_natural() {
    for (n, chi) in [(4, 2.0), (6, 3.0)] {
        let gs = exact_ground_state(&build_lmg(n, chi).unwrap()).unwrap();
        let d = extract_densities(&gs.state).unwrap();
        for i in 0..2 * n {
            for j in 0..2 * n {
                if i != j {
                    assert!(d.gamma()[(i, j)].norm() <= 1e-12);
                }
            }
        }
        assert!(all_pairs_discord(&d).unwrap().amax() <= 1e-12);
        let q = lmg::ground_state(n, chi).unwrap();
        let d_param = lmg::d_parameter(&q);
        let upper = OrbitalLabel::new(1, 1, n).unwrap().index();
        assert!((d.gamma()[(upper, upper)].re - 0.5 * (1.0 + d_param)).abs() <= 1e-10);
    }
}

#[test]
fn exact_agassi_reports_pass_on_generic_couplings() {
    for (chi, sigma) in [(1.3, 0.4), (0.4, 1.3), (3.0, 3.0)] {
        let r = verify_hamiltonian_basis(&AgassiModelSpec::new(4, chi, sigma).unwrap()).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn iterative_path_matches_dense_energy() {
    // omega = 8 has a sector above the dense limit.
    let spec = AgassiModelSpec::new(8, 1.5, 0.6).unwrap();
    let op = build_agassi(&spec).unwrap();
    assert!(op.dim() > DENSE_LIMIT);
    let gs = exact_ground_state(&op).unwrap();
    let residual = (op.apply(gs.state.amplitudes()) - gs.state.amplitudes() * c(gs.energy)).norm();
    assert!(residual <= 1e-9);
    let r = verify_hamiltonian_basis(&spec).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.energy, gs.energy);
}

#[test]
fn natural_basis_removes_pair_discord() {
    let mut rng = seeded_rng(103);
    for _ in 0..20 {
        let modes = rng.gen_range(3..=6);
        let space = FockSpace::new(modes, rng.gen_range(1..modes)).unwrap().into_shared();
        let v = random_sector_state(space, &mut rng).unwrap();
        let d = extract_densities(&v).unwrap();
        let nat = natural_orbitals(d.gamma()).unwrap();
        let rotated = extract_densities_in_basis(&v, &nat.basis).unwrap();
        assert!(all_pairs_discord(&rotated).unwrap().amax() <= 1e-8);
        for (k, p) in nat.occupations.iter().enumerate() {
            assert!((rotated.gamma()[(k, k)].re - p).abs() <= 1e-12);
        }
    }
}

#[test]
fn noninteracting_exact_state_is_a_determinant() {
    let gs = exact_ground_state(&build_agassi_raw(4, 1.0, 0.0, 0.0).unwrap()).unwrap();
    let d: DensitySet = extract_densities(&gs.state).unwrap();
    let g = d.gamma();
    assert!((g * g - g).camax() <= 1e-14);
}
