use num_complex::Complex64;

use super::eigen::exact_ground_state;
use super::hamiltonian::{build_agassi, build_lmg};
use super::observables::{extract_densities, two_orbital_rdm_direct_in_basis};
use crate::agassi::{AgassiModelSpec, OrbitalLabel};
use crate::densities::{all_pairs_discord, CMatrix};
use crate::discord;
use crate::error::{Error, Result};
use crate::lmg;

/// Largest `omega` accepted by the verification routines.
pub const MAX_VERIFY_OMEGA: usize = 8;
const PASS_TOL: f64 = 1e-10;

/// Exact ground-state checks in the Hamiltonian orbital basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianBasisReport {
    pub omega: usize,
    pub chi: f64,
    pub sigma: f64,
    pub energy: f64,
    /// `max |gamma_{(s,m),(-s,m)}|`.
    pub max_level_gamma: f64,
    /// `max |gamma_{(s,m),(s,-m)}|`.
    pub max_pairing_gamma: f64,
    pub max_kappa: f64,
    pub max_pair_discord: f64,
    pub pass: bool,
}

impl HamiltonianBasisReport {
    pub fn max_offdiag_gamma(&self) -> f64 {
        self.max_level_gamma.max(self.max_pairing_gamma)
    }
}

/// Diagonalises the Agassi model exactly and checks that the level and
/// pairing coherences, the pairing tensor and every pair discord vanish.
pub fn verify_hamiltonian_basis(spec: &AgassiModelSpec) -> Result<HamiltonianBasisReport> {
    let omega = spec.omega();
    if omega > MAX_VERIFY_OMEGA {
        return Err(Error::SizeGuard(format!(
            "exact verification supports omega <= {MAX_VERIFY_OMEGA}, got {omega}"
        )));
    }
    let gs = exact_ground_state(&build_agassi(spec)?)?;
    let d = extract_densities(&gs.state)?;
    let mut level = 0.0f64;
    let mut pairing = 0.0f64;
    for k in 0..spec.orbital_count() {
        let l = OrbitalLabel::from_index(k, omega)?;
        level = level.max(d.gamma()[(k, l.level_partner().index())].norm());
        pairing = pairing.max(d.gamma()[(k, l.pairing_partner().index())].norm());
    }
    let max_kappa = d.kappa().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let max_pair_discord = all_pairs_discord(&d)?.amax();
    let pass = level <= PASS_TOL
        && pairing <= PASS_TOL
        && max_kappa <= PASS_TOL
        && max_pair_discord <= PASS_TOL;
    Ok(HamiltonianBasisReport {
        omega,
        chi: spec.chi(),
        sigma: spec.sigma(),
        energy: gs.energy,
        max_level_gamma: level,
        max_pairing_gamma: pairing,
        max_kappa,
        max_pair_discord,
        pass,
    })
}

/// Exact LMG ground state from the occupation basis compared with the
/// quasispin solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgCrossCheck {
    pub n: usize,
    pub chi: f64,
    pub fock_energy: f64,
    pub quasispin_energy: f64,
    pub fock_discord: f64,
    pub quasispin_discord: f64,
}

impl LmgCrossCheck {
    pub fn energy_gap(&self) -> f64 {
        (self.fock_energy - self.quasispin_energy).abs()
    }

    pub fn discord_gap(&self) -> f64 {
        (self.fock_discord - self.quasispin_discord).abs()
    }
}

/// Block-diagonal rotation to the Hartree-Fock orbitals of every m.
pub fn hf_basis(omega: usize, phi: f64) -> CMatrix {
    let [lower, upper] = lmg::hf_orbitals(phi);
    let mut w = CMatrix::zeros(2 * omega, 2 * omega);
    for slot in 0..omega {
        let (lo, up) = (2 * slot, 2 * slot + 1);
        w[(lo, lo)] = Complex64::new(lower[0], 0.0);
        w[(up, lo)] = Complex64::new(lower[1], 0.0);
        w[(lo, up)] = Complex64::new(upper[0], 0.0);
        w[(up, up)] = Complex64::new(upper[1], 0.0);
    }
    w
}

/// LMG with `n = omega` particles: energies and the same-m Hartree-Fock
/// pair discord from both solvers.
pub fn lmg_cross_check(n: usize, chi: f64) -> Result<LmgCrossCheck> {
    if n > MAX_VERIFY_OMEGA || !n.is_multiple_of(2) {
        return Err(Error::SizeGuard(format!(
            "occupation-basis LMG needs an even N <= {MAX_VERIFY_OMEGA}, got {n}"
        )));
    }
    let gs = exact_ground_state(&build_lmg(n, chi)?)?;
    let phi = lmg::hf_rotation_angle(chi)?;
    let w = hf_basis(n, phi);
    let (lo, up) = (
        OrbitalLabel::new(-1, 1, n)?.index(),
        OrbitalLabel::new(1, 1, n)?.index(),
    );
    let rdm = two_orbital_rdm_direct_in_basis(&gs.state, &w, lo, up)?;
    let q = lmg::ground_state(n, chi)?;
    let point = lmg::discord_exact_gs_hf_pair(n, chi)?;
    Ok(LmgCrossCheck {
        n,
        chi,
        fock_energy: gs.energy,
        quasispin_energy: q.energy,
        fock_discord: discord::discord(&rdm),
        quasispin_discord: point.discord,
    })
}
