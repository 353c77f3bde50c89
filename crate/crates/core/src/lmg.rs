//! Lipkin-Meshkov-Glick model in the quasispin basis.
//!
//! `H = J0 - (V/2) (J+^2 + J-^2)` with `V = chi / (N - 1)` acting on the
//! `J = N/2` irrep. `J+^2` moves `M` by two, so the basis splits into two
//! sectors: sector 0 holds `M = -J, -J+2, ...`, sector 1 holds
//! `M = -J+1, -J+3, ...`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::agassi;
use crate::discord::{self, TwoOrbitalRdm};
use crate::error::{Error, Result};
use crate::grid::GridRange;

/// Largest particle number accepted by the curve routines.
pub const MAX_N: usize = 64;

/// Ground-state ties between sectors within this gap go to sector 0.
const SECTOR_TIE_TOL: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-10;

fn validate(n: usize, chi: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidModel(format!("N must be >= 2, got {n}")));
    }
    if !(chi.is_finite() && chi >= 0.0) {
        return Err(Error::InvalidModel(format!("chi must be finite and >= 0, got {chi}")));
    }
    Ok(())
}

/// `M` values of a sector, ascending.
pub fn sector_m_values(n: usize, sector: usize) -> Vec<f64> {
    let j = n as f64 / 2.0;
    (0..)
        .map(|k| -j + (sector + 2 * k) as f64)
        .take_while(|&m| m <= j + 1e-9)
        .collect()
}

/// Hamiltonian block of one sector.
pub fn build_hamiltonian(n: usize, chi: f64, sector: usize) -> Result<DMatrix<f64>> {
    validate(n, chi)?;
    if sector > 1 {
        return Err(Error::InvalidModel(format!("sector must be 0 or 1, got {sector}")));
    }
    let j = n as f64 / 2.0;
    let v = chi / (n as f64 - 1.0);
    let ms = sector_m_values(n, sector);
    let dim = ms.len();
    let mut h = DMatrix::zeros(dim, dim);
    for (k, &m) in ms.iter().enumerate() {
        h[(k, k)] = m;
        if k + 1 < dim {
            let x = -0.5 * v * ((j - m) * (j + m + 1.0) * (j - m - 1.0) * (j + m + 2.0)).sqrt();
            h[(k, k + 1)] = x;
            h[(k + 1, k)] = x;
        }
    }
    Ok(h)
}

/// Lowest eigenpair of one sector, normalised and phase-fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasispinVector {
    pub n: usize,
    pub sector: usize,
    pub m_values: Vec<f64>,
    pub amplitudes: DVector<f64>,
    pub energy: f64,
}

impl QuasispinVector {
    pub fn j(&self) -> f64 {
        self.n as f64 / 2.0
    }

    /// `<J0>`.
    pub fn expect_j0(&self) -> f64 {
        self.m_values
            .iter()
            .zip(self.amplitudes.iter())
            .map(|(m, a)| m * a * a)
            .sum()
    }
}

fn sector_ground_state(n: usize, chi: f64, sector: usize) -> Result<QuasispinVector> {
    let h = build_hamiltonian(n, chi, sector)?;
    let eig = h.clone().symmetric_eigen();
    let k = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .ok_or_else(|| Error::NoConvergence("empty sector".into()))?;
    let energy = eig.eigenvalues[k];
    let mut v = eig.eigenvectors.column(k).into_owned();
    v /= v.norm();
    let max = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let pivot = v.iter().position(|x| x.abs() >= max - 1e-12).unwrap_or(0);
    if v[pivot] < 0.0 {
        v = -v;
    }
    let residual = (&h * &v - &v * energy).norm();
    if !(residual <= RESIDUAL_TOL) {
        return Err(Error::NoConvergence(format!(
            "quasispin residual {residual:e} for N = {n}, chi = {chi}"
        )));
    }
    Ok(QuasispinVector {
        n,
        sector,
        m_values: sector_m_values(n, sector),
        amplitudes: v,
        energy,
    })
}

/// Lowest eigenpair over both sectors.
pub fn ground_state(n: usize, chi: f64) -> Result<QuasispinVector> {
    let even = sector_ground_state(n, chi, 0)?;
    let odd = sector_ground_state(n, chi, 1)?;
    Ok(if odd.energy < even.energy - SECTOR_TIE_TOL {
        odd
    } else {
        even
    })
}

/// `d = 2 <J0> / N`.
pub fn d_parameter(gs: &QuasispinVector) -> f64 {
    2.0 * gs.expect_j0() / gs.n as f64
}

/// `<J+>`, which connects `M` to `M + 1` and so vanishes inside a sector.
pub fn expect_j_plus(gs: &QuasispinVector) -> f64 {
    let j = gs.j();
    let mut total = 0.0;
    for (a, &m) in gs.m_values.iter().enumerate() {
        for (b, &m2) in gs.m_values.iter().enumerate() {
            if (m2 - m - 1.0).abs() < 1e-9 {
                total += gs.amplitudes[b] * gs.amplitudes[a] * ((j - m) * (j + m + 1.0)).sqrt();
            }
        }
    }
    total
}

/// Mean-field angle: `0` for `chi <= 1`, `arccos(1 / chi)` above.
pub fn hf_rotation_angle(chi: f64) -> Result<f64> {
    if !(chi.is_finite() && chi >= 0.0) {
        return Err(Error::Domain(format!("chi must be finite and >= 0, got {chi}")));
    }
    Ok(if chi <= 1.0 { 0.0 } else { (1.0 / chi).acos() })
}

/// Amplitudes `(lower, upper)` of the Hartree-Fock orbitals on
/// `(c_-, c_+)`; the rotation angle is `phi / 2`.
pub fn hf_orbitals(phi: f64) -> [[f64; 2]; 2] {
    let (s, c) = (0.5 * phi).sin_cos();
    [[c, -s], [s, c]]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgCurvePoint {
    pub n: usize,
    pub chi: f64,
    pub d: f64,
    pub discord: f64,
}

/// Two-orbital state of the exact ground state on the same-m pair of
/// Hartree-Fock orbitals `(lower, upper)`.
///
/// Each m holds exactly one particle, so `rho1 = rho4 = alpha = 0`.
pub fn hf_pair_rdm(d: f64, phi: f64) -> Result<TwoOrbitalRdm> {
    let (s, c) = phi.sin_cos();
    let upper = 0.5 * (1.0 + d * c);
    let lower = 0.5 * (1.0 - d * c);
    TwoOrbitalRdm::new(
        [0.0, upper, lower, 0.0],
        num_complex::Complex64::new(0.0, 0.0),
        num_complex::Complex64::new(-0.5 * s * d, 0.0),
    )
}

/// Discord between the same-m Hartree-Fock orbitals of the exact ground
/// state.
pub fn discord_exact_gs_hf_pair(n: usize, chi: f64) -> Result<LmgCurvePoint> {
    if n > MAX_N {
        return Err(Error::InvalidModel(format!("N must be <= {MAX_N}, got {n}")));
    }
    let gs = ground_state(n, chi)?;
    let d = d_parameter(&gs);
    let phi = hf_rotation_angle(chi)?;
    let rdm = hf_pair_rdm(d, phi)?;
    Ok(LmgCurvePoint {
        n,
        chi,
        d,
        discord: discord::discord(&rdm),
    })
}

/// Discord between a same-m Hamiltonian orbital pair of the Hartree-Fock
/// ground state: `h(chi)` above `chi = 1`, zero below.
pub fn discord_hf_gs_hamiltonian_pair(chi: f64) -> Result<f64> {
    if !(chi.is_finite() && chi >= 0.0) {
        return Err(Error::Domain(format!("chi must be finite and >= 0, got {chi}")));
    }
    if chi <= 1.0 {
        Ok(0.0)
    } else {
        agassi::h(chi)
    }
}

/// Exact-state curve family, ordered by `n` then `chi`.
pub fn exact_curve(ns: &[usize], chi: &GridRange) -> Result<Vec<LmgCurvePoint>> {
    if ns.is_empty() {
        return Err(Error::InvalidGrid("empty N list".into()));
    }
    let chis = chi.values();
    let points: Vec<(usize, f64)> = ns
        .iter()
        .flat_map(|&n| chis.iter().map(move |&c| (n, c)))
        .collect();
    points
        .par_iter()
        .map(|&(n, c)| discord_exact_gs_hf_pair(n, c))
        .collect()
}

/// Mean-field curve as `(chi, discord)` rows.
pub fn hf_curve(chi: &GridRange) -> Result<Vec<(f64, f64)>> {
    chi.values()
        .into_iter()
        .map(|c| Ok((c, discord_hf_gs_hamiltonian_pair(c)?)))
        .collect()
}
