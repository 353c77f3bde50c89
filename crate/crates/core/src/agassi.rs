//! Mean-field (HFB) ground state of the Agassi model.
//!
//! Two levels `sigma = +1` (upper) and `sigma = -1` (lower), each with
//! degeneracy `omega`, labelled by `m = +-1, ..., +-omega/2`, filled with
//! `omega` fermions. The Hamiltonian combines the single-particle splitting
//! `eps J0`, a pairing term of strength `g` and a monopole term of strength
//! `V`; everything below depends on the couplings only through
//! `chi = (omega - 1) V / eps`, `sigma = (omega - 1) g / eps` and
//! `sigma0 = sigma + V / eps`.
//!
//! The mean-field state is analytic: depending on `(chi, sigma0)` it is a
//! spherical HF determinant, a parity-breaking ("deformed") HF determinant,
//! or a BCS state.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::densities::{CMatrix, DensitySet};
use crate::discord::{self, binary_entropy, CorrelationReport};
use crate::error::{Error, Result};
use crate::grid::GridRange;

/// Model parameters in dimensionless form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgassiModelSpec {
    omega: usize,
    epsilon: f64,
    chi: f64,
    sigma: f64,
}

impl AgassiModelSpec {
    /// `omega` must be even and at least 4; `chi`, `sigma` non-negative.
    /// The energy unit is 1.
    pub fn new(omega: usize, chi: f64, sigma: f64) -> Result<Self> {
        Self::with_epsilon(omega, 1.0, chi, sigma)
    }

    pub fn with_epsilon(omega: usize, epsilon: f64, chi: f64, sigma: f64) -> Result<Self> {
        if omega < 4 || !omega.is_multiple_of(2) {
            return Err(Error::InvalidModel(format!(
                "omega must be even and >= 4, got {omega}"
            )));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidModel(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(chi.is_finite() && chi >= 0.0 && sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::InvalidModel(format!(
                "chi and sigma must be finite and non-negative, got ({chi}, {sigma})"
            )));
        }
        Ok(AgassiModelSpec {
            omega,
            epsilon,
            chi,
            sigma,
        })
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `sigma + V / eps = sigma + chi / (omega - 1)`.
    pub fn sigma0(&self) -> f64 {
        self.sigma + self.chi / (self.omega as f64 - 1.0)
    }

    /// Monopole strength `V`.
    pub fn v(&self) -> f64 {
        self.chi * self.epsilon / (self.omega as f64 - 1.0)
    }

    /// Pairing strength `g`.
    pub fn g(&self) -> f64 {
        self.sigma * self.epsilon / (self.omega as f64 - 1.0)
    }

    /// Number of single-particle orbitals, `2 omega`.
    pub fn orbital_count(&self) -> usize {
        2 * self.omega
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    SphericalHF,
    DeformedHF,
    Bcs,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::SphericalHF => "spherical",
            Phase::DeformedHF => "deformed",
            Phase::Bcs => "bcs",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Mean-field angles. `phi` mixes the two levels, `alpha` is the BCS angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSolution {
    pub phase: Phase,
    pub phi: f64,
    pub alpha: f64,
    cos_phi: f64,
    cos_alpha: f64,
}

impl PhaseSolution {
    pub fn cos_phi(&self) -> f64 {
        self.cos_phi
    }

    pub fn sin_phi(&self) -> f64 {
        (1.0 - self.cos_phi * self.cos_phi).max(0.0).sqrt()
    }

    pub fn cos_alpha(&self) -> f64 {
        self.cos_alpha
    }

    pub fn sin_alpha(&self) -> f64 {
        (1.0 - self.cos_alpha * self.cos_alpha).max(0.0).sqrt()
    }
}

/// Single-particle label `(sigma, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrbitalLabel {
    sigma: i8,
    m: i32,
}

impl OrbitalLabel {
    pub fn new(sigma: i32, m: i32, omega: usize) -> Result<Self> {
        if sigma != 1 && sigma != -1 {
            return Err(Error::InvalidModel(format!("sigma must be +1 or -1, got {sigma}")));
        }
        if m == 0 || m.unsigned_abs() as usize > omega / 2 {
            return Err(Error::InvalidModel(format!(
                "m must be in +-1..=+-{}, got {m}",
                omega / 2
            )));
        }
        Ok(OrbitalLabel {
            sigma: sigma as i8,
            m,
        })
    }

    pub fn sigma(&self) -> i32 {
        self.sigma as i32
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// Linear index: m-major with m ordered `+1, -1, +2, -2, ...`, and
    /// `sigma = -1` before `sigma = +1` within each m.
    pub fn index(&self) -> usize {
        let k = self.m.unsigned_abs() as usize - 1;
        let m_slot = 2 * k + usize::from(self.m < 0);
        2 * m_slot + usize::from(self.sigma > 0)
    }

    pub fn from_index(index: usize, omega: usize) -> Result<Self> {
        if index >= 2 * omega {
            return Err(Error::InvalidModel(format!(
                "orbital index {index} out of range for omega = {omega}"
            )));
        }
        let sigma = if index % 2 == 1 { 1 } else { -1 };
        let m_slot = index / 2;
        let k = (m_slot / 2) as i32 + 1;
        let m = if m_slot.is_multiple_of(2) { k } else { -k };
        Self::new(sigma, m, omega)
    }

    /// Same `m`, opposite level.
    pub fn level_partner(&self) -> Self {
        OrbitalLabel {
            sigma: -self.sigma,
            m: self.m,
        }
    }

    /// Same level, opposite `m`.
    pub fn pairing_partner(&self) -> Self {
        OrbitalLabel {
            sigma: self.sigma,
            m: -self.m,
        }
    }
}

impl fmt::Display for OrbitalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(sigma={:+}, m={:+})", self.sigma, self.m)
    }
}

/// Phase and mean-field angles.
///
/// Spherical when `chi <= 1` and `sigma0 <= 1`; otherwise deformed when
/// `chi >= sigma0` and BCS when `chi < sigma0`.
pub fn classify_phase(spec: &AgassiModelSpec) -> PhaseSolution {
    let chi = spec.chi();
    let s0 = spec.sigma0();
    if chi <= 1.0 && s0 <= 1.0 {
        PhaseSolution {
            phase: Phase::SphericalHF,
            phi: 0.0,
            alpha: 0.0,
            cos_phi: 1.0,
            cos_alpha: 1.0,
        }
    } else if chi >= s0 {
        let cos_phi = 1.0 / chi;
        PhaseSolution {
            phase: Phase::DeformedHF,
            phi: cos_phi.acos(),
            alpha: 0.0,
            cos_phi,
            cos_alpha: 1.0,
        }
    } else {
        let cos_alpha = 1.0 / s0;
        PhaseSolution {
            phase: Phase::Bcs,
            phi: 0.0,
            alpha: cos_alpha.acos(),
            cos_phi: 1.0,
            cos_alpha,
        }
    }
}

/// Mean-field one-body density, pairing tensor and (separable) two-body
/// diagonal over the `2 omega` orbitals.
pub fn hfb_densities(spec: &AgassiModelSpec) -> Result<DensitySet> {
    let sol = classify_phase(spec);
    let n = spec.orbital_count();
    let (cp, sp) = (sol.cos_phi(), sol.sin_phi());
    let (ca, sa) = (sol.cos_alpha(), sol.sin_alpha());

    let level_block = |sigma: i32, sigma2: i32| -> f64 {
        if sigma == sigma2 {
            0.5 * (1.0 - sigma as f64 * cp * ca)
        } else {
            -0.5 * sp * ca
        }
    };

    let labels: Vec<OrbitalLabel> = (0..n)
        .map(|k| OrbitalLabel::from_index(k, spec.omega()))
        .collect::<Result<_>>()?;
    let mut gamma = CMatrix::zeros(n, n);
    let mut kappa = CMatrix::zeros(n, n);
    for (i, a) in labels.iter().enumerate() {
        for (j, b) in labels.iter().enumerate() {
            if a.m() == b.m() {
                gamma[(i, j)] = Complex64::new(level_block(a.sigma(), b.sigma()), 0.0);
            }
            if a.sigma() == b.sigma() && a.m() == -b.m() {
                let sign = a.m().signum() as f64;
                kappa[(i, j)] = Complex64::new(sign * 0.5 * sa, 0.0);
            }
        }
    }
    DensitySet::from_quasiparticle_vacuum(gamma, kappa)
}

/// `h(x)`: binary entropy of `(1 +- 1/x) / 2`, defined for `x >= 1`.
pub fn h(x: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::Domain(format!("h(x) needs x >= 1, got {x}")));
    }
    Ok(binary_entropy(0.5 * (1.0 - 1.0 / x)))
}

fn pair_rdm(spec: &AgassiModelSpec, a: OrbitalLabel, b: OrbitalLabel) -> Result<discord::TwoOrbitalRdm> {
    for label in [a, b] {
        OrbitalLabel::new(label.sigma(), label.m(), spec.omega())?;
    }
    if a == b {
        return Err(Error::InvalidPair(a.index(), b.index(), spec.orbital_count()));
    }
    hfb_densities(spec)?.assemble_rdm(a.index(), b.index())
}

/// Discord between two orbitals of the mean-field ground state, computed
/// from the assembled densities.
pub fn discord_pair(spec: &AgassiModelSpec, a: OrbitalLabel, b: OrbitalLabel) -> Result<f64> {
    Ok(discord::discord(&pair_rdm(spec, a, b)?))
}

/// All correlation measures for one orbital pair.
pub fn pair_report(
    spec: &AgassiModelSpec,
    a: OrbitalLabel,
    b: OrbitalLabel,
) -> Result<CorrelationReport> {
    Ok(discord::report(&pair_rdm(spec, a, b)?))
}

/// `(rho, kappa) = (-sin(phi) cos(alpha) / 2, sin(alpha) / 2)`.
pub fn order_parameters(spec: &AgassiModelSpec) -> (f64, f64) {
    let sol = classify_phase(spec);
    (-0.5 * sol.sin_phi() * sol.cos_alpha(), 0.5 * sol.sin_alpha())
}

/// Which pair a scan follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// `(m, +1)` and `(m, -1)`.
    UpDown,
    /// `(m, +1)` and `(-m, +1)`.
    Pairing,
}

impl PairKind {
    /// The representative pair at `m = 1`.
    pub fn labels(&self, omega: usize) -> Result<(OrbitalLabel, OrbitalLabel)> {
        let a = OrbitalLabel::new(1, 1, omega)?;
        Ok(match self {
            PairKind::UpDown => (a, a.level_partner()),
            PairKind::Pairing => (a, a.pairing_partner()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub chi: f64,
    pub sigma: f64,
    pub phase: Phase,
    pub discord: f64,
    pub mutual_info: f64,
}

/// Discord over a `(chi, sigma)` grid, `chi` outer and `sigma` inner.
pub fn scan_grid(
    omega: usize,
    chi: &GridRange,
    sigma: &GridRange,
    kind: PairKind,
) -> Result<Vec<ScanRow>> {
    let (a, b) = kind.labels(omega)?;
    let chis = chi.values();
    let sigmas = sigma.values();
    if chis.is_empty() || sigmas.is_empty() {
        return Err(Error::InvalidGrid("empty range".into()));
    }
    let points: Vec<(f64, f64)> = chis
        .iter()
        .flat_map(|&c| sigmas.iter().map(move |&s| (c, s)))
        .collect();
    points
        .par_iter()
        .map(|&(c, s)| {
            let spec = AgassiModelSpec::new(omega, c, s)?;
            let r = pair_report(&spec, a, b)?;
            Ok(ScanRow {
                chi: c,
                sigma: s,
                phase: classify_phase(&spec).phase,
                discord: r.discord,
                mutual_info: r.mutual_info,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    const H2: f64 = 0.562335144618808;

    fn spec(chi: f64, sigma: f64) -> AgassiModelSpec {
        AgassiModelSpec::new(20, chi, sigma).unwrap()
    }

    fn label(sigma: i32, m: i32) -> OrbitalLabel {
        OrbitalLabel::new(sigma, m, 20).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(AgassiModelSpec::new(3, 1.0, 1.0).is_err());
        assert!(AgassiModelSpec::new(2, 1.0, 1.0).is_err());
        assert!(AgassiModelSpec::new(4, -1.0, 1.0).is_err());
        assert!(AgassiModelSpec::with_epsilon(4, 0.0, 1.0, 1.0).is_err());
        let s = AgassiModelSpec::new(20, 1.9, 0.5).unwrap();
        assert_abs_diff_eq!(s.sigma0(), 0.5 + 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(s.sigma0(), s.sigma() + s.v() / s.epsilon(), epsilon = 1e-12);
    }

    #[test]
    fn label_indexing_round_trips() {
        for k in 0..40 {
            let l = OrbitalLabel::from_index(k, 20).unwrap();
            assert_eq!(l.index(), k);
        }
        assert_eq!(label(-1, 1).index(), 0);
        assert_eq!(label(1, 1).index(), 1);
        assert_eq!(label(-1, -1).index(), 2);
        assert_eq!(label(1, 2).index(), 5);
        assert!(OrbitalLabel::new(0, 1, 20).is_err());
        assert!(OrbitalLabel::new(1, 11, 20).is_err());
        assert!(OrbitalLabel::new(1, 0, 20).is_err());
    }

    #[test]
    fn phase_examples() {
        let s = classify_phase(&spec(0.5, 0.3));
        assert_eq!(s.phase, Phase::SphericalHF);
        assert_eq!((s.phi, s.alpha), (0.0, 0.0));

        let s = classify_phase(&spec(2.0, 0.0));
        assert_eq!(s.phase, Phase::DeformedHF);
        assert_abs_diff_eq!(s.phi.cos(), 0.5, epsilon = 1e-15);
        assert_eq!(s.alpha, 0.0);

        let s = classify_phase(&spec(0.0, 2.0));
        assert_eq!(s.phase, Phase::Bcs);
        assert_abs_diff_eq!(s.alpha.cos(), 0.5, epsilon = 1e-15);
        assert_eq!(s.phi, 0.0);
    }

    #[test]
    fn phase_boundary_ties() {
        // chi = 1, sigma0 <= 1 stays spherical.
        assert_eq!(classify_phase(&spec(1.0, 0.0)).phase, Phase::SphericalHF);
        let s = AgassiModelSpec::new(20, 0.0, 1.0).unwrap();
        assert_eq!(classify_phase(&s).phase, Phase::SphericalHF);
        // chi = sigma0 > 1 resolves to deformed.
        let s = AgassiModelSpec::new(4, 1.5, 1.0).unwrap();
        assert_abs_diff_eq!(s.sigma0(), 1.5, epsilon = 1e-15);
        assert_eq!(classify_phase(&s).phase, Phase::DeformedHF);
    }

    #[test]
    fn spherical_densities() {
        let d = hfb_densities(&spec(0.5, 0.3)).unwrap();
        for k in 0..40 {
            let lower = OrbitalLabel::from_index(k, 20).unwrap().sigma() == -1;
            assert_eq!(d.gamma()[(k, k)].re, if lower { 1.0 } else { 0.0 });
        }
        assert!(d.kappa().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn deformed_densities() {
        let d = hfb_densities(&spec(2.0, 0.0)).unwrap();
        let (up, down) = (label(1, 3).index(), label(-1, 3).index());
        assert_abs_diff_eq!(d.gamma()[(up, up)].re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(d.gamma()[(down, down)].re, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(d.gamma()[(up, down)].re, -(3f64.sqrt()) / 4.0, epsilon = 1e-15);
        assert!(d.kappa().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn bcs_densities() {
        let d = hfb_densities(&spec(0.0, 2.0)).unwrap();
        let (a, b) = (label(1, 2).index(), label(1, -2).index());
        assert_abs_diff_eq!(d.gamma()[(a, a)].re, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(d.gamma()[(label(-1, 2).index(), label(-1, 2).index())].re, 0.75, epsilon = 1e-15);
        assert_eq!(d.gamma()[(a, label(-1, 2).index())].norm(), 0.0);
        assert_abs_diff_eq!(d.kappa()[(a, b)].norm(), 3f64.sqrt() / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!((d.kappa()[(a, b)] + d.kappa()[(b, a)]).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn h_examples() {
        assert_eq!(h(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(h(2.0).unwrap(), H2, epsilon = 1e-12);
        assert!((h(1e8).unwrap() - LN_2).abs() < 1e-12);
        assert!(h(0.5).is_err());
        assert!(h(f64::NAN).is_err());
        let mut prev = 0.0;
        for k in 1..200 {
            let v = h(1.0 + k as f64 * 0.05).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn discord_pair_examples() {
        for (a, b) in [(label(1, 1), label(-1, 1)), (label(1, 1), label(1, -1)), (label(1, 1), label(-1, 4))] {
            assert_eq!(discord_pair(&spec(0.5, 0.3), a, b).unwrap(), 0.0);
        }
        let d = discord_pair(&spec(2.0, 0.0), label(1, 1), label(-1, 1)).unwrap();
        assert_abs_diff_eq!(d, H2, epsilon = 1e-12);
        let d = discord_pair(&spec(0.0, 2.0), label(1, 1), label(1, -1)).unwrap();
        // sigma0 = 2 exactly when chi = 0.
        assert_abs_diff_eq!(d, H2, epsilon = 1e-12);
        assert!(discord_pair(&spec(2.0, 0.0), label(1, 1), label(1, 1)).is_err());
    }

    #[test]
    fn order_parameter_examples() {
        assert_eq!(order_parameters(&spec(0.5, 0.3)), (0.0, 0.0));
        let (rho, kap) = order_parameters(&spec(2.0, 0.0));
        assert_abs_diff_eq!(rho, -(3f64.sqrt()) / 4.0, epsilon = 1e-15);
        assert_eq!(kap, 0.0);
        let (rho, kap) = order_parameters(&spec(0.0, 2.0));
        assert_eq!(rho, 0.0);
        assert_abs_diff_eq!(kap, 3f64.sqrt() / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn m_independence_is_bitwise() {
        let s = spec(2.3, 0.4);
        let reference = discord_pair(&s, label(1, 1), label(-1, 1)).unwrap();
        for m in [-10, -3, -1, 2, 7, 10] {
            assert_eq!(discord_pair(&s, label(1, m), label(-1, m)).unwrap(), reference);
        }
        let s = spec(0.4, 2.3);
        let reference = discord_pair(&s, label(1, 1), label(1, -1)).unwrap();
        for m in [2, 5, 10] {
            assert_eq!(discord_pair(&s, label(-1, m), label(-1, -m)).unwrap(), reference);
        }
    }

    #[test]
    fn scan_single_point_matches_pair() {
        let g = GridRange::single(2.0).unwrap();
        let z = GridRange::single(0.0).unwrap();
        let rows = scan_grid(20, &g, &z, PairKind::UpDown).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].phase, Phase::DeformedHF);
        assert_eq!(rows[0].discord, discord_pair(&spec(2.0, 0.0), label(1, 1), label(-1, 1)).unwrap());
    }

    #[test]
    fn scan_nonzero_only_in_matching_phase() {
        let r: GridRange = "0:3:0.25".parse().unwrap();
        for (kind, phase) in [(PairKind::UpDown, Phase::DeformedHF), (PairKind::Pairing, Phase::Bcs)] {
            let rows = scan_grid(20, &r, &r, kind).unwrap();
            assert_eq!(rows.len(), 13 * 13);
            for row in rows {
                assert_eq!(row.discord > 1e-12, row.phase == phase, "{row:?}");
            }
        }
    }

    #[test]
    fn scan_order_is_row_major() {
        let r: GridRange = "0:1:0.5".parse().unwrap();
        let rows = scan_grid(4, &r, &r, PairKind::UpDown).unwrap();
        let got: Vec<(f64, f64)> = rows.iter().map(|x| (x.chi, x.sigma)).collect();
        assert_eq!(got[..4], [(0.0, 0.0), (0.0, 0.5), (0.0, 1.0), (0.5, 0.0)]);
    }
}
