//! Closed-form correlation measures for the two-orbital reduced state of a
//! parity-superselected fermionic system.
//!
//! In the occupation basis `|n_i n_j>` ordered `(|00>, |01>, |10>, |11>)`
//! (`n_j` is the fast index) the only coherences allowed by number parity are
//! `<00|rho|11>` and `<01|rho|10>`, so the state is block diagonal with two
//! 2x2 blocks. The single admissible measurement on one orbital is the
//! occupation measurement, which turns the classical correlation into a
//! fixed expression and the discord into `S(Z(rho)) - S(rho)`, where `Z`
//! removes the coherences.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for structural identities (trace, positivity, block structure).
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Tolerance for agreement between independent computational routes.
pub const CROSS_CHECK_TOL: f64 = 1e-10;

/// Shannon entropy `-sum p ln p` in nats.
///
/// Entries in `[-1e-12, 0)` are treated as zero. Entries below `-1e-9`, or a
/// total deviating from one by more than `1e-6`, are rejected.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for (k, &x) in p.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "entry {k} is not finite"
            )));
        }
        if x < -1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "entry {k} is negative ({x:e})"
            )));
        }
        total += x;
    }
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidDistribution(format!(
            "entries sum to {total}"
        )));
    }
    Ok(entropy_terms(p.iter().map(|&x| x.min(1.0))))
}

/// `-sum p ln p` with `0 ln 0 = 0` and negative entries ignored; no
/// normalisation check.
pub(crate) fn entropy_terms(p: impl IntoIterator<Item = f64>) -> f64 {
    p.into_iter()
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.ln())
        .sum()
}

/// Binary Shannon entropy of `(p, 1 - p)` in nats.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_terms([p, 1.0 - p])
}

/// Parity-block two-orbital reduced density matrix.
///
/// ```text
///   | rho1   0      0      alpha |
///   | 0      rho2   gamma  0     |
///   | 0      gamma* rho3   0     |
///   | alpha* 0      0      rho4  |
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoOrbitalRdm {
    rho: [f64; 4],
    alpha: Complex64,
    gamma_off: Complex64,
}

impl TwoOrbitalRdm {
    /// Validates and builds a reduced state. Diagonal entries in
    /// `[-1e-12, 0)` are clamped to zero.
    pub fn new(rho: [f64; 4], alpha: Complex64, gamma_off: Complex64) -> Result<Self> {
        let mut clamped = rho;
        for (k, x) in clamped.iter_mut().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidRdm(format!("rho{} is not finite", k + 1)));
            }
            if *x < -STRUCTURAL_TOL {
                return Err(Error::InvalidRdm(format!("rho{} = {:e} is negative", k + 1, *x)));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        if !(alpha.is_finite() && gamma_off.is_finite()) {
            return Err(Error::InvalidRdm("coherence is not finite".into()));
        }
        let trace: f64 = clamped.iter().sum();
        if (trace - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::InvalidRdm(format!("trace is {trace}")));
        }
        if alpha.norm_sqr() > clamped[0] * clamped[3] + STRUCTURAL_TOL {
            return Err(Error::InvalidRdm(format!(
                "|alpha|^2 = {:e} exceeds rho1*rho4 = {:e}",
                alpha.norm_sqr(),
                clamped[0] * clamped[3]
            )));
        }
        if gamma_off.norm_sqr() > clamped[1] * clamped[2] + STRUCTURAL_TOL {
            return Err(Error::InvalidRdm(format!(
                "|gamma|^2 = {:e} exceeds rho2*rho3 = {:e}",
                gamma_off.norm_sqr(),
                clamped[1] * clamped[2]
            )));
        }
        let rdm = TwoOrbitalRdm {
            rho: clamped,
            alpha,
            gamma_off,
        };
        if let Some(l) = raw_eigenvalues(&rdm)
            .into_iter()
            .find(|&l| !(-STRUCTURAL_TOL..=1.0 + STRUCTURAL_TOL).contains(&l))
        {
            return Err(Error::InvalidRdm(format!("eigenvalue {l:e} outside [0, 1]")));
        }
        Ok(rdm)
    }

    /// A state without coherences.
    pub fn diagonal(rho: [f64; 4]) -> Result<Self> {
        Self::new(rho, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// Reads the block entries of a 4x4 matrix. The parity-forbidden entries
    /// must vanish within `1e-12` and the matrix must be Hermitian.
    pub fn from_matrix(m: &Matrix4<Complex64>) -> Result<Self> {
        for r in 0..4 {
            for c in 0..4 {
                if (m[(r, c)] - m[(c, r)].conj()).norm() > STRUCTURAL_TOL {
                    return Err(Error::NotHermitian((m[(r, c)] - m[(c, r)].conj()).norm()));
                }
                let allowed = r == c || r + c == 3;
                if !allowed && m[(r, c)].norm() > STRUCTURAL_TOL {
                    return Err(Error::InvalidRdm(format!(
                        "parity-forbidden entry ({r}, {c}) = {}",
                        m[(r, c)]
                    )));
                }
            }
        }
        Self::new(
            [m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re],
            m[(0, 3)],
            m[(1, 2)],
        )
    }

    pub fn rho(&self) -> [f64; 4] {
        self.rho
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn gamma_off(&self) -> Complex64 {
        self.gamma_off
    }

    /// Dense 4x4 form in the `(00, 01, 10, 11)` ordering.
    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let c = |x: f64| Complex64::new(x, 0.0);
        let mut m = Matrix4::zeros();
        for k in 0..4 {
            m[(k, k)] = c(self.rho[k]);
        }
        m[(0, 3)] = self.alpha;
        m[(3, 0)] = self.alpha.conj();
        m[(1, 2)] = self.gamma_off;
        m[(2, 1)] = self.gamma_off.conj();
        m
    }

    /// Occupation distribution of orbital `i`: `(empty, occupied)`.
    pub fn marginal_a(&self) -> [f64; 2] {
        [self.rho[0] + self.rho[1], self.rho[2] + self.rho[3]]
    }

    /// Occupation distribution of orbital `j`: `(empty, occupied)`.
    pub fn marginal_b(&self) -> [f64; 2] {
        [self.rho[0] + self.rho[2], self.rho[1] + self.rho[3]]
    }

    pub fn max_coherence(&self) -> f64 {
        self.alpha.norm().max(self.gamma_off.norm())
    }
}

fn raw_eigenvalues(rdm: &TwoOrbitalRdm) -> [f64; 4] {
    let [r1, r2, r3, r4] = rdm.rho;
    let even = ((r1 - r4) / 2.0).hypot(rdm.alpha.norm());
    let odd = ((r2 - r3) / 2.0).hypot(rdm.gamma_off.norm());
    let even_mid = (r1 + r4) / 2.0;
    let odd_mid = (r2 + r3) / 2.0;
    [even_mid + even, even_mid - even, odd_mid + odd, odd_mid - odd]
}

/// Closed-form spectrum `(l0, l1, l2, l3)`: `l0 >= l1` from the
/// `{00, 11}` block, `l2 >= l3` from the `{01, 10}` block, clamped to `[0, 1]`.
pub fn eigenvalues(rdm: &TwoOrbitalRdm) -> [f64; 4] {
    raw_eigenvalues(rdm).map(|l| l.clamp(0.0, 1.0))
}

/// The dephasing channel: drops both coherences.
pub fn dephase(rdm: &TwoOrbitalRdm) -> TwoOrbitalRdm {
    TwoOrbitalRdm {
        rho: rdm.rho,
        alpha: Complex64::new(0.0, 0.0),
        gamma_off: Complex64::new(0.0, 0.0),
    }
}

/// Double-sided occupation measurement `sum_kl (P_k x P_l) rho (P_k x P_l)`
/// applied to an arbitrary 4x4 matrix.
pub fn measure_occupations(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let mut out = Matrix4::zeros();
    for k in 0..2 {
        for l in 0..2 {
            let mut proj = Matrix4::<Complex64>::zeros();
            proj[(2 * k + l, 2 * k + l)] = Complex64::new(1.0, 0.0);
            out += proj * m * proj;
        }
    }
    out
}

fn joint_entropy(rdm: &TwoOrbitalRdm) -> f64 {
    entropy_terms(eigenvalues(rdm))
}

fn dephased_entropy(rdm: &TwoOrbitalRdm) -> f64 {
    entropy_terms(rdm.rho)
}

/// Quantum discord `S(Z(rho)) - S(rho)` in nats.
pub fn discord(rdm: &TwoOrbitalRdm) -> f64 {
    if rdm.alpha.norm() == 0.0 && rdm.gamma_off.norm() == 0.0 {
        return 0.0;
    }
    (dephased_entropy(rdm) - joint_entropy(rdm)).max(0.0)
}

/// `S(rho_A) + S(rho_B) - S(rho)`.
pub fn mutual_information(rdm: &TwoOrbitalRdm) -> f64 {
    entropy_terms(rdm.marginal_a()) + entropy_terms(rdm.marginal_b()) - joint_entropy(rdm)
}

/// Classical correlation under the occupation measurement:
/// `S(rho_A) + S(rho_B) - S(Z(rho))`.
pub fn classical_correlation(rdm: &TwoOrbitalRdm) -> f64 {
    entropy_terms(rdm.marginal_a()) + entropy_terms(rdm.marginal_b()) - dephased_entropy(rdm)
}

/// All correlation measures of one reduced state, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub discord: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub entropy_ab: f64,
    pub entropy_dephased: f64,
    pub entropy_a: f64,
    pub entropy_b: f64,
}

pub fn report(rdm: &TwoOrbitalRdm) -> CorrelationReport {
    let entropy_ab = joint_entropy(rdm);
    let entropy_dephased = dephased_entropy(rdm);
    let entropy_a = entropy_terms(rdm.marginal_a());
    let entropy_b = entropy_terms(rdm.marginal_b());
    CorrelationReport {
        discord: discord(rdm),
        mutual_info: entropy_a + entropy_b - entropy_ab,
        classical_corr: entropy_a + entropy_b - entropy_dephased,
        entropy_ab,
        entropy_dephased,
        entropy_a,
        entropy_b,
    }
}
