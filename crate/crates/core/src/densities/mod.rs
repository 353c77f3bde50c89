//! One-body density, pairing tensor and two-body diagonal of a many-fermion
//! state, and the two-orbital reduced states assembled from them.
//!
//! Index conventions: `gamma[(i, j)] = <a+_j a_i>`, `kappa[(i, j)] = <a_j a_i>`,
//! `two_body_diag[(i, j)] = <a+_i a+_j a_j a_i>` with a zero diagonal.

mod bogoliubov;
pub mod io;
mod natural;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::discord::{self, binary_entropy, entropy_terms, TwoOrbitalRdm};
use crate::error::{Error, Result};

pub use bogoliubov::{check_canonical, transform_densities, BogoliubovTransform};
pub use natural::{natural_orbitals, NaturalOccupations};

pub type CMatrix = DMatrix<Complex64>;

/// Residual above which non-Hermitian (or non-antisymmetric) input is rejected
/// rather than symmetrised.
pub const SYMMETRY_REJECT_TOL: f64 = 1e-8;
/// Slack on occupation-like quantities (eigenvalues of gamma, two-body diagonal).
pub const OCCUPATION_TOL: f64 = 1e-10;

/// Densities over `dim` orbitals.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySet {
    gamma: CMatrix,
    kappa: CMatrix,
    two_body_diag: DMatrix<f64>,
    ingest_residual: f64,
}

fn hermitian_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn antisymmetry_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] + m[(j, i)]).norm());
        }
    }
    worst
}

pub(crate) fn ensure_hermitian(m: &CMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let residual = hermitian_residual(m);
    if residual > SYMMETRY_REJECT_TOL {
        return Err(Error::NotHermitian(residual));
    }
    Ok(residual)
}

/// Hermitian eigenvalues in ascending order.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

impl DensitySet {
    /// Validates the densities. Hermiticity of `gamma`, antisymmetry of
    /// `kappa` and symmetry of the two-body diagonal are enforced by
    /// symmetrisation; residuals above `1e-8` are errors. Every pair must
    /// assemble into a valid two-orbital state.
    pub fn new(gamma: CMatrix, kappa: CMatrix, two_body_diag: DMatrix<f64>) -> Result<Self> {
        let n = gamma.nrows();
        if n == 0 {
            return Err(Error::InvalidDensities("no orbitals".into()));
        }
        for (name, shape) in [
            ("gamma", gamma.shape()),
            ("kappa", kappa.shape()),
            ("two_body_diag", two_body_diag.shape()),
        ] {
            if shape != (n, n) {
                return Err(Error::ShapeMismatch(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    shape.0, shape.1
                )));
            }
        }
        let finite = gamma.iter().all(|z| z.is_finite())
            && kappa.iter().all(|z| z.is_finite())
            && two_body_diag.iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidDensities("non-finite entry".into()));
        }

        let herm = ensure_hermitian(&gamma)?;
        let anti = antisymmetry_residual(&kappa);
        if anti > SYMMETRY_REJECT_TOL {
            return Err(Error::InvalidDensities(format!(
                "kappa is not antisymmetric (residual {anti:e})"
            )));
        }
        let sym = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (two_body_diag[(i, j)] - two_body_diag[(j, i)]).abs())
            .fold(0.0f64, f64::max);
        if sym > SYMMETRY_REJECT_TOL {
            return Err(Error::InvalidDensities(format!(
                "two-body diagonal is not symmetric (residual {sym:e})"
            )));
        }

        let gamma = (&gamma + gamma.adjoint()) * Complex64::new(0.5, 0.0);
        let kappa = (&kappa - kappa.transpose()) * Complex64::new(0.5, 0.0);
        let mut two_body_diag = (&two_body_diag + two_body_diag.transpose()) * 0.5;
        for i in 0..n {
            two_body_diag[(i, i)] = 0.0;
        }

        for (k, p) in hermitian_eigenvalues(&gamma).into_iter().enumerate() {
            if !(-OCCUPATION_TOL..=1.0 + OCCUPATION_TOL).contains(&p) {
                return Err(Error::InvalidDensities(format!(
                    "eigenvalue {k} of gamma is {p}, outside [0, 1]"
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let g = two_body_diag[(i, j)];
                let bound = gamma[(i, i)].re.min(gamma[(j, j)].re);
                if g < -OCCUPATION_TOL || g > bound + OCCUPATION_TOL {
                    return Err(Error::InvalidDensities(format!(
                        "two-body diagonal ({i}, {j}) = {g} outside [0, {bound}]"
                    )));
                }
            }
        }

        let set = DensitySet {
            gamma,
            kappa,
            two_body_diag,
            ingest_residual: herm.max(anti).max(sym),
        };
        for i in 0..n {
            for j in (i + 1)..n {
                set.assemble_rdm(i, j).map_err(|e| match e {
                    Error::InvalidRdm(m) => Error::InvalidRdm(format!("pair ({i}, {j}): {m}")),
                    other => other,
                })?;
            }
        }
        Ok(set)
    }

    /// Densities of a quasiparticle vacuum, whose two-body diagonal follows
    /// from `gamma` and `kappa`.
    pub fn from_quasiparticle_vacuum(gamma: CMatrix, kappa: CMatrix) -> Result<Self> {
        let two_body = qp_vacuum_two_body(&gamma, &kappa)?;
        Self::new(gamma, kappa, two_body)
    }

    pub fn dim(&self) -> usize {
        self.gamma.nrows()
    }

    pub fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    pub fn kappa(&self) -> &CMatrix {
        &self.kappa
    }

    pub fn two_body_diag(&self) -> &DMatrix<f64> {
        &self.two_body_diag
    }

    /// Largest symmetry residual removed on ingestion.
    pub fn ingest_residual(&self) -> f64 {
        self.ingest_residual
    }

    /// Two-orbital reduced state of orbitals `i` (slow index) and `j`.
    pub fn assemble_rdm(&self, i: usize, j: usize) -> Result<TwoOrbitalRdm> {
        let n = self.dim();
        if i == j || i >= n || j >= n {
            return Err(Error::InvalidPair(i, j, n));
        }
        let gii = self.gamma[(i, i)].re;
        let gjj = self.gamma[(j, j)].re;
        let g2 = self.two_body_diag[(i, j)];
        TwoOrbitalRdm::new(
            [1.0 - gii - gjj + g2, gjj - g2, gii - g2, g2],
            self.kappa[(j, i)].conj(),
            self.gamma[(j, i)],
        )
    }
}

/// Two-body diagonal of a quasiparticle vacuum:
/// `G_ij = gamma_ii gamma_jj + |kappa_ij|^2 - |gamma_ij|^2`, zero on the diagonal.
pub fn qp_vacuum_two_body(gamma: &CMatrix, kappa: &CMatrix) -> Result<DMatrix<f64>> {
    let n = gamma.nrows();
    if gamma.shape() != (n, n) || kappa.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!(
            "gamma {:?} and kappa {:?} must be square and equal",
            gamma.shape(),
            kappa.shape()
        )));
    }
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let g = gamma[(i, i)].re * gamma[(j, j)].re + kappa[(i, j)].norm_sqr()
                - gamma[(i, j)].norm_sqr();
            if !(-OCCUPATION_TOL..=1.0 + OCCUPATION_TOL).contains(&g) {
                return Err(Error::InvalidDensities(format!(
                    "separable two-body element ({i}, {j}) = {g} is outside [0, 1]"
                )));
            }
            out[(i, j)] = g.clamp(0.0, 1.0);
        }
    }
    Ok(out)
}

/// Sum of single-orbital occupation entropies `sum_i H2(gamma_ii)`.
pub fn overall_entropy(gamma: &CMatrix) -> Result<f64> {
    ensure_hermitian(gamma)?;
    let mut total = 0.0;
    for i in 0..gamma.nrows() {
        let p = gamma[(i, i)].re;
        if !(-OCCUPATION_TOL..=1.0 + OCCUPATION_TOL).contains(&p) {
            return Err(Error::InvalidDensities(format!(
                "occupation gamma[{i}][{i}] = {p} outside [0, 1]"
            )));
        }
        total += binary_entropy(p.clamp(0.0, 1.0));
    }
    Ok(total)
}

/// `-sum_l p_l ln p_l` over natural occupations.
pub fn one_body_entropy(gamma: &CMatrix) -> Result<f64> {
    ensure_hermitian(gamma)?;
    let values = hermitian_eigenvalues(gamma);
    if let Some(p) = values.iter().find(|p| !(-1e-8..=1.0 + 1e-8).contains(*p)) {
        return Err(Error::InvalidDensities(format!(
            "natural occupation {p} outside [0, 1]"
        )));
    }
    Ok(entropy_terms(values))
}

/// Discord of every orbital pair; symmetric with a zero diagonal.
pub fn all_pairs_discord(d: &DensitySet) -> Result<DMatrix<f64>> {
    let n = d.dim();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| d.assemble_rdm(i, j).map(|rdm| discord::discord(&rdm)))
        .collect::<Result<Vec<f64>>>()?;
    let mut out = DMatrix::zeros(n, n);
    for (&(i, j), v) in pairs.iter().zip(values) {
        out[(i, j)] = v;
        out[(j, i)] = v;
    }
    Ok(out)
}
