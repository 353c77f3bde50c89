use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::{apply_string, FockSpace, ModeOp, MAX_MODES};
use super::eigen::ITERATIVE_LIMIT;
use crate::agassi::{AgassiModelSpec, OrbitalLabel};
use crate::densities::CMatrix;
use crate::error::{Error, Result};

/// Hermitian operator restricted to a sector, stored as full sparse rows.
#[derive(Debug, Clone)]
pub struct SparseHermitianOperator {
    space: Arc<FockSpace>,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseHermitianOperator {
    /// Builds from `(row, col, value)` triples; duplicates are summed and
    /// the result must be Hermitian.
    pub fn from_triples(
        space: Arc<FockSpace>,
        triples: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Result<Self> {
        let dim = space.dim();
        let mut maps: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); dim];
        for (r, c, x) in triples {
            if r >= dim || c >= dim {
                return Err(Error::ShapeMismatch(format!("entry ({r}, {c}) outside dimension {dim}")));
            }
            if !(x.re.is_finite() && x.im.is_finite()) {
                return Err(Error::InvalidModel(format!("non-finite entry at ({r}, {c})")));
            }
            *maps[r].entry(c).or_default() += x;
        }
        let rows: Vec<Vec<(usize, Complex64)>> = maps
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, x)| x.norm() != 0.0).collect())
            .collect();
        let op = SparseHermitianOperator { space, rows };
        let residual = op.hermiticity_residual();
        if residual > 1e-12 {
            return Err(Error::NotHermitian(residual));
        }
        Ok(op)
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Upper-triangle entries `(row, col, value)` with `col >= row`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .filter(move |(c, _)| *c >= r)
                .map(move |&(c, x)| (r, c, x))
        })
    }

    pub fn row(&self, r: usize) -> &[(usize, Complex64)] {
        &self.rows[r]
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, x) in row {
                let back = self.rows[c]
                    .binary_search_by_key(&r, |&(k, _)| k)
                    .map(|k| self.rows[c][k].1)
                    .unwrap_or_default();
                worst = worst.max((x - back.conj()).norm());
            }
        }
        worst
    }

    pub fn is_real(&self) -> bool {
        self.rows.iter().flatten().all(|(_, x)| x.im == 0.0)
    }

    pub fn apply(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        let y: Vec<Complex64> = self
            .rows
            .par_iter()
            .map(|row| row.iter().map(|&(c, v)| v * x[c]).sum())
            .collect();
        DVector::from_vec(y)
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, x) in row {
                m[(r, c)] = x;
            }
        }
        m
    }

    pub fn to_dense_real(&self) -> DMatrix<f64> {
        self.to_dense().map(|z| z.re)
    }

    pub fn diagonal(&self, r: usize) -> f64 {
        self.rows[r]
            .binary_search_by_key(&r, |&(k, _)| k)
            .map(|k| self.rows[r][k].1.re)
            .unwrap_or(0.0)
    }
}

type Term = (f64, Vec<(ModeOp, usize)>);

fn mode(sigma: i32, m: i32, omega: usize) -> Result<usize> {
    Ok(OrbitalLabel::new(sigma, m, omega)?.index())
}

/// Agassi Hamiltonian
/// `eps J0 - g sum_{s,s'} A+_s A_s' - (V/2) (J+^2 + J-^2)` on `omega`
/// particles, in the sector with an even number of particles in the upper
/// level.
pub fn build_agassi_raw(omega: usize, epsilon: f64, g: f64, v: f64) -> Result<SparseHermitianOperator> {
    if omega < 2 || !omega.is_multiple_of(2) {
        return Err(Error::InvalidModel(format!("omega must be even and >= 2, got {omega}")));
    }
    let modes = 2 * omega;
    if modes > MAX_MODES {
        return Err(Error::SizeGuard(format!(
            "omega = {omega} needs {modes} modes, limit is {MAX_MODES}"
        )));
    }
    if ![epsilon, g, v].iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidModel("non-finite coupling".into()));
    }
    let upper_mask = (0..modes)
        .filter(|k| k % 2 == 1)
        .fold(0u64, |acc, k| acc | (1u64 << k));
    let space = FockSpace::with_parity(modes, omega, upper_mask, 0)?;
    if space.dim() > ITERATIVE_LIMIT {
        return Err(Error::SizeGuard(format!(
            "sector dimension {} exceeds {ITERATIVE_LIMIT}",
            space.dim()
        )));
    }
    let space = space.into_shared();

    let half = (omega / 2) as i32;
    let ms: Vec<i32> = (1..=half).flat_map(|k| [k, -k]).collect();
    let mut terms: Vec<Term> = Vec::new();
    if g != 0.0 {
        for s in [-1, 1] {
            for s2 in [-1, 1] {
                for m in 1..=half {
                    for m2 in 1..=half {
                        terms.push((
                            -g,
                            vec![
                                (ModeOp::Create, mode(s, m, omega)?),
                                (ModeOp::Create, mode(s, -m, omega)?),
                                (ModeOp::Annihilate, mode(s2, -m2, omega)?),
                                (ModeOp::Annihilate, mode(s2, m2, omega)?),
                            ],
                        ));
                    }
                }
            }
        }
    }
    if v != 0.0 {
        for &m in &ms {
            for &m2 in &ms {
                terms.push((
                    -0.5 * v,
                    vec![
                        (ModeOp::Create, mode(1, m, omega)?),
                        (ModeOp::Annihilate, mode(-1, m, omega)?),
                        (ModeOp::Create, mode(1, m2, omega)?),
                        (ModeOp::Annihilate, mode(-1, m2, omega)?),
                    ],
                ));
                terms.push((
                    -0.5 * v,
                    vec![
                        (ModeOp::Create, mode(-1, m, omega)?),
                        (ModeOp::Annihilate, mode(1, m, omega)?),
                        (ModeOp::Create, mode(-1, m2, omega)?),
                        (ModeOp::Annihilate, mode(1, m2, omega)?),
                    ],
                ));
            }
        }
    }

    let rows: Vec<Vec<(usize, usize, Complex64)>> = (0..space.dim())
        .into_par_iter()
        .map(|col| {
            let state = space.state(col);
            let upper = (state & upper_mask).count_ones() as f64;
            let lower = omega as f64 - upper;
            let mut out = vec![(col, col, Complex64::new(0.5 * epsilon * (upper - lower), 0.0))];
            for (coef, ops) in &terms {
                if let Some((sign, next)) = apply_string(ops, state) {
                    if let Some(row) = space.index_of(next) {
                        out.push((row, col, Complex64::new(coef * sign, 0.0)));
                    }
                }
            }
            out
        })
        .collect();
    SparseHermitianOperator::from_triples(space, rows.into_iter().flatten())
}

pub fn build_agassi(spec: &AgassiModelSpec) -> Result<SparseHermitianOperator> {
    build_agassi_raw(spec.omega(), spec.epsilon(), spec.g(), spec.v())
}

/// LMG Hamiltonian on `n` particles in `n` doublets (`g = 0`,
/// `V = chi / (n - 1)`, unit splitting).
pub fn build_lmg(n: usize, chi: f64) -> Result<SparseHermitianOperator> {
    if n < 2 {
        return Err(Error::InvalidModel(format!("N must be >= 2, got {n}")));
    }
    if !(chi.is_finite() && chi >= 0.0) {
        return Err(Error::InvalidModel(format!("chi must be finite and >= 0, got {chi}")));
    }
    build_agassi_raw(n, 1.0, 0.0, chi / (n as f64 - 1.0))
}
