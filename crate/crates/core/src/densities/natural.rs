use nalgebra::DVector;
use num_complex::Complex64;

use super::{ensure_hermitian, CMatrix};
use crate::error::Result;

/// Eigen-decomposition of the one-body density: occupations in descending
/// order and the orbitals (columns of `basis`) that carry them.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalOccupations {
    pub occupations: Vec<f64>,
    pub basis: CMatrix,
}

/// Occupations closer than this are treated as degenerate when ordering.
const DEGENERACY_TOL: f64 = 1e-10;

/// Index of the first component of maximal magnitude (ties within `1e-12`).
fn pivot(v: &DVector<Complex64>) -> usize {
    let max = v.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    v.iter()
        .position(|z| z.norm() >= max - 1e-12)
        .unwrap_or(0)
}

/// Multiplies the vector by a phase so its pivot component is real positive.
fn fix_phase(v: &mut DVector<Complex64>) {
    let z = v[pivot(v)];
    if z.norm() > 0.0 {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

/// Diagonalises a Hermitian one-body density.
///
/// Orbitals are phase-fixed so their largest component is real positive.
/// Degenerate occupations are ordered by the position of that component,
/// then by the component magnitudes.
pub fn natural_orbitals(gamma: &CMatrix) -> Result<NaturalOccupations> {
    ensure_hermitian(gamma)?;
    let n = gamma.nrows();
    let herm = (gamma + gamma.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();

    let mut pairs: Vec<(f64, DVector<Complex64>)> = (0..n)
        .map(|k| {
            let mut v = eig.eigenvectors.column(k).into_owned();
            fix_phase(&mut v);
            (eig.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    // Reorder inside each degenerate run.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (pairs[start].0 - pairs[end].0).abs() <= DEGENERACY_TOL {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| {
            pivot(&a.1).cmp(&pivot(&b.1)).then_with(|| {
                let ka: Vec<f64> = a.1.iter().map(|z| z.norm()).collect();
                let kb: Vec<f64> = b.1.iter().map(|z| z.norm()).collect();
                kb.partial_cmp(&ka).unwrap_or(std::cmp::Ordering::Equal)
            })
        });
        start = end;
    }

    let occupations = pairs.iter().map(|(p, _)| *p).collect();
    let columns: Vec<DVector<Complex64>> = pairs.into_iter().map(|(_, v)| v).collect();
    Ok(NaturalOccupations {
        occupations,
        basis: CMatrix::from_columns(&columns),
    })
}
