use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hamiltonian::SparseHermitianOperator;
use super::observables::FockVector;
use crate::error::{Error, Result};

/// Largest sector diagonalised densely.
pub const DENSE_LIMIT: usize = 1500;
/// Largest sector accepted at all.
pub const ITERATIVE_LIMIT: usize = 200_000;

const RESIDUAL_TOL: f64 = 1e-11;
const KRYLOV_DIM: usize = 120;
const MAX_RESTARTS: usize = 200;
const START_SEED: u64 = 0x5eed_f0c4;

/// Lowest eigenpair of a sector operator.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: FockVector,
}

fn fix_phase(v: &mut DVector<Complex64>) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(k) = v.iter().position(|z| z.norm() >= max - 1e-12) {
        let z = v[k];
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

fn dense(op: &SparseHermitianOperator) -> (f64, DVector<Complex64>) {
    if op.is_real() {
        let eig = op.to_dense_real().symmetric_eigen();
        let k = eig.eigenvalues.imin();
        let v = eig.eigenvectors.column(k).map(|x| Complex64::new(x, 0.0));
        (eig.eigenvalues[k], v)
    } else {
        let eig = op.to_dense().symmetric_eigen();
        let k = eig.eigenvalues.imin();
        (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned())
    }
}

fn dot(a: &DVector<Complex64>, b: &DVector<Complex64>) -> Complex64 {
    a.dotc(b)
}

/// Restarted Lanczos with full reorthogonalisation.
fn lanczos(op: &SparseHermitianOperator, start: DVector<Complex64>) -> Result<(f64, DVector<Complex64>)> {
    let dim = op.dim();
    let m = KRYLOV_DIM.min(dim);
    let mut x = &start / Complex64::new(start.norm(), 0.0);
    let mut last = f64::INFINITY;
    for _ in 0..MAX_RESTARTS {
        let mut basis: Vec<DVector<Complex64>> = vec![x.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        for k in 0..m {
            let mut w = op.apply(&basis[k]);
            alphas.push(dot(&basis[k], &w).re);
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    w -= b * c;
                }
            }
            let beta = w.norm();
            if k + 1 == m || beta < 1e-13 {
                break;
            }
            betas.push(beta);
            basis.push(w / Complex64::new(beta, 0.0));
        }
        let k = alphas.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alphas[i];
            if i + 1 < k {
                t[(i, i + 1)] = betas[i];
                t[(i + 1, i)] = betas[i];
            }
        }
        let eig = t.symmetric_eigen();
        let j = eig.eigenvalues.imin();
        let theta = eig.eigenvalues[j];
        let mut ritz = DVector::<Complex64>::zeros(dim);
        for (i, b) in basis.iter().take(k).enumerate() {
            ritz += b * Complex64::new(eig.eigenvectors[(i, j)], 0.0);
        }
        ritz /= Complex64::new(ritz.norm(), 0.0);
        let residual = (op.apply(&ritz) - &ritz * Complex64::new(theta, 0.0)).norm();
        x = ritz;
        last = residual;
        if residual <= RESIDUAL_TOL {
            return Ok((theta, x));
        }
    }
    Err(Error::NoConvergence(format!(
        "Lanczos residual {last:e} after {MAX_RESTARTS} restarts"
    )))
}

/// Lowest eigenpair: dense below [`DENSE_LIMIT`], restarted Lanczos from a
/// fixed-seed start vector above. The largest-magnitude amplitude is made
/// real positive.
pub fn exact_ground_state(op: &SparseHermitianOperator) -> Result<GroundState> {
    let dim = op.dim();
    if dim == 0 {
        return Err(Error::InvalidModel("empty sector".into()));
    }
    if dim > ITERATIVE_LIMIT {
        return Err(Error::SizeGuard(format!("sector dimension {dim} exceeds {ITERATIVE_LIMIT}")));
    }
    let (energy, mut v) = if dim <= DENSE_LIMIT {
        dense(op)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
        let start = DVector::from_fn(dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
        lanczos(op, start)?
    };
    v /= Complex64::new(v.norm(), 0.0);
    fix_phase(&mut v);
    let residual = (op.apply(&v) - &v * Complex64::new(energy, 0.0)).norm();
    if !(residual <= 1e-9) {
        return Err(Error::NoConvergence(format!("ground-state residual {residual:e}")));
    }
    Ok(GroundState {
        energy,
        state: FockVector::new(op.space().clone(), v)?,
    })
}

#[cfg(test)]
pub(crate) fn lanczos_for_test(op: &SparseHermitianOperator) -> Result<(f64, DVector<Complex64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let start = DVector::from_fn(op.dim(), |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
    lanczos(op, start)
}
