use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;

use super::{inner, FockSpace, LinearOp, ModeOp, SparseState};
use crate::densities::{CMatrix, DensitySet};
use crate::discord::TwoOrbitalRdm;
use crate::error::{Error, Result};

/// Normalised state in a sector.
#[derive(Debug, Clone)]
pub struct FockVector {
    space: Arc<FockSpace>,
    amplitudes: DVector<Complex64>,
}

impl FockVector {
    /// Norm must be 1 within `1e-12`.
    pub fn new(space: Arc<FockSpace>, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for a sector of dimension {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("state norm is {norm}")));
        }
        Ok(FockVector { space, amplitudes })
    }

    /// Normalises `amplitudes` first.
    pub fn normalized(space: Arc<FockSpace>, amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Domain("cannot normalise a zero or non-finite vector".into()));
        }
        Self::new(space, amplitudes / Complex64::new(norm, 0.0))
    }

    /// Superposition of basis states given as `(bitstring, amplitude)`.
    pub fn from_states(space: Arc<FockSpace>, terms: &[(u64, Complex64)]) -> Result<Self> {
        let mut amps = DVector::zeros(space.dim());
        for &(s, a) in terms {
            let k = space
                .index_of(s)
                .ok_or_else(|| Error::Domain(format!("state {s:#b} is not in the sector")))?;
            amps[k] += a;
        }
        Self::normalized(space, amps)
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn modes(&self) -> usize {
        self.space.modes()
    }

    pub(crate) fn to_sparse(&self) -> SparseState {
        self.space
            .basis()
            .iter()
            .zip(self.amplitudes.iter())
            .filter(|(_, a)| a.norm() != 0.0)
            .map(|(&s, &a)| (s, a))
            .collect()
    }
}

fn check_basis(v: &FockVector, w: &CMatrix) -> Result<()> {
    let n = v.modes();
    if w.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!(
            "basis is {:?}, expected {n}x{n}",
            w.shape()
        )));
    }
    let dev = (w.adjoint() * w - CMatrix::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if dev > 1e-10 {
        return Err(Error::NotCanonical(dev));
    }
    Ok(())
}

fn annihilators(n: usize, w: Option<&CMatrix>) -> Vec<LinearOp> {
    (0..n)
        .map(|k| match w {
            None => LinearOp::mode(ModeOp::Annihilate, k),
            Some(w) => LinearOp::rotated(ModeOp::Annihilate, w, k),
        })
        .collect()
}

fn densities_with(v: &FockVector, w: Option<&CMatrix>) -> Result<DensitySet> {
    let n = v.modes();
    let psi = v.to_sparse();
    let ann = annihilators(n, w);
    let singles: Vec<SparseState> = ann.iter().map(|a| a.apply(&psi)).collect();
    let mut gamma = CMatrix::zeros(n, n);
    let mut kappa = CMatrix::zeros(n, n);
    let mut two_body = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // gamma_ij = <a+_j a_i> = <a_j psi | a_i psi>.
            gamma[(i, j)] = inner(&singles[j], &singles[i]);
            if i == j {
                continue;
            }
            // a_j a_i psi
            let pair = ann[j].apply(&singles[i]);
            kappa[(i, j)] = inner(&psi, &pair);
            // n_i n_j = (a_j a_i)+ (a_j a_i)
            two_body[(i, j)] = inner(&pair, &pair).re;
        }
    }
    DensitySet::new(gamma, kappa, two_body)
}

/// `gamma`, `kappa` and the two-body diagonal as expectation values in the
/// mode basis.
pub fn extract_densities(v: &FockVector) -> Result<DensitySet> {
    densities_with(v, None)
}

/// Same, for the orbitals `b+_k = sum_a W_ak a+_a` given as columns of `w`.
pub fn extract_densities_in_basis(v: &FockVector, w: &CMatrix) -> Result<DensitySet> {
    check_basis(v, w)?;
    densities_with(v, Some(w))
}

fn rdm_with(v: &FockVector, orbitals: &[usize], w: Option<&CMatrix>) -> Result<CMatrix> {
    let n = v.modes();
    let k = orbitals.len();
    if k == 0 || k > 16 {
        return Err(Error::SizeGuard(format!("{k} orbitals requested")));
    }
    for (a, &o) in orbitals.iter().enumerate() {
        if o >= n || orbitals[..a].contains(&o) {
            return Err(Error::InvalidPair(o, orbitals[0], n));
        }
    }
    let ann: Vec<LinearOp> = orbitals
        .iter()
        .map(|&o| match w {
            None => LinearOp::mode(ModeOp::Annihilate, o),
            Some(w) => LinearOp::rotated(ModeOp::Annihilate, w, o),
        })
        .collect();
    let psi = v.to_sparse();
    let dim = 1usize << k;
    // u_a = P0 C_a+ psi with C_a = prod_k (b+_{o_k})^{a_k}, o_1 leftmost and
    // slowest in the index; P0 projects the listed orbitals onto vacuum.
    let vectors: Vec<SparseState> = (0..dim)
        .map(|a| {
            let mut s = psi.clone();
            for (pos, op) in ann.iter().enumerate() {
                if a >> (k - 1 - pos) & 1 == 1 {
                    s = op.apply(&s);
                }
            }
            for op in &ann {
                s = op.apply(&op.adjoint().apply(&s));
            }
            s
        })
        .collect();
    let mut rho = CMatrix::zeros(dim, dim);
    for a in 0..dim {
        for b in a..dim {
            let x = inner(&vectors[b], &vectors[a]);
            rho[(a, b)] = x;
            rho[(b, a)] = x.conj();
        }
    }
    Ok(rho)
}

/// Reduced state of the listed orbitals, `rho_ab = <a| rho |b>` with
/// `|n_1 .. n_K> = (a+_{o_1})^{n_1} .. (a+_{o_K})^{n_K} |0>` and `o_1` the
/// slowest index bit.
pub fn reduced_density_matrix(v: &FockVector, orbitals: &[usize]) -> Result<CMatrix> {
    rdm_with(v, orbitals, None)
}

pub fn reduced_density_matrix_in_basis(
    v: &FockVector,
    w: &CMatrix,
    orbitals: &[usize],
) -> Result<CMatrix> {
    check_basis(v, w)?;
    rdm_with(v, orbitals, Some(w))
}

fn to_two_orbital(m: &CMatrix) -> Result<TwoOrbitalRdm> {
    let mut m4 = Matrix4::<Complex64>::zeros();
    for r in 0..4 {
        for c in 0..4 {
            m4[(r, c)] = m[(r, c)];
        }
    }
    // <00|rho|11> = <a+_i a+_j> = -conj(kappa_ji); the block entry is conj(kappa_ji).
    m4[(0, 3)] = -m4[(0, 3)];
    m4[(3, 0)] = -m4[(3, 0)];
    TwoOrbitalRdm::from_matrix(&m4)
}

/// Two-orbital state of modes `(i, j)` from all sixteen matrix elements.
pub fn two_orbital_rdm_direct(v: &FockVector, i: usize, j: usize) -> Result<TwoOrbitalRdm> {
    if i == j {
        return Err(Error::InvalidPair(i, j, v.modes()));
    }
    to_two_orbital(&reduced_density_matrix(v, &[i, j])?)
}

/// Same, for orbitals `(i, j)` of the rotated basis `w`.
pub fn two_orbital_rdm_direct_in_basis(
    v: &FockVector,
    w: &CMatrix,
    i: usize,
    j: usize,
) -> Result<TwoOrbitalRdm> {
    if i == j {
        return Err(Error::InvalidPair(i, j, v.modes()));
    }
    to_two_orbital(&reduced_density_matrix_in_basis(v, w, &[i, j])?)
}
