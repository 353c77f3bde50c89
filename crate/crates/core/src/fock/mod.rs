//! Occupation-number engine for small systems.
//!
//! A basis state is a bitstring with mode `k` on bit `k`. Creation and
//! annihilation carry the sign `(-1)^(occupied modes below k)`.

mod eigen;
mod hamiltonian;
mod multipartite;
mod observables;
mod verify;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::densities::CMatrix;
use crate::error::{Error, Result};

pub use eigen::{exact_ground_state, GroundState, DENSE_LIMIT, ITERATIVE_LIMIT};
pub use hamiltonian::{build_agassi, build_agassi_raw, build_lmg, SparseHermitianOperator};
pub use multipartite::{multipartite_discord, multipartite_from_rdm, partial_trace_leading, MultipartiteReport, MAX_MULTIPARTITE};
pub use observables::{
    extract_densities, extract_densities_in_basis, reduced_density_matrix,
    reduced_density_matrix_in_basis, two_orbital_rdm_direct, two_orbital_rdm_direct_in_basis,
    FockVector,
};
pub use verify::{hf_basis, lmg_cross_check, verify_hamiltonian_basis, HamiltonianBasisReport, LmgCrossCheck, MAX_VERIFY_OMEGA};

/// Largest supported mode count.
pub const MAX_MODES: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeOp {
    Create,
    Annihilate,
}

/// Applies `a+_mode` or `a_mode` to a basis state. `None` when the result
/// vanishes.
pub fn apply_mode_operator(kind: ModeOp, mode: usize, state: u64) -> Option<(f64, u64)> {
    let bit = 1u64 << mode;
    let occupied = state & bit != 0;
    let next = match kind {
        ModeOp::Create if !occupied => state | bit,
        ModeOp::Annihilate if occupied => state & !bit,
        _ => return None,
    };
    let below = (state & (bit - 1)).count_ones();
    Some((if below.is_multiple_of(2) { 1.0 } else { -1.0 }, next))
}

/// Applies a product of mode operators, rightmost first.
pub fn apply_string(ops: &[(ModeOp, usize)], state: u64) -> Option<(f64, u64)> {
    let mut sign = 1.0;
    let mut s = state;
    for &(kind, mode) in ops.iter().rev() {
        let (x, next) = apply_mode_operator(kind, mode, s)?;
        sign *= x;
        s = next;
    }
    Some((sign, s))
}

/// Sector of basis states: either a fixed particle number, optionally
/// restricted by the parity of the occupation count on a mask, or a fixed
/// total number parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockSpace {
    modes: usize,
    particles: Option<usize>,
    basis: Vec<u64>,
}

impl FockSpace {
    pub fn new(modes: usize, particles: usize) -> Result<Self> {
        Self::build(modes, particles, None)
    }

    /// Keeps states whose occupation count on `mask` has parity `parity`.
    pub fn with_parity(modes: usize, particles: usize, mask: u64, parity: u32) -> Result<Self> {
        Self::build(modes, particles, Some((mask, parity % 2)))
    }

    /// All states with total number parity `parity`, for states that break
    /// particle number.
    pub fn number_parity(modes: usize, parity: u32) -> Result<Self> {
        if modes == 0 || modes > 20 {
            return Err(Error::SizeGuard(format!(
                "number-parity sectors support 1..=20 modes, got {modes}"
            )));
        }
        let basis = (0..1u64 << modes)
            .filter(|s| s.count_ones() % 2 == parity % 2)
            .collect();
        Ok(FockSpace {
            modes,
            particles: None,
            basis,
        })
    }

    fn build(modes: usize, particles: usize, parity: Option<(u64, u32)>) -> Result<Self> {
        if modes == 0 || modes > MAX_MODES {
            return Err(Error::SizeGuard(format!(
                "mode count must be in 1..={MAX_MODES}, got {modes}"
            )));
        }
        if particles > modes {
            return Err(Error::InvalidModel(format!(
                "{particles} particles do not fit in {modes} modes"
            )));
        }
        let mut basis = Vec::new();
        let limit = 1u64 << modes;
        if particles == 0 {
            basis.push(0);
        } else {
            // Gosper's hack: successive integers with the same popcount.
            let mut x: u64 = (1u64 << particles) - 1;
            while x < limit {
                basis.push(x);
                let c = x & x.wrapping_neg();
                let r = x + c;
                x = (((r ^ x) >> 2) / c) | r;
            }
        }
        if let Some((mask, p)) = parity {
            basis.retain(|&s| (s & mask).count_ones() % 2 == p);
        }
        Ok(FockSpace {
            modes,
            particles: Some(particles),
            basis,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// `None` for number-parity sectors.
    pub fn particles(&self) -> Option<usize> {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn state(&self, index: usize) -> u64 {
        self.basis[index]
    }

    pub fn index_of(&self, state: u64) -> Option<usize> {
        self.basis.binary_search(&state).ok()
    }

    pub fn into_shared(self) -> Arc<FockSpace> {
        Arc::new(self)
    }
}

/// Sparse state over the full Fock space, used for intermediate results of
/// operator strings.
pub(crate) type SparseState = BTreeMap<u64, Complex64>;

/// Linear combination `sum_a c_a a_a` or `sum_a c_a a+_a`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LinearOp {
    pub kind: ModeOp,
    pub terms: Vec<(usize, Complex64)>,
}

impl LinearOp {
    pub fn mode(kind: ModeOp, mode: usize) -> Self {
        LinearOp {
            kind,
            terms: vec![(mode, Complex64::new(1.0, 0.0))],
        }
    }

    /// `b_k = sum_a conj(W_ak) a_a` or `b+_k = sum_a W_ak a+_a`, for orbitals
    /// stored as the columns of `w`.
    pub fn rotated(kind: ModeOp, w: &CMatrix, k: usize) -> Self {
        let terms = (0..w.nrows())
            .filter(|&a| w[(a, k)].norm() != 0.0)
            .map(|a| {
                let c = w[(a, k)];
                (a, if kind == ModeOp::Create { c } else { c.conj() })
            })
            .collect();
        LinearOp { kind, terms }
    }

    pub fn adjoint(&self) -> Self {
        LinearOp {
            kind: match self.kind {
                ModeOp::Create => ModeOp::Annihilate,
                ModeOp::Annihilate => ModeOp::Create,
            },
            terms: self.terms.iter().map(|&(a, c)| (a, c.conj())).collect(),
        }
    }

    pub fn apply(&self, state: &SparseState) -> SparseState {
        let mut out = SparseState::new();
        for (&s, &amp) in state {
            for &(mode, c) in &self.terms {
                if let Some((sign, next)) = apply_mode_operator(self.kind, mode, s) {
                    *out.entry(next).or_default() += c * amp * sign;
                }
            }
        }
        out
    }
}

pub(crate) fn inner(a: &SparseState, b: &SparseState) -> Complex64 {
    let (small, large, conj_small) = if a.len() <= b.len() { (a, b, true) } else { (b, a, false) };
    let mut acc = Complex64::new(0.0, 0.0);
    for (s, x) in small {
        if let Some(y) = large.get(s) {
            acc += if conj_small { x.conj() * y } else { y.conj() * x };
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn create_on_vacuum() {
        assert_eq!(apply_mode_operator(ModeOp::Create, 0, 0), Some((1.0, 1)));
        assert_eq!(apply_mode_operator(ModeOp::Create, 0, 1), None);
        assert_eq!(apply_mode_operator(ModeOp::Annihilate, 2, 1), None);
    }

    #[test]
    fn anticommutation_sign() {
        let a = apply_string(&[(ModeOp::Create, 1), (ModeOp::Create, 0)], 0).unwrap();
        let b = apply_string(&[(ModeOp::Create, 0), (ModeOp::Create, 1)], 0).unwrap();
        assert_eq!(a.1, b.1);
        assert_eq!(a.0, -b.0);
    }

    #[test]
    fn number_operator() {
        for state in 0..16u64 {
            let n = apply_string(&[(ModeOp::Create, 2), (ModeOp::Annihilate, 2)], state);
            if state & 4 != 0 {
                assert_eq!(n, Some((1.0, state)));
            } else {
                assert_eq!(n, None);
            }
        }
    }

    #[test]
    fn gosper_enumeration() {
        let s = FockSpace::new(6, 3).unwrap();
        assert_eq!(s.dim(), 20);
        assert!(s.basis().windows(2).all(|w| w[0] < w[1]));
        assert!(s.basis().iter().all(|b| b.count_ones() == 3 && *b < 64));
        assert_eq!(FockSpace::new(4, 0).unwrap().basis(), &[0]);
        assert_eq!(FockSpace::new(4, 4).unwrap().basis(), &[15]);
        for (k, &b) in s.basis().iter().enumerate() {
            assert_eq!(s.index_of(b), Some(k));
        }
    }

    #[test]
    fn parity_filter() {
        let s = FockSpace::with_parity(4, 2, 0b1010, 0).unwrap();
        assert!(s.basis().iter().all(|b| (b & 0b1010).count_ones() % 2 == 0));
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn number_parity_sector() {
        let s = FockSpace::number_parity(4, 0).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(s.particles(), None);
        assert!(s.basis().iter().all(|b| b.count_ones() % 2 == 0));
    }

    #[test]
    fn size_guard() {
        assert!(matches!(FockSpace::new(25, 2), Err(Error::SizeGuard(_))));
        assert!(FockSpace::new(3, 4).is_err());
    }
}
