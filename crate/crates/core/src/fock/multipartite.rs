//! Chain decomposition of the overall entropy into mutual informations and
//! its measured (classical) counterpart.
//!
//! For orbitals `1..K`:
//! `S_ov  = sum_k I(k; k+1..K) + S(rho)` and
//! `S_ov' = sum_k J(k; k+1..K) + S(rho)`, where `J` measures `k+1..K` in the
//! occupation basis. The multipartite discord is `S_ov - S_ov'`.

use num_complex::Complex64;

use super::observables::{reduced_density_matrix, FockVector};
use crate::densities::{hermitian_eigenvalues, CMatrix};
use crate::discord::entropy_terms;
use crate::error::{Error, Result};

/// Largest number of orbitals in a chain.
pub const MAX_MULTIPARTITE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipartiteReport {
    pub discord: f64,
    /// Sum of single-orbital entropies.
    pub overall_entropy: f64,
    /// `S_ov'`.
    pub classical: f64,
    /// `S(rho)` of the listed orbitals.
    pub total_entropy: f64,
}

fn von_neumann(rho: &CMatrix) -> f64 {
    entropy_terms(hermitian_eigenvalues(rho).into_iter().map(|x| x.max(0.0)))
}

/// Traces out the `drop` slowest orbitals of a `2^K` state.
pub fn partial_trace_leading(rho: &CMatrix, k: usize, drop: usize) -> Result<CMatrix> {
    let dim = 1usize << k;
    if rho.shape() != (dim, dim) || drop > k {
        return Err(Error::ShapeMismatch(format!(
            "cannot trace {drop} of {k} orbitals from a {:?} matrix",
            rho.shape()
        )));
    }
    let keep = 1usize << (k - drop);
    let outer = 1usize << drop;
    let mut out = CMatrix::zeros(keep, keep);
    for c in 0..outer {
        let base = c * keep;
        for a in 0..keep {
            for b in 0..keep {
                out[(a, b)] += rho[(base + a, base + b)];
            }
        }
    }
    Ok(out)
}

/// Dephases the `measured` fastest orbitals (occupation measurement).
fn dephase_trailing(rho: &CMatrix, measured: usize) -> CMatrix {
    let mask = (1usize << measured) - 1;
    let mut out = rho.clone();
    for a in 0..rho.nrows() {
        for b in 0..rho.ncols() {
            if a & mask != b & mask {
                out[(a, b)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    out
}

/// Multipartite discord of a `2^K x 2^K` state, orbital 1 slowest.
pub fn multipartite_from_rdm(rho: &CMatrix, k: usize) -> Result<MultipartiteReport> {
    if k == 0 || k > MAX_MULTIPARTITE {
        return Err(Error::SizeGuard(format!(
            "multipartite discord supports 1..={MAX_MULTIPARTITE} orbitals, got {k}"
        )));
    }
    let dim = 1usize << k;
    if rho.shape() != (dim, dim) {
        return Err(Error::ShapeMismatch(format!(
            "expected {dim}x{dim}, got {:?}",
            rho.shape()
        )));
    }
    // suffix[t] = state of orbitals t+1..K (t leading orbitals traced out).
    let suffix: Vec<CMatrix> = (0..k)
        .map(|t| partial_trace_leading(rho, k, t))
        .collect::<Result<_>>()?;
    let total_entropy = von_neumann(rho);
    let mut chain_i = 0.0;
    let mut chain_j = 0.0;
    for t in 0..k - 1 {
        let single = single_orbital(&suffix[t], k - t);
        let rest = &suffix[t + 1];
        chain_i += single + von_neumann(rest) - von_neumann(&suffix[t]);
        // Conditional entropy after measuring the rest: S(measured) - H(outcomes).
        let measured = von_neumann(&dephase_trailing(&suffix[t], k - t - 1));
        let outcomes = entropy_terms((0..rest.nrows()).map(|a| rest[(a, a)].re.max(0.0)));
        chain_j += single - (measured - outcomes);
    }
    let s_ov = chain_i + total_entropy;
    let s_ov_measured = chain_j + total_entropy;
    Ok(MultipartiteReport {
        discord: s_ov - s_ov_measured,
        overall_entropy: s_ov,
        classical: s_ov_measured,
        total_entropy,
    })
}

/// Entropy of the slowest orbital of a `2^m` state.
fn single_orbital(rho: &CMatrix, m: usize) -> f64 {
    let half = 1usize << (m - 1);
    let mut p = [0.0f64; 2];
    for (n, slot) in p.iter_mut().enumerate() {
        for a in 0..half {
            *slot += rho[(n * half + a, n * half + a)].re;
        }
    }
    entropy_terms(p.map(|x| x.max(0.0)))
}

/// Multipartite discord of the listed orbitals of a state, in chain order.
pub fn multipartite_discord(v: &FockVector, orbitals: &[usize]) -> Result<MultipartiteReport> {
    if orbitals.len() > MAX_MULTIPARTITE {
        return Err(Error::SizeGuard(format!(
            "multipartite discord supports at most {MAX_MULTIPARTITE} orbitals, got {}",
            orbitals.len()
        )));
    }
    let rho = reduced_density_matrix(v, orbitals)?;
    multipartite_from_rdm(&rho, orbitals.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{reduced_density_matrix, FockSpace};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn paired_superposition() {
        let space = FockSpace::new(4, 2).unwrap().into_shared();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = FockVector::from_states(space, &[(0b0011, c(h)), (0b1100, c(h))]).unwrap();
        let r = multipartite_discord(&v, &[0, 1, 2, 3]).unwrap();
        assert_abs_diff_eq!(r.overall_entropy, 4.0 * LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(r.total_entropy, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.discord, LN_2, epsilon = 1e-12);
    }

    #[test]
    fn product_state_is_uncorrelated() {
        let space = FockSpace::new(5, 2).unwrap().into_shared();
        let v = FockVector::from_states(space, &[(0b01001, c(1.0))]).unwrap();
        let r = multipartite_discord(&v, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(r.overall_entropy.abs(), 0.0);
        assert!(r.discord.abs() <= 1e-12);
    }

    #[test]
    fn partial_trace_matches_direct_reduction() {
        let space = FockSpace::new(5, 3).unwrap().into_shared();
        let amps = nalgebra::DVector::from_fn(space.dim(), |k, _| {
            Complex64::new((1.3 * k as f64).cos(), (0.4 * k as f64).sin())
        });
        let v = FockVector::normalized(space, amps).unwrap();
        let orbitals = [3, 0, 4, 1];
        let full = reduced_density_matrix(&v, &orbitals).unwrap();
        for t in 0..4 {
            let traced = partial_trace_leading(&full, 4, t).unwrap();
            let direct = reduced_density_matrix(&v, &orbitals[t..]).unwrap();
            assert!((traced - direct).camax() <= 1e-12);
        }
    }

    #[test]
    fn two_orbitals_reduce_to_pair_discord() {
        let space = FockSpace::new(4, 2).unwrap().into_shared();
        let amps = nalgebra::DVector::from_fn(space.dim(), |k, _| c(1.0 + 0.3 * k as f64));
        let v = FockVector::normalized(space, amps).unwrap();
        let r = multipartite_discord(&v, &[1, 2]).unwrap();
        let rdm = crate::fock::two_orbital_rdm_direct(&v, 1, 2).unwrap();
        assert_abs_diff_eq!(r.discord, crate::discord::discord(&rdm), epsilon = 1e-12);
    }

    #[test]
    fn size_guard() {
        let rho = CMatrix::identity(512, 512);
        assert!(matches!(multipartite_from_rdm(&rho, 9), Err(Error::SizeGuard(_))));
    }
}
