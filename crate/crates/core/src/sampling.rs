//! Seeded random states and transformations for property checks.

use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::densities::{BogoliubovTransform, CMatrix};
use crate::discord::TwoOrbitalRdm;
use crate::error::Result;
use crate::fock::{FockSpace, FockVector};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller.
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u.ln()).sqrt() * (TAU * v).cos()
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

/// `exp(X)` with `X` anti-Hermitian.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let x = (&g - g.adjoint()) * Complex64::new(0.5, 0.0);
    x.exp()
}

/// Canonical transform `exp(K)` with `K = [[X, Y*], [Y, X*]]`, `X`
/// anti-Hermitian and `Y` antisymmetric.
pub fn random_canonical_transform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BogoliubovTransform> {
    let gx = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let gy = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let x = (&gx - gx.adjoint()) * Complex64::new(0.5, 0.0);
    let y = (&gy - gy.transpose()) * Complex64::new(0.5, 0.0);
    let mut k = CMatrix::zeros(2 * n, 2 * n);
    k.view_mut((0, 0), (n, n)).copy_from(&x);
    k.view_mut((0, n), (n, n)).copy_from(&y.conjugate());
    k.view_mut((n, 0), (n, n)).copy_from(&y);
    k.view_mut((n, n), (n, n)).copy_from(&x.conjugate());
    BogoliubovTransform::from_doubled(&k.exp())
}

/// Orbital rotation only (`V = 0`).
pub fn random_particle_transform<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BogoliubovTransform {
    BogoliubovTransform::particle(random_unitary(n, rng))
}

/// Gaussian amplitudes over a sector, normalised.
pub fn random_sector_state<R: Rng + ?Sized>(space: Arc<FockSpace>, rng: &mut R) -> Result<FockVector> {
    let amps = DVector::from_fn(space.dim(), |_, _| complex_gaussian(rng));
    FockVector::normalized(space, amps)
}

/// A valid two-orbital state. Each coherence is zero with probability
/// `zero_prob`, otherwise it has a random phase and a magnitude up to the
/// positivity bound.
pub fn random_rdm<R: Rng + ?Sized>(rng: &mut R, zero_prob: f64) -> Result<TwoOrbitalRdm> {
    let raw: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..1.0f64));
    let total: f64 = raw.iter().sum();
    let mut rho = raw.map(|x| x / total);
    let drift = 1.0 - rho.iter().sum::<f64>();
    rho[0] += drift;
    let mut coherence = |bound: f64| {
        if rng.gen_bool(zero_prob) {
            Complex64::new(0.0, 0.0)
        } else {
            let r = rng.gen_range(0.0..1.0) * bound.sqrt() * (1.0 - 1e-9);
            Complex64::from_polar(r, rng.gen_range(0.0..TAU))
        }
    };
    let alpha = coherence(rho[0] * rho[3]);
    let gamma = coherence(rho[1] * rho[2]);
    TwoOrbitalRdm::new(rho, alpha, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::check_canonical;

    #[test]
    fn unitary_and_canonical() {
        let mut rng = seeded_rng(7);
        let u = random_unitary(5, &mut rng);
        let dev = (u.adjoint() * &u - CMatrix::identity(5, 5)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-12);
        let t = random_canonical_transform(4, &mut rng).unwrap();
        assert!(check_canonical(&t).unwrap() < 1e-12);
        assert!(t.v.iter().any(|z| z.norm() > 1e-3));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = random_rdm(&mut seeded_rng(3), 0.2).unwrap();
        let b = random_rdm(&mut seeded_rng(3), 0.2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sector_state_is_normalised() {
        let space = FockSpace::new(6, 3).unwrap().into_shared();
        let v = random_sector_state(space, &mut seeded_rng(1)).unwrap();
        assert!((v.amplitudes().norm() - 1.0).abs() < 1e-12);
    }
}
