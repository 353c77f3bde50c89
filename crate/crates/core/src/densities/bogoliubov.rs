use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

/// Largest canonicity violation accepted by [`transform_densities`].
pub const CANONICAL_TOL: f64 = 1e-8;

/// Amplitudes of `b+_k = sum_l U_lk c+_l + V_lk c_l`, mapping operators of a
/// reference (natural) basis `c` to a general basis `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovTransform {
    pub u: CMatrix,
    pub v: CMatrix,
}

impl BogoliubovTransform {
    pub fn identity(dim: usize) -> Self {
        BogoliubovTransform {
            u: CMatrix::identity(dim, dim),
            v: CMatrix::zeros(dim, dim),
        }
    }

    /// A pure orbital rotation (no particle-hole mixing).
    pub fn particle(u: CMatrix) -> Self {
        let n = u.nrows();
        BogoliubovTransform {
            u,
            v: CMatrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    /// The doubled-space matrix `[[U, V*], [V, U*]]`, unitary iff canonical.
    pub fn to_doubled(&self) -> CMatrix {
        let n = self.dim();
        let mut w = CMatrix::zeros(2 * n, 2 * n);
        w.view_mut((0, 0), (n, n)).copy_from(&self.u);
        w.view_mut((0, n), (n, n)).copy_from(&self.v.conjugate());
        w.view_mut((n, 0), (n, n)).copy_from(&self.v);
        w.view_mut((n, n), (n, n)).copy_from(&self.u.conjugate());
        w
    }

    /// Reads `U` and `V` from the left half of a doubled-space matrix.
    pub fn from_doubled(w: &CMatrix) -> Result<Self> {
        if !w.is_square() || !w.nrows().is_multiple_of(2) {
            return Err(Error::ShapeMismatch(format!(
                "doubled matrix must be square with even size, got {:?}",
                w.shape()
            )));
        }
        let n = w.nrows() / 2;
        Ok(BogoliubovTransform {
            u: w.view((0, 0), (n, n)).into_owned(),
            v: w.view((n, 0), (n, n)).into_owned(),
        })
    }

    /// Applies `self` after `other`, as a product of doubled-space matrices.
    pub fn compose(&self, other: &BogoliubovTransform) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose transforms of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Self::from_doubled(&(other.to_doubled() * self.to_doubled()))
    }
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute deviation from the four canonicity relations
/// `U+U + V+V = I`, `UU+ + V*V^T = I`, `U^T V + V^T U = 0`, `UV+ + V*U^T = 0`.
pub fn check_canonical(t: &BogoliubovTransform) -> Result<f64> {
    let n = t.u.nrows();
    if t.u.shape() != (n, n) || t.v.shape() != (n, n) {
        return Err(Error::ShapeMismatch(format!(
            "U is {:?} and V is {:?}",
            t.u.shape(),
            t.v.shape()
        )));
    }
    let id = CMatrix::identity(n, n);
    let (u, v) = (&t.u, &t.v);
    let r1 = u.adjoint() * u + v.adjoint() * v - &id;
    let r2 = u * u.adjoint() + v.conjugate() * v.transpose() - &id;
    let r3 = u.transpose() * v + v.transpose() * u;
    let r4 = u * v.adjoint() + v.conjugate() * u.transpose();
    Ok([r1, r2, r3, r4].iter().map(max_abs).fold(0.0, f64::max))
}

/// One-body density and pairing tensor, in the basis reached by `t`, of a
/// state that is diagonal in the reference basis with occupations `p`.
pub fn transform_densities(t: &BogoliubovTransform, p: &[f64]) -> Result<(CMatrix, CMatrix)> {
    let violation = check_canonical(t)?;
    if violation > CANONICAL_TOL {
        return Err(Error::NotCanonical(violation));
    }
    let n = t.dim();
    if p.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "{} occupations for a transform of dimension {n}",
            p.len()
        )));
    }
    if let Some(x) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::Domain(format!("occupation {x} outside [0, 1]")));
    }
    let occ = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        p.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let holes = CMatrix::identity(n, n) - &occ;
    let (u, v) = (&t.u, &t.v);
    let gamma = v.adjoint() * &holes * v + u.adjoint() * &occ * u;
    let kappa = v.adjoint() * &holes * u.conjugate() + u.adjoint() * &occ * v.conjugate();
    Ok((gamma, kappa))
}
