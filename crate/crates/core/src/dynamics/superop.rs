// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{frobenius, matrix_unit, random_matrix, re, unvectorize, vectorize, CMatrix, C64};

const LINEARITY_TOL: f64 = 1e-9;

/// Linear map on `d × d` operators as a `d² × d²` matrix acting on
/// column-stacked vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.shape() != (dim * dim, dim * dim) {
            return Err(Error::Precondition(format!(
                "superoperator on d = {dim} needs a {0}×{0} matrix, got {1:?}",
                dim * dim,
                matrix.shape()
            )));
        }
        Ok(Self { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::identity(dim * dim, dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        unvectorize(&(&self.matrix * vectorize(rho)), self.dim)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Superoperator) -> Superoperator {
        Superoperator {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn scale(&self, c: f64) -> Superoperator {
        Superoperator {
            dim: self.dim,
            matrix: &self.matrix * re(c),
        }
    }

    pub fn add(&self, other: &Superoperator) -> Superoperator {
        Superoperator {
            dim: self.dim,
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.matrix)
    }

    /// `‖A − B‖_F / ‖B‖_F` with `B = reference`.
    pub fn relative_distance(&self, reference: &Superoperator) -> f64 {
        frobenius(&(&self.matrix - &reference.matrix)) / frobenius(&reference.matrix).max(f64::MIN_POSITIVE)
    }

    /// `max |vec(I)† L|`: zero for trace-preserving generators.
    pub fn trace_annihilation_defect(&self) -> f64 {
        let d = self.dim;
        (0..d * d)
            .map(|col| {
                (0..d)
                    .map(|k| self.matrix[(k + k * d, col)])
                    .sum::<C64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max |L(E_kl†) − L(E_kl)†|` over all matrix units.
    pub fn hermiticity_preservation_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for k in 0..d {
            for l in 0..d {
                let col_kl = k + l * d;
                let col_lk = l + k * d;
                for i in 0..d {
                    for j in 0..d {
                        // L(E_lk)_{ij} vs conj(L(E_kl)_{ji})
                        let a = self.matrix[(i + j * d, col_lk)];
                        let b = self.matrix[(j + i * d, col_kl)].conj();
                        worst = worst.max((a - b).norm());
                    }
                }
            }
        }
        worst
    }

    /// `‖[self, other]‖_F`.
    pub fn commutator_norm(&self, other: &Superoperator) -> f64 {
        frobenius(&(&self.matrix * &other.matrix - &other.matrix * &self.matrix))
    }
}

/// Matrix of a linear operator-to-operator map; column `k` is the image of
/// the `k`-th matrix unit. Linearity is spot-checked on random pairs first.
pub fn build_superoperator<F>(action: F, dim: usize) -> Result<Superoperator>
where
    F: Fn(&CMatrix) -> CMatrix,
{
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..3 {
        let (a, b) = (random_matrix(dim, &mut rng), random_matrix(dim, &mut rng));
        let (ca, cb) = (C64::new(0.7, -0.3), C64::new(-1.1, 0.4));
        let lhs = action(&(&a * ca + &b * cb));
        let rhs = action(&a) * ca + action(&b) * cb;
        let scale = frobenius(&lhs).max(frobenius(&rhs)).max(1.0);
        let defect = frobenius(&(lhs - rhs)) / scale;
        if defect > LINEARITY_TOL {
            return Err(Error::LinearityViolation(defect));
        }
    }
    let n = dim * dim;
    let mut matrix = CMatrix::zeros(n, n);
    for l in 0..dim {
        for k in 0..dim {
            let image = action(&matrix_unit(dim, k, l));
            matrix.column_mut(k + l * dim).copy_from_slice(image.as_slice());
        }
    }
    Ok(Superoperator { dim, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, random_hermitian, I};

    #[test]
    fn identity_action() {
        let s = build_superoperator(|r| r.clone(), 3).unwrap();
        assert_eq!(s, Superoperator::identity(3));
    }

    #[test]
    fn diagonal_hamiltonian_is_diagonal() {
        let d = 4;
        let energies = [0.3, 1.1, 2.0, 3.7];
        let h = CMatrix::from_diagonal(&crate::linalg::CVector::from_fn(d, |i, _| re(energies[i])));
        let s = build_superoperator(|r| commutator(&h, r) * (-I), d).unwrap();
        for a in 0..d * d {
            for b in 0..d * d {
                let v = s.matrix()[(a, b)];
                if a == b {
                    let (m, n) = (a % d, a / d);
                    assert!((v - (-I) * (energies[m] - energies[n])).norm() < 1e-15);
                } else {
                    assert_eq!(v, C64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn nonlinear_map_rejected() {
        let err = build_superoperator(|r| r * r, 3).unwrap_err();
        assert!(matches!(err, Error::LinearityViolation(_)));
        let err = build_superoperator(|r| r.map(|z| C64::new(z.re, 0.0)), 3).unwrap_err();
        assert!(matches!(err, Error::LinearityViolation(_)));
    }

    #[test]
    fn apply_matches_direct_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = random_hermitian(5, &mut rng);
        let action = |r: &CMatrix| commutator(&h, r) * (-I) + &h * r * &h;
        let s = build_superoperator(action, 5).unwrap();
        let rho = random_matrix(5, &mut rng);
        assert!(frobenius(&(s.apply(&rho) - action(&rho))) < 1e-12);
    }

    #[test]
    fn structural_defects_of_a_unitary_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let h = random_hermitian(4, &mut rng);
        let s = build_superoperator(|r| commutator(&h, r) * (-I), 4).unwrap();
        assert!(s.trace_annihilation_defect() < 1e-14);
        assert!(s.hermiticity_preservation_defect() < 1e-14);
        // ρ ↦ Hρ is neither.
        let s = build_superoperator(|r| &h * r, 4).unwrap();
        assert!(s.trace_annihilation_defect() > 1e-3);
        assert!(s.hermiticity_preservation_defect() > 1e-3);
    }
}
