// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Small dense complex linear-algebra helpers shared by every module.
//!
//! Vectorization is column stacking throughout the crate: the operator
//! element `A[(i, j)]` lives at index `i + j * d` of `vec(A)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// `Tr[A B]` in O(d²) without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    debug_assert_eq!(a.shape(), (b.ncols(), b.nrows()));
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `max |A_ij − conj(A_ji)|`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let h = (a + a.adjoint()) * re(0.5);
    let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// Eigen-decomposition of the Hermitian part of `a`: (eigenvalues, unitary
/// whose columns are the eigenvectors).
pub fn hermitian_eigh(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (a + a.adjoint()) * re(0.5);
    let eig = nalgebra::SymmetricEigen::new(h);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn vectorize(a: &CMatrix) -> CVector {
    CVector::from_column_slice(a.as_slice())
}

pub fn unvectorize(v: &CVector, d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v.as_slice())
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

/// Matrix unit `E_kl` (a single 1 at row `k`, column `l`).
pub fn matrix_unit(d: usize, k: usize, l: usize) -> CMatrix {
    let mut e = CMatrix::zeros(d, d);
    e[(k, l)] = re(1.0);
    e
}

pub fn random_matrix<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let a = random_matrix(d, rng);
    (&a + a.adjoint()) * re(0.5)
}

/// Random density matrix `A A† / Tr[A A†]`.
pub fn random_density<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let a = random_matrix(d, rng);
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    rho / tr
}
