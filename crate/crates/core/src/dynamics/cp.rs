// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Conditional complete positivity of a generator via its projected Choi
//! matrix.

use super::Superoperator;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, max_abs, CMatrix, C64};

pub const DEFAULT_CP_TOLERANCE: f64 = 1e-8;

const PRECONDITION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct CpReport {
    /// Smallest eigenvalue of `P C_L P`.
    pub min_eigenvalue: f64,
    pub is_gksl: bool,
    /// Absolute threshold used for `is_gksl` (relative tolerance times `‖C_L‖_F`).
    pub tolerance: f64,
    /// Full sorted spectrum of `P C_L P`.
    pub spectrum: Vec<f64>,
}

/// `C_L = Σ_{kl} E_kl ⊗ L(E_kl)`, i.e. `C[k·d+i, l·d+j] = L(E_kl)_{ij}`.
pub fn choi_matrix(l: &Superoperator) -> CMatrix {
    let d = l.dim();
    let s = l.matrix();
    CMatrix::from_fn(d * d, d * d, |r, c| {
        let (k, i) = (r / d, r % d);
        let (l_, j) = (c / d, c % d);
        s[(i + j * d, k + l_ * d)]
    })
}

pub fn cp_check(l: &Superoperator) -> Result<CpReport> {
    cp_check_with_tolerance(l, DEFAULT_CP_TOLERANCE)
}

/// A trace-annihilating, Hermiticity-preserving `L` generates a completely
/// positive semigroup iff `P C_L P ⪰ 0` with `P = I − |Ω⟩⟨Ω|/d`,
/// `|Ω⟩ = Σ_k |k⟩⊗|k⟩`.
pub fn cp_check_with_tolerance(l: &Superoperator, rel_tol: f64) -> Result<CpReport> {
    let scale = PRECONDITION_TOL * max_abs(l.matrix()).max(1.0);
    let trace = l.trace_annihilation_defect();
    if trace > scale {
        return Err(Error::Precondition(format!(
            "generator does not annihilate the trace (defect {trace:.3e})"
        )));
    }
    let herm = l.hermiticity_preservation_defect();
    if herm > scale {
        return Err(Error::Precondition(format!(
            "generator does not preserve Hermiticity (defect {herm:.3e})"
        )));
    }
    let d = l.dim();
    let c = choi_matrix(l);
    let mut proj = CMatrix::identity(d * d, d * d);
    for k in 0..d {
        for m in 0..d {
            proj[(k * d + k, m * d + m)] -= C64::new(1.0 / d as f64, 0.0);
        }
    }
    let pcp = &proj * &c * &proj;
    let spectrum = hermitian_eigenvalues(&pcp);
    let min_eigenvalue = spectrum[0];
    let tolerance = rel_tol * c.norm();
    Ok(CpReport {
        min_eigenvalue,
        is_gksl: min_eigenvalue >= -tolerance,
        tolerance,
        spectrum,
    })
}
