// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use super::{DensityOperator, OscillatorParams, PositionGrid};
use crate::error::{invalid, Error, Result};
use crate::linalg::{hermiticity_defect, re, CMatrix, CVector, C64, I};

/// Default bound on the population of the highest retained level.
pub const DEFAULT_LEAKAGE_BOUND: f64 = 1e-6;

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-6;

/// Density matrix in the number basis truncated at `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    elements: CMatrix,
    leakage_bound: f64,
}

impl FockDensityMatrix {
    pub fn new(elements: CMatrix) -> Result<Self> {
        if !elements.is_square() || elements.nrows() < 1 {
            return Err(Error::InvalidState(format!(
                "Fock matrix must be square, got {:?}",
                elements.shape()
            )));
        }
        let herm = hermiticity_defect(&elements);
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("Hermiticity defect {herm:.3e}")));
        }
        let rho = Self::from_raw(elements);
        let tr = rho.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        if let Some(pop) = rho.truncation_warning() {
            log::warn!("top Fock level holds population {pop:.3e} (bound {DEFAULT_LEAKAGE_BOUND:.1e})");
        }
        Ok(rho)
    }

    pub(crate) fn from_raw(elements: CMatrix) -> Self {
        Self {
            elements,
            leakage_bound: DEFAULT_LEAKAGE_BOUND,
        }
    }

    /// Pure state from (unnormalized) amplitudes `c_n`.
    pub fn pure(amplitudes: &CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero amplitude vector".into()));
        }
        let c = amplitudes / re(norm);
        Self::new(&c * c.adjoint())
    }

    /// Thermal state with mean occupation `n_thermal`, truncated and
    /// renormalized.
    pub fn thermal(n_thermal: f64, n_max: usize) -> Result<Self> {
        if !(n_thermal.is_finite() && n_thermal >= 0.0) {
            return Err(invalid("n_thermal", format!("must be ≥ 0, got {n_thermal}")));
        }
        let ratio = n_thermal / (n_thermal + 1.0);
        let mut pops: Vec<f64> = (0..=n_max).map(|n| ratio.powi(n as i32)).collect();
        let total: f64 = pops.iter().sum();
        pops.iter_mut().for_each(|p| *p /= total);
        let diag = CVector::from_iterator(n_max + 1, pops.into_iter().map(re));
        Self::new(CMatrix::from_diagonal(&diag))
    }

    pub fn with_leakage_bound(mut self, bound: f64) -> Self {
        self.leakage_bound = bound;
        self
    }

    pub fn leakage_bound(&self) -> f64 {
        self.leakage_bound
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn n_max(&self) -> usize {
        self.dim() - 1
    }

    pub fn top_population(&self) -> f64 {
        self.elements[(self.n_max(), self.n_max())].re
    }

    /// `Some(population)` when the top level exceeds the leakage bound.
    pub fn truncation_warning(&self) -> Option<f64> {
        let pop = self.top_population();
        (pop > self.leakage_bound).then_some(pop)
    }

    pub fn mean_number(&self) -> f64 {
        (0..self.dim())
            .map(|n| n as f64 * self.elements[(n, n)].re)
            .sum()
    }

    pub fn into_elements(self) -> CMatrix {
        self.elements
    }
}

impl DensityOperator for FockDensityMatrix {
    fn elements(&self) -> &CMatrix {
        &self.elements
    }

    fn weight(&self) -> f64 {
        1.0
    }
}

/// Coherent state `|α⟩` with amplitudes `e^{−|α|²/2} αⁿ/√n!`, renormalized
/// after truncation.
pub fn make_coherent_fock(alpha: C64, n_max: usize) -> Result<FockDensityMatrix> {
    let a = alpha.norm();
    let needed = a * a + 5.0 * a + 10.0;
    if needed > n_max as f64 {
        return Err(Error::Truncation(format!(
            "|α|² + 5|α| + 10 = {needed:.2} exceeds n_max = {n_max}"
        )));
    }
    let mut c = CVector::zeros(n_max + 1);
    c[0] = re((-0.5 * a * a).exp());
    for n in 1..=n_max {
        c[n] = c[n - 1] * alpha / (n as f64).sqrt();
    }
    FockDensityMatrix::pure(&c)
}

/// Truncated annihilation operator, `a|n⟩ = √n |n−1⟩`.
pub fn annihilation(dim: usize) -> CMatrix {
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = re((n as f64).sqrt());
    }
    a
}

pub fn number_operator(dim: usize) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_fn(dim, |n, _| re(n as f64)))
}

/// `x = √(ħ/2mω) (a + a†)`.
pub fn position_operator(dim: usize, osc: &OscillatorParams) -> CMatrix {
    let a = annihilation(dim);
    (&a + a.adjoint()) * re(osc.ground_var_x().sqrt())
}

/// `p = i√(mωħ/2) (a† − a)`.
pub fn momentum_operator(dim: usize, osc: &OscillatorParams) -> CMatrix {
    let a = annihilation(dim);
    let scale = (osc.mass * osc.omega * osc.hbar / 2.0).sqrt();
    (a.adjoint() - &a) * (I * scale)
}

/// `H = ħω (n + ½)`; exactly equally spaced, unlike `p²/2m + mω²x²/2`
/// built from truncated ladder operators.
pub fn oscillator_hamiltonian(dim: usize, osc: &OscillatorParams) -> CMatrix {
    let e = osc.hbar * osc.omega;
    CMatrix::from_diagonal(&CVector::from_fn(dim, |n, _| re(e * (n as f64 + 0.5))))
}

/// Projects a grid wavefunction onto the first `n_max + 1` oscillator
/// eigenfunctions. Fails if more than the leakage bound of the norm lies
/// above the truncation.
pub fn project_to_fock(
    psi: &CVector,
    grid: &PositionGrid,
    osc: &OscillatorParams,
    n_max: usize,
) -> Result<FockDensityMatrix> {
    let scale = (osc.mass * osc.omega / osc.hbar).sqrt();
    let dx = grid.dx();
    let mut coeffs = CVector::zeros(n_max + 1);
    let lead = (scale / PI.sqrt()).sqrt();
    for i in 0..grid.len() {
        let xi = grid.x(i) * scale;
        // Normalized Hermite functions by the stable three-term recurrence.
        let mut prev = 0.0;
        let mut cur = lead * (-0.5 * xi * xi).exp();
        for n in 0..=n_max {
            coeffs[n] += psi[i] * (cur * dx);
            let next = (2.0 / (n + 1) as f64).sqrt() * xi * cur
                - (n as f64 / (n + 1) as f64).sqrt() * prev;
            prev = cur;
            cur = next;
        }
    }
    let captured = coeffs.norm_squared();
    let grid_norm = psi.norm_squared() * dx;
    let lost = grid_norm - captured;
    if lost > DEFAULT_LEAKAGE_BOUND {
        return Err(Error::Truncation(format!(
            "projection onto n ≤ {n_max} misses {lost:.3e} of the norm"
        )));
    }
    FockDensityMatrix::pure(&coeffs)
}
