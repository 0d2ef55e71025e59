// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Quantum-state representations: the squeezed Gaussian family, density
//! matrices on a position grid and in a truncated number basis, and moment
//! extraction for both.

mod density;
mod fock;
mod gaussian;
mod grid;
pub(crate) mod moments;
pub(crate) use moments as moments_impl;

pub use density::GridDensityMatrix;
pub use fock::{
    annihilation, make_coherent_fock, momentum_operator, number_operator,
    oscillator_hamiltonian, position_operator, project_to_fock, FockDensityMatrix,
    DEFAULT_LEAKAGE_BOUND,
};
pub use gaussian::{make_gaussian_wavefunction, GaussianPureState};
pub use grid::{GridFft, PositionGrid};
pub use moments::{moments, HasMoments, Moments};

use crate::error::{invalid, Result};
use crate::linalg::{trace_product, CMatrix};
use serde::{Deserialize, Serialize};

/// Oscillator mass, angular frequency and ħ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl OscillatorParams {
    pub fn new(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be strictly positive, got {v}")));
            }
        }
        Ok(Self { mass, omega, hbar })
    }

    /// `ħ = m = ω = 1`.
    pub const fn natural() -> Self {
        Self {
            mass: 1.0,
            omega: 1.0,
            hbar: 1.0,
        }
    }

    /// Ground-state position variance `ħ / 2mω`.
    pub fn ground_var_x(&self) -> f64 {
        self.hbar / (2.0 * self.mass * self.omega)
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self::natural()
    }
}

/// A density operator stored as a matrix together with the quadrature
/// weight that turns matrix sums into traces.
///
/// For the Fock basis the weight is 1; on a position grid it is the spacing
/// `dx`, so `Tr[A] = dx Σ A_ii` and `Tr[A B] = dx² Σ A_ij B_ji`.
pub trait DensityOperator {
    fn elements(&self) -> &CMatrix;

    fn weight(&self) -> f64;

    fn trace(&self) -> f64 {
        self.elements().trace().re * self.weight()
    }

    fn purity(&self) -> f64 {
        let w = self.weight();
        self.elements().iter().map(|z| z.norm_sqr()).sum::<f64>() * w * w
    }

    /// `Tr[ρ A]` for an operator `A` given in the same representation.
    fn trace_with(&self, a: &CMatrix) -> f64 {
        let w = self.weight();
        trace_product(self.elements(), a).re * w * w
    }
}
