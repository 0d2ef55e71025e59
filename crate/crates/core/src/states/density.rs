// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use super::{DensityOperator, PositionGrid};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, CMatrix, CVector};

const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-6;
const POSITIVITY_TOL: f64 = 1e-8;

/// Density matrix `ρ(x_i, x_j)` sampled on a [`PositionGrid`].
///
/// Elements are kernel values, so `Tr ρ = dx Σ_i ρ_ii` and the matrix
/// eigenvalues are those of `ρ·dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensityMatrix {
    grid: PositionGrid,
    elements: CMatrix,
}

impl GridDensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(grid: PositionGrid, elements: CMatrix) -> Result<Self> {
        let rho = Self::checked_shape(grid, elements)?;
        let herm = hermiticity_defect(&rho.elements);
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!("Hermiticity defect {herm:.3e}")));
        }
        rho.check_trace()?;
        let scaled = &rho.elements * crate::linalg::re(grid.dx());
        let min_ev = hermitian_eigenvalues(&scaled)[0];
        if min_ev < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_ev:.3e}")));
        }
        Ok(rho)
    }

    /// `ρ = |ψ⟩⟨ψ|`; positivity holds by construction so only the trace is
    /// checked.
    pub fn from_wavefunction(grid: PositionGrid, psi: &CVector) -> Result<Self> {
        let elements = psi * psi.adjoint();
        let rho = Self::checked_shape(grid, elements)?;
        rho.check_trace()?;
        Ok(rho)
    }

    fn checked_shape(grid: PositionGrid, elements: CMatrix) -> Result<Self> {
        if elements.shape() != (grid.len(), grid.len()) {
            return Err(Error::InvalidState(format!(
                "matrix is {:?}, grid has {} points",
                elements.shape(),
                grid.len()
            )));
        }
        Ok(Self { grid, elements })
    }

    fn check_trace(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        Ok(())
    }

    pub fn grid(&self) -> &PositionGrid {
        &self.grid
    }

    pub fn into_elements(self) -> CMatrix {
        self.elements
    }

    /// Position probability density `P(x_i) = ρ_ii`.
    pub fn position_density(&self) -> Vec<f64> {
        (0..self.grid.len()).map(|i| self.elements[(i, i)].re).collect()
    }

    /// Population within `width` points of either edge.
    pub fn edge_population(&self, width: usize) -> f64 {
        let n = self.grid.len();
        let w = width.min(n / 2);
        let sum: f64 = (0..w)
            .chain(n - w..n)
            .map(|i| self.elements[(i, i)].re)
            .sum();
        sum * self.grid.dx()
    }
}

impl DensityOperator for GridDensityMatrix {
    fn elements(&self) -> &CMatrix {
        &self.elements
    }

    fn weight(&self) -> f64 {
        self.grid.dx()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{re, C64};
    use crate::states::{make_gaussian_wavefunction, GaussianPureState, OscillatorParams};

    fn ground() -> GridDensityMatrix {
        let grid = PositionGrid::symmetric(8.0, 64).unwrap();
        let psi = make_gaussian_wavefunction(
            &GaussianPureState::coherent(0.0, 0.0),
            &grid,
            &OscillatorParams::natural(),
        )
        .unwrap();
        GridDensityMatrix::from_wavefunction(grid, &psi).unwrap()
    }

    #[test]
    fn pure_state_has_unit_trace_and_purity() {
        let rho = ground();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-10);
        // Full validation accepts it.
        GridDensityMatrix::new(*rho.grid(), rho.elements().clone()).unwrap();
    }

    #[test]
    fn rejects_non_hermitian_and_wrong_trace() {
        let rho = ground();
        let mut bad = rho.elements().clone();
        bad[(0, 1)] += C64::new(0.0, 1e-6);
        assert!(GridDensityMatrix::new(*rho.grid(), bad).is_err());
        let scaled = rho.elements() * re(1.01);
        assert!(GridDensityMatrix::new(*rho.grid(), scaled).is_err());
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let rho = ground();
        let grid = *rho.grid();
        let n = grid.len();
        // diag(1+ε, −ε) mixture in the grid basis: trace 1, not positive.
        let mut m = CMatrix::zeros(n, n);
        m[(10, 10)] = re(1.1 / grid.dx());
        m[(20, 20)] = re(-0.1 / grid.dx());
        assert!(GridDensityMatrix::new(grid, m).is_err());
    }
}
