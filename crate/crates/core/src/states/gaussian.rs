// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{OscillatorParams, PositionGrid};
use crate::error::{invalid, Error, Result};
use crate::linalg::{CVector, C64};

/// Edge-to-peak amplitude ratio above which a grid is too narrow.
pub(crate) const BOUNDARY_RATIO: f64 = 1e-8;

/// Uncorrelated Gaussian pure state: centre `x0`, mean momentum `p0` and
/// squeeze `s`, with `Δx = s·√(ħ/2mω)` and `Δx·Δp = ħ/2`.
///
/// `s = 1` is the coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPureState {
    pub x0: f64,
    pub p0: f64,
    squeeze: f64,
}

impl GaussianPureState {
    pub fn new(x0: f64, p0: f64, squeeze: f64) -> Result<Self> {
        if !(squeeze.is_finite() && squeeze > 0.0) {
            return Err(invalid("squeeze", format!("must be positive, got {squeeze}")));
        }
        if !(x0.is_finite() && p0.is_finite()) {
            return Err(invalid("x0/p0", "centre must be finite"));
        }
        Ok(Self { x0, p0, squeeze })
    }

    pub fn coherent(x0: f64, p0: f64) -> Self {
        Self { x0, p0, squeeze: 1.0 }
    }

    pub fn squeezed(squeeze: f64) -> Result<Self> {
        Self::new(0.0, 0.0, squeeze)
    }

    pub fn squeeze(&self) -> f64 {
        self.squeeze
    }

    pub fn sigma_x(&self, osc: &OscillatorParams) -> f64 {
        self.squeeze * osc.ground_var_x().sqrt()
    }

    pub fn sigma_p(&self, osc: &OscillatorParams) -> f64 {
        osc.hbar / (2.0 * self.sigma_x(osc))
    }

    pub fn var_x(&self, osc: &OscillatorParams) -> f64 {
        self.sigma_x(osc).powi(2)
    }

    pub fn var_p(&self, osc: &OscillatorParams) -> f64 {
        self.sigma_p(osc).powi(2)
    }

    /// Relative amplitude `|ψ(x)| / |ψ(x0)|`.
    pub(crate) fn envelope(&self, x: f64, osc: &OscillatorParams) -> f64 {
        let sx = self.sigma_x(osc);
        (-(x - self.x0).powi(2) / (4.0 * sx * sx)).exp()
    }
}

/// Samples `ψ(x) = (2πΔx²)^{-1/4} exp(−(x−x0)²/4Δx² + i p0 x/ħ)` on the grid
/// and renormalizes so that `Σ|ψ_i|² dx = 1`.
pub fn make_gaussian_wavefunction(
    state: &GaussianPureState,
    grid: &PositionGrid,
    osc: &OscillatorParams,
) -> Result<CVector> {
    let edge = state
        .envelope(grid.x_min(), osc)
        .max(state.envelope(grid.x_max(), osc));
    if edge >= BOUNDARY_RATIO {
        return Err(Error::BoundaryLeak { ratio: edge });
    }
    let sx = state.sigma_x(osc);
    let norm = (2.0 * PI * sx * sx).powf(-0.25);
    let mut psi = CVector::from_fn(grid.len(), |i, _| {
        let x = grid.x(i);
        let amp = norm * (-(x - state.x0).powi(2) / (4.0 * sx * sx)).exp();
        C64::from_polar(amp, state.p0 * x / osc.hbar)
    });
    let total: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dx();
    psi /= C64::new(total.sqrt(), 0.0);
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalized_after_discretization() {
        let osc = OscillatorParams::natural();
        let grid = PositionGrid::default();
        for s in [0.5, 1.0, 1.5] {
            let psi = make_gaussian_wavefunction(&GaussianPureState::squeezed(s).unwrap(), &grid, &osc).unwrap();
            let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.dx();
            assert!((n - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn variances_of_the_family() {
        let osc = OscillatorParams::natural();
        let g1 = GaussianPureState::squeezed(1.0).unwrap();
        assert!((g1.var_x(&osc) - 0.5).abs() < 1e-15);
        assert!((g1.var_p(&osc) - 0.5).abs() < 1e-15);
        let g2 = GaussianPureState::squeezed(2.0).unwrap();
        assert!((g2.var_x(&osc) - 2.0).abs() < 1e-14);
        assert!((g2.var_p(&osc) - 0.125).abs() < 1e-15);
        assert!((g2.sigma_x(&osc) * g2.sigma_p(&osc) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn narrow_grid_is_a_boundary_leak() {
        let osc = OscillatorParams::natural();
        let grid = PositionGrid::default();
        let wide = GaussianPureState::squeezed(4.0).unwrap();
        assert!(matches!(
            make_gaussian_wavefunction(&wide, &grid, &osc),
            Err(Error::BoundaryLeak { .. })
        ));
        let off = GaussianPureState::coherent(9.0, 0.0);
        assert!(make_gaussian_wavefunction(&off, &grid, &osc).is_err());
    }

    #[test]
    fn rejects_bad_squeeze() {
        assert!(GaussianPureState::new(0.0, 0.0, 0.0).is_err());
        assert!(GaussianPureState::new(0.0, 0.0, -1.0).is_err());
        assert!(GaussianPureState::new(0.0, 0.0, f64::NAN).is_err());
    }
}
