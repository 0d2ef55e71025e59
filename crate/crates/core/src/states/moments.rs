// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{
    momentum_operator, position_operator, DensityOperator, FockDensityMatrix, GridDensityMatrix,
    GridFft, OscillatorParams, PositionGrid,
};
use crate::linalg::trace_product;

/// First and second moments of position and momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
}

pub trait HasMoments {
    fn moments(&self, osc: &OscillatorParams) -> Moments;
}

pub fn moments<R: HasMoments + ?Sized>(rho: &R, osc: &OscillatorParams) -> Moments {
    rho.moments(osc)
}

/// Mean and variance of a sampled distribution (weights need not be
/// normalized).
pub(crate) fn weighted_mean_var(values: &[f64], weights: &[f64]) -> (f64, f64) {
    let total: f64 = weights.iter().sum();
    let mean = values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / total;
    let var = values
        .iter()
        .zip(weights)
        .map(|(v, w)| (v - mean).powi(2) * w)
        .sum::<f64>()
        / total;
    (mean, var)
}

pub(crate) fn grid_position_moments(grid: &PositionGrid, diag: &[f64]) -> (f64, f64) {
    weighted_mean_var(&grid.points(), diag)
}

impl HasMoments for GridDensityMatrix {
    /// Position moments from the diagonal; momentum moments from the
    /// diagonal of the 2D Fourier transform of `ρ`.
    fn moments(&self, osc: &OscillatorParams) -> Moments {
        let grid = self.grid();
        let (mean_x, var_x) = grid_position_moments(grid, &self.position_density());
        let fft = GridFft::new(grid.len());
        let mut m = self.elements().clone();
        fft.to_momentum(&mut m);
        let pdiag: Vec<f64> = (0..grid.len()).map(|k| m[(k, k)].re).collect();
        let (mean_p, var_p) = weighted_mean_var(&grid.momenta(osc.hbar), &pdiag);
        Moments {
            mean_x,
            mean_p,
            var_x,
            var_p,
        }
    }
}

impl HasMoments for FockDensityMatrix {
    fn moments(&self, osc: &OscillatorParams) -> Moments {
        let d = self.dim();
        let x = position_operator(d, osc);
        let p = momentum_operator(d, osc);
        let rho = self.elements();
        let tr = self.trace();
        let mean_x = trace_product(rho, &x).re / tr;
        let mean_p = trace_product(rho, &p).re / tr;
        let x2 = trace_product(rho, &(&x * &x)).re / tr;
        let p2 = trace_product(rho, &(&p * &p)).re / tr;
        Moments {
            mean_x,
            mean_p,
            var_x: x2 - mean_x * mean_x,
            var_p: p2 - mean_p * mean_p,
        }
    }
}
