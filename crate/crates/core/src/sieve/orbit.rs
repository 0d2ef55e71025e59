// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Numerical entropy production along the closed-system orbit of a
//! Gaussian: the state is evolved unitarily and `−2Tr[ρL(ρ)]` is evaluated
//! with the environment part of the generator.

use std::f64::consts::TAU;

use crate::dynamics::{harmonic_potential, propagate_wavefunction, GridLiouvillian, QomeLiouvillian};
use crate::environments::{EnvironmentModel, QomeParams};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::states::{
    make_gaussian_wavefunction, project_to_fock, FockDensityMatrix, GaussianPureState,
    GridDensityMatrix, OscillatorParams, PositionGrid,
};

use super::entropy::entropy_rate_numeric;

/// Largest grid the numeric path will build (density matrices are `n × n`).
pub const MAX_NUMERIC_GRID: usize = 2048;

/// Split-operator steps per period when moving between orbit samples.
const STEPS_PER_PERIOD: usize = 1024;

/// Smallest power-of-two grid that contains the whole orbit of `state` and
/// resolves its largest momentum and, if given, a noise correlation length.
pub fn orbit_grid(
    state: &GaussianPureState,
    osc: &OscillatorParams,
    correlation_length: Option<f64>,
) -> Result<PositionGrid> {
    let mw = osc.mass * osc.omega;
    let width = state.sigma_x(osc).max(state.sigma_p(osc) / mw);
    let amplitude = state.x0.hypot(state.p0 / mw);
    let half = amplitude + 12.0 * width;
    let mut dx = std::f64::consts::PI * osc.hbar / (mw * half);
    if let Some(sigma) = correlation_length {
        dx = dx.min(sigma / 2.0);
    }
    let n = ((2.0 * half / dx).ceil() as usize).next_power_of_two().max(64);
    if n > MAX_NUMERIC_GRID {
        return Err(Error::Domain(format!(
            "orbit needs a {n}-point grid (limit {MAX_NUMERIC_GRID}); use the analytic evaluation"
        )));
    }
    PositionGrid::symmetric(half, n)
}

/// Fock cutoff holding a Gaussian's full orbit with negligible leakage.
fn fock_cutoff(state: &GaussianPureState, osc: &OscillatorParams) -> usize {
    let mw = osc.mass * osc.omega;
    let s2 = state.var_x(osc) / osc.ground_var_x();
    let alpha = state.x0.hypot(state.p0 / mw) * (mw / (2.0 * osc.hbar)).sqrt();
    (40.0 + 12.0 * s2.max(1.0 / s2) + alpha * alpha + 8.0 * alpha).ceil() as usize
}

/// Entropy production rate at `samples` equally spaced points of one period
/// (just the initial point when `samples == 1`).
pub fn orbit_rates(
    state: &GaussianPureState,
    model: &EnvironmentModel,
    osc: &OscillatorParams,
    samples: usize,
) -> Result<Vec<f64>> {
    match model {
        EnvironmentModel::Qome(p) => fock_orbit_rates(state, p, osc, samples),
        _ => grid_orbit_rates(state, model, osc, samples),
    }
}

fn grid_orbit_rates(
    state: &GaussianPureState,
    model: &EnvironmentModel,
    osc: &OscillatorParams,
    samples: usize,
) -> Result<Vec<f64>> {
    let sigma = match model {
        EnvironmentModel::CorrelatedNoise(p) => Some(p.sigma()),
        _ => None,
    };
    let grid = orbit_grid(state, osc, sigma)?;
    let v = harmonic_potential(osc);
    let l = GridLiouvillian::new(grid, model, v, osc)?.without_hamiltonian();
    let mut psi = make_gaussian_wavefunction(state, &grid, osc)?;
    let substeps = STEPS_PER_PERIOD.div_ceil(samples).max(1);
    let dt = osc.period() / (samples * substeps) as f64;
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        if k > 0 {
            psi = propagate_wavefunction(&psi, &grid, v, osc, dt, substeps);
        }
        let rho = GridDensityMatrix::from_wavefunction(grid, &psi)?;
        out.push(entropy_rate_numeric(&rho, &l));
    }
    Ok(out)
}

fn fock_orbit_rates(
    state: &GaussianPureState,
    p: &QomeParams,
    osc: &OscillatorParams,
    samples: usize,
) -> Result<Vec<f64>> {
    let n_max = fock_cutoff(state, osc);
    // The projection grid must resolve the highest retained level.
    let turning = (2.0 * n_max as f64 + 1.0).sqrt() * (osc.hbar / (osc.mass * osc.omega)).sqrt();
    let half = turning + 12.0 * state.sigma_x(osc) + state.x0.abs();
    let dx = std::f64::consts::PI * osc.hbar / (osc.mass * osc.omega * half) / 2.0;
    let n = ((2.0 * half / dx).ceil() as usize).next_power_of_two();
    let grid = PositionGrid::symmetric(half, n)?;
    let psi = make_gaussian_wavefunction(state, &grid, osc)?;
    let rho0 = project_to_fock(&psi, &grid, osc, n_max)?;
    let l = QomeLiouvillian {
        params: *p,
        include_hamiltonian: false,
    };
    let base = rho0.into_elements();
    let d = base.nrows();
    (0..samples)
        .map(|k| {
            let wt = TAU * k as f64 / samples as f64;
            // e^{−iHt/ħ} ρ e^{iHt/ħ} is diagonal in the number basis.
            let rho = base.map_with_location(|i, j, z| z * C64::from_polar(1.0, -wt * (i as f64 - j as f64)));
            debug_assert_eq!(rho.nrows(), d);
            let rho = FockDensityMatrix::new(rho)?;
            Ok(entropy_rate_numeric(&rho, &l))
        })
        .collect()
}
