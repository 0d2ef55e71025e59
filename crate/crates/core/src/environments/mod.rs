// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Environment models, noise-correlation kernels and the decoherence rates
//! derived from them.
//!
//! Noise is white in time: the `δ(t − s)` factor of every correlation is
//! absorbed into the rates, so kernels carry units of `ħ² × rate`.

mod kernel;
mod params;

pub use kernel::{decoherence_kernel, CorrelationKernel};
pub use params::{
    g_correlated, g_quadratic_approx, gamma_from_spectral_density, thermal_occupation,
    CaldeiraLeggettParams, CorrelatedNoiseParams, EnvironmentModel, QomeParams,
};
