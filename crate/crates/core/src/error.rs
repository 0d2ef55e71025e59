// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("wavefunction leaks past the grid boundary (edge/peak amplitude {ratio:.3e} > 1e-8)")]
    BoundaryLeak { ratio: f64 },

    #[error("Fock truncation too small: {0}")]
    Truncation(String),

    #[error("time step too large: {0}")]
    StepSize(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("probability density is not normalized (integral = {0})")]
    Normalization(f64),

    #[error("map is not linear (relative defect {0:.3e})")]
    LinearityViolation(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("Hamiltonian spectrum is not equally spaced: {0}")]
    NonEquallySpaced(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
