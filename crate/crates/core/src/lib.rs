// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Open-system dynamics of a 1D harmonic oscillator and the predictability
//! sieve.
//!
//! Density matrices are propagated on a position grid or in a truncated
//! Fock basis. Generators can be checked for complete positivity through
//! their projected Choi matrix, and the sieve scans squeezed Gaussian
//! states for minimal linear-entropy production.
//!
//! Natural units (`ħ = m = ω = 1`) are the default everywhere; every entry
//! point takes an [`OscillatorParams`] so dimensional runs remain possible.

pub mod cli;
pub mod dynamics;
pub mod environments;
mod error;
pub mod linalg;
pub mod sieve;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use states::OscillatorParams;
