// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Time propagation, superoperator algebra, rotating-frame averaging of
//! generators and complete-positivity certification.

mod averaging;
mod cp;
mod fock;
mod generators;
mod grid;
mod result;
mod superop;

pub use averaging::{
    average_generator, fit_qome_form, qome_basis, QomeFit, DEFAULT_AVERAGING_SAMPLES,
};
pub use cp::{choi_matrix, cp_check, cp_check_with_tolerance, CpReport, DEFAULT_CP_TOLERANCE};
pub use fock::{default_fock_dt, propagate_fock};
pub use generators::{
    cl_dissipator, cl_dissipator_superoperator, hamiltonian_superoperator, qome_rhs,
    qome_rhs_commutator, qome_superoperator, FockOperators, Generator, QomeLiouvillian,
};
pub use grid::{default_grid_dt, harmonic_potential, propagate_grid, propagate_wavefunction, GridLiouvillian};
pub use result::{Diagnostic, PropagationResult};
pub use superop::{build_superoperator, Superoperator};
