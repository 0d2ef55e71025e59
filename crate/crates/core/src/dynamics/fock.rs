// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! RK4 propagation of the quantum-optical master equation in a truncated
//! Fock basis.

use super::generators::QomeLiouvillian;
use super::{Diagnostic, PropagationResult};
use crate::environments::QomeParams;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, re, trace_product, CMatrix, C64};
use crate::states::{
    momentum_operator, position_operator, DensityOperator, FockDensityMatrix, Moments,
};

const MAX_STIFFNESS: f64 = 0.05;
const POSITIVITY_EVERY: usize = 100;
const POSITIVITY_TOL: f64 = -1e-7;

/// `2π/(2000 ω)`.
pub fn default_fock_dt(params: &QomeParams) -> f64 {
    params.osc().period() / 2000.0
}

/// Propagate `ρ0` under `−(i/ħ)[H,ρ] + ΔL_QOME(ρ)` with classical RK4.
///
/// The step must satisfy `dt·max(ω, Γ(2N+1)·n_max) ≤ 0.05`. Positivity is
/// checked by diagonalisation every 100 steps; the top-level population is
/// compared against the state's leakage bound after every step.
pub fn propagate_fock(
    rho0: &FockDensityMatrix,
    params: &QomeParams,
    dt: f64,
    n_steps: usize,
) -> Result<PropagationResult> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::StepSize(format!("dt must be positive, got {dt}")));
    }
    let n_max = rho0.n_max() as f64;
    let stiff = params
        .osc()
        .omega
        .max(params.gamma() * (2.0 * params.n_thermal() + 1.0) * n_max.max(1.0));
    if dt * stiff > MAX_STIFFNESS * (1.0 + 1e-12) {
        return Err(Error::StepSize(format!(
            "dt·max(ω, Γ(2N+1)n_max) = {:.4} exceeds {MAX_STIFFNESS}",
            dt * stiff
        )));
    }

    let d = rho0.dim();
    let osc = params.osc();
    let x = position_operator(d, osc);
    let p = momentum_operator(d, osc);
    let ops = [x.clone(), p.clone(), &x * &x, &p * &p];
    let bound = rho0.leakage_bound();
    let l = QomeLiouvillian::new(*params);

    let mut out = PropagationResult::with_capacity(n_steps + 1);
    let mut rho = rho0.elements().clone();
    observe(&mut out, 0.0, &rho, &ops, bound, 0);

    let z = || CMatrix::zeros(d, d);
    let (mut k1, mut k2, mut k3, mut k4) = (z(), z(), z(), z());
    let (mut tmp, mut scratch) = (z(), z());
    let h = re(dt);
    for step in 1..=n_steps {
        l.apply_into(&rho, &mut k1, &mut scratch);
        tmp.copy_from(&rho);
        axpy(&mut tmp, h * 0.5, &k1);
        l.apply_into(&tmp, &mut k2, &mut scratch);
        tmp.copy_from(&rho);
        axpy(&mut tmp, h * 0.5, &k2);
        l.apply_into(&tmp, &mut k3, &mut scratch);
        tmp.copy_from(&rho);
        axpy(&mut tmp, h, &k3);
        l.apply_into(&tmp, &mut k4, &mut scratch);
        axpy(&mut rho, h / 6.0, &k1);
        axpy(&mut rho, h / 3.0, &k2);
        axpy(&mut rho, h / 3.0, &k3);
        axpy(&mut rho, h / 6.0, &k4);

        observe(&mut out, step as f64 * dt, &rho, &ops, bound, step);
        if step % POSITIVITY_EVERY == 0 || step == n_steps {
            let min = hermitian_eigenvalues(&rho)[0];
            if min < POSITIVITY_TOL {
                out.flag(Diagnostic::PositivityLoss {
                    step,
                    min_eigenvalue: min,
                });
            }
        }
    }
    out.final_state = rho;
    Ok(out)
}

/// `y += a·x`.
fn axpy(y: &mut CMatrix, a: C64, x: &CMatrix) {
    for (yi, xi) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *yi += a * xi;
    }
}

fn observe(out: &mut PropagationResult, t: f64, rho: &CMatrix, ops: &[CMatrix; 4], bound: f64, step: usize) {
    let d = rho.nrows();
    let trace = rho.trace().re;
    let ev = |o: &CMatrix| trace_product(rho, o).re / trace;
    let (mx, mp) = (ev(&ops[0]), ev(&ops[1]));
    let m = Moments {
        mean_x: mx,
        mean_p: mp,
        var_x: ev(&ops[2]) - mx * mx,
        var_p: ev(&ops[3]) - mp * mp,
    };
    let purity = rho.iter().map(|z| z.norm_sqr()).sum::<f64>();
    out.record(t, purity, m, trace, hermiticity_defect(rho), step);
    let top = rho[(d - 1, d - 1)].re;
    if top > bound {
        out.flag(Diagnostic::Truncation {
            step,
            population: top,
        });
    }
}
