// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use crate::linalg::CMatrix;
use crate::states::Moments;

pub(crate) const TRACE_DRIFT_TOL: f64 = 1e-6;

/// Something a propagator noticed while running. Each kind is reported once,
/// at the first step it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Diagnostic {
    TraceDrift { step: usize, drift: f64 },
    BoundaryLeak { step: usize, population: f64 },
    Truncation { step: usize, population: f64 },
    PositivityLoss { step: usize, min_eigenvalue: f64 },
}

impl Diagnostic {
    /// Whether this diagnostic marks the run as numerically degraded (the
    /// others are warnings).
    pub fn degrades(&self) -> bool {
        matches!(self, Self::TraceDrift { .. } | Self::PositivityLoss { .. })
    }

    fn same_kind(&self, other: &Self) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TraceDrift { step, drift } => write!(f, "trace drift {drift:.3e} at step {step}"),
            Self::BoundaryLeak { step, population } => {
                write!(f, "edge population {population:.3e} at step {step}")
            }
            Self::Truncation { step, population } => {
                write!(f, "top Fock level population {population:.3e} at step {step}")
            }
            Self::PositivityLoss {
                step,
                min_eigenvalue,
            } => write!(f, "minimum eigenvalue {min_eigenvalue:.3e} at step {step}"),
        }
    }
}

/// Observables recorded along a trajectory. All series share the length of
/// `times`; index 0 is the initial state.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropagationResult {
    pub times: Vec<f64>,
    pub linear_entropy: Vec<f64>,
    pub purity: Vec<f64>,
    pub mean_x: Vec<f64>,
    pub mean_p: Vec<f64>,
    pub var_x: Vec<f64>,
    pub var_p: Vec<f64>,
    pub trace_drift: Vec<f64>,
    pub hermiticity_defect: Vec<f64>,
    pub diagnostics: Vec<Diagnostic>,
    pub degraded: bool,
    /// Matrix elements of the final state in the propagation representation.
    pub final_state: CMatrix,
}

impl PropagationResult {
    pub(crate) fn with_capacity(n: usize) -> Self {
        let v = || Vec::with_capacity(n);
        Self {
            times: v(),
            linear_entropy: v(),
            purity: v(),
            mean_x: v(),
            mean_p: v(),
            var_x: v(),
            var_p: v(),
            trace_drift: v(),
            hermiticity_defect: v(),
            diagnostics: Vec::new(),
            degraded: false,
            final_state: CMatrix::zeros(0, 0),
        }
    }

    pub(crate) fn record(
        &mut self,
        t: f64,
        purity: f64,
        m: Moments,
        trace: f64,
        hermiticity_defect: f64,
        step: usize,
    ) {
        self.times.push(t);
        self.purity.push(purity);
        self.linear_entropy.push(1.0 - purity);
        self.mean_x.push(m.mean_x);
        self.mean_p.push(m.mean_p);
        self.var_x.push(m.var_x);
        self.var_p.push(m.var_p);
        let drift = (trace - 1.0).abs();
        self.trace_drift.push(drift);
        self.hermiticity_defect.push(hermiticity_defect);
        if drift > TRACE_DRIFT_TOL {
            self.flag(Diagnostic::TraceDrift { step, drift });
        }
    }

    pub(crate) fn flag(&mut self, d: Diagnostic) {
        if self.diagnostics.iter().any(|x| x.same_kind(&d)) {
            return;
        }
        log::warn!("{d}");
        self.degraded |= d.degrades();
        self.diagnostics.push(d);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_trace_drift(&self) -> f64 {
        self.trace_drift.iter().fold(0.0, |a, &b| a.max(b))
    }

    pub fn max_hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect.iter().fold(0.0, |a, &b| a.max(b))
    }
}
