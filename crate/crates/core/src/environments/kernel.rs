// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::sync::Arc;

use super::CorrelatedNoiseParams;
use crate::linalg::C64;

type KernelFn = dyn Fn(f64, f64) -> C64 + Send + Sync;

/// Spatial correlation `c(x, y)` of a white-noise random potential, in units
/// of `ħ² × rate`.
///
/// The callable must be pure; `homogeneous` and `isotropic` are metadata the
/// caller vouches for.
#[derive(Clone)]
pub struct CorrelationKernel {
    f: Arc<KernelFn>,
    hbar: f64,
    pub homogeneous: bool,
    pub isotropic: bool,
}

impl fmt::Debug for CorrelationKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CorrelationKernel")
            .field("hbar", &self.hbar)
            .field("homogeneous", &self.homogeneous)
            .field("isotropic", &self.isotropic)
            .finish_non_exhaustive()
    }
}

impl CorrelationKernel {
    pub fn custom(
        f: impl Fn(f64, f64) -> C64 + Send + Sync + 'static,
        hbar: f64,
        homogeneous: bool,
        isotropic: bool,
    ) -> Self {
        Self {
            f: Arc::new(f),
            hbar,
            homogeneous,
            isotropic,
        }
    }

    /// `c(x, y) = ħ² (λ/2) e^{−((x−y)/σ)²}`.
    pub fn gaussian(p: &CorrelatedNoiseParams, hbar: f64) -> Self {
        let (lambda, sigma) = (p.lambda, p.sigma);
        let scale = hbar * hbar * lambda / 2.0;
        Self::custom(
            move |x, y| C64::new(scale * (-((x - y) / sigma).powi(2)).exp(), 0.0),
            hbar,
            true,
            true,
        )
    }

    /// Perfectly correlated linear coupling `c(x, y) = ħ² κ x y`.
    pub fn linear(kappa: f64, hbar: f64) -> Self {
        let scale = hbar * hbar * kappa;
        Self::custom(move |x, y| C64::new(scale * x * y, 0.0), hbar, false, false)
    }

    pub fn eval(&self, x: f64, y: f64) -> C64 {
        (self.f)(x, y)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// `g(x, y) = (c(x,x) + c(y,y) − 2c(x,y)) / ħ²`, real part.
pub fn decoherence_kernel(c: &CorrelationKernel, x: f64, y: f64) -> f64 {
    let v = c.eval(x, x) + c.eval(y, y) - 2.0 * c.eval(x, y);
    v.re / (c.hbar * c.hbar)
}
