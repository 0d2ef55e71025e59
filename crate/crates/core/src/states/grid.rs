// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result};
use crate::linalg::{re, CMatrix, C64};

/// Uniform periodic position grid `x_i = x_min + i·dx`, `dx = (x_max − x_min)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl PositionGrid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(invalid("grid", format!("need x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(invalid(
                "n",
                format!("PositionGrid requires a power-of-two point count, got {n}"),
            ));
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn symmetric(half_span: f64, n: usize) -> Result<Self> {
        Self::new(-half_span, half_span, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Momenta conjugate to the grid, in FFT order.
    pub fn momenta(&self, hbar: f64) -> Vec<f64> {
        let n = self.n as i64;
        let dp = 2.0 * PI * hbar / (self.n as f64 * self.dx());
        (0..n)
            .map(|k| if k < n / 2 { k } else { k - n } as f64 * dp)
            .collect()
    }
}

impl Default for PositionGrid {
    /// 256 points spanning ±10.
    fn default() -> Self {
        Self {
            x_min: -10.0,
            x_max: 10.0,
            n: 256,
        }
    }
}

/// Cached FFT plans for transforming grid operators between position and
/// momentum representation.
///
/// The momentum representation is unnormalized:
/// `ρ̃(p_k, p_l) = Σ_ij e^{−i p_k x_i/ħ} ρ_ij e^{+i p_l x_j/ħ}` (the constant
/// phase from `x_min` is dropped; it cancels in every quantity we read).
#[derive(Clone)]
pub struct GridFft {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for GridFft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridFft").field("n", &self.n).finish()
    }
}

impl GridFft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Forward transform of every column (the first operator index).
    pub fn forward_columns(&self, m: &mut CMatrix) {
        self.forward.process(m.as_mut_slice());
    }

    pub fn inverse_columns(&self, m: &mut CMatrix) {
        self.inverse.process(m.as_mut_slice());
    }

    pub fn forward_vec(&self, v: &mut [C64]) {
        self.forward.process(v);
    }

    pub fn inverse_vec(&self, v: &mut [C64]) {
        self.inverse.process(v);
    }

    pub fn to_momentum(&self, m: &mut CMatrix) {
        self.forward.process(m.as_mut_slice());
        m.transpose_mut();
        self.inverse.process(m.as_mut_slice());
        m.transpose_mut();
    }

    /// Exact inverse of [`GridFft::to_momentum`].
    pub fn to_position(&self, m: &mut CMatrix) {
        self.inverse.process(m.as_mut_slice());
        m.transpose_mut();
        self.forward.process(m.as_mut_slice());
        m.transpose_mut();
        let scale = re(1.0 / (self.n * self.n) as f64);
        m.iter_mut().for_each(|z| *z *= scale);
    }

    /// `f(p) · A` for a function of momentum given on the FFT-ordered grid.
    pub fn left_momentum_multiply(&self, a: &CMatrix, f: &[C64]) -> CMatrix {
        let n = self.n;
        let mut m = a.clone();
        self.forward.process(m.as_mut_slice());
        for col in m.as_mut_slice().chunks_mut(n) {
            for (z, fk) in col.iter_mut().zip(f) {
                *z *= fk;
            }
        }
        self.inverse.process(m.as_mut_slice());
        let scale = re(1.0 / n as f64);
        m.iter_mut().for_each(|z| *z *= scale);
        m
    }

    /// `A · f(p)`, computed as `(f̄(p) A†)†`.
    pub fn right_momentum_multiply(&self, a: &CMatrix, f: &[C64]) -> CMatrix {
        let conj: Vec<C64> = f.iter().map(|z| z.conj()).collect();
        self.left_momentum_multiply(&a.adjoint(), &conj).adjoint()
    }
}
