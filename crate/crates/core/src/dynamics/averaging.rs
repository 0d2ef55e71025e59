// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Rotating-frame averaging of a dissipator over one oscillator period.

use std::f64::consts::TAU;

use super::{build_superoperator, Superoperator};
use crate::environments::QomeParams;
use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_eigh, kron, CMatrix, C64};
use crate::states::{annihilation, OscillatorParams};

pub const DEFAULT_AVERAGING_SAMPLES: usize = 64;

const SPACING_TOL: f64 = 1e-8;

/// `(1/M) Σ_k U†(τ_k) ∘ ΔL ∘ U(τ_k)` with `τ_k = k·(2π/ω)/M` and
/// `U(τ)ρ = e^{−iHτ/ħ} ρ e^{iHτ/ħ}`.
///
/// Works in the eigenbasis of `H`, where each superoperator element picks up
/// the phase `e^{iτ[(E_i−E_j)−(E_k−E_l)]/ħ}`. The spectrum must consist of
/// integer multiples of `ħω` above the ground level, otherwise the motion is
/// not `2π/ω`-periodic.
pub fn average_generator(
    delta_l: &Superoperator,
    h: &CMatrix,
    osc: &OscillatorParams,
    m_samples: usize,
) -> Result<Superoperator> {
    let d = delta_l.dim();
    if h.shape() != (d, d) {
        return Err(invalid("h", format!("expected {d}x{d}, got {:?}", h.shape())));
    }
    if m_samples == 0 {
        return Err(invalid("m_samples", "must be at least 1"));
    }
    let (energies, v) = hermitian_eigh(h);
    let quantum = osc.hbar * osc.omega;
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut levels = Vec::with_capacity(d);
    for &e in &energies {
        let n = (e - e0) / quantum;
        if (n - n.round()).abs() > SPACING_TOL * n.abs().max(1.0) {
            return Err(Error::NonEquallySpaced(format!(
                "level {e} is {n} quanta above the ground level"
            )));
        }
        levels.push(n.round() as i64);
    }

    // Per-sample phases of an integer frequency n: e^{2πi n k / M}.
    let m = m_samples as i64;
    let weight = |n: i64| -> C64 {
        let r = n.rem_euclid(m);
        (0..m)
            .map(|k| C64::from_polar(1.0, TAU * ((r * k) % m) as f64 / m as f64))
            .sum::<C64>()
            / m as f64
    };
    let span = 2 * levels.iter().max().copied().unwrap_or(0);
    let table: Vec<C64> = (-span..=span).map(weight).collect();
    let w = |n: i64| table[(n + span) as usize];

    // vec(V†XV) = (Vᵀ ⊗ V†) vec(X).
    let to_eig = kron(&v.transpose(), &v.adjoint());
    let from_eig = kron(&v.conjugate(), &v);
    let mut s = &to_eig * delta_l.matrix() * &from_eig;
    let idx = |a: usize| (a % d, a / d);
    for col in 0..d * d {
        let (k, l) = idx(col);
        for row in 0..d * d {
            let (i, j) = idx(row);
            let n = levels[i] - levels[j] - levels[k] + levels[l];
            s[(row, col)] *= w(n);
        }
    }
    Superoperator::from_matrix(d, &from_eig * s * &to_eig)
}

/// Lindblad basis `(D[a], D[a†])` with `D[L]ρ = LρL† − ½{L†L, ρ}`.
pub fn qome_basis(dim: usize) -> (Superoperator, Superoperator) {
    let a = annihilation(dim);
    let ad = a.adjoint();
    let lindblad = |l: CMatrix| {
        let ld = l.adjoint();
        let ll = &ld * &l;
        build_superoperator(
            move |r: &CMatrix| &l * r * &ld - (&ll * r + r * &ll) * C64::new(0.5, 0.0),
            dim,
        )
        .expect("dissipator is linear")
    };
    (lindblad(a), lindblad(ad))
}

/// Result of projecting a superoperator onto `Γ(N+1)D[a] + ΓN D[a†]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QomeFit {
    pub gamma: f64,
    pub n_thermal: f64,
    /// `‖L − L_fit‖_F / ‖L‖_F`.
    pub residual: f64,
}

impl QomeFit {
    pub fn params(&self, osc: OscillatorParams) -> Result<QomeParams> {
        QomeParams::new(self.gamma, self.n_thermal, osc)
    }
}

/// Real least-squares fit of `L` onto the QOME basis.
pub fn fit_qome_form(l: &Superoperator) -> Result<QomeFit> {
    let (da, dad) = qome_basis(l.dim());
    let dot = |x: &CMatrix, y: &CMatrix| x.zip_fold(y, 0.0, |acc, a, b| acc + (a.conj() * b).re);
    let (a, b, t) = (da.matrix(), dad.matrix(), l.matrix());
    let (aa, ab, bb) = (dot(a, a), dot(a, b), dot(b, b));
    let (at, bt) = (dot(a, t), dot(b, t));
    let det = aa * bb - ab * ab;
    if det.abs() <= f64::EPSILON * aa * bb {
        return Err(Error::Domain("degenerate QOME basis".into()));
    }
    let c1 = (at * bb - bt * ab) / det;
    let c2 = (aa * bt - ab * at) / det;
    let fit = da.scale(c1).add(&dad.scale(c2));
    let gamma = c1 - c2;
    Ok(QomeFit {
        gamma,
        n_thermal: if gamma != 0.0 { c2 / gamma } else { f64::NAN },
        residual: fit.relative_distance(l),
    })
}
