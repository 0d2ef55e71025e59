// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::states::OscillatorParams;

/// High-temperature ohmic oscillator bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaldeiraLeggettParams {
    gamma: f64,
    kt: f64,
    osc: OscillatorParams,
}

impl CaldeiraLeggettParams {
    pub fn new(gamma: f64, kt: f64, osc: OscillatorParams) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(invalid("gamma", format!("must be ≥ 0, got {gamma}")));
        }
        if !(kt.is_finite() && kt > 0.0) {
            return Err(invalid("kT", format!("must be > 0, got {kt}")));
        }
        Ok(Self { gamma, kt, osc })
    }

    /// Chooses `k_B T` so that the diffusion coefficient equals `diffusion`.
    pub fn with_diffusion(gamma: f64, diffusion: f64, osc: OscillatorParams) -> Result<Self> {
        if gamma.is_nan() || gamma <= 0.0 {
            return Err(invalid("gamma", "must be > 0 to realise a diffusion coefficient"));
        }
        let kt = diffusion * osc.hbar * osc.hbar / (2.0 * osc.mass * gamma);
        Self::new(gamma, kt, osc)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kt(&self) -> f64 {
        self.kt
    }

    pub fn osc(&self) -> &OscillatorParams {
        &self.osc
    }

    /// `D = 2mγk_BT/ħ²`.
    pub fn diffusion(&self) -> f64 {
        2.0 * self.osc.mass * self.gamma * self.kt / (self.osc.hbar * self.osc.hbar)
    }
}

/// Homogeneous Gaussian-correlated white noise,
/// `⟨V(x,t)V(y,s)⟩ = ħ² (λ/2) e^{−((x−y)/σ)²} δ(t−s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatedNoiseParams {
    pub(crate) lambda: f64,
    pub(crate) sigma: f64,
}

impl CorrelatedNoiseParams {
    pub fn new(lambda: f64, sigma: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(invalid("lambda", format!("must be > 0, got {lambda}")));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(invalid("sigma", format!("must be > 0, got {sigma}")));
        }
        Ok(Self { lambda, sigma })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Quantum-optical master equation: damping `Γ` and thermal occupation `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QomeParams {
    gamma: f64,
    n_thermal: f64,
    osc: OscillatorParams,
}

impl QomeParams {
    pub fn new(gamma: f64, n_thermal: f64, osc: OscillatorParams) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(invalid("gamma", format!("must be ≥ 0, got {gamma}")));
        }
        if !(n_thermal.is_finite() && n_thermal >= 0.0) {
            return Err(invalid("n_thermal", format!("must be ≥ 0, got {n_thermal}")));
        }
        Ok(Self {
            gamma,
            n_thermal,
            osc,
        })
    }

    /// `N` from the inverse temperature: `N = 1/(e^{βħω} − 1)`.
    pub fn from_temperature(gamma: f64, beta: f64, osc: OscillatorParams) -> Result<Self> {
        let n = thermal_occupation(beta * osc.hbar * osc.omega)?;
        Self::new(gamma, n, osc)
    }

    /// `Γ` from a bath spectral function `J(ω) = (n_osc C²/m_osc)(ω)`.
    pub fn from_spectral_density(
        j: impl Fn(f64) -> f64,
        n_thermal: f64,
        osc: OscillatorParams,
    ) -> Result<Self> {
        let gamma = gamma_from_spectral_density(j, osc.mass, osc.omega)?;
        Self::new(gamma, n_thermal, osc)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n_thermal(&self) -> f64 {
        self.n_thermal
    }

    pub fn osc(&self) -> &OscillatorParams {
        &self.osc
    }
}

/// One of the three environment models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EnvironmentModel {
    /// `weak_dissipation` drops the friction terms and keeps only the
    /// position diffusion.
    CaldeiraLeggett {
        params: CaldeiraLeggettParams,
        weak_dissipation: bool,
    },
    CorrelatedNoise(CorrelatedNoiseParams),
    Qome(QomeParams),
}

impl EnvironmentModel {
    pub fn caldeira_leggett(params: CaldeiraLeggettParams) -> Self {
        Self::CaldeiraLeggett {
            params,
            weak_dissipation: true,
        }
    }

    pub fn caldeira_leggett_full(params: CaldeiraLeggettParams) -> Self {
        Self::CaldeiraLeggett {
            params,
            weak_dissipation: false,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::CaldeiraLeggett { .. } => "cl",
            Self::CorrelatedNoise(_) => "correlated",
            Self::Qome(_) => "qome",
        }
    }

    /// Decoherence rate `g(x, x')` of the position-space noise term, for the
    /// models that have one.
    pub fn decoherence_rate(&self, x: f64, y: f64) -> Option<f64> {
        match self {
            Self::CaldeiraLeggett { params, .. } => Some(params.diffusion() * (x - y).powi(2)),
            Self::CorrelatedNoise(p) => Some(g_correlated(p, x - y)),
            Self::Qome(_) => None,
        }
    }
}

impl fmt::Display for EnvironmentModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CaldeiraLeggett {
                params,
                weak_dissipation,
            } => write!(
                f,
                "caldeira-leggett(gamma={}, kT={}, D={}, weak_dissipation={})",
                params.gamma,
                params.kt,
                params.diffusion(),
                weak_dissipation
            ),
            Self::CorrelatedNoise(p) => {
                write!(f, "correlated-noise(lambda={}, sigma={})", p.lambda, p.sigma)
            }
            Self::Qome(p) => write!(f, "qome(Gamma={}, N={})", p.gamma, p.n_thermal),
        }
    }
}

/// `g(r) = λ(1 − e^{−(r/σ)²})`.
pub fn g_correlated(p: &CorrelatedNoiseParams, separation: f64) -> f64 {
    let u = separation / p.sigma;
    -p.lambda * (-u * u).exp_m1()
}

/// Leading small-separation term of [`g_correlated`], `λ r²/σ²`.
pub fn g_quadratic_approx(p: &CorrelatedNoiseParams, separation: f64) -> f64 {
    p.lambda * (separation / p.sigma).powi(2)
}

/// Bose occupation `N = 1/(e^{βħω} − 1)`.
pub fn thermal_occupation(beta_hbar_omega: f64) -> Result<f64> {
    if !(beta_hbar_omega.is_finite() && beta_hbar_omega > 0.0) {
        return Err(Error::Domain(format!(
            "βħω must be positive, got {beta_hbar_omega}"
        )));
    }
    Ok(1.0 / beta_hbar_omega.exp_m1())
}

/// `Γ(ω) = π J(ω) / (2ω²M)`.
pub fn gamma_from_spectral_density(j: impl Fn(f64) -> f64, mass: f64, omega: f64) -> Result<f64> {
    let jw = j(omega);
    if !(jw.is_finite() && jw >= 0.0) {
        return Err(Error::Domain(format!("J(ω) must be ≥ 0, got {jw}")));
    }
    if !(mass > 0.0 && omega > 0.0) {
        return Err(Error::Domain("mass and frequency must be positive".into()));
    }
    Ok(PI * jw / (2.0 * omega * omega * mass))
}
