// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! The predictability sieve: entropy production of each member of the
//! squeezed-Gaussian family, and the member that produces least.

mod entropy;
mod orbit;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use entropy::{
    entropy_rate_cl, entropy_rate_correlated, entropy_rate_correlated_gaussian, entropy_rate_numeric,
    entropy_rate_qome, linear_entropy, period_averaged_entropy, qome_rate_constant,
    sampled_gaussian_density, PeriodAverage, PERIOD_SAMPLES, REGIME_LIMIT,
};
pub use orbit::{orbit_grid, orbit_rates, MAX_NUMERIC_GRID};

use crate::environments::EnvironmentModel;
use crate::error::{invalid, Result};
use crate::states::{GaussianPureState, Moments, OscillatorParams};

/// Landscapes with `max/min` at or below this are reported as flat.
pub const FLATNESS_RATIO: f64 = 1.05;

const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    /// Instantaneous production rate at `t = 0`.
    Rate,
    /// Production rate averaged over one oscillator period.
    PeriodAveraged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evaluation {
    /// Pure-state formulas (closed forms; quadrature for correlated noise).
    Analytic,
    /// `−2Tr[ρL(ρ)]` on numerically evolved density matrices.
    Numeric,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Rate => "rate",
            Self::PeriodAveraged => "period-averaged",
        })
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Analytic => "analytic",
            Self::Numeric => "numeric",
        })
    }
}

/// Entropy landscape over the family.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveResult {
    pub squeeze: Vec<f64>,
    pub values: Vec<f64>,
    pub argmin: usize,
    /// Several members share the minimum; `argmin` is the one nearest `s = 1`.
    pub tie: bool,
    /// `max/min ≤ FLATNESS_RATIO`: no member is meaningfully preferred.
    pub flat: bool,
    pub measure: Measure,
    pub evaluation: Evaluation,
    pub model: String,
    /// Optical-master-equation constant in front of `Δx² + Δp²/m²ω²`.
    pub rate_constant: Option<f64>,
    pub warnings: Vec<String>,
}

impl SieveResult {
    pub fn len(&self) -> usize {
        self.squeeze.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squeeze.is_empty()
    }

    pub fn argmin_squeeze(&self) -> f64 {
        self.squeeze[self.argmin]
    }

    pub fn min_value(&self) -> f64 {
        self.values[self.argmin]
    }

    /// `max/min` of the landscape (1 if identically zero).
    pub fn flatness_ratio(&self) -> f64 {
        let max = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.min_value();
        if max == min {
            1.0
        } else {
            max / min
        }
    }
}

/// `n` log-spaced points on `[lo, hi]`. A range symmetric in `ln s` puts the
/// middle point of an odd count exactly at 1.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) {
        return Err(invalid("s range", format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    if n < 2 {
        return Err(invalid("points", "need at least 2"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let last = (n - 1) as f64;
    let symmetric = (a + b).abs() <= 1e-12 * (b - a);
    Ok((0..n)
        .map(|i| {
            let t = if symmetric {
                b * (2.0 * i as f64 - last) / last
            } else {
                a + (b - a) * i as f64 / last
            };
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                t.exp()
            }
        })
        .collect())
}

fn member_value(
    state: &GaussianPureState,
    model: &EnvironmentModel,
    osc: &OscillatorParams,
    measure: Measure,
    evaluation: Evaluation,
) -> Result<(f64, Option<String>)> {
    let s = state.squeeze();
    match (evaluation, measure) {
        (Evaluation::Analytic, Measure::PeriodAveraged) => {
            let avg = period_averaged_entropy(state, model, osc)?;
            let warn = avg.regime_warning.then(|| {
                format!("s = {s:.6}: entropy per period {:.3e} exceeds {REGIME_LIMIT}", avg.per_period)
            });
            Ok((avg.rate, warn))
        }
        (Evaluation::Analytic, Measure::Rate) => {
            let m = Moments {
                mean_x: state.x0,
                mean_p: state.p0,
                var_x: state.var_x(osc),
                var_p: state.var_p(osc),
            };
            let rate = match model {
                EnvironmentModel::CaldeiraLeggett { params, .. } => entropy_rate_cl(&m, params),
                EnvironmentModel::Qome(p) => entropy_rate_qome(&m, p),
                EnvironmentModel::CorrelatedNoise(p) => {
                    let (density, dx) = sampled_gaussian_density(m.var_x, p.sigma());
                    entropy_rate_correlated(&density, dx, p)?
                }
            };
            Ok((rate, None))
        }
        (Evaluation::Numeric, measure) => {
            let samples = match measure {
                Measure::Rate => 1,
                Measure::PeriodAveraged => PERIOD_SAMPLES,
            };
            let rates = orbit_rates(state, model, osc, samples)?;
            let rate = rates.iter().sum::<f64>() / rates.len() as f64;
            let per_period = rate * osc.period();
            let warn = (measure == Measure::PeriodAveraged && per_period > REGIME_LIMIT).then(|| {
                format!("s = {s:.6}: entropy per period {per_period:.3e} exceeds {REGIME_LIMIT}")
            });
            Ok((rate, warn))
        }
    }
}

/// Evaluate `measure` on every squeezed vacuum `s ∈ squeeze` and locate the
/// minimum. Members are evaluated in parallel; results keep grid order.
pub fn run_sieve(
    squeeze: &[f64],
    model: &EnvironmentModel,
    osc: &OscillatorParams,
    measure: Measure,
    evaluation: Evaluation,
) -> Result<SieveResult> {
    if squeeze.is_empty() {
        return Err(invalid("squeeze", "family is empty"));
    }
    if squeeze.windows(2).any(|w| w[1] <= w[0]) || squeeze[0] <= 0.0 {
        return Err(invalid("squeeze", "values must be positive and strictly increasing"));
    }
    let mut warnings = Vec::new();
    if squeeze[0] > 0.25 || *squeeze.last().unwrap() < 4.0 || squeeze.len() < 33 {
        warnings.push(format!(
            "family [{}, {}] with {} points is narrower than [1/4, 4] with 33",
            squeeze[0],
            squeeze.last().unwrap(),
            squeeze.len()
        ));
    }
    let evaluated: Vec<(f64, Option<String>)> = squeeze
        .par_iter()
        .map(|&s| member_value(&GaussianPureState::squeezed(s)?, model, osc, measure, evaluation))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = evaluated.iter().map(|(v, _)| *v).collect();
    let regime: Vec<String> = evaluated.into_iter().filter_map(|(_, w)| w).collect();
    if !regime.is_empty() {
        warnings.push(format!(
            "{} of {} members violate the weak-coupling regime (first: {})",
            regime.len(),
            squeeze.len(),
            regime[0]
        ));
    }

    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = TIE_TOL * min.abs().max(f64::MIN_POSITIVE);
    let candidates: Vec<usize> = (0..values.len()).filter(|&i| values[i] - min <= tol).collect();
    let argmin = *candidates
        .iter()
        .min_by(|&&i, &&j| squeeze[i].ln().abs().total_cmp(&squeeze[j].ln().abs()))
        .expect("non-empty");
    let mut result = SieveResult {
        squeeze: squeeze.to_vec(),
        values,
        argmin,
        tie: candidates.len() > 1,
        flat: false,
        measure,
        evaluation,
        model: model.to_string(),
        rate_constant: match model {
            EnvironmentModel::Qome(p) => Some(qome_rate_constant(p)),
            _ => None,
        },
        warnings,
    };
    result.flat = result.flatness_ratio() <= FLATNESS_RATIO;
    if result.flat {
        result
            .warnings
            .push(format!("landscape is flat (max/min = {:.4})", result.flatness_ratio()));
    }
    Ok(result)
}
