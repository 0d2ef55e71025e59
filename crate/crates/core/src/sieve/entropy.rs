// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Linear entropy and its production rate, numerically from a generator or
//! from the pure-state formulas of each environment model.

use rustfft::FftPlanner;

use crate::dynamics::Generator;
use crate::environments::{
    g_correlated, CaldeiraLeggettParams, CorrelatedNoiseParams, EnvironmentModel, QomeParams,
};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::states::{DensityOperator, GaussianPureState, Moments, OscillatorParams};

/// Samples of the closed orbit used for period averages.
pub const PERIOD_SAMPLES: usize = 64;

/// Entropy produced per period above which the pure-state formulas are no
/// longer trustworthy.
pub const REGIME_LIMIT: f64 = 0.1;

const NORMALIZATION_TOL: f64 = 1e-8;

/// `1 − Tr ρ²`.
pub fn linear_entropy<R: DensityOperator + ?Sized>(rho: &R) -> f64 {
    1.0 - rho.purity()
}

/// `−2 Tr[ρ L(ρ)]`.
pub fn entropy_rate_numeric<R, G>(rho: &R, l: &G) -> f64
where
    R: DensityOperator,
    G: Generator<R> + ?Sized,
{
    -2.0 * rho.trace_with(&l.apply(rho))
}

/// `4 D Δx²`; valid while friction is negligible.
pub fn entropy_rate_cl(m: &Moments, p: &CaldeiraLeggettParams) -> f64 {
    4.0 * p.diffusion() * m.var_x
}

/// `Γ(2N+1) mω/ħ`, the constant in front of `Δx² + Δp²/m²ω²`.
pub fn qome_rate_constant(p: &QomeParams) -> f64 {
    let o = p.osc();
    p.gamma() * (2.0 * p.n_thermal() + 1.0) * o.mass * o.omega / o.hbar
}

/// `κ (Δx² + Δp²/m²ω²)` with `κ` from [`qome_rate_constant`].
///
/// For a pure Gaussian the exact rate is this value minus `Γ`; the offset is
/// the same for every state, so landscapes and minimisers agree.
pub fn entropy_rate_qome(m: &Moments, p: &QomeParams) -> f64 {
    let o = p.osc();
    let mw = o.mass * o.omega;
    qome_rate_constant(p) * (m.var_x + m.var_p / (mw * mw))
}

/// `2 ∬ P(x) P(y) g(x−y) dx dy` for a sampled probability density.
///
/// The double sum is evaluated exactly, as a lag sum over the
/// autocorrelation of `P` (computed with a zero-padded FFT).
pub fn entropy_rate_correlated(density: &[f64], dx: f64, p: &CorrelatedNoiseParams) -> Result<f64> {
    if density.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::Domain("density must be finite and non-negative".into()));
    }
    let total: f64 = density.iter().sum::<f64>() * dx;
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Normalization(total));
    }
    let n = density.len();
    let padded = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(padded);
    let inv = planner.plan_fft_inverse(padded);
    let mut buf: Vec<C64> = density.iter().map(|&v| C64::new(v, 0.0)).collect();
    buf.resize(padded, C64::new(0.0, 0.0));
    fwd.process(&mut buf);
    buf.iter_mut().for_each(|z| *z = C64::new(z.norm_sqr(), 0.0));
    inv.process(&mut buf);
    let scale = 1.0 / padded as f64;
    let mut acc = 0.0;
    for (k, c) in buf.iter().enumerate().take(n).skip(1) {
        // Lags ±k contribute equally.
        acc += 2.0 * c.re * scale * g_correlated(p, k as f64 * dx);
    }
    let rate = 2.0 * acc * dx * dx / (total * total);
    Ok(rate.clamp(0.0, 2.0 * p.lambda()))
}

/// `2λ(1 − σ/√(σ² + 4Δx²))`, the correlated-noise rate of any Gaussian.
pub fn entropy_rate_correlated_gaussian(var_x: f64, p: &CorrelatedNoiseParams) -> f64 {
    let s2 = p.sigma() * p.sigma();
    // 1 − 1/√(1+u) without cancellation for small u.
    let u = 4.0 * var_x / s2;
    let one_minus = -((-0.5) * u.ln_1p()).exp_m1();
    2.0 * p.lambda() * one_minus
}

/// Gaussian position density of variance `var_x` sampled fine enough to
/// resolve both the state and the noise correlation length.
pub fn sampled_gaussian_density(var_x: f64, sigma: f64) -> (Vec<f64>, f64) {
    let sx = var_x.sqrt();
    let dx = (sx / 4.0).min(sigma / 2.0);
    let half = (12.0 * sx / dx).ceil() as usize;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * var_x).sqrt();
    let density = (0..=2 * half)
        .map(|i| {
            let x = (i as f64 - half as f64) * dx;
            norm * (-x * x / (2.0 * var_x)).exp()
        })
        .collect();
    (density, dx)
}

/// Position variance along the closed-system orbit at phase `ωt`.
pub(crate) fn orbit_var_x(state: &GaussianPureState, osc: &OscillatorParams, phase: f64) -> f64 {
    let mw = osc.mass * osc.omega;
    let (s, c) = phase.sin_cos();
    state.var_x(osc) * c * c + state.var_p(osc) / (mw * mw) * s * s
}

/// Period-averaged entropy production.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodAverage {
    /// Mean production rate over one period.
    pub rate: f64,
    /// Entropy produced in one period, `τ · rate`.
    pub per_period: f64,
    /// Set when `per_period` exceeds [`REGIME_LIMIT`].
    pub regime_warning: bool,
}

impl PeriodAverage {
    pub(crate) fn new(rate: f64, osc: &OscillatorParams) -> Self {
        let per_period = rate * osc.period();
        Self {
            rate,
            per_period,
            regime_warning: per_period > REGIME_LIMIT,
        }
    }
}

/// Mean of the pure-state entropy production over one closed-system period.
///
/// Caldeira-Leggett gives `2D(Δx² + Δp²/m²ω²)`, the optical master equation
/// its rotation-invariant rate, and correlated noise is averaged over
/// [`PERIOD_SAMPLES`] points of the orbit with the rate evaluated by
/// quadrature.
pub fn period_averaged_entropy(
    state: &GaussianPureState,
    model: &EnvironmentModel,
    osc: &OscillatorParams,
) -> Result<PeriodAverage> {
    let mw = osc.mass * osc.omega;
    let spread = state.var_x(osc) + state.var_p(osc) / (mw * mw);
    let rate = match model {
        EnvironmentModel::CaldeiraLeggett { params, .. } => 2.0 * params.diffusion() * spread,
        EnvironmentModel::Qome(p) => qome_rate_constant(p) * spread,
        EnvironmentModel::CorrelatedNoise(p) => {
            let mut acc = 0.0;
            for k in 0..PERIOD_SAMPLES {
                let phase = std::f64::consts::TAU * k as f64 / PERIOD_SAMPLES as f64;
                let (density, dx) = sampled_gaussian_density(orbit_var_x(state, osc, phase), p.sigma());
                acc += entropy_rate_correlated(&density, dx, p)?;
            }
            acc / PERIOD_SAMPLES as f64
        }
    };
    let avg = PeriodAverage::new(rate, osc);
    if avg.regime_warning {
        log::debug!(
            "{model}: entropy per period {:.3e} exceeds {REGIME_LIMIT}",
            avg.per_period
        );
    }
    Ok(avg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{propagate_fock, QomeLiouvillian};
    use crate::linalg::CMatrix;
    use crate::states::{FockDensityMatrix, HasMoments};
    use proptest::prelude::*;

    fn osc() -> OscillatorParams {
        OscillatorParams::natural()
    }

    fn moments_of(s: f64) -> Moments {
        let g = GaussianPureState::squeezed(s).unwrap();
        Moments {
            mean_x: 0.0,
            mean_p: 0.0,
            var_x: g.var_x(&osc()),
            var_p: g.var_p(&osc()),
        }
    }

    /// Plain O(n²) double sum on an independent grid.
    fn direct_overlap_rate(var_x: f64, p: &CorrelatedNoiseParams) -> f64 {
        let sx = var_x.sqrt();
        let dx = (sx / 5.0).min(p.sigma() / 3.0);
        let half = (11.0 * sx / dx).ceil() as i64;
        let norm = 1.0 / (2.0 * std::f64::consts::PI * var_x).sqrt();
        let xs: Vec<f64> = (-half..=half).map(|i| i as f64 * dx).collect();
        let ps: Vec<f64> = xs.iter().map(|x| norm * (-x * x / (2.0 * var_x)).exp()).collect();
        let mut acc = 0.0;
        for (i, &xi) in xs.iter().enumerate() {
            for (j, &xj) in xs.iter().enumerate() {
                acc += ps[i] * ps[j] * g_correlated(p, xi - xj);
            }
        }
        2.0 * acc * dx * dx
    }

    #[test]
    fn linear_entropy_examples() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(0.75, 0.0);
        m[(1, 1)] = C64::new(0.25, 0.0);
        let rho = FockDensityMatrix::new(m).unwrap();
        assert!((linear_entropy(&rho) - 0.375).abs() < 1e-15);
        let mixed = FockDensityMatrix::new(CMatrix::identity(4, 4) * C64::new(0.25, 0.0)).unwrap();
        assert!((linear_entropy(&mixed) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn cl_rate_examples() {
        let cl = CaldeiraLeggettParams::with_diffusion(0.01, 1.0, osc()).unwrap();
        let m = Moments {
            var_x: 0.5,
            ..moments_of(1.0)
        };
        assert_eq!(entropy_rate_cl(&m, &cl), 2.0);
        let cl = CaldeiraLeggettParams::new(0.01, 5.0, osc()).unwrap();
        assert!((entropy_rate_cl(&moments_of(1.0), &cl) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn correlated_closed_form_examples() {
        let p = CorrelatedNoiseParams::new(1.0, 2.0).unwrap();
        assert!((entropy_rate_correlated_gaussian(1.0, &p) - (2.0 - 4.0 / 8f64.sqrt())).abs() < 1e-12);
        let wide = CorrelatedNoiseParams::new(1.0, 100.0).unwrap();
        assert!((entropy_rate_correlated_gaussian(1.0, &wide) / 4e-4 - 1.0).abs() < 0.05);
        let narrow = CorrelatedNoiseParams::new(1.0, 0.05).unwrap();
        assert!((entropy_rate_correlated_gaussian(1.0, &narrow) - 1.95).abs() < 1e-3);
    }

    #[test]
    fn quadrature_matches_closed_form_and_direct_sum() {
        for ratio in [0.05, 0.5, 2.0, 100.0] {
            let var_x: f64 = 0.7;
            let p = CorrelatedNoiseParams::new(1.3, ratio * var_x.sqrt()).unwrap();
            let (density, dx) = sampled_gaussian_density(var_x, p.sigma());
            let fft = entropy_rate_correlated(&density, dx, &p).unwrap();
            let closed = entropy_rate_correlated_gaussian(var_x, &p);
            assert!((fft / closed - 1.0).abs() < 1e-6, "σ/Δx = {ratio}: {fft} vs {closed}");
            let direct = direct_overlap_rate(var_x, &p);
            assert!((direct / closed - 1.0).abs() < 1e-6, "{direct} vs {closed}");
        }
    }

    #[test]
    fn unnormalized_density_is_rejected() {
        let p = CorrelatedNoiseParams::new(1.0, 1.0).unwrap();
        assert!(matches!(
            entropy_rate_correlated(&[0.5, 0.5], 0.5, &p),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn qome_rate_examples() {
        let p = QomeParams::new(1.0, 0.0, osc()).unwrap();
        assert!((entropy_rate_qome(&moments_of(1.0), &p) - 1.0).abs() < 1e-12);
        let r = entropy_rate_qome(&moments_of(2.0), &p) / entropy_rate_qome(&moments_of(1.0), &p);
        assert!((r - 2.125).abs() < 1e-12);
    }

    #[test]
    fn qome_numeric_rate_matches_finite_difference() {
        let p = QomeParams::new(0.1, 1.0, osc()).unwrap();
        let rho = FockDensityMatrix::thermal(0.0, 30).unwrap();
        let numeric = entropy_rate_numeric(&rho, &QomeLiouvillian::new(p));
        let dt = 1e-3;
        let r = propagate_fock(&rho, &p, dt, 2).unwrap();
        let s = &r.linear_entropy;
        let fd = (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * dt);
        assert!((numeric - fd).abs() < 1e-5, "{numeric} vs {fd}");
        // Exact pure-state value: κ(Δx² + Δp²) − Γ = 0.3 − 0.1.
        let m = rho.moments(&osc());
        assert!((numeric - (entropy_rate_qome(&m, &p) - p.gamma())).abs() < 1e-12);
    }

    #[test]
    fn cl_period_average_examples() {
        let cl = CaldeiraLeggettParams::with_diffusion(1e-3, 0.005, osc()).unwrap();
        let model = EnvironmentModel::caldeira_leggett(cl);
        let one = period_averaged_entropy(&GaussianPureState::coherent(0.0, 0.0), &model, &osc()).unwrap();
        assert!((one.rate - 0.01).abs() < 1e-15);
        let two = period_averaged_entropy(&GaussianPureState::squeezed(2.0).unwrap(), &model, &osc()).unwrap();
        assert!((two.rate / one.rate - 2.125).abs() < 1e-12);
        assert!(!one.regime_warning);
        let hot = EnvironmentModel::caldeira_leggett(CaldeiraLeggettParams::with_diffusion(1e-3, 1.0, osc()).unwrap());
        assert!(period_averaged_entropy(&GaussianPureState::coherent(0.0, 0.0), &hot, &osc())
            .unwrap()
            .regime_warning);
    }

    #[test]
    fn correlated_period_average_tends_to_cl() {
        let (lambda, sigma) = (1.0, 100.0);
        let corr = EnvironmentModel::CorrelatedNoise(CorrelatedNoiseParams::new(lambda, sigma).unwrap());
        let cl = EnvironmentModel::caldeira_leggett(
            CaldeiraLeggettParams::with_diffusion(1e-3, lambda / (sigma * sigma), osc()).unwrap(),
        );
        for s in [0.25, 1.0, 3.0] {
            let g = GaussianPureState::squeezed(s).unwrap();
            let a = period_averaged_entropy(&g, &corr, &osc()).unwrap().rate;
            let b = period_averaged_entropy(&g, &cl, &osc()).unwrap().rate;
            assert!((a / b - 1.0).abs() < 0.01, "s = {s}: {a} vs {b}");
        }
    }

    proptest! {
        #[test]
        fn correlated_rate_is_bounded(var_x in 0.01f64..10.0, sigma in 0.05f64..20.0, lambda in 0.01f64..5.0) {
            let p = CorrelatedNoiseParams::new(lambda, sigma).unwrap();
            let r = entropy_rate_correlated_gaussian(var_x, &p);
            prop_assert!(r >= 0.0 && r <= 2.0 * lambda);
        }

        #[test]
        fn cl_period_average_is_symmetric_in_log_s(ln_s in -1.4f64..1.4) {
            let cl = EnvironmentModel::caldeira_leggett(
                CaldeiraLeggettParams::new(0.01, 5.0, osc()).unwrap());
            let a = period_averaged_entropy(&GaussianPureState::squeezed(ln_s.exp()).unwrap(), &cl, &osc()).unwrap();
            let b = period_averaged_entropy(&GaussianPureState::squeezed((-ln_s).exp()).unwrap(), &cl, &osc()).unwrap();
            prop_assert!((a.rate - b.rate).abs() <= 1e-9 * a.rate);
        }

        #[test]
        fn period_average_ignores_the_centre(x0 in -5.0f64..5.0, p0 in -5.0f64..5.0, s in 0.3f64..3.0) {
            let q = EnvironmentModel::Qome(QomeParams::new(0.05, 1.0, osc()).unwrap());
            let centred = period_averaged_entropy(&GaussianPureState::squeezed(s).unwrap(), &q, &osc()).unwrap();
            let moved = period_averaged_entropy(&GaussianPureState::new(x0, p0, s).unwrap(), &q, &osc()).unwrap();
            prop_assert_eq!(centred.rate, moved.rate);
        }
    }
}
