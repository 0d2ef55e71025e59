// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration.
//!
//! The file is TOML: two top-level keys and a handful of sections.
//!
//! ```toml
//! experiment = "sieve"        # propagate | sieve | average-check | cp-check
//! seed = 0                    # reserved; every experiment is deterministic
//!
//! [oscillator]                # mass, omega, hbar (all default 1)
//! [model]                     # kind = "cl" | "correlated" | "qome"
//! kind = "cl"
//! gamma = 0.01                # cl, qome
//! kT = 5.0                    # cl
//! weak_dissipation = true     # cl (default true: friction terms dropped)
//! # lambda, sigma             # correlated
//! # n_thermal                 # qome
//! [state]                     # x0, p0, squeeze          (propagate)
//! [grid]                      # n, half_span             (propagate)
//! [fock]                      # n_max, leakage_bound     (propagate, qome)
//! [integrator]                # dt, periods              (propagate)
//! [sieve]                     # s_min, s_max, points, measure, evaluation
//! [average]                   # dimension, samples       (average-check)
//! [cpcheck]                   # generator, dimension     (cp-check)
//! ```
//!
//! Unknown keys, keys that do not apply to the chosen model and sections
//! that do not apply to the chosen experiment are all rejected. Missing
//! values are filled with defaults and the resolved file is written next to
//! the results.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::DEFAULT_AVERAGING_SAMPLES;
use crate::environments::{CaldeiraLeggettParams, CorrelatedNoiseParams, EnvironmentModel, QomeParams};
use crate::sieve::{log_spaced, Evaluation, Measure};
use crate::states::{GaussianPureState, OscillatorParams, PositionGrid, DEFAULT_LEAKAGE_BOUND};

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Io { path: String, message: String },
    Parse { line: Option<usize>, message: String },
    Invalid { key: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io { path, message } => write!(f, "cannot read {path}: {message}"),
            Self::Parse {
                line: Some(l),
                message,
            } => write!(f, "line {l}: {message}"),
            Self::Parse { line: None, message } => f.write_str(message),
            Self::Invalid { key, message } => write!(f, "`{key}`: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn bad(key: &str, message: impl fmt::Display) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Propagate,
    Sieve,
    AverageCheck,
    CpCheck,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Propagate => "propagate",
            Self::Sieve => "sieve",
            Self::AverageCheck => "average-check",
            Self::CpCheck => "cp-check",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Cl,
    Correlated,
    Qome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CpGenerator {
    /// Hamiltonian plus the Caldeira-Leggett dissipator with friction.
    ClFull,
    /// Hamiltonian plus the period-averaged Caldeira-Leggett dissipator.
    ClAveraged,
    Qome,
    Hamiltonian,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSection {
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub hbar: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: ModelKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(rename = "kT", skip_serializing_if = "Option::is_none")]
    pub kt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_dissipation: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_thermal: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    pub x0: Option<f64>,
    pub p0: Option<f64>,
    pub squeeze: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: Option<usize>,
    pub half_span: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockSection {
    pub n_max: Option<usize>,
    pub leakage_bound: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    pub dt: Option<f64>,
    pub periods: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SieveSection {
    pub s_min: Option<f64>,
    pub s_max: Option<f64>,
    pub points: Option<usize>,
    pub measure: Option<Measure>,
    pub evaluation: Option<Evaluation>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AverageSection {
    pub dimension: Option<usize>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CpCheckSection {
    pub generator: CpGenerator,
    pub dimension: Option<usize>,
}

/// A configuration file as written, or after [`RunConfig::resolve`] with
/// every applicable value filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    /// Reserved; every experiment is deterministic.
    #[serde(default)]
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oscillator: Option<OscillatorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fock: Option<FockSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrator: Option<IntegratorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sieve: Option<SieveSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average: Option<AverageSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cpcheck: Option<CpCheckSection>,
}

/// Validated domain objects for one run.
#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Propagate {
        osc: OscillatorParams,
        model: EnvironmentModel,
        state: GaussianPureState,
        grid: PositionGrid,
        /// Fock cutoff and leakage bound for the optical master equation.
        fock: Option<(usize, f64)>,
        dt: f64,
        n_steps: usize,
    },
    Sieve {
        osc: OscillatorParams,
        model: EnvironmentModel,
        squeeze: Vec<f64>,
        measure: Measure,
        evaluation: Evaluation,
    },
    AverageCheck {
        osc: OscillatorParams,
        cl: CaldeiraLeggettParams,
        weak_dissipation: bool,
        dimension: usize,
        samples: usize,
    },
    CpCheck {
        osc: OscillatorParams,
        model: Option<EnvironmentModel>,
        generator: CpGenerator,
        dimension: usize,
    },
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1),
        message: e.message().to_string(),
    })
}

/// Read, parse and resolve a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config(&text)?.resolve(None)
}

fn positive(key: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(bad(key, format!("must be a positive finite number, got {v}")))
    }
}

fn require(key: &str, v: Option<f64>) -> Result<f64, ConfigError> {
    v.ok_or_else(|| bad(key, "is required for this model"))
}

fn reject(key: &str, present: bool, why: &str) -> Result<(), ConfigError> {
    if present {
        Err(bad(key, format!("does not apply {why}")))
    } else {
        Ok(())
    }
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Fill defaults and reject inapplicable keys. `experiment` (from the
    /// command line) must agree with the file when both are given.
    pub fn resolve(mut self, experiment: Option<Experiment>) -> Result<Self, ConfigError> {
        let exp = match (self.experiment, experiment) {
            (Some(a), Some(b)) if a != b => {
                return Err(bad("experiment", format!("file says `{a}` but `{b}` was requested")))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(bad("experiment", "is required")),
        };
        self.experiment = Some(exp);

        let o = self.oscillator.take().unwrap_or_default();
        self.oscillator = Some(OscillatorSection {
            mass: Some(o.mass.unwrap_or(1.0)),
            omega: Some(o.omega.unwrap_or(1.0)),
            hbar: Some(o.hbar.unwrap_or(1.0)),
        });

        let why = format!("to `{exp}` runs");
        let needs_model = match exp {
            Experiment::CpCheck => {
                !matches!(self.cpcheck.as_ref().map(|c| c.generator), Some(CpGenerator::Hamiltonian))
            }
            _ => true,
        };
        if needs_model && self.model.is_none() {
            return Err(bad("model", "section is required"));
        }
        if let Some(m) = self.model.as_mut() {
            resolve_model(m)?;
        }
        let kind = self.model.as_ref().map(|m| m.kind);

        let propagate = exp == Experiment::Propagate;
        reject("state", self.state.is_some() && !propagate, &why)?;
        reject("grid", self.grid.is_some() && !propagate, &why)?;
        reject("integrator", self.integrator.is_some() && !propagate, &why)?;
        reject(
            "fock",
            self.fock.is_some() && !(propagate && kind == Some(ModelKind::Qome)),
            "outside optical-master-equation propagation",
        )?;
        reject("sieve", self.sieve.is_some() && exp != Experiment::Sieve, &why)?;
        reject("average", self.average.is_some() && exp != Experiment::AverageCheck, &why)?;
        reject("cpcheck", self.cpcheck.is_some() && exp != Experiment::CpCheck, &why)?;

        match exp {
            Experiment::Propagate => {
                let s = self.state.take().unwrap_or_default();
                self.state = Some(StateSection {
                    x0: Some(s.x0.unwrap_or(0.0)),
                    p0: Some(s.p0.unwrap_or(0.0)),
                    squeeze: Some(s.squeeze.unwrap_or(1.0)),
                });
                let g = self.grid.take().unwrap_or_default();
                let default_grid = PositionGrid::default();
                self.grid = Some(GridSection {
                    n: Some(g.n.unwrap_or(default_grid.len())),
                    half_span: Some(g.half_span.unwrap_or(default_grid.x_max())),
                });
                if kind == Some(ModelKind::Qome) {
                    let f = self.fock.take().unwrap_or_default();
                    self.fock = Some(FockSection {
                        n_max: Some(f.n_max.unwrap_or(30)),
                        leakage_bound: Some(f.leakage_bound.unwrap_or(DEFAULT_LEAKAGE_BOUND)),
                    });
                }
                let i = self.integrator.take().unwrap_or_default();
                let omega = self.oscillator.as_ref().and_then(|o| o.omega).unwrap_or(1.0);
                let per_period = if kind == Some(ModelKind::Qome) { 2000.0 } else { 1000.0 };
                self.integrator = Some(IntegratorSection {
                    dt: Some(i.dt.unwrap_or(std::f64::consts::TAU / (omega * per_period))),
                    periods: Some(i.periods.unwrap_or(10.0)),
                });
            }
            Experiment::Sieve => {
                let s = self.sieve.take().unwrap_or_default();
                self.sieve = Some(SieveSection {
                    s_min: Some(s.s_min.unwrap_or(0.25)),
                    s_max: Some(s.s_max.unwrap_or(4.0)),
                    points: Some(s.points.unwrap_or(33)),
                    measure: Some(s.measure.unwrap_or(Measure::PeriodAveraged)),
                    evaluation: Some(s.evaluation.unwrap_or(Evaluation::Analytic)),
                });
            }
            Experiment::AverageCheck => {
                if kind != Some(ModelKind::Cl) {
                    return Err(bad("model.kind", "average-check averages the Caldeira-Leggett generator; use kind = \"cl\""));
                }
                let a = self.average.take().unwrap_or_default();
                self.average = Some(AverageSection {
                    dimension: Some(a.dimension.unwrap_or(12)),
                    samples: Some(a.samples.unwrap_or(DEFAULT_AVERAGING_SAMPLES)),
                });
            }
            Experiment::CpCheck => {
                let c = self
                    .cpcheck
                    .take()
                    .ok_or_else(|| bad("cpcheck", "section with `generator` is required"))?;
                let expected = match c.generator {
                    CpGenerator::ClFull | CpGenerator::ClAveraged => Some(ModelKind::Cl),
                    CpGenerator::Qome => Some(ModelKind::Qome),
                    CpGenerator::Hamiltonian => None,
                };
                if let Some(k) = expected {
                    if kind != Some(k) {
                        return Err(bad("model.kind", format!("generator {:?} needs model kind {:?}", c.generator, k)));
                    }
                } else if self.model.is_some() {
                    return Err(bad("model", "does not apply to the Hamiltonian generator"));
                }
                self.cpcheck = Some(CpCheckSection {
                    generator: c.generator,
                    dimension: Some(c.dimension.unwrap_or(6)),
                });
            }
        }
        self.plan()?;
        Ok(self)
    }

    /// Build the validated domain objects. Only meaningful after
    /// [`RunConfig::resolve`].
    pub fn plan(&self) -> Result<Plan, ConfigError> {
        let exp = self.experiment.ok_or_else(|| bad("experiment", "is required"))?;
        let o = self.oscillator.clone().unwrap_or_default();
        let osc = OscillatorParams::new(o.mass.unwrap_or(1.0), o.omega.unwrap_or(1.0), o.hbar.unwrap_or(1.0))
            .map_err(|e| bad("oscillator", e))?;
        let model = self.model.as_ref().map(|m| build_model(m, osc)).transpose()?;
        let need = |what: &str| bad(what, "section is required");
        Ok(match exp {
            Experiment::Propagate => {
                let model = model.ok_or_else(|| need("model"))?;
                let s = self.state.as_ref().ok_or_else(|| need("state"))?;
                let state = GaussianPureState::new(s.x0.unwrap_or(0.0), s.p0.unwrap_or(0.0), s.squeeze.unwrap_or(1.0))
                    .map_err(|e| bad("state", e))?;
                let g = self.grid.as_ref().ok_or_else(|| need("grid"))?;
                let half = positive("grid.half_span", g.half_span.unwrap_or(10.0))?;
                let grid = PositionGrid::symmetric(half, g.n.unwrap_or(256)).map_err(|e| bad("grid.n", e))?;
                let fock = match (&model, &self.fock) {
                    (EnvironmentModel::Qome(_), Some(f)) => {
                        let n_max = f.n_max.unwrap_or(30);
                        if n_max < 2 {
                            return Err(bad("fock.n_max", "must be at least 2"));
                        }
                        Some((n_max, positive("fock.leakage_bound", f.leakage_bound.unwrap_or(DEFAULT_LEAKAGE_BOUND))?))
                    }
                    _ => None,
                };
                let i = self.integrator.as_ref().ok_or_else(|| need("integrator"))?;
                let dt = positive("integrator.dt", i.dt.unwrap_or(osc.period() / 1000.0))?;
                let periods = positive("integrator.periods", i.periods.unwrap_or(10.0))?;
                let n_steps = (periods * osc.period() / dt).round() as usize;
                Plan::Propagate {
                    osc,
                    model,
                    state,
                    grid,
                    fock,
                    dt,
                    n_steps,
                }
            }
            Experiment::Sieve => {
                let model = model.ok_or_else(|| need("model"))?;
                let s = self.sieve.clone().unwrap_or_default();
                let squeeze = log_spaced(s.s_min.unwrap_or(0.25), s.s_max.unwrap_or(4.0), s.points.unwrap_or(33))
                    .map_err(|e| bad("sieve", e))?;
                Plan::Sieve {
                    osc,
                    model,
                    squeeze,
                    measure: s.measure.unwrap_or(Measure::PeriodAveraged),
                    evaluation: s.evaluation.unwrap_or(Evaluation::Analytic),
                }
            }
            Experiment::AverageCheck => {
                let (cl, weak_dissipation) = match model {
                    Some(EnvironmentModel::CaldeiraLeggett {
                        params,
                        weak_dissipation,
                    }) => (params, weak_dissipation),
                    _ => return Err(bad("model.kind", "must be \"cl\"")),
                };
                let a = self.average.clone().unwrap_or_default();
                let dimension = a.dimension.unwrap_or(12);
                let samples = a.samples.unwrap_or(DEFAULT_AVERAGING_SAMPLES);
                if dimension < 2 {
                    return Err(bad("average.dimension", "must be at least 2"));
                }
                if samples == 0 {
                    return Err(bad("average.samples", "must be at least 1"));
                }
                Plan::AverageCheck {
                    osc,
                    cl,
                    weak_dissipation,
                    dimension,
                    samples,
                }
            }
            Experiment::CpCheck => {
                let c = self.cpcheck.as_ref().ok_or_else(|| need("cpcheck"))?;
                let dimension = c.dimension.unwrap_or(6);
                if !(2..=40).contains(&dimension) {
                    return Err(bad("cpcheck.dimension", "must lie in 2..=40"));
                }
                Plan::CpCheck {
                    osc,
                    model,
                    generator: c.generator,
                    dimension,
                }
            }
        })
    }
}

fn resolve_model(m: &mut ModelSection) -> Result<(), ConfigError> {
    let not_for = |kind: &str| format!("to `{kind}` models");
    match m.kind {
        ModelKind::Cl => {
            reject("model.lambda", m.lambda.is_some(), &not_for("cl"))?;
            reject("model.sigma", m.sigma.is_some(), &not_for("cl"))?;
            reject("model.n_thermal", m.n_thermal.is_some(), &not_for("cl"))?;
            require("model.gamma", m.gamma)?;
            require("model.kT", m.kt)?;
            m.weak_dissipation.get_or_insert(true);
        }
        ModelKind::Correlated => {
            reject("model.gamma", m.gamma.is_some(), &not_for("correlated"))?;
            reject("model.kT", m.kt.is_some(), &not_for("correlated"))?;
            reject("model.weak_dissipation", m.weak_dissipation.is_some(), &not_for("correlated"))?;
            reject("model.n_thermal", m.n_thermal.is_some(), &not_for("correlated"))?;
            require("model.lambda", m.lambda)?;
            require("model.sigma", m.sigma)?;
        }
        ModelKind::Qome => {
            reject("model.kT", m.kt.is_some(), &not_for("qome"))?;
            reject("model.weak_dissipation", m.weak_dissipation.is_some(), &not_for("qome"))?;
            reject("model.lambda", m.lambda.is_some(), &not_for("qome"))?;
            reject("model.sigma", m.sigma.is_some(), &not_for("qome"))?;
            require("model.gamma", m.gamma)?;
            require("model.n_thermal", m.n_thermal)?;
        }
    }
    Ok(())
}

fn build_model(m: &ModelSection, osc: OscillatorParams) -> Result<EnvironmentModel, ConfigError> {
    Ok(match m.kind {
        ModelKind::Cl => {
            let p = CaldeiraLeggettParams::new(require("model.gamma", m.gamma)?, require("model.kT", m.kt)?, osc)
                .map_err(|e| bad("model", e))?;
            EnvironmentModel::CaldeiraLeggett {
                params: p,
                weak_dissipation: m.weak_dissipation.unwrap_or(true),
            }
        }
        ModelKind::Correlated => EnvironmentModel::CorrelatedNoise(
            CorrelatedNoiseParams::new(require("model.lambda", m.lambda)?, require("model.sigma", m.sigma)?)
                .map_err(|e| bad("model", e))?,
        ),
        ModelKind::Qome => EnvironmentModel::Qome(
            QomeParams::new(require("model.gamma", m.gamma)?, require("model.n_thermal", m.n_thermal)?, osc)
                .map_err(|e| bad("model", e))?,
        ),
    })
}
