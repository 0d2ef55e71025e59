// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Experiment orchestration. Everything is computed before the first file
//! is written, and files are written in a fixed order.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use super::config::{ConfigError, CpGenerator, Plan, RunConfig};
use super::output::{emit_plotdata, num, Table};
use crate::dynamics::{
    average_generator, cl_dissipator_superoperator, cp_check, fit_qome_form, hamiltonian_superoperator,
    harmonic_potential, propagate_fock, propagate_grid, qome_superoperator, PropagationResult, Superoperator,
};
use crate::environments::EnvironmentModel;
use crate::linalg::{matrix_unit, trace_product};
use crate::sieve::run_sieve;
use crate::states::{
    make_gaussian_wavefunction, number_operator, oscillator_hamiltonian, project_to_fock, GridDensityMatrix,
};

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    /// A numerical precondition failed for the configured parameters.
    Compute(crate::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(e) => write!(f, "configuration error: {e}"),
            Self::Compute(e) => write!(f, "{e}"),
            Self::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        Self::Config(e)
    }
}

impl From<crate::Error> for RunError {
    fn from(e: crate::Error) -> Self {
        Self::Compute(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

/// What a finished run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub degraded: bool,
    pub warnings: Vec<String>,
    pub files: Vec<PathBuf>,
    /// One-line human summary.
    pub summary: String,
}

#[derive(Serialize)]
struct RunMeta {
    experiment: String,
    version: &'static str,
    wall_time_seconds: f64,
    degraded: bool,
    warnings: Vec<String>,
    files: Vec<String>,
}

#[derive(Serialize)]
struct Metadata<'a> {
    run: RunMeta,
    config: &'a RunConfig,
}

struct Artifacts {
    files: Vec<(&'static str, String)>,
    degraded: bool,
    warnings: Vec<String>,
    summary: String,
}

fn toml_doc<T: Serialize>(v: &T) -> String {
    toml::to_string(v).expect("summary serializes")
}

/// Run a resolved configuration and write its artifacts into `out`.
pub fn run(config: &RunConfig, out: &Path) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let plan = config.plan()?;
    let art = match plan {
        Plan::Propagate { .. } => propagate(&plan)?,
        Plan::Sieve { .. } => sieve(&plan)?,
        Plan::AverageCheck { .. } => average_check(&plan)?,
        Plan::CpCheck { .. } => cpcheck(&plan)?,
    };
    let wall = start.elapsed().as_secs_f64();

    std::fs::create_dir_all(out)?;
    let mut files = Vec::new();
    std::fs::write(out.join("config.toml"), config.to_toml())?;
    files.push(out.join("config.toml"));
    for (name, body) in &art.files {
        std::fs::write(out.join(name), body)?;
        files.push(out.join(name));
    }
    files.extend(emit_plotdata(out)?);
    let meta = Metadata {
        run: RunMeta {
            experiment: config.experiment.map(|e| e.to_string()).unwrap_or_default(),
            version: env!("CARGO_PKG_VERSION"),
            wall_time_seconds: wall,
            degraded: art.degraded,
            warnings: art.warnings.clone(),
            files: files
                .iter()
                .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
                .collect(),
        },
        config,
    };
    std::fs::write(out.join("metadata.toml"), toml_doc(&meta))?;
    files.push(out.join("metadata.toml"));
    Ok(RunReport {
        degraded: art.degraded,
        warnings: art.warnings,
        files,
        summary: art.summary,
    })
}

fn propagation_table(r: &PropagationResult) -> Table {
    let mut t = Table::new(&[
        ("t", "time"),
        ("linear_entropy", "1"),
        ("purity", "1"),
        ("mean_x", "length"),
        ("mean_p", "momentum"),
        ("var_x", "length^2"),
        ("var_p", "momentum^2"),
        ("trace_drift", "1"),
        ("hermiticity_defect", "1"),
    ]);
    for i in 0..r.len() {
        t.push_values(&[
            r.times[i],
            r.linear_entropy[i],
            r.purity[i],
            r.mean_x[i],
            r.mean_p[i],
            r.var_x[i],
            r.var_p[i],
            r.trace_drift[i],
            r.hermiticity_defect[i],
        ]);
    }
    t
}

#[derive(Serialize)]
struct PropagateSummary {
    representation: &'static str,
    steps: usize,
    dt: String,
    final_linear_entropy: String,
    max_trace_drift: String,
    max_hermiticity_defect: String,
    degraded: bool,
    diagnostics: Vec<String>,
}

fn propagate(plan: &Plan) -> Result<Artifacts, RunError> {
    let Plan::Propagate {
        osc,
        model,
        state,
        grid,
        fock,
        dt,
        n_steps,
    } = plan
    else {
        unreachable!()
    };
    let psi = make_gaussian_wavefunction(state, grid, osc)?;
    let (result, representation) = match (model, fock) {
        (EnvironmentModel::Qome(p), Some((n_max, bound))) => {
            let rho0 = project_to_fock(&psi, grid, osc, *n_max)?.with_leakage_bound(*bound);
            (propagate_fock(&rho0, p, *dt, *n_steps)?, "fock")
        }
        _ => {
            let rho0 = GridDensityMatrix::from_wavefunction(*grid, &psi)?;
            (propagate_grid(&rho0, model, harmonic_potential(osc), osc, *dt, *n_steps)?, "grid")
        }
    };
    let diagnostics: Vec<String> = result.diagnostics.iter().map(|d| d.to_string()).collect();
    let summary = PropagateSummary {
        representation,
        steps: *n_steps,
        dt: num(*dt),
        final_linear_entropy: num(*result.linear_entropy.last().unwrap_or(&0.0)),
        max_trace_drift: num(result.max_trace_drift()),
        max_hermiticity_defect: num(result.max_hermiticity_defect()),
        degraded: result.degraded,
        diagnostics: diagnostics.clone(),
    };
    Ok(Artifacts {
        files: vec![
            ("propagate.csv", propagation_table(&result).to_csv()),
            ("propagate_summary.toml", toml_doc(&summary)),
        ],
        degraded: result.degraded,
        warnings: diagnostics,
        summary: format!(
            "{n_steps} {representation} steps, final linear entropy {:.6e}",
            summary_value(&result)
        ),
    })
}

fn summary_value(r: &PropagationResult) -> f64 {
    *r.linear_entropy.last().unwrap_or(&0.0)
}

#[derive(Serialize)]
struct SieveSummary {
    model: String,
    measure: String,
    evaluation: String,
    points: usize,
    argmin_index: usize,
    argmin_s: String,
    min_value: String,
    tie: bool,
    flat: bool,
    flatness_ratio: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    rate_constant: Option<String>,
    warnings: Vec<String>,
}

fn sieve(plan: &Plan) -> Result<Artifacts, RunError> {
    let Plan::Sieve {
        osc,
        model,
        squeeze,
        measure,
        evaluation,
    } = plan
    else {
        unreachable!()
    };
    let r = run_sieve(squeeze, model, osc, *measure, *evaluation)?;
    let mut t = Table::new(&[("s", "1"), ("value", "1/time")]);
    for (s, v) in r.squeeze.iter().zip(&r.values) {
        t.push_values(&[*s, *v]);
    }
    let summary = SieveSummary {
        model: r.model.clone(),
        measure: r.measure.to_string(),
        evaluation: r.evaluation.to_string(),
        points: r.len(),
        argmin_index: r.argmin,
        argmin_s: num(r.argmin_squeeze()),
        min_value: num(r.min_value()),
        tie: r.tie,
        flat: r.flat,
        flatness_ratio: num(r.flatness_ratio()),
        rate_constant: r.rate_constant.map(num),
        warnings: r.warnings.clone(),
    };
    Ok(Artifacts {
        files: vec![
            ("sieve_landscape.csv", t.to_csv()),
            ("sieve_summary.toml", toml_doc(&summary)),
        ],
        degraded: false,
        warnings: r.warnings.clone(),
        summary: format!(
            "argmin s = {} ({} = {:.6e}){}",
            r.argmin_squeeze(),
            r.measure,
            r.min_value(),
            if r.flat { ", landscape flat" } else { "" }
        ),
    })
}

/// `d⟨n⟩/dt` for the number state `|n⟩` under `l`.
fn population_rate(l: &Superoperator, n: usize, number: &crate::linalg::CMatrix) -> f64 {
    let d = l.dim();
    trace_product(number, &l.apply(&matrix_unit(d, n, n))).re
}

#[derive(Serialize)]
struct AverageSummary {
    dimension: usize,
    samples: usize,
    weak_dissipation: bool,
    fitted_gamma: String,
    fitted_n_thermal: String,
    fit_residual: String,
    expected_gamma: String,
    expected_n_thermal: String,
    sample_count_deviation: String,
    rotation_commutator_norm: String,
    trace_annihilation_defect: String,
    hermiticity_preservation_defect: String,
}

fn average_check(plan: &Plan) -> Result<Artifacts, RunError> {
    let Plan::AverageCheck {
        osc,
        cl,
        weak_dissipation,
        dimension,
        samples,
    } = plan
    else {
        unreachable!()
    };
    let d = *dimension;
    let delta = cl_dissipator_superoperator(cl, *weak_dissipation, d);
    let h = oscillator_hamiltonian(d, osc);
    let avg = average_generator(&delta, &h, osc, *samples)?;
    let reference = average_generator(&delta, &h, osc, 8)?;
    let fit = fit_qome_form(&avg)?;
    let fitted = fit
        .params(*osc)
        .map(|p| qome_superoperator(&p, d))
        .unwrap_or_else(|_| Superoperator::from_matrix(d, crate::linalg::CMatrix::zeros(d * d, d * d)).expect("square"));
    let number = number_operator(d);
    let mut t = Table::new(&[("n", "1"), ("rate_averaged", "1/time"), ("rate_qome_fit", "1/time")]);
    for n in 0..d {
        t.push(vec![
            n.to_string(),
            num(population_rate(&avg, n, &number)),
            num(population_rate(&fitted, n, &number)),
        ]);
    }
    let quantum = osc.hbar * osc.omega;
    let summary = AverageSummary {
        dimension: d,
        samples: *samples,
        weak_dissipation: *weak_dissipation,
        fitted_gamma: num(fit.gamma),
        fitted_n_thermal: num(fit.n_thermal),
        fit_residual: num(fit.residual),
        expected_gamma: num(2.0 * cl.gamma()),
        expected_n_thermal: num(cl.kt() / quantum - 0.5),
        sample_count_deviation: num(avg.relative_distance(&reference)),
        rotation_commutator_norm: num(avg.commutator_norm(&hamiltonian_superoperator(d, osc))),
        trace_annihilation_defect: num(avg.trace_annihilation_defect()),
        hermiticity_preservation_defect: num(avg.hermiticity_preservation_defect()),
    };
    Ok(Artifacts {
        files: vec![("average_rates.csv", t.to_csv()), ("average_check.toml", toml_doc(&summary))],
        degraded: false,
        warnings: Vec::new(),
        summary: format!(
            "averaged generator ≈ QOME with Γ = {:.6e}, N = {:.6e} (residual {:.3e})",
            fit.gamma, fit.n_thermal, fit.residual
        ),
    })
}

#[derive(Serialize)]
struct CpSummary {
    generator: String,
    dimension: usize,
    min_eigenvalue: String,
    tolerance: String,
    is_gksl: bool,
}

fn cpcheck(plan: &Plan) -> Result<Artifacts, RunError> {
    let Plan::CpCheck {
        osc,
        model,
        generator,
        dimension,
    } = plan
    else {
        unreachable!()
    };
    let d = *dimension;
    let lh = hamiltonian_superoperator(d, osc);
    let l = match (generator, model) {
        (CpGenerator::Hamiltonian, _) => lh,
        (CpGenerator::ClFull, Some(EnvironmentModel::CaldeiraLeggett { params, .. })) => {
            lh.add(&cl_dissipator_superoperator(params, false, d))
        }
        (CpGenerator::ClAveraged, Some(EnvironmentModel::CaldeiraLeggett { params, .. })) => {
            let delta = cl_dissipator_superoperator(params, false, d);
            lh.add(&average_generator(&delta, &oscillator_hamiltonian(d, osc), osc, crate::dynamics::DEFAULT_AVERAGING_SAMPLES)?)
        }
        (CpGenerator::Qome, Some(EnvironmentModel::Qome(p))) => lh.add(&qome_superoperator(p, d)),
        _ => {
            return Err(RunError::Config(ConfigError::Invalid {
                key: "cpcheck.generator".into(),
                message: "does not match the model".into(),
            }))
        }
    };
    let report = cp_check(&l)?;
    let mut t = Table::new(&[("index", "1"), ("eigenvalue", "1/time")]);
    for (i, v) in report.spectrum.iter().enumerate() {
        t.push(vec![i.to_string(), num(*v)]);
    }
    let name = toml::Value::try_from(generator)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    let summary = CpSummary {
        generator: name.clone(),
        dimension: d,
        min_eigenvalue: num(report.min_eigenvalue),
        tolerance: num(report.tolerance),
        is_gksl: report.is_gksl,
    };
    Ok(Artifacts {
        files: vec![("cp_spectrum.csv", t.to_csv()), ("cp_check.toml", toml_doc(&summary))],
        degraded: false,
        warnings: Vec::new(),
        summary: format!(
            "{name}: min eigenvalue {:.6e}, is_gksl = {}",
            report.min_eigenvalue, report.is_gksl
        ),
    })
}
