// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Position-grid dynamics for the Caldeira-Leggett and correlated-noise
//! models.

use nalgebra::DMatrix;

use super::{Diagnostic, Generator, PropagationResult};
use crate::environments::EnvironmentModel;
use crate::error::{Error, Result};
use crate::linalg::{re, CMatrix, CVector, C64, I};
use crate::states::{
    DensityOperator, GridDensityMatrix, GridFft, Moments, OscillatorParams, PositionGrid,
};

/// Largest admissible `dt·ω` for [`propagate_grid`].
const MAX_DT_OMEGA: f64 = 0.01;
const EDGE_POPULATION_TOL: f64 = 1e-8;

/// `V(x) = mω²x²/2`.
pub fn harmonic_potential(osc: &OscillatorParams) -> impl Fn(f64) -> f64 + Send + Sync + Copy {
    let k = osc.mass * osc.omega * osc.omega;
    move |x| 0.5 * k * x * x
}

/// `2π/(1000 ω)`.
pub fn default_grid_dt(osc: &OscillatorParams) -> f64 {
    osc.period() / 1000.0
}

/// Right-hand side of the position-space master equation
///
/// `∂ρ(x,x')/∂t = −(i/ħ)[p²/2m + V, ρ] − g(x,x') ρ(x,x') (+ friction)`.
///
/// Kinetic terms are applied spectrally.
#[derive(Debug, Clone)]
pub struct GridLiouvillian {
    grid: PositionGrid,
    osc: OscillatorParams,
    potential: Vec<f64>,
    decoherence: DMatrix<f64>,
    friction: Option<f64>,
    momenta: Vec<f64>,
    fft: GridFft,
    hamiltonian: bool,
}

impl GridLiouvillian {
    pub fn new(
        grid: PositionGrid,
        model: &EnvironmentModel,
        potential: impl Fn(f64) -> f64,
        osc: &OscillatorParams,
    ) -> Result<Self> {
        let friction = match model {
            EnvironmentModel::CaldeiraLeggett {
                params,
                weak_dissipation: false,
            } => Some(params.gamma()),
            EnvironmentModel::Qome(_) => {
                return Err(Error::Precondition(
                    "the quantum-optical master equation is propagated in the Fock basis".into(),
                ))
            }
            _ => None,
        };
        let xs = grid.points();
        let decoherence = DMatrix::from_fn(grid.len(), grid.len(), |i, j| {
            model.decoherence_rate(xs[i], xs[j]).unwrap_or(0.0)
        });
        Ok(Self {
            potential: xs.iter().map(|&x| potential(x)).collect(),
            decoherence,
            friction,
            momenta: grid.momenta(osc.hbar),
            fft: GridFft::new(grid.len()),
            grid,
            osc: *osc,
            hamiltonian: true,
        })
    }

    /// Unitary dynamics only.
    pub fn closed(grid: PositionGrid, potential: impl Fn(f64) -> f64, osc: &OscillatorParams) -> Self {
        let xs = grid.points();
        Self {
            potential: xs.iter().map(|&x| potential(x)).collect(),
            decoherence: DMatrix::zeros(grid.len(), grid.len()),
            friction: None,
            momenta: grid.momenta(osc.hbar),
            fft: GridFft::new(grid.len()),
            grid,
            osc: *osc,
            hamiltonian: true,
        }
    }

    /// Drop `−(i/ħ)[H,ρ]` and keep only the environment terms. The unitary
    /// part never contributes to `Tr[ρ L(ρ)]`, so entropy-rate evaluations
    /// can skip its spectral transforms.
    pub fn without_hamiltonian(mut self) -> Self {
        self.hamiltonian = false;
        self
    }

    pub fn grid(&self) -> &PositionGrid {
        &self.grid
    }

    fn momentum_fn(&self, f: impl Fn(f64) -> C64) -> Vec<C64> {
        self.momenta.iter().map(|&p| f(p)).collect()
    }

    fn left_x(&self, a: &CMatrix) -> CMatrix {
        let xs = self.grid.points();
        CMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * xs[i])
    }

    fn right_x(&self, a: &CMatrix) -> CMatrix {
        let xs = self.grid.points();
        CMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * xs[j])
    }

    /// `−(iγ/2ħ)[{p,x},ρ] − (iγ/ħ)([x,ρp] − [p,ρx])`.
    fn friction_term(&self, gamma: f64, rho: &CMatrix) -> CMatrix {
        let pf = self.momentum_fn(re);
        let lp = |a: &CMatrix| self.fft.left_momentum_multiply(a, &pf);
        let rp = |a: &CMatrix| self.fft.right_momentum_multiply(a, &pf);
        let hbar = self.osc.hbar;
        let xr = self.left_x(rho);
        let rx = self.right_x(rho);
        let pr = lp(rho);
        let rp_ = rp(rho);
        // {p,x}ρ − ρ{p,x}
        let px_rho = lp(&xr) + self.left_x(&pr);
        let rho_px = self.right_x(&rp_) + rp(&rx);
        let second = (px_rho - rho_px) * (-I * gamma / (2.0 * hbar));
        // [x,ρp] − [p,ρx] = xρp − ρpx − pρx + ρxp
        let fourth = self.left_x(&rp_) - self.right_x(&rp_) - lp(&rx) + rp(&rx);
        second + fourth * (-I * gamma / hbar)
    }

    pub fn apply_matrix(&self, rho: &CMatrix) -> CMatrix {
        let hbar = self.osc.hbar;
        let n = self.grid.len();
        let mut out = if self.hamiltonian {
            let m = self.osc.mass;
            let kin = self.momentum_fn(|p| re(p * p / (2.0 * m)));
            let t_rho = self.fft.left_momentum_multiply(rho, &kin);
            let rho_t = self.fft.right_momentum_multiply(rho, &kin);
            (t_rho - rho_t) * (-I / hbar)
        } else {
            CMatrix::zeros(n, n)
        };
        let h = if self.hamiltonian { 1.0 } else { 0.0 };
        for j in 0..n {
            for i in 0..n {
                let dv = h * (self.potential[i] - self.potential[j]);
                out[(i, j)] += rho[(i, j)] * (-I * dv / hbar - self.decoherence[(i, j)]);
            }
        }
        if let Some(gamma) = self.friction {
            out += self.friction_term(gamma, rho);
        }
        out
    }
}

impl Generator<GridDensityMatrix> for GridLiouvillian {
    fn apply(&self, rho: &GridDensityMatrix) -> CMatrix {
        self.apply_matrix(rho.elements())
    }
}

fn check_step(dt: f64, osc: &OscillatorParams) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::StepSize(format!("dt must be positive, got {dt}")));
    }
    if dt * osc.omega > MAX_DT_OMEGA * (1.0 + 1e-12) {
        return Err(Error::StepSize(format!(
            "dt·ω = {:.4} exceeds {MAX_DT_OMEGA}",
            dt * osc.omega
        )));
    }
    Ok(())
}

/// Strang-split propagation of a grid density matrix.
///
/// Each step is a half kinetic step in the momentum representation, a full
/// potential-plus-decoherence step in position representation (the noise
/// factor `e^{−g(x,x')dt}` is applied exactly; friction terms, when
/// enabled, by an Euler step) and another half kinetic step. Observables are
/// recorded after every step.
pub fn propagate_grid(
    rho0: &GridDensityMatrix,
    model: &EnvironmentModel,
    potential: impl Fn(f64) -> f64,
    osc: &OscillatorParams,
    dt: f64,
    n_steps: usize,
) -> Result<PropagationResult> {
    check_step(dt, osc)?;
    let grid = *rho0.grid();
    let liouvillian = GridLiouvillian::new(grid, model, potential, osc)?;
    let n = grid.len();
    let hbar = osc.hbar;
    let fft = &liouvillian.fft;
    let momenta = &liouvillian.momenta;

    let c = dt / (4.0 * osc.mass * hbar);
    let kinetic_half = CMatrix::from_fn(n, n, |k, l| {
        C64::from_polar(1.0, -(momenta[k].powi(2) - momenta[l].powi(2)) * c)
    });
    let v = &liouvillian.potential;
    let position_factor = CMatrix::from_fn(n, n, |i, j| {
        C64::from_polar(
            (-liouvillian.decoherence[(i, j)] * dt).exp(),
            -(v[i] - v[j]) * dt / hbar,
        )
    });

    let edge_width = (n / 32).max(1);
    let mut out = PropagationResult::with_capacity(n_steps + 1);
    let mut obs = Observer::new(grid, momenta.clone(), edge_width);

    // The state is carried in the momentum representation P = F ρ F† between
    // steps, so each step costs two 2D transforms.
    let mut p = rho0.elements().clone();
    fft.to_momentum(&mut p);
    let mut rho = CMatrix::zeros(n, n);
    obs.record(&mut out, 0.0, &p, fft, 0);

    for step in 1..=n_steps {
        p.component_mul_assign(&kinetic_half);
        rho.copy_from(&p);
        fft.to_position(&mut rho);
        rho.component_mul_assign(&position_factor);
        if let Some(gamma) = liouvillian.friction {
            let f = liouvillian.friction_term(gamma, &rho);
            rho += f * re(dt);
        }
        p.copy_from(&rho);
        fft.to_momentum(&mut p);
        p.component_mul_assign(&kinetic_half);
        obs.record(&mut out, step as f64 * dt, &p, fft, step);
    }
    fft.to_position(&mut p);
    out.final_state = p;
    Ok(out)
}

/// Observables of a grid state held in the momentum representation.
struct Observer {
    grid: PositionGrid,
    momenta: Vec<f64>,
    edge_width: usize,
    diag: Vec<C64>,
}

impl Observer {
    fn new(grid: PositionGrid, momenta: Vec<f64>, edge_width: usize) -> Self {
        Self {
            diag: vec![C64::new(0.0, 0.0); grid.len()],
            grid,
            momenta,
            edge_width,
        }
    }

    /// `ρ(x_j, x_j) = n⁻² Σ_m e^{2πi m j/n} Σ_l P_{l+m, l}` (indices mod n).
    fn position_diagonal(&mut self, p: &CMatrix, fft: &GridFft) -> Vec<f64> {
        let n = self.grid.len();
        for (m, d) in self.diag.iter_mut().enumerate() {
            *d = (0..n).map(|l| p[((l + m) % n, l)]).sum();
        }
        fft.inverse_vec(&mut self.diag);
        let scale = 1.0 / (n * n) as f64;
        self.diag.iter().map(|z| z.re * scale).collect()
    }

    fn record(&mut self, out: &mut PropagationResult, t: f64, p: &CMatrix, fft: &GridFft, step: usize) {
        let n = self.grid.len();
        let dx = self.grid.dx();
        let xdiag = self.position_diagonal(p, fft);
        let pdiag: Vec<f64> = (0..n).map(|k| p[(k, k)].re).collect();
        let (mean_x, var_x) = crate::states::moments_impl::grid_position_moments(&self.grid, &xdiag);
        let (mean_p, var_p) = crate::states::moments_impl::weighted_mean_var(&self.momenta, &pdiag);
        let trace = xdiag.iter().sum::<f64>() * dx;
        // F/√n is unitary, so Frobenius norms carry over with a factor n.
        let nf = n as f64;
        let purity = p.iter().map(|z| z.norm_sqr()).sum::<f64>() * (dx / nf).powi(2);
        // Upper bound on max|ρ − ρ†| through the Frobenius norm.
        let mut herm = 0.0;
        for j in 0..n {
            for i in 0..j {
                herm += 2.0 * (p[(i, j)] - p[(j, i)].conj()).norm_sqr();
            }
            herm += (2.0 * p[(j, j)].im).powi(2);
        }
        let m = Moments {
            mean_x,
            mean_p,
            var_x,
            var_p,
        };
        out.record(t, purity, m, trace, herm.sqrt() / nf, step);
        let w = self.edge_width.min(n / 2);
        let population = (0..w).chain(n - w..n).map(|i| xdiag[i]).sum::<f64>() * dx;
        if population > EDGE_POPULATION_TOL {
            out.flag(Diagnostic::BoundaryLeak { step, population });
        }
    }
}

/// Unitary Strang propagation of a wavefunction on the grid.
pub fn propagate_wavefunction(
    psi: &CVector,
    grid: &PositionGrid,
    potential: impl Fn(f64) -> f64,
    osc: &OscillatorParams,
    dt: f64,
    n_steps: usize,
) -> CVector {
    let fft = GridFft::new(grid.len());
    let n = grid.len() as f64;
    let kinetic: Vec<C64> = grid
        .momenta(osc.hbar)
        .iter()
        .map(|p| C64::from_polar(1.0 / n, -p * p * dt / (4.0 * osc.mass * osc.hbar)))
        .collect();
    let pot: Vec<C64> = grid
        .points()
        .iter()
        .map(|&x| C64::from_polar(1.0, -potential(x) * dt / osc.hbar))
        .collect();
    let mut v = psi.clone();
    let half_kick = |v: &mut CVector| {
        fft.forward_vec(v.as_mut_slice());
        v.iter_mut().zip(&kinetic).for_each(|(z, k)| *z *= k);
        fft.inverse_vec(v.as_mut_slice());
    };
    for _ in 0..n_steps {
        half_kick(&mut v);
        v.iter_mut().zip(&pot).for_each(|(z, k)| *z *= k);
        half_kick(&mut v);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::{CaldeiraLeggettParams, CorrelatedNoiseParams, QomeParams};
    use crate::linalg::frobenius;
    use crate::sieve::entropy_rate_numeric;
    use crate::states::{make_gaussian_wavefunction, GaussianPureState};

    fn osc() -> OscillatorParams {
        OscillatorParams::natural()
    }

    fn state(s: GaussianPureState, grid: PositionGrid) -> GridDensityMatrix {
        let psi = make_gaussian_wavefunction(&s, &grid, &osc()).unwrap();
        GridDensityMatrix::from_wavefunction(grid, &psi).unwrap()
    }

    fn closed_model() -> EnvironmentModel {
        EnvironmentModel::caldeira_leggett(CaldeiraLeggettParams::new(0.0, 1.0, osc()).unwrap())
    }

    #[test]
    fn rejects_large_steps_and_qome() {
        let rho = state(GaussianPureState::coherent(0.0, 0.0), PositionGrid::symmetric(8.0, 32).unwrap());
        let v = harmonic_potential(&osc());
        assert!(matches!(
            propagate_grid(&rho, &closed_model(), v, &osc(), 0.02, 1),
            Err(Error::StepSize(_))
        ));
        let q = EnvironmentModel::Qome(QomeParams::new(0.1, 0.0, osc()).unwrap());
        assert!(matches!(
            propagate_grid(&rho, &q, v, &osc(), 0.01, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ehrenfest_over_one_period() {
        let grid = PositionGrid::default();
        let rho = state(GaussianPureState::coherent(1.0, 0.0), grid);
        let dt = default_grid_dt(&osc());
        let r = propagate_grid(&rho, &closed_model(), harmonic_potential(&osc()), &osc(), dt, 1000).unwrap();
        for (t, x) in r.times.iter().zip(&r.mean_x) {
            assert!((x - t.cos()).abs() < 2e-4, "t = {t}: {x}");
        }
        assert!(r.purity.iter().all(|p| (p - 1.0).abs() < 1e-6));
        assert!(!r.degraded);
    }

    #[test]
    fn initial_entropy_rate_is_four_d_var_x() {
        let grid = PositionGrid::default();
        let rho = state(GaussianPureState::coherent(0.0, 0.0), grid);
        let cl = CaldeiraLeggettParams::with_diffusion(0.01, 0.05, osc()).unwrap();
        let model = EnvironmentModel::caldeira_leggett(cl);
        let dt = 1e-3;
        let r = propagate_grid(&rho, &model, harmonic_potential(&osc()), &osc(), dt, 2).unwrap();
        let s = &r.linear_entropy;
        let rate = (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * dt);
        assert!((rate - 0.1).abs() < 1e-3, "{rate}");
    }

    #[test]
    fn liouvillian_matches_finite_difference_of_propagator() {
        let grid = PositionGrid::symmetric(10.0, 64).unwrap();
        let rho = state(GaussianPureState::new(0.5, -0.3, 1.3).unwrap(), grid);
        let cl = CaldeiraLeggettParams::new(0.05, 2.0, osc()).unwrap();
        for model in [
            EnvironmentModel::caldeira_leggett(cl),
            EnvironmentModel::caldeira_leggett_full(cl),
            EnvironmentModel::CorrelatedNoise(CorrelatedNoiseParams::new(0.8, 1.2).unwrap()),
        ] {
            let v = harmonic_potential(&osc());
            let l = GridLiouvillian::new(grid, &model, v, &osc()).unwrap();
            let dt = 1e-4;
            let r = propagate_grid(&rho, &model, v, &osc(), dt, 1).unwrap();
            let fd = (&r.final_state - rho.elements()) / re(dt);
            let exact = l.apply(&rho);
            let rel = frobenius(&(fd - &exact)) / frobenius(&exact);
            assert!(rel < 1e-3, "{model}: {rel}");
        }
    }

    #[test]
    fn friction_run_preserves_trace() {
        let grid = PositionGrid::default();
        let rho = state(GaussianPureState::coherent(1.0, 0.0), grid);
        let cl = CaldeiraLeggettParams::new(0.05, 1.0, osc()).unwrap();
        let model = EnvironmentModel::caldeira_leggett_full(cl);
        let r = propagate_grid(&rho, &model, harmonic_potential(&osc()), &osc(), 0.005, 400).unwrap();
        assert!(r.max_trace_drift() < 1e-6);
        // Only ⟨p⟩ is damped (at 2γ), so starting from (1, 0) the phase-space
        // radius is exp(−γ(t − sin 2t / 2)) to first order in γ.
        let t = r.times[400];
        let amp = (r.mean_x[400].powi(2) + r.mean_p[400].powi(2)).sqrt();
        let expect = (-0.05 * (t - (2.0 * t).sin() / 2.0)).exp();
        assert!((amp - expect).abs() < 2e-3, "{amp} vs {expect}");
    }

    #[test]
    fn unitary_generator_produces_no_entropy() {
        let grid = PositionGrid::default();
        let rho = state(GaussianPureState::new(0.3, 0.2, 0.7).unwrap(), grid);
        let l = GridLiouvillian::closed(grid, harmonic_potential(&osc()), &osc());
        assert!(entropy_rate_numeric(&rho, &l).abs() < 1e-9);
    }

    #[test]
    fn wavefunction_propagation_returns_after_one_period() {
        let grid = PositionGrid::default();
        let s = GaussianPureState::new(1.0, 0.0, 1.2).unwrap();
        let psi = make_gaussian_wavefunction(&s, &grid, &osc()).unwrap();
        let out = propagate_wavefunction(&psi, &grid, harmonic_potential(&osc()), &osc(), default_grid_dt(&osc()), 1000);
        // Back to the start up to the global phase e^{−iωτ/2} = −1.
        let overlap = (psi.adjoint() * &out)[(0, 0)] * grid.dx();
        assert!((overlap.norm() - 1.0).abs() < 1e-4);
    }
}
