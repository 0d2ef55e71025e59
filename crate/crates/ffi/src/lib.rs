// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI for predsieve.
//!
//! Every entry point returns a [`PsStatus`]; outputs go through pointer
//! arguments. After a failure, `ps_last_error` returns a message for the
//! calling thread. Results are returned as opaque handles that the caller
//! releases with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use predsieve::dynamics::{
    average_generator, cl_dissipator_superoperator, cp_check, hamiltonian_superoperator, harmonic_potential,
    propagate_fock, propagate_grid, qome_superoperator, PropagationResult, DEFAULT_AVERAGING_SAMPLES,
};
use predsieve::environments::{
    thermal_occupation, CaldeiraLeggettParams, CorrelatedNoiseParams, EnvironmentModel, QomeParams,
};
use predsieve::sieve::{log_spaced, run_sieve, Evaluation, Measure, SieveResult};
use predsieve::states::{
    make_gaussian_wavefunction, oscillator_hamiltonian, project_to_fock, GaussianPureState, GridDensityMatrix,
    PositionGrid,
};
use predsieve::{Error, OscillatorParams};

/// Result code of every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A numerical precondition failed (step size, truncation, grid edge).
    Numeric = 3,
    /// The result buffer is too small; the required length is reported.
    BufferTooSmall = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

/// Environment model selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsModelKind {
    /// Caldeira-Leggett, position diffusion only. `a = γ`, `b = k_BT`.
    Cl = 0,
    /// Caldeira-Leggett with friction. `a = γ`, `b = k_BT`.
    ClFull = 1,
    /// Correlated noise. `a = λ`, `b = σ`.
    Correlated = 2,
    /// Quantum optical master equation. `a = Γ`, `b = N`.
    Qome = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PsModel {
    pub kind: PsModelKind,
    pub a: f64,
    pub b: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PsOscillator {
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsMeasure {
    Rate = 0,
    PeriodAveraged = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsEvaluation {
    Analytic = 0,
    Numeric = 1,
}

/// Generator examined by `ps_cp_check`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsGenerator {
    Hamiltonian = 0,
    /// Caldeira-Leggett with friction, before averaging.
    ClFull = 1,
    /// Caldeira-Leggett with friction, averaged over the free motion.
    ClAveraged = 2,
    Qome = 3,
}

/// Series recorded by `ps_propagate`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsSeries {
    Time = 0,
    LinearEntropy = 1,
    MeanX = 2,
    MeanP = 3,
    VarX = 4,
    VarP = 5,
    TraceDrift = 6,
    HermiticityDefect = 7,
}

/// Opaque sieve landscape.
pub struct PsSieve(SieveResult);

/// Opaque trajectory.
pub struct PsTrajectory(PropagationResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(status: PsStatus, msg: impl Into<String>) -> PsStatus {
    set_error(msg);
    status
}

fn from_core(e: Error) -> PsStatus {
    let status = match e {
        Error::InvalidParameter { .. } | Error::Domain(_) | Error::InvalidState(_) => PsStatus::InvalidArgument,
        _ => PsStatus::Numeric,
    };
    fail(status, e.to_string())
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), PsStatus>) -> PsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PsStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(PsStatus::Panic, msg)
        }
    }
}

fn nonnull<T>(p: *const T, name: &str) -> Result<(), PsStatus> {
    if p.is_null() {
        Err(fail(PsStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

fn oscillator(o: *const PsOscillator) -> Result<OscillatorParams, PsStatus> {
    if o.is_null() {
        return Ok(OscillatorParams::natural());
    }
    let o = unsafe { *o };
    OscillatorParams::new(o.mass, o.omega, o.hbar).map_err(from_core)
}

fn model(m: &PsModel, osc: OscillatorParams) -> Result<EnvironmentModel, PsStatus> {
    Ok(match m.kind {
        PsModelKind::Cl => EnvironmentModel::caldeira_leggett(CaldeiraLeggettParams::new(m.a, m.b, osc).map_err(from_core)?),
        PsModelKind::ClFull => {
            EnvironmentModel::caldeira_leggett_full(CaldeiraLeggettParams::new(m.a, m.b, osc).map_err(from_core)?)
        }
        PsModelKind::Correlated => EnvironmentModel::CorrelatedNoise(CorrelatedNoiseParams::new(m.a, m.b).map_err(from_core)?),
        PsModelKind::Qome => EnvironmentModel::Qome(QomeParams::new(m.a, m.b, osc).map_err(from_core)?),
    })
}

/// Copies `src` into `buf[..cap]`. `len` always receives `src.len()`.
fn copy_out(src: &[f64], buf: *mut f64, cap: usize, len: *mut usize) -> Result<(), PsStatus> {
    if !len.is_null() {
        unsafe { *len = src.len() };
    }
    if src.len() > cap {
        return Err(fail(
            PsStatus::BufferTooSmall,
            format!("need {} elements, buffer holds {cap}", src.len()),
        ));
    }
    nonnull(buf, "buf")?;
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len()) };
    Ok(())
}

/// Message describing the last failure on this thread. Empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ps_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ps_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Bose-Einstein occupation `1/(e^x − 1)` for `x = ħω/k_BT > 0`.
///
/// # Safety
/// `out` must be null or point to writable memory.
#[no_mangle]
pub unsafe extern "C" fn ps_thermal_occupation(beta_hbar_omega: f64, out: *mut f64) -> PsStatus {
    guard(|| {
        nonnull(out, "out")?;
        let n = thermal_occupation(beta_hbar_omega).map_err(from_core)?;
        unsafe { *out = n };
        Ok(())
    })
}

/// Scans `n` log-spaced squeezed vacua between `s_lo` and `s_hi`.
/// `osc` may be null for natural units.
///
/// # Safety
/// `model` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ps_sieve_run(
    osc: *const PsOscillator,
    model: *const PsModel,
    s_lo: f64,
    s_hi: f64,
    n: usize,
    measure: PsMeasure,
    evaluation: PsEvaluation,
    out: *mut *mut PsSieve,
) -> PsStatus {
    guard(|| {
        nonnull(model, "model")?;
        nonnull(out, "out")?;
        unsafe { *out = ptr::null_mut() };
        let osc = oscillator(osc)?;
        let m = self::model(unsafe { &*model }, osc)?;
        let family = log_spaced(s_lo, s_hi, n).map_err(from_core)?;
        let measure = match measure {
            PsMeasure::Rate => Measure::Rate,
            PsMeasure::PeriodAveraged => Measure::PeriodAveraged,
        };
        let evaluation = match evaluation {
            PsEvaluation::Analytic => Evaluation::Analytic,
            PsEvaluation::Numeric => Evaluation::Numeric,
        };
        let r = run_sieve(&family, &m, &osc, measure, evaluation).map_err(from_core)?;
        unsafe { *out = Box::into_raw(Box::new(PsSieve(r))) };
        Ok(())
    })
}

/// Number of family members, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle from `ps_sieve_run`.
#[no_mangle]
pub unsafe extern "C" fn ps_sieve_len(h: *const PsSieve) -> usize {
    unsafe { h.as_ref() }.map_or(0, |h| h.0.len())
}

/// Copies the landscape values. `len` receives the member count.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_sieve_values(h: *const PsSieve, buf: *mut f64, cap: usize, len: *mut usize) -> PsStatus {
    guard(|| {
        nonnull(h, "handle")?;
        copy_out(&unsafe { &*h }.0.values, buf, cap, len)
    })
}

/// Copies the squeeze parameters of the family.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_sieve_squeeze(h: *const PsSieve, buf: *mut f64, cap: usize, len: *mut usize) -> PsStatus {
    guard(|| {
        nonnull(h, "handle")?;
        copy_out(&unsafe { &*h }.0.squeeze, buf, cap, len)
    })
}

/// Index and squeeze of the minimum, and whether it was a tie.
///
/// # Safety
/// `h` must be a live handle; output pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn ps_sieve_argmin(
    h: *const PsSieve,
    index: *mut usize,
    squeeze: *mut f64,
    tie: *mut bool,
) -> PsStatus {
    guard(|| {
        nonnull(h, "handle")?;
        let r = &unsafe { &*h }.0;
        unsafe {
            if !index.is_null() {
                *index = r.argmin;
            }
            if !squeeze.is_null() {
                *squeeze = r.argmin_squeeze();
            }
            if !tie.is_null() {
                *tie = r.tie;
            }
        }
        Ok(())
    })
}

/// Whether the landscape is flat (max/min ≤ 1.05).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_sieve_is_flat(h: *const PsSieve) -> bool {
    unsafe { h.as_ref() }.is_some_and(|h| h.0.flat)
}

/// # Safety
/// `h` must be null or a handle from `ps_sieve_run` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ps_sieve_free(h: *mut PsSieve) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Complete-positivity check of a generator on `dim` Fock levels.
/// `model` may be null for the Hamiltonian generator.
///
/// # Safety
/// Non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ps_cp_check(
    osc: *const PsOscillator,
    generator: PsGenerator,
    model: *const PsModel,
    dim: usize,
    min_eigenvalue: *mut f64,
    is_gksl: *mut bool,
) -> PsStatus {
    guard(|| {
        nonnull(min_eigenvalue, "min_eigenvalue")?;
        nonnull(is_gksl, "is_gksl")?;
        if !(2..=64).contains(&dim) {
            return Err(fail(PsStatus::InvalidArgument, format!("dim must be in 2..=64, got {dim}")));
        }
        let osc = oscillator(osc)?;
        let m = match unsafe { model.as_ref() } {
            Some(m) => Some(self::model(m, osc)?),
            None => None,
        };
        let lh = hamiltonian_superoperator(dim, &osc);
        let l = match (generator, m) {
            (PsGenerator::Hamiltonian, _) => lh,
            (PsGenerator::ClFull, Some(EnvironmentModel::CaldeiraLeggett { params, .. })) => {
                lh.add(&cl_dissipator_superoperator(&params, false, dim))
            }
            (PsGenerator::ClAveraged, Some(EnvironmentModel::CaldeiraLeggett { params, .. })) => {
                let delta = cl_dissipator_superoperator(&params, false, dim);
                let h = oscillator_hamiltonian(dim, &osc);
                lh.add(&average_generator(&delta, &h, &osc, DEFAULT_AVERAGING_SAMPLES).map_err(from_core)?)
            }
            (PsGenerator::Qome, Some(EnvironmentModel::Qome(p))) => lh.add(&qome_superoperator(&p, dim)),
            _ => return Err(fail(PsStatus::InvalidArgument, "generator does not match the model")),
        };
        let report = cp_check(&l).map_err(from_core)?;
        unsafe {
            *min_eigenvalue = report.min_eigenvalue;
            *is_gksl = report.is_gksl;
        }
        Ok(())
    })
}

/// Propagates the Gaussian state `(x0, p0, s)` for `n_steps` of `dt`.
///
/// Grid models use `grid_n` points on `[-half_span, half_span]`. The QOME
/// projects onto `n_max + 1` Fock levels and ignores the grid after
/// projection.
///
/// # Safety
/// `model` and `out` must be valid pointers; `osc` may be null.
#[no_mangle]
pub unsafe extern "C" fn ps_propagate(
    osc: *const PsOscillator,
    model: *const PsModel,
    x0: f64,
    p0: f64,
    squeeze: f64,
    grid_n: usize,
    half_span: f64,
    n_max: usize,
    dt: f64,
    n_steps: usize,
    out: *mut *mut PsTrajectory,
) -> PsStatus {
    guard(|| {
        nonnull(model, "model")?;
        nonnull(out, "out")?;
        unsafe { *out = ptr::null_mut() };
        let osc = oscillator(osc)?;
        let m = self::model(unsafe { &*model }, osc)?;
        let state = GaussianPureState::new(x0, p0, squeeze).map_err(from_core)?;
        let grid = PositionGrid::symmetric(half_span, grid_n).map_err(from_core)?;
        let psi = make_gaussian_wavefunction(&state, &grid, &osc).map_err(from_core)?;
        let r = match m {
            EnvironmentModel::Qome(p) => {
                let rho0 = project_to_fock(&psi, &grid, &osc, n_max).map_err(from_core)?;
                propagate_fock(&rho0, &p, dt, n_steps)
            }
            _ => {
                let rho0 = GridDensityMatrix::from_wavefunction(grid, &psi).map_err(from_core)?;
                propagate_grid(&rho0, &m, harmonic_potential(&osc), &osc, dt, n_steps)
            }
        }
        .map_err(from_core)?;
        unsafe { *out = Box::into_raw(Box::new(PsTrajectory(r))) };
        Ok(())
    })
}

/// Number of recorded samples (`n_steps + 1`), or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_trajectory_len(h: *const PsTrajectory) -> usize {
    unsafe { h.as_ref() }.map_or(0, |h| h.0.len())
}

/// Copies one recorded series.
///
/// # Safety
/// `h` must be a live handle; `buf` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn ps_trajectory_series(
    h: *const PsTrajectory,
    series: PsSeries,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> PsStatus {
    guard(|| {
        nonnull(h, "handle")?;
        let r = &unsafe { &*h }.0;
        let src = match series {
            PsSeries::Time => &r.times,
            PsSeries::LinearEntropy => &r.linear_entropy,
            PsSeries::MeanX => &r.mean_x,
            PsSeries::MeanP => &r.mean_p,
            PsSeries::VarX => &r.var_x,
            PsSeries::VarP => &r.var_p,
            PsSeries::TraceDrift => &r.trace_drift,
            PsSeries::HermiticityDefect => &r.hermiticity_defect,
        };
        copy_out(src, buf, cap, len)
    })
}

/// Whether the run raised a degrading diagnostic (trace drift or loss of
/// positivity).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_trajectory_degraded(h: *const PsTrajectory) -> bool {
    unsafe { h.as_ref() }.is_some_and(|h| h.0.degraded)
}

/// # Safety
/// `h` must be null or a handle from `ps_propagate` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ps_trajectory_free(h: *mut PsTrajectory) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    fn natural() -> PsOscillator {
        PsOscillator {
            mass: 1.0,
            omega: 1.0,
            hbar: 1.0,
        }
    }

    #[test]
    fn thermal_occupation_and_errors() {
        let mut n = 0.0;
        assert_eq!(unsafe { ps_thermal_occupation(2f64.ln(), &mut n) }, PsStatus::Ok);
        assert!((n - 1.0).abs() < 1e-12);
        assert_eq!(unsafe { ps_thermal_occupation(-1.0, &mut n) }, PsStatus::InvalidArgument);
        let msg = unsafe { CStr::from_ptr(ps_last_error()) }.to_str().unwrap();
        assert!(!msg.is_empty());
        assert_eq!(unsafe { ps_thermal_occupation(1.0, ptr::null_mut()) }, PsStatus::NullPointer);
    }

    #[test]
    fn sieve_handle_round_trip() {
        let m = PsModel {
            kind: PsModelKind::Cl,
            a: 0.01,
            b: 5.0,
        };
        let mut h = ptr::null_mut();
        let st = unsafe { ps_sieve_run(&natural(), &m, 0.25, 4.0, 33, PsMeasure::PeriodAveraged, PsEvaluation::Analytic, &mut h) };
        assert_eq!(st, PsStatus::Ok);
        assert_eq!(unsafe { ps_sieve_len(h) }, 33);
        let mut small = [0.0; 4];
        let mut len = 0;
        assert_eq!(
            unsafe { ps_sieve_values(h, small.as_mut_ptr(), small.len(), &mut len) },
            PsStatus::BufferTooSmall
        );
        assert_eq!(len, 33);
        let mut s = 0.0;
        let mut idx = 0;
        let mut tie = true;
        assert_eq!(unsafe { ps_sieve_argmin(h, &mut idx, &mut s, &mut tie) }, PsStatus::Ok);
        assert_eq!(idx, 16);
        assert!((s - 1.0).abs() < 1e-12);
        assert!(!tie);
        unsafe { ps_sieve_free(h) };
    }

    #[test]
    fn cp_dichotomy() {
        let m = PsModel {
            kind: PsModelKind::ClFull,
            a: 0.5,
            b: 1.0,
        };
        let (mut ev, mut ok) = (0.0, true);
        assert_eq!(unsafe { ps_cp_check(ptr::null(), PsGenerator::ClFull, &m, 6, &mut ev, &mut ok) }, PsStatus::Ok);
        assert!(!ok && ev < 0.0);
        assert_eq!(unsafe { ps_cp_check(ptr::null(), PsGenerator::ClAveraged, &m, 6, &mut ev, &mut ok) }, PsStatus::Ok);
        assert!(ok);
        assert_eq!(
            unsafe { ps_cp_check(ptr::null(), PsGenerator::Qome, &m, 6, &mut ev, &mut ok) },
            PsStatus::InvalidArgument
        );
    }
}
