// Copyright 2026 The predsieve Authors
// SPDX-License-Identifier: Apache-2.0

//! Generators in the truncated number basis.

use super::Superoperator;
use crate::environments::{CaldeiraLeggettParams, QomeParams};
use crate::linalg::{anticommutator, commutator, re, CMatrix, I};
use crate::states::{
    annihilation, momentum_operator, oscillator_hamiltonian, position_operator, FockDensityMatrix,
    OscillatorParams,
};

/// The right-hand side `L(ρ)` of a master equation in a given
/// representation.
pub trait Generator<R> {
    fn apply(&self, rho: &R) -> CMatrix;
}

impl Generator<FockDensityMatrix> for Superoperator {
    fn apply(&self, rho: &FockDensityMatrix) -> CMatrix {
        Superoperator::apply(self, crate::states::DensityOperator::elements(rho))
    }
}

/// Truncated ladder-built operators shared by the Fock-basis generators.
#[derive(Debug, Clone)]
pub struct FockOperators {
    pub dim: usize,
    pub osc: OscillatorParams,
    pub a: CMatrix,
    pub x: CMatrix,
    pub p: CMatrix,
    /// `H = ħω(n + ½)`.
    pub h: CMatrix,
    /// `{p, x}`.
    pub px: CMatrix,
}

impl FockOperators {
    pub fn new(dim: usize, osc: &OscillatorParams) -> Self {
        let x = position_operator(dim, osc);
        let p = momentum_operator(dim, osc);
        let px = anticommutator(&p, &x);
        Self {
            dim,
            osc: *osc,
            a: annihilation(dim),
            h: oscillator_hamiltonian(dim, osc),
            x,
            p,
            px,
        }
    }

    /// `−(i/ħ)[H, ρ]`.
    pub fn hamiltonian_rhs(&self, rho: &CMatrix) -> CMatrix {
        commutator(&self.h, rho) * (-I / self.osc.hbar)
    }

    /// `[x,[x,ρ]] + [p,[p,ρ]]/(m²ω²)`.
    fn symmetric_diffusion(&self, rho: &CMatrix) -> CMatrix {
        let mw = self.osc.mass * self.osc.omega;
        commutator(&self.x, &commutator(&self.x, rho))
            + commutator(&self.p, &commutator(&self.p, rho)) * re(1.0 / (mw * mw))
    }

    /// `2iω[x,{p,ρ}] − iω[{p,x},ρ]`.
    fn rotating_friction(&self, rho: &CMatrix) -> CMatrix {
        let w = self.osc.omega;
        commutator(&self.x, &anticommutator(&self.p, rho)) * (I * 2.0 * w)
            - commutator(&self.px, rho) * (I * w)
    }
}

/// Non-Hamiltonian part of the high-temperature Caldeira-Leggett equation,
///
/// `−(iγ/2ħ)[{p,x},ρ] − D[x,[x,ρ]] − (iγ/ħ)([x,ρp] − [p,ρx])`.
///
/// With `weak_dissipation` only the diffusion term is kept. In the truncated
/// basis the last commutator pair is evaluated as `[x,{p,ρ}] − ½[{p,x},ρ]`,
/// which equals it whenever `[x,p] = iħ` and keeps the map exactly
/// Hermiticity-preserving at the truncation edge.
pub fn cl_dissipator(
    ops: &FockOperators,
    params: &CaldeiraLeggettParams,
    weak_dissipation: bool,
    rho: &CMatrix,
) -> CMatrix {
    let diffusion = commutator(&ops.x, &commutator(&ops.x, rho)) * re(-params.diffusion());
    if weak_dissipation {
        return diffusion;
    }
    let g_over_hbar = params.gamma() / ops.osc.hbar;
    let renorm = commutator(&ops.px, rho);
    let second = &renorm * (-I * 0.5 * g_over_hbar);
    let fourth = (commutator(&ops.x, &anticommutator(&ops.p, rho)) - &renorm * re(0.5)) * (-I * g_over_hbar);
    diffusion + second + fourth
}

/// Quantum-optical master equation dissipator in Lindblad form,
/// `Γ(N+1) D[a]ρ + ΓN D[a†]ρ` with `D[c]ρ = cρc† − ½{c†c, ρ}`, evaluated
/// with banded index arithmetic in O(d²).
pub fn qome_rhs(rho: &FockDensityMatrix, p: &QomeParams) -> CMatrix {
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    qome_dissipator_into(
        crate::states::DensityOperator::elements(rho),
        p.gamma(),
        p.n_thermal(),
        &mut out,
    );
    out
}

pub(crate) fn qome_dissipator_into(rho: &CMatrix, gamma: f64, n: f64, out: &mut CMatrix) {
    let d = rho.nrows();
    let down = gamma * (n + 1.0);
    let up = gamma * n;
    // Diagonal of the truncated a a†: k + 1 below the top level, 0 at it.
    let aad = |k: usize| if k + 1 < d { (k + 1) as f64 } else { 0.0 };
    for j in 0..d {
        for i in 0..d {
            let mut v = rho[(i, j)] * (-0.5 * (down * (i + j) as f64 + up * (aad(i) + aad(j))));
            if i + 1 < d && j + 1 < d {
                v += rho[(i + 1, j + 1)] * (down * (((i + 1) * (j + 1)) as f64).sqrt());
            }
            if i > 0 && j > 0 {
                v += rho[(i - 1, j - 1)] * (up * ((i * j) as f64).sqrt());
            }
            out[(i, j)] = v;
        }
    }
}

/// `−(i/ħ)[H, ρ]` for `H = ħω(n+½)`, banded.
pub(crate) fn oscillator_commutator_into(rho: &CMatrix, omega: f64, out: &mut CMatrix) {
    let d = rho.nrows();
    for j in 0..d {
        for i in 0..d {
            out[(i, j)] = rho[(i, j)] * (-I * omega * (i as f64 - j as f64));
        }
    }
}

/// The same dissipator written with position and momentum:
///
/// `−(Γ/4ħω){(2N+1)mω²([x,[x,ρ]] + [p,[p,ρ]]/m²ω²) + 2iω[x,{p,ρ}] − iω[{p,x},ρ]}`.
pub fn qome_rhs_commutator(ops: &FockOperators, p: &QomeParams, rho: &CMatrix) -> CMatrix {
    let osc = &ops.osc;
    let pre = -p.gamma() / (4.0 * osc.hbar * osc.omega);
    let diff = ops.symmetric_diffusion(rho) * re((2.0 * p.n_thermal() + 1.0) * osc.mass * osc.omega * osc.omega);
    (diff + ops.rotating_friction(rho)) * re(pre)
}

/// `L_o = −(i/ħ)[H, ·]`.
pub fn hamiltonian_superoperator(dim: usize, osc: &OscillatorParams) -> Superoperator {
    let ops = FockOperators::new(dim, osc);
    super::build_superoperator(|r| ops.hamiltonian_rhs(r), dim).expect("commutator is linear")
}

pub fn cl_dissipator_superoperator(
    params: &CaldeiraLeggettParams,
    weak_dissipation: bool,
    dim: usize,
) -> Superoperator {
    let ops = FockOperators::new(dim, params.osc());
    super::build_superoperator(|r| cl_dissipator(&ops, params, weak_dissipation, r), dim)
        .expect("dissipator is linear")
}

pub fn qome_superoperator(params: &QomeParams, dim: usize) -> Superoperator {
    super::build_superoperator(
        |r| {
            let mut out = CMatrix::zeros(dim, dim);
            qome_dissipator_into(r, params.gamma(), params.n_thermal(), &mut out);
            out
        },
        dim,
    )
    .expect("dissipator is linear")
}

/// Full QOME right-hand side `−(i/ħ)[H,ρ] + ΔL(ρ)` (or the dissipator alone).
#[derive(Debug, Clone, Copy)]
pub struct QomeLiouvillian {
    pub params: QomeParams,
    pub include_hamiltonian: bool,
}

impl QomeLiouvillian {
    pub fn new(params: QomeParams) -> Self {
        Self {
            params,
            include_hamiltonian: true,
        }
    }

    pub(crate) fn apply_into(&self, rho: &CMatrix, out: &mut CMatrix, scratch: &mut CMatrix) {
        qome_dissipator_into(rho, self.params.gamma(), self.params.n_thermal(), out);
        if self.include_hamiltonian {
            oscillator_commutator_into(rho, self.params.osc().omega, scratch);
            *out += &*scratch;
        }
    }
}

impl Generator<FockDensityMatrix> for QomeLiouvillian {
    fn apply(&self, rho: &FockDensityMatrix) -> CMatrix {
        let r = crate::states::DensityOperator::elements(rho);
        let mut out = CMatrix::zeros(r.nrows(), r.ncols());
        let mut scratch = out.clone();
        self.apply_into(r, &mut out, &mut scratch);
        out
    }
}
