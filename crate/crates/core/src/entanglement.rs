//! Two-atom reduced states and their concurrence.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, SVD};

use crate::dynamics::{basis_index, AmplitudeState, DensityMatrix5, C64};
use crate::error::{Error, Result};
use crate::layout::AtomId;

/// Tolerances applied when a five-level state is reduced.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairId {
    Ac,
    Bd,
    Ab,
    Cd,
    Ad,
    Bc,
}

impl PairId {
    pub const ALL: [PairId; 6] = [
        PairId::Ac,
        PairId::Bd,
        PairId::Ab,
        PairId::Cd,
        PairId::Ad,
        PairId::Bc,
    ];

    pub fn atoms(self) -> (AtomId, AtomId) {
        use AtomId::*;
        match self {
            PairId::Ac => (A, C),
            PairId::Bd => (B, D),
            PairId::Ab => (A, B),
            PairId::Cd => (C, D),
            PairId::Ad => (A, D),
            PairId::Bc => (B, C),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PairId::Ac => "ac",
            PairId::Bd => "bd",
            PairId::Ab => "ab",
            PairId::Cd => "cd",
            PairId::Ad => "ad",
            PairId::Bc => "bc",
        }
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PairId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        PairId::ALL
            .into_iter()
            .find(|p| {
                let (x, y) = p.atoms();
                key == p.name() || key == format!("{}{}", y.label(), x.label())
            })
            .ok_or_else(|| Error::Parse {
                what: "atom pair",
                input: s.to_string(),
            })
    }
}

/// X-shaped two-qubit state on `{|ee⟩, |eg⟩, |ge⟩, |gg⟩}`:
///
/// ```text
/// ⎛ H  0  0  W ⎞
/// ⎜ 0  I  Z  0 ⎟
/// ⎜ 0  Z* Q  0 ⎟
/// ⎝ W* 0  0  P ⎠
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitX {
    pub h: f64,
    pub i: f64,
    pub q: f64,
    pub p: f64,
    pub w: C64,
    pub z: C64,
}

impl TwoQubitX {
    /// Single-excitation pair state; the ground element absorbs the rest of the trace.
    fn single_excitation(i: f64, q: f64, z: C64) -> Self {
        TwoQubitX {
            h: 0.0,
            i,
            q,
            p: 1.0 - i - q,
            w: C64::new(0.0, 0.0),
            z,
        }
    }

    pub fn to_matrix(&self) -> Matrix4<C64> {
        let r = |x: f64| C64::new(x, 0.0);
        let zero = C64::new(0.0, 0.0);
        Matrix4::new(
            r(self.h), zero, zero, self.w,
            zero, r(self.i), self.z, zero,
            zero, self.z.conj(), r(self.q), zero,
            self.w.conj(), zero, zero, r(self.p),
        )
    }

    pub fn trace(&self) -> f64 {
        self.h + self.i + self.q + self.p
    }
}

pub fn reduce_from_amplitudes(state: &AmplitudeState, pair: PairId) -> TwoQubitX {
    let (p, q) = pair.atoms();
    let (xp, xq) = (state.amplitude(p), state.amplitude(q));
    TwoQubitX::single_excitation(xp.norm_sqr(), xq.norm_sqr(), xp * xq.conj())
}

pub fn validate_density(state: &DensityMatrix5) -> Result<()> {
    let herm = state.hermiticity_error();
    if !(herm <= HERMITICITY_TOLERANCE) {
        return Err(Error::InvalidDensityMatrix(format!(
            "hermiticity error {herm:e} at t = {}",
            state.t
        )));
    }
    let tr = state.trace();
    if !((tr.re - 1.0).abs() <= TRACE_TOLERANCE && tr.im.abs() <= TRACE_TOLERANCE) {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace {tr} at t = {}",
            state.t
        )));
    }
    Ok(())
}

pub fn reduce_from_density(state: &DensityMatrix5, pair: PairId) -> Result<TwoQubitX> {
    validate_density(state)?;
    let (p, q) = pair.atoms();
    let (ip, iq) = (basis_index(p), basis_index(q));
    let rho = &state.rho;
    Ok(TwoQubitX::single_excitation(
        rho[(ip, ip)].re,
        rho[(iq, iq)].re,
        rho[(ip, iq)],
    ))
}

/// Closed-form concurrence of an X state.
pub fn concurrence_x(x: &TwoQubitX) -> f64 {
    let a = x.z.norm() - (x.h * x.p).max(0.0).sqrt();
    let b = x.w.norm() - (x.i * x.q).max(0.0).sqrt();
    2.0 * a.max(b).max(0.0)
}

/// `σ_y ⊗ σ_y` in the `{ee, eg, ge, gg}` ordering.
fn spin_flip() -> Matrix4<C64> {
    let o = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    Matrix4::new(
        z, z, z, -o,
        z, z, o, z,
        z, o, z, z,
        -o, z, z, z,
    )
}

/// General Wootters concurrence of a two-qubit density matrix.
///
/// The square roots of the eigenvalues of `ρ·ρ̃`, `ρ̃ = (σ_y⊗σ_y)ρ*(σ_y⊗σ_y)`,
/// are the singular values of `√ρ·√ρ̃`, which is what is computed here.
pub fn concurrence_wootters(rho: &Matrix4<C64>) -> Result<f64> {
    let herm = (rho - rho.adjoint()).camax();
    if !(herm <= 1e-9) {
        return Err(Error::InvalidDensityMatrix(format!("hermiticity error {herm:e}")));
    }
    let tr = rho.trace();
    if !((tr.re - 1.0).abs() <= 1e-9 && tr.im.abs() <= 1e-9) {
        return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
    }
    let herm_part = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let eig = herm_part.symmetric_eigen();
    let mut sqrt_diag = eig.eigenvalues;
    for v in sqrt_diag.iter_mut() {
        if *v < -1e-8 {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {v:e}")));
        }
        *v = v.max(0.0).sqrt();
    }
    let vecs = &eig.eigenvectors;
    let sqrt_rho = vecs * Matrix4::from_diagonal(&sqrt_diag.map(|v| C64::new(v, 0.0))) * vecs.adjoint();
    let flip = spin_flip();
    let sqrt_tilde = flip * sqrt_rho.conjugate() * flip;
    let mut sv: Vec<f64> = SVD::new(sqrt_rho * sqrt_tilde, false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).max(0.0))
}

/// Concurrences of all six pairs, in [`PairId::ALL`] order.
pub fn all_pairs_from_amplitudes(state: &AmplitudeState) -> [f64; 6] {
    PairId::ALL.map(|p| concurrence_x(&reduce_from_amplitudes(state, p)))
}

pub fn all_pairs_from_density(state: &DensityMatrix5) -> Result<[f64; 6]> {
    let mut out = [0.0; 6];
    for (slot, pair) in out.iter_mut().zip(PairId::ALL) {
        *slot = concurrence_x(&reduce_from_density(state, pair)?);
    }
    Ok(out)
}
