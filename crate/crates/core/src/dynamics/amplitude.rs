//! Exact evolution of the single-excitation amplitudes under the
//! non-Hermitian effective Hamiltonian.
//!
//! The effective Hamiltonian never couples the two waveguides, so it splits
//! into one 2×2 block per waveguide and each block is exponentiated in
//! closed form.

use nalgebra::{Complex, Matrix2, Vector2};

use super::InitialSign;
use crate::error::{Error, Result};
use crate::layout::{AtomId, CoefficientSet};

pub type C64 = Complex<f64>;

/// Relative discriminant below which a block is treated as defective.
pub const EXCEPTIONAL_POINT_THRESHOLD: f64 = 1e-12;

/// Below this `|s·t|` the propagator uses Taylor series for `cos` and `sinc`.
const SERIES_CUTOFF: f64 = 1e-2;

/// Direct sum of the two 2×2 blocks of the effective Hamiltonian.
///
/// `block_ab` acts on `(x1, x3)` = amplitudes of `(a, b)`;
/// `block_cd` acts on `(x2, x4)` = amplitudes of `(c, d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockHamiltonian {
    pub block_ab: Matrix2<C64>,
    pub block_cd: Matrix2<C64>,
}

impl BlockHamiltonian {
    pub fn is_complex_symmetric(&self) -> bool {
        self.block_ab[(0, 1)] == self.block_ab[(1, 0)]
            && self.block_cd[(0, 1)] == self.block_cd[(1, 0)]
    }
}

/// Amplitudes `x1..x4` of `|e_a⟩, |e_c⟩, |e_b⟩, |e_d⟩` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeState {
    pub x: [C64; 4],
    pub t: f64,
}

impl AmplitudeState {
    pub fn initial(sign: InitialSign) -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        AmplitudeState {
            x: [
                C64::new(r, 0.0),
                C64::new(sign.value() * r, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
            t: 0.0,
        }
    }

    /// Excitation norm `Σ|x_i|²`.
    pub fn norm(&self) -> f64 {
        self.x.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn amplitude(&self, atom: AtomId) -> C64 {
        self.x[super::basis_index(atom)]
    }
}

fn block(dw_p: f64, dw_q: f64, gam_p: f64, gam_q: f64, g: f64, gam_pair: f64) -> Matrix2<C64> {
    let off = C64::new(g, -0.5 * gam_pair);
    Matrix2::new(
        C64::new(dw_p, -0.5 * gam_p),
        off,
        off,
        C64::new(dw_q, -0.5 * gam_q),
    )
}

pub fn effective_hamiltonian(k: &CoefficientSet) -> BlockHamiltonian {
    let dw = &k.lamb_shift;
    let gm = &k.gamma_individual;
    BlockHamiltonian {
        block_ab: block(dw.a, dw.b, gm.a, gm.b, k.g_ab, k.gamma_ab),
        block_cd: block(dw.c, dw.d, gm.c, gm.d, k.g_cd, k.gamma_cd),
    }
}

/// `exp(-i·H·t)` for a complex-symmetric 2×2 block.
///
/// With `h̄` the mean diagonal and `K = H − h̄·I`, `K² = s²·I`, so
/// `exp(-iHt) = e^{-ih̄t}·(cos(st)·I − i·t·sinc(st)·K)`. Both factors are even
/// in `s`, so the branch of the square root is irrelevant.
pub fn block_propagator(h: &Matrix2<C64>, t: f64) -> Matrix2<C64> {
    let i = C64::i();
    let mean = 0.5 * (h[(0, 0)] + h[(1, 1)]);
    let k = h - Matrix2::from_diagonal_element(mean);
    let half_diff = k[(0, 0)];
    let coupling = 0.5 * (h[(0, 1)] + h[(1, 0)]);
    let discriminant = 4.0 * (half_diff * half_diff + coupling * coupling);
    let scale = h.norm_squared();
    let phase = (-i * mean * t).exp();

    if discriminant.norm() < EXCEPTIONAL_POINT_THRESHOLD * scale {
        // Jordan limit at an exceptional point.
        return (Matrix2::identity() - k * (i * t)) * phase;
    }

    let s = (0.25 * discriminant).sqrt();
    let z = s * t;
    if z.norm() < SERIES_CUTOFF {
        let z2 = z * z;
        let cos = 1.0 - z2 / 2.0 + z2 * z2 / 24.0 - z2 * z2 * z2 / 720.0
            + z2 * z2 * z2 * z2 / 40320.0;
        let sinc = 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0
            + z2 * z2 * z2 * z2 / 362880.0;
        return (Matrix2::from_diagonal_element(cos) - k * (i * t * sinc)) * phase;
    }

    // Spectral form keeps each exponential bounded when the block decays.
    let plus = (-i * (mean + s) * t).exp();
    let minus = (-i * (mean - s) * t).exp();
    Matrix2::from_diagonal_element(0.5 * (plus + minus)) + k * ((plus - minus) / (2.0 * s))
}

/// Evolves the initial state `(1, ±1, 0, 0)/√2` to time `t`.
pub fn evolve_amplitudes(k: &CoefficientSet, t: f64, sign: InitialSign) -> Result<AmplitudeState> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(evolve_with(&effective_hamiltonian(k), t, sign))
}

/// Same as [`evolve_amplitudes`] with a prebuilt Hamiltonian; `t` must be ≥ 0.
pub fn evolve_with(h: &BlockHamiltonian, t: f64, sign: InitialSign) -> AmplitudeState {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let ab = block_propagator(&h.block_ab, t) * Vector2::new(C64::new(r, 0.0), C64::new(0.0, 0.0));
    let cd = block_propagator(&h.block_cd, t)
        * Vector2::new(C64::new(sign.value() * r, 0.0), C64::new(0.0, 0.0));
    AmplitudeState {
        x: [ab[0], cd[0], ab[1], cd[1]],
        t,
    }
}
