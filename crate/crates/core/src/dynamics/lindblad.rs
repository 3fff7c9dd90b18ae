//! Master-equation integration on the single-excitation-plus-ground space.
//!
//! Basis order: `|e_a⟩, |e_c⟩, |e_b⟩, |e_d⟩, |g⟩` (indices 0..5).

use nalgebra::{Matrix5, SMatrix, SVector, Vector5};

use super::amplitude::C64;
use super::{basis_index, InitialSign, GROUND};
use crate::error::{Error, Result};
use crate::layout::{AtomId, CoefficientSet};

pub type Matrix5c = Matrix5<C64>;
type Superoperator = SMatrix<C64, 25, 25>;
type Vectorized = SVector<C64, 25>;

/// Drift below zero of any eigenvalue that aborts an integration.
pub const EIGENVALUE_DRIFT_LIMIT: f64 = 1e-6;

/// Steps per unit of the fastest rate used by [`default_dt`].
pub const DEFAULT_DT_SCALE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix5 {
    pub rho: Matrix5c,
    pub t: f64,
}

impl DensityMatrix5 {
    /// `|ψ(0)⟩⟨ψ(0)|` for `|ψ(0)⟩ = (|e_a⟩ ± |e_c⟩)/√2`.
    pub fn initial(sign: InitialSign) -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = Vector5::new(
            C64::new(r, 0.0),
            C64::new(sign.value() * r, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        );
        DensityMatrix5 {
            rho: psi * psi.adjoint(),
            t: 0.0,
        }
    }

    pub fn ground() -> Self {
        let mut rho = Matrix5c::zeros();
        rho[(GROUND, GROUND)] = C64::new(1.0, 0.0);
        DensityMatrix5 { rho, t: 0.0 }
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    /// Largest entry of `|ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        (self.rho - self.rho.adjoint()).camax()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 5] {
        let herm = (self.rho + self.rho.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2], ev[3], ev[4]]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Total excited population `Σ_{j≤4} ρ_jj`.
    pub fn excitation(&self) -> f64 {
        (0..4).map(|i| self.rho[(i, i)].re).sum()
    }

    pub fn population(&self, atom: AtomId) -> f64 {
        let i = basis_index(atom);
        self.rho[(i, i)].re
    }
}

/// `σ_−^j = |g⟩⟨e_j|`.
pub fn lowering(atom: AtomId) -> Matrix5c {
    let mut m = Matrix5c::zeros();
    m[(GROUND, basis_index(atom))] = C64::new(1.0, 0.0);
    m
}

/// Coherent part `H_ab ⊕ H_cd` embedded in the five-level space.
pub fn hamiltonian(k: &CoefficientSet) -> Matrix5c {
    let mut h = Matrix5c::zeros();
    for atom in AtomId::ALL {
        let i = basis_index(atom);
        h[(i, i)] = C64::new(k.lamb_shift[atom], 0.0);
    }
    for (p, q, g) in [(AtomId::A, AtomId::B, k.g_ab), (AtomId::C, AtomId::D, k.g_cd)] {
        let (i, j) = (basis_index(p), basis_index(q));
        h[(i, j)] = C64::new(g, 0.0);
        h[(j, i)] = C64::new(g, 0.0);
    }
    h
}

fn dissipator(op: &Matrix5c, rho: &Matrix5c) -> Matrix5c {
    let op_dag = op.adjoint();
    let n = op_dag * op;
    op * rho * op_dag - (n * rho + rho * n) * C64::new(0.5, 0.0)
}

/// `σ_−^p ρ σ_+^q − ½{σ_+^q σ_−^p, ρ}` plus its Hermitian-conjugate partner
/// (the same expression with `p` and `q` exchanged), which keeps the map
/// linear in `ρ`.
fn collective(p: &Matrix5c, q: &Matrix5c, rho: &Matrix5c) -> Matrix5c {
    let half = C64::new(0.5, 0.0);
    let term = |x: &Matrix5c, y: &Matrix5c| {
        let yd = y.adjoint();
        let n = yd * x;
        x * rho * yd - (n * rho + rho * n) * half
    };
    term(p, q) + term(q, p)
}

/// Right-hand side `dρ/dt` of the master equation, written out term by term.
pub fn lindblad_rhs(k: &CoefficientSet, rho: &Matrix5c) -> Matrix5c {
    let i = C64::i();
    let h = hamiltonian(k);
    let mut out = (h * rho - rho * h) * (-i);
    for atom in AtomId::ALL {
        out += dissipator(&lowering(atom), rho) * C64::new(k.gamma_individual[atom], 0.0);
    }
    let (a, b, c, d) = (
        lowering(AtomId::A),
        lowering(AtomId::B),
        lowering(AtomId::C),
        lowering(AtomId::D),
    );
    out += collective(&a, &b, rho) * C64::new(k.gamma_ab, 0.0);
    out += collective(&c, &d, rho) * C64::new(k.gamma_cd, 0.0);
    out
}

/// `1e-3 / max(Γ_j, |Γ_pair|, |g|, |δω|, γ)`.
pub fn default_dt(k: &CoefficientSet) -> f64 {
    DEFAULT_DT_SCALE / k.max_rate()
}

fn vectorize(m: &Matrix5c) -> Vectorized {
    Vectorized::from_column_slice(m.as_slice())
}

fn unvectorize(v: &Vectorized) -> Matrix5c {
    Matrix5c::from_column_slice(v.as_slice())
}

/// Fixed-step classical RK4 for the (time-independent, linear) generator.
///
/// For `dρ/dt = L ρ` one RK4 step equals multiplication by
/// `I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24`; that matrix is built once and
/// applied to the vectorized state.
#[derive(Debug, Clone)]
pub struct Rk4Integrator {
    step: Box<Superoperator>,
    dt: f64,
}

impl Rk4Integrator {
    pub fn new(k: &CoefficientSet, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Integration(format!("dt must be positive, got {dt}")));
        }
        let mut generator = Box::new(Superoperator::zeros());
        for col in 0..25 {
            let mut basis = Matrix5c::zeros();
            basis.as_mut_slice()[col] = C64::new(1.0, 0.0);
            generator.set_column(col, &vectorize(&lindblad_rhs(k, &basis)));
        }
        let hl = *generator * C64::new(dt, 0.0);
        let mut term = Superoperator::identity();
        let mut step = Box::new(Superoperator::identity());
        for n in 1..=4 {
            term = term * hl / C64::new(n as f64, 0.0);
            *step += term;
        }
        Ok(Rk4Integrator { step, dt })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// One step followed by re-Hermitization and trace renormalization.
    pub fn advance(&self, state: &DensityMatrix5) -> Result<DensityMatrix5> {
        let next = unvectorize(&(*self.step * vectorize(&state.rho)));
        let mut rho = (next + next.adjoint()) * C64::new(0.5, 0.0);
        let trace = rho.trace().re;
        if (trace - 1.0).abs() > 1e-12 {
            rho /= C64::new(trace, 0.0);
        }
        let out = DensityMatrix5 {
            rho,
            t: state.t + self.dt,
        };
        check_drift(&out)?;
        Ok(out)
    }
}

/// Cholesky test for a Hermitian matrix: true iff every pivot stays positive.
fn is_positive_definite(m: &Matrix5c) -> bool {
    let mut l = Matrix5c::zeros();
    for j in 0..5 {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let pivot = d.sqrt();
        l[(j, j)] = C64::new(pivot, 0.0);
        for i in j + 1..5 {
            let mut v = m[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / pivot;
        }
    }
    true
}

fn check_drift(state: &DensityMatrix5) -> Result<()> {
    let shifted = state.rho + Matrix5c::from_diagonal_element(C64::new(EIGENVALUE_DRIFT_LIMIT, 0.0));
    if !is_positive_definite(&shifted) {
        return Err(Error::StepTooLarge {
            t: state.t,
            min_eigenvalue: state.min_eigenvalue(),
        });
    }
    Ok(())
}

fn step_count(t_max: f64, dt: f64) -> Result<usize> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::Integration(format!("t_max must be positive, got {t_max}")));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Integration(format!("dt must be positive, got {dt}")));
    }
    Ok(((t_max / dt) - 1e-9).ceil().max(1.0) as usize)
}

/// Integrates from `ρ(0)` to `t_max` and returns `ρ` at `t = 0` and after
/// every step.
///
/// The step is shrunk to `t_max / ceil(t_max / dt)` so the last sample lands
/// exactly on `t_max`.
pub fn integrate_lindblad(
    k: &CoefficientSet,
    t_max: f64,
    dt: f64,
    sign: InitialSign,
) -> Result<Vec<DensityMatrix5>> {
    let steps = step_count(t_max, dt)?;
    let integrator = Rk4Integrator::new(k, t_max / steps as f64)?;
    let mut out = Vec::with_capacity(steps + 1);
    let mut state = DensityMatrix5::initial(sign);
    out.push(state);
    for n in 1..=steps {
        state = integrator.advance(&state)?;
        state.t = n as f64 * integrator.dt();
        out.push(state);
    }
    Ok(out)
}

/// Integrates with the default step and returns `samples + 1` states on the
/// uniform grid `t_n = n·t_max/samples`.
pub fn integrate_lindblad_on_grid(
    k: &CoefficientSet,
    t_max: f64,
    samples: usize,
    sign: InitialSign,
) -> Result<Vec<DensityMatrix5>> {
    if samples == 0 {
        return Err(Error::Integration("need at least one sample interval".into()));
    }
    let interval = t_max / samples as f64;
    let substeps = step_count(interval, default_dt(k))?;
    let integrator = Rk4Integrator::new(k, interval / substeps as f64)?;
    let mut out = Vec::with_capacity(samples + 1);
    let mut state = DensityMatrix5::initial(sign);
    out.push(state);
    for n in 1..=samples {
        for _ in 0..substeps {
            state = integrator.advance(&state)?;
        }
        // Same arithmetic as `sweep::linspace`, so time columns match exactly.
        state.t = if n == samples { t_max } else { t_max * n as f64 / samples as f64 };
        out.push(state);
    }
    Ok(out)
}
