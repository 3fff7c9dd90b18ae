//! Time evolution from `(|e_a g_c⟩ ± |g_a e_c⟩)/√2 ⊗ |g_b g_d⟩`.
//!
//! Two independent engines: [`amplitude`] propagates the single-excitation
//! amplitudes exactly under the effective Hamiltonian, [`lindblad`] integrates
//! the full master equation.

pub mod amplitude;
pub mod lindblad;

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::layout::AtomId;

pub use amplitude::{
    block_propagator, effective_hamiltonian, evolve_amplitudes, AmplitudeState, BlockHamiltonian,
    C64,
};
pub use lindblad::{
    default_dt, integrate_lindblad, integrate_lindblad_on_grid, lindblad_rhs, DensityMatrix5,
    Rk4Integrator,
};

/// Index of the global ground state in the five-level basis.
pub const GROUND: usize = 4;

/// Position of an atom's excitation in `(x1, x2, x3, x4) = (a, c, b, d)`.
pub fn basis_index(atom: AtomId) -> usize {
    match atom {
        AtomId::A => 0,
        AtomId::C => 1,
        AtomId::B => 2,
        AtomId::D => 3,
    }
}

/// Relative sign between `|e_a g_c⟩` and `|g_a e_c⟩` in the initial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialSign {
    #[default]
    Plus,
    Minus,
}

impl InitialSign {
    pub fn value(self) -> f64 {
        match self {
            InitialSign::Plus => 1.0,
            InitialSign::Minus => -1.0,
        }
    }
}

impl fmt::Display for InitialSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InitialSign::Plus => "+",
            InitialSign::Minus => "-",
        })
    }
}

impl FromStr for InitialSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "+" | "+1" | "1" | "plus" => Ok(InitialSign::Plus),
            "-" | "-1" | "minus" => Ok(InitialSign::Minus),
            _ => Err(Error::Parse {
                what: "initial sign",
                input: s.to_string(),
            }),
        }
    }
}

/// Which engine produces the time series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Amplitude,
    Lindblad,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "amplitude" => Ok(Method::Amplitude),
            "lindblad" => Ok(Method::Lindblad),
            _ => Err(Error::Parse {
                what: "method",
                input: s.to_string(),
            }),
        }
    }
}
