//! Entanglement transfer between two pairs of small or giant atoms, each pair
//! coupled to its own one-dimensional waveguide.
//!
//! Atoms `a`, `b` share waveguide 1 and `c`, `d` share waveguide 2. The pair
//! `ac` starts in `(|e_a g_c⟩ ± |g_a e_c⟩)/√2` and `bd` in the ground state.
//!
//! * [`layout`]: connection-point topologies and the coefficients they induce.
//! * [`dynamics`]: exact amplitude evolution and master-equation integration.
//! * [`entanglement`]: pair reductions and concurrence.
//! * [`oracles`]: closed-form concurrences at special phases.
//! * [`sweep`]: time series, φ×t grids, peak search and CSV output.
//! * [`verify`]: the end-to-end verification suite.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod layout;
pub mod oracles;
pub mod sweep;
pub mod verify;

pub use dynamics::{InitialSign, Method};
pub use entanglement::{PairId, TwoQubitX};
pub use error::{Error, Result};
pub use layout::{AtomId, CoefficientSet, Configuration, ConnectionLayout};
