//! Time series, φ×t grids and peak search, plus their CSV encodings.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{
    effective_hamiltonian, evolve_amplitudes, integrate_lindblad_on_grid, InitialSign, Method,
};
use crate::entanglement::{
    all_pairs_from_amplitudes, all_pairs_from_density, concurrence_x, reduce_from_amplitudes,
    reduce_from_density, PairId,
};
use crate::error::{Error, Result};
use crate::layout::Configuration;

/// Uniform samples of the coarse peak scan.
pub const PEAK_COARSE_SAMPLES: usize = 10_000;
/// Golden-section refinement stops once the bracket is narrower than this (in units of 1/γ).
pub const PEAK_TIME_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_PEAK_HORIZON: f64 = 50.0;

pub const DEFAULT_PHI_POINTS: usize = 401;
pub const DEFAULT_T_POINTS: usize = 501;
pub const DEFAULT_T_MAX: f64 = 10.0;

/// Parses a phase: a plain real in radians or `<real>pi` (e.g. `0.5pi`, `-pi`).
pub fn parse_phi(text: &str) -> Result<f64> {
    let err = || Error::Parse {
        what: "phase",
        input: text.to_string(),
    };
    let s = text.trim();
    let lower = s.to_ascii_lowercase();
    let value = if let Some(coef) = lower.strip_suffix("pi").or_else(|| lower.strip_suffix('π')) {
        let coef = coef.trim_end_matches('*').trim();
        let factor = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| err())?,
        };
        factor * std::f64::consts::PI
    } else {
        lower.parse::<f64>().map_err(|_| err())?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(err())
    }
}

/// Formats with nine significant digits, `%g` style, trailing zeros trimmed.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Inclusive uniform grid of `points` values on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Model parameters shared by every front-end operation.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub config: Configuration,
    pub gamma: f64,
    pub sign: InitialSign,
    pub method: Method,
}

impl Model {
    pub fn new(config: Configuration) -> Self {
        Model {
            config,
            gamma: 1.0,
            sign: InitialSign::Plus,
            method: Method::Amplitude,
        }
    }

    /// Concurrence of one pair at one `(φ, t)` via the amplitude engine.
    pub fn concurrence(&self, pair: PairId, phi: f64, t: f64) -> Result<f64> {
        let k = self.config.coefficients(phi, self.gamma)?;
        let state = evolve_amplitudes(&k, t, self.sign)?;
        Ok(concurrence_x(&reduce_from_amplitudes(&state, pair)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesRow {
    pub t: f64,
    /// Concurrences in [`PairId::ALL`] order.
    pub concurrence: [f64; 6],
    /// Total excited population.
    pub excitation: f64,
}

pub const SERIES_HEADER: &str = "t,C_ac,C_bd,C_ab,C_cd,C_ad,C_bc,N";

/// Samples `t_n = n·t_max/steps`, `n = 0..=steps`.
pub fn evolve_series(model: &Model, phi: f64, t_max: f64, steps: usize) -> Result<Vec<SeriesRow>> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::Integration(format!("t_max must be positive, got {t_max}")));
    }
    if steps == 0 {
        return Err(Error::Integration("steps must be at least 1".into()));
    }
    let k = model.config.coefficients(phi, model.gamma)?;
    match model.method {
        Method::Amplitude => linspace(0.0, t_max, steps + 1)
            .into_iter()
            .map(|t| {
                let s = evolve_amplitudes(&k, t, model.sign)?;
                Ok(SeriesRow {
                    t,
                    concurrence: all_pairs_from_amplitudes(&s),
                    excitation: s.norm(),
                })
            })
            .collect(),
        Method::Lindblad => integrate_lindblad_on_grid(&k, t_max, steps, model.sign)?
            .iter()
            .map(|rho| {
                Ok(SeriesRow {
                    t: rho.t,
                    concurrence: all_pairs_from_density(rho)?,
                    excitation: rho.excitation(),
                })
            })
            .collect(),
    }
}

pub fn series_csv(rows: &[SeriesRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 96);
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format_number(row.t));
        for c in row.concurrence {
            out.push(',');
            out.push_str(&format_number(c));
        }
        out.push(',');
        out.push_str(&format_number(row.excitation));
        out.push('\n');
    }
    out
}

/// Axis ranges of a φ×t sweep. Point counts include both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxes {
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_points: usize,
    pub t_max: f64,
    pub t_points: usize,
}

impl Default for SweepAxes {
    fn default() -> Self {
        SweepAxes {
            phi_min: 0.0,
            phi_max: 2.0 * std::f64::consts::PI,
            phi_points: DEFAULT_PHI_POINTS,
            t_max: DEFAULT_T_MAX,
            t_points: DEFAULT_T_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub phi_values: Vec<f64>,
    pub t_values: Vec<f64>,
    pub pair: PairId,
    pub config: Configuration,
    /// `values[i][j]` is `C(phi_values[i], t_values[j])`.
    pub values: Vec<Vec<f64>>,
}

impl SweepGrid {
    pub fn get(&self, phi_index: usize, t_index: usize) -> f64 {
        self.values[phi_index][t_index]
    }

    /// Long format: `phi,t,C`, φ-major.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.phi_values.len() * self.t_values.len() * 32);
        out.push_str("phi,t,C\n");
        for (phi, column) in self.phi_values.iter().zip(&self.values) {
            let phi = format_number(*phi);
            for (t, c) in self.t_values.iter().zip(column) {
                let _ = writeln!(out, "{phi},{},{}", format_number(*t), format_number(*c));
            }
        }
        out
    }
}

pub fn run_sweep(model: &Model, pair: PairId, axes: &SweepAxes) -> Result<SweepGrid> {
    if axes.phi_points == 0 || axes.t_points < 2 {
        return Err(Error::Integration(
            "sweep needs at least one phase and two time points".into(),
        ));
    }
    if !axes.phi_min.is_finite() || !axes.phi_max.is_finite() {
        return Err(Error::NonFinite("phi range"));
    }
    if !(axes.t_max > 0.0) || !axes.t_max.is_finite() {
        return Err(Error::Integration(format!("t_max must be positive, got {}", axes.t_max)));
    }
    let phi_values = linspace(axes.phi_min, axes.phi_max, axes.phi_points);
    let t_values = linspace(0.0, axes.t_max, axes.t_points);

    let values = phi_values
        .par_iter()
        .map(|&phi| sweep_column(model, pair, phi, &t_values))
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepGrid {
        phi_values,
        t_values,
        pair,
        config: model.config.clone(),
        values,
    })
}

fn sweep_column(model: &Model, pair: PairId, phi: f64, t_values: &[f64]) -> Result<Vec<f64>> {
    let k = model.config.coefficients(phi, model.gamma)?;
    match model.method {
        Method::Amplitude => {
            let h = effective_hamiltonian(&k);
            Ok(t_values
                .iter()
                .map(|&t| {
                    let s = crate::dynamics::amplitude::evolve_with(&h, t, model.sign);
                    concurrence_x(&reduce_from_amplitudes(&s, pair))
                })
                .collect())
        }
        Method::Lindblad => {
            let t_max = *t_values.last().expect("non-empty axis");
            integrate_lindblad_on_grid(&k, t_max, t_values.len() - 1, model.sign)?
                .iter()
                .map(|rho| Ok(concurrence_x(&reduce_from_density(rho, pair)?)))
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakReport {
    pub config: String,
    pub pair: String,
    pub phi: f64,
    pub t_at_peak: f64,
    pub value: f64,
    pub t_horizon: f64,
    pub coarse_samples: usize,
    /// Final golden-section bracket `[lo, hi]`.
    pub bracket: (f64, f64),
    pub time_tolerance: f64,
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
/// Returns `(x, f(x), final bracket)`.
pub fn golden_section_max(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64, (f64, f64)) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    let (x, fx) = [(x1, f1), (x2, f2), (x, fx)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 > best.1 { cand } else { best });
    (x, fx, (lo, hi))
}

/// Maximum of `C_pair(t)` over `[0, t_horizon]`: coarse uniform scan, then
/// golden-section refinement around the best sample.
pub fn find_peak(model: &Model, pair: PairId, phi: f64, t_horizon: f64) -> Result<PeakReport> {
    if !(t_horizon > 0.0) || !t_horizon.is_finite() {
        return Err(Error::Integration(format!("t_horizon must be positive, got {t_horizon}")));
    }
    let k = model.config.coefficients(phi, model.gamma)?;
    let h = effective_hamiltonian(&k);
    let eval = |t: f64| {
        let s = crate::dynamics::amplitude::evolve_with(&h, t, model.sign);
        concurrence_x(&reduce_from_amplitudes(&s, pair))
    };

    let grid = linspace(0.0, t_horizon, PEAK_COARSE_SAMPLES);
    let (best_idx, best_val) = grid
        .iter()
        .map(|&t| eval(t))
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });

    let lo = grid[best_idx.saturating_sub(1)];
    let hi = grid[(best_idx + 1).min(grid.len() - 1)];
    let tol = PEAK_TIME_TOLERANCE / model.gamma;
    let (t_ref, v_ref, bracket) = golden_section_max(eval, lo, hi, tol);
    let (t_at_peak, value) = if v_ref >= best_val {
        (t_ref, v_ref)
    } else {
        (grid[best_idx], best_val)
    };

    Ok(PeakReport {
        config: model.config.name().to_string(),
        pair: pair.name().to_string(),
        phi,
        t_at_peak,
        value,
        t_horizon,
        coarse_samples: PEAK_COARSE_SAMPLES,
        bracket,
        time_tolerance: tol,
    })
}
