//! Closed-form concurrences at special phases, used as ground truth.

use std::f64::consts::PI;

use crate::entanglement::PairId;
use crate::error::{Error, Result};
use crate::layout::Configuration;

/// Phases are matched to the special values within this distance.
const PHASE_MATCH: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticCase {
    pub config: Configuration,
    pub pair: PairId,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    /// Point atoms at φ = 0: rates γ and 2γ.
    SmallInPhase,
    /// Separated giant atoms at φ = 0: rates 4γ and 8γ.
    SeparatedInPhase,
    /// Braided giant atoms at φ = π/2 or 3π/2: lossless exchange.
    BraidedDecoherenceFree,
}

fn near(phi: f64, target: f64) -> bool {
    let r = (phi - target).rem_euclid(2.0 * PI);
    r < PHASE_MATCH || 2.0 * PI - r < PHASE_MATCH
}

impl AnalyticCase {
    pub fn new(config: Configuration, pair: PairId, phi: f64) -> Self {
        AnalyticCase { config, pair, phi }
    }

    /// The closed form covering this case, if there is one.
    pub fn formula(&self) -> Option<Formula> {
        if !matches!(self.pair, PairId::Ac | PairId::Bd | PairId::Ab) {
            return None;
        }
        match self.config {
            Configuration::Small if near(self.phi, 0.0) => Some(Formula::SmallInPhase),
            Configuration::Separated if near(self.phi, 0.0) => Some(Formula::SeparatedInPhase),
            Configuration::Braided if near(self.phi, PI / 2.0) || near(self.phi, 1.5 * PI) => {
                Some(Formula::BraidedDecoherenceFree)
            }
            _ => None,
        }
    }
}

/// `Ok(None)` when no closed form is known for the case.
pub fn analytic_concurrence(case: &AnalyticCase, t: f64, gamma: f64) -> Result<Option<f64>> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let Some(formula) = case.formula() else {
        return Ok(None);
    };
    let gt = gamma * t;
    let value = match formula {
        Formula::SmallInPhase | Formula::SeparatedInPhase => {
            let rate = if formula == Formula::SmallInPhase { 1.0 } else { 4.0 };
            let e1 = (-rate * gt).exp();
            let e2 = (-2.0 * rate * gt).exp();
            match case.pair {
                PairId::Ac => (1.0 + 2.0 * e1 + e2) / 4.0,
                PairId::Bd => (1.0 - 2.0 * e1 + e2) / 4.0,
                _ => (1.0 - e2) / 4.0,
            }
        }
        Formula::BraidedDecoherenceFree => match case.pair {
            PairId::Ac => gt.cos().powi(2),
            PairId::Bd => gt.sin().powi(2),
            _ => (2.0 * gt).sin().abs() / 2.0,
        },
    };
    Ok(Some(value))
}

/// Every case with a closed form, one entry per `(config, pair, φ)`.
pub fn available_cases() -> Vec<AnalyticCase> {
    let mut out = Vec::new();
    for pair in [PairId::Ac, PairId::Bd, PairId::Ab] {
        out.push(AnalyticCase::new(Configuration::Small, pair, 0.0));
        out.push(AnalyticCase::new(Configuration::Separated, pair, 0.0));
        out.push(AnalyticCase::new(Configuration::Braided, pair, PI / 2.0));
        out.push(AnalyticCase::new(Configuration::Braided, pair, 1.5 * PI));
    }
    out
}
