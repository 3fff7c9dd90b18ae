//! Coupling topologies and the master-equation coefficients they induce.
//!
//! Atoms `a` and `b` sit on the first waveguide, `c` and `d` on the second.
//! Connection-point positions are measured in units of the spacing `d0`
//! between adjacent points, so two points separated by `Δ` accumulate a phase
//! `φ·|Δ|`.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance below zero tolerated for an individual decay rate of a custom layout.
pub const DECAY_NEGATIVITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomId {
    A,
    B,
    C,
    D,
}

impl AtomId {
    pub const ALL: [AtomId; 4] = [AtomId::A, AtomId::B, AtomId::C, AtomId::D];

    pub fn label(self) -> char {
        match self {
            AtomId::A => 'a',
            AtomId::B => 'b',
            AtomId::C => 'c',
            AtomId::D => 'd',
        }
    }

    /// 1 for atoms `a`, `b`; 2 for `c`, `d`.
    pub fn waveguide(self) -> u8 {
        match self {
            AtomId::A | AtomId::B => 1,
            AtomId::C | AtomId::D => 2,
        }
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// One value per atom.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerAtom<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T> PerAtom<T> {
    pub fn from_fn(mut f: impl FnMut(AtomId) -> T) -> Self {
        PerAtom {
            a: f(AtomId::A),
            b: f(AtomId::B),
            c: f(AtomId::C),
            d: f(AtomId::D),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, &T)> {
        AtomId::ALL.into_iter().map(move |id| (id, &self[id]))
    }
}

impl<T> Index<AtomId> for PerAtom<T> {
    type Output = T;

    fn index(&self, id: AtomId) -> &T {
        match id {
            AtomId::A => &self.a,
            AtomId::B => &self.b,
            AtomId::C => &self.c,
            AtomId::D => &self.d,
        }
    }
}

impl<T> IndexMut<AtomId> for PerAtom<T> {
    fn index_mut(&mut self, id: AtomId) -> &mut T {
        match id {
            AtomId::A => &mut self.a,
            AtomId::B => &mut self.b,
            AtomId::C => &mut self.c,
            AtomId::D => &mut self.d,
        }
    }
}

/// Connection-point positions of every atom, in units of `d0`.
///
/// Serialized as `{"a":[..],"b":[..],"c":[..],"d":[..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConnectionLayout {
    pub points: PerAtom<Vec<f64>>,
}

impl ConnectionLayout {
    /// Builds a layout, rejecting atoms without points and non-finite positions.
    pub fn new(points: PerAtom<Vec<f64>>) -> Result<Self> {
        let layout = ConnectionLayout { points };
        layout.validate()?;
        Ok(layout)
    }

    /// Same positions on both waveguides: `c` mirrors `a`, `d` mirrors `b`.
    pub fn mirrored(a: &[f64], b: &[f64]) -> Result<Self> {
        Self::new(PerAtom {
            a: a.to_vec(),
            b: b.to_vec(),
            c: a.to_vec(),
            d: b.to_vec(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        for (id, pts) in self.points.iter() {
            if pts.is_empty() {
                return Err(Error::EmptyAtom(id.label()));
            }
            if pts.iter().any(|p| !p.is_finite()) {
                return Err(Error::Layout(format!("atom {id} has a non-finite position")));
            }
        }
        Ok(())
    }

    /// Parses the JSON layout-file format.
    pub fn from_json(text: &str) -> Result<Self> {
        let points: PerAtom<Vec<f64>> =
            serde_json::from_str(text).map_err(|e| Error::Layout(e.to_string()))?;
        Self::new(points)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("layout serializes")
    }

    pub fn points(&self, id: AtomId) -> &[f64] {
        &self.points[id]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Configuration {
    Small,
    Separated,
    Braided,
    Nested,
    Custom(ConnectionLayout),
}

impl Configuration {
    pub const PRESETS: [Configuration; 4] = [
        Configuration::Small,
        Configuration::Separated,
        Configuration::Braided,
        Configuration::Nested,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Configuration::Small => "small",
            Configuration::Separated => "separated",
            Configuration::Braided => "braided",
            Configuration::Nested => "nested",
            Configuration::Custom(_) => "custom",
        }
    }

    pub fn is_preset(&self) -> bool {
        !matches!(self, Configuration::Custom(_))
    }

    /// Layout for any configuration; presets expand via [`preset_layout`].
    pub fn layout(&self) -> ConnectionLayout {
        match self {
            Configuration::Custom(layout) => layout.clone(),
            preset => preset_layout(preset).expect("named preset"),
        }
    }

    /// Coefficients from the general connection-point sums.
    pub fn coefficients(&self, phi: f64, gamma: f64) -> Result<CoefficientSet> {
        match self {
            Configuration::Custom(layout) => coefficients_from_layout(layout, phi, gamma),
            preset => coefficients_from_layout(&preset_layout(preset)?, phi, gamma),
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Configuration {
    type Err = Error;

    /// Parses a preset name. `custom` is rejected because it needs a layout.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "small" => Ok(Configuration::Small),
            "separated" => Ok(Configuration::Separated),
            "braided" => Ok(Configuration::Braided),
            "nested" => Ok(Configuration::Nested),
            _ => Err(Error::Parse {
                what: "configuration",
                input: s.to_string(),
            }),
        }
    }
}

/// All coefficients of the master equation for one `(layout, φ, γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub lamb_shift: PerAtom<f64>,
    pub g_ab: f64,
    pub g_cd: f64,
    pub gamma_individual: PerAtom<f64>,
    pub gamma_ab: f64,
    pub gamma_cd: f64,
    pub gamma: f64,
    pub phi: f64,
}

impl CoefficientSet {
    /// Exchange coupling and collective decay of the pair sharing a waveguide.
    pub fn pair_terms(&self, waveguide: u8) -> (f64, f64) {
        if waveguide == 1 {
            (self.g_ab, self.gamma_ab)
        } else {
            (self.g_cd, self.gamma_cd)
        }
    }

    /// Largest rate appearing in the generator, used to size integration steps.
    pub fn max_rate(&self) -> f64 {
        let mut m = self.gamma.abs();
        for id in AtomId::ALL {
            m = m
                .max(self.lamb_shift[id].abs())
                .max(self.gamma_individual[id].abs());
        }
        m.max(self.g_ab.abs())
            .max(self.g_cd.abs())
            .max(self.gamma_ab.abs())
            .max(self.gamma_cd.abs())
    }

    /// Flat view of every rate, in a fixed order, for componentwise comparisons.
    pub fn components(&self) -> [f64; 12] {
        let l = &self.lamb_shift;
        let g = &self.gamma_individual;
        [
            l.a,
            l.b,
            l.c,
            l.d,
            self.g_ab,
            self.g_cd,
            g.a,
            g.b,
            g.c,
            g.d,
            self.gamma_ab,
            self.gamma_cd,
        ]
    }

    pub fn max_abs_diff(&self, other: &CoefficientSet) -> f64 {
        self.components()
            .iter()
            .zip(other.components().iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// Integer-position layout of a named preset. Waveguide 2 mirrors waveguide 1.
pub fn preset_layout(config: &Configuration) -> Result<ConnectionLayout> {
    let (a, b): (&[f64], &[f64]) = match config {
        Configuration::Small => (&[0.0], &[1.0]),
        Configuration::Separated => (&[0.0, 1.0], &[2.0, 3.0]),
        Configuration::Braided => (&[0.0, 2.0], &[1.0, 3.0]),
        Configuration::Nested => (&[0.0, 3.0], &[1.0, 2.0]),
        Configuration::Custom(_) => return Err(Error::NotAPreset),
    };
    ConnectionLayout::mirrored(a, b)
}

fn check_inputs(phi: f64, gamma: f64) -> Result<()> {
    if !phi.is_finite() {
        return Err(Error::NonFinite("phi"));
    }
    if !gamma.is_finite() {
        return Err(Error::NonFinite("gamma"));
    }
    if gamma <= 0.0 {
        return Err(Error::NonPositiveGamma(gamma));
    }
    Ok(())
}

/// `(Σ sin φ|p−q|, Σ cos φ|p−q|)` over all point pairs, self-pairs included.
fn interference_sums(phi: f64, p: &[f64], q: &[f64]) -> (f64, f64) {
    let mut s = 0.0;
    let mut c = 0.0;
    for &x in p {
        for &y in q {
            let theta = phi * (x - y).abs();
            s += theta.sin();
            c += theta.cos();
        }
    }
    (s, c)
}

/// General coefficient engine: double sums over connection points.
pub fn coefficients_from_layout(
    layout: &ConnectionLayout,
    phi: f64,
    gamma: f64,
) -> Result<CoefficientSet> {
    check_inputs(phi, gamma)?;
    layout.validate()?;

    let mut lamb_shift = PerAtom::default();
    let mut gamma_individual = PerAtom::default();
    for id in AtomId::ALL {
        let pts = layout.points(id);
        let (s, c) = interference_sums(phi, pts, pts);
        lamb_shift[id] = 0.5 * gamma * s;
        let decay = gamma * c;
        if decay < -DECAY_NEGATIVITY_TOLERANCE {
            return Err(Error::UnphysicalDecay {
                atom: id.label(),
                value: decay,
            });
        }
        gamma_individual[id] = decay;
    }

    let (s_ab, c_ab) = interference_sums(phi, layout.points(AtomId::A), layout.points(AtomId::B));
    let (s_cd, c_cd) = interference_sums(phi, layout.points(AtomId::C), layout.points(AtomId::D));

    Ok(CoefficientSet {
        lamb_shift,
        g_ab: 0.5 * gamma * s_ab,
        g_cd: 0.5 * gamma * s_cd,
        gamma_individual,
        gamma_ab: gamma * c_ab,
        gamma_cd: gamma * c_cd,
        gamma,
        phi,
    })
}

/// Per-configuration trigonometric closed forms of the coefficients.
pub fn coefficients_closed_form(
    config: &Configuration,
    phi: f64,
    gamma: f64,
) -> Result<CoefficientSet> {
    check_inputs(phi, gamma)?;
    let (s1, s2, s3) = (phi.sin(), (2.0 * phi).sin(), (3.0 * phi).sin());
    let (c1, c2, c3) = (phi.cos(), (2.0 * phi).cos(), (3.0 * phi).cos());

    // (δω_a, δω_b, g, Γ_a, Γ_b, Γ_pair); c mirrors a and d mirrors b.
    let (dw_a, dw_b, g, gam_a, gam_b, gam_pair) = match config {
        Configuration::Small => (0.0, 0.0, 0.5 * gamma * s1, gamma, gamma, gamma * c1),
        Configuration::Separated => {
            let dw = gamma * s1;
            let decay = 2.0 * gamma + 2.0 * gamma * c1;
            (
                dw,
                dw,
                0.5 * gamma * (s1 + 2.0 * s2 + s3),
                decay,
                decay,
                gamma * (c1 + 2.0 * c2 + c3),
            )
        }
        Configuration::Braided => {
            let dw = gamma * s2;
            let decay = 2.0 * gamma + 2.0 * gamma * c2;
            (
                dw,
                dw,
                0.5 * gamma * (3.0 * s1 + s3),
                decay,
                decay,
                gamma * (3.0 * c1 + c3),
            )
        }
        Configuration::Nested => (
            gamma * s3,
            gamma * s1,
            gamma * (s1 + s2),
            2.0 * gamma + 2.0 * gamma * c3,
            2.0 * gamma + 2.0 * gamma * c1,
            2.0 * gamma * (c1 + c2),
        ),
        Configuration::Custom(_) => return Err(Error::NotAPreset),
    };

    Ok(CoefficientSet {
        lamb_shift: PerAtom {
            a: dw_a,
            b: dw_b,
            c: dw_a,
            d: dw_b,
        },
        g_ab: g,
        g_cd: g,
        gamma_individual: PerAtom {
            a: gam_a,
            b: gam_b,
            c: gam_a,
            d: gam_b,
        },
        gamma_ab: gam_pair,
        gamma_cd: gam_pair,
        gamma,
        phi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn assert_close(x: f64, y: f64) {
        assert!((x - y).abs() < 1e-12, "{x} vs {y}");
    }

    #[test]
    fn presets_match_the_figure_layouts() {
        let small = preset_layout(&Configuration::Small).unwrap();
        assert_eq!(small.points(AtomId::A), &[0.0]);
        assert_eq!(small.points(AtomId::B), &[1.0]);
        assert_eq!(small.points(AtomId::C), &[0.0]);
        assert_eq!(small.points(AtomId::D), &[1.0]);

        let braided = preset_layout(&Configuration::Braided).unwrap();
        assert_eq!(braided.points(AtomId::A), &[0.0, 2.0]);
        assert_eq!(braided.points(AtomId::B), &[1.0, 3.0]);

        let nested = preset_layout(&Configuration::Nested).unwrap();
        assert_eq!(nested.points(AtomId::A), &[0.0, 3.0]);
        assert_eq!(nested.points(AtomId::B), &[1.0, 2.0]);
    }

    #[test]
    fn custom_is_not_a_preset() {
        let layout = preset_layout(&Configuration::Small).unwrap();
        let err = preset_layout(&Configuration::Custom(layout)).unwrap_err();
        assert_eq!(err.to_string(), "preset_layout requires a named preset");
        let layout = preset_layout(&Configuration::Small).unwrap();
        assert!(coefficients_closed_form(&Configuration::Custom(layout), 0.0, 1.0).is_err());
    }

    #[test]
    fn braided_quarter_wave_is_decoherence_free() {
        let layout = preset_layout(&Configuration::Braided).unwrap();
        let k = coefficients_from_layout(&layout, PI / 2.0, 1.0).unwrap();
        for id in AtomId::ALL {
            assert_close(k.lamb_shift[id], 0.0);
            assert_close(k.gamma_individual[id], 0.0);
        }
        assert_close(k.g_ab, 1.0);
        assert_close(k.g_cd, 1.0);
        assert_close(k.gamma_ab, 0.0);
        assert_close(k.gamma_cd, 0.0);
    }

    #[test]
    fn separated_half_wave_decouples() {
        let layout = preset_layout(&Configuration::Separated).unwrap();
        let k = coefficients_from_layout(&layout, PI, 1.0).unwrap();
        for v in k.components() {
            assert_close(v, 0.0);
        }
    }

    #[test]
    fn small_at_zero_phase() {
        let layout = preset_layout(&Configuration::Small).unwrap();
        let k = coefficients_from_layout(&layout, 0.0, 1.0).unwrap();
        for id in AtomId::ALL {
            assert_close(k.lamb_shift[id], 0.0);
            assert_close(k.gamma_individual[id], 1.0);
        }
        assert_close(k.g_ab, 0.0);
        assert_close(k.gamma_ab, 1.0);
        assert_close(k.gamma_cd, 1.0);
    }

    #[test]
    fn closed_form_examples() {
        let n = coefficients_closed_form(&Configuration::Nested, PI, 1.0).unwrap();
        assert_close(n.gamma_individual.a, 0.0);
        assert_close(n.gamma_individual.c, 0.0);
        assert_close(n.gamma_individual.b, 0.0);
        assert_close(n.gamma_individual.d, 0.0);
        assert_close(n.g_ab, 0.0);
        assert_close(n.gamma_ab, 0.0);

        let s = coefficients_closed_form(&Configuration::Separated, 0.0, 1.0).unwrap();
        assert_close(s.gamma_individual.a, 4.0);
        assert_close(s.gamma_ab, 4.0);
        assert_close(s.g_ab, 0.0);

        let small = coefficients_closed_form(&Configuration::Small, PI / 2.0, 1.0).unwrap();
        assert_close(small.g_ab, 0.5);
        assert_close(small.gamma_ab, 0.0);
        assert_close(small.gamma_individual.b, 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let layout = preset_layout(&Configuration::Small).unwrap();
        assert!(matches!(
            coefficients_from_layout(&layout, f64::NAN, 1.0),
            Err(Error::NonFinite("phi"))
        ));
        assert!(matches!(
            coefficients_from_layout(&layout, 0.0, f64::INFINITY),
            Err(Error::NonFinite("gamma"))
        ));
        assert!(matches!(
            coefficients_from_layout(&layout, 0.0, 0.0),
            Err(Error::NonPositiveGamma(_))
        ));
    }

    #[test]
    fn layout_json_round_trip_and_validation() {
        let text = r#"{"a":[0,2.5],"b":[1],"c":[0,4],"d":[1,2,3]}"#;
        let layout = ConnectionLayout::from_json(text).unwrap();
        assert_eq!(layout.points(AtomId::D), &[1.0, 2.0, 3.0]);
        assert_eq!(ConnectionLayout::from_json(&layout.to_json()).unwrap(), layout);

        assert!(matches!(
            ConnectionLayout::from_json(r#"{"a":[],"b":[1],"c":[0],"d":[1]}"#),
            Err(Error::EmptyAtom('a'))
        ));
        assert!(ConnectionLayout::from_json(r#"{"a":[0],"b":[1],"c":[0]}"#).is_err());
        assert!(ConnectionLayout::from_json(r#"{"a":[0],"b":[1],"c":[0],"d":[1],"e":[2]}"#).is_err());
        assert!(ConnectionLayout::from_json(r#"{"a":["x"],"b":[1],"c":[0],"d":[1]}"#).is_err());
    }

    #[test]
    fn three_point_custom_layout_is_accepted() {
        let layout = ConnectionLayout::mirrored(&[0.0, 1.0, 2.0], &[3.0]).unwrap();
        let k = coefficients_from_layout(&layout, 0.0, 1.0).unwrap();
        assert_close(k.gamma_individual.a, 9.0);
        assert_close(k.gamma_individual.b, 1.0);
        assert_close(k.gamma_ab, 3.0);
    }

    #[test]
    fn preset_names_parse() {
        assert_eq!("Braided".parse::<Configuration>().unwrap(), Configuration::Braided);
        assert!("custom".parse::<Configuration>().is_err());
    }
}
