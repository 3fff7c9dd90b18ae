use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("preset_layout requires a named preset")]
    NotAPreset,
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("decay rate gamma must be positive, got {0}")]
    NonPositiveGamma(f64),
    #[error("unphysical individual decay for atom {atom}: {value}")]
    UnphysicalDecay { atom: char, value: f64 },
    #[error("atom {0} has no connection points")]
    EmptyAtom(char),
    #[error("invalid layout: {0}")]
    Layout(String),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("invalid integration parameter: {0}")]
    Integration(String),
    #[error("step too large: eigenvalue drifted to {min_eigenvalue:e} at t = {t}; use a smaller dt")]
    StepTooLarge { t: f64, min_eigenvalue: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T> = std::result::Result<T, Error>;
