use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("bimodule fails its axioms: {0}")]
    AxiomFailure(String),

    #[error("left inner product does not vanish on the null space of the right one (violation {0:.3e})")]
    LeftFormNotNull(f64),

    #[error("Gram kernel extraction is ill-conditioned: eigenvalue {value:.3e} lies in the guard band [{low:.3e}, {high:.3e})")]
    IllConditioned { value: f64, low: f64, high: f64 },

    #[error("degree {degree} is outside the window (radius {radius}) for {what}")]
    DegreeOutOfWindow { degree: i32, radius: i32, what: &'static str },

    #[error("|lambda| = {0} is not 1")]
    NotUnimodular(f64),

    #[error("{points} quadrature points cannot integrate trigonometric degree {degree} exactly (need at least {needed})")]
    QuadratureTooCoarse { points: usize, degree: usize, needed: usize },

    #[error("fullness obstruction: {0}")]
    NotFull(String),

    #[error("not of the form A_alpha: {0}")]
    NotAAlpha(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
