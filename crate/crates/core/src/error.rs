use thiserror::Error;

/// Which half of a two-tail lattice sum a failure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// Points q, q³, q⁵, … accumulating at zero.
    Small,
    /// Points q⁻¹, q⁻³, … running off to infinity.
    Large,
}

impl std::fmt::Display for Tail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tail::Small => f.write_str("small-point"),
            Tail::Large => f.write_str("large-point"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("{0}")]
    Domain(String),

    #[error("q-factorial overflows at n = {n}")]
    Range { n: u32 },

    #[error(
        "{tail} tail did not converge within {terms} terms (last term magnitude {last_term:e})"
    )]
    Divergence {
        tail: Tail,
        terms: usize,
        last_term: f64,
    },

    #[error("sample |f({x})| = {value:e} exceeds magnitude bound {bound:e}")]
    GuardTripped { x: f64, value: f64, bound: f64 },

    #[error("series did not converge within {terms} terms (last term magnitude {last_term:e})")]
    SeriesDivergence { terms: usize, last_term: f64 },

    #[error("no lattice limit: last samples {samples:?} differ by more than {tol:e}")]
    NoLatticeLimit { samples: [f64; 3], tol: f64 },
}

impl QError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QError::Domain(msg.into())
    }

    /// True for failures caused by a sum or series that would not settle,
    /// as opposed to invalid input.
    pub fn is_divergence(&self) -> bool {
        matches!(
            self,
            QError::Divergence { .. }
                | QError::GuardTripped { .. }
                | QError::SeriesDivergence { .. }
                | QError::NoLatticeLimit { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, QError>;
