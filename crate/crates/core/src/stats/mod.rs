//! Validation statistics, score aggregation and corpus histograms.

mod aggregate;
mod corpus;
mod correlation;
mod special;

pub use aggregate::{AggregateCell, AggregateTable};
pub use corpus::{CorpusStats, Histogram};
pub use correlation::{
    correlation_p_value, linear_fit, pearson, CorrelationReport, LinearFit, PearsonResult,
};
pub use special::{ln_beta, ln_gamma, reg_incomplete_beta};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("argument outside the function's domain")]
    DomainError,
    #[error("continued fraction did not converge")]
    NoConvergence,
}
