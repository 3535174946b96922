//! Lazy binary trees as samplers in the random bit model.

pub mod dist;
pub mod equidist;
pub mod expect;
pub mod sample;
pub mod tree;

use crate::approx::ChainError;
use crate::erat::ERat;
use crate::lazy::Exhausted;

pub use dist::{bernoulli, geometric, uniform, DistSpec, Event, Outcome};
pub use equidist::{equidist, EquidistReport};
pub use expect::{markov_check, mu_chain, mu_fold, wlp_chain, wlp_fold, wp_chain, wp_fold, Expectation};
pub use sample::{sample, sample_many, BitSource, DivergeReason, SampleOutcome, SampleStats};
pub use tree::{
    atree_bind, atree_fold, bind, bits_from_str, bits_to_string, cotree_idl, disjoint_upto, filter_cotree, iter_cotree,
    lang_cotree, map, preimage, ATree, Bits, Cotree, CotreeCell,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CotreeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("expectation is {value} > 1 at leaf {leaf}")]
    ExpectationAboveOne { leaf: String, value: ERat },
    #[error("step budget exhausted")]
    Exhausted,
    #[error("approximation chain is not monotone at fuel {fuel}")]
    MonotonicityViolation { fuel: usize },
    #[error("wp/wlp bracket still {gap} wide at fuel {fuel}")]
    BracketNotConverged { fuel: usize, gap: ERat },
}

impl From<Exhausted> for CotreeError {
    fn from(_: Exhausted) -> Self {
        CotreeError::Exhausted
    }
}

impl From<ChainError> for CotreeError {
    fn from(e: ChainError) -> Self {
        match e {
            ChainError::Exhausted(_) => CotreeError::Exhausted,
            ChainError::MonotonicityViolation { fuel } => CotreeError::MonotonicityViolation { fuel },
        }
    }
}
