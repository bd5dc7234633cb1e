//! Instance-producing transforms and their certificates.

pub mod certificate;
pub mod maxcut;
pub mod monochromatic;
pub mod multiset;
pub mod ov;
pub mod verify;

use thiserror::Error;

use crate::aggregation::{AggregationError, BichromaticInstance, UlamInstance};
use crate::balancing::BalanceError;
use crate::metric::MetricError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("the graph has no edges")]
    NoEdges,
    #[error("input has the wrong shape: {0}")]
    Shape(String),
    #[error("this reduction needs the certificate of the input instance")]
    MissingCertificate,
    #[error("certificate does not match the instance: {0}")]
    CertificateMismatch(String),
    #[error("{0} candidates; pad the vector sets to a multiple of 4 first")]
    NotDivisibleBy4(usize),
    #[error(transparent)]
    Aggregation(#[from] AggregationError),
    #[error(transparent)]
    Balance(#[from] BalanceError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Output of any reduction: a plain instance or a bichromatic one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReducedInstance {
    Mono(UlamInstance),
    Bi(BichromaticInstance),
}
