//! Rough-set approximation over two universes linked by a binary relation.
//!
//! A relation `R ⊆ U × V` approximates subsets of `V` by subsets of `U`:
//! the lower approximation collects the `x` whose right neighborhood lies
//! inside the set, the upper approximation those whose neighborhood meets it.
//! On top of that the crate provides
//!
//! * neighborhoods, the solitary set, quotient partitions ([`relation`]);
//! * approximation operators in set and Boolean-matrix form and the
//!   four-way rough type ([`approx`]);
//! * classifications of `V`, accuracy and quality measures, and checkable
//!   forms of the classification theorems ([`classification`]);
//! * an exhaustive/sampled verification engine for the algebraic laws, the
//!   union and intersection type tables and relation reconstruction ([`lab`]);
//! * text formats, JSON/text reports and the CLI plumbing ([`io`]).
//!
//! Measures are generic over the [`Measure`](measure::Measure) scalar; the
//! exact [`Ratio`] is used throughout reports.

pub mod approx;
pub mod bits;
pub mod classification;
pub mod error;
pub mod io;
pub mod lab;
pub mod measure;
pub mod relation;

#[cfg(test)]
pub(crate) mod testutil;

pub use approx::{
    approximate, boundary, lower_approximation, rough_type, upper_approximation, ApproxResult, RoughType, Strategy,
};
pub use bits::BitSet;
pub use classification::{
    approximate_family, corollaries_report, lower_nonempty_check, upper_cover_check, Classification, FamilyApprox,
    Quality, TheoremReport, Verdict,
};
pub use error::{Error, Result};
pub use relation::{BinaryRelation, Partition, Side, Subset, UniversePair};

/// Exact non-negative rational, always in lowest terms.
pub type Ratio = num_rational::Ratio<u64>;
/// Arbitrary-width exact rational over 128-bit integers.
pub type WideRatio = num_rational::Ratio<u128>;
pub type ExactQuality = Quality<Ratio>;
pub type QualityF64 = Quality<f64>;
pub type QualityF32 = Quality<f32>;
