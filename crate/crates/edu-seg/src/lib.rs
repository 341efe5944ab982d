//! Nested discourse segmentation toolkit.
//!
//! Splits sentences into elementary discourse units that may embed in one
//! another. The pipeline is a four-way per-token boundary classifier
//! (`Begin` / `End` / `BeginEnd` / `Inside`), chunk-guided filtering of the
//! training distribution, a bracket-balancing repair pass over the
//! classifier output, and an evaluation and cross-validation harness with
//! a synthetic corpus generator for end-to-end experiments.

pub mod corpus;
pub mod eval;
pub mod features;
pub mod maxent;
pub mod pipeline;
pub mod resample;
pub mod segment;

pub use corpus::{BoundaryLabel, CorpusError, Document, Sentence, Token};
pub use eval::{cross_validate, learning_curve, score, EvalReport, Prf};
pub use features::{build_feature_space, extract_features, FeatureSpace, FeatureVector, Lexicons};
pub use maxent::{train, LabeledInstance, MaxEntModel, TrainConfig};
pub use resample::{apply_forced_labels, filter_training, InstanceFilterReport};
pub use segment::{
    check_well_formed, labels_to_segments, repair, segments_to_labels, Segment, Segmentation,
};

use thiserror::Error;

/// Unified error for the multi-stage pipeline operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] corpus::CorpusError),
    #[error(transparent)]
    Feature(#[from] features::FeatureError),
    #[error(transparent)]
    MaxEnt(#[from] maxent::MaxEntError),
    #[error(transparent)]
    Resample(#[from] resample::ResampleError),
    #[error(transparent)]
    Segment(#[from] segment::SegmentError),
    #[error(transparent)]
    Eval(#[from] eval::EvalError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Flattens documents into a sentence list, the unit most operations
/// work on.
pub fn all_sentences(docs: &[Document]) -> Vec<&Sentence> {
    docs.iter().flat_map(|d| d.sentences.iter()).collect()
}
