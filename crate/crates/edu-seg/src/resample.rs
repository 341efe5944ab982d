//! Chunk-guided rebalancing of the training distribution.
//!
//! Sentence-boundary tokens and tokens strictly inside chunks carry almost
//! no signal for the classifier: their labels are recoverable
//! deterministically. [`filter_training`] drops them from the training
//! instances; [`apply_forced_labels`] restores the deterministic decisions
//! at prediction time.

use thiserror::Error;

use crate::corpus::{BoundaryLabel, ChunkPosition, Sentence, Token};

#[derive(Debug, Error)]
pub enum ResampleError {
    #[error("sentence {sentence}, token {token} has no gold label")]
    MissingGoldLabel { sentence: usize, token: usize },
    #[error("predicted {got} labels for a sentence of {expected} tokens")]
    LengthMismatch { expected: usize, got: usize },
}

/// A token is strictly chunk-internal when it sits inside at least one
/// chunk and is at the interior of every chunk level it belongs to.
/// Tokens outside all chunks are not "inside" anything and stay in.
pub fn strictly_chunk_internal(token: &Token) -> bool {
    !token.chunk_path.is_empty()
        && token.chunk_path.iter().all(|e| e.position == ChunkPosition::Inside)
}

/// Counts from one [`filter_training`] run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstanceFilterReport {
    pub kept: u64,
    pub dropped_sentence_boundary: u64,
    pub dropped_chunk_internal: u64,
    /// Kept counts indexed by [`BoundaryLabel::index`].
    pub kept_per_label: [u64; 4],
}

impl InstanceFilterReport {
    pub fn total(&self) -> u64 {
        self.kept + self.dropped_sentence_boundary + self.dropped_chunk_internal
    }
}

/// Selects the training token positions: the first and last token of every
/// sentence are dropped, as is every strictly chunk-internal token. The
/// kept positions come back as `(sentence index, token index)` pairs in
/// corpus order.
pub fn filter_training(
    sentences: &[&Sentence],
) -> Result<(Vec<(usize, usize)>, InstanceFilterReport), ResampleError> {
    let mut kept = Vec::new();
    let mut report = InstanceFilterReport::default();
    for (s_idx, sentence) in sentences.iter().enumerate() {
        let last = sentence.len() - 1;
        for (t_idx, token) in sentence.tokens().iter().enumerate() {
            let label = token.gold_label.ok_or(ResampleError::MissingGoldLabel {
                sentence: s_idx,
                token: t_idx,
            })?;
            if t_idx == 0 || t_idx == last {
                report.dropped_sentence_boundary += 1;
            } else if strictly_chunk_internal(token) {
                report.dropped_chunk_internal += 1;
            } else {
                report.kept += 1;
                report.kept_per_label[label.index()] += 1;
                kept.push((s_idx, t_idx));
            }
        }
    }
    Ok((kept, report))
}

/// Overwrites predictions with the deterministic decisions: strictly
/// chunk-internal tokens become `Inside`, then the first token becomes
/// `Begin` and the last `End` (`BeginEnd` for a single-token sentence).
/// Boundary forcing wins over chunk forcing on conflict.
pub fn apply_forced_labels(
    sentence: &Sentence,
    predicted: &[BoundaryLabel],
) -> Result<Vec<BoundaryLabel>, ResampleError> {
    if predicted.len() != sentence.len() {
        return Err(ResampleError::LengthMismatch {
            expected: sentence.len(),
            got: predicted.len(),
        });
    }
    let mut labels = predicted.to_vec();
    for (label, token) in labels.iter_mut().zip(sentence.tokens()) {
        if strictly_chunk_internal(token) {
            *label = BoundaryLabel::Inside;
        }
    }
    let last = labels.len() - 1;
    if last == 0 {
        labels[0] = BoundaryLabel::BeginEnd;
    } else {
        labels[0] = BoundaryLabel::Begin;
        labels[last] = BoundaryLabel::End;
    }
    Ok(labels)
}
