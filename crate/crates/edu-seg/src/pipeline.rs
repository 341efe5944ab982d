//! End-to-end wiring shared by the cross-validation harness and the CLI:
//! feature space construction, instance filtering, training, and the
//! decode → force → repair prediction chain.

use crate::corpus::{BoundaryLabel, Sentence};
use crate::features::{build_feature_space, extract_features, Lexicons};
use crate::maxent::{train, LabeledInstance, MaxEntModel, TrainConfig, TrainReport};
use crate::resample::{
    apply_forced_labels, filter_training, InstanceFilterReport, ResampleError,
};
use crate::segment::repair;
use crate::Error;

/// Switches and hyperparameters for one train/predict run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub train: TrainConfig,
    /// Minimum occurrence count for a feature to enter the space.
    pub min_count: u32,
    /// Drop sentence-boundary and strictly chunk-internal tokens from
    /// training.
    pub resample: bool,
    /// Overwrite predictions with the deterministic labels at sentence
    /// boundaries and inside chunks.
    pub force_boundaries: bool,
    /// Run bracket repair over the predicted labels.
    pub repair: bool,
}

impl Default for PipelineConfig {
    fn default() -> PipelineConfig {
        PipelineConfig {
            train: TrainConfig::default(),
            min_count: 1,
            resample: true,
            force_boundaries: true,
            repair: true,
        }
    }
}

/// A trained model plus the bookkeeping the training log reports.
#[derive(Debug)]
pub struct TrainedPipeline {
    pub model: MaxEntModel,
    pub train_report: TrainReport,
    pub filter_report: InstanceFilterReport,
}

/// Keeps every token as a training instance, mirroring the filter report
/// shape for the disabled-resampling path.
fn keep_all(sentences: &[&Sentence]) -> Result<(Vec<(usize, usize)>, InstanceFilterReport), ResampleError> {
    let mut kept = Vec::new();
    let mut report = InstanceFilterReport::default();
    for (s, sentence) in sentences.iter().enumerate() {
        for (t, token) in sentence.tokens().iter().enumerate() {
            let label = token
                .gold_label
                .ok_or(ResampleError::MissingGoldLabel { sentence: s, token: t })?;
            report.kept += 1;
            report.kept_per_label[label.index()] += 1;
            kept.push((s, t));
        }
    }
    Ok((kept, report))
}

/// Builds the feature space over all tokens, selects training instances
/// (filtered unless disabled), and trains the classifier.
pub fn train_on_sentences(
    sentences: &[&Sentence],
    lexicons: &Lexicons,
    cfg: &PipelineConfig,
) -> Result<TrainedPipeline, Error> {
    let space = build_feature_space(sentences, lexicons, cfg.min_count);
    let (kept, filter_report) = if cfg.resample {
        filter_training(sentences)?
    } else {
        keep_all(sentences)?
    };
    let mut instances = Vec::with_capacity(kept.len());
    for &(s, t) in &kept {
        let vector = extract_features(sentences[s], t, lexicons, &space)?;
        let label = sentences[s].tokens()[t].gold_label.expect("filter checked annotation");
        instances.push(LabeledInstance { vector, label });
    }
    let (model, train_report) = train(&instances, space, &cfg.train)?;
    Ok(TrainedPipeline { model, train_report, filter_report })
}

/// Predicts one sentence: per-token decode, then forced labels and repair
/// as configured.
pub fn predict_sentence(
    model: &MaxEntModel,
    lexicons: &Lexicons,
    sentence: &Sentence,
    cfg: &PipelineConfig,
) -> Result<Vec<BoundaryLabel>, Error> {
    let mut labels = Vec::with_capacity(sentence.len());
    for index in 0..sentence.len() {
        let vector = extract_features(sentence, index, lexicons, model.space())?;
        labels.push(model.decode(&vector)?);
    }
    if cfg.force_boundaries {
        labels = apply_forced_labels(sentence, &labels)?;
    }
    if cfg.repair {
        labels = repair(&labels);
    }
    Ok(labels)
}
