//! Evaluation metrics, cross-validation, and the learning curve.
//!
//! Scoring follows the clause-identification convention: precision,
//! recall, and F over segment start positions (`Left`), end positions
//! (`Right`), single-token segments (`Both`), and exact-span complete
//! segments (`EDUs`). The EDU row only credits sentences whose predicted
//! labels are well-formed; an ill-formed prediction contributes its gold
//! segments as misses and nothing else.

pub mod synth;

pub use synth::{generate_synthetic, synthetic_lexicons, SynthConfig};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{BoundaryLabel, Document, Sentence};
use crate::pipeline::{predict_sentence, train_on_sentences, PipelineConfig};
use crate::segment::{check_well_formed, labels_to_segments, SegmentError};
use crate::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("gold has {gold} sentences but {predicted} prediction sequences were given")]
    ShapeMismatch { gold: usize, predicted: usize },
    #[error("sentence {sentence}: {expected} tokens but {got} predicted labels")]
    LengthMismatch { sentence: usize, expected: usize, got: usize },
    #[error("sentence {sentence} is not fully annotated")]
    UnannotatedGold { sentence: usize },
    #[error("sentence {sentence}: gold labels are ill-formed: {source}")]
    IllFormedGold { sentence: usize, source: SegmentError },
    #[error("need at least {folds} {unit}s for {folds}-fold cross-validation, corpus has {have}")]
    TooFewUnits { folds: usize, have: usize, unit: &'static str },
    #[error("fold count must be at least 2, got {0}")]
    BadFoldCount(usize),
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
}

/// Precision/recall counts for one task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Prf {
    pub true_pos: u64,
    pub false_pos: u64,
    pub false_neg: u64,
}

impl Prf {
    /// `tp / (tp + fp)`; 1.0 when nothing was predicted.
    pub fn precision(&self) -> f64 {
        let denom = self.true_pos + self.false_pos;
        if denom == 0 {
            1.0
        } else {
            self.true_pos as f64 / denom as f64
        }
    }

    /// `tp / (tp + fn)`; 1.0 when nothing was there to find.
    pub fn recall(&self) -> f64 {
        let denom = self.true_pos + self.false_neg;
        if denom == 0 {
            1.0
        } else {
            self.true_pos as f64 / denom as f64
        }
    }

    /// Harmonic mean of precision and recall; 0 when both are 0.
    pub fn f1(&self) -> f64 {
        let p = self.precision();
        let r = self.recall();
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }

    pub fn merge(&mut self, other: &Prf) {
        self.true_pos += other.true_pos;
        self.false_pos += other.false_pos;
        self.false_neg += other.false_neg;
    }
}

/// Scores for the four tasks plus the well-formedness tally.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvalReport {
    pub left: Prf,
    pub right: Prf,
    pub both: Prf,
    pub edus: Prf,
    pub well_formed_sentences: u64,
    pub total_sentences: u64,
}

impl EvalReport {
    pub fn well_formed_rate(&self) -> f64 {
        if self.total_sentences == 0 {
            1.0
        } else {
            self.well_formed_sentences as f64 / self.total_sentences as f64
        }
    }

    /// Pools counts (micro-average across folds).
    pub fn merge(&mut self, other: &EvalReport) {
        self.left.merge(&other.left);
        self.right.merge(&other.right);
        self.both.merge(&other.both);
        self.edus.merge(&other.edus);
        self.well_formed_sentences += other.well_formed_sentences;
        self.total_sentences += other.total_sentences;
    }

    fn rows(&self) -> [(&'static str, &Prf); 4] {
        [
            ("Left", &self.left),
            ("Right", &self.right),
            ("Both", &self.both),
            ("EDUs", &self.edus),
        ]
    }

    /// Aligned text table with one row per task.
    pub fn render_table(&self) -> String {
        let mut out = String::from("Class   Recall  Precision  F-measure\n");
        for (name, prf) in self.rows() {
            out.push_str(&format!(
                "{:<7} {:>6.3} {:>10.3} {:>10.3}\n",
                name,
                prf.recall(),
                prf.precision(),
                prf.f1()
            ));
        }
        out.push_str(&format!(
            "well-formed sentences: {}/{} ({:.3})\n",
            self.well_formed_sentences,
            self.total_sentences,
            self.well_formed_rate()
        ));
        out
    }

    /// Machine-readable tab-separated variant.
    pub fn render_tsv(&self) -> String {
        let mut out = String::from("class\trecall\tprecision\tf1\ttp\tfp\tfn\n");
        for (name, prf) in self.rows() {
            out.push_str(&format!(
                "{}\t{:.6}\t{:.6}\t{:.6}\t{}\t{}\t{}\n",
                name.to_lowercase(),
                prf.recall(),
                prf.precision(),
                prf.f1(),
                prf.true_pos,
                prf.false_pos,
                prf.false_neg
            ));
        }
        out.push_str(&format!(
            "well_formed\t{:.6}\t{}\t{}\n",
            self.well_formed_rate(),
            self.well_formed_sentences,
            self.total_sentences
        ));
        out
    }
}

fn tally_token_row(prf: &mut Prf, gold: &[BoundaryLabel], pred: &[BoundaryLabel], positive: BoundaryLabel) {
    for (g, p) in gold.iter().zip(pred) {
        match (*g == positive, *p == positive) {
            (true, true) => prf.true_pos += 1,
            (false, true) => prf.false_pos += 1,
            (true, false) => prf.false_neg += 1,
            (false, false) => {}
        }
    }
}

/// Scores predicted label sequences against gold sentences.
pub fn score(gold: &[&Sentence], predicted: &[Vec<BoundaryLabel>]) -> Result<EvalReport, EvalError> {
    if gold.len() != predicted.len() {
        return Err(EvalError::ShapeMismatch { gold: gold.len(), predicted: predicted.len() });
    }
    let mut report = EvalReport { total_sentences: gold.len() as u64, ..EvalReport::default() };
    for (s_idx, (sentence, pred)) in gold.iter().zip(predicted).enumerate() {
        if pred.len() != sentence.len() {
            return Err(EvalError::LengthMismatch {
                sentence: s_idx,
                expected: sentence.len(),
                got: pred.len(),
            });
        }
        let gold_labels = sentence
            .gold_labels()
            .ok_or(EvalError::UnannotatedGold { sentence: s_idx })?;
        tally_token_row(&mut report.left, &gold_labels, pred, BoundaryLabel::Begin);
        tally_token_row(&mut report.right, &gold_labels, pred, BoundaryLabel::End);
        tally_token_row(&mut report.both, &gold_labels, pred, BoundaryLabel::BeginEnd);

        let gold_spans = labels_to_segments(&gold_labels)
            .map_err(|e| EvalError::IllFormedGold { sentence: s_idx, source: e })?
            .span_set();
        if check_well_formed(pred).ok() {
            report.well_formed_sentences += 1;
            let pred_spans = labels_to_segments(pred)
                .expect("well-formed labels convert")
                .span_set();
            report.edus.true_pos += gold_spans.intersection(&pred_spans).count() as u64;
            report.edus.false_pos += pred_spans.difference(&gold_spans).count() as u64;
            report.edus.false_neg += gold_spans.difference(&pred_spans).count() as u64;
        } else {
            // Ill-formed predictions earn no segment credit; every gold
            // segment of the sentence counts as missed.
            report.edus.false_neg += gold_spans.len() as u64;
        }
    }
    Ok(report)
}

/// Per-fold and pooled results of one cross-validation run.
#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    pub folds: Vec<EvalReport>,
    pub pooled: EvalReport,
}

/// Near-equal fold assignment over `n` shuffled items.
fn fold_assignment(n: usize, folds: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut fold_of = vec![0usize; n];
    for fold in 0..folds {
        let lo = fold * n / folds;
        let hi = (fold + 1) * n / folds;
        for &i in &order[lo..hi] {
            fold_of[i] = fold;
        }
    }
    fold_of
}

/// Seeded k-fold cross-validation. Sentences are the fold unit unless
/// `doc_folds` keeps whole documents together. Each fold trains the full
/// pipeline on the remaining sentences, predicts the held-out ones, and is
/// scored; the pooled report micro-averages the counts.
pub fn cross_validate(
    docs: &[Document],
    lexicons: &crate::features::Lexicons,
    folds: usize,
    seed: u64,
    cfg: &PipelineConfig,
    doc_folds: bool,
) -> Result<CvOutcome, Error> {
    if folds < 2 {
        return Err(EvalError::BadFoldCount(folds).into());
    }
    let sentences: Vec<&Sentence> = crate::all_sentences(docs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fold_of: Vec<usize> = if doc_folds {
        if docs.len() < folds {
            return Err(EvalError::TooFewUnits { folds, have: docs.len(), unit: "document" }.into());
        }
        let doc_fold = fold_assignment(docs.len(), folds, &mut rng);
        docs.iter()
            .enumerate()
            .flat_map(|(d, doc)| std::iter::repeat(doc_fold[d]).take(doc.sentences.len()))
            .collect()
    } else {
        if sentences.len() < folds {
            return Err(
                EvalError::TooFewUnits { folds, have: sentences.len(), unit: "sentence" }.into()
            );
        }
        fold_assignment(sentences.len(), folds, &mut rng)
    };

    let mut fold_reports = Vec::with_capacity(folds);
    let mut pooled = EvalReport::default();
    for fold in 0..folds {
        let train_set: Vec<&Sentence> = sentences
            .iter()
            .zip(&fold_of)
            .filter(|(_, f)| **f != fold)
            .map(|(s, _)| *s)
            .collect();
        let test_set: Vec<&Sentence> = sentences
            .iter()
            .zip(&fold_of)
            .filter(|(_, f)| **f == fold)
            .map(|(s, _)| *s)
            .collect();
        let trained = train_on_sentences(&train_set, lexicons, cfg)?;
        let mut predictions = Vec::with_capacity(test_set.len());
        for sentence in &test_set {
            predictions.push(predict_sentence(&trained.model, lexicons, sentence, cfg)?);
        }
        let report = score(&test_set, &predictions)?;
        pooled.merge(&report);
        fold_reports.push(report);
    }
    Ok(CvOutcome { folds: fold_reports, pooled })
}

/// Document sample sizes for the learning curve: `step, 2·step, …`, with a
/// final partial step covering the whole corpus.
pub fn curve_sizes(total_docs: usize, step: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut size = step;
    while size < total_docs {
        sizes.push(size);
        size += step;
    }
    sizes.push(total_docs);
    sizes
}

/// One learning-curve point: cross-validation over a document sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub num_docs: usize,
    pub cv: CvOutcome,
}

/// Runs cross-validation over nested random document samples of growing
/// size. Sample `i+1` extends sample `i` by `step` documents.
pub fn learning_curve(
    docs: &[Document],
    lexicons: &crate::features::Lexicons,
    step: usize,
    folds: usize,
    seed: u64,
    cfg: &PipelineConfig,
) -> Result<Vec<CurvePoint>, Error> {
    if step == 0 {
        return Err(EvalError::DegenerateParams("step must be at least 1".into()).into());
    }
    if step > docs.len() {
        return Err(EvalError::DegenerateParams(format!(
            "step {step} exceeds corpus size {}",
            docs.len()
        ))
        .into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..docs.len()).collect();
    order.shuffle(&mut rng);
    let mut points = Vec::new();
    for size in curve_sizes(docs.len(), step) {
        let sample: Vec<Document> = order[..size].iter().map(|&i| docs[i].clone()).collect();
        let cv = cross_validate(&sample, lexicons, folds, seed, cfg, false)?;
        points.push(CurvePoint { num_docs: size, cv });
    }
    Ok(points)
}

/// Plot-ready learning-curve table: one line per size with the Left,
/// Right, and EDU F-measures.
pub fn render_curve_table(points: &[CurvePoint]) -> String {
    let mut out = String::from("docs\tleft_f\tright_f\tedu_f\n");
    for point in points {
        let pooled = &point.cv.pooled;
        out.push_str(&format!(
            "{}\t{:.6}\t{:.6}\t{:.6}\n",
            point.num_docs,
            pooled.left.f1(),
            pooled.right.f1(),
            pooled.edus.f1()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;
    use crate::corpus::test_fixtures::nested_document;
    use crate::features::Lexicons;
    use BoundaryLabel::*;

    fn labels(s: &str) -> Vec<BoundaryLabel> {
        s.split_whitespace().map(|c| BoundaryLabel::from_code(c).unwrap()).collect()
    }

    fn sentence_from_codes(codes: &str) -> Sentence {
        let rows: String = codes
            .split_whitespace()
            .enumerate()
            .map(|(i, c)| format!("{i}\tw{i}\tw{i}\tN\tN\t_\t_\t_\t{c}\n"))
            .collect();
        let input = format!("# doc = d\n{rows}");
        parse_corpus(input.as_bytes()).unwrap().remove(0).sentences.remove(0)
    }

    #[test]
    fn perfect_prediction_scores_ones() {
        let doc = nested_document();
        let sentence = &doc.sentences[0];
        let gold = sentence.gold_labels().unwrap();
        let report = score(&[sentence], &[gold]).unwrap();
        for (_, prf) in report.rows() {
            assert_eq!(prf.precision(), 1.0);
            assert_eq!(prf.recall(), 1.0);
            assert_eq!(prf.f1(), 1.0);
        }
        assert_eq!(report.well_formed_rate(), 1.0);
        assert_eq!(report.edus.true_pos, 3);
    }

    #[test]
    fn ill_formed_prediction_earns_no_segment_credit() {
        let sentence = sentence_from_codes("B I E");
        let report = score(&[&sentence], &[labels("B E B")]).unwrap();
        assert_eq!(report.edus, Prf { true_pos: 0, false_pos: 0, false_neg: 1 });
        assert_eq!(report.well_formed_rate(), 0.0);
    }

    #[test]
    fn exact_span_matching_by_hand() {
        // Gold {(0,1),(2,2)} vs predicted {(0,2)}: nothing matches.
        let sentence = sentence_from_codes("B E BE");
        let report = score(&[&sentence], &[labels("B I E")]).unwrap();
        assert_eq!(report.edus, Prf { true_pos: 0, false_pos: 1, false_neg: 2 });
        assert_eq!(report.edus.precision(), 0.0);
        assert_eq!(report.edus.recall(), 0.0);
    }

    #[test]
    fn token_rows_count_only_their_label() {
        let sentence = sentence_from_codes("B I E");
        let report = score(&[&sentence], &[labels("B B E")]).unwrap();
        assert_eq!(report.left, Prf { true_pos: 1, false_pos: 1, false_neg: 0 });
        assert_eq!(report.right, Prf { true_pos: 1, false_pos: 0, false_neg: 0 });
        assert_eq!(report.both, Prf { true_pos: 0, false_pos: 0, false_neg: 0 });
        assert_eq!(report.both.precision(), 1.0, "empty row is vacuously perfect");
    }

    #[test]
    fn score_is_permutation_invariant() {
        let a = sentence_from_codes("B I E");
        let b = sentence_from_codes("BE");
        let pa = labels("B E B");
        let pb = labels("BE");
        let fwd = score(&[&a, &b], &[pa.clone(), pb.clone()]).unwrap();
        let rev = score(&[&b, &a], &[pb, pa]).unwrap();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn shape_and_length_mismatches_error() {
        let sentence = sentence_from_codes("B E");
        assert!(matches!(
            score(&[&sentence], &[]),
            Err(EvalError::ShapeMismatch { gold: 1, predicted: 0 })
        ));
        assert!(matches!(
            score(&[&sentence], &[labels("B")]),
            Err(EvalError::LengthMismatch { sentence: 0, expected: 2, got: 1 })
        ));
    }

    #[test]
    fn curve_sizes_arithmetic() {
        assert_eq!(curve_sizes(47, 5), vec![5, 10, 15, 20, 25, 30, 35, 40, 45, 47]);
        assert_eq!(curve_sizes(12, 4), vec![4, 8, 12]);
        assert_eq!(curve_sizes(10, 10), vec![10]);
    }

    #[test]
    fn cross_validation_on_identical_sentences_is_symmetric() {
        let input = "# doc = d1\n\
                     0\tcar\tcar\tC\tC\t_\t_\t_\tB\n\
                     1\tw1\tw1\tN\tN\t_\t0\tnn\tI\n\
                     2\t,\t,\tPONCT\tP\t_\t1\tponct\tE\n\
                     \n\
                     0\tcar\tcar\tC\tC\t_\t_\t_\tB\n\
                     1\tw1\tw1\tN\tN\t_\t0\tnn\tI\n\
                     2\t,\t,\tPONCT\tP\t_\t1\tponct\tE\n";
        let docs = parse_corpus(input.as_bytes()).unwrap();
        let cfg = PipelineConfig::default();
        let outcome = cross_validate(&docs, &Lexicons::empty(), 2, 9, &cfg, false).unwrap();
        assert_eq!(outcome.folds.len(), 2);
        assert_eq!(outcome.folds[0], outcome.folds[1]);
        assert_eq!(
            outcome.pooled.edus.true_pos,
            outcome.folds.iter().map(|f| f.edus.true_pos).sum::<u64>()
        );
    }

    #[test]
    fn cross_validation_is_deterministic_for_a_seed() {
        let corpus = generate_synthetic(&SynthConfig {
            num_docs: 4,
            sentences_per_doc: 3,
            ..SynthConfig::default()
        })
        .unwrap();
        let lexicons = synthetic_lexicons();
        let cfg = PipelineConfig {
            train: crate::maxent::TrainConfig {
                max_iterations: 30,
                ..crate::maxent::TrainConfig::default()
            },
            ..PipelineConfig::default()
        };
        let a = cross_validate(&corpus, &lexicons, 3, 7, &cfg, false).unwrap();
        let b = cross_validate(&corpus, &lexicons, 3, 7, &cfg, false).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn too_few_sentences_for_folds_errors() {
        let input = "# doc = d1\n0\ta\ta\tN\tN\t_\t_\t_\tBE\n";
        let docs = parse_corpus(input.as_bytes()).unwrap();
        let err = cross_validate(
            &docs,
            &Lexicons::empty(),
            2,
            1,
            &PipelineConfig::default(),
            false,
        )
        .unwrap_err();
        assert!(err.to_string().contains("2-fold"), "{err}");
    }

    #[test]
    fn document_folds_keep_documents_together() {
        let corpus = generate_synthetic(&SynthConfig {
            num_docs: 4,
            sentences_per_doc: 3,
            ..SynthConfig::default()
        })
        .unwrap();
        let lexicons = synthetic_lexicons();
        let cfg = PipelineConfig {
            train: crate::maxent::TrainConfig {
                max_iterations: 20,
                ..crate::maxent::TrainConfig::default()
            },
            ..PipelineConfig::default()
        };
        let outcome = cross_validate(&corpus, &lexicons, 2, 7, &cfg, true).unwrap();
        // Each fold holds whole documents: sentence counts are multiples
        // of the per-doc sentence count.
        for fold in &outcome.folds {
            assert_eq!(fold.total_sentences % 3, 0);
        }
    }
}
