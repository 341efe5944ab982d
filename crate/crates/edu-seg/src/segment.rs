//! Label-sequence algebra: well-formedness checking, bracket repair, and
//! conversion between per-token labels and nested segment sets.
//!
//! A label sequence is well-formed when the brackets it induces balance,
//! never close at depth 0, and cover every token. Classifier output often
//! is not; [`repair`] restores well-formedness with one left-to-right pass
//! (stranded tokens become `Begin`) and one mirrored right-to-left pass
//! (remaining stranded tokens become `End`, a stranded `Begin` becomes
//! `BeginEnd`).

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::corpus::{BoundaryLabel, Sentence};

/// A contiguous bracket span; `start` and `end` are inclusive token indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
}

impl Segment {
    pub fn new(start: usize, end: usize) -> Segment {
        Segment { start, end }
    }

    pub fn contains(&self, other: &Segment) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

/// Kinds of well-formedness violations, in the order the left-to-right
/// depth scan detects them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// An `Inside` token at depth 0: no segment covers it.
    UncoveredToken,
    /// An `End` token at depth 0: nothing to close.
    UnmatchedEnd,
    /// A `Begin` still open at the end of the sentence.
    UnclosedBegin,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::UncoveredToken => "uncovered token",
            ViolationKind::UnmatchedEnd => "unmatched end",
            ViolationKind::UnclosedBegin => "unclosed begin",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
}

/// Result of [`check_well_formed`]; holds the first violation, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WellFormedness {
    violation: Option<Violation>,
}

impl WellFormedness {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }

    pub fn first_violation(&self) -> Option<Violation> {
        self.violation
    }
}

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error("labels are not well-formed: {kind} at token {index}")]
    IllFormed { index: usize, kind: ViolationKind },
    #[error("invalid segmentation: {0}")]
    Invalid(String),
}

/// Scans left to right, tracking the depth of the current embedding.
/// `Begin` opens a segment, `End` closes the most recent one, `BeginEnd`
/// covers itself, and `Inside` requires an open segment.
pub fn check_well_formed(labels: &[BoundaryLabel]) -> WellFormedness {
    let mut open: Vec<usize> = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        match label {
            BoundaryLabel::Begin => open.push(i),
            BoundaryLabel::BeginEnd => {}
            BoundaryLabel::Inside => {
                if open.is_empty() {
                    return WellFormedness {
                        violation: Some(Violation { index: i, kind: ViolationKind::UncoveredToken }),
                    };
                }
            }
            BoundaryLabel::End => {
                if open.is_empty() {
                    return WellFormedness {
                        violation: Some(Violation { index: i, kind: ViolationKind::UnmatchedEnd }),
                    };
                }
                open.pop();
            }
        }
    }
    // The outermost unmatched Begin is the first one still open.
    match open.first() {
        Some(&index) => WellFormedness {
            violation: Some(Violation { index, kind: ViolationKind::UnclosedBegin }),
        },
        None => WellFormedness { violation: None },
    }
}

/// Two-pass bracket repair. Pass 1 walks left to right and relabels any
/// stranded token (`Inside` or `End` at depth 0) as `Begin`; pass 2 walks
/// right to left with mirrored roles and relabels stranded tokens as `End`,
/// turning a `Begin` with nothing to its right to close it into `BeginEnd`.
/// Well-formed input is returned unchanged.
pub fn repair(labels: &[BoundaryLabel]) -> Vec<BoundaryLabel> {
    let mut out = labels.to_vec();

    let mut depth = 0usize;
    for label in out.iter_mut() {
        match *label {
            BoundaryLabel::Begin => depth += 1,
            BoundaryLabel::BeginEnd => {}
            BoundaryLabel::Inside | BoundaryLabel::End if depth == 0 => {
                *label = BoundaryLabel::Begin;
                depth = 1;
            }
            BoundaryLabel::Inside => {}
            BoundaryLabel::End => depth -= 1,
        }
    }

    let mut depth = 0usize;
    for label in out.iter_mut().rev() {
        match *label {
            BoundaryLabel::End => depth += 1,
            BoundaryLabel::BeginEnd => {}
            BoundaryLabel::Inside if depth == 0 => {
                *label = BoundaryLabel::End;
                depth = 1;
            }
            BoundaryLabel::Inside => {}
            BoundaryLabel::Begin if depth == 0 => *label = BoundaryLabel::BeginEnd,
            BoundaryLabel::Begin => depth -= 1,
        }
    }

    out
}

/// A proper nesting of segments over one sentence: no partial overlaps,
/// every token covered, and no two segments sharing a start or an end
/// index (the label scheme cannot express those).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    len: usize,
    segments: Vec<Segment>,
}

impl Segmentation {
    /// Validates the invariants and stores segments sorted by start index.
    pub fn new(len: usize, segments: impl IntoIterator<Item = Segment>) -> Result<Segmentation, SegmentError> {
        let mut segments: Vec<Segment> = segments.into_iter().collect();
        segments.sort();
        segments.dedup();
        for seg in &segments {
            if seg.start > seg.end || seg.end >= len {
                return Err(SegmentError::Invalid(format!(
                    "segment {seg} out of range for length {len}"
                )));
            }
        }
        for pair in segments.windows(2) {
            if pair[0].start == pair[1].start {
                return Err(SegmentError::Invalid(format!(
                    "segments {} and {} share a start index",
                    pair[0], pair[1]
                )));
            }
        }
        let mut ends = HashSet::new();
        for seg in &segments {
            if !ends.insert(seg.end) {
                let other = segments.iter().find(|s| s.end == seg.end && *s != seg).unwrap();
                return Err(SegmentError::Invalid(format!(
                    "segments {other} and {seg} share an end index"
                )));
            }
        }
        for (i, a) in segments.iter().enumerate() {
            for b in &segments[i + 1..] {
                if b.start > a.end {
                    break;
                }
                if !a.contains(b) && !b.contains(a) {
                    return Err(SegmentError::Invalid(format!(
                        "segments {a} and {b} partially overlap"
                    )));
                }
            }
        }
        let mut covered = vec![false; len];
        for seg in &segments {
            for c in &mut covered[seg.start..=seg.end] {
                *c = true;
            }
        }
        if let Some(i) = covered.iter().position(|&c| !c) {
            return Err(SegmentError::Invalid(format!("token {i} is not covered by any segment")));
        }
        Ok(Segmentation { len, segments })
    }

    /// Sentence length this segmentation covers.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Segments sorted by start index.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Segments as a set of `(start, end)` pairs.
    pub fn span_set(&self) -> HashSet<(usize, usize)> {
        self.segments.iter().map(|s| (s.start, s.end)).collect()
    }

    /// Number of segments lying strictly inside another segment.
    pub fn nested_count(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| self.segments.iter().any(|o| o != *s && o.contains(s)))
            .count()
    }
}

/// Converts a well-formed label sequence into its segment set via a stack
/// simulation: `Begin` pushes, `End` pops the most recent open index, and
/// `BeginEnd` yields a single-token segment.
pub fn labels_to_segments(labels: &[BoundaryLabel]) -> Result<Segmentation, SegmentError> {
    if let Some(v) = check_well_formed(labels).first_violation() {
        return Err(SegmentError::IllFormed { index: v.index, kind: v.kind });
    }
    let mut open: Vec<usize> = Vec::new();
    let mut segments = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        match label {
            BoundaryLabel::Begin => open.push(i),
            BoundaryLabel::End => {
                let start = open.pop().expect("checked well-formed");
                segments.push(Segment::new(start, i));
            }
            BoundaryLabel::BeginEnd => segments.push(Segment::new(i, i)),
            BoundaryLabel::Inside => {}
        }
    }
    Segmentation::new(labels.len(), segments)
}

/// Inverse of [`labels_to_segments`]: renders a valid segmentation as a
/// label sequence.
pub fn segments_to_labels(seg: &Segmentation) -> Vec<BoundaryLabel> {
    let mut labels = vec![BoundaryLabel::Inside; seg.len()];
    for s in seg.segments() {
        if s.start == s.end {
            labels[s.start] = BoundaryLabel::BeginEnd;
        } else {
            labels[s.start] = BoundaryLabel::Begin;
            labels[s.end] = BoundaryLabel::End;
        }
    }
    labels
}

/// Renders a sentence with its segments as brackets interleaved with the
/// token forms, e.g. `[a [b c] d]`.
pub fn render_brackets(sentence: &Sentence, seg: &Segmentation) -> String {
    let starts: HashSet<usize> = seg.segments().iter().map(|s| s.start).collect();
    let ends: HashSet<usize> = seg.segments().iter().map(|s| s.end).collect();
    let mut parts: Vec<String> = Vec::new();
    for (i, tok) in sentence.tokens().iter().enumerate() {
        let mut piece = String::new();
        if starts.contains(&i) {
            piece.push('[');
        }
        piece.push_str(&tok.form);
        if ends.contains(&i) {
            piece.push(']');
        }
        parts.push(piece);
    }
    parts.join(" ")
}
