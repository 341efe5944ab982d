//! Data model for annotated documents and the corpus file format.
//!
//! A corpus file is UTF-8 text. A line `# doc = <docId>` starts a new
//! document; other lines starting with `#` are comments. Each token is one
//! line of 9 tab-separated columns:
//!
//! ```text
//! INDEX  FORM  LEMMA  POS  CAT  CHUNKS  HEAD  DEPREL  BOUNDARY
//! ```
//!
//! * `INDEX`: 0-based position within the sentence.
//! * `CHUNKS`: `_` for none, else a comma-separated innermost→outermost list
//!   of `TAG-P` items where `P` ∈ `{B,I,E,S}`.
//! * `HEAD`/`DEPREL`: `_` for the root token, else the 0-based head index
//!   and the relation label.
//! * `BOUNDARY`: `B`, `E`, `BE`, `I`, or `_` when unannotated.
//!
//! A blank line terminates a sentence. Parsing is strict: the first
//! malformed line aborts with its location.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::segment::{self, SegmentError};

/// The four per-token boundary outcomes.
///
/// `Begin` opens a segment, `End` closes one, `BeginEnd` is a single-token
/// segment, and `Inside` is none of the above. The order here is the fixed
/// label order used for tie-breaking and model files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryLabel {
    Begin,
    End,
    BeginEnd,
    Inside,
}

impl BoundaryLabel {
    /// All labels in the fixed order `[Begin, End, BeginEnd, Inside]`.
    pub const ALL: [BoundaryLabel; 4] = [
        BoundaryLabel::Begin,
        BoundaryLabel::End,
        BoundaryLabel::BeginEnd,
        BoundaryLabel::Inside,
    ];

    /// Position of this label in [`BoundaryLabel::ALL`].
    pub fn index(self) -> usize {
        match self {
            BoundaryLabel::Begin => 0,
            BoundaryLabel::End => 1,
            BoundaryLabel::BeginEnd => 2,
            BoundaryLabel::Inside => 3,
        }
    }

    /// Column code used in corpus files.
    pub fn code(self) -> &'static str {
        match self {
            BoundaryLabel::Begin => "B",
            BoundaryLabel::End => "E",
            BoundaryLabel::BeginEnd => "BE",
            BoundaryLabel::Inside => "I",
        }
    }

    pub fn from_code(code: &str) -> Option<BoundaryLabel> {
        match code {
            "B" => Some(BoundaryLabel::Begin),
            "E" => Some(BoundaryLabel::End),
            "BE" => Some(BoundaryLabel::BeginEnd),
            "I" => Some(BoundaryLabel::Inside),
            _ => None,
        }
    }
}

impl fmt::Display for BoundaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Position of a token within one chunk instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChunkPosition {
    Begin,
    Inside,
    End,
    Singleton,
}

impl ChunkPosition {
    pub fn code(self) -> char {
        match self {
            ChunkPosition::Begin => 'B',
            ChunkPosition::Inside => 'I',
            ChunkPosition::End => 'E',
            ChunkPosition::Singleton => 'S',
        }
    }

    pub fn from_code(code: &str) -> Option<ChunkPosition> {
        match code {
            "B" => Some(ChunkPosition::Begin),
            "I" => Some(ChunkPosition::Inside),
            "E" => Some(ChunkPosition::End),
            "S" => Some(ChunkPosition::Singleton),
            _ => None,
        }
    }
}

/// One level of a token's chunk path: a chunk tag plus the token's position
/// within that chunk instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkElement {
    pub tag: String,
    pub position: ChunkPosition,
}

impl ChunkElement {
    pub fn new(tag: impl Into<String>, position: ChunkPosition) -> ChunkElement {
        ChunkElement { tag: tag.into(), position }
    }
}

/// One analyzed word. `head` and `dep_rel` are `None` for the root token;
/// `chunk_path` lists chunk memberships innermost first.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub pos: String,
    pub cat: String,
    pub chunk_path: Vec<ChunkElement>,
    pub head: Option<usize>,
    pub dep_rel: Option<String>,
    pub gold_label: Option<BoundaryLabel>,
}

/// A sentence: the unit of decoding, repair, and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    tokens: Vec<Token>,
}

impl Sentence {
    /// Builds a sentence, checking structural invariants: contiguous token
    /// indices, in-range heads distinct from the token itself, and
    /// dependency chains that terminate at the root.
    pub fn new(tokens: Vec<Token>) -> Result<Sentence, SentenceError> {
        if tokens.is_empty() {
            return Err(SentenceError::Empty);
        }
        for (i, tok) in tokens.iter().enumerate() {
            if tok.index != i {
                return Err(SentenceError::IndexMismatch { expected: i, got: tok.index });
            }
            if tok.form.is_empty() || tok.lemma.is_empty() {
                return Err(SentenceError::EmptyField { token: i });
            }
            match tok.head {
                Some(h) if h == i => return Err(SentenceError::SelfHead { token: i }),
                Some(h) if h >= tokens.len() => {
                    return Err(SentenceError::HeadOutOfRange { token: i, head: h })
                }
                Some(_) if tok.dep_rel.is_none() => {
                    return Err(SentenceError::HalfRoot { token: i })
                }
                None if tok.dep_rel.is_some() => {
                    return Err(SentenceError::HalfRoot { token: i })
                }
                _ => {}
            }
        }
        // Every head chain must reach the root; a chain longer than the
        // sentence has revisited some token.
        for start in 0..tokens.len() {
            let mut cur = start;
            let mut steps = 0;
            while let Some(h) = tokens[cur].head {
                cur = h;
                steps += 1;
                if steps > tokens.len() {
                    return Err(SentenceError::HeadCycle { token: start });
                }
            }
        }
        Ok(Sentence { tokens })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Gold labels for all tokens, or `None` if any token is unannotated.
    pub fn gold_labels(&self) -> Option<Vec<BoundaryLabel>> {
        self.tokens.iter().map(|t| t.gold_label).collect()
    }
}

/// An annotated document.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub doc_id: String,
    pub sentences: Vec<Sentence>,
}

/// Structural violations detected when building a [`Sentence`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SentenceError {
    #[error("sentence has no tokens")]
    Empty,
    #[error("token index {got} where {expected} was expected")]
    IndexMismatch { expected: usize, got: usize },
    #[error("token {token} has an empty form or lemma")]
    EmptyField { token: usize },
    #[error("token {token} is its own dependency head")]
    SelfHead { token: usize },
    #[error("token {token} has out-of-range head {head}")]
    HeadOutOfRange { token: usize, head: usize },
    #[error("token {token} has a dependency cycle above it")]
    HeadCycle { token: usize },
    #[error("token {token} sets only one of HEAD and DEPREL to the root placeholder")]
    HalfRoot { token: usize },
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("corpus is not (fully) annotated with boundary labels")]
    Unannotated,
    #[error("document {doc}, sentence {sentence}: gold labels are not well-formed: {source}")]
    IllFormedGold { doc: String, sentence: usize, source: SegmentError },
}

impl CorpusError {
    fn parse(line: usize, msg: impl Into<String>) -> CorpusError {
        CorpusError::Parse { line, msg: msg.into() }
    }
}

fn parse_chunk_path(field: &str, line: usize) -> Result<Vec<ChunkElement>, CorpusError> {
    if field == "_" {
        return Ok(Vec::new());
    }
    let mut path = Vec::new();
    for item in field.split(',') {
        let (tag, pos) = item
            .rsplit_once('-')
            .ok_or_else(|| CorpusError::parse(line, format!("malformed chunk item `{item}`")))?;
        if tag.is_empty()
            || !tag.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
        {
            return Err(CorpusError::parse(
                line,
                format!("chunk tag `{tag}` is not an uppercase identifier"),
            ));
        }
        let position = ChunkPosition::from_code(pos).ok_or_else(|| {
            CorpusError::parse(line, format!("unknown chunk position code `{pos}`"))
        })?;
        path.push(ChunkElement::new(tag, position));
    }
    Ok(path)
}

fn parse_token_line(line_no: usize, line: &str, expected_index: usize) -> Result<Token, CorpusError> {
    let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
    if cols.len() != 9 {
        return Err(CorpusError::parse(
            line_no,
            format!("expected 9 tab-separated columns, found {}", cols.len()),
        ));
    }
    let index: usize = cols[0]
        .parse()
        .map_err(|_| CorpusError::parse(line_no, format!("bad token index `{}`", cols[0])))?;
    if index != expected_index {
        return Err(CorpusError::parse(
            line_no,
            format!("token index {index} where {expected_index} was expected"),
        ));
    }
    for (col, name) in [(1, "FORM"), (2, "LEMMA"), (3, "POS"), (4, "CAT")] {
        if cols[col].is_empty() {
            return Err(CorpusError::parse(line_no, format!("empty {name} column")));
        }
    }
    let chunk_path = parse_chunk_path(cols[5], line_no)?;
    let head = match cols[6] {
        "_" => None,
        h => Some(h.parse::<usize>().map_err(|_| {
            CorpusError::parse(line_no, format!("bad head index `{h}`"))
        })?),
    };
    let dep_rel = match cols[7] {
        "_" => None,
        r => Some(r.to_string()),
    };
    if head.is_some() != dep_rel.is_some() {
        return Err(CorpusError::parse(
            line_no,
            "HEAD and DEPREL must both be `_` or both be set",
        ));
    }
    if head == Some(index) {
        return Err(CorpusError::parse(
            line_no,
            format!("token {index} is its own dependency head"),
        ));
    }
    let gold_label = match cols[8] {
        "_" => None,
        code => Some(BoundaryLabel::from_code(code).ok_or_else(|| {
            CorpusError::parse(line_no, format!("unknown boundary label `{code}`"))
        })?),
    };
    Ok(Token {
        index,
        form: cols[1].to_string(),
        lemma: cols[2].to_string(),
        pos: cols[3].to_string(),
        cat: cols[4].to_string(),
        chunk_path,
        head,
        dep_rel,
        gold_label,
    })
}

/// Parses a corpus stream into documents, enforcing all structural
/// invariants. Aborts on the first error, reporting its line.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<Vec<Document>, CorpusError> {
    struct DocBuilder {
        doc_id: String,
        sentences: Vec<Sentence>,
        header_line: usize,
    }

    let mut docs: Vec<Document> = Vec::new();
    let mut seen_ids: HashMap<String, usize> = HashMap::new();
    let mut current: Option<DocBuilder> = None;
    // Pending token lines of the current sentence, with their line numbers
    // so sentence-level violations can point at the offending token.
    let mut pending: Vec<(usize, Token)> = Vec::new();

    fn flush_sentence(
        pending: &mut Vec<(usize, Token)>,
        current: &mut Option<DocBuilder>,
        at_line: usize,
    ) -> Result<(), CorpusError> {
        if pending.is_empty() {
            return Ok(());
        }
        let doc = current
            .as_mut()
            .expect("tokens are rejected before any document header");
        let lines: Vec<usize> = pending.iter().map(|(l, _)| *l).collect();
        let tokens: Vec<Token> = std::mem::take(pending).into_iter().map(|(_, t)| t).collect();
        let sentence = Sentence::new(tokens).map_err(|e| {
            let line = match e {
                SentenceError::SelfHead { token }
                | SentenceError::HeadOutOfRange { token, .. }
                | SentenceError::HeadCycle { token }
                | SentenceError::EmptyField { token }
                | SentenceError::HalfRoot { token } => lines.get(token).copied().unwrap_or(at_line),
                _ => at_line,
            };
            CorpusError::parse(line, e.to_string())
        })?;
        doc.sentences.push(sentence);
        Ok(())
    }

    fn flush_document(
        current: &mut Option<DocBuilder>,
        docs: &mut Vec<Document>,
    ) -> Result<(), CorpusError> {
        if let Some(builder) = current.take() {
            if builder.sentences.is_empty() {
                return Err(CorpusError::parse(
                    builder.header_line,
                    format!("document `{}` has no sentences", builder.doc_id),
                ));
            }
            docs.push(Document { doc_id: builder.doc_id, sentences: builder.sentences });
        }
        Ok(())
    }

    let mut line_no = 0;
    for line in reader.lines() {
        line_no += 1;
        let line = line?;
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("# doc =") {
            if !pending.is_empty() {
                return Err(CorpusError::parse(line_no, "document header inside a sentence"));
            }
            flush_document(&mut current, &mut docs)?;
            let doc_id = rest.trim().to_string();
            if doc_id.is_empty() {
                return Err(CorpusError::parse(line_no, "empty document id"));
            }
            if let Some(prev) = seen_ids.insert(doc_id.clone(), line_no) {
                return Err(CorpusError::parse(
                    line_no,
                    format!("duplicate document id `{doc_id}` (first seen at line {prev})"),
                ));
            }
            current = Some(DocBuilder { doc_id, sentences: Vec::new(), header_line: line_no });
        } else if trimmed.is_empty() {
            flush_sentence(&mut pending, &mut current, line_no)?;
        } else if trimmed.starts_with('#') {
            // ordinary comment
        } else {
            if current.is_none() {
                return Err(CorpusError::parse(line_no, "token line before any document header"));
            }
            let token = parse_token_line(line_no, &line, pending.len())?;
            pending.push((line_no, token));
        }
    }
    flush_sentence(&mut pending, &mut current, line_no)?;
    flush_document(&mut current, &mut docs)?;
    Ok(docs)
}

fn write_chunk_path(path: &[ChunkElement]) -> String {
    if path.is_empty() {
        return "_".to_string();
    }
    path.iter()
        .map(|e| format!("{}-{}", e.tag, e.position.code()))
        .collect::<Vec<_>>()
        .join(",")
}

/// Serializes documents in the corpus format. `parse_corpus` of the output
/// reproduces the input exactly.
pub fn write_corpus<W: Write>(docs: &[Document], mut writer: W) -> std::io::Result<()> {
    for doc in docs {
        writeln!(writer, "# doc = {}", doc.doc_id)?;
        for sentence in &doc.sentences {
            for tok in sentence.tokens() {
                let head = tok.head.map_or_else(|| "_".to_string(), |h| h.to_string());
                let dep_rel = tok.dep_rel.as_deref().unwrap_or("_");
                let boundary = tok.gold_label.map_or("_", BoundaryLabel::code);
                writeln!(
                    writer,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    tok.index,
                    tok.form,
                    tok.lemma,
                    tok.pos,
                    tok.cat,
                    write_chunk_path(&tok.chunk_path),
                    head,
                    dep_rel,
                    boundary,
                )?;
            }
            writeln!(writer)?;
        }
    }
    Ok(())
}

/// Serializes documents to a `String`.
pub fn corpus_to_string(docs: &[Document]) -> String {
    let mut buf = Vec::new();
    write_corpus(docs, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("corpus output is UTF-8")
}

/// Corpus-level counts over gold annotations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusStats {
    pub documents: u64,
    pub sentences: u64,
    pub tokens: u64,
    /// Counts indexed by [`BoundaryLabel::index`].
    pub label_counts: [u64; 4],
    pub segments: u64,
    pub nested_segments: u64,
}

impl CorpusStats {
    /// Share of segments lying strictly inside another segment.
    pub fn nested_proportion(&self) -> f64 {
        if self.segments == 0 {
            0.0
        } else {
            self.nested_segments as f64 / self.segments as f64
        }
    }
}

/// Computes corpus statistics from gold labels. Fails if any token is
/// unannotated or any sentence's gold labels do not form a valid nesting.
pub fn corpus_stats(docs: &[Document]) -> Result<CorpusStats, CorpusError> {
    let mut stats = CorpusStats {
        documents: docs.len() as u64,
        sentences: 0,
        tokens: 0,
        label_counts: [0; 4],
        segments: 0,
        nested_segments: 0,
    };
    for doc in docs {
        for (s_idx, sentence) in doc.sentences.iter().enumerate() {
            stats.sentences += 1;
            stats.tokens += sentence.len() as u64;
            let labels = sentence.gold_labels().ok_or(CorpusError::Unannotated)?;
            for label in &labels {
                stats.label_counts[label.index()] += 1;
            }
            let seg = segment::labels_to_segments(&labels).map_err(|e| {
                CorpusError::IllFormedGold { doc: doc.doc_id.clone(), sentence: s_idx, source: e }
            })?;
            stats.segments += seg.segments().len() as u64;
            stats.nested_segments += seg.nested_count() as u64;
        }
    }
    Ok(stats)
}


#[cfg(test)]
mod tests {
    use super::test_fixtures::{nested_document, nested_sentence_file};
    use super::*;
    use BoundaryLabel::*;

    #[test]
    fn parses_six_token_prefix() {
        let input = "# doc = d1\n\
                     0\tCes\tce\tD\tD\tNP-B\t1\tdet\tB\n\
                     1\tpièces\tpièce\tN\tN\tNP-E\t_\t_\tI\n\
                     2\t,\t,\tPONCT\tP\t_\t1\tponct\tI\n\
                     3\tmondialement\tmondialement\tADV\tR\tAP-B\t4\tmod\tB\n\
                     4\tconnues\tconnaître\tV\tV\tAP-E\t1\tmod\tI\n\
                     5\t,\t,\tPONCT\tP\t_\t4\tponct\tE\n";
        let docs = parse_corpus(input.as_bytes()).unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].doc_id, "d1");
        assert_eq!(docs[0].sentences.len(), 1);
        let labels = docs[0].sentences[0].gold_labels().unwrap();
        assert_eq!(labels, vec![Begin, Inside, Inside, Begin, Inside, End]);
    }

    #[test]
    fn empty_input_is_empty_corpus() {
        let docs = parse_corpus("".as_bytes()).unwrap();
        assert!(docs.is_empty());
    }

    #[test]
    fn self_loop_head_reports_line() {
        let input = "# doc = d1\n\
                     0\ta\ta\tN\tN\t_\t1\tdep\tB\n\
                     1\tb\tb\tN\tN\t_\t1\tdep\tE\n";
        let err = parse_corpus(input.as_bytes()).unwrap_err();
        match err {
            CorpusError::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("own dependency head"), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn head_cycle_is_rejected() {
        let input = "# doc = d1\n\
                     0\ta\ta\tN\tN\t_\t1\tdep\tB\n\
                     1\tb\tb\tN\tN\t_\t0\tdep\tE\n";
        let err = parse_corpus(input.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("cycle"), "{err}");
    }

    #[test]
    fn forward_head_reference_is_valid() {
        let input = "# doc = d1\n\
                     0\ta\ta\tN\tN\t_\t1\tdep\tB\n\
                     1\tb\tb\tN\tN\t_\t_\t_\tE\n";
        let docs = parse_corpus(input.as_bytes()).unwrap();
        assert_eq!(docs[0].sentences[0].tokens()[0].head, Some(1));
    }

    #[test]
    fn out_of_range_head_reports_token_line() {
        let input = "# doc = d1\n\
                     0\ta\ta\tN\tN\t_\t_\t_\tB\n\
                     1\tb\tb\tN\tN\t_\t7\tdep\tE\n";
        let err = parse_corpus(input.as_bytes()).unwrap_err();
        match err {
            CorpusError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn wrong_column_count_is_rejected() {
        let input = "# doc = d1\n0\ta\ta\tN\tN\t_\t_\t_\n";
        let err = parse_corpus(input.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("9 tab-separated columns"), "{err}");
    }

    #[test]
    fn unknown_boundary_label_is_rejected() {
        let input = "# doc = d1\n0\ta\ta\tN\tN\t_\t_\t_\tQ\n";
        let err = parse_corpus(input.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("unknown boundary label"), "{err}");
    }

    #[test]
    fn unknown_chunk_position_is_rejected() {
        let input = "# doc = d1\n0\ta\ta\tN\tN\tNP-X\t_\t_\tB\n";
        let err = parse_corpus(input.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("unknown chunk position"), "{err}");
    }

    #[test]
    fn lowercase_chunk_tag_is_rejected() {
        let input = "# doc = d1\n0\ta\ta\tN\tN\tnp-B\t_\t_\tB\n";
        let err = parse_corpus(input.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("uppercase"), "{err}");
    }

    #[test]
    fn token_before_header_is_rejected() {
        let input = "0\ta\ta\tN\tN\t_\t_\t_\tB\n";
        let err = parse_corpus(input.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("before any document header"), "{err}");
    }

    #[test]
    fn duplicate_doc_id_is_rejected() {
        let input = "# doc = d1\n0\ta\ta\tN\tN\t_\t_\t_\tBE\n\n# doc = d1\n0\tb\tb\tN\tN\t_\t_\t_\tBE\n";
        let err = parse_corpus(input.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("duplicate document id"), "{err}");
    }

    #[test]
    fn document_without_sentences_is_rejected() {
        let input = "# doc = d1\n# doc = d2\n0\ta\ta\tN\tN\t_\t_\t_\tBE\n";
        let err = parse_corpus(input.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("no sentences"), "{err}");
    }

    #[test]
    fn round_trip_is_identity_and_byte_stable() {
        let docs = parse_corpus(nested_sentence_file().as_bytes()).unwrap();
        let first = corpus_to_string(&docs);
        let reparsed = parse_corpus(first.as_bytes()).unwrap();
        assert_eq!(docs, reparsed);
        assert_eq!(first, corpus_to_string(&reparsed));
    }

    #[test]
    fn padded_columns_parse_and_normalize() {
        let input = "# doc = d1\n0\t a \ta\tN\tN\t_\t_\t_\tBE\n";
        let docs = parse_corpus(input.as_bytes()).unwrap();
        assert_eq!(docs[0].sentences[0].tokens()[0].form, "a");
        assert!(corpus_to_string(&docs).contains("0\ta\ta"));
    }

    #[test]
    fn unannotated_tokens_round_trip_as_placeholder() {
        let input = "# doc = d1\n0\ta\ta\tN\tN\t_\t_\t_\t_\n";
        let docs = parse_corpus(input.as_bytes()).unwrap();
        assert_eq!(docs[0].sentences[0].tokens()[0].gold_label, None);
        let out = corpus_to_string(&docs);
        assert!(out.ends_with("_\t_\t_\n\n"), "{out:?}");
    }

    #[test]
    fn nested_fixture_boundary_column_reads_as_expected() {
        let doc = nested_document();
        let labels = doc.sentences[0].gold_labels().unwrap();
        let codes: Vec<&str> = labels.iter().map(|l| l.code()).collect();
        assert_eq!(
            codes.join(" "),
            "B I I B I E B I I E I I I I I E",
            "hand-bracketed nested example"
        );
    }

    #[test]
    fn stats_on_nested_fixture() {
        let doc = nested_document();
        let stats = corpus_stats(std::slice::from_ref(&doc)).unwrap();
        assert_eq!(stats.tokens, 16);
        assert_eq!(stats.sentences, 1);
        assert_eq!(stats.segments, 3);
        assert_eq!(stats.nested_segments, 2);
        assert!((stats.nested_proportion() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(stats.label_counts.iter().sum::<u64>(), stats.tokens);
    }

    #[test]
    fn stats_on_single_token_segment() {
        let input = "# doc = d1\n0\ta\ta\tN\tN\t_\t_\t_\tBE\n";
        let docs = parse_corpus(input.as_bytes()).unwrap();
        let stats = corpus_stats(&docs).unwrap();
        assert_eq!(stats.segments, 1);
        assert_eq!(stats.nested_segments, 0);
        assert_eq!(stats.nested_proportion(), 0.0);
    }

    #[test]
    fn stats_requires_annotation() {
        let input = "# doc = d1\n0\ta\ta\tN\tN\t_\t_\t_\t_\n";
        let docs = parse_corpus(input.as_bytes()).unwrap();
        assert!(matches!(corpus_stats(&docs), Err(CorpusError::Unannotated)));
    }
}
