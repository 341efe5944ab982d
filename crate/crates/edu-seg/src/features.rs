//! Per-token sparse indicator features.
//!
//! Every feature is a named string of the form `template[offset]=value`
//! for windowed templates (e.g. `pos[-1]=DET`) or `template=value` for
//! token-anchored ones. The templates, for a token at position `i`:
//!
//! * `lem`/`pos`/`cat` — lemma, part of speech, and grammatical category,
//!   replicated for every offset in −3..+3; out-of-sentence offsets emit a
//!   single `pad[o]=1` feature instead.
//! * `distL`/`distR` — relative distance from each sentence boundary,
//!   quantized to 1–100, also replicated across the ±3 window.
//! * `chunkStart`/`chunkEnd` — whether the token coincides with the start
//!   or end of its innermost chunk, replicated across the window.
//! * `markerStart`/`markerIn` — the token starts / is covered by a
//!   discourse-marker match (longest match on lowercase surface forms,
//!   never crossing the sentence).
//! * `speechVerb` — the lemma is a known speech-report verb.
//! * `depPath` — the outgoing dependency relation path toward the root,
//!   truncated at length 3, plus every shorter prefix.
//! * `depIn` — the relation label of each inbound dependency.
//! * `proj:T:P` — for each projection type `T` in {NP, VP, PP} and
//!   position `P` in {start, middle, end}, how many levels of the chunk
//!   path put the token there, bucketed to `0`/`1`/`2+`. Singleton chunks
//!   count as both start and end.
//! * `chunkSeq` — the chunk tag sequence from innermost to outermost.
//! * `lemNg`/`posNg`/`chunkNg` — every lemma / POS / innermost-chunk-tag
//!   n-gram with 2 ≤ n ≤ 6 that contains the token and stays inside the
//!   sentence. The token's offset within the window and the window size
//!   are part of the name (`lemNg[-1:3]=a_b_c`), so each window is a
//!   distinct feature.

use std::collections::HashMap;
use std::collections::HashSet;
use std::io::BufRead;

use thiserror::Error;

use crate::corpus::{ChunkPosition, Sentence, Token};

pub type FeatureId = u32;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("token index {index} out of range for sentence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("lexicon line {line}: {msg}")]
    Lexicon { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A set of active indicator features, stored as sorted unique ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatureVector {
    ids: Vec<FeatureId>,
}

impl FeatureVector {
    pub fn empty() -> FeatureVector {
        FeatureVector { ids: Vec::new() }
    }

    pub fn from_ids(mut ids: Vec<FeatureId>) -> FeatureVector {
        ids.sort_unstable();
        ids.dedup();
        FeatureVector { ids }
    }

    pub fn ids(&self) -> &[FeatureId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// The global feature name ↔ id registry. Ids are dense, assigned in
/// first-registration order. Once frozen, unknown names are dropped
/// instead of growing the space.
#[derive(Debug, Clone, Default)]
pub struct FeatureSpace {
    names: Vec<String>,
    index: HashMap<String, FeatureId>,
    frozen: bool,
}

impl FeatureSpace {
    pub fn new() -> FeatureSpace {
        FeatureSpace::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn id(&self, name: &str) -> Option<FeatureId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: FeatureId) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    /// Iterates names in id order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    /// Returns the id for `name`, registering it if the space is still
    /// growing. Frozen spaces return `None` for unknown names.
    pub fn intern(&mut self, name: &str) -> Option<FeatureId> {
        if let Some(id) = self.index.get(name) {
            return Some(*id);
        }
        if self.frozen {
            return None;
        }
        let id = self.names.len() as FeatureId;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Some(id)
    }
}

/// Marker and speech-verb lists. Markers are lowercase token sequences;
/// speech verbs are lowercase lemmas.
#[derive(Debug, Clone, Default)]
pub struct Lexicons {
    markers: Vec<Vec<String>>,
    speech_verbs: HashSet<String>,
}

impl Lexicons {
    pub fn empty() -> Lexicons {
        Lexicons::default()
    }

    /// Builds lexicons from raw entries, lowercasing and deduplicating.
    /// Empty marker sequences are rejected.
    pub fn new(
        markers: impl IntoIterator<Item = Vec<String>>,
        speech_verbs: impl IntoIterator<Item = String>,
    ) -> Result<Lexicons, FeatureError> {
        let mut seen = HashSet::new();
        let mut out_markers = Vec::new();
        for marker in markers {
            if marker.is_empty() || marker.iter().any(String::is_empty) {
                return Err(FeatureError::Lexicon {
                    line: 0,
                    msg: "empty marker sequence".to_string(),
                });
            }
            let marker: Vec<String> = marker.into_iter().map(|t| t.to_lowercase()).collect();
            if seen.insert(marker.clone()) {
                out_markers.push(marker);
            }
        }
        let speech_verbs = speech_verbs.into_iter().map(|v| v.to_lowercase()).collect();
        Ok(Lexicons { markers: out_markers, speech_verbs })
    }

    /// Reads a marker file: one marker per line, tokens space-separated,
    /// `#` lines and blank lines ignored.
    pub fn parse_markers<R: BufRead>(reader: R) -> Result<Vec<Vec<String>>, FeatureError> {
        let mut markers = Vec::new();
        for (no, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            markers.push(line.split_whitespace().map(|t| t.to_lowercase()).collect());
        }
        Ok(markers)
    }

    /// Reads a verb-lemma file in the same line format as markers.
    pub fn parse_verbs<R: BufRead>(reader: R) -> Result<Vec<String>, FeatureError> {
        Ok(Self::parse_markers(reader)?.into_iter().flatten().collect())
    }

    pub fn markers(&self) -> &[Vec<String>] {
        &self.markers
    }

    pub fn is_speech_verb(&self, lemma: &str) -> bool {
        self.speech_verbs.contains(&lemma.to_lowercase())
    }

    /// Length of the longest marker matching the lowercase forms at `at`,
    /// if any.
    fn longest_match(&self, forms: &[String], at: usize) -> Option<usize> {
        self.markers
            .iter()
            .filter(|m| {
                m.len() <= forms.len() - at && m.iter().zip(&forms[at..]).all(|(a, b)| a == b)
            })
            .map(Vec::len)
            .max()
    }
}

fn quantized_positions(index: usize, len: usize) -> (u32, u32) {
    let n = len as u64;
    let left = (100 * (index as u64 + 1)).div_ceil(n);
    let right = (100 * (n - index as u64)).div_ceil(n);
    (left as u32, right as u32)
}

fn bucket(count: usize) -> &'static str {
    match count {
        0 => "0",
        1 => "1",
        _ => "2+",
    }
}

fn innermost(token: &Token) -> Option<&crate::corpus::ChunkElement> {
    token.chunk_path.first()
}

/// Walks every feature template for the token at `index` and hands each
/// feature name to `emit`, in a fixed deterministic order.
fn emit_feature_names(
    sentence: &Sentence,
    index: usize,
    lexicons: &Lexicons,
    mut emit: impl FnMut(&str),
) {
    let tokens = sentence.tokens();
    let n = tokens.len();
    let token = &tokens[index];

    // (l) windowed copies of the token-level templates, offset in the name.
    for offset in -3i32..=3 {
        let pos = index as i64 + offset as i64;
        if pos < 0 || pos >= n as i64 {
            emit(&format!("pad[{offset}]=1"));
            continue;
        }
        let t = &tokens[pos as usize];
        emit(&format!("lem[{offset}]={}", t.lemma));
        emit(&format!("pos[{offset}]={}", t.pos));
        emit(&format!("cat[{offset}]={}", t.cat));
        let (left, right) = quantized_positions(pos as usize, n);
        emit(&format!("distL[{offset}]={left}"));
        emit(&format!("distR[{offset}]={right}"));
        if let Some(inner) = innermost(t) {
            if matches!(inner.position, ChunkPosition::Begin | ChunkPosition::Singleton) {
                emit(&format!("chunkStart[{offset}]=1"));
            }
            if matches!(inner.position, ChunkPosition::End | ChunkPosition::Singleton) {
                emit(&format!("chunkEnd[{offset}]=1"));
            }
        }
    }

    // (b) discourse-marker membership on lowercase surface forms.
    let forms: Vec<String> = tokens.iter().map(|t| t.form.to_lowercase()).collect();
    if lexicons.longest_match(&forms, index).is_some() {
        emit("markerStart=1");
    }
    let covered = (0..=index).any(|start| {
        lexicons.longest_match(&forms, start).is_some_and(|len| start + len > index)
    });
    if covered {
        emit("markerIn=1");
    }

    // (c) indirect speech report verbs.
    if lexicons.is_speech_verb(&token.lemma) {
        emit("speechVerb=1");
    }

    // (d) dependency path toward the root, prefixes up to length 3.
    let mut path = String::new();
    let mut cur = token;
    for depth in 0..3 {
        let Some(rel) = cur.dep_rel.as_deref() else { break };
        if depth > 0 {
            path.push('>');
        }
        path.push_str(rel);
        emit(&format!("depPath={path}"));
        match cur.head {
            Some(h) => cur = &tokens[h],
            None => break,
        }
    }

    // (e) inbound dependency relations.
    for t in tokens {
        if t.head == Some(index) {
            if let Some(rel) = t.dep_rel.as_deref() {
                emit(&format!("depIn={rel}"));
            }
        }
    }

    // (f) projection position counts over the whole chunk path.
    for proj in ["NP", "VP", "PP"] {
        let mut starts = 0;
        let mut middles = 0;
        let mut ends = 0;
        for elem in &token.chunk_path {
            if elem.tag != proj {
                continue;
            }
            match elem.position {
                ChunkPosition::Begin => starts += 1,
                ChunkPosition::Inside => middles += 1,
                ChunkPosition::End => ends += 1,
                ChunkPosition::Singleton => {
                    starts += 1;
                    ends += 1;
                }
            }
        }
        emit(&format!("proj:{proj}:start={}", bucket(starts)));
        emit(&format!("proj:{proj}:middle={}", bucket(middles)));
        emit(&format!("proj:{proj}:end={}", bucket(ends)));
    }

    // (j) outward chunk tag sequence.
    if !token.chunk_path.is_empty() {
        let seq: Vec<&str> = token.chunk_path.iter().map(|e| e.tag.as_str()).collect();
        emit(&format!("chunkSeq={}", seq.join(">")));
    }

    // (k) all n-grams (2..=6) containing the token, inside the sentence.
    let chunk_tag = |t: &Token| innermost(t).map_or("_", |e| e.tag.as_str());
    for size in 2..=6usize {
        if size > n {
            break;
        }
        let lo = index.saturating_sub(size - 1);
        let hi = index.min(n - size);
        for start in lo..=hi {
            let window = &tokens[start..start + size];
            let offset = start as i64 - index as i64;
            let lemmas: Vec<&str> = window.iter().map(|t| t.lemma.as_str()).collect();
            emit(&format!("lemNg[{offset}:{size}]={}", lemmas.join("_")));
            let poss: Vec<&str> = window.iter().map(|t| t.pos.as_str()).collect();
            emit(&format!("posNg[{offset}:{size}]={}", poss.join("_")));
            let chunks: Vec<&str> = window.iter().map(|t| chunk_tag(t)).collect();
            emit(&format!("chunkNg[{offset}:{size}]={}", chunks.join("_")));
        }
    }
}

/// Extracts the feature vector for one token against a fixed space.
/// Names absent from the space are silently dropped.
pub fn extract_features(
    sentence: &Sentence,
    index: usize,
    lexicons: &Lexicons,
    space: &FeatureSpace,
) -> Result<FeatureVector, FeatureError> {
    if index >= sentence.len() {
        return Err(FeatureError::IndexOutOfRange { index, len: sentence.len() });
    }
    let mut ids = Vec::new();
    emit_feature_names(sentence, index, lexicons, |name| {
        if let Some(id) = space.id(name) {
            ids.push(id);
        }
    });
    Ok(FeatureVector::from_ids(ids))
}

/// Like [`extract_features`], but registers unseen names while the space
/// is unfrozen. On a frozen space this behaves exactly like
/// [`extract_features`].
pub fn extract_and_register(
    sentence: &Sentence,
    index: usize,
    lexicons: &Lexicons,
    space: &mut FeatureSpace,
) -> Result<FeatureVector, FeatureError> {
    if index >= sentence.len() {
        return Err(FeatureError::IndexOutOfRange { index, len: sentence.len() });
    }
    let mut ids = Vec::new();
    emit_feature_names(sentence, index, lexicons, |name| {
        if let Some(id) = space.intern(name) {
            ids.push(id);
        }
    });
    Ok(FeatureVector::from_ids(ids))
}

/// Builds a frozen feature space containing every feature name occurring
/// at least `min_count` times across the given sentences. Ids follow
/// first-occurrence order.
pub fn build_feature_space(
    sentences: &[&Sentence],
    lexicons: &Lexicons,
    min_count: u32,
) -> FeatureSpace {
    let min_count = min_count.max(1);
    let mut order: Vec<String> = Vec::new();
    let mut counts: HashMap<String, u32> = HashMap::new();
    for sentence in sentences {
        for index in 0..sentence.len() {
            // A name may fire once per token at most (names encode their
            // window), so counting per emission equals counting per vector.
            emit_feature_names(sentence, index, lexicons, |name| {
                match counts.get_mut(name) {
                    Some(c) => *c += 1,
                    None => {
                        counts.insert(name.to_string(), 1);
                        order.push(name.to_string());
                    }
                }
            });
        }
    }
    let mut space = FeatureSpace::new();
    for name in order {
        if counts[&name] >= min_count {
            space.intern(&name);
        }
    }
    space.freeze();
    space
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::test_fixtures::nested_document;
    use crate::corpus::{parse_corpus, BoundaryLabel, ChunkElement, Document, Token};

    fn simple_token(index: usize, form: &str, pos: &str) -> Token {
        Token {
            index,
            form: form.to_string(),
            lemma: form.to_string(),
            pos: pos.to_string(),
            cat: pos.to_string(),
            chunk_path: Vec::new(),
            head: if index == 0 { None } else { Some(index - 1) },
            dep_rel: if index == 0 { None } else { Some("dep".to_string()) },
            gold_label: Some(BoundaryLabel::Inside),
        }
    }

    fn sentence_of(forms: &[&str]) -> Sentence {
        Sentence::new(
            forms.iter().enumerate().map(|(i, f)| simple_token(i, f, "N")).collect(),
        )
        .unwrap()
    }

    fn names_for(sentence: &Sentence, index: usize, lexicons: &Lexicons) -> Vec<String> {
        let mut names = Vec::new();
        emit_feature_names(sentence, index, lexicons, |n| names.push(n.to_string()));
        names
    }

    #[test]
    fn marker_features_absent_without_match() {
        let doc = nested_document();
        let lexicons =
            Lexicons::new([vec!["donc".to_string()]], std::iter::empty::<String>()).unwrap();
        // "mondialement" at index 3 is no marker, but its lemma fires.
        let names = names_for(&doc.sentences[0], 3, &lexicons);
        assert!(names.contains(&"lem[0]=mondialement".to_string()));
        assert!(!names.contains(&"markerStart=1".to_string()));
        assert!(!names.contains(&"markerIn=1".to_string()));
    }

    #[test]
    fn one_token_marker_starts_and_covers_itself() {
        let doc = nested_document();
        let lexicons =
            Lexicons::new([vec!["donc".to_string()]], std::iter::empty::<String>()).unwrap();
        let names = names_for(&doc.sentences[0], 6, &lexicons);
        assert!(names.contains(&"markerStart=1".to_string()));
        assert!(names.contains(&"markerIn=1".to_string()));
    }

    #[test]
    fn multi_token_marker_covers_interior() {
        let sentence = sentence_of(&["a", "d'une", "part", "b"]);
        let lexicons = Lexicons::new(
            [vec!["d'une".to_string(), "part".to_string()]],
            std::iter::empty::<String>(),
        )
        .unwrap();
        let at_start = names_for(&sentence, 1, &lexicons);
        assert!(at_start.contains(&"markerStart=1".to_string()));
        assert!(at_start.contains(&"markerIn=1".to_string()));
        let inside = names_for(&sentence, 2, &lexicons);
        assert!(!inside.contains(&"markerStart=1".to_string()));
        assert!(inside.contains(&"markerIn=1".to_string()));
        let outside = names_for(&sentence, 3, &lexicons);
        assert!(!outside.contains(&"markerIn=1".to_string()));
    }

    #[test]
    fn single_token_sentence_pads_all_window_slots() {
        let sentence = sentence_of(&["seul"]);
        let names = names_for(&sentence, 0, &Lexicons::empty());
        assert!(names.contains(&"distL[0]=100".to_string()));
        assert!(names.contains(&"distR[0]=100".to_string()));
        for offset in [-3, -2, -1, 1, 2, 3] {
            assert!(names.contains(&format!("pad[{offset}]=1")), "missing pad[{offset}]");
        }
        // No n-gram fits in a one-token sentence.
        assert!(names.iter().all(|n| !n.contains("Ng[")));
    }

    #[test]
    fn speech_verb_fires_on_lemma() {
        let doc = nested_document();
        let lexicons = Lexicons::new(
            std::iter::empty::<Vec<String>>(),
            ["repérer".to_string()],
        )
        .unwrap();
        let names = names_for(&doc.sentences[0], 12, &lexicons);
        assert!(names.contains(&"speechVerb=1".to_string()));
    }

    #[test]
    fn dependency_path_prefixes() {
        // Fixture: 0 -det-> 1 -suj-> 12 (root).
        let doc = nested_document();
        let names = names_for(&doc.sentences[0], 0, &Lexicons::empty());
        assert!(names.contains(&"depPath=det".to_string()));
        assert!(names.contains(&"depPath=det>suj".to_string()));
        assert!(!names.iter().any(|n| n.starts_with("depPath=det>suj>")));
    }

    #[test]
    fn inbound_relations_and_projection_buckets() {
        let doc = nested_document();
        // Token 12 ("repérées") heads suj, mod, aux, ... dependents.
        let names = names_for(&doc.sentences[0], 12, &Lexicons::empty());
        assert!(names.contains(&"depIn=suj".to_string()));
        assert!(names.contains(&"depIn=aux".to_string()));
        assert!(names.contains(&"proj:VP:end=1".to_string()));
        assert!(names.contains(&"proj:NP:start=0".to_string()));

        // Token 15 closes both the inner NP and the outer PP.
        let names = names_for(&doc.sentences[0], 15, &Lexicons::empty());
        assert!(names.contains(&"proj:NP:end=1".to_string()));
        assert!(names.contains(&"proj:PP:end=1".to_string()));
        assert!(names.contains(&"chunkSeq=NP>PP".to_string()));
        assert!(names.contains(&"chunkEnd[0]=1".to_string()));
    }

    #[test]
    fn ngram_feature_count_matches_window_arithmetic() {
        for len in 1..=9usize {
            let forms: Vec<String> = (0..len).map(|i| format!("w{i}")).collect();
            let refs: Vec<&str> = forms.iter().map(String::as_str).collect();
            let sentence = sentence_of(&refs);
            for index in 0..len {
                let names = names_for(&sentence, index, &Lexicons::empty());
                let got = names.iter().filter(|n| n.contains("Ng[")).count();
                let mut expected = 0;
                for size in 2..=6usize {
                    if size > len {
                        continue;
                    }
                    let lo = index.saturating_sub(size - 1);
                    let hi = index.min(len - size);
                    expected += (hi - lo + 1) * 3;
                }
                assert_eq!(got, expected, "len={len} index={index}");
            }
        }
    }

    #[test]
    fn extraction_is_deterministic_and_never_duplicates() {
        let doc = nested_document();
        let sentence = &doc.sentences[0];
        let lexicons =
            Lexicons::new([vec!["donc".to_string()]], ["repérer".to_string()]).unwrap();
        for index in 0..sentence.len() {
            let a = names_for(sentence, index, &lexicons);
            let b = names_for(sentence, index, &lexicons);
            assert_eq!(a, b);
            let mut dedup = a.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), a.len(), "duplicate names at {index}: {a:?}");
        }
    }

    #[test]
    fn distant_token_edits_do_not_change_the_vector() {
        let forms: Vec<String> = (0..20).map(|i| format!("w{i}")).collect();
        let refs: Vec<&str> = forms.iter().map(String::as_str).collect();
        let base = sentence_of(&refs);
        let mut edited_tokens = base.tokens().to_vec();
        edited_tokens[19].form = "changed".to_string();
        edited_tokens[19].lemma = "changed".to_string();
        edited_tokens[19].pos = "V".to_string();
        let edited = Sentence::new(edited_tokens).unwrap();
        // Dependency features reach further; a chain tree keeps paths from
        // token 5 unaffected by token 19.
        let lexicons = Lexicons::new([vec!["w1".to_string()]], ["w2".to_string()]).unwrap();
        assert_eq!(
            names_for(&base, 5, &lexicons),
            names_for(&edited, 5, &lexicons)
        );
    }

    #[test]
    fn frozen_space_drops_unknown_names() {
        let sentence = sentence_of(&["a", "b"]);
        let mut space = FeatureSpace::new();
        let grown =
            extract_and_register(&sentence, 0, &Lexicons::empty(), &mut space).unwrap();
        assert_eq!(grown.len(), space.len());
        space.freeze();
        let other = sentence_of(&["x", "y"]);
        let dropped = extract_features(&other, 0, &Lexicons::empty(), &space).unwrap();
        assert!(dropped.len() < grown.len());
        assert_eq!(space.len(), grown.len(), "frozen space did not grow");
        for id in dropped.ids() {
            assert!(space.name(*id).is_some());
        }
    }

    #[test]
    fn out_of_range_index_errors() {
        let sentence = sentence_of(&["a"]);
        let err = extract_features(&sentence, 1, &Lexicons::empty(), &FeatureSpace::new());
        assert!(matches!(err, Err(FeatureError::IndexOutOfRange { index: 1, len: 1 })));
    }

    fn two_token_doc() -> Document {
        let input = "# doc = d1\n\
                     0\taa\taa\tN\tN\t_\t_\t_\tB\n\
                     1\tbb\tbb\tV\tV\t_\t0\tobj\tE\n";
        parse_corpus(input.as_bytes()).unwrap().remove(0)
    }

    #[test]
    fn space_with_min_count_one_is_the_name_union() {
        let doc = two_token_doc();
        let sentences: Vec<&Sentence> = doc.sentences.iter().collect();
        let space = build_feature_space(&sentences, &Lexicons::empty(), 1);
        let mut union: HashSet<String> = HashSet::new();
        for index in 0..2 {
            emit_feature_names(&doc.sentences[0], index, &Lexicons::empty(), |n| {
                union.insert(n.to_string());
            });
        }
        assert_eq!(space.len(), union.len());
        for name in &union {
            assert!(space.id(name).is_some(), "missing {name}");
        }
    }

    #[test]
    fn min_count_two_prunes_singletons() {
        let doc = two_token_doc();
        let sentences: Vec<&Sentence> = doc.sentences.iter().collect();
        let space = build_feature_space(&sentences, &Lexicons::empty(), 2);
        // lem[0]=aa occurs once (only at token 0); position features like
        // distL[0]=50 occur at token 0 only as well, but pad[3]=1 occurs at
        // both tokens.
        assert!(space.id("lem[0]=aa").is_none());
        assert!(space.id("pad[3]=1").is_some());
        // Everything kept really occurs at least twice.
        let mut counts: HashMap<String, u32> = HashMap::new();
        for index in 0..2 {
            emit_feature_names(&doc.sentences[0], index, &Lexicons::empty(), |n| {
                *counts.entry(n.to_string()).or_insert(0) += 1;
            });
        }
        for name in space.names() {
            assert!(counts[name] >= 2, "{name} kept with count {}", counts[name]);
        }
    }

    #[test]
    fn chunk_positions_map_to_projection_sides() {
        let mut token = simple_token(0, "x", "N");
        token.chunk_path = vec![
            ChunkElement::new("NP", ChunkPosition::Singleton),
            ChunkElement::new("PP", ChunkPosition::Inside),
        ];
        token.head = None;
        token.dep_rel = None;
        let sentence = Sentence::new(vec![token]).unwrap();
        let names = names_for(&sentence, 0, &Lexicons::empty());
        assert!(names.contains(&"proj:NP:start=1".to_string()));
        assert!(names.contains(&"proj:NP:end=1".to_string()));
        assert!(names.contains(&"proj:PP:middle=1".to_string()));
        assert!(names.contains(&"chunkStart[0]=1".to_string()));
        assert!(names.contains(&"chunkEnd[0]=1".to_string()));
        assert!(names.contains(&"chunkSeq=NP>PP".to_string()));
    }
}
