//! Documents, corpora, tokenization and stoplists.
//!
//! A [`Corpus`] is an ordered list of [`Document`]s, each holding one token
//! sequence per structural field. Corpora are read from a small JSON format in
//! which field values are either raw text (tokenized on load) or whitespace
//! separated `word_TAG` pairs produced by a part-of-speech tagger.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::io::{BufRead, Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The structural parts of an article that may carry tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldName {
    Title,
    Abstract,
    Fulltext,
    Citations,
    SectionHeaders,
    MeshMajor,
    MeshMinor,
}

impl FieldName {
    pub const ALL: [FieldName; 7] = [
        FieldName::Title,
        FieldName::Abstract,
        FieldName::Fulltext,
        FieldName::Citations,
        FieldName::SectionHeaders,
        FieldName::MeshMajor,
        FieldName::MeshMinor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FieldName::Title => "title",
            FieldName::Abstract => "abstract",
            FieldName::Fulltext => "fulltext",
            FieldName::Citations => "citations",
            FieldName::SectionHeaders => "section_headers",
            FieldName::MeshMajor => "mesh_major",
            FieldName::MeshMinor => "mesh_minor",
        }
    }
}

impl fmt::Display for FieldName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FieldName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FieldName::ALL
            .iter()
            .copied()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown field name `{s}`")))
    }
}

/// Position of a collection on the theory/practice axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Theory,
    Practice,
    #[default]
    Unlabeled,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Theory => "theory",
            Orientation::Practice => "practice",
            Orientation::Unlabeled => "unlabeled",
        }
    }

    /// Theory and practice swap; unlabeled stays unlabeled.
    pub fn swapped(self) -> Orientation {
        match self {
            Orientation::Theory => Orientation::Practice,
            Orientation::Practice => Orientation::Theory,
            Orientation::Unlabeled => Orientation::Unlabeled,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One occurrence of a term type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub tag: Option<String>,
    pub position: usize,
}

impl Token {
    pub fn new(surface: impl Into<String>, position: usize) -> Self {
        Token {
            surface: surface.into(),
            tag: None,
            position,
        }
    }

    pub fn tagged(surface: impl Into<String>, tag: impl Into<String>, position: usize) -> Self {
        Token {
            surface: surface.into(),
            tag: Some(tag.into()),
            position,
        }
    }
}

/// Builds a positioned token sequence from bare surfaces.
pub fn tokens_from_surfaces<S: AsRef<str>>(surfaces: &[S]) -> Vec<Token> {
    surfaces
        .iter()
        .enumerate()
        .map(|(i, s)| Token::new(s.as_ref(), i))
        .collect()
}

pub fn surfaces(tokens: &[Token]) -> Vec<&str> {
    tokens.iter().map(|t| t.surface.as_str()).collect()
}

/// A structured fulltext article.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    id: String,
    discipline: String,
    fields: BTreeMap<FieldName, Vec<Token>>,
}

impl Document {
    /// Creates a document, renumbering token positions within each field.
    ///
    /// Non-fulltext fields with no tokens are dropped; an empty or missing
    /// fulltext is a schema error.
    pub fn new(
        id: impl Into<String>,
        discipline: impl Into<String>,
        fields: BTreeMap<FieldName, Vec<Token>>,
    ) -> Result<Self> {
        let id = id.into();
        let mut kept = BTreeMap::new();
        for (name, mut tokens) in fields {
            if tokens.is_empty() {
                if name == FieldName::Fulltext {
                    return Err(Error::Schema {
                        doc_id: id,
                        field: name.to_string(),
                        message: "fulltext has no tokens".into(),
                    });
                }
                continue;
            }
            for (i, t) in tokens.iter_mut().enumerate() {
                if t.surface.is_empty() {
                    return Err(Error::Schema {
                        doc_id: id,
                        field: name.to_string(),
                        message: format!("empty surface at position {i}"),
                    });
                }
                t.position = i;
            }
            kept.insert(name, tokens);
        }
        if !kept.contains_key(&FieldName::Fulltext) {
            return Err(Error::Schema {
                doc_id: id,
                field: FieldName::Fulltext.to_string(),
                message: "fulltext is required".into(),
            });
        }
        Ok(Document {
            id,
            discipline: discipline.into(),
            fields: kept,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn discipline(&self) -> &str {
        &self.discipline
    }

    pub fn field(&self, name: FieldName) -> Option<&[Token]> {
        self.fields.get(&name).map(Vec::as_slice)
    }

    pub fn fulltext(&self) -> &[Token] {
        &self.fields[&FieldName::Fulltext]
    }

    pub fn fields(&self) -> impl Iterator<Item = (FieldName, &[Token])> {
        self.fields.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn has_field(&self, name: FieldName) -> bool {
        self.fields.contains_key(&name)
    }

    /// True when every token of every field carries a tag.
    pub fn is_tagged(&self) -> bool {
        self.fields.values().flatten().all(|t| t.tag.is_some())
    }

    /// Returns a copy with every tag passed through `f`.
    pub fn map_tags(&self, mut f: impl FnMut(&str) -> String) -> Document {
        let fields = self
            .fields
            .iter()
            .map(|(k, toks)| {
                let toks = toks
                    .iter()
                    .map(|t| Token {
                        surface: t.surface.clone(),
                        tag: t.tag.as_deref().map(&mut f),
                        position: t.position,
                    })
                    .collect();
                (*k, toks)
            })
            .collect();
        Document {
            id: self.id.clone(),
            discipline: self.discipline.clone(),
            fields,
        }
    }
}

/// Which documents of a corpus take part in an analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subset {
    #[default]
    All,
    /// 0-based even indices.
    Even,
    Odd,
}

impl FromStr for Subset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Subset::All),
            "even" => Ok(Subset::Even),
            "odd" => Ok(Subset::Odd),
            other => Err(Error::Malformed(format!("unknown subset `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    name: String,
    orientation: Orientation,
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new(
        name: impl Into<String>,
        orientation: Orientation,
        documents: Vec<Document>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for d in &documents {
            if !seen.insert(d.id.as_str()) {
                return Err(Error::DuplicateId(d.id.clone()));
            }
        }
        Ok(Corpus {
            name: name.into(),
            orientation,
            documents,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn subset(&self, subset: Subset) -> Corpus {
        let documents = match subset {
            Subset::All => self.documents.clone(),
            Subset::Even => self.documents.iter().step_by(2).cloned().collect(),
            Subset::Odd => self.documents.iter().skip(1).step_by(2).cloned().collect(),
        };
        Corpus {
            name: self.name.clone(),
            orientation: self.orientation,
            documents,
        }
    }

    /// Concatenates several corpora into one. Document ids are prefixed with
    /// their corpus name so that ids stay unique.
    pub fn combine(name: impl Into<String>, parts: &[&Corpus]) -> Result<Corpus> {
        let documents = parts
            .iter()
            .flat_map(|c| {
                c.documents.iter().map(move |d| Document {
                    id: format!("{}/{}", c.name, d.id),
                    discipline: d.discipline.clone(),
                    fields: d.fields.clone(),
                })
            })
            .collect();
        Corpus::new(name, Orientation::Unlabeled, documents)
    }

    pub fn is_tagged(&self) -> bool {
        self.documents.iter().all(Document::is_tagged)
    }

    pub(crate) fn require_non_empty(&self) -> Result<()> {
        if self.documents.is_empty() {
            Err(Error::EmptyCorpus(self.name.clone()))
        } else {
            Ok(())
        }
    }
}

/// Tokenizer switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizePolicy {
    /// Keep tokens made only of digits.
    pub keep_digits: bool,
}

impl Default for TokenizePolicy {
    fn default() -> Self {
        TokenizePolicy { keep_digits: true }
    }
}

fn is_joiner(c: char) -> bool {
    c == '-' || c == '\''
}

/// Splits raw text into lowercase term surfaces.
///
/// Text is lowercased, then split at every character that is neither
/// alphanumeric nor an internal joiner (hyphen, apostrophe). Joiners at the
/// edges of a piece are trimmed, so `--well-known'` becomes `well-known`.
pub fn tokenize(raw: &str, policy: TokenizePolicy) -> Vec<String> {
    let lowered = raw.to_lowercase();
    lowered
        .split(|c: char| !(c.is_alphanumeric() || is_joiner(c)))
        .map(|piece| piece.trim_matches(is_joiner))
        .filter(|piece| !piece.is_empty())
        .filter(|piece| policy.keep_digits || !piece.chars().all(char::is_numeric))
        .map(str::to_owned)
        .collect()
}

/// A set of normalized term types.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stoplist {
    terms: BTreeSet<String>,
}

const ENGLISH_STOPWORDS: &str = include_str!("../data/stoplist_en.txt");

impl Stoplist {
    pub fn new<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let policy = TokenizePolicy::default();
        Stoplist {
            terms: terms
                .into_iter()
                .flat_map(|t| tokenize(t.as_ref(), policy))
                .collect(),
        }
    }

    /// Reads a one-term-per-line list.
    pub fn from_reader(reader: impl BufRead) -> Result<Self> {
        Ok(Stoplist {
            terms: read_term_list(reader, TokenizePolicy::default())?,
        })
    }

    /// The bundled English function-word list.
    pub fn english() -> Self {
        Stoplist::from_reader(ENGLISH_STOPWORDS.as_bytes()).expect("bundled stoplist is valid")
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeSet<String> {
        &self.terms
    }
}

/// Reads a term file: one term per line, `#` starts a comment line.
pub fn read_term_list(reader: impl BufRead, policy: TokenizePolicy) -> Result<BTreeSet<String>> {
    let mut terms = BTreeSet::new();
    for line in reader.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        terms.extend(tokenize(line, policy));
    }
    Ok(terms)
}

pub fn remove_stopwords(tokens: &[Token], stoplist: &Stoplist) -> Vec<Token> {
    tokens
        .iter()
        .filter(|t| !stoplist.contains(&t.surface))
        .cloned()
        .collect()
}

/// How field values in a corpus file are encoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorpusFormat {
    /// Raw text, tokenized on load.
    #[default]
    Json,
    /// Whitespace separated `word_TAG` pairs.
    PretaggedJson,
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(CorpusFormat::Json),
            "pretagged-json" | "pretagged" => Ok(CorpusFormat::PretaggedJson),
            other => Err(Error::Malformed(format!("unknown corpus format `{other}`"))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct RawCorpus {
    name: String,
    #[serde(default)]
    orientation: Orientation,
    documents: Vec<RawDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RawDocument {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    discipline: Option<String>,
    fields: BTreeMap<String, String>,
}

/// Parses one `word_TAG` item. The separator is the last underscore not
/// preceded by a backslash; `\_` and `\\` are unescaped in the word.
pub fn parse_tagged_item(item: &str) -> Option<(String, String)> {
    let mut word = String::new();
    let mut split_at = None;
    let mut chars = item.char_indices().peekable();
    let mut word_len_at_split = 0;
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => {
                if let Some(&(_, next)) = chars.peek() {
                    if next == '_' || next == '\\' {
                        word.push(next);
                        chars.next();
                        continue;
                    }
                }
                word.push(c);
            }
            '_' => {
                split_at = Some(i);
                word_len_at_split = word.len();
                word.push('_');
            }
            _ => word.push(c),
        }
    }
    let at = split_at?;
    let tag = &item[at + 1..];
    if tag.is_empty() {
        return None;
    }
    word.truncate(word_len_at_split);
    Some((word, tag.to_string()))
}

pub fn escape_tagged_word(word: &str) -> String {
    let mut out = String::with_capacity(word.len());
    for c in word.chars() {
        if c == '\\' || c == '_' {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn parse_pretagged_field(doc_id: &str, field: FieldName, text: &str) -> Result<Vec<Token>> {
    text.split_whitespace()
        .enumerate()
        .map(|(i, item)| {
            let (word, tag) = parse_tagged_item(item).ok_or_else(|| Error::Schema {
                doc_id: doc_id.to_string(),
                field: field.to_string(),
                message: format!("item `{item}` is not a word_TAG pair"),
            })?;
            let surface = word.to_lowercase();
            if surface.is_empty() {
                return Err(Error::Schema {
                    doc_id: doc_id.to_string(),
                    field: field.to_string(),
                    message: format!("item `{item}` has an empty word"),
                });
            }
            Ok(Token::tagged(surface, tag, i))
        })
        .collect()
}

/// Reads a corpus in the JSON interchange format.
pub fn load_corpus(
    source: impl Read,
    format: CorpusFormat,
    policy: TokenizePolicy,
) -> Result<Corpus> {
    let raw: RawCorpus =
        serde_json::from_reader(source).map_err(|e| Error::Malformed(e.to_string()))?;
    let mut documents = Vec::with_capacity(raw.documents.len());
    for rd in raw.documents {
        let mut fields = BTreeMap::new();
        for (name, text) in &rd.fields {
            let field: FieldName = name.parse().map_err(|_| Error::Schema {
                doc_id: rd.id.clone(),
                field: name.clone(),
                message: "not a recognized field name".into(),
            })?;
            let tokens = match format {
                CorpusFormat::Json => tokenize(text, policy)
                    .into_iter()
                    .enumerate()
                    .map(|(i, s)| Token::new(s, i))
                    .collect(),
                CorpusFormat::PretaggedJson => parse_pretagged_field(&rd.id, field, text)?,
            };
            fields.insert(field, tokens);
        }
        let discipline = rd.discipline.unwrap_or_else(|| raw.name.clone());
        documents.push(Document::new(rd.id, discipline, fields)?);
    }
    Corpus::new(raw.name, raw.orientation, documents)
}

/// Writes a corpus in the JSON interchange format. With
/// [`CorpusFormat::PretaggedJson`] every token must be tagged.
pub fn write_corpus(corpus: &Corpus, format: CorpusFormat, sink: impl Write) -> Result<()> {
    let mut documents = Vec::with_capacity(corpus.len());
    for d in corpus.documents() {
        let mut fields = BTreeMap::new();
        for (name, tokens) in d.fields() {
            let parts: Vec<String> = tokens
                .iter()
                .map(|t| match format {
                    CorpusFormat::Json => Ok(t.surface.clone()),
                    CorpusFormat::PretaggedJson => t
                        .tag
                        .as_ref()
                        .map(|tag| format!("{}_{}", escape_tagged_word(&t.surface), tag))
                        .ok_or_else(|| Error::Untagged {
                            doc_id: d.id().to_string(),
                            field: name.to_string(),
                            position: t.position,
                        }),
                })
                .collect::<Result<_>>()?;
            fields.insert(name.as_str().to_string(), parts.join(" "));
        }
        documents.push(RawDocument {
            id: d.id().to_string(),
            discipline: (d.discipline() != corpus.name()).then(|| d.discipline().to_string()),
            fields,
        });
    }
    let raw = RawCorpus {
        name: corpus.name().to_string(),
        orientation: corpus.orientation(),
        documents,
    };
    serde_json::to_writer_pretty(sink, &raw)?;
    Ok(())
}

/// Per-field averages over the documents possessing the field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldCensus {
    pub field: FieldName,
    pub documents: usize,
    pub mean_tokens: f64,
    pub mean_types: f64,
}

pub fn type_count(tokens: &[Token]) -> usize {
    tokens
        .iter()
        .map(|t| t.surface.as_str())
        .collect::<HashSet<_>>()
        .len()
}

pub fn field_census(corpus: &Corpus) -> Result<Vec<FieldCensus>> {
    corpus.require_non_empty()?;
    let mut acc: BTreeMap<FieldName, (usize, usize, usize)> = BTreeMap::new();
    for d in corpus.documents() {
        for (name, tokens) in d.fields() {
            let e = acc.entry(name).or_default();
            e.0 += 1;
            e.1 += tokens.len();
            e.2 += type_count(tokens);
        }
    }
    Ok(acc
        .into_iter()
        .map(|(field, (docs, toks, types))| FieldCensus {
            field,
            documents: docs,
            mean_tokens: toks as f64 / docs as f64,
            mean_types: types as f64 / docs as f64,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, fields: &[(FieldName, &[&str])]) -> Document {
        let map = fields
            .iter()
            .map(|(f, s)| (*f, tokens_from_surfaces(s)))
            .collect();
        Document::new(id, "test", map).unwrap()
    }

    #[test]
    fn tokenize_examples() {
        let p = TokenizePolicy::default();
        assert_eq!(
            tokenize("Cystic Fibrosis, treated.", p),
            ["cystic", "fibrosis", "treated"]
        );
        assert!(tokenize("", p).is_empty());
        assert_eq!(tokenize("n 2", p), ["n", "2"]);
        assert_eq!(
            tokenize("n 2", TokenizePolicy { keep_digits: false }),
            ["n"]
        );
    }

    #[test]
    fn tokenize_keeps_internal_hyphens() {
        let p = TokenizePolicy::default();
        assert_eq!(tokenize("--Well-known' (x-ray)", p), ["well-known", "x-ray"]);
        assert_eq!(tokenize("ÉCOLE Straße", p), ["école", "straße"]);
    }

    #[test]
    fn load_one_document() {
        let json = r#"{"name": "cf", "documents": [
            {"id": "d1", "fields": {"title": "Cystic fibrosis", "fulltext": "The lungs were clear."}}
        ]}"#;
        let c = load_corpus(json.as_bytes(), CorpusFormat::Json, TokenizePolicy::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.orientation(), Orientation::Unlabeled);
        let d = &c.documents()[0];
        assert_eq!(d.fields().count(), 2);
        assert_eq!(surfaces(d.field(FieldName::Title).unwrap()), ["cystic", "fibrosis"]);
        assert_eq!(d.discipline(), "cf");
    }

    #[test]
    fn load_pretagged() {
        let json = r#"{"name": "x", "orientation": "theory", "documents": [
            {"id": "d1", "fields": {"fulltext": "The_DT boy_NN a\\_b_NN ,_,"}}
        ]}"#;
        let c = load_corpus(json.as_bytes(), CorpusFormat::PretaggedJson, TokenizePolicy::default())
            .unwrap();
        let ft = c.documents()[0].fulltext();
        assert_eq!(ft[1], Token::tagged("boy", "NN", 1));
        assert_eq!(ft[0].surface, "the");
        assert_eq!(ft[2].surface, "a_b");
        assert_eq!(ft[3], Token::tagged(",", ",", 3));
        assert_eq!(c.orientation(), Orientation::Theory);
    }

    #[test]
    fn unknown_field_is_schema_error() {
        let json = r#"{"name": "x", "documents": [{"id": "d7", "fields": {"fulltext": "a b", "body": "c"}}]}"#;
        let err = load_corpus(json.as_bytes(), CorpusFormat::Json, TokenizePolicy::default())
            .unwrap_err();
        match err {
            Error::Schema { doc_id, field, .. } => {
                assert_eq!(doc_id, "d7");
                assert_eq!(field, "body");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_tag_is_schema_error() {
        let json = r#"{"name": "x", "documents": [{"id": "d1", "fields": {"fulltext": "boy_NN girl"}}]}"#;
        assert!(matches!(
            load_corpus(json.as_bytes(), CorpusFormat::PretaggedJson, TokenizePolicy::default()),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let json = r#"{"name": "x", "documents": [
            {"id": "d1", "fields": {"fulltext": "a"}},
            {"id": "d1", "fields": {"fulltext": "b"}}]}"#;
        assert!(matches!(
            load_corpus(json.as_bytes(), CorpusFormat::Json, TokenizePolicy::default()),
            Err(Error::DuplicateId(id)) if id == "d1"
        ));
    }

    #[test]
    fn fulltext_required() {
        let json = r#"{"name": "x", "documents": [{"id": "d1", "fields": {"title": "a"}}]}"#;
        assert!(load_corpus(json.as_bytes(), CorpusFormat::Json, TokenizePolicy::default()).is_err());
        let json = r#"{"name": "x", "documents": [{"id": "d1", "fields": {"fulltext": "..."}}]}"#;
        assert!(load_corpus(json.as_bytes(), CorpusFormat::Json, TokenizePolicy::default()).is_err());
    }

    #[test]
    fn stopword_removal() {
        let toks = tokens_from_surfaces(&["the", "cystic", "and", "fibrosis"]);
        let stop = Stoplist::new(["the", "and"]);
        assert_eq!(surfaces(&remove_stopwords(&toks, &stop)), ["cystic", "fibrosis"]);
        assert_eq!(remove_stopwords(&toks, &Stoplist::default()), toks);
        let all = Stoplist::new(["the", "cystic", "and", "fibrosis"]);
        assert!(remove_stopwords(&toks, &all).is_empty());
    }

    #[test]
    fn term_list_comments_and_duplicates() {
        let src = "# medical terms\ncystic\nfibrosis\ncystic\n\n";
        let terms = read_term_list(src.as_bytes(), TokenizePolicy::default()).unwrap();
        assert_eq!(terms.len(), 2);
        assert!(Stoplist::english().contains("the"));
    }

    #[test]
    fn census_means() {
        let c = Corpus::new(
            "c",
            Orientation::Unlabeled,
            vec![
                doc("a", &[(FieldName::Title, &["w", "x", "y", "z"]), (FieldName::Fulltext, &["a", "a", "b"])]),
                doc("b", &[(FieldName::Title, &["p", "q", "r", "s", "t", "u"]), (FieldName::Fulltext, &["a", "a", "b"])]),
            ],
        )
        .unwrap();
        let census = field_census(&c).unwrap();
        let title = census.iter().find(|f| f.field == FieldName::Title).unwrap();
        assert_eq!((title.mean_tokens, title.mean_types), (5.0, 5.0));
        let full = census.iter().find(|f| f.field == FieldName::Fulltext).unwrap();
        assert_eq!((full.mean_tokens, full.mean_types), (3.0, 2.0));
        let empty = Corpus::new("e", Orientation::Unlabeled, vec![]).unwrap();
        assert!(matches!(field_census(&empty), Err(Error::EmptyCorpus(_))));
    }

    #[test]
    fn even_odd_subsets() {
        let docs = (0..5)
            .map(|i| doc(&format!("d{i}"), &[(FieldName::Fulltext, &["a"])]))
            .collect();
        let c = Corpus::new("c", Orientation::Unlabeled, docs).unwrap();
        let even: Vec<_> = c.subset(Subset::Even).documents().iter().map(|d| d.id().to_string()).collect();
        let odd: Vec<_> = c.subset(Subset::Odd).documents().iter().map(|d| d.id().to_string()).collect();
        assert_eq!(even, ["d0", "d2", "d4"]);
        assert_eq!(odd, ["d1", "d3"]);
    }
}
