//! Special-term (S-term) sets and the document-frequency term weights used to
//! select them.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{read_term_list, Corpus, Document, FieldName, Stoplist, TokenizePolicy};
use crate::error::{Error, Result};

pub const DEFAULT_BI_CUTOFF: f64 = 5.0;
pub const DEFAULT_IDF_CUTOFF: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldMode {
    /// Each document uses the terms of its own field.
    PerDocument,
    /// The union of the field's terms over the whole corpus.
    Pooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightScheme {
    Bi,
    Idf,
}

impl WeightScheme {
    pub fn default_cutoff(self) -> f64 {
        match self {
            WeightScheme::Bi => DEFAULT_BI_CUTOFF,
            WeightScheme::Idf => DEFAULT_IDF_CUTOFF,
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightScheme::Bi => "bi",
            WeightScheme::Idf => "idf",
        })
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bi" => Ok(WeightScheme::Bi),
            "idf" => Ok(WeightScheme::Idf),
            other => Err(Error::Malformed(format!("unknown weight scheme `{other}`"))),
        }
    }
}

/// How an [`STermSet`] was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    Field { field: FieldName, mode: FieldMode },
    Dictionary { path: String },
    BiThreshold { cutoff: f64 },
    IdfThreshold { cutoff: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct STermSet {
    pub label: String,
    pub terms: BTreeSet<String>,
    pub recipe: Recipe,
    pub stoplist_applied: bool,
}

impl STermSet {
    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    /// An empty set cannot produce significant windows.
    pub fn is_usable(&self) -> bool {
        !self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn collect_terms<'a>(
    tokens: impl Iterator<Item = &'a str>,
    stoplist: Option<&Stoplist>,
) -> BTreeSet<String> {
    tokens
        .filter(|t| stoplist.is_none_or(|s| !s.contains(t)))
        .map(str::to_owned)
        .collect()
}

/// The distinct terms of one field of one document.
pub fn field_sterms(
    doc: &Document,
    field: FieldName,
    stoplist: Option<&Stoplist>,
) -> Result<STermSet> {
    let tokens = doc.field(field).ok_or_else(|| Error::MissingField {
        doc_id: doc.id().to_string(),
        field: field.to_string(),
    })?;
    Ok(STermSet {
        label: field.to_string(),
        terms: collect_terms(tokens.iter().map(|t| t.surface.as_str()), stoplist),
        recipe: Recipe::Field {
            field,
            mode: FieldMode::PerDocument,
        },
        stoplist_applied: stoplist.is_some(),
    })
}

/// The union of one field's terms over every document that has the field.
pub fn pooled_field_sterms(
    corpus: &Corpus,
    field: FieldName,
    stoplist: Option<&Stoplist>,
) -> Result<STermSet> {
    corpus.require_non_empty()?;
    let terms = collect_terms(
        corpus
            .documents()
            .iter()
            .filter_map(|d| d.field(field))
            .flatten()
            .map(|t| t.surface.as_str()),
        stoplist,
    );
    Ok(STermSet {
        label: format!("{field}-pooled"),
        terms,
        recipe: Recipe::Field {
            field,
            mode: FieldMode::Pooled,
        },
        stoplist_applied: stoplist.is_some(),
    })
}

/// Reads a subject dictionary (one term per line) as a corpus-wide S set.
pub fn dictionary_sterms(
    dictionary: impl BufRead,
    path: &str,
    stoplist: Option<&Stoplist>,
) -> Result<STermSet> {
    let terms = read_term_list(dictionary, TokenizePolicy::default())?;
    let terms = terms
        .into_iter()
        .filter(|t| stoplist.is_none_or(|s| !s.contains(t)))
        .collect();
    Ok(STermSet {
        label: "dictionary".into(),
        terms,
        recipe: Recipe::Dictionary {
            path: path.to_string(),
        },
        stoplist_applied: stoplist.is_some(),
    })
}

fn doc_terms(doc: &Document) -> BTreeSet<&str> {
    doc.fields()
        .flat_map(|(_, toks)| toks.iter().map(|t| t.surface.as_str()))
        .collect()
}

/// Number of documents in which any field contains `term`.
pub fn doc_frequency(term: &str, corpus: &Corpus) -> usize {
    corpus
        .documents()
        .iter()
        .filter(|d| d.fields().any(|(_, toks)| toks.iter().any(|t| t.surface == term)))
        .count()
}

/// Document frequency of every term observed in the corpus.
pub fn doc_frequencies(corpus: &Corpus) -> BTreeMap<String, usize> {
    let mut df = BTreeMap::new();
    for d in corpus.documents() {
        for term in doc_terms(d) {
            *df.entry(term.to_string()).or_insert(0) += 1;
        }
    }
    df
}

/// Additive smoothing of document probabilities: `(df + a) / (N + 2a)`.
///
/// The default `a = 0.5` keeps every estimate inside (0, 1); `a = 0` gives the
/// raw relative frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Smoothing {
    pub pseudo_count: f64,
}

impl Smoothing {
    pub const JEFFREYS: Smoothing = Smoothing { pseudo_count: 0.5 };
    pub const NONE: Smoothing = Smoothing { pseudo_count: 0.0 };

    pub fn probability(self, df: usize, n: usize) -> f64 {
        (df as f64 + self.pseudo_count) / (n as f64 + 2.0 * self.pseudo_count)
    }
}

impl Default for Smoothing {
    fn default() -> Self {
        Smoothing::JEFFREYS
    }
}

fn open_unit(x: f64) -> bool {
    x > 0.0 && x < 1.0
}

/// Binary independence weight in bits: log2 of the odds ratio of p to q.
pub fn bi_weight(p: f64, q: f64) -> Result<f64> {
    if !open_unit(p) || !open_unit(q) {
        return Err(Error::Domain(format!(
            "bi weight needs p, q in (0, 1), got p={p}, q={q}"
        )));
    }
    Ok(((p / (1.0 - p)) / (q / (1.0 - q))).log2())
}

/// Inverse document frequency in bits.
pub fn idf_weight(q: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::Domain(format!("idf weight needs q in (0, 1], got {q}")));
    }
    Ok(-q.log2())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermWeight {
    pub term: String,
    pub df_target: usize,
    pub df_combined: usize,
    pub p: f64,
    pub q: f64,
    /// `None` when p or q falls on 0 or 1 (only possible without smoothing).
    pub w_bi: Option<f64>,
    pub w_idf: Option<f64>,
}

/// Weights for every term observed in `target`, with q estimated over
/// `combined`. Rows are sorted by term.
pub fn weight_table(
    target: &Corpus,
    combined: &Corpus,
    smoothing: Smoothing,
) -> Result<Vec<TermWeight>> {
    if combined.is_empty() {
        return Err(Error::EmptyCorpus(combined.name().to_string()));
    }
    target.require_non_empty()?;
    if target.len() > combined.len() {
        return Err(Error::Domain(format!(
            "target `{}` is larger than combined collection `{}`",
            target.name(),
            combined.name()
        )));
    }
    let df_t = doc_frequencies(target);
    let df_c = doc_frequencies(combined);
    let (n_t, n_c) = (target.len(), combined.len());
    df_t.into_iter()
        .map(|(term, dt)| {
            let dc = df_c.get(&term).copied().unwrap_or(0);
            if dc < dt {
                return Err(Error::Domain(format!(
                    "term `{term}` occurs in {dt} target documents but only {dc} combined documents"
                )));
            }
            let p = smoothing.probability(dt, n_t);
            let q = smoothing.probability(dc, n_c);
            Ok(TermWeight {
                w_bi: bi_weight(p, q).ok(),
                w_idf: idf_weight(q).ok(),
                term,
                df_target: dt,
                df_combined: dc,
                p,
                q,
            })
        })
        .collect()
}

/// Terms of `target` whose weight under `scheme` is at least `cutoff` bits.
pub fn weighted_sterms(
    target: &Corpus,
    combined: &Corpus,
    scheme: WeightScheme,
    cutoff: f64,
    smoothing: Smoothing,
) -> Result<STermSet> {
    let table = weight_table(target, combined, smoothing)?;
    Ok(sterms_from_table(&table, scheme, cutoff))
}

pub fn sterms_from_table(table: &[TermWeight], scheme: WeightScheme, cutoff: f64) -> STermSet {
    let terms = table
        .iter()
        .filter(|w| {
            let weight = match scheme {
                WeightScheme::Bi => w.w_bi,
                WeightScheme::Idf => w.w_idf,
            };
            weight.is_some_and(|x| x >= cutoff)
        })
        .map(|w| w.term.clone())
        .collect();
    let recipe = match scheme {
        WeightScheme::Bi => Recipe::BiThreshold { cutoff },
        WeightScheme::Idf => Recipe::IdfThreshold { cutoff },
    };
    STermSet {
        label: scheme.to_string(),
        terms,
        recipe,
        stoplist_applied: false,
    }
}

/// A rule assigning an S set to each document of a corpus.
#[derive(Debug, Clone, PartialEq)]
pub enum TermSystem {
    /// One set shared by every document (dictionary, weights, pooled fields).
    Global(STermSet),
    /// Each document's own field terms.
    PerDocument {
        label: String,
        field: FieldName,
        stoplist: Option<Stoplist>,
    },
}

impl TermSystem {
    pub fn per_document(field: FieldName, stoplist: Option<Stoplist>) -> Self {
        let label = if stoplist.is_some() {
            format!("{field}-nostop")
        } else {
            field.to_string()
        };
        TermSystem::PerDocument {
            label,
            field,
            stoplist,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            TermSystem::Global(s) => &s.label,
            TermSystem::PerDocument { label, .. } => label,
        }
    }

    /// The S set for `doc`, or `None` when the document lacks the source field.
    pub fn terms_for<'a>(&'a self, doc: &Document) -> Option<Cow<'a, BTreeSet<String>>> {
        match self {
            TermSystem::Global(s) => Some(Cow::Borrowed(&s.terms)),
            TermSystem::PerDocument {
                field, stoplist, ..
            } => field_sterms(doc, *field, stoplist.as_ref())
                .ok()
                .map(|s| Cow::Owned(s.terms)),
        }
    }

    /// True if at least one document of the corpus gets a non-empty S set.
    pub fn is_usable_for(&self, corpus: &Corpus) -> bool {
        corpus
            .documents()
            .iter()
            .any(|d| self.terms_for(d).is_some_and(|s| !s.is_empty()))
    }
}
