//! Part-of-speech constructs of windows: how strongly each tag sequence
//! signals a significant window, and how that signal differs between
//! theoretical and practical collections.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, FieldName, Orientation};
use crate::error::{Error, Result};
use crate::sterm::TermSystem;
use crate::window::{scan_corpus, WindowSpec};

pub const DEFAULT_MIN_SUPPORT: usize = 20;
pub const OTHER_LABEL: &str = "other";

const DEFAULT_TAGMAP: &str = include_str!("../data/tagmap.tsv");

/// Penn Treebank tags to simplified construct labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagMap {
    map: BTreeMap<String, String>,
    labels: BTreeSet<String>,
}

impl TagMap {
    /// Reads `TAG<TAB>label` lines. Lines without a tab that start with `#`
    /// are comments (`#` itself is a Penn tag).
    pub fn from_tsv(reader: impl BufRead) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || (line.starts_with('#') && !line.contains('\t')) {
                continue;
            }
            let (tag, label) = line.split_once('\t').ok_or_else(|| {
                Error::Malformed(format!("tag map line {} has no tab: `{line}`", i + 1))
            })?;
            let (tag, label) = (tag.trim(), label.trim());
            if tag.is_empty() || label.is_empty() {
                return Err(Error::Malformed(format!("tag map line {} is incomplete", i + 1)));
            }
            map.insert(tag.to_string(), label.to_string());
        }
        let labels = map.values().cloned().collect();
        Ok(TagMap { map, labels })
    }

    pub fn penn() -> Self {
        TagMap::from_tsv(DEFAULT_TAGMAP.as_bytes()).expect("bundled tag map is valid")
    }

    /// Maps a tag; tags that are already simplified labels pass through.
    /// Returns `None` for unknown tags.
    pub fn lookup(&self, tag: &str) -> Option<&str> {
        self.map
            .get(tag)
            .map(String::as_str)
            .or_else(|| self.labels.get(tag).map(String::as_str))
    }

    pub fn map_or_other(&self, tag: &str) -> &str {
        self.lookup(tag).unwrap_or(OTHER_LABEL)
    }
}

impl Default for TagMap {
    fn default() -> Self {
        TagMap::penn()
    }
}

/// Tags that fell through to [`OTHER_LABEL`], with counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct UnknownTags(pub BTreeMap<String, usize>);

impl UnknownTags {
    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

pub fn map_document_tags(doc: &Document, tagmap: &TagMap, unknown: &mut UnknownTags) -> Document {
    doc.map_tags(|tag| match tagmap.lookup(tag) {
        Some(label) => label.to_string(),
        None => {
            *unknown.0.entry(tag.to_string()).or_insert(0) += 1;
            OTHER_LABEL.to_string()
        }
    })
}

/// Replaces every tag in the corpus with its simplified label.
pub fn map_tags(corpus: &Corpus, tagmap: &TagMap) -> Result<(Corpus, UnknownTags)> {
    let mut unknown = UnknownTags::default();
    let docs = corpus
        .documents()
        .iter()
        .map(|d| map_document_tags(d, tagmap, &mut unknown))
        .collect();
    let mapped = Corpus::new(corpus.name(), corpus.orientation(), docs)?;
    Ok((mapped, unknown))
}

/// An exact sequence of simplified tags.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TagSequence(pub Vec<String>);

impl TagSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TagSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

impl From<&str> for TagSequence {
    fn from(s: &str) -> Self {
        TagSequence(s.split_whitespace().map(str::to_owned).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramStat {
    pub construct: TagSequence,
    /// Windows with this construct.
    pub n: usize,
    /// Of those, the significant ones.
    pub n_sw: usize,
    pub pr_sw_given_g: f64,
    pub m_g: f64,
}

/// Add-half estimate of a conditional probability, `(k + 0.5) / (n + 1)`.
pub fn smoothed(k: usize, n: usize) -> f64 {
    (k as f64 + 0.5) / (n as f64 + 1.0)
}

/// Weight of evidence, in bits, that a window carrying a construct is
/// significant: the smoothed log odds given the construct minus the smoothed
/// prior log odds.
pub fn weight_of_evidence(n: usize, n_sw: usize, total_windows: usize, total_sw: usize) -> Result<f64> {
    if total_windows == 0 {
        return Err(Error::Domain("weight of evidence with zero windows".into()));
    }
    if n_sw > n || total_sw > total_windows || n > total_windows {
        return Err(Error::Domain(format!(
            "inconsistent counts n={n}, n_sw={n_sw}, windows={total_windows}, significant={total_sw}"
        )));
    }
    let cond = smoothed(n_sw, n);
    let prior = smoothed(total_sw, total_windows);
    Ok((cond / (1.0 - cond)).log2() - (prior / (1.0 - prior)).log2())
}

/// Construct statistics for one corpus under one S-term system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramTable {
    pub corpus: String,
    pub system: String,
    pub min_support: usize,
    /// Window length → (windows, significant windows).
    pub totals: BTreeMap<usize, (usize, usize)>,
    /// Sorted by (length, construct).
    pub stats: Vec<GramStat>,
    /// Distinct constructs seen before the support filter, per length.
    pub distinct: BTreeMap<usize, usize>,
}

impl GramTable {
    pub fn get(&self, construct: &TagSequence) -> Option<&GramStat> {
        self.stats.iter().find(|s| &s.construct == construct)
    }

    /// Stats ordered by weight of evidence, strongest positive first.
    pub fn ranked(&self) -> Vec<&GramStat> {
        let mut v: Vec<&GramStat> = self.stats.iter().collect();
        v.sort_by(|a, b| b.m_g.total_cmp(&a.m_g).then_with(|| a.construct.cmp(&b.construct)));
        v
    }
}

/// Counts, for every window length in `lengths`, how often each exact tag
/// sequence fills a window and how often that window is significant.
/// Constructs seen in fewer than `min_support` windows are dropped.
pub fn construct_counts(
    corpus: &Corpus,
    system: &TermSystem,
    spec: &WindowSpec,
    lengths: RangeInclusive<usize>,
    min_support: usize,
) -> Result<GramTable> {
    corpus.require_non_empty()?;
    for d in corpus.documents() {
        if let Some(t) = d.fulltext().iter().find(|t| t.tag.is_none()) {
            return Err(Error::Untagged {
                doc_id: d.id().to_string(),
                field: FieldName::Fulltext.to_string(),
                position: t.position,
            });
        }
    }
    let by_id: HashMap<&str, &Document> = corpus.documents().iter().map(|d| (d.id(), d)).collect();
    let mut totals = BTreeMap::new();
    let mut distinct = BTreeMap::new();
    let mut stats = Vec::new();
    for len in lengths {
        let scan = scan_corpus(corpus, system, &spec.with_omega(len))?;
        let mut counts: BTreeMap<Vec<&str>, (usize, usize)> = BTreeMap::new();
        for ds in &scan.docs {
            let tokens = by_id[ds.doc_id.as_str()].fulltext();
            for w in &ds.windows {
                let key: Vec<&str> = tokens[w.start..w.start + len]
                    .iter()
                    .map(|t| t.tag.as_deref().expect("checked above"))
                    .collect();
                let e = counts.entry(key).or_default();
                e.0 += 1;
                e.1 += w.significant as usize;
            }
        }
        let total_windows = scan.window_count();
        let total_sw = scan.significant_count();
        totals.insert(len, (total_windows, total_sw));
        distinct.insert(len, counts.len());
        for (key, (n, n_sw)) in counts {
            if n < min_support {
                continue;
            }
            stats.push(GramStat {
                construct: TagSequence(key.into_iter().map(str::to_owned).collect()),
                n,
                n_sw,
                pr_sw_given_g: smoothed(n_sw, n),
                m_g: weight_of_evidence(n, n_sw, total_windows, total_sw)?,
            });
        }
    }
    Ok(GramTable {
        corpus: corpus.name().to_string(),
        system: system.label().to_string(),
        min_support,
        totals,
        stats,
        distinct,
    })
}

/// Practice-minus-theory sum of weights for a single construct.
pub fn delta_from_values(values: &[(Orientation, f64)]) -> Result<f64> {
    values.iter().try_fold(0.0, |acc, (o, m)| match o {
        Orientation::Practice => Ok(acc + m),
        Orientation::Theory => Ok(acc - m),
        Orientation::Unlabeled => Err(Error::Domain("unlabeled corpus in theory/practice sum".into())),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryPracticeRow {
    pub construct: TagSequence,
    /// One value per input table, in input order.
    pub m_g: Vec<f64>,
    pub delta_tp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaTpReport {
    pub corpora: Vec<String>,
    pub orientations: Vec<Orientation>,
    /// Sorted by `delta_tp` descending, ties by construct.
    pub rows: Vec<TheoryPracticeRow>,
    /// Constructs present in some but not all tables at the required support.
    pub excluded: Vec<TagSequence>,
}

impl DeltaTpReport {
    pub fn ascending(&self) -> Vec<&TheoryPracticeRow> {
        self.rows.iter().rev().collect()
    }
}

/// Combines per-corpus construct tables into theory/practice discrimination
/// rows. Only constructs with support of at least `min_support` in every
/// table are kept.
pub fn delta_tp(
    tables: &[(&GramTable, Orientation)],
    min_support: usize,
) -> Result<DeltaTpReport> {
    if tables.is_empty() {
        return Err(Error::InsufficientData("no construct tables".into()));
    }
    if let Some((t, _)) = tables.iter().find(|(_, o)| *o == Orientation::Unlabeled) {
        return Err(Error::Domain(format!(
            "corpus `{}` has no theory/practice orientation",
            t.corpus
        )));
    }
    let mut seen: BTreeMap<&TagSequence, Vec<Option<f64>>> = BTreeMap::new();
    for (i, (table, _)) in tables.iter().enumerate() {
        for s in table.stats.iter().filter(|s| s.n >= min_support) {
            seen.entry(&s.construct).or_insert_with(|| vec![None; tables.len()])[i] = Some(s.m_g);
        }
    }
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for (construct, vals) in seen {
        match vals.into_iter().collect::<Option<Vec<f64>>>() {
            Some(m_g) => {
                let pairs: Vec<(Orientation, f64)> =
                    tables.iter().map(|(_, o)| *o).zip(m_g.iter().copied()).collect();
                rows.push(TheoryPracticeRow {
                    construct: construct.clone(),
                    delta_tp: delta_from_values(&pairs)?,
                    m_g,
                });
            }
            None => excluded.push(construct.clone()),
        }
    }
    if rows.is_empty() {
        return Err(Error::InsufficientData(
            "no construct reaches the support threshold in every corpus".into(),
        ));
    }
    rows.sort_by(|a, b| b.delta_tp.total_cmp(&a.delta_tp).then_with(|| a.construct.cmp(&b.construct)));
    Ok(DeltaTpReport {
        corpora: tables.iter().map(|(t, _)| t.corpus.clone()).collect(),
        orientations: tables.iter().map(|(_, o)| *o).collect(),
        rows,
        excluded,
    })
}
