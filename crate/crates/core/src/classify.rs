//! Nearest-profile classification of documents and collections.
//!
//! A profile is a fixed-length feature vector: mean type/token ratios,
//! coarse location-curve rates for a few per-document S-term systems, and
//! occurrence rates of the constructs that best separate theory from practice.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, FieldName, Orientation};
use crate::error::{Error, Result};
use crate::grammar::{construct_counts, delta_tp, map_tags, TagMap, TagSequence};
use crate::lexstats::{corpus_ttr, TtrRule, DEFAULT_PREFIX};
use crate::profile::curve_from_scan;
use crate::sterm::TermSystem;
use crate::window::{scan_corpus, WindowSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub prefix_n: usize,
    /// Per-document field systems whose location curves enter the features.
    pub curve_fields: Vec<FieldName>,
    pub curve_points: usize,
    pub curve_halfwidth: f64,
    pub spec: WindowSpec,
    /// Constructs over simplified tag labels.
    pub constructs: Vec<TagSequence>,
    pub normalize: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            prefix_n: DEFAULT_PREFIX,
            curve_fields: vec![FieldName::Title],
            curve_points: 3,
            curve_halfwidth: 0.25,
            spec: WindowSpec::default(),
            constructs: Vec::new(),
            normalize: true,
        }
    }
}

impl FeatureConfig {
    pub fn feature_names(&self) -> Vec<String> {
        let mut names = vec!["ttr_mean".to_string(), "ttr_prefix_mean".to_string()];
        for f in &self.curve_fields {
            for i in 0..self.curve_points {
                names.push(format!("curve_{f}_{i}"));
            }
        }
        for c in &self.constructs {
            names.push(format!("construct_{}", c.0.join("_")));
        }
        names
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisciplineProfile {
    pub label: String,
    pub orientation: Orientation,
    pub features: Vec<f64>,
    /// Per-feature standard deviation across the corpus's documents, empty
    /// when unknown.
    #[serde(default)]
    pub spread: Vec<f64>,
}

/// Occurrences of `construct` per 100 fulltext windows of its length.
fn construct_rate(corpus: &Corpus, construct: &TagSequence) -> f64 {
    let len = construct.len();
    let mut windows = 0usize;
    let mut hits = 0usize;
    for d in corpus.documents() {
        let tags: Vec<&str> = d.fulltext().iter().map(|t| t.tag.as_deref().unwrap_or("")).collect();
        if tags.len() < len {
            continue;
        }
        for w in tags.windows(len) {
            windows += 1;
            hits += w.iter().zip(&construct.0).all(|(a, b)| a == b) as usize;
        }
    }
    if windows == 0 {
        0.0
    } else {
        100.0 * hits as f64 / windows as f64
    }
}

/// The feature vector of a corpus (a single document is a one-document corpus).
pub fn features(corpus: &Corpus, cfg: &FeatureConfig, tagmap: &TagMap) -> Result<Vec<f64>> {
    let ttr = corpus_ttr(corpus, Some(cfg.prefix_n))?;
    let mut out = vec![ttr.mean, ttr.mean_prefix.unwrap_or(ttr.mean)];
    for field in &cfg.curve_fields {
        let scan = scan_corpus(corpus, &TermSystem::per_document(*field, None), &cfg.spec)?;
        if scan.docs.is_empty() {
            out.extend(std::iter::repeat_n(0.0, cfg.curve_points));
        } else {
            let curve = curve_from_scan(&scan, cfg.curve_points, cfg.curve_halfwidth)?;
            out.extend(curve.rates().into_iter().map(|r| r.unwrap_or(0.0)));
        }
    }
    if !cfg.constructs.is_empty() {
        let (mapped, _) = map_tags(corpus, tagmap)?;
        out.extend(cfg.constructs.iter().map(|c| construct_rate(&mapped, c)));
    }
    Ok(out)
}

/// Picks `k` constructs by theory/practice discrimination: the strongest
/// practice-leaning half and the strongest theory-leaning half.
pub fn select_constructs(
    corpora: &[&Corpus],
    system: &TermSystem,
    spec: &WindowSpec,
    lengths: std::ops::RangeInclusive<usize>,
    min_support: usize,
    k: usize,
    tagmap: &TagMap,
) -> Result<Vec<TagSequence>> {
    let mut tables = Vec::new();
    for c in corpora {
        if c.orientation() == Orientation::Unlabeled {
            continue;
        }
        let (mapped, _) = map_tags(c, tagmap)?;
        tables.push((construct_counts(&mapped, system, spec, lengths.clone(), min_support)?, c.orientation()));
    }
    let has = |o: Orientation| tables.iter().any(|(_, x)| *x == o);
    if !has(Orientation::Theory) || !has(Orientation::Practice) {
        return Ok(Vec::new());
    }
    let refs: Vec<_> = tables.iter().map(|(t, o)| (t, *o)).collect();
    let report = delta_tp(&refs, min_support)?;
    let top = k.div_ceil(2);
    let mut picked: Vec<TagSequence> = report.rows.iter().take(top).map(|r| r.construct.clone()).collect();
    for r in report.ascending().into_iter().take(k - top) {
        if !picked.contains(&r.construct) {
            picked.push(r.construct.clone());
        }
    }
    Ok(picked)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileStore {
    pub feature_names: Vec<String>,
    pub config: FeatureConfig,
    pub profiles: Vec<DisciplineProfile>,
}

impl ProfileStore {
    pub fn new(config: FeatureConfig) -> Self {
        ProfileStore {
            feature_names: config.feature_names(),
            config,
            profiles: Vec::new(),
        }
    }

    pub fn add(&mut self, profile: DisciplineProfile) -> Result<()> {
        if profile.features.len() != self.feature_names.len() {
            return Err(Error::InvalidSpec(format!(
                "profile `{}` has {} features, store expects {}",
                profile.label,
                profile.features.len(),
                self.feature_names.len()
            )));
        }
        self.profiles.retain(|p| p.label != profile.label);
        self.profiles.push(profile);
        self.profiles.sort_by(|a, b| a.label.cmp(&b.label));
        Ok(())
    }

    /// Profiles a labelled corpus and stores it under the corpus name,
    /// together with the document-level spread of each feature.
    pub fn add_corpus(&mut self, corpus: &Corpus, tagmap: &TagMap) -> Result<()> {
        let features = features(corpus, &self.config, tagmap)?;
        let per_doc = corpus
            .documents()
            .iter()
            .map(|d| {
                let one = Corpus::new(corpus.name(), corpus.orientation(), vec![d.clone()])?;
                self::features(&one, &self.config, tagmap)
            })
            .collect::<Result<Vec<_>>>()?;
        let n = per_doc.len() as f64;
        let spread = (0..features.len())
            .map(|j| {
                let mean = per_doc.iter().map(|f| f[j]).sum::<f64>() / n;
                (per_doc.iter().map(|f| (f[j] - mean).powi(2)).sum::<f64>() / n).sqrt()
            })
            .collect();
        self.add(DisciplineProfile {
            label: corpus.name().to_string(),
            orientation: corpus.orientation(),
            features,
            spread,
        })
    }

    pub fn read(reader: impl Read) -> Result<Self> {
        let store: ProfileStore = serde_json::from_reader(reader)?;
        if store.feature_names != store.config.feature_names() {
            return Err(Error::InvalidSpec("store feature names do not match its configuration".into()));
        }
        let n = store.feature_names.len();
        if let Some(p) = store
            .profiles
            .iter()
            .find(|p| p.features.len() != n || !(p.spread.is_empty() || p.spread.len() == n))
        {
            return Err(Error::InvalidSpec(format!("profile `{}` has the wrong feature count", p.label)));
        }
        Ok(store)
    }

    pub fn write(&self, writer: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }

    /// Per-feature (mean, scale). The scale is the pooled document-level
    /// spread of the stored profiles, else the spread between profiles, else 1.
    fn normalization(&self) -> Vec<(f64, f64)> {
        let n = self.profiles.len() as f64;
        let with_spread: Vec<&DisciplineProfile> = self.profiles.iter().filter(|p| !p.spread.is_empty()).collect();
        (0..self.feature_names.len())
            .map(|j| {
                if !self.config.normalize {
                    return (0.0, 1.0);
                }
                let mean = self.profiles.iter().map(|p| p.features[j]).sum::<f64>() / n;
                let within = if with_spread.is_empty() {
                    0.0
                } else {
                    (with_spread.iter().map(|p| p.spread[j].powi(2)).sum::<f64>() / with_spread.len() as f64).sqrt()
                };
                let between = (self.profiles.iter().map(|p| (p.features[j] - mean).powi(2)).sum::<f64>() / n).sqrt();
                let scale = [within, between].into_iter().find(|s| *s > 0.0).unwrap_or(1.0);
                (mean, scale)
            })
            .collect()
    }

    pub fn classify(&self, features: &[f64], rule: &TtrRule) -> Result<Classification> {
        if self.profiles.is_empty() {
            return Err(Error::InsufficientData("the profile store is empty".into()));
        }
        if features.len() != self.feature_names.len() {
            return Err(Error::InvalidSpec(format!(
                "{} features given, store expects {}",
                features.len(),
                self.feature_names.len()
            )));
        }
        let norm = self.normalization();
        let z = |v: &[f64]| -> Vec<f64> { v.iter().zip(&norm).map(|(x, (m, s))| (x - m) / s).collect() };
        let target = z(features);
        let distances: BTreeMap<String, f64> = self
            .profiles
            .iter()
            .map(|p| {
                let d = z(&p.features)
                    .iter()
                    .zip(&target)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                (p.label.clone(), d)
            })
            .collect();
        let best = self
            .profiles
            .iter()
            .min_by(|a, b| distances[&a.label].total_cmp(&distances[&b.label]).then_with(|| a.label.cmp(&b.label)))
            .expect("non-empty store");
        Ok(Classification {
            label: best.label.clone(),
            orientation: best.orientation,
            distance: distances[&best.label],
            ttr_orientation: rule.orientation(features[0]),
            distances,
            warning: (self.profiles.len() == 1)
                .then(|| "only one stored profile; every input maps to it".to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: String,
    pub orientation: Orientation,
    pub distance: f64,
    /// Orientation from the type/token ratio threshold alone.
    pub ttr_orientation: Orientation,
    pub distances: BTreeMap<String, f64>,
    pub warning: Option<String>,
}
