//! Fulltext windows and their binomial significance test.
//!
//! A window of ω consecutive fulltext tokens holding `r` S-tokens is
//! significant when the chance of seeing `r` or more S-tokens among ω tokens
//! drawn independently with S-probability `p` is below `alpha`.

use std::collections::BTreeSet;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, Token};
use crate::error::{Error, Result};
use crate::sterm::{STermSet, TermSystem};

pub const DEFAULT_OMEGA: usize = 3;
pub const DEFAULT_ALPHA: f64 = 0.03;

/// Where the S-token probability `p` is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PScope {
    #[default]
    PerDocument,
    PerCorpus,
}

impl FromStr for PScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per_document" | "document" => Ok(PScope::PerDocument),
            "per_corpus" | "corpus" => Ok(PScope::PerCorpus),
            other => Err(Error::Malformed(format!("unknown p scope `{other}`"))),
        }
    }
}

impl PScope {
    pub fn as_str(self) -> &'static str {
        match self {
            PScope::PerDocument => "per_document",
            PScope::PerCorpus => "per_corpus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub omega: usize,
    pub alpha: f64,
    #[serde(default)]
    pub p_scope: PScope,
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec {
            omega: DEFAULT_OMEGA,
            alpha: DEFAULT_ALPHA,
            p_scope: PScope::PerDocument,
        }
    }
}

impl WindowSpec {
    pub fn new(omega: usize, alpha: f64) -> Result<Self> {
        let spec = WindowSpec {
            omega,
            alpha,
            p_scope: PScope::PerDocument,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_omega(self, omega: usize) -> Self {
        WindowSpec { omega, ..self }
    }

    pub fn with_scope(self, p_scope: PScope) -> Self {
        WindowSpec { p_scope, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.omega == 0 {
            return Err(Error::InvalidSpec("window size must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Window {
    pub doc_id: String,
    pub start: usize,
    pub omega: usize,
    pub r: usize,
    pub tail_prob: f64,
    pub significant: bool,
}

impl Window {
    /// Midpoint offset, `start + (omega - 1) / 2`.
    pub fn center(&self) -> f64 {
        self.start as f64 + (self.omega as f64 - 1.0) / 2.0
    }
}

fn check_binomial(r: usize, omega: usize, p: f64) -> Result<()> {
    if r > omega {
        return Err(Error::Domain(format!("r = {r} exceeds omega = {omega}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p = {p} is not a probability")));
    }
    Ok(())
}

fn choose(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k).fold(1.0, |c, i| c * (n - k + i) as f64 / i as f64)
}

fn ln_choose(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k)
        .map(|i| ((n - k + i) as f64).ln() - (i as f64).ln())
        .sum()
}

/// Probability of exactly `r` S-tokens in a window of `omega` tokens.
pub fn binomial_pmf(r: usize, omega: usize, p: f64) -> Result<f64> {
    check_binomial(r, omega, p)?;
    Ok(pmf_unchecked(r, omega, p))
}

fn pmf_unchecked(r: usize, omega: usize, p: f64) -> f64 {
    if p == 0.0 {
        return if r == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if r == omega { 1.0 } else { 0.0 };
    }
    let fails = omega - r;
    if omega <= 64 {
        choose(omega, r) * p.powi(r as i32) * (1.0 - p).powi(fails as i32)
    } else {
        (ln_choose(omega, r) + r as f64 * p.ln() + fails as f64 * (-p).ln_1p()).exp()
    }
}

/// Probability of `r` or more S-tokens in a window of `omega` tokens.
pub fn binomial_tail(r: usize, omega: usize, p: f64) -> Result<f64> {
    check_binomial(r, omega, p)?;
    Ok(tail_unchecked(r, omega, p))
}

fn tail_unchecked(r: usize, omega: usize, p: f64) -> f64 {
    if r == 0 {
        return 1.0;
    }
    // smallest terms first
    let sum: f64 = (r..=omega).rev().map(|k| pmf_unchecked(k, omega, p)).sum();
    sum.min(1.0)
}

/// Upper-tail probabilities for every r in `0..=omega` at a fixed p.
#[derive(Debug, Clone)]
pub struct TailTable {
    p: f64,
    tails: Vec<f64>,
}

impl TailTable {
    pub fn new(omega: usize, p: f64) -> Result<Self> {
        check_binomial(0, omega, p)?;
        Ok(TailTable {
            p,
            tails: (0..=omega).map(|r| tail_unchecked(r, omega, p)).collect(),
        })
    }

    pub fn tail(&self, r: usize) -> f64 {
        self.tails[r]
    }

    /// A p of exactly 0 or 1 leaves nothing to be surprised about.
    pub fn is_degenerate(&self) -> bool {
        self.p <= 0.0 || self.p >= 1.0
    }

    pub fn is_significant(&self, r: usize, alpha: f64) -> bool {
        !self.is_degenerate() && self.tails[r] < alpha
    }
}

/// Marks which tokens are S-tokens.
pub fn s_mask(tokens: &[Token], terms: &BTreeSet<String>) -> Vec<bool> {
    tokens.iter().map(|t| terms.contains(&t.surface)).collect()
}

/// Every stride-1 window of `mask` judged against the S-probability `p`.
pub fn scan_mask(doc_id: &str, mask: &[bool], omega: usize, alpha: f64, p: f64) -> Result<Vec<Window>> {
    if mask.len() < omega {
        return Err(Error::DocumentTooShort {
            doc_id: doc_id.to_string(),
            len: mask.len(),
            omega,
        });
    }
    let table = TailTable::new(omega, p)?;
    let mut r: usize = mask[..omega].iter().filter(|&&b| b).count();
    let mut out = Vec::with_capacity(mask.len() - omega + 1);
    for start in 0..=mask.len() - omega {
        if start > 0 {
            r = r + mask[start + omega - 1] as usize - mask[start - 1] as usize;
        }
        out.push(Window {
            doc_id: doc_id.to_string(),
            start,
            omega,
            r,
            tail_prob: table.tail(r),
            significant: table.is_significant(r, alpha),
        });
    }
    Ok(out)
}

fn mask_p(mask: &[bool]) -> f64 {
    mask.iter().filter(|&&b| b).count() as f64 / mask.len() as f64
}

/// All windows of one document's fulltext, with p estimated from that
/// fulltext. `spec.p_scope` is ignored here; use [`scan_corpus`] for
/// corpus-level estimation.
pub fn significant_windows(doc: &Document, s: &STermSet, spec: &WindowSpec) -> Result<Vec<Window>> {
    spec.validate()?;
    let mask = s_mask(doc.fulltext(), &s.terms);
    scan_mask(doc.id(), &mask, spec.omega, spec.alpha, mask_p(&mask))
}

/// One document's scan result.
#[derive(Debug, Clone)]
pub struct DocScan {
    pub doc_id: String,
    pub mask: Vec<bool>,
    pub p: f64,
    pub windows: Vec<Window>,
}

impl DocScan {
    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn s_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn significant(&self) -> impl Iterator<Item = &Window> {
        self.windows.iter().filter(|w| w.significant)
    }
}

/// Window scans for every document of a corpus under one S-term system.
#[derive(Debug, Clone)]
pub struct CorpusScan {
    pub corpus: String,
    pub system: String,
    pub spec: WindowSpec,
    pub docs: Vec<DocScan>,
    /// Documents without the system's source field.
    pub excluded: Vec<String>,
    /// Documents whose fulltext is shorter than the window.
    pub too_short: Vec<String>,
}

impl CorpusScan {
    pub fn windows(&self) -> impl Iterator<Item = &Window> {
        self.docs.iter().flat_map(|d| d.windows.iter())
    }

    pub fn window_count(&self) -> usize {
        self.docs.iter().map(|d| d.windows.len()).sum()
    }

    pub fn significant_count(&self) -> usize {
        self.docs.iter().map(|d| d.significant().count()).sum()
    }
}

/// Scans every document of `corpus`, ordered as in the corpus.
///
/// Documents for which `system` yields no S set are listed in
/// [`CorpusScan::excluded`]; documents shorter than the window are listed in
/// [`CorpusScan::too_short`]. Neither contributes windows.
pub fn scan_corpus(corpus: &Corpus, system: &TermSystem, spec: &WindowSpec) -> Result<CorpusScan> {
    spec.validate()?;
    corpus.require_non_empty()?;
    let mut excluded = Vec::new();
    let mut too_short = Vec::new();
    let mut masks = Vec::new();
    for d in corpus.documents() {
        match system.terms_for(d) {
            None => excluded.push(d.id().to_string()),
            Some(terms) => {
                if d.fulltext().len() < spec.omega {
                    too_short.push(d.id().to_string());
                } else {
                    masks.push((d.id(), s_mask(d.fulltext(), &terms)));
                }
            }
        }
    }
    let pooled_p = {
        let (s, n) = masks.iter().fold((0usize, 0usize), |(s, n), (_, m)| {
            (s + m.iter().filter(|&&b| b).count(), n + m.len())
        });
        if n == 0 {
            0.0
        } else {
            s as f64 / n as f64
        }
    };
    let docs = masks
        .into_par_iter()
        .map(|(id, mask)| {
            let p = match spec.p_scope {
                PScope::PerDocument => mask_p(&mask),
                PScope::PerCorpus => pooled_p,
            };
            let windows = scan_mask(id, &mask, spec.omega, spec.alpha, p)?;
            Ok(DocScan {
                doc_id: id.to_string(),
                mask,
                p,
                windows,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorpusScan {
        corpus: corpus.name().to_string(),
        system: system.label().to_string(),
        spec: *spec,
        docs,
        excluded,
        too_short,
    })
}
