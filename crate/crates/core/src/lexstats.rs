//! Type-token statistics: ratios, length-controlled ratios, the type/token
//! regression curve, and one-way ANOVA across collections.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::corpus::{type_count, Corpus, Token};
use crate::error::{Error, Result};
use crate::special::f_sf;

pub const DEFAULT_PREFIX: usize = 500;

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.surface
    }
}

/// Distinct surfaces divided by token count.
pub fn ttr<S: AsRef<str>>(tokens: &[S]) -> Result<f64> {
    if tokens.is_empty() {
        return Err(Error::InsufficientData("type-token ratio of an empty sequence".into()));
    }
    let types: HashSet<&str> = tokens.iter().map(AsRef::as_ref).collect();
    Ok(types.len() as f64 / tokens.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrefixRatio {
    pub ratio: f64,
    pub used: usize,
    /// The sequence was shorter than the requested prefix.
    pub truncated: bool,
}

/// Type-token ratio of the first `n` tokens.
pub fn ttr_prefix<S: AsRef<str>>(tokens: &[S], n: usize) -> Result<PrefixRatio> {
    let used = n.min(tokens.len());
    if used == 0 {
        return Err(Error::InsufficientData("type-token ratio of an empty prefix".into()));
    }
    Ok(PrefixRatio {
        ratio: ttr(&tokens[..used])?,
        used,
        truncated: tokens.len() < n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TTRRecord {
    pub doc_id: String,
    pub tokens: usize,
    pub types: usize,
    pub ratio: f64,
    pub prefix_n: Option<usize>,
    pub prefix_ratio: Option<f64>,
}

/// Per-document fulltext type-token records.
pub fn ttr_records(corpus: &Corpus, prefix_n: Option<usize>) -> Result<Vec<TTRRecord>> {
    corpus.require_non_empty()?;
    corpus
        .documents()
        .iter()
        .map(|d| {
            let full = d.fulltext();
            Ok(TTRRecord {
                doc_id: d.id().to_string(),
                tokens: full.len(),
                types: type_count(full),
                ratio: ttr(full)?,
                prefix_n,
                prefix_ratio: prefix_n.map(|n| ttr_prefix(full, n).map(|p| p.ratio)).transpose()?,
            })
        })
        .collect()
}

/// Corpus-level ratios, reported both ways.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusTtr {
    pub corpus: String,
    /// Distinct types over the whole corpus divided by all tokens.
    pub pooled: f64,
    /// Mean of per-document ratios.
    pub mean: f64,
    pub mean_prefix: Option<f64>,
}

pub fn corpus_ttr(corpus: &Corpus, prefix_n: Option<usize>) -> Result<CorpusTtr> {
    let records = ttr_records(corpus, prefix_n)?;
    let all: Vec<&str> = corpus
        .documents()
        .iter()
        .flat_map(|d| d.fulltext().iter().map(|t| t.surface.as_str()))
        .collect();
    let n = records.len() as f64;
    Ok(CorpusTtr {
        corpus: corpus.name().to_string(),
        pooled: ttr(&all)?,
        mean: records.iter().map(|r| r.ratio).sum::<f64>() / n,
        mean_prefix: prefix_n
            .map(|_| records.iter().filter_map(|r| r.prefix_ratio).sum::<f64>() / n),
    })
}

/// Least-squares polynomial, coefficients in ascending powers of x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyFit {
    pub degree: usize,
    pub coefficients: Vec<f64>,
    pub rss: f64,
    pub n: usize,
}

impl PolyFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (1..=k).fold(1.0, |c, i| c * (n - k + i) as f64 / i as f64)
}

/// Fits `y ≈ Σ c_k x^k` by least squares.
///
/// x is mapped affinely onto [-1, 1] before building the design matrix, the
/// system is solved by Householder QR, and the coefficients are mapped back.
pub fn fit_polynomial(points: &[(f64, f64)], degree: usize) -> Result<PolyFit> {
    let n = points.len();
    if n < degree + 1 {
        return Err(Error::InsufficientData(format!(
            "degree {degree} fit needs at least {} points, got {n}",
            degree + 1
        )));
    }
    let distinct: HashSet<u64> = points.iter().map(|p| p.0.to_bits()).collect();
    if distinct.len() < degree + 1 {
        return Err(Error::Degenerate(format!(
            "degree {degree} fit needs {} distinct x values, got {}",
            degree + 1,
            distinct.len()
        )));
    }
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let design = DMatrix::from_fn(n, degree + 1, |i, k| ((points[i].0 - mid) / half).powi(k as i32));
    let y = DVector::from_iterator(n, points.iter().map(|p| p.1));
    let qr = design.clone().qr();
    let qty = qr.q().transpose() * &y;
    let scaled = qr
        .r()
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::Degenerate("rank-deficient design".into()))?;
    let rss = (&y - &design * &scaled).norm_squared();

    // Σ_k a_k ((x - mid)/half)^k expanded into powers of x
    let mut coefficients = vec![0.0; degree + 1];
    for (k, a) in scaled.iter().enumerate() {
        let scale = a / half.powi(k as i32);
        for (j, c) in coefficients.iter_mut().enumerate().take(k + 1) {
            *c += scale * binomial(k, j) * (-mid).powi((k - j) as i32);
        }
    }
    Ok(PolyFit {
        degree,
        coefficients,
        rss,
        n,
    })
}

/// Regression of per-document token counts on type counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeTokenFit {
    pub corpus: String,
    pub fit: PolyFit,
    /// (types, tokens) per document.
    pub points: Vec<(f64, f64)>,
}

pub const DEFAULT_FIT_DEGREE: usize = 3;

pub fn type_token_fit(corpus: &Corpus, degree: usize) -> Result<TypeTokenFit> {
    if corpus.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "type/token fit needs at least 5 documents, `{}` has {}",
            corpus.name(),
            corpus.len()
        )));
    }
    let points: Vec<(f64, f64)> = corpus
        .documents()
        .iter()
        .map(|d| (type_count(d.fulltext()) as f64, d.fulltext().len() as f64))
        .collect();
    if points.iter().all(|p| p.0 == points[0].0) {
        return Err(Error::Degenerate("every document has the same type count".into()));
    }
    Ok(TypeTokenFit {
        corpus: corpus.name().to_string(),
        fit: fit_polynomial(&points, degree)?,
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnovaResult {
    pub groups: Vec<String>,
    pub group_means: Vec<f64>,
    pub ss_between: f64,
    pub ss_within: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub f: f64,
    pub p_value: f64,
    pub significant_05: bool,
    pub significant_01: bool,
}

/// One-way analysis of variance.
///
/// When all observations are equal F is reported as 0 with p = 1; when only
/// the within-group spread is zero F is infinite with p = 0.
pub fn anova(groups: &[(String, Vec<f64>)]) -> Result<AnovaResult> {
    if groups.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "ANOVA needs at least 2 groups, got {}",
            groups.len()
        )));
    }
    if let Some((label, v)) = groups.iter().find(|(_, v)| v.len() < 2) {
        return Err(Error::InsufficientData(format!(
            "group `{label}` has {} observations, at least 2 are needed",
            v.len()
        )));
    }
    let n: usize = groups.iter().map(|(_, v)| v.len()).sum();
    let k = groups.len();
    let grand = groups.iter().flat_map(|(_, v)| v).sum::<f64>() / n as f64;
    let means: Vec<f64> = groups
        .iter()
        .map(|(_, v)| v.iter().sum::<f64>() / v.len() as f64)
        .collect();
    let ss_between: f64 = groups
        .iter()
        .zip(&means)
        .map(|((_, v), m)| v.len() as f64 * (m - grand).powi(2))
        .sum();
    let ss_within: f64 = groups
        .iter()
        .zip(&means)
        .map(|((_, v), m)| v.iter().map(|x| (x - m).powi(2)).sum::<f64>())
        .sum();
    let df_between = k - 1;
    let df_within = n - k;
    let f = if ss_between == 0.0 {
        0.0
    } else if ss_within == 0.0 {
        f64::INFINITY
    } else {
        (ss_between / df_between as f64) / (ss_within / df_within as f64)
    };
    let p_value = f_sf(f, df_between as f64, df_within as f64);
    Ok(AnovaResult {
        groups: groups.iter().map(|(l, _)| l.clone()).collect(),
        group_means: means,
        ss_between,
        ss_within,
        df_between,
        df_within,
        f,
        p_value,
        significant_05: p_value < 0.05,
        significant_01: p_value < 0.01,
    })
}

/// Theory/practice call from a document's type-token ratio. Ratios below the
/// boundary suggest heavier term reuse, typical of theoretical writing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TtrRule {
    pub boundary: f64,
}

impl Default for TtrRule {
    fn default() -> Self {
        TtrRule { boundary: 0.25 }
    }
}

impl TtrRule {
    pub fn orientation(&self, ratio: f64) -> crate::corpus::Orientation {
        if ratio < self.boundary {
            crate::corpus::Orientation::Theory
        } else {
            crate::corpus::Orientation::Practice
        }
    }
}
