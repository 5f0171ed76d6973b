//! Corpus-level summaries of significant windows: S concentration, within
//! window density, location curves, and overlap between S-term systems.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::sterm::TermSystem;
use crate::window::{scan_corpus, CorpusScan, DocScan, WindowSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// Token counts pooled over all documents.
    #[default]
    Micro,
    /// Mean of per-document ratios.
    Macro,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileOptions {
    pub alpha_exp: f64,
    pub beta_exp: f64,
    pub averaging: Averaging,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            alpha_exp: 1.0,
            beta_exp: 1.0,
            averaging: Averaging::Micro,
        }
    }
}

/// Token-position counts behind SC and WWD.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CoverageCounts {
    /// S-token positions.
    pub s_tokens: usize,
    /// Positions covered by at least one significant window.
    pub sw_positions: usize,
    /// S-token positions covered by a significant window.
    pub s_in_sw: usize,
}

impl CoverageCounts {
    fn add(self, o: CoverageCounts) -> CoverageCounts {
        CoverageCounts {
            s_tokens: self.s_tokens + o.s_tokens,
            sw_positions: self.sw_positions + o.sw_positions,
            s_in_sw: self.s_in_sw + o.s_in_sw,
        }
    }

    pub fn sc(&self) -> f64 {
        ratio(self.s_in_sw, self.s_tokens)
    }

    pub fn wwd(&self) -> f64 {
        ratio(self.s_in_sw, self.sw_positions)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Positions of `doc` covered by at least one significant window.
pub fn sw_coverage(doc: &DocScan) -> Vec<bool> {
    let mut covered = vec![false; doc.len()];
    for w in doc.significant() {
        covered[w.start..w.start + w.omega].fill(true);
    }
    covered
}

pub fn doc_counts(doc: &DocScan) -> CoverageCounts {
    let covered = sw_coverage(doc);
    let mut c = CoverageCounts::default();
    for (&s, &p) in doc.mask.iter().zip(&covered) {
        c.s_tokens += s as usize;
        c.sw_positions += p as usize;
        c.s_in_sw += (s && p) as usize;
    }
    c
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SWProfile {
    pub corpus: String,
    pub system: String,
    pub omega: usize,
    pub sc: f64,
    pub wwd: f64,
    pub q: f64,
    pub alpha_exp: f64,
    pub beta_exp: f64,
    pub averaging: Averaging,
    pub counts: CoverageCounts,
}

/// Combined windowing quality `sc^alpha * wwd^beta`.
pub fn quality(sc: f64, wwd: f64, alpha_exp: f64, beta_exp: f64) -> f64 {
    sc.powf(alpha_exp) * wwd.powf(beta_exp)
}

pub fn profile_from_scan(scan: &CorpusScan, opts: &ProfileOptions) -> SWProfile {
    let per_doc: Vec<CoverageCounts> = scan.docs.iter().map(doc_counts).collect();
    let counts = per_doc
        .iter()
        .fold(CoverageCounts::default(), |a, &b| a.add(b));
    let (sc, wwd) = match opts.averaging {
        Averaging::Micro => (counts.sc(), counts.wwd()),
        Averaging::Macro => {
            let mean = |vals: Vec<f64>| {
                if vals.is_empty() {
                    0.0
                } else {
                    vals.iter().sum::<f64>() / vals.len() as f64
                }
            };
            (
                mean(per_doc.iter().filter(|c| c.s_tokens > 0).map(|c| c.sc()).collect()),
                mean(per_doc.iter().filter(|c| c.sw_positions > 0).map(|c| c.wwd()).collect()),
            )
        }
    };
    SWProfile {
        corpus: scan.corpus.clone(),
        system: scan.system.clone(),
        omega: scan.spec.omega,
        sc,
        wwd,
        q: quality(sc, wwd, opts.alpha_exp, opts.beta_exp),
        alpha_exp: opts.alpha_exp,
        beta_exp: opts.beta_exp,
        averaging: opts.averaging,
        counts,
    }
}

pub fn sw_profile(
    corpus: &Corpus,
    system: &TermSystem,
    spec: &WindowSpec,
    opts: &ProfileOptions,
) -> Result<SWProfile> {
    let scan = scan_corpus(corpus, system, spec)?;
    Ok(profile_from_scan(&scan, opts))
}

pub const DEFAULT_CURVE_POINTS: usize = 17;
pub const DEFAULT_BIN_HALFWIDTH: f64 = 0.03;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub position: f64,
    /// Significant windows per 100 windows; `None` when the bin is empty.
    pub rate: Option<f64>,
    pub windows: usize,
    pub significant: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationCurve {
    pub corpus: String,
    pub system: String,
    pub omega: usize,
    pub bin_halfwidth: f64,
    pub points: Vec<CurvePoint>,
}

impl LocationCurve {
    pub fn rates(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.rate).collect()
    }
}

/// Window center scaled to [0, 1] over the fulltext.
pub fn normalized_center(center: f64, len: usize) -> f64 {
    if len <= 1 {
        0.0
    } else {
        center / (len - 1) as f64
    }
}

/// Rate of significant windows around `n_points` evenly spaced relative
/// positions. Each point pools the windows whose normalized center lies within
/// `bin_halfwidth` of it; the two end bins only see half that span.
pub fn curve_from_scan(scan: &CorpusScan, n_points: usize, bin_halfwidth: f64) -> Result<LocationCurve> {
    if n_points < 2 {
        return Err(Error::Domain(format!("a curve needs at least 2 points, got {n_points}")));
    }
    if bin_halfwidth.is_nan() || bin_halfwidth <= 0.0 {
        return Err(Error::Domain(format!("bin half-width must be positive, got {bin_halfwidth}")));
    }
    const EPS: f64 = 1e-12;
    let positions: Vec<f64> = (0..n_points)
        .map(|i| i as f64 / (n_points - 1) as f64)
        .collect();
    let mut windows = vec![0usize; n_points];
    let mut significant = vec![0usize; n_points];
    for doc in &scan.docs {
        for w in &doc.windows {
            let c = normalized_center(w.center(), doc.len());
            let lo = ((c - bin_halfwidth - EPS) * (n_points - 1) as f64).ceil().max(0.0) as usize;
            let hi = ((c + bin_halfwidth + EPS) * (n_points - 1) as f64)
                .floor()
                .min((n_points - 1) as f64);
            if hi < 0.0 {
                continue;
            }
            for i in lo..=hi as usize {
                if (c - positions[i]).abs() <= bin_halfwidth + EPS {
                    windows[i] += 1;
                    significant[i] += w.significant as usize;
                }
            }
        }
    }
    let points = positions
        .into_iter()
        .enumerate()
        .map(|(i, position)| CurvePoint {
            position,
            rate: (windows[i] > 0).then(|| 100.0 * significant[i] as f64 / windows[i] as f64),
            windows: windows[i],
            significant: significant[i],
        })
        .collect();
    Ok(LocationCurve {
        corpus: scan.corpus.clone(),
        system: scan.system.clone(),
        omega: scan.spec.omega,
        bin_halfwidth,
        points,
    })
}

pub fn location_curve(
    corpus: &Corpus,
    system: &TermSystem,
    spec: &WindowSpec,
    n_points: usize,
    bin_halfwidth: f64,
) -> Result<LocationCurve> {
    let scan = scan_corpus(corpus, system, spec)?;
    if let Some(id) = scan.too_short.first() {
        let doc = corpus.documents().iter().find(|d| d.id() == id).expect("scanned doc");
        return Err(Error::DocumentTooShort {
            doc_id: id.clone(),
            len: doc.fulltext().len(),
            omega: spec.omega,
        });
    }
    curve_from_scan(&scan, n_points, bin_halfwidth)
}

/// A window position: document id and start offset.
pub type WindowKey = (String, usize);

pub fn significant_keys(scan: &CorpusScan) -> BTreeSet<WindowKey> {
    scan.windows()
        .filter(|w| w.significant)
        .map(|w| (w.doc_id.clone(), w.start))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mark {
    Plus,
    Minus,
    None,
}

impl Mark {
    pub fn suffix(self) -> &'static str {
        match self {
            Mark::Plus => "+",
            Mark::Minus => "-",
            Mark::None => "",
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.suffix())
    }
}

/// Conditional overlap `Pr(row | col)` between the significant-window sets of
/// several S-term systems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapMatrix {
    pub systems: Vec<String>,
    /// `cells[row][col]`; `None` when the column system has no significant window.
    pub cells: Vec<Vec<Option<f64>>>,
    pub sw_counts: Vec<usize>,
    pub intersections: Vec<Vec<usize>>,
    /// `Plus` marks a most precise predictor column, `Minus` the opposite.
    pub col_marks: Vec<Mark>,
    /// `Plus` marks an easy-to-predict row, `Minus` the opposite.
    pub row_marks: Vec<Mark>,
}

impl OverlapMatrix {
    pub fn cell(&self, row: &str, col: &str) -> Option<f64> {
        let r = self.systems.iter().position(|s| s == row)?;
        let c = self.systems.iter().position(|s| s == col)?;
        self.cells[r][c]
    }

    /// Labels of the most precise predictor columns.
    pub fn mpp(&self) -> Vec<&str> {
        self.systems
            .iter()
            .zip(&self.col_marks)
            .filter(|(_, m)| **m == Mark::Plus)
            .map(|(s, _)| s.as_str())
            .collect()
    }
}

/// Column and row marks for a square matrix of conditional probabilities.
///
/// Column `x` is `+` when every off-diagonal value in it strictly exceeds the
/// transposed value in row `x`, and `-` when every one is strictly below. Row
/// `x` then gets the opposite mark. Undefined cells block any mark.
#[allow(clippy::needless_range_loop)]
pub fn mark_matrix(cells: &[Vec<Option<f64>>]) -> (Vec<Mark>, Vec<Mark>) {
    let n = cells.len();
    let mut cols = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for x in 0..n {
        let pairs: Vec<Option<(f64, f64)>> = (0..n)
            .filter(|&y| y != x)
            .map(|y| Some((cells[y][x]?, cells[x][y]?)))
            .collect();
        let all = |f: fn(f64, f64) -> bool| {
            !pairs.is_empty() && pairs.iter().all(|p| p.is_some_and(|(c, r)| f(c, r)))
        };
        let (col, row) = if all(|c, r| c > r) {
            (Mark::Plus, Mark::Minus)
        } else if all(|c, r| c < r) {
            (Mark::Minus, Mark::Plus)
        } else {
            (Mark::None, Mark::None)
        };
        cols.push(col);
        rows.push(row);
    }
    (cols, rows)
}

pub fn overlap_from_sets(labels: &[String], sets: &[BTreeSet<WindowKey>]) -> Result<OverlapMatrix> {
    if labels.len() != sets.len() {
        return Err(Error::Domain("one label per window set is required".into()));
    }
    if sets.len() < 2 {
        return Err(Error::InsufficientData("overlap needs at least two systems".into()));
    }
    let n = sets.len();
    let intersections: Vec<Vec<usize>> = (0..n)
        .map(|r| (0..n).map(|c| sets[r].intersection(&sets[c]).count()).collect())
        .collect();
    let cells = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let den = sets[c].len();
                    (den > 0).then(|| intersections[r][c] as f64 / den as f64)
                })
                .collect()
        })
        .collect::<Vec<Vec<_>>>();
    let (col_marks, row_marks) = mark_matrix(&cells);
    Ok(OverlapMatrix {
        systems: labels.to_vec(),
        cells,
        sw_counts: sets.iter().map(BTreeSet::len).collect(),
        intersections,
        col_marks,
        row_marks,
    })
}

pub fn overlap_matrix(corpus: &Corpus, systems: &[TermSystem], spec: &WindowSpec) -> Result<OverlapMatrix> {
    if systems.len() < 2 {
        return Err(Error::InsufficientData("overlap needs at least two systems".into()));
    }
    let mut labels = Vec::with_capacity(systems.len());
    let mut sets = Vec::with_capacity(systems.len());
    for sys in systems {
        let scan = scan_corpus(corpus, sys, spec)?;
        labels.push(sys.label().to_string());
        sets.push(significant_keys(&scan));
    }
    overlap_from_sets(&labels, &sets)
}
