//! Run configuration: built-in defaults, then a TOML or JSON file, then flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use subwin_core::corpus::{FieldName, Subset};
use subwin_core::grammar::DEFAULT_MIN_SUPPORT;
use subwin_core::lexstats::{DEFAULT_FIT_DEGREE, DEFAULT_PREFIX};
use subwin_core::profile::{DEFAULT_BIN_HALFWIDTH, DEFAULT_CURVE_POINTS};
use subwin_core::sterm::{DEFAULT_BI_CUTOFF, DEFAULT_IDF_CUTOFF};
use subwin_core::window::{PScope, WindowSpec, DEFAULT_ALPHA, DEFAULT_OMEGA};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub omega: usize,
    /// Window length for location curves; `omega` when unset.
    pub curve_omega: Option<usize>,
    pub alpha: f64,
    pub p_scope: PScope,
    pub bi_cutoff: f64,
    pub idf_cutoff: f64,
    pub stoplist: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub tagmap: Option<PathBuf>,
    pub n_points: usize,
    pub bin_halfwidth: f64,
    pub min_support: usize,
    pub max_construct_len: usize,
    /// S-term system behind construct significance.
    pub grammar_system: String,
    pub prefix: usize,
    pub fit_degree: usize,
    pub subset: Subset,
    /// Systems analysed by report-all when available for a corpus.
    pub systems: Vec<String>,
    pub ttr_boundary: f64,
    pub classifier: ClassifierConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierConfig {
    pub curve_fields: Vec<FieldName>,
    pub curve_points: usize,
    pub curve_halfwidth: f64,
    pub constructs: usize,
    pub construct_len: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            curve_fields: vec![FieldName::Title],
            curve_points: 3,
            curve_halfwidth: 0.25,
            constructs: 6,
            construct_len: 4,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            omega: DEFAULT_OMEGA,
            curve_omega: None,
            alpha: DEFAULT_ALPHA,
            p_scope: PScope::PerDocument,
            bi_cutoff: DEFAULT_BI_CUTOFF,
            idf_cutoff: DEFAULT_IDF_CUTOFF,
            stoplist: None,
            dictionary: None,
            tagmap: None,
            n_points: DEFAULT_CURVE_POINTS,
            bin_halfwidth: DEFAULT_BIN_HALFWIDTH,
            min_support: DEFAULT_MIN_SUPPORT,
            max_construct_len: 4,
            grammar_system: "title".into(),
            prefix: DEFAULT_PREFIX,
            fit_degree: DEFAULT_FIT_DEGREE,
            subset: Subset::All,
            systems: [
                "title",
                "abstract",
                "citations",
                "section_headers",
                "mesh_major",
                "dictionary",
                "bi",
                "idf",
            ]
            .map(String::from)
            .to_vec(),
            ttr_boundary: 0.25,
            classifier: ClassifierConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: RunConfig = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?,
            Some("toml") => toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?,
            _ => bail!("config file {} must end in .toml or .json", path.display()),
        };
        // relative resource paths are taken from the config file's directory
        let base = path.parent().unwrap_or(Path::new("."));
        let rebase = |p: Option<PathBuf>| p.map(|p| if p.is_relative() { base.join(p) } else { p });
        Ok(RunConfig {
            stoplist: rebase(cfg.stoplist.clone()),
            dictionary: rebase(cfg.dictionary.clone()),
            tagmap: rebase(cfg.tagmap.clone()),
            ..cfg
        })
    }

    pub fn spec(&self) -> anyhow::Result<WindowSpec> {
        Ok(WindowSpec::new(self.omega, self.alpha)?.with_scope(self.p_scope))
    }

    pub fn curve_spec(&self) -> anyhow::Result<WindowSpec> {
        Ok(self.spec()?.with_omega(self.curve_omega.unwrap_or(self.omega)))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.spec()?;
        self.curve_spec()?.validate()?;
        if self.n_points < 2 {
            bail!("n_points must be at least 2");
        }
        if !(self.bin_halfwidth > 0.0 && self.bin_halfwidth <= 0.5) {
            bail!("bin_halfwidth must be in (0, 0.5]");
        }
        if self.max_construct_len == 0 {
            bail!("max_construct_len must be at least 1");
        }
        if self.fit_degree == 0 {
            bail!("fit_degree must be at least 1");
        }
        Ok(())
    }
}
