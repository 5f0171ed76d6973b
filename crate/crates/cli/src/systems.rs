//! S-term systems by name.
//!
//! `title`, `abstract`, `citations`, `section_headers`, `mesh_major` and
//! `mesh_minor` use each document's own field; a `-nostop` suffix removes
//! stopwords first and `-pooled` takes the union over the corpus instead.
//! `dictionary` reads the configured term list; `bi` and `idf` weight terms of
//! a corpus against all corpora of the run.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail};
use subwin_core::corpus::{Corpus, FieldName, Stoplist};
use subwin_core::sterm::{pooled_field_sterms, weighted_sterms, STermSet, Smoothing, TermSystem, WeightScheme};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemName {
    Field { field: FieldName, nostop: bool, pooled: bool },
    Dictionary,
    Weighted(WeightScheme),
}

impl FromStr for SystemName {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "dictionary" | "dict" => return Ok(SystemName::Dictionary),
            "bi" => return Ok(SystemName::Weighted(WeightScheme::Bi)),
            "idf" => return Ok(SystemName::Weighted(WeightScheme::Idf)),
            _ => {}
        }
        let mut base = s;
        let mut nostop = false;
        let mut pooled = false;
        loop {
            if let Some(b) = base.strip_suffix("-nostop") {
                nostop = true;
                base = b;
            } else if let Some(b) = base.strip_suffix("-pooled") {
                pooled = true;
                base = b;
            } else {
                break;
            }
        }
        let field: FieldName = base.parse().map_err(|_| anyhow!("unknown S-term system `{s}`"))?;
        if field == FieldName::Fulltext {
            bail!("the fulltext cannot define an S-term system");
        }
        Ok(SystemName::Field { field, nostop, pooled })
    }
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemName::Field { field, nostop, pooled } => {
                write!(f, "{field}")?;
                if *pooled {
                    f.write_str("-pooled")?;
                }
                if *nostop {
                    f.write_str("-nostop")?;
                }
                Ok(())
            }
            SystemName::Dictionary => f.write_str("dictionary"),
            SystemName::Weighted(s) => write!(f, "{s}"),
        }
    }
}

/// Shared inputs for building systems over the corpora of one run.
pub struct SystemContext {
    pub stoplist: Stoplist,
    pub dictionary: Option<STermSet>,
    pub combined: Option<Corpus>,
    pub bi_cutoff: f64,
    pub idf_cutoff: f64,
}

impl SystemContext {
    pub fn new(cfg: &RunConfig, corpora: &[Corpus]) -> anyhow::Result<Self> {
        let combined = if corpora.len() > 1 {
            Some(Corpus::combine("combined", &corpora.iter().collect::<Vec<_>>())?)
        } else {
            None
        };
        Ok(SystemContext {
            stoplist: crate::load::stoplist(cfg)?,
            dictionary: crate::load::dictionary(cfg)?,
            combined,
            bi_cutoff: cfg.bi_cutoff,
            idf_cutoff: cfg.idf_cutoff,
        })
    }

    /// The system `name` for `corpus`. Configuration problems are errors;
    /// a system that simply gives the corpus no S-terms is returned as is and
    /// can be checked with [`TermSystem::is_usable_for`].
    pub fn build(&self, name: &SystemName, corpus: &Corpus) -> anyhow::Result<TermSystem> {
        Ok(match name {
            SystemName::Field { field, nostop, pooled: false } => {
                TermSystem::per_document(*field, nostop.then(|| self.stoplist.clone()))
            }
            SystemName::Field { field, nostop, pooled: true } => {
                let mut s = pooled_field_sterms(corpus, *field, nostop.then_some(&self.stoplist))?;
                s.label = name.to_string();
                TermSystem::Global(s)
            }
            SystemName::Dictionary => TermSystem::Global(
                self.dictionary
                    .clone()
                    .ok_or_else(|| anyhow!("the dictionary system needs a dictionary file (--dictionary)"))?,
            ),
            SystemName::Weighted(scheme) => {
                let combined = self.combined.as_ref().ok_or_else(|| {
                    anyhow!("the {scheme} system weights terms against other corpora; give at least two")
                })?;
                let cutoff = match scheme {
                    WeightScheme::Bi => self.bi_cutoff,
                    WeightScheme::Idf => self.idf_cutoff,
                };
                TermSystem::Global(weighted_sterms(corpus, combined, *scheme, cutoff, Smoothing::JEFFREYS)?)
            }
        })
    }

    /// Like [`build`](Self::build) but fails when the corpus gets no S-terms.
    pub fn build_usable(&self, name: &SystemName, corpus: &Corpus) -> anyhow::Result<TermSystem> {
        let sys = self.build(name, corpus)?;
        if !sys.is_usable_for(corpus) {
            bail!("system `{name}` gives corpus `{}` no S-terms", corpus.name());
        }
        Ok(sys)
    }
}
