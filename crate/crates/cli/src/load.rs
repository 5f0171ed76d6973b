//! Reading corpora and resource files named on the command line.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{bail, Context};
use clap::ValueEnum;
use subwin_core::corpus::{load_corpus, Corpus, CorpusFormat, Stoplist, Subset, TokenizePolicy};
use subwin_core::grammar::TagMap;
use subwin_core::sterm::{dictionary_sterms, STermSet};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum FormatArg {
    /// Pretagged when every field parses as word_TAG pairs, raw text otherwise.
    #[default]
    Auto,
    Json,
    PretaggedJson,
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

pub fn read_corpus(path: &Path, format: FormatArg, subset: Subset) -> anyhow::Result<Corpus> {
    let policy = TokenizePolicy::default();
    let corpus = match format {
        FormatArg::Json => load_corpus(open(path)?, CorpusFormat::Json, policy),
        FormatArg::PretaggedJson => load_corpus(open(path)?, CorpusFormat::PretaggedJson, policy),
        FormatArg::Auto => {
            let bytes = std::fs::read(path).with_context(|| format!("opening {}", path.display()))?;
            load_corpus(bytes.as_slice(), CorpusFormat::PretaggedJson, policy)
                .or_else(|_| load_corpus(bytes.as_slice(), CorpusFormat::Json, policy))
        }
    }
    .with_context(|| format!("loading corpus {}", path.display()))?;
    if corpus.is_empty() {
        bail!("corpus {} has no documents", path.display());
    }
    let corpus = corpus.subset(subset);
    if corpus.is_empty() {
        bail!("corpus {} has no documents in the {subset:?} subset", path.display());
    }
    Ok(corpus)
}

pub fn read_corpora(paths: &[impl AsRef<Path>], format: FormatArg, subset: Subset) -> anyhow::Result<Vec<Corpus>> {
    if paths.is_empty() {
        bail!("no corpus files given");
    }
    let corpora: Vec<Corpus> = paths
        .iter()
        .map(|p| read_corpus(p.as_ref(), format, subset))
        .collect::<anyhow::Result<_>>()?;
    let mut names: Vec<&str> = corpora.iter().map(Corpus::name).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        bail!("two corpora are both named `{}`", w[0]);
    }
    Ok(corpora)
}

pub fn stoplist(cfg: &RunConfig) -> anyhow::Result<Stoplist> {
    match &cfg.stoplist {
        Some(p) => Ok(Stoplist::from_reader(open(p)?).with_context(|| format!("reading stoplist {}", p.display()))?),
        None => Ok(Stoplist::english()),
    }
}

pub fn dictionary(cfg: &RunConfig) -> anyhow::Result<Option<STermSet>> {
    cfg.dictionary
        .as_ref()
        .map(|p| {
            dictionary_sterms(open(p)?, &p.display().to_string(), None)
                .with_context(|| format!("reading dictionary {}", p.display()))
        })
        .transpose()
}

pub fn tagmap(cfg: &RunConfig) -> anyhow::Result<TagMap> {
    match &cfg.tagmap {
        Some(p) => Ok(TagMap::from_tsv(open(p)?).with_context(|| format!("reading tag map {}", p.display()))?),
        None => Ok(TagMap::penn()),
    }
}
