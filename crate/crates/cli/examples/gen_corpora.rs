//! Regenerates the bundled synthetic corpora and dictionary.
//!
//! cargo run -p subwin --example gen_corpora -- [out_dir]

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use subwin_core::corpus::{write_corpus, CorpusFormat};
use subwin_core::synth::{dictionary, generate_corpus, standard_disciplines};

const DOCS: usize = 24;
const SEED: u64 = 2024;

fn main() -> anyhow::Result<()> {
    let root = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("data"));
    let dir = root.join("corpora");
    fs::create_dir_all(&dir)?;
    let disciplines = standard_disciplines();
    for d in &disciplines {
        let corpus = generate_corpus(d, DOCS, SEED)?;
        let mut w = BufWriter::new(File::create(dir.join(format!("{}.json", d.name)))?);
        write_corpus(&corpus, CorpusFormat::PretaggedJson, &mut w)?;
        w.flush()?;
    }
    let mut w = BufWriter::new(File::create(root.join("dictionary.txt"))?);
    for term in dictionary(&disciplines[0], 300) {
        writeln!(w, "{term}")?;
    }
    w.flush()?;
    Ok(())
}
