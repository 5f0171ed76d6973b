//! Seeded synthetic corpora.
//!
//! Real discipline collections are not redistributable, so the tools ship with
//! a generator that writes tagged articles from a small sentence grammar. Each
//! discipline has its own vocabulary size, word-frequency skew, sentence mix
//! and a profile describing where in the fulltext its topic terms cluster.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, FieldName, Orientation, Token};
use crate::error::Result;
use crate::window::{binomial_tail, WindowSpec};

/// How topic-term density varies with relative position in the fulltext.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocationShape {
    Flat,
    Front,
    Back,
    Middle,
}

impl LocationShape {
    pub fn weight(self, x: f64) -> f64 {
        match self {
            LocationShape::Flat => 1.0,
            LocationShape::Front => 1.7 - 1.4 * x,
            LocationShape::Back => 0.3 + 1.4 * x,
            LocationShape::Middle => 0.4 + 4.8 * x * (1.0 - x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisciplineParams {
    pub name: String,
    pub orientation: Orientation,
    /// Distinguishes this discipline's invented vocabulary.
    pub vocab_seed: u64,
    /// Content words per open word class.
    pub vocab_size: usize,
    /// Share of each open class drawn from vocabulary common to all disciplines.
    pub shared_fraction: f64,
    pub zipf_exponent: f64,
    pub doc_len: (usize, usize),
    pub topic_terms: usize,
    pub topic_rate: f64,
    pub location: LocationShape,
    /// Relative weight of each sentence template in [`TEMPLATES`].
    pub template_weights: Vec<f64>,
    pub citations: bool,
    pub section_headers: bool,
    pub mesh: bool,
}

/// Sentence templates over Penn tags.
pub const TEMPLATES: [&str; 10] = [
    "DT JJ NN IN DT NN VBZ VBN .",
    "DT NN IN NN NN VBD JJ .",
    "PRP VBP DT JJ NNS IN CD NNS .",
    "DT NN NN VBZ RB JJ , CC DT NNS MD VB DT NN .",
    "IN DT NN , PRP VBD DT NN IN NNP NN .",
    "DT JJ NN NN IN DT NN TO VB DT NNS .",
    "NNS IN CD VBD JJ IN DT NN .",
    "DT NN WDT VBZ JJ NNS VBZ DT NN IN DT NN .",
    "PRP MD VB IN DT NN IN CD , DT JJ NN .",
    "DT FW NNS VBD IN NN NN NNS .",
];

const OPEN_CLASSES: [&str; 9] = ["NN", "JJ", "VB", "VBZ", "VBD", "VBN", "RB", "NNP", "FW"];

fn function_words(tag: &str) -> Option<&'static [&'static str]> {
    Some(match tag {
        "DT" => &["the", "a", "this", "an", "these", "each"],
        "IN" => &["of", "in", "for", "with", "on", "by", "from", "at", "between"],
        "CC" => &["and", "or", "but"],
        "TO" => &["to"],
        "MD" => &["can", "may", "will", "should", "must"],
        "WDT" => &["which", "that"],
        "PRP" => &["we", "it", "they"],
        "VBP" => &["have", "find", "obtain", "use", "see", "consider"],
        "," => &[","],
        "." => &["."],
        _ => return None,
    })
}

const SYLLABLES: [&str; 24] = [
    "ka", "ro", "mi", "ne", "tu", "sa", "lo", "vi", "pe", "da", "zo", "ri", "fe", "gu", "ha", "bo",
    "xi", "ly", "qua", "sen", "tor", "mel", "dri", "pan",
];

const SUFFIXES: [(&str, &str); 9] = [
    ("NN", "on"),
    ("JJ", "ic"),
    ("VB", "ate"),
    ("VBZ", "ates"),
    ("VBD", "ated"),
    ("VBN", "ated"),
    ("RB", "ly"),
    ("NNP", "son"),
    ("FW", "um"),
];

fn pseudo_word(seed: u64, class: &str, index: usize) -> String {
    let mut n = index as u64 * 7919 + seed * 104_729 + 13;
    let mut w = String::new();
    for _ in 0..2 + (index % 2) {
        w.push_str(SYLLABLES[(n % SYLLABLES.len() as u64) as usize]);
        n = n / SYLLABLES.len() as u64 + index as u64 + 1;
    }
    // the index keeps words distinct within a class
    w.push_str(&index.to_string().chars().map(|c| (b'a' + c as u8 - b'0') as char).collect::<String>());
    let suffix = SUFFIXES.iter().find(|(t, _)| *t == class).map_or("", |(_, s)| s);
    w.push_str(suffix);
    w
}

/// A discipline vocabulary: per open class, a list of words.
#[derive(Debug, Clone)]
struct Vocabulary {
    words: BTreeMap<&'static str, Vec<String>>,
    cumulative: Vec<f64>,
}

impl Vocabulary {
    fn new(p: &DisciplineParams) -> Self {
        let shared = (p.vocab_size as f64 * p.shared_fraction).round() as usize;
        let mut words = BTreeMap::new();
        for class in OPEN_CLASSES {
            let list = (0..p.vocab_size)
                .map(|i| {
                    if i < shared {
                        pseudo_word(0, class, i)
                    } else {
                        pseudo_word(p.vocab_seed, class, i)
                    }
                })
                .collect();
            words.insert(class, list);
        }
        let mut acc = 0.0;
        let cumulative = (0..p.vocab_size)
            .map(|k| {
                acc += 1.0 / ((k + 1) as f64).powf(p.zipf_exponent);
                acc
            })
            .collect();
        Vocabulary { words, cumulative }
    }

    fn zipf_index(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty vocabulary");
        let u = rng.random::<f64>() * total;
        self.cumulative.partition_point(|&c| c < u).min(self.cumulative.len() - 1)
    }

    fn draw(&self, class: &str, rng: &mut ChaCha8Rng) -> String {
        let i = self.zipf_index(rng);
        self.words[class][i].clone()
    }
}

fn pluralize(noun: &str) -> String {
    format!("{noun}s")
}

struct TopicSet {
    nouns: Vec<String>,
    adjs: Vec<String>,
}

struct Writer<'a> {
    params: &'a DisciplineParams,
    vocab: &'a Vocabulary,
    topic: &'a TopicSet,
    rng: &'a mut ChaCha8Rng,
}

impl Writer<'_> {
    fn fill(&mut self, tag: &str, topic_p: f64) -> String {
        if let Some(words) = function_words(tag) {
            return words[self.rng.random_range(0..words.len())].to_string();
        }
        let use_topic = self.rng.random::<f64>() < topic_p;
        match tag {
            "NN" if use_topic => self.topic.nouns[self.rng.random_range(0..self.topic.nouns.len())].clone(),
            "NNS" if use_topic => pluralize(&self.topic.nouns[self.rng.random_range(0..self.topic.nouns.len())]),
            "JJ" if use_topic => self.topic.adjs[self.rng.random_range(0..self.topic.adjs.len())].clone(),
            "NNS" => pluralize(&self.vocab.draw("NN", self.rng)),
            "CD" => self.rng.random_range(1..200u32).to_string(),
            "NNP" => {
                let w = self.vocab.draw("NNP", self.rng);
                let mut c = w.chars();
                c.next()
                    .map(|f| f.to_uppercase().collect::<String>() + c.as_str())
                    .unwrap_or_default()
            }
            other => self.vocab.draw(other, self.rng),
        }
    }

    fn sentence(&mut self, topic_p: f64) -> Vec<(String, String)> {
        let total: f64 = self.params.template_weights.iter().sum();
        let mut u = self.rng.random::<f64>() * total;
        let mut idx = 0;
        for (i, w) in self.params.template_weights.iter().enumerate() {
            if u < *w {
                idx = i;
                break;
            }
            u -= w;
            idx = i;
        }
        TEMPLATES[idx]
            .split_whitespace()
            .map(|tag| (self.fill(tag, topic_p), tag.to_string()))
            .collect()
    }

    fn text(&mut self, len: usize, base_rate: f64, shape: LocationShape) -> Vec<(String, String)> {
        let mut out = Vec::with_capacity(len + 20);
        while out.len() < len {
            let x = out.len() as f64 / len as f64;
            let rate = (base_rate * shape.weight(x)).clamp(0.0, 0.95);
            out.extend(self.sentence(rate));
        }
        out
    }
}

fn to_tokens(pairs: Vec<(String, String)>) -> Vec<Token> {
    pairs
        .into_iter()
        .enumerate()
        .map(|(i, (w, t))| Token::tagged(w.to_lowercase(), t, i))
        .collect()
}

fn name_seed(name: &str) -> u64 {
    // FNV-1a, stable across platforms and releases
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn document(p: &DisciplineParams, vocab: &Vocabulary, index: usize, rng: &mut ChaCha8Rng) -> Result<Document> {
    let topic = TopicSet {
        nouns: (0..p.topic_terms).map(|_| vocab.draw("NN", rng)).collect(),
        adjs: (0..p.topic_terms.div_ceil(2)).map(|_| vocab.draw("JJ", rng)).collect(),
    };
    let len = rng.random_range(p.doc_len.0..=p.doc_len.1);
    let mut w = Writer {
        params: p,
        vocab,
        topic: &topic,
        rng,
    };
    let mut fields = BTreeMap::new();

    let mut title = vec![("the".to_string(), "DT".to_string())];
    title.push((w.fill("JJ", 1.0), "JJ".into()));
    title.push((w.fill("NN", 1.0), "NN".into()));
    title.push(("of".into(), "IN".into()));
    for _ in 0..w.rng.random_range(1..=3) {
        title.push((w.fill("NN", 0.8), "NN".into()));
    }
    fields.insert(FieldName::Title, to_tokens(title));

    let abstract_len = w.rng.random_range(60..=110);
    fields.insert(
        FieldName::Abstract,
        to_tokens(w.text(abstract_len, (p.topic_rate * 1.8).min(0.9), LocationShape::Flat)),
    );
    fields.insert(FieldName::Fulltext, to_tokens(w.text(len, p.topic_rate, p.location)));

    if p.citations {
        let mut cites = Vec::new();
        for _ in 0..w.rng.random_range(6..=14) {
            cites.push((w.fill("NNP", 0.0), "NNP".into()));
            cites.push((",".into(), ",".into()));
            cites.push((w.rng.random_range(1970..1996u32).to_string(), "CD".into()));
            cites.push((".".into(), ".".into()));
            cites.push((w.fill("JJ", 0.3), "JJ".into()));
            cites.push((w.fill("NN", 0.3), "NN".into()));
            cites.push((w.fill("NNS", 0.2), "NNS".into()));
            cites.push((".".into(), ".".into()));
        }
        fields.insert(FieldName::Citations, to_tokens(cites));
    }
    if p.section_headers {
        let mut hdrs = vec![("introduction".to_string(), "NN".to_string())];
        for _ in 0..w.rng.random_range(2..=5) {
            hdrs.push((w.fill("JJ", 0.5), "JJ".into()));
            hdrs.push((w.fill("NN", 0.5), "NN".into()));
        }
        hdrs.push(("results".into(), "NNS".into()));
        hdrs.push(("conclusion".into(), "NN".into()));
        fields.insert(FieldName::SectionHeaders, to_tokens(hdrs));
    }
    if p.mesh {
        let major = topic.nouns.iter().take(4).map(|n| (n.clone(), "NN".to_string())).collect();
        fields.insert(FieldName::MeshMajor, to_tokens(major));
        let minor = (0..w.rng.random_range(10..=18))
            .map(|_| (vocab.draw("NN", w.rng), "NN".to_string()))
            .collect();
        fields.insert(FieldName::MeshMinor, to_tokens(minor));
    }
    Document::new(format!("{}-{:03}", p.name, index), p.name.clone(), fields)
}

/// Generates `n_docs` tagged documents (Penn tags) for a discipline.
pub fn generate_corpus(p: &DisciplineParams, n_docs: usize, seed: u64) -> Result<Corpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ name_seed(&p.name));
    let vocab = Vocabulary::new(p);
    let docs = (0..n_docs)
        .map(|i| document(p, &vocab, i, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    Corpus::new(p.name.clone(), p.orientation, docs)
}

/// A subject dictionary for a discipline: its most frequent discipline
/// specific nouns and adjectives, plus entries that never occur in text.
pub fn dictionary(p: &DisciplineParams, size: usize) -> Vec<String> {
    let shared = (p.vocab_size as f64 * p.shared_fraction).round() as usize;
    let mut terms = Vec::with_capacity(2 * size + 10);
    for i in shared..(shared + size).min(p.vocab_size) {
        terms.push(pseudo_word(p.vocab_seed, "NN", i));
        terms.push(pluralize(&pseudo_word(p.vocab_seed, "NN", i)));
        terms.push(pseudo_word(p.vocab_seed, "JJ", i));
    }
    for i in 0..10 {
        terms.push(pseudo_word(p.vocab_seed + 1000, "NN", i));
    }
    terms.sort();
    terms.dedup();
    terms
}

/// Four collections along the theory/practice axis: a medical-like and an
/// experimental-physics-like practice corpus, and a theoretical-physics-like
/// and a linguistics-like theory corpus.
pub fn standard_disciplines() -> Vec<DisciplineParams> {
    vec![
        DisciplineParams {
            name: "medsyn".into(),
            orientation: Orientation::Practice,
            vocab_seed: 11,
            vocab_size: 2000,
            shared_fraction: 0.3,
            zipf_exponent: 0.8,
            doc_len: (700, 1300),
            topic_terms: 6,
            topic_rate: 0.22,
            location: LocationShape::Front,
            template_weights: vec![0.5, 1.0, 4.0, 0.5, 0.5, 0.5, 4.0, 0.5, 0.5, 0.5],
            citations: false,
            section_headers: false,
            mesh: true,
        },
        DisciplineParams {
            name: "physexp".into(),
            orientation: Orientation::Practice,
            vocab_seed: 23,
            vocab_size: 1000,
            shared_fraction: 0.3,
            zipf_exponent: 0.95,
            doc_len: (800, 1400),
            topic_terms: 5,
            topic_rate: 0.2,
            location: LocationShape::Flat,
            template_weights: vec![1.0, 4.0, 1.0, 0.5, 2.0, 1.0, 1.0, 0.5, 1.0, 3.5],
            citations: true,
            section_headers: true,
            mesh: false,
        },
        DisciplineParams {
            name: "physth".into(),
            orientation: Orientation::Theory,
            vocab_seed: 37,
            vocab_size: 500,
            shared_fraction: 0.3,
            zipf_exponent: 1.1,
            doc_len: (1000, 1700),
            topic_terms: 4,
            topic_rate: 0.18,
            location: LocationShape::Back,
            template_weights: vec![2.0, 0.5, 0.5, 3.0, 1.5, 2.0, 0.5, 3.0, 3.0, 0.2],
            citations: true,
            section_headers: true,
            mesh: false,
        },
        DisciplineParams {
            name: "linguistics".into(),
            orientation: Orientation::Theory,
            vocab_seed: 41,
            vocab_size: 450,
            shared_fraction: 0.3,
            zipf_exponent: 1.15,
            doc_len: (1100, 1800),
            topic_terms: 4,
            topic_rate: 0.16,
            location: LocationShape::Middle,
            template_weights: vec![3.5, 0.5, 0.3, 1.0, 3.5, 3.5, 0.3, 1.0, 1.0, 0.2],
            citations: true,
            section_headers: true,
            mesh: false,
        },
    ]
}

/// S-token placements for constructed location experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    /// One run of `run` S-tokens at a random offset inside every block of
    /// `period` tokens.
    Stratified { period: usize, run: usize },
    /// S-tokens only after relative position `from`, with probability rising
    /// linearly from 0 there to `peak` at the end.
    TailRamp { from: f64, peak: f64 },
}

pub const S_WORD: &str = "sterm";
pub const FILLER_WORD: &str = "filler";

/// Untagged documents of fixed length whose fulltexts hold the S word
/// [`S_WORD`] at positions chosen by `placement`. Every document gets a title
/// containing only the S word, so per-document title systems apply.
pub fn placement_corpus(n_docs: usize, len: usize, placement: Placement, seed: u64) -> Result<Corpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::with_capacity(n_docs);
    for d in 0..n_docs {
        let mut is_s = vec![false; len];
        match placement {
            Placement::Stratified { period, run } => {
                for block in (0..len).step_by(period) {
                    let room = period.min(len - block).saturating_sub(run);
                    let off = rng.random_range(0..=room);
                    for s in is_s.iter_mut().skip(block + off).take(run) {
                        *s = true;
                    }
                }
            }
            Placement::TailRamp { from, peak } => {
                for (i, s) in is_s.iter_mut().enumerate() {
                    let x = i as f64 / (len - 1).max(1) as f64;
                    if x > from {
                        *s = rng.random::<f64>() < peak * (x - from) / (1.0 - from);
                    }
                }
            }
        }
        let full = is_s
            .iter()
            .enumerate()
            .map(|(i, &s)| Token::new(if s { S_WORD } else { FILLER_WORD }, i))
            .collect();
        let mut fields = BTreeMap::new();
        fields.insert(FieldName::Title, vec![Token::new(S_WORD, 0)]);
        fields.insert(FieldName::Fulltext, full);
        docs.push(Document::new(format!("p{d:04}"), "placement", fields)?);
    }
    Corpus::new("placement", Orientation::Unlabeled, docs)
}

/// Outcome of a random-placement false-positive experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub seed: u64,
    pub windows: usize,
    pub significant: usize,
    pub fraction: f64,
    pub p: f64,
    /// The S-probability used by the test (the generating p unless estimated).
    pub p_used: f64,
    pub omega: usize,
    pub alpha: f64,
    /// Binomial standard error of a fraction alpha over `windows` draws.
    pub sigma: f64,
    /// alpha + 3 sigma
    pub bound: f64,
    pub within_bound: bool,
}

/// Places S-tokens independently with probability `p` along a sequence long
/// enough for `windows` windows, and counts how many windows the test calls
/// significant. With `estimate_p` the test uses the observed S fraction
/// instead of the generating probability.
pub fn simulate_false_positives(
    seed: u64,
    windows: usize,
    p: f64,
    spec: &WindowSpec,
    estimate_p: bool,
) -> Result<SimulationReport> {
    spec.validate()?;
    binomial_tail(0, spec.omega, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask: Vec<bool> = (0..windows + spec.omega - 1).map(|_| rng.random::<f64>() < p).collect();
    let p_used = if estimate_p {
        mask.iter().filter(|&&b| b).count() as f64 / mask.len() as f64
    } else {
        p
    };
    let scanned = crate::window::scan_mask("sim", &mask, spec.omega, spec.alpha, p_used)?;
    let significant = scanned.iter().filter(|w| w.significant).count();
    let n = scanned.len();
    let sigma = (spec.alpha * (1.0 - spec.alpha) / n as f64).sqrt();
    let fraction = significant as f64 / n as f64;
    let bound = spec.alpha + 3.0 * sigma;
    Ok(SimulationReport {
        seed,
        windows: n,
        significant,
        fraction,
        p,
        p_used,
        omega: spec.omega,
        alpha: spec.alpha,
        sigma,
        bound,
        within_bound: fraction <= bound,
    })
}
