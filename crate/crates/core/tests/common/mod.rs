#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use subwin_core::corpus::{Corpus, Document, FieldName, Orientation, Token};
use subwin_core::sterm::{Recipe, STermSet, TermSystem};

/// A one-field document whose fulltext marks S positions with `s` and the rest with `x`.
pub fn mask_doc(id: &str, mask: &[bool]) -> Document {
    let full = mask
        .iter()
        .enumerate()
        .map(|(i, &b)| Token::new(if b { "s" } else { "x" }, i))
        .collect();
    let mut fields = BTreeMap::new();
    fields.insert(FieldName::Fulltext, full);
    Document::new(id, "test", fields).unwrap()
}

pub fn mask_corpus(masks: &[Vec<bool>]) -> Corpus {
    let docs = masks
        .iter()
        .enumerate()
        .map(|(i, m)| mask_doc(&format!("d{i}"), m))
        .collect();
    Corpus::new("test", Orientation::Unlabeled, docs).unwrap()
}

pub fn global(label: &str, terms: &[&str]) -> TermSystem {
    TermSystem::Global(STermSet {
        label: label.to_string(),
        terms: terms.iter().map(|t| t.to_string()).collect::<BTreeSet<_>>(),
        recipe: Recipe::Dictionary { path: String::new() },
        stoplist_applied: false,
    })
}

pub fn factorial(n: u64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Binomial upper tail from factorials.
pub fn naive_tail(r: usize, omega: usize, p: f64) -> f64 {
    (r..=omega)
        .map(|k| {
            factorial(omega as u64) / (factorial(k as u64) * factorial((omega - k) as u64))
                * p.powi(k as i32)
                * (1.0 - p).powi((omega - k) as i32)
        })
        .sum()
}
