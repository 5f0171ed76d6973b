mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use subwin_core::corpus::{tokens_from_surfaces, Corpus, Document, FieldName, Orientation};
use subwin_core::sterm::{
    bi_weight, field_sterms, idf_weight, weight_table, weighted_sterms, Smoothing, WeightScheme,
};

fn doc(id: &str, full: &[&str], title: &[&str]) -> Document {
    let mut f = BTreeMap::new();
    f.insert(FieldName::Fulltext, tokens_from_surfaces(full));
    f.insert(FieldName::Title, tokens_from_surfaces(title));
    Document::new(id, "d", f).unwrap()
}

fn corpus(name: &str, docs: Vec<Document>) -> Corpus {
    Corpus::new(name, Orientation::Unlabeled, docs).unwrap()
}

#[test]
fn term_in_every_target_document_and_no_other() {
    let target: Vec<Document> = (0..10).map(|i| doc(&format!("t{i}"), &["quark", "mass"], &["x"])).collect();
    let mut all = target.clone();
    all.extend((0..30).map(|i| doc(&format!("o{i}"), &["mass", "cell"], &["x"])));
    let (target, combined) = (corpus("t", target), corpus("all", all));

    // p = 10.5/11, q = 10.5/41 with add-half smoothing
    let (p, q) = (10.5 / 11.0, 10.5 / 41.0);
    let odds = |x: f64| x / (1.0 - x);
    let expected = (odds(p) / odds(q)).ln() / 2f64.ln();
    assert!((expected - 61f64.log2()).abs() < 1e-12);

    let table = weight_table(&target, &combined, Smoothing::JEFFREYS).unwrap();
    let quark = table.iter().find(|w| w.term == "quark").unwrap();
    assert!((quark.w_bi.unwrap() - expected).abs() < 1e-12);
    let s = weighted_sterms(&target, &combined, WeightScheme::Bi, 5.0, Smoothing::JEFFREYS).unwrap();
    assert!(s.contains("quark"));
    assert!(!s.contains("mass"));
}

proptest! {
    #[test]
    fn bi_weight_is_antisymmetric(p in 0.001f64..0.999, q in 0.001f64..0.999) {
        let a = bi_weight(p, q).unwrap();
        let b = bi_weight(q, p).unwrap();
        prop_assert!((a + b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn idf_weight_decreases(q1 in 1e-6f64..1.0, q2 in 1e-6f64..1.0) {
        prop_assume!(q1 < q2);
        prop_assert!(idf_weight(q1).unwrap() > idf_weight(q2).unwrap());
    }

    #[test]
    fn higher_cutoffs_select_subsets(
        docs in prop::collection::vec(prop::collection::vec(0usize..12, 1..15), 4..20),
        split in 1usize..4,
        c1 in -4.0f64..8.0,
        dc in 0.0f64..6.0,
        bi in any::<bool>(),
    ) {
        let vocab: Vec<String> = (0..12).map(|i| format!("w{i}")).collect();
        let all: Vec<Document> = docs
            .iter()
            .enumerate()
            .map(|(i, ws)| {
                let words: Vec<&str> = ws.iter().map(|&w| vocab[w].as_str()).collect();
                doc(&format!("d{i}"), &words, &["x"])
            })
            .collect();
        let target = corpus("t", all[..split.min(all.len())].to_vec());
        let combined = corpus("all", all);
        let scheme = if bi { WeightScheme::Bi } else { WeightScheme::Idf };
        let lo = weighted_sterms(&target, &combined, scheme, c1, Smoothing::JEFFREYS).unwrap();
        let hi = weighted_sterms(&target, &combined, scheme, c1 + dc, Smoothing::JEFFREYS).unwrap();
        prop_assert!(hi.terms.is_subset(&lo.terms));
    }

    #[test]
    fn field_terms_ignore_token_order(words in prop::collection::vec("[a-e]{1,2}", 1..20), rot in 0usize..20) {
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        let mut rotated = refs.clone();
        rotated.rotate_left(rot % refs.len());
        rotated.reverse();
        let a = field_sterms(&doc("a", &["x"], &refs), FieldName::Title, None).unwrap();
        let b = field_sterms(&doc("a", &["x"], &rotated), FieldName::Title, None).unwrap();
        prop_assert_eq!(a.terms, b.terms);
    }
}
