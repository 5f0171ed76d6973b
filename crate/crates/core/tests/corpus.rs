use std::collections::BTreeMap;

use proptest::prelude::*;
use subwin_core::corpus::{
    load_corpus, remove_stopwords, tokenize, tokens_from_surfaces, write_corpus, Corpus, CorpusFormat, Document,
    FieldName, Orientation, Stoplist, Token, TokenizePolicy,
};

fn policy(keep_digits: bool) -> TokenizePolicy {
    TokenizePolicy { keep_digits }
}

proptest! {
    #[test]
    fn tokenizing_is_idempotent(raw in "[a-zA-Z0-9éü '\\-.,;:!?()\\n]{0,200}", keep in any::<bool>()) {
        let once = tokenize(&raw, policy(keep));
        let again = tokenize(&once.join(" "), policy(keep));
        prop_assert_eq!(once, again);
    }

    #[test]
    fn stopword_removal_keeps_an_ordered_subsequence(
        words in prop::collection::vec("(the|of|a|and|quark|gluon|lattice|in)", 0..60)
    ) {
        let stop = Stoplist::new(["the", "of", "a", "and", "in"]);
        let tokens = tokens_from_surfaces(&words);
        let kept = remove_stopwords(&tokens, &stop);
        let expected: Vec<&String> = words.iter().filter(|w| !stop.contains(w)).collect();
        prop_assert_eq!(kept.iter().map(|t| &t.surface).collect::<Vec<_>>(), expected);
        prop_assert_eq!(remove_stopwords(&kept, &stop), kept.clone());
        prop_assert!(kept.windows(2).all(|w| w[0].position < w[1].position));
    }

    #[test]
    fn pretagged_round_trip(
        docs in prop::collection::vec(
            prop::collection::vec(("[a-z0-9_\\\\,.]{1,6}", "[A-Z]{1,3}\\$?"), 1..25),
            1..5,
        )
    ) {
        let documents: Vec<Document> = docs
            .iter()
            .enumerate()
            .map(|(d, pairs)| {
                let tokens: Vec<Token> = pairs.iter().enumerate().map(|(i, (w, t))| Token::tagged(w.clone(), t.clone(), i)).collect();
                let mut fields = BTreeMap::new();
                fields.insert(FieldName::Title, tokens[..tokens.len().min(3)].to_vec());
                fields.insert(FieldName::Fulltext, tokens);
                Document::new(format!("doc{d}"), "c", fields).unwrap()
            })
            .collect();
        let corpus = Corpus::new("c", Orientation::Theory, documents).unwrap();
        let mut buf = Vec::new();
        write_corpus(&corpus, CorpusFormat::PretaggedJson, &mut buf).unwrap();
        let back = load_corpus(buf.as_slice(), CorpusFormat::PretaggedJson, TokenizePolicy::default()).unwrap();
        prop_assert_eq!(back, corpus);
    }
}

#[test]
fn plain_json_round_trip_of_tokenized_text() {
    let raw = r#"{"name": "c", "orientation": "practice", "documents": [
        {"id": "1", "fields": {"title": "Quark Masses", "fulltext": "The quark-gluon plasma, in 1995."}}]}"#;
    let c = load_corpus(raw.as_bytes(), CorpusFormat::Json, TokenizePolicy::default()).unwrap();
    let mut buf = Vec::new();
    write_corpus(&c, CorpusFormat::Json, &mut buf).unwrap();
    let back = load_corpus(buf.as_slice(), CorpusFormat::Json, TokenizePolicy::default()).unwrap();
    assert_eq!(back, c);
    assert_eq!(c.orientation(), Orientation::Practice);
}
