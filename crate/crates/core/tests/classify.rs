use subwin_core::classify::{features, select_constructs, FeatureConfig, ProfileStore};
use subwin_core::corpus::{Corpus, FieldName};
use subwin_core::grammar::TagMap;
use subwin_core::lexstats::TtrRule;
use subwin_core::sterm::TermSystem;
use subwin_core::synth::{generate_corpus, standard_disciplines};
use subwin_core::window::WindowSpec;

fn trained() -> (ProfileStore, TagMap) {
    let tagmap = TagMap::penn();
    let corpora: Vec<Corpus> = standard_disciplines()
        .iter()
        .map(|p| generate_corpus(p, 12, 1).unwrap())
        .collect();
    let refs: Vec<&Corpus> = corpora.iter().collect();
    let constructs = select_constructs(
        &refs,
        &TermSystem::per_document(FieldName::Title, None),
        &WindowSpec::default(),
        4..=4,
        20,
        6,
        &tagmap,
    )
    .unwrap();
    assert_eq!(constructs.len(), 6);
    let mut store = ProfileStore::new(FeatureConfig {
        constructs,
        ..FeatureConfig::default()
    });
    for c in &corpora {
        store.add_corpus(c, &tagmap).unwrap();
    }
    (store, tagmap)
}

#[test]
fn fresh_documents_match_their_generating_profile() {
    let (store, tagmap) = trained();
    let mut wrong = Vec::new();
    for (i, p) in standard_disciplines().iter().enumerate() {
        for seed in (1..=10u64).map(|k| 100 * k + i as u64) {
            let doc = generate_corpus(p, 1, seed).unwrap();
            let f = features(&doc, &store.config, &tagmap).unwrap();
            let c = store.classify(&f, &TtrRule::default()).unwrap();
            if c.label != p.name {
                wrong.push((p.name.clone(), seed, c.label));
            }
        }
    }
    assert!(wrong.is_empty(), "{wrong:?}");
}

#[test]
fn store_round_trips_bit_exactly() {
    let (store, _) = trained();
    let mut buf = Vec::new();
    store.write(&mut buf).unwrap();
    let back = ProfileStore::read(buf.as_slice()).unwrap();
    assert_eq!(back, store);
    for (a, b) in back.profiles.iter().zip(&store.profiles) {
        for (x, y) in a.features.iter().zip(&b.features) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn affine_rescaling_keeps_the_argmin() {
    let (store, tagmap) = trained();
    let p = &standard_disciplines()[2];
    let doc = generate_corpus(p, 1, 77).unwrap();
    let f = features(&doc, &store.config, &tagmap).unwrap();
    let base = store.classify(&f, &TtrRule::default()).unwrap();
    let scale: Vec<(f64, f64)> = (0..f.len()).map(|j| (0.5 + j as f64 * 0.75, j as f64 - 3.0)).collect();
    let mut scaled = store.clone();
    for prof in &mut scaled.profiles {
        for (x, (a, b)) in prof.features.iter_mut().zip(&scale) {
            *x = a * *x + b;
        }
        for (s, (a, _)) in prof.spread.iter_mut().zip(&scale) {
            *s *= a.abs();
        }
    }
    let g: Vec<f64> = f.iter().zip(&scale).map(|(x, (a, b))| a * x + b).collect();
    let after = scaled.classify(&g, &TtrRule::default()).unwrap();
    assert_eq!(after.label, base.label);
}

