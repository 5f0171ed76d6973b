mod common;

use std::collections::BTreeSet;

use common::{global, mask_corpus, naive_tail};
use proptest::prelude::*;
use subwin_core::corpus::{Corpus, Document, FieldName, Orientation, Token};
use subwin_core::profile::{
    curve_from_scan, location_curve, mark_matrix, overlap_from_sets, overlap_matrix, profile_from_scan, Mark,
    ProfileOptions, WindowKey,
};
use subwin_core::synth::{placement_corpus, Placement};
use subwin_core::sterm::TermSystem;
use subwin_core::window::{scan_corpus, WindowSpec};

fn masks() -> impl Strategy<Value = Vec<Vec<bool>>> {
    prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.15), 5..80), 1..5)
}

/// Union of covered positions, recomputed from first principles.
fn brute_counts(masks: &[Vec<bool>], omega: usize, alpha: f64) -> (usize, usize, usize) {
    let (mut s, mut p, mut sp) = (0, 0, 0);
    for m in masks {
        let k = m.iter().filter(|&&b| b).count();
        let prob = k as f64 / m.len() as f64;
        let mut covered = vec![false; m.len()];
        if m.len() >= omega && k > 0 && k < m.len() {
            for start in 0..=m.len() - omega {
                let r = m[start..start + omega].iter().filter(|&&b| b).count();
                if naive_tail(r, omega, prob) < alpha {
                    covered[start..start + omega].fill(true);
                }
            }
        }
        for (&si, &ci) in m.iter().zip(&covered) {
            s += si as usize;
            p += ci as usize;
            sp += (si && ci) as usize;
        }
    }
    (s, p, sp)
}

proptest! {
    #[test]
    fn sc_and_wwd_share_a_numerator(m in masks(), omega in 1usize..5) {
        let c = mask_corpus(&m);
        let scan = scan_corpus(&c, &global("s", &["s"]), &WindowSpec::new(omega, 0.03).unwrap()).unwrap();
        let prof = profile_from_scan(&scan, &ProfileOptions::default());
        let (s, p, sp) = brute_counts(&m, omega, 0.03);
        prop_assert_eq!((prof.counts.s_tokens, prof.counts.sw_positions, prof.counts.s_in_sw), (s, p, sp));
        if s > 0 {
            prop_assert_eq!((prof.sc * s as f64).round() as usize, sp);
        }
        if p > 0 {
            prop_assert_eq!((prof.wwd * p as f64).round() as usize, sp);
        }
        prop_assert!((prof.q - prof.sc * prof.wwd).abs() <= 1e-12);
    }

    #[test]
    fn curve_rates_survive_duplication(m in masks(), omega in 1usize..4) {
        let m: Vec<Vec<bool>> = m.into_iter().filter(|x| x.len() >= omega).collect();
        prop_assume!(!m.is_empty());
        let twice: Vec<Vec<bool>> = m.iter().chain(m.iter()).cloned().collect();
        let spec = WindowSpec::new(omega, 0.05).unwrap();
        let sys = global("s", &["s"]);
        let a = location_curve(&mask_corpus(&m), &sys, &spec, 17, 0.03).unwrap();
        let b = location_curve(&mask_corpus(&twice), &sys, &spec, 17, 0.03).unwrap();
        prop_assert_eq!(a.rates(), b.rates());
    }

    #[test]
    fn overlap_cells_are_intersection_ratios(
        raw in prop::collection::vec(prop::collection::btree_set((0usize..3, 0usize..20), 0..30), 2..5)
    ) {
        let sets: Vec<BTreeSet<WindowKey>> = raw
            .iter()
            .map(|s| s.iter().map(|(d, k)| (format!("d{d}"), *k)).collect())
            .collect();
        let labels: Vec<String> = (0..sets.len()).map(|i| format!("s{i}")).collect();
        let m = overlap_from_sets(&labels, &sets).unwrap();
        for r in 0..sets.len() {
            for c in 0..sets.len() {
                let inter = sets[r].intersection(&sets[c]).count();
                match m.cells[r][c] {
                    None => prop_assert!(sets[c].is_empty()),
                    Some(v) => {
                        prop_assert_eq!(v, inter as f64 / sets[c].len() as f64);
                        let back = v * sets[c].len() as f64;
                        prop_assert!((back - back.round()).abs() < 1e-9);
                        prop_assert_eq!(back.round() as usize, inter);
                    }
                }
            }
        }
    }
}

#[test]
fn three_systems_on_a_thirty_token_document() {
    // a a b . . . a b b . . . . a a a . . . b . . . a b . . . . .
    let text = "a a b x x x a b b x x x x a a a x x x b x x x a b x x x x x";
    let tokens: Vec<Token> = text.split(' ').enumerate().map(|(i, w)| Token::new(w, i)).collect();
    assert_eq!(tokens.len(), 30);
    let mut fields = std::collections::BTreeMap::new();
    fields.insert(FieldName::Fulltext, tokens.clone());
    let c = Corpus::new("c", Orientation::Unlabeled, vec![Document::new("d", "c", fields).unwrap()]).unwrap();
    let systems = [global("a", &["a"]), global("b", &["b"]), global("ab", &["a", "b"])];
    let spec = WindowSpec::new(3, 0.1).unwrap();
    let m = overlap_matrix(&c, &systems, &spec).unwrap();

    let words: Vec<&str> = text.split(' ').collect();
    let sets: Vec<BTreeSet<usize>> = [vec!["a"], vec!["b"], vec!["a", "b"]]
        .iter()
        .map(|terms| {
            let mask: Vec<bool> = words.iter().map(|w| terms.contains(w)).collect();
            let p = mask.iter().filter(|&&b| b).count() as f64 / 30.0;
            (0..=27)
                .filter(|&s| naive_tail(mask[s..s + 3].iter().filter(|&&b| b).count(), 3, p) < 0.1)
                .collect()
        })
        .collect();
    assert!(sets.iter().all(|s| !s.is_empty()));
    for r in 0..3 {
        for c in 0..3 {
            let expected = sets[r].intersection(&sets[c]).count() as f64 / sets[c].len() as f64;
            assert_eq!(m.cells[r][c], Some(expected), "cell {r},{c}");
        }
    }
}

#[test]
fn tail_packed_placement_peaks_at_the_end() {
    let c = placement_corpus(40, 300, Placement::TailRamp { from: 0.9, peak: 0.9 }, 3).unwrap();
    let sys = TermSystem::per_document(FieldName::Title, None);
    let scan = scan_corpus(&c, &sys, &WindowSpec::new(2, 0.03).unwrap()).unwrap();
    let curve = curve_from_scan(&scan, 17, 0.03).unwrap();
    let rates: Vec<f64> = curve.rates().into_iter().map(Option::unwrap).collect();
    for (pt, r) in curve.points.iter().zip(&rates) {
        if pt.position < 0.8 {
            assert!(*r < 0.5, "{} {r}", pt.position);
        }
    }
    let max = rates.iter().cloned().fold(f64::MIN, f64::max);
    assert_eq!(rates[16], max);
}

fn marks(rows: &[&[f64]]) -> (Vec<Mark>, Vec<Mark>) {
    let cells: Vec<Vec<Option<f64>>> = rows.iter().map(|r| r.iter().map(|&v| Some(v)).collect()).collect();
    mark_matrix(&cells)
}

use Mark::{Minus as M, None as N, Plus as P};

type MarkCase<'a> = (&'a [&'a [f64]], Vec<Mark>, Vec<Mark>);

#[test]
fn reference_matrix_marks() {
    // reference matrices with their expected marks
    let cases: [MarkCase; 4] = [
        (
            &[
                &[1., 0.04, 0.16, 0.19, 0.10],
                &[0.05, 1., 0.10, 0.12, 0.29],
                &[0.18, 0.10, 1., 0.34, 0.16],
                &[0.24, 0.13, 0.37, 1., 0.18],
                &[0.15, 0.36, 0.20, 0.21, 1.],
            ],
            vec![P, N, N, N, M],
            vec![M, N, N, N, P],
        ),
        (
            &[
                &[1., 0.04, 0.11, 0.19, 0.12, 0.16],
                &[0.03, 1., 0.08, 0.07, 0.06, 0.09],
                &[0.09, 0.10, 1., 0.36, 0.21, 0.23],
                &[0.12, 0.06, 0.25, 1., 0.17, 0.15],
                &[0.09, 0.07, 0.19, 0.22, 1., 0.15],
                &[0.29, 0.22, 0.46, 0.42, 0.34, 1.],
            ],
            vec![N, N, N, P, N, M],
            vec![N, N, N, M, N, P],
        ),
        (
            &[
                &[1., 0.01, 0.15, 0.17, 0.13, 0.15],
                &[0.04, 1., 0.15, 0.15, 0.08, 0.12],
                &[0.10, 0.16, 1., 0.32, 0.25, 0.21],
                &[0.08, 0.13, 0.26, 1., 0.18, 0.15],
                &[0.08, 0.09, 0.25, 0.23, 1., 0.16],
                &[0.25, 0.31, 0.51, 0.47, 0.39, 1.],
            ],
            vec![N, N, N, P, N, M],
            vec![N, N, N, M, N, P],
        ),
        (
            &[
                &[1., 0.10, 0.15, 0.32, 0.22, 0.15],
                &[0.06, 1., 0.10, 0.05, 0.06, 0.08],
                &[0.10, 0.11, 1., 0.32, 0.30, 0.31],
                &[0.08, 0.04, 0.24, 1., 0.32, 0.31],
                &[0.07, 0.06, 0.26, 0.35, 1., 0.31],
                &[0.07, 0.07, 0.26, 0.35, 0.32, 1.],
            ],
            vec![M, N, N, P, N, N],
            vec![P, N, N, M, N, N],
        ),
    ];
    for (i, (rows, cols, row_marks)) in cases.iter().enumerate() {
        let (c, r) = marks(rows);
        assert_eq!(&c, cols, "matrix {i} columns");
        assert_eq!(&r, row_marks, "matrix {i} rows");
    }
}
