use std::collections::BTreeMap;

use proptest::prelude::*;
use subwin_core::corpus::{Corpus, Document, FieldName, Orientation, Token};
use subwin_core::lexstats::{anova, fit_polynomial, ttr, type_token_fit};

proptest! {
    #[test]
    fn ttr_ignores_order(words in prop::collection::vec("[a-f]{1,2}", 1..60), seed in any::<u64>()) {
        let mut shuffled = words.clone();
        // deterministic permutation driven by the seed
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(ttr(&words).unwrap(), ttr(&shuffled).unwrap());
    }

    #[test]
    fn least_squares_residual_is_orthogonal(
        pts in prop::collection::vec((0.0f64..10.0, -50.0f64..50.0), 6..40),
        degree in 1usize..4,
    ) {
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let spread = xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
        prop_assume!(spread > 1.0);
        let mut distinct = xs.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        prop_assume!(distinct.len() > degree + 1);
        let fit = fit_polynomial(&pts, degree).unwrap();
        let resid: Vec<f64> = pts.iter().map(|(x, y)| y - fit.predict(*x)).collect();
        let y_norm = pts.iter().map(|p| p.1 * p.1).sum::<f64>().sqrt();
        for j in 0..=degree {
            let col: Vec<f64> = xs.iter().map(|x| x.powi(j as i32)).collect();
            let col_norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            let dot: f64 = col.iter().zip(&resid).map(|(a, b)| a * b).sum();
            prop_assert!(dot.abs() <= 1e-9 * col_norm * (y_norm + 1.0), "power {}: {}", j, dot);
        }
    }

    #[test]
    fn anova_ignores_group_order(
        groups in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2..10), 2..5),
    ) {
        let named: Vec<(String, Vec<f64>)> = groups.iter().enumerate().map(|(i, g)| (format!("g{i}"), g.clone())).collect();
        let mut rev = named.clone();
        rev.reverse();
        for (_, g) in &mut rev {
            g.reverse();
        }
        let a = anova(&named).unwrap();
        let b = anova(&rev).unwrap();
        prop_assert!((a.f - b.f).abs() <= 1e-9 * (1.0 + a.f.abs()) || (a.f.is_infinite() && b.f.is_infinite()));
        prop_assert!((a.p_value - b.p_value).abs() <= 1e-9);
    }
}

#[test]
fn known_cubic_is_recovered() {
    let truth = [3.5, -2.25, 0.75, 0.125];
    let pts: Vec<(f64, f64)> = (0..25)
        .map(|i| {
            let x = 10.0 + 7.0 * i as f64;
            (x, truth.iter().enumerate().map(|(k, c)| c * x.powi(k as i32)).sum())
        })
        .collect();
    let fit = fit_polynomial(&pts, 3).unwrap();
    for (c, t) in fit.coefficients.iter().zip(truth) {
        assert!(((c - t) / t).abs() < 1e-8, "{c} vs {t}");
    }
}

fn repeated_doc(id: String, types: usize, per_type: usize) -> Document {
    let full = (0..types * per_type).map(|i| Token::new(format!("w{}", i % types), i)).collect();
    let mut f = BTreeMap::new();
    f.insert(FieldName::Fulltext, full);
    Document::new(id, "c", f).unwrap()
}

#[test]
fn heavier_reuse_fits_above() {
    let build = |name: &str, per_type: usize| {
        let docs = (0..8).map(|i| repeated_doc(format!("{name}{i}"), 50 + 15 * i + (i * i) % 7, per_type)).collect();
        Corpus::new(name, Orientation::Unlabeled, docs).unwrap()
    };
    let heavy = type_token_fit(&build("heavy", 5), 3).unwrap();
    let light = type_token_fit(&build("light", 3), 3).unwrap();
    for x in (55..150).step_by(5) {
        let x = x as f64;
        assert!(heavy.fit.predict(x) > light.fit.predict(x), "at {x}");
    }
}
