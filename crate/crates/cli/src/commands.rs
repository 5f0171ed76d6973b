//! One function per analysis. Each returns the files it would write plus a
//! short summary for the terminal; nothing touches the disk here.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context};
use serde::Serialize;
use subwin_core::classify::{features, select_constructs, Classification, FeatureConfig, ProfileStore};
use subwin_core::corpus::{field_census, Corpus, Orientation};
use subwin_core::grammar::{construct_counts, delta_tp, map_tags, DeltaTpReport, GramTable, UnknownTags};
use subwin_core::lexstats::{anova, corpus_ttr, ttr_records, type_token_fit, AnovaResult, CorpusTtr, PolyFit, TtrRule};
use subwin_core::profile::{curve_from_scan, overlap_matrix, profile_from_scan, LocationCurve, OverlapMatrix, ProfileOptions, SWProfile};
use subwin_core::sterm::{weight_table, sterms_from_table, Smoothing, WeightScheme};
use subwin_core::synth::{simulate_false_positives, SimulationReport};
use subwin_core::window::{scan_corpus, WindowSpec};

use crate::config::RunConfig;
use crate::output::{fmt6, fmt_opt, Bundle, Table};
use crate::svg::{line_chart, Series};
use crate::systems::{SystemContext, SystemName};

pub struct Outcome {
    pub bundle: Bundle,
    pub summary: String,
}

/// File-name-safe form of a corpus or system label.
pub fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

pub fn census(corpora: &[Corpus]) -> anyhow::Result<Outcome> {
    let mut t = Table::new(["corpus", "field", "documents", "mean_tokens", "mean_types"])?;
    let mut summary = String::new();
    for c in corpora {
        for f in field_census(c)? {
            t.row([
                c.name().to_string(),
                f.field.to_string(),
                f.documents.to_string(),
                fmt6(f.mean_tokens),
                fmt6(f.mean_types),
            ])?;
        }
        summary.push_str(&format!("{}: {} documents\n", c.name(), c.len()));
    }
    let mut bundle = Bundle::new();
    bundle.add_csv("census.csv", t)?;
    Ok(Outcome { bundle, summary })
}

pub fn sterms(cfg: &RunConfig, corpora: &[Corpus], scheme: WeightScheme, cutoff: Option<f64>) -> anyhow::Result<Outcome> {
    if corpora.len() < 2 {
        bail!("term weighting needs at least two corpora to form the combined collection");
    }
    let combined = Corpus::combine("combined", &corpora.iter().collect::<Vec<_>>())?;
    let cutoff = cutoff.unwrap_or(match scheme {
        WeightScheme::Bi => cfg.bi_cutoff,
        WeightScheme::Idf => cfg.idf_cutoff,
    });
    let mut bundle = Bundle::new();
    let mut summary = String::new();
    for c in corpora {
        let table = weight_table(c, &combined, Smoothing::JEFFREYS)?;
        let mut t = Table::new(["term", "df_target", "df_combined", "p", "q", "w_bi", "w_idf"])?;
        for w in &table {
            t.row([
                w.term.clone(),
                w.df_target.to_string(),
                w.df_combined.to_string(),
                fmt6(w.p),
                fmt6(w.q),
                fmt_opt(w.w_bi),
                fmt_opt(w.w_idf),
            ])?;
        }
        bundle.add_csv(format!("weights_{}.csv", slug(c.name())), t)?;
        let set = sterms_from_table(&table, scheme, cutoff);
        let mut list = String::new();
        for term in &set.terms {
            list.push_str(term);
            list.push('\n');
        }
        bundle.add_text(format!("sterms_{}_{scheme}.txt", slug(c.name())), list);
        summary.push_str(&format!("{}: {} {scheme} S-terms at cutoff {cutoff}\n", c.name(), set.len()));
    }
    Ok(Outcome { bundle, summary })
}

pub fn windows(cfg: &RunConfig, corpora: &[Corpus], system: &SystemName) -> anyhow::Result<Outcome> {
    let ctx = SystemContext::new(cfg, corpora)?;
    let spec = cfg.spec()?;
    let mut bundle = Bundle::new();
    let mut summary = String::new();
    for c in corpora {
        let sys = ctx.build_usable(system, c)?;
        let scan = scan_corpus(c, &sys, &spec)?;
        let mut t = Table::new(["doc_id", "start", "omega", "r", "tail_prob", "significant"])?;
        for w in scan.windows() {
            t.row([
                w.doc_id.clone(),
                w.start.to_string(),
                w.omega.to_string(),
                w.r.to_string(),
                fmt6(w.tail_prob),
                w.significant.to_string(),
            ])?;
        }
        bundle.add_csv(format!("windows_{}_{}.csv", slug(c.name()), slug(sys.label())), t)?;
        summary.push_str(&format!(
            "{} / {}: {} of {} windows significant\n",
            c.name(),
            sys.label(),
            scan.significant_count(),
            scan.window_count()
        ));
    }
    Ok(Outcome { bundle, summary })
}

fn curve_table(curve: &LocationCurve) -> anyhow::Result<Table> {
    let mut t = Table::new(["position", "rate", "windows", "significant"])?;
    for p in &curve.points {
        t.row([fmt6(p.position), fmt_opt(p.rate), p.windows.to_string(), p.significant.to_string()])?;
    }
    Ok(t)
}

/// Per-system curve CSV and SVG files plus one chart with every system.
pub fn add_curve_files(bundle: &mut Bundle, corpus: &str, curves: &[LocationCurve]) -> anyhow::Result<()> {
    for curve in curves {
        let stem = format!("curves/{}_{}", slug(corpus), slug(&curve.system));
        bundle.add_csv(format!("{stem}.csv"), curve_table(curve)?)?;
        let series = [series_of(curve)];
        bundle.add_text(
            format!("{stem}.svg"),
            line_chart(&format!("{corpus}: {}", curve.system), "relative position", "SWs per 100 windows", &series),
        );
    }
    if curves.len() > 1 {
        let series: Vec<Series> = curves.iter().map(series_of).collect();
        bundle.add_text(
            format!("curves/{}.svg", slug(corpus)),
            line_chart(corpus, "relative position", "SWs per 100 windows", &series),
        );
    }
    Ok(())
}

fn series_of(curve: &LocationCurve) -> Series<'_> {
    Series {
        label: &curve.system,
        points: curve.points.iter().map(|p| (p.position, p.rate)).collect(),
    }
}

pub struct ProfileArgs {
    pub options: ProfileOptions,
    pub with_curves: bool,
}

pub fn profile(cfg: &RunConfig, corpora: &[Corpus], systems: &[SystemName], args: &ProfileArgs) -> anyhow::Result<Outcome> {
    let ctx = SystemContext::new(cfg, corpora)?;
    let spec = cfg.spec()?;
    let curve_spec = cfg.curve_spec()?;
    let mut bundle = Bundle::new();
    let mut summary = String::new();
    for c in corpora {
        let mut curves = Vec::new();
        for name in systems {
            let sys = ctx.build_usable(name, c)?;
            let scan = scan_corpus(c, &sys, &spec)?;
            let prof = profile_from_scan(&scan, &args.options);
            summary.push_str(&format!(
                "{} / {}: sc {} wwd {} q {}\n",
                c.name(),
                sys.label(),
                fmt6(prof.sc),
                fmt6(prof.wwd),
                fmt6(prof.q)
            ));
            bundle.add_json(format!("profile_{}_{}.json", slug(c.name()), slug(sys.label())), &ProfileReport::new(&prof, &spec))?;
            if args.with_curves {
                let cscan = if curve_spec == spec { scan } else { scan_corpus(c, &sys, &curve_spec)? };
                curves.push(curve_from_scan(&cscan, cfg.n_points, cfg.bin_halfwidth)?);
            }
        }
        add_curve_files(&mut bundle, c.name(), &curves)?;
    }
    Ok(Outcome { bundle, summary })
}

pub fn curve(cfg: &RunConfig, corpora: &[Corpus], systems: &[SystemName]) -> anyhow::Result<Outcome> {
    let ctx = SystemContext::new(cfg, corpora)?;
    let spec = cfg.curve_spec()?;
    let mut bundle = Bundle::new();
    let mut summary = String::new();
    for c in corpora {
        let mut curves = Vec::new();
        for name in systems {
            let sys = ctx.build_usable(name, c)?;
            let scan = scan_corpus(c, &sys, &spec)?;
            let curve = curve_from_scan(&scan, cfg.n_points, cfg.bin_halfwidth)?;
            let rates: Vec<String> = curve.rates().into_iter().map(|r| r.map_or("-".into(), |v| format!("{v:.2}"))).collect();
            summary.push_str(&format!("{} / {}: {}\n", c.name(), sys.label(), rates.join(" ")));
            curves.push(curve);
        }
        add_curve_files(&mut bundle, c.name(), &curves)?;
    }
    Ok(Outcome { bundle, summary })
}

/// The profile report shape: corpus, system, window length and the measures.
#[derive(Debug, Serialize)]
pub struct ProfileReport {
    pub corpus: String,
    pub system: String,
    pub omega: usize,
    pub alpha: f64,
    pub p_scope: &'static str,
    pub sc: f64,
    pub wwd: f64,
    pub q: f64,
    pub averaging: String,
    pub alpha_exp: f64,
    pub beta_exp: f64,
    pub s_tokens: usize,
    pub sw_positions: usize,
    pub s_in_sw: usize,
}

impl ProfileReport {
    pub fn new(p: &SWProfile, spec: &WindowSpec) -> Self {
        ProfileReport {
            corpus: p.corpus.clone(),
            system: p.system.clone(),
            omega: p.omega,
            alpha: spec.alpha,
            p_scope: spec.p_scope.as_str(),
            sc: round6(p.sc),
            wwd: round6(p.wwd),
            q: round6(p.q),
            averaging: format!("{:?}", p.averaging).to_lowercase(),
            alpha_exp: p.alpha_exp,
            beta_exp: p.beta_exp,
            s_tokens: p.counts.s_tokens,
            sw_positions: p.counts.sw_positions,
            s_in_sw: p.counts.s_in_sw,
        }
    }
}

/// Probabilities in JSON reports carry six decimals, like the CSV files.
pub fn round6(x: f64) -> f64 {
    if x.is_finite() {
        fmt6(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

pub fn overlap_table(m: &OverlapMatrix) -> anyhow::Result<Table> {
    let mut header = vec![String::new()];
    header.extend(m.systems.iter().zip(&m.col_marks).map(|(s, mk)| format!("{s}{}", mk.suffix())));
    let mut t = Table::new(header)?;
    for (r, (s, mk)) in m.systems.iter().zip(&m.row_marks).enumerate() {
        let mut row = vec![format!("{s}{}", mk.suffix())];
        row.extend(m.cells[r].iter().map(|c| fmt_opt(*c)));
        t.row(row)?;
    }
    Ok(t)
}

pub fn overlap(cfg: &RunConfig, corpora: &[Corpus], systems: &[SystemName]) -> anyhow::Result<Outcome> {
    if systems.len() < 2 {
        bail!("overlap needs at least two systems");
    }
    let ctx = SystemContext::new(cfg, corpora)?;
    let spec = cfg.spec()?;
    let mut bundle = Bundle::new();
    let mut summary = String::new();
    for c in corpora {
        let built = systems.iter().map(|n| ctx.build_usable(n, c)).collect::<anyhow::Result<Vec<_>>>()?;
        let m = overlap_matrix(c, &built, &spec)?;
        bundle.add_csv(format!("overlap_{}.csv", slug(c.name())), overlap_table(&m)?)?;
        summary.push_str(&format!("{}: most precise predictors {:?}\n", c.name(), m.mpp()));
    }
    Ok(Outcome { bundle, summary })
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub corpus: String,
    pub degree: usize,
    /// Ascending powers of the type count.
    pub coefficients: Vec<f64>,
    pub rss: f64,
    pub n: usize,
}

impl FitReport {
    fn new(corpus: &str, f: &PolyFit) -> Self {
        FitReport {
            corpus: corpus.to_string(),
            degree: f.degree,
            coefficients: f.coefficients.clone(),
            rss: f.rss,
            n: f.n,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TtrSummary {
    pub corpora: Vec<CorpusTtrRow>,
    pub fits: Vec<FitReport>,
    /// Corpora with too few documents or no spread in type counts.
    pub skipped_fits: BTreeMap<String, String>,
    pub anova: Option<AnovaResult>,
    pub anova_prefix: Option<AnovaResult>,
}

#[derive(Debug, Serialize)]
pub struct CorpusTtrRow {
    #[serde(flatten)]
    pub ttr: CorpusTtr,
    pub rule_orientation: Orientation,
}

pub fn ttr(cfg: &RunConfig, corpora: &[Corpus]) -> anyhow::Result<Outcome> {
    let rule = TtrRule { boundary: cfg.ttr_boundary };
    let mut t = Table::new(["corpus", "doc_id", "tokens", "types", "ratio", "prefix_ratio"])?;
    let mut groups = Vec::new();
    let mut prefix_groups = Vec::new();
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let mut skipped = BTreeMap::new();
    let mut summary = String::new();
    for c in corpora {
        let recs = ttr_records(c, Some(cfg.prefix))?;
        for r in &recs {
            t.row([
                c.name().to_string(),
                r.doc_id.clone(),
                r.tokens.to_string(),
                r.types.to_string(),
                fmt6(r.ratio),
                fmt_opt(r.prefix_ratio),
            ])?;
        }
        groups.push((c.name().to_string(), recs.iter().map(|r| r.ratio).collect::<Vec<_>>()));
        prefix_groups.push((c.name().to_string(), recs.iter().filter_map(|r| r.prefix_ratio).collect::<Vec<_>>()));
        let ct = corpus_ttr(c, Some(cfg.prefix))?;
        summary.push_str(&format!(
            "{}: mean ratio {} (first {} tokens {})\n",
            c.name(),
            fmt6(ct.mean),
            cfg.prefix,
            fmt_opt(ct.mean_prefix)
        ));
        rows.push(CorpusTtrRow {
            rule_orientation: rule.orientation(ct.mean),
            ttr: CorpusTtr {
                pooled: round6(ct.pooled),
                mean: round6(ct.mean),
                mean_prefix: ct.mean_prefix.map(round6),
                ..ct
            },
        });
        match type_token_fit(c, cfg.fit_degree) {
            Ok(f) => fits.push(FitReport::new(c.name(), &f.fit)),
            Err(e) => {
                skipped.insert(c.name().to_string(), e.to_string());
            }
        }
    }
    let can_test = |g: &[(String, Vec<f64>)]| g.len() >= 2 && g.iter().all(|(_, v)| !v.is_empty());
    let anova_all = if can_test(&groups) { anova(&groups).ok() } else { None };
    let anova_prefix = if can_test(&prefix_groups) { anova(&prefix_groups).ok() } else { None };
    if let Some(a) = &anova_all {
        summary.push_str(&format!("anova: F {} p {}\n", fmt6(a.f), fmt6(a.p_value)));
    }
    let report = TtrSummary {
        corpora: rows,
        fits,
        skipped_fits: skipped,
        anova: anova_all,
        anova_prefix,
    };
    let mut bundle = Bundle::new();
    bundle.add_csv("ttr.csv", t)?;
    bundle.add_json("fit.json", &report)?;
    Ok(Outcome { bundle, summary })
}

pub struct GrammarRun {
    pub tables: Vec<(GramTable, Orientation)>,
    pub unknown: BTreeMap<String, UnknownTags>,
}

/// Construct tables for every corpus under the configured grammar system.
pub fn grammar_tables(cfg: &RunConfig, corpora: &[Corpus], system: &SystemName) -> anyhow::Result<GrammarRun> {
    let ctx = SystemContext::new(cfg, corpora)?;
    let tagmap = crate::load::tagmap(cfg)?;
    let spec = cfg.spec()?;
    let mut tables = Vec::new();
    let mut unknown = BTreeMap::new();
    for c in corpora {
        if !c.is_tagged() {
            bail!("corpus `{}` is not part-of-speech tagged", c.name());
        }
        let (mapped, unk) = map_tags(c, &tagmap)?;
        let sys = ctx.build_usable(system, &mapped)?;
        let table = construct_counts(&mapped, &sys, &spec, 1..=cfg.max_construct_len, cfg.min_support)
            .with_context(|| format!("construct counts for `{}`", c.name()))?;
        tables.push((table, c.orientation()));
        if unk.total() > 0 {
            unknown.insert(c.name().to_string(), unk);
        }
    }
    Ok(GrammarRun { tables, unknown })
}

pub fn grammar_table_csv(table: &GramTable) -> anyhow::Result<Table> {
    let mut t = Table::new(["construct", "N", "pr_sw_given_g", "m_g"])?;
    for s in table.ranked() {
        t.row([s.construct.to_string(), s.n.to_string(), fmt6(s.pr_sw_given_g), fmt6(s.m_g)])?;
    }
    Ok(t)
}

fn unknown_note(unknown: &BTreeMap<String, UnknownTags>) -> String {
    let mut s = String::new();
    for (corpus, u) in unknown {
        let tags: Vec<String> = u.0.iter().map(|(t, n)| format!("{t} ({n})")).collect();
        s.push_str(&format!("{corpus}: tags mapped to other: {}\n", tags.join(", ")));
    }
    s
}

pub fn grammar(cfg: &RunConfig, corpora: &[Corpus], system: &SystemName) -> anyhow::Result<Outcome> {
    let run = grammar_tables(cfg, corpora, system)?;
    let mut bundle = Bundle::new();
    let mut summary = unknown_note(&run.unknown);
    for (table, _) in &run.tables {
        bundle.add_csv(format!("grammar_{}.csv", slug(&table.corpus)), grammar_table_csv(table)?)?;
        summary.push_str(&format!("{}: {} constructs with N >= {}\n", table.corpus, table.stats.len(), table.min_support));
    }
    Ok(Outcome { bundle, summary })
}

pub fn delta_table(report: &DeltaTpReport) -> anyhow::Result<Table> {
    let mut header = vec!["construct".to_string()];
    header.extend(report.corpora.iter().map(|c| format!("m_g_{c}")));
    header.push("delta_tp".into());
    let mut t = Table::new(header)?;
    for r in &report.rows {
        let mut row = vec![r.construct.to_string()];
        row.extend(r.m_g.iter().map(|m| fmt6(*m)));
        row.push(fmt6(r.delta_tp));
        t.row(row)?;
    }
    Ok(t)
}

pub fn delta_report(run: &GrammarRun, min_support: usize) -> anyhow::Result<DeltaTpReport> {
    let refs: Vec<(&GramTable, Orientation)> = run.tables.iter().map(|(t, o)| (t, *o)).collect();
    if let Some((t, _)) = refs.iter().find(|(_, o)| *o == Orientation::Unlabeled) {
        bail!("corpus `{}` has no theory/practice orientation", t.corpus);
    }
    if !refs.iter().any(|(_, o)| *o == Orientation::Theory) || !refs.iter().any(|(_, o)| *o == Orientation::Practice) {
        bail!("theory/practice comparison needs at least one corpus of each orientation");
    }
    Ok(delta_tp(&refs, min_support)?)
}

pub fn deltatp(cfg: &RunConfig, corpora: &[Corpus], system: &SystemName) -> anyhow::Result<Outcome> {
    let run = grammar_tables(cfg, corpora, system)?;
    let report = delta_report(&run, cfg.min_support)?;
    let mut bundle = Bundle::new();
    bundle.add_csv("theory_practice.csv", delta_table(&report)?)?;
    let mut summary = unknown_note(&run.unknown);
    summary.push_str(&format!(
        "{} constructs compared, {} excluded for low support\n",
        report.rows.len(),
        report.excluded.len()
    ));
    for r in report.rows.iter().take(3) {
        summary.push_str(&format!("  practice: {} ({})\n", r.construct, fmt6(r.delta_tp)));
    }
    for r in report.ascending().into_iter().take(3) {
        summary.push_str(&format!("  theory:   {} ({})\n", r.construct, fmt6(r.delta_tp)));
    }
    Ok(Outcome { bundle, summary })
}

pub fn feature_config(cfg: &RunConfig) -> anyhow::Result<FeatureConfig> {
    Ok(FeatureConfig {
        prefix_n: cfg.prefix,
        curve_fields: cfg.classifier.curve_fields.clone(),
        curve_points: cfg.classifier.curve_points,
        curve_halfwidth: cfg.classifier.curve_halfwidth,
        spec: cfg.spec()?,
        constructs: Vec::new(),
        normalize: true,
    })
}

/// Profiles each labelled corpus into a new store.
pub fn build_store(cfg: &RunConfig, corpora: &[Corpus]) -> anyhow::Result<ProfileStore> {
    let tagmap = crate::load::tagmap(cfg)?;
    let mut fc = feature_config(cfg)?;
    let grammar_system: SystemName = cfg.grammar_system.parse()?;
    if cfg.classifier.constructs > 0 && corpora.iter().all(Corpus::is_tagged) {
        let ctx = SystemContext::new(cfg, corpora)?;
        // a corpus-specific system (weights, pooled fields) cannot be shared here
        let sys = match grammar_system {
            SystemName::Field { pooled: false, .. } | SystemName::Dictionary => ctx.build(&grammar_system, &corpora[0])?,
            _ => bail!("the classifier needs a per-document or dictionary grammar system"),
        };
        let refs: Vec<&Corpus> = corpora.iter().collect();
        let len = cfg.classifier.construct_len;
        fc.constructs = select_constructs(&refs, &sys, &cfg.spec()?, len..=len, cfg.min_support, cfg.classifier.constructs, &tagmap)?;
    }
    let mut store = ProfileStore::new(fc);
    for c in corpora {
        if c.orientation() == Orientation::Unlabeled {
            bail!("corpus `{}` needs a theory or practice orientation to be profiled", c.name());
        }
        store.add_corpus(c, &tagmap)?;
    }
    Ok(store)
}

#[derive(Debug, Serialize)]
pub struct ClassifiedInput {
    pub input: String,
    #[serde(flatten)]
    pub result: Classification,
}

pub fn classify(cfg: &RunConfig, store: &ProfileStore, inputs: &[Corpus], per_document: bool) -> anyhow::Result<Outcome> {
    if store.profiles.is_empty() {
        bail!("the profile store is empty");
    }
    let tagmap = crate::load::tagmap(cfg)?;
    let rule = TtrRule { boundary: cfg.ttr_boundary };
    let mut results = Vec::new();
    let mut summary = String::new();
    for c in inputs {
        let units: Vec<(String, Corpus)> = if per_document {
            c.documents()
                .iter()
                .map(|d| Ok((format!("{}/{}", c.name(), d.id()), Corpus::new(c.name(), c.orientation(), vec![d.clone()])?)))
                .collect::<anyhow::Result<_>>()?
        } else {
            vec![(c.name().to_string(), c.clone())]
        };
        for (label, unit) in units {
            let f = features(&unit, &store.config, &tagmap).with_context(|| format!("features of `{label}`"))?;
            let result = store.classify(&f, &rule)?;
            summary.push_str(&format!(
                "{label}: {} ({}), distance {}, type/token rule says {}\n",
                result.label,
                result.orientation.as_str(),
                fmt6(result.distance),
                result.ttr_orientation.as_str()
            ));
            if let Some(w) = &result.warning {
                summary.push_str(&format!("  warning: {w}\n"));
            }
            results.push(ClassifiedInput { input: label, result });
        }
    }
    let mut bundle = Bundle::new();
    bundle.add_json("classification.json", &results)?;
    Ok(Outcome { bundle, summary })
}

pub fn simulate(cfg: &RunConfig, seed: u64, windows: usize, p: f64, estimate_p: bool) -> anyhow::Result<(Outcome, SimulationReport)> {
    if windows == 0 {
        return Err(anyhow!("the simulation needs at least one window"));
    }
    let report = simulate_false_positives(seed, windows, p, &cfg.spec()?, estimate_p)?;
    let summary = format!(
        "{} of {} windows significant: fraction {} vs bound {} (alpha + 3 sigma): {}\n",
        report.significant,
        report.windows,
        fmt6(report.fraction),
        fmt6(report.bound),
        if report.within_bound { "within" } else { "EXCEEDED" }
    );
    let mut bundle = Bundle::new();
    bundle.add_json("simulate.json", &report)?;
    Ok((Outcome { bundle, summary }, report))
}

/// Every analysis over all corpora, written as one output tree.
pub fn report_all(cfg: &RunConfig, corpora: &[Corpus]) -> anyhow::Result<Outcome> {
    let names: Vec<SystemName> = cfg.systems.iter().map(|s| s.parse()).collect::<anyhow::Result<_>>()?;
    let ctx = SystemContext::new(cfg, corpora)?;
    let spec = cfg.spec()?;
    let curve_spec = cfg.curve_spec()?;
    let mut notes = Vec::new();
    let mut bundle = census(corpora)?.bundle;
    let mut summary = String::new();
    let mut profiles = Vec::new();
    for c in corpora {
        let mut systems = Vec::new();
        for name in &names {
            match name {
                SystemName::Dictionary if ctx.dictionary.is_none() => {
                    notes.push(format!("{}: dictionary omitted, no dictionary file configured", c.name()));
                    continue;
                }
                SystemName::Weighted(s) if ctx.combined.is_none() => {
                    notes.push(format!("{}: {s} omitted, weighting needs at least two corpora", c.name()));
                    continue;
                }
                _ => {}
            }
            let sys = ctx.build(name, c)?;
            if !sys.is_usable_for(c) {
                let why = match name {
                    SystemName::Field { field, .. } if !c.documents().iter().any(|d| d.has_field(*field)) => {
                        format!("the corpus has no {field} field")
                    }
                    _ => "it gives the corpus no S-terms".to_string(),
                };
                notes.push(format!("{}: {name} omitted, {why}", c.name()));
                continue;
            }
            systems.push(sys);
        }
        let mut curves = Vec::new();
        let mut sets = Vec::new();
        for sys in &systems {
            let scan = scan_corpus(c, sys, &spec)?;
            let prof = profile_from_scan(&scan, &ProfileOptions::default());
            profiles.push(ProfileReport::new(&prof, &spec));
            sets.push(subwin_core::profile::significant_keys(&scan));
            let cscan = if curve_spec == spec { scan } else { scan_corpus(c, sys, &curve_spec)? };
            curves.push(curve_from_scan(&cscan, cfg.n_points, cfg.bin_halfwidth)?);
        }
        add_curve_files(&mut bundle, c.name(), &curves)?;
        if systems.len() >= 2 {
            let labels: Vec<String> = systems.iter().map(|s| s.label().to_string()).collect();
            let m = subwin_core::profile::overlap_from_sets(&labels, &sets)?;
            bundle.add_csv(format!("overlap_{}.csv", slug(c.name())), overlap_table(&m)?)?;
        } else {
            notes.push(format!("{}: overlap omitted, fewer than two usable systems", c.name()));
        }
        summary.push_str(&format!("{}: {} systems profiled\n", c.name(), systems.len()));
    }
    bundle.add_json("profiles.json", &profiles)?;

    bundle.extend(ttr(cfg, corpora)?.bundle);

    if corpora.iter().all(Corpus::is_tagged) {
        let grammar_system: SystemName = cfg.grammar_system.parse()?;
        let run = grammar_tables(cfg, corpora, &grammar_system)?;
        for (table, _) in &run.tables {
            bundle.add_csv(format!("grammar_{}.csv", slug(&table.corpus)), grammar_table_csv(table)?)?;
        }
        notes.extend(unknown_note(&run.unknown).lines().map(String::from));
        match delta_report(&run, cfg.min_support) {
            Ok(report) => bundle.add_csv("theory_practice.csv", delta_table(&report)?)?,
            Err(e) => notes.push(format!("theory_practice omitted: {e}")),
        }
    } else {
        notes.push("grammar omitted: not every corpus is part-of-speech tagged".into());
    }

    if !notes.is_empty() {
        let mut text = notes.join("\n");
        text.push('\n');
        summary.push_str(&text);
        bundle.add_text("notes.txt", text);
    }
    Ok(Outcome { bundle, summary })
}
