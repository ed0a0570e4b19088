use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use keymine_core::corpus::{count_ngraphs_many, read_manifest, tokenize_file};
use keymine_core::layout::place_on_shift_layer;
use keymine_core::mining::{itemsets_to_tsv, mine_frequent_traced, rules_to_tsv};
use keymine_core::{
    assign_hands, audit_partition, compare, default_geometry, digraphs_as_transactions,
    evaluate_streams, generate_rules, place_keys, Alphabet, ComparisonTable, EvalReport,
    KeyboardGeometry, Layout, LetterStream, MiningParams, NGraphTable, TransactionDb,
};
use log::{info, warn};
use serde_json::json;

use crate::config::{Format, RunConfig};
use crate::manifest::{OutputDir, RunManifest};

/// Result of a successful command.
#[derive(Debug)]
pub struct Outcome {
    pub outputs: Vec<PathBuf>,
    /// False when an embedded audit failed; outputs are still written.
    pub audits_passed: bool,
}

struct Corpus {
    alphabet: Alphabet,
    streams: Vec<LetterStream>,
}

fn load_corpus(cfg: &RunConfig, manifest: &mut RunManifest) -> Result<Corpus> {
    let alphabet_path = cfg.alphabet()?;
    let alphabet = Alphabet::load(alphabet_path)?;
    manifest.input("alphabet", alphabet_path)?;
    let corpus_path = cfg.corpus()?;
    manifest.input("corpus-manifest", corpus_path)?;
    let files = read_manifest(corpus_path)?;
    if files.is_empty() {
        bail!("corpus manifest {} lists no files", corpus_path.display());
    }
    let mut streams = Vec::with_capacity(files.len());
    for f in &files {
        streams.push(tokenize_file(f, &alphabet)?);
        manifest.input("corpus", f)?;
    }
    let letters: usize = streams.iter().map(LetterStream::letter_count).sum();
    if letters == 0 {
        bail!("corpus {} contains no alphabet letters", corpus_path.display());
    }
    info!(
        "loaded {} source(s), {} letters, alphabet {:?} ({} letters)",
        streams.len(),
        letters,
        alphabet.name(),
        alphabet.len()
    );
    Ok(Corpus { alphabet, streams })
}

fn tables(corpus: &Corpus, n: usize) -> Result<NGraphTable> {
    Ok(count_ngraphs_many(&corpus.streams, n, &corpus.alphabet)?)
}

pub fn cmd_stats(cfg: &RunConfig) -> Result<Outcome> {
    let mut manifest = RunManifest::new("stats", json!({ "format": cfg.format }));
    let corpus = load_corpus(cfg, &mut manifest)?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let mut monographs = None;
    for (n, name) in [(1, "monographs.tsv"), (2, "digraphs.tsv"), (3, "trigraphs.tsv")] {
        let t = tables(&corpus, n)?;
        out.write(name, &t.to_tsv())?;
        if n == 1 {
            monographs = Some(t);
        }
    }
    let mono = monographs.expect("order 1 counted");
    let letters: usize = corpus.streams.iter().map(LetterStream::letter_count).sum();
    let undetermined: usize = corpus.streams.iter().map(LetterStream::undetermined_count).sum();
    let sources: Vec<serde_json::Value> = corpus
        .streams
        .iter()
        .map(|s| {
            json!({
                "source": s.source_id,
                "total_chars": s.len(),
                "letters": s.letter_count(),
                "undetermined": s.undetermined_count(),
            })
        })
        .collect();
    let summary = json!({
        "sources": corpus.streams.len(),
        "total_chars": letters + undetermined,
        "total_letters": letters,
        "distinct_letters": mono.len(),
        "undetermined": undetermined,
        "per_source": sources,
    });
    let summary_text = match cfg.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&summary)?),
        Format::Tsv => {
            let mut s = String::from("key\tvalue\n");
            for key in ["sources", "total_chars", "total_letters", "distinct_letters", "undetermined"] {
                let _ = writeln!(s, "{key}\t{}", summary[key]);
            }
            s
        }
    };
    out.write(&format!("summary.{}", cfg.format.extension()), &summary_text)?;
    Ok(Outcome {
        outputs: out.finish(manifest)?,
        audits_passed: true,
    })
}

/// Mines either a transaction TSV or the corpus's digraph transactions.
pub fn cmd_mine(cfg: &RunConfig, transactions: Option<&Path>) -> Result<Outcome> {
    if cfg.min_confidence > 1.0 {
        warn!(
            "min confidence {} exceeds 1; no rule can satisfy it",
            cfg.min_confidence
        );
    }
    let mut manifest = RunManifest::new(
        "mine",
        json!({
            "min_support": cfg.min_support,
            "min_confidence": cfg.min_confidence,
        }),
    );
    let db = match transactions {
        Some(path) => {
            manifest.input("transactions", path)?;
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            TransactionDb::from_tsv(&text, &path.display().to_string())?
        }
        None => {
            let corpus = load_corpus(cfg, &mut manifest)?;
            digraphs_as_transactions(&tables(&corpus, 2)?)?
        }
    };
    if db.universe().is_empty() {
        bail!("transaction database has no items");
    }
    let count = cfg.min_support.resolve(db.len())?;
    let params = MiningParams::with_any_confidence(count, cfg.min_confidence)?;
    info!(
        "{} transactions, {} items, min support count {}",
        db.len(),
        db.universe().len(),
        count
    );
    let run = mine_frequent_traced(&db, &params)?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let mut log = String::from("k\tjoined\tcandidates\tfrequent\n");
    for s in &run.stats {
        info!(
            "level {}: {} joined, {} candidates after pruning, {} frequent",
            s.k, s.joined, s.candidates, s.frequent
        );
        let _ = writeln!(log, "{}\t{}\t{}\t{}", s.k, s.joined, s.candidates, s.frequent);
    }
    info!("{} database scans", run.scans);
    let _ = writeln!(log, "# scans\t{}", run.scans);
    for level in &run.levels {
        out.write(
            &format!("candidates_C{}.tsv", level.k),
            &itemsets_to_tsv(&db, &level.candidates_evaluated),
        )?;
        out.write(&format!("frequent_L{}.tsv", level.k), &itemsets_to_tsv(&db, &level.itemsets))?;
    }
    let rules = generate_rules(&run.levels, db.len().max(1), &params)?;
    info!("{} strong rules", rules.len());
    out.write("rules.tsv", &rules_to_tsv(&db, &rules))?;
    out.write("mining_log.tsv", &log)?;
    manifest.parameters["min_support_count"] = json!(count);
    manifest.parameters["scans"] = json!(run.scans);
    Ok(Outcome {
        outputs: out.finish(manifest)?,
        audits_passed: true,
    })
}

fn load_geometry(cfg: &RunConfig, manifest: &mut RunManifest) -> Result<KeyboardGeometry> {
    match &cfg.geometry_path {
        Some(p) => {
            manifest.input("geometry", p)?;
            Ok(KeyboardGeometry::load(p)?)
        }
        None => Ok(default_geometry()),
    }
}

pub fn cmd_design(cfg: &RunConfig, place_unseen: bool) -> Result<Outcome> {
    let mut manifest = RunManifest::new(
        "design",
        json!({
            "tie_policy": cfg.tie_policy,
            "name": cfg.name,
            "place_unseen": place_unseen,
        }),
    );
    let corpus = load_corpus(cfg, &mut manifest)?;
    let geometry = load_geometry(cfg, &mut manifest)?;
    let mono = tables(&corpus, 1)?;
    let db = digraphs_as_transactions(&tables(&corpus, 2)?)?;
    let partition = assign_hands(&mono, &db, cfg.tie_policy)?;
    let audit = audit_partition(&partition, &mono, &db)?;
    info!("audit: {audit}");

    let mut layout = place_keys(&partition, &mono, &geometry, &cfg.name)?;
    let unseen: Vec<char> = corpus
        .alphabet
        .letters()
        .iter()
        .copied()
        .filter(|&c| mono.count(&[c]) == 0)
        .collect();
    if place_unseen {
        place_on_shift_layer(&mut layout, &unseen)?;
    } else if !unseen.is_empty() {
        warn!(
            "{} alphabet letters never occur in the corpus and are not placed",
            unseen.len()
        );
    }
    layout.geometry_ref = Some("geometry.json".into());

    let mut log = String::new();
    let _ = writeln!(log, "letters ranked: {}", partition.left.len() + partition.right.len());
    let _ = writeln!(log, "right: {}", partition.right.iter().collect::<String>());
    let _ = writeln!(log, "left: {}", partition.left.iter().collect::<String>());
    let _ = writeln!(log, "unplaced (zero count): {}", if place_unseen { String::new() } else { unseen.iter().collect() });
    let _ = writeln!(log, "audit: {audit}");

    let mut out = OutputDir::create(&cfg.output_dir)?;
    out.write("geometry.json", &geometry.to_json())?;
    out.write("layout.json", &layout.to_json())?;
    out.write("trace.tsv", &partition.trace_tsv()?)?;
    out.write("design.log", &log)?;
    manifest.audit = Some(audit.to_string());
    let passed = audit.passed();
    Ok(Outcome {
        outputs: out.finish(manifest)?,
        audits_passed: passed,
    })
}

fn report_file_names(layouts: &[PathBuf]) -> Vec<String> {
    let mut seen = HashSet::new();
    layouts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let stem = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| format!("layout{i}"));
            let mut name = stem.clone();
            let mut k = 1;
            while !seen.insert(name.clone()) {
                k += 1;
                name = format!("{stem}-{k}");
            }
            name
        })
        .collect()
}

fn write_comparison(out: &mut OutputDir, table: &ComparisonTable, format: Format) -> Result<()> {
    match format {
        Format::Tsv => out.write("comparison.tsv", &table.to_tsv())?,
        Format::Json => out.write("comparison.json", &table.to_json())?,
    };
    Ok(())
}

pub fn cmd_evaluate(cfg: &RunConfig, layouts: &[PathBuf]) -> Result<Outcome> {
    if layouts.is_empty() {
        bail!("at least one layout file is required");
    }
    let mut manifest = RunManifest::new("evaluate", json!({ "format": cfg.format }));
    let corpus = load_corpus(cfg, &mut manifest)?;
    let fallback = match &cfg.geometry_path {
        Some(p) => {
            manifest.input("geometry", p)?;
            Some(KeyboardGeometry::load(p)?)
        }
        None => None,
    };
    let mut reports = Vec::with_capacity(layouts.len());
    for path in layouts {
        manifest.input("layout", path)?;
        let layout = Layout::load(path, fallback.as_ref())
            .with_context(|| format!("cannot load layout {}", path.display()))?;
        let report = evaluate_streams(&corpus.streams, &layout);
        info!(
            "{}: switching {}, left {}, right {}, undetermined {}",
            report.layout_name, report.hand_switching, report.left_load, report.right_load, report.undetermined
        );
        reports.push(report);
    }
    let mut out = OutputDir::create(&cfg.output_dir)?;
    for (report, stem) in reports.iter().zip(report_file_names(layouts)) {
        let name = format!("report-{stem}.{}", cfg.format.extension());
        match cfg.format {
            Format::Tsv => out.write(&name, &report.to_tsv())?,
            Format::Json => out.write(&name, &report.to_json())?,
        };
    }
    write_comparison(&mut out, &compare(&reports)?, cfg.format)?;
    Ok(Outcome {
        outputs: out.finish(manifest)?,
        audits_passed: true,
    })
}

/// Reads report files (JSON by `.json` extension, TSV otherwise).
pub fn read_report(path: &Path) -> Result<EvalReport> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let is_json = path.extension().is_some_and(|e| e == "json");
    let report = if is_json {
        EvalReport::from_json(&text)
    } else {
        EvalReport::from_tsv(&text, &path.display().to_string())
    };
    report.with_context(|| format!("invalid report {}", path.display()))
}

pub fn cmd_compare_only(cfg: &RunConfig, reports: &[PathBuf]) -> Result<Outcome> {
    let mut manifest = RunManifest::new("compare-only", json!({ "format": cfg.format }));
    let mut parsed = Vec::with_capacity(reports.len());
    for p in reports {
        manifest.input("report", p)?;
        parsed.push(read_report(p)?);
    }
    let table = compare(&parsed)?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    write_comparison(&mut out, &table, cfg.format)?;
    Ok(Outcome {
        outputs: out.finish(manifest)?,
        audits_passed: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SynthKind {
    /// First-order Markov text with digits and spaces mixed in.
    Markov,
    /// Two five-letter groups that mostly alternate.
    SplitGroups,
}

#[derive(Debug, Clone)]
pub struct SynthSpec {
    pub kind: SynthKind,
    pub letters: usize,
    pub noise: f64,
    pub space: f64,
    pub cross: f64,
    pub out: PathBuf,
}

/// Writes a seeded synthetic corpus over the configured alphabet.
pub fn cmd_synth(cfg: &RunConfig, spec: &SynthSpec) -> Result<Outcome> {
    use keymine_core::synth;
    let alphabet = Alphabet::load(cfg.alphabet()?)?;
    let text = match spec.kind {
        SynthKind::Markov => {
            synth::markov_text(cfg.seed, alphabet.letters(), spec.letters, spec.noise, spec.space)
        }
        SynthKind::SplitGroups => {
            if alphabet.len() < 10 {
                bail!("split-groups needs an alphabet of at least ten letters");
            }
            if !(0.0..=1.0).contains(&spec.cross) {
                bail!("cross probability {} outside [0, 1]", spec.cross);
            }
            synth::split_groups_text(cfg.seed, alphabet.letters(), spec.letters, spec.cross)
        }
    };
    if let Some(dir) = spec.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(&spec.out, text).with_context(|| format!("cannot write {}", spec.out.display()))?;
    Ok(Outcome {
        outputs: vec![spec.out.clone()],
        audits_passed: true,
    })
}

/// Letter -> hand view of a layout file, for quick inspection in tests.
pub fn layout_hands(path: &Path) -> Result<BTreeMap<char, keymine_core::Hand>> {
    let layout = Layout::load(path, None)?;
    Ok(layout.hands().into_iter().collect())
}
