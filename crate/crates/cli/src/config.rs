use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use keymine_core::mining::support_count_from_fraction;
use keymine_core::TiePolicy;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Json => "json",
        }
    }
}

/// Minimum support as given by the user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MinSupport {
    Count(u64),
    Fraction(f64),
}

impl MinSupport {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(['.', 'e', 'E']) {
            let f: f64 = s.parse().with_context(|| format!("invalid min support {s:?}"))?;
            Self::Fraction(f).validated()
        } else {
            let n: u64 = s.parse().with_context(|| format!("invalid min support {s:?}"))?;
            Self::Count(n).validated()
        }
    }

    fn validated(self) -> Result<Self> {
        match self {
            Self::Count(0) => bail!("min support count must be at least 1"),
            Self::Fraction(f) if !(f > 0.0 && f <= 1.0) => {
                bail!("min support fraction {f} outside (0, 1]")
            }
            ok => Ok(ok),
        }
    }

    /// Absolute count for a database of `db_size` transactions.
    pub fn resolve(self, db_size: usize) -> Result<u64> {
        Ok(match self {
            Self::Count(n) => n,
            Self::Fraction(f) => support_count_from_fraction(f, db_size)?,
        })
    }
}

impl fmt::Display for MinSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Count(n) => write!(f, "{n}"),
            Self::Fraction(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SupportValue {
    Count(u64),
    Fraction(f64),
    Text(String),
}

/// Contents of a `--config` TOML file. Relative paths resolve against the
/// config file's directory.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    alphabet: Option<PathBuf>,
    corpus: Option<PathBuf>,
    geometry: Option<PathBuf>,
    min_support: Option<SupportValue>,
    min_confidence: Option<f64>,
    tie_policy: Option<TiePolicy>,
    output_dir: Option<PathBuf>,
    seed: Option<u64>,
    format: Option<Format>,
    name: Option<String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg: ConfigFile =
            toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut cfg.alphabet,
            &mut cfg.corpus,
            &mut cfg.geometry,
            &mut cfg.output_dir,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Fully resolved parameters for one command.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub alphabet_path: Option<PathBuf>,
    pub corpus_manifest_path: Option<PathBuf>,
    pub geometry_path: Option<PathBuf>,
    pub min_support: MinSupport,
    pub min_confidence: f64,
    pub tie_policy: TiePolicy,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub format: Format,
    pub name: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alphabet_path: None,
            corpus_manifest_path: None,
            geometry_path: None,
            min_support: MinSupport::Count(2),
            min_confidence: 0.5,
            tie_policy: TiePolicy::PaperLiteral,
            output_dir: PathBuf::from("keymine-out"),
            seed: 0,
            format: Format::Tsv,
            name: "designed".into(),
        }
    }
}

/// Command-line values; each overrides the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub alphabet: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub geometry: Option<PathBuf>,
    pub min_support: Option<String>,
    pub min_confidence: Option<f64>,
    pub tie_policy: Option<TiePolicy>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub name: Option<String>,
}

impl RunConfig {
    pub fn resolve(file: Option<ConfigFile>, cli: Overrides) -> Result<Self> {
        let file = file.unwrap_or_default();
        let d = RunConfig::default();
        let min_support = match (cli.min_support, file.min_support) {
            (Some(s), _) | (None, Some(SupportValue::Text(s))) => MinSupport::parse(&s)?,
            (None, Some(SupportValue::Count(n))) => MinSupport::Count(n).validated()?,
            (None, Some(SupportValue::Fraction(f))) => MinSupport::Fraction(f).validated()?,
            (None, None) => d.min_support,
        };
        let min_confidence = cli.min_confidence.or(file.min_confidence).unwrap_or(d.min_confidence);
        if min_confidence.is_nan() || min_confidence < 0.0 {
            bail!("min confidence {min_confidence} is negative");
        }
        let cfg = Self {
            alphabet_path: cli.alphabet.or(file.alphabet),
            corpus_manifest_path: cli.corpus.or(file.corpus),
            geometry_path: cli.geometry.or(file.geometry),
            min_support,
            min_confidence,
            tie_policy: cli.tie_policy.or(file.tie_policy).unwrap_or(d.tie_policy),
            output_dir: cli.output_dir.or(file.output_dir).unwrap_or(d.output_dir),
            seed: cli.seed.or(file.seed).unwrap_or(d.seed),
            format: cli.format.or(file.format).unwrap_or(d.format),
            name: cli.name.or(file.name).unwrap_or(d.name),
        };
        for (what, path) in [
            ("alphabet", &cfg.alphabet_path),
            ("corpus manifest", &cfg.corpus_manifest_path),
            ("geometry", &cfg.geometry_path),
        ] {
            if let Some(p) = path {
                if !p.is_file() {
                    bail!("{what} file {} does not exist", p.display());
                }
            }
        }
        Ok(cfg)
    }

    pub fn alphabet(&self) -> Result<&Path> {
        self.alphabet_path
            .as_deref()
            .context("an alphabet file is required (--alphabet or `alphabet` in the config)")
    }

    pub fn corpus(&self) -> Result<&Path> {
        self.corpus_manifest_path
            .as_deref()
            .context("a corpus manifest is required (--corpus or `corpus` in the config)")
    }
}
