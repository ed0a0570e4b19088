//! Text ingestion and letter n-graph statistics.
//!
//! Text is normalized to NFC, whitespace is dropped, and each remaining code
//! point becomes either a [`Token::Letter`] (member of the [`Alphabet`]) or a
//! [`Token::Undetermined`]. N-graph windows never span an undetermined token.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Ordered set of code points treated as typeable letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    name: String,
    letters: Vec<char>,
    index: HashMap<char, usize>,
}

#[derive(Serialize, Deserialize)]
struct AlphabetFile {
    name: String,
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new(name: impl Into<String>, letters: impl IntoIterator<Item = char>) -> Result<Self> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet has no letters".into()));
        }
        let mut index = HashMap::with_capacity(letters.len());
        for (i, &c) in letters.iter().enumerate() {
            if c.is_whitespace() {
                return Err(Error::InvalidAlphabet(format!(
                    "whitespace code point U+{:04X} cannot be a letter",
                    c as u32
                )));
            }
            if index.insert(c, i).is_some() {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate letter {c:?} (U+{:04X})",
                    c as u32
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            letters,
            index,
        })
    }

    /// Parses `{"name": ..., "letters": ["a", "b", ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlphabetFile = serde_json::from_str(text)?;
        let mut letters = Vec::with_capacity(file.letters.len());
        for (i, s) in file.letters.iter().enumerate() {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => letters.push(c),
                _ => {
                    return Err(Error::InvalidAlphabet(format!(
                        "letters[{i}] = {s:?} is not a single code point"
                    )))
                }
            }
        }
        Self::new(file.name, letters)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&crate::io::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let file = AlphabetFile {
            name: self.name.clone(),
            letters: self.letters.iter().map(|c| c.to_string()).collect(),
        };
        serde_json::to_string_pretty(&file).expect("alphabet serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, c: char) -> bool {
        self.index.contains_key(&c)
    }

    /// Position of `c` in alphabet order.
    pub fn position(&self, c: char) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn letter(&self, position: usize) -> char {
        self.letters[position]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Token {
    Letter(char),
    Undetermined(char),
}

impl Token {
    pub fn code_point(self) -> char {
        match self {
            Token::Letter(c) | Token::Undetermined(c) => c,
        }
    }

    pub fn is_letter(self) -> bool {
        matches!(self, Token::Letter(_))
    }
}

/// Whitespace-free token sequence from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterStream {
    pub source_id: String,
    pub tokens: Vec<Token>,
}

impl LetterStream {
    pub fn letter_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_letter()).count()
    }

    pub fn undetermined_count(&self) -> usize {
        self.tokens.len() - self.letter_count()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

pub fn tokenize(text: &str, alphabet: &Alphabet) -> LetterStream {
    tokenize_source(text, alphabet, "")
}

pub fn tokenize_source(text: &str, alphabet: &Alphabet, source_id: &str) -> LetterStream {
    let tokens = text
        .nfc()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            if alphabet.contains(c) {
                Token::Letter(c)
            } else {
                Token::Undetermined(c)
            }
        })
        .collect();
    LetterStream {
        source_id: source_id.to_owned(),
        tokens,
    }
}

/// Decodes UTF-8 and tokenizes, reporting the offset of the first invalid byte.
pub fn tokenize_bytes(bytes: &[u8], alphabet: &Alphabet, source_id: &str) -> Result<LetterStream> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Encoding {
        source_id: source_id.to_owned(),
        offset: e.valid_up_to(),
    })?;
    Ok(tokenize_source(text, alphabet, source_id))
}

pub fn tokenize_file(path: &Path, alphabet: &Alphabet) -> Result<LetterStream> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    tokenize_bytes(&bytes, alphabet, &path.display().to_string())
}

/// Reads a manifest: one path per line, `#` starts a comment, blank lines
/// ignored. Relative paths resolve against the manifest's directory.
pub fn read_manifest(path: &Path) -> Result<Vec<PathBuf>> {
    let text = crate::io::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(parse_manifest(&text, base))
}

pub fn parse_manifest(text: &str, base: &Path) -> Vec<PathBuf> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(|line| {
            let p = Path::new(line);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        })
        .collect()
}

/// Frequency counts of letter n-grams, keyed by alphabet positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGraphTable {
    n: usize,
    letters: Vec<char>,
    counts: BTreeMap<Vec<usize>, u64>,
    total: u64,
}

impl NGraphTable {
    pub fn empty(n: usize, alphabet: &Alphabet) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidOrder(n));
        }
        Ok(Self {
            n,
            letters: alphabet.letters().to_vec(),
            counts: BTreeMap::new(),
            total: 0,
        })
    }

    /// Builds a table from explicit letter tuples; every letter must be in `alphabet`.
    pub fn from_counts<I>(n: usize, alphabet: &Alphabet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<char>, u64)>,
    {
        let mut table = Self::empty(n, alphabet)?;
        for (gram, count) in entries {
            if gram.len() != n {
                return Err(Error::InvalidOrder(gram.len()));
            }
            let key = gram
                .iter()
                .map(|&c| alphabet.position(c).ok_or(Error::UnknownLetter(c)))
                .collect::<Result<Vec<_>>>()?;
            table.add(key, count);
        }
        Ok(table)
    }

    fn add(&mut self, key: Vec<usize>, count: u64) {
        if count == 0 {
            return;
        }
        *self.counts.entry(key).or_default() += count;
        self.total += count;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Alphabet letters, in alphabet order.
    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn count(&self, gram: &[char]) -> u64 {
        let key: Option<Vec<usize>> = gram
            .iter()
            .map(|c| self.letters.iter().position(|l| l == c))
            .collect();
        key.and_then(|k| self.counts.get(&k).copied()).unwrap_or(0)
    }

    /// Entries in alphabet-lexicographic key order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<char>, u64)> + '_ {
        self.counts
            .iter()
            .map(|(k, &v)| (k.iter().map(|&i| self.letters[i]).collect(), v))
    }

    /// Entries keyed by alphabet positions.
    pub fn iter_positions(&self) -> impl Iterator<Item = (&[usize], u64)> + '_ {
        self.counts.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Adds `other` into `self`. Both tables must share order and alphabet.
    pub fn merge(&mut self, other: &NGraphTable) -> Result<()> {
        if self.n != other.n || self.letters != other.letters {
            return Err(Error::IncompatibleTables);
        }
        for (k, &v) in &other.counts {
            self.add(k.clone(), v);
        }
        Ok(())
    }

    /// TSV with header `ngram\tcount\tpercentage`, rows by descending count.
    /// Letters of an n-gram are joined by `+`.
    pub fn to_tsv(&self) -> String {
        let mut rows: Vec<(&Vec<usize>, u64)> = self.counts.iter().map(|(k, &v)| (k, v)).collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let mut out = String::from("ngram\tcount\tpercentage\n");
        for (key, count) in rows {
            let gram: Vec<String> = key.iter().map(|&i| self.letters[i].to_string()).collect();
            let _ = writeln!(
                out,
                "{}\t{}\t{:.6}",
                gram.join("+"),
                count,
                percentage(count, self.total)
            );
        }
        out
    }
}

fn percentage(count: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    }
}

/// Counts n-grams of consecutive letter tokens. Windows never contain an
/// undetermined token.
pub fn count_ngraphs(stream: &LetterStream, n: usize, alphabet: &Alphabet) -> Result<NGraphTable> {
    let mut table = NGraphTable::empty(n, alphabet)?;
    let mut run: Vec<usize> = Vec::new();
    let flush = |run: &mut Vec<usize>, table: &mut NGraphTable| {
        if run.len() >= n {
            for w in run.windows(n) {
                table.add(w.to_vec(), 1);
            }
        }
        run.clear();
    };
    for token in &stream.tokens {
        match *token {
            Token::Letter(c) => {
                let pos = alphabet.position(c).ok_or(Error::UnknownLetter(c))?;
                run.push(pos);
            }
            Token::Undetermined(_) => flush(&mut run, &mut table),
        }
    }
    flush(&mut run, &mut table);
    Ok(table)
}

/// Counts each stream independently and merges; no n-gram spans two sources.
pub fn count_ngraphs_many(
    streams: &[LetterStream],
    n: usize,
    alphabet: &Alphabet,
) -> Result<NGraphTable> {
    use rayon::prelude::*;
    let tables = streams
        .par_iter()
        .map(|s| count_ngraphs(s, n, alphabet))
        .collect::<Result<Vec<_>>>()?;
    let mut total = NGraphTable::empty(n, alphabet)?;
    for t in &tables {
        total.merge(t)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedLetter {
    pub letter: char,
    pub count: u64,
    pub percentage: f64,
}

/// Letters by descending count, ties in alphabet order.
pub fn monograph_ranking(table: &NGraphTable) -> Result<Vec<RankedLetter>> {
    if table.n != 1 {
        return Err(Error::WrongOrder {
            expected: 1,
            found: table.n,
        });
    }
    let mut rows: Vec<(usize, u64)> = table.counts.iter().map(|(k, &v)| (k[0], v)).collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(rows
        .into_iter()
        .map(|(pos, count)| RankedLetter {
            letter: table.letters[pos],
            count,
            percentage: percentage(count, table.total),
        })
        .collect())
}
