//! Level-wise Apriori mining and strong-rule generation over an in-memory
//! transaction database.
//!
//! Items are referred to by their position in the database universe, and an
//! [`Itemset`] is always strictly ascending in that order. The join step relies
//! on this: two (k-1)-itemsets join when they agree on their first k-2 items.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::NGraphTable;
use crate::error::{Error, Result};

/// Ascending universe positions.
pub type Itemset = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub tid: String,
    pub items: Itemset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionDb {
    universe: Vec<String>,
    index: HashMap<String, usize>,
    transactions: Vec<Transaction>,
}

impl TransactionDb {
    pub fn new<S: Into<String>>(universe: impl IntoIterator<Item = S>) -> Result<Self> {
        let universe: Vec<String> = universe.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(universe.len());
        for (i, item) in universe.iter().enumerate() {
            if item.is_empty() || item.chars().any(char::is_whitespace) {
                return Err(Error::InvalidParams(format!("bad item label {item:?}")));
            }
            if index.insert(item.clone(), i).is_some() {
                return Err(Error::InvalidParams(format!("duplicate item {item:?}")));
            }
        }
        Ok(Self {
            universe,
            index,
            transactions: Vec::new(),
        })
    }

    /// Adds a transaction given item labels; duplicates are dropped and items
    /// are stored in universe order.
    pub fn push<S: AsRef<str>>(&mut self, tid: impl Into<String>, items: &[S]) -> Result<()> {
        let items = self.itemset(items)?;
        self.transactions.push(Transaction {
            tid: tid.into(),
            items,
        });
        Ok(())
    }

    pub fn push_positions(&mut self, tid: impl Into<String>, mut items: Itemset) -> Result<()> {
        if let Some(&bad) = items.iter().find(|&&i| i >= self.universe.len()) {
            return Err(Error::UnknownItem(format!("#{bad}")));
        }
        items.sort_unstable();
        items.dedup();
        self.transactions.push(Transaction {
            tid: tid.into(),
            items,
        });
        Ok(())
    }

    /// Canonical itemset for the given labels.
    pub fn itemset<S: AsRef<str>>(&self, labels: &[S]) -> Result<Itemset> {
        let mut items = labels
            .iter()
            .map(|l| {
                self.index
                    .get(l.as_ref())
                    .copied()
                    .ok_or_else(|| Error::UnknownItem(l.as_ref().to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        items.sort_unstable();
        items.dedup();
        Ok(items)
    }

    pub fn labels(&self, itemset: &[usize]) -> Vec<String> {
        itemset.iter().map(|&i| self.universe[i].clone()).collect()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    /// Parses `tid<TAB>item item ...` rows. A `tid\titems` header and `#`
    /// comment lines are skipped. The universe is every item seen, in natural
    /// order (`I2` before `I10`).
    pub fn from_tsv(text: &str, source: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut seen = HashSet::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            if n == 0 && line.starts_with("tid\t") {
                continue;
            }
            let (tid, items) = line.split_once('\t').ok_or_else(|| Error::Parse {
                path: source.to_owned(),
                line: n + 1,
                message: "expected `tid<TAB>items`".into(),
            })?;
            let items: Vec<String> = items.split_whitespace().map(str::to_owned).collect();
            for item in &items {
                seen.insert(item.clone());
            }
            rows.push((tid.trim().to_owned(), items));
        }
        let mut universe: Vec<String> = seen.into_iter().collect();
        universe.sort_by(|a, b| natural_cmp(a, b));
        let mut db = Self::new(universe)?;
        for (tid, items) in rows {
            db.push(tid, &items)?;
        }
        Ok(db)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("tid\titems\n");
        for t in &self.transactions {
            let _ = writeln!(out, "{}\t{}", t.tid, self.labels(&t.items).join(" "));
        }
        out
    }
}

/// Orders strings by alternating text and decimal-number chunks.
fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let mut digit = None;
        for (i, c) in s.char_indices() {
            let d = c.is_ascii_digit();
            if digit.is_some_and(|prev| prev != d) {
                out.push((digit.unwrap(), &s[start..i]));
                start = i;
            }
            digit = Some(d);
        }
        if let Some(d) = digit {
            out.push((d, &s[start..]));
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let ord = match (x, y) {
            ((true, x), (true, y)) => {
                let (x, y) = (x.trim_start_matches('0'), y.trim_start_matches('0'));
                x.len().cmp(&y.len()).then_with(|| x.cmp(y))
            }
            ((_, x), (_, y)) => x.cmp(y),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MiningParams {
    pub min_support_count: u64,
    pub min_confidence: f64,
}

impl MiningParams {
    pub fn new(min_support_count: u64, min_confidence: f64) -> Result<Self> {
        if min_support_count == 0 {
            return Err(Error::InvalidParams("minimum support count must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&min_confidence) {
            return Err(Error::InvalidParams(format!(
                "minimum confidence {min_confidence} outside [0, 1]"
            )));
        }
        Ok(Self {
            min_support_count,
            min_confidence,
        })
    }

    /// Like [`MiningParams::new`] but accepts any confidence threshold,
    /// including unsatisfiable ones above 1.
    pub fn with_any_confidence(min_support_count: u64, min_confidence: f64) -> Result<Self> {
        if min_support_count == 0 {
            return Err(Error::InvalidParams("minimum support count must be at least 1".into()));
        }
        if min_confidence.is_nan() || min_confidence < 0.0 {
            return Err(Error::InvalidParams(format!(
                "minimum confidence {min_confidence} is negative"
            )));
        }
        Ok(Self {
            min_support_count,
            min_confidence,
        })
    }
}

/// Converts a relative minimum support into a transaction count, rounding up.
pub fn support_count_from_fraction(fraction: f64, db_size: usize) -> Result<u64> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "minimum support fraction {fraction} outside (0, 1]"
        )));
    }
    Ok(((fraction * db_size as f64).ceil() as u64).max(1))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CountedItemset {
    pub items: Itemset,
    pub support_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrequentLevel {
    pub k: usize,
    /// L_k, sorted.
    pub itemsets: Vec<CountedItemset>,
    /// C_k as counted during the scan that produced this level.
    pub candidates_evaluated: Vec<CountedItemset>,
}

impl FrequentLevel {
    pub fn get(&self, items: &[usize]) -> Option<u64> {
        self.itemsets
            .binary_search_by(|c| c.items.as_slice().cmp(items))
            .ok()
            .map(|i| self.itemsets[i].support_count)
    }
}

/// Number of transactions containing each candidate.
pub fn count_supports(db: &TransactionDb, candidates: &[Itemset]) -> Result<Vec<CountedItemset>> {
    let m = db.universe.len();
    for c in candidates {
        if let Some(&bad) = c.iter().find(|&&i| i >= m) {
            return Err(Error::UnknownItem(format!("#{bad}")));
        }
        if c.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(format!("candidate {c:?} is not canonical")));
        }
    }
    // Bucket candidates by first item so each transaction only tests
    // candidates that can start inside it.
    let mut by_first: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut empty = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        match c.first() {
            Some(&f) => by_first[f].push(i),
            None => empty.push(i),
        }
    }
    let counts = db
        .transactions
        .par_iter()
        .fold(
            || vec![0u64; candidates.len()],
            |mut acc, t| {
                for &i in &empty {
                    acc[i] += 1;
                }
                for (pos, &item) in t.items.iter().enumerate() {
                    for &ci in &by_first[item] {
                        if is_subset(&candidates[ci][1..], &t.items[pos + 1..]) {
                            acc[ci] += 1;
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; candidates.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(candidates
        .iter()
        .cloned()
        .zip(counts)
        .map(|(items, support_count)| CountedItemset {
            items,
            support_count,
        })
        .collect())
}

/// Both slices ascending.
fn is_subset(needle: &[usize], hay: &[usize]) -> bool {
    let mut hay = hay.iter();
    'outer: for n in needle {
        for h in hay.by_ref() {
            match h.cmp(n) {
                Ordering::Less => continue,
                Ordering::Equal => continue 'outer,
                Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// Join step only: pairs of (k-1)-itemsets sharing their first k-2 items.
pub fn join_candidates(prev: &FrequentLevel) -> Vec<Itemset> {
    let sets: Vec<&Itemset> = prev.itemsets.iter().map(|c| &c.items).collect();
    let mut out = Vec::new();
    for (i, a) in sets.iter().enumerate() {
        let prefix = &a[..a.len() - 1];
        for b in &sets[i + 1..] {
            if &b[..b.len() - 1] != prefix {
                // sorted input: once the prefix changes no later set matches
                break;
            }
            let (la, lb) = (a[a.len() - 1], b[b.len() - 1]);
            if la < lb {
                let mut c = (*a).clone();
                c.push(lb);
                out.push(c);
            }
        }
    }
    out
}

/// C_k: join of L_{k-1} with itself, minus candidates that have an
/// infrequent (k-1)-subset.
pub fn generate_candidates(prev: &FrequentLevel) -> Vec<Itemset> {
    let frequent: HashSet<&[usize]> = prev.itemsets.iter().map(|c| c.items.as_slice()).collect();
    join_candidates(prev)
        .into_iter()
        .filter(|c| {
            (0..c.len()).all(|skip| {
                let sub: Vec<usize> = c
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &x)| x)
                    .collect();
                frequent.contains(sub.as_slice())
            })
        })
        .collect()
}

/// Per-level bookkeeping of one Apriori run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub k: usize,
    pub joined: usize,
    pub candidates: usize,
    pub frequent: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MiningRun {
    /// Non-empty levels L_1, L_2, ...
    pub levels: Vec<FrequentLevel>,
    pub stats: Vec<LevelStats>,
    /// Database scans performed; one per counted candidate set.
    pub scans: usize,
}

pub fn mine_frequent(db: &TransactionDb, params: &MiningParams) -> Result<Vec<FrequentLevel>> {
    Ok(mine_frequent_traced(db, params)?.levels)
}

pub fn mine_frequent_traced(db: &TransactionDb, params: &MiningParams) -> Result<MiningRun> {
    if db.universe.is_empty() {
        return Err(Error::InvalidParams("transaction universe is empty".into()));
    }
    let mut run = MiningRun {
        levels: Vec::new(),
        stats: Vec::new(),
        scans: 0,
    };
    let mut candidates: Vec<Itemset> = (0..db.universe.len()).map(|i| vec![i]).collect();
    let mut joined = candidates.len();
    let mut k = 1;
    loop {
        let candidate_count = candidates.len();
        if candidates.is_empty() {
            run.stats.push(LevelStats {
                k,
                joined,
                candidates: 0,
                frequent: 0,
            });
            break;
        }
        let counted = count_supports(db, &candidates)?;
        run.scans += 1;
        let mut itemsets: Vec<CountedItemset> = counted
            .iter()
            .filter(|c| c.support_count >= params.min_support_count)
            .cloned()
            .collect();
        itemsets.sort();
        run.stats.push(LevelStats {
            k,
            joined,
            candidates: candidate_count,
            frequent: itemsets.len(),
        });
        if itemsets.is_empty() {
            break;
        }
        let mut candidates_evaluated = counted;
        candidates_evaluated.sort();
        let level = FrequentLevel {
            k,
            itemsets,
            candidates_evaluated,
        };
        joined = join_candidates(&level).len();
        candidates = generate_candidates(&level);
        run.levels.push(level);
        k += 1;
    }
    Ok(run)
}

/// Largest universe [`brute_force_frequent`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Exhaustive reference miner: counts every non-empty subset of the universe.
pub fn brute_force_frequent(db: &TransactionDb, params: &MiningParams) -> Result<Vec<FrequentLevel>> {
    let m = db.universe.len();
    if m > BRUTE_FORCE_LIMIT {
        return Err(Error::UniverseTooLarge {
            size: m,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let masks: Vec<u32> = db
        .transactions
        .iter()
        .map(|t| t.items.iter().fold(0u32, |acc, &i| acc | (1 << i)))
        .collect();
    let mut by_size: Vec<Vec<CountedItemset>> = vec![Vec::new(); m + 1];
    for subset in 1u32..(1u32 << m) {
        let count = masks.iter().filter(|&&t| t & subset == subset).count() as u64;
        let items: Itemset = (0..m).filter(|&i| subset & (1 << i) != 0).collect();
        by_size[items.len()].push(CountedItemset {
            items,
            support_count: count,
        });
    }
    let mut levels = Vec::new();
    for (k, mut all) in by_size.into_iter().enumerate().skip(1) {
        all.sort();
        let itemsets: Vec<CountedItemset> = all
            .iter()
            .filter(|c| c.support_count >= params.min_support_count)
            .cloned()
            .collect();
        if itemsets.is_empty() {
            break;
        }
        levels.push(FrequentLevel {
            k,
            itemsets,
            candidates_evaluated: all,
        });
    }
    Ok(levels)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssociationRule {
    pub antecedent: Itemset,
    pub consequent: Itemset,
    pub support_count: u64,
    pub antecedent_count: u64,
    pub support: f64,
    pub confidence: f64,
}

/// Strong rules A => F\A for every frequent F with |F| >= 2 and every
/// non-empty proper subset A meeting the confidence threshold.
pub fn generate_rules(
    levels: &[FrequentLevel],
    db_size: usize,
    params: &MiningParams,
) -> Result<Vec<AssociationRule>> {
    if db_size == 0 {
        return Err(Error::InvalidParams("database size must be positive".into()));
    }
    let lookup: HashMap<&[usize], u64> = levels
        .iter()
        .flat_map(|l| l.itemsets.iter())
        .map(|c| (c.items.as_slice(), c.support_count))
        .collect();
    let mut rules = Vec::new();
    for level in levels.iter().filter(|l| l.k >= 2) {
        for set in &level.itemsets {
            let k = set.items.len();
            for mask in 1u32..((1u32 << k) - 1) {
                let in_mask = |i: usize| mask & (1 << i) != 0;
                let pick = |want: bool| -> Itemset {
                    set.items
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| in_mask(i) == want)
                        .map(|(_, &x)| x)
                        .collect()
                };
                let (antecedent, consequent) = (pick(true), pick(false));
                let antecedent_count = *lookup
                    .get(antecedent.as_slice())
                    .ok_or_else(|| Error::MissingSupport(antecedent.iter().map(|i| i.to_string()).collect()))?;
                let confidence = set.support_count as f64 / antecedent_count as f64;
                if confidence >= params.min_confidence {
                    rules.push(AssociationRule {
                        antecedent,
                        consequent,
                        support_count: set.support_count,
                        antecedent_count,
                        support: set.support_count as f64 / db_size as f64,
                        confidence,
                    });
                }
            }
        }
    }
    Ok(rules)
}

/// One transaction per digraph occurrence, holding the unordered letter pair
/// (a doubled letter gives a singleton). The universe is the set of letters
/// that occur in some digraph, in alphabet order.
pub fn digraphs_as_transactions(table: &NGraphTable) -> Result<TransactionDb> {
    if table.n() != 2 {
        return Err(Error::WrongOrder {
            expected: 2,
            found: table.n(),
        });
    }
    let mut present = vec![false; table.letters().len()];
    for (key, _) in table.iter_positions() {
        for &p in key {
            present[p] = true;
        }
    }
    let letters: Vec<usize> = (0..present.len()).filter(|&p| present[p]).collect();
    let mut db = TransactionDb::new(letters.iter().map(|&p| table.letters()[p].to_string()))?;
    let remap: HashMap<usize, usize> = letters.iter().enumerate().map(|(u, &p)| (p, u)).collect();
    db.transactions.reserve(table.total() as usize);
    let mut tid = 0u64;
    for (key, count) in table.iter_positions() {
        let mut items = vec![remap[&key[0]], remap[&key[1]]];
        items.sort_unstable();
        items.dedup();
        for _ in 0..count {
            tid += 1;
            db.transactions.push(Transaction {
                tid: format!("T{tid}"),
                items: items.clone(),
            });
        }
    }
    Ok(db)
}

/// `itemset\tcount\tsupport` rows.
pub fn itemsets_to_tsv(db: &TransactionDb, itemsets: &[CountedItemset]) -> String {
    let mut out = String::from("itemset\tcount\tsupport\n");
    let n = db.len().max(1) as f64;
    for c in itemsets {
        let _ = writeln!(
            out,
            "{}\t{}\t{:.6}",
            db.labels(&c.items).join(" "),
            c.support_count,
            c.support_count as f64 / n
        );
    }
    out
}

/// `antecedent\tconsequent\tsupport\tconfidence` rows.
pub fn rules_to_tsv(db: &TransactionDb, rules: &[AssociationRule]) -> String {
    let mut out = String::from("antecedent\tconsequent\tsupport\tconfidence\n");
    for r in rules {
        let _ = writeln!(
            out,
            "{}\t{}\t{:.6}\t{:.6}",
            db.labels(&r.antecedent).join(" "),
            db.labels(&r.consequent).join(" "),
            r.support,
            r.confidence
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXTBOOK: &str = "tid\titems\n\
        T100\tI1 I2 I5\n\
        T200\tI2 I4\n\
        T300\tI2 I3\n\
        T400\tI1 I2 I4\n\
        T500\tI1 I3\n\
        T600\tI2 I3\n\
        T700\tI1 I3\n\
        T800\tI1 I2 I3 I5\n\
        T900\tI1 I2 I3\n";

    fn textbook() -> TransactionDb {
        TransactionDb::from_tsv(TEXTBOOK, "textbook").unwrap()
    }

    fn sets(db: &TransactionDb, raw: &[&[&str]]) -> Vec<Itemset> {
        raw.iter().map(|s| db.itemset(s).unwrap()).collect()
    }

    #[test]
    fn universe_uses_natural_order() {
        assert_eq!(textbook().universe(), &["I1", "I2", "I3", "I4", "I5"]);
        let db = TransactionDb::from_tsv("a\tI10 I2\n", "x").unwrap();
        assert_eq!(db.universe(), &["I2", "I10"]);
    }

    #[test]
    fn tsv_round_trip() {
        let db = textbook();
        assert_eq!(db.to_tsv(), TEXTBOOK);
        assert_eq!(TransactionDb::from_tsv(&db.to_tsv(), "again").unwrap(), db);
    }

    #[test]
    fn malformed_tsv_names_line() {
        let err = TransactionDb::from_tsv("tid\titems\nT1 I1\n", "bad.tsv").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn transactions_are_canonical() {
        let mut db = TransactionDb::new(["a", "b", "c"]).unwrap();
        db.push("t", &["c", "a", "c"]).unwrap();
        assert_eq!(db.transactions()[0].items, vec![0, 2]);
        assert!(db.push("u", &["z"]).is_err());
    }

    #[test]
    fn singleton_supports() {
        let db = textbook();
        let c: Vec<Itemset> = (0..5).map(|i| vec![i]).collect();
        let counts: Vec<u64> = count_supports(&db, &c).unwrap().iter().map(|c| c.support_count).collect();
        assert_eq!(counts, vec![6, 7, 6, 2, 2]);
    }

    #[test]
    fn pair_support() {
        let db = textbook();
        let c = sets(&db, &[&["I1", "I2"]]);
        assert_eq!(count_supports(&db, &c).unwrap()[0].support_count, 4);
    }

    #[test]
    fn empty_db_counts_zero() {
        let db = TransactionDb::new(["a", "b"]).unwrap();
        let out = count_supports(&db, &[vec![0], vec![0, 1]]).unwrap();
        assert!(out.iter().all(|c| c.support_count == 0));
    }

    #[test]
    fn out_of_universe_candidate_is_rejected() {
        let db = textbook();
        assert!(matches!(count_supports(&db, &[vec![0, 9]]), Err(Error::UnknownItem(_))));
    }

    fn level(db: &TransactionDb, k: usize, raw: &[&[&str]]) -> FrequentLevel {
        let mut itemsets: Vec<CountedItemset> = sets(db, raw)
            .into_iter()
            .map(|items| CountedItemset { items, support_count: 2 })
            .collect();
        itemsets.sort();
        FrequentLevel {
            k,
            candidates_evaluated: itemsets.clone(),
            itemsets,
        }
    }

    #[test]
    fn join_and_prune_from_l2() {
        let db = textbook();
        let l2 = level(
            &db,
            2,
            &[
                &["I1", "I2"],
                &["I1", "I3"],
                &["I1", "I5"],
                &["I2", "I3"],
                &["I2", "I4"],
                &["I2", "I5"],
            ],
        );
        let joined = join_candidates(&l2);
        assert_eq!(
            joined,
            sets(
                &db,
                &[
                    &["I1", "I2", "I3"],
                    &["I1", "I2", "I5"],
                    &["I1", "I3", "I5"],
                    &["I2", "I3", "I4"],
                    &["I2", "I3", "I5"],
                    &["I2", "I4", "I5"],
                ]
            )
        );
        assert_eq!(
            generate_candidates(&l2),
            sets(&db, &[&["I1", "I2", "I3"], &["I1", "I2", "I5"]])
        );
    }

    #[test]
    fn join_and_prune_from_l3() {
        let db = textbook();
        let l3 = level(&db, 3, &[&["I1", "I2", "I3"], &["I1", "I2", "I5"]]);
        assert_eq!(join_candidates(&l3), sets(&db, &[&["I1", "I2", "I3", "I5"]]));
        assert!(generate_candidates(&l3).is_empty());
    }

    #[test]
    fn single_itemset_has_nothing_to_join() {
        let db = textbook();
        let l1 = level(&db, 1, &[&["I1"]]);
        assert!(generate_candidates(&l1).is_empty());
    }

    #[test]
    fn worked_example_levels() {
        let db = textbook();
        let params = MiningParams::new(2, 0.0).unwrap();
        let run = mine_frequent_traced(&db, &params).unwrap();
        assert_eq!(run.levels.len(), 3);
        assert_eq!(run.scans, 3);
        let l2: Vec<(Vec<String>, u64)> = run.levels[1]
            .itemsets
            .iter()
            .map(|c| (db.labels(&c.items), c.support_count))
            .collect();
        let expect = [
            (["I1", "I2"], 4),
            (["I1", "I3"], 4),
            (["I1", "I5"], 2),
            (["I2", "I3"], 4),
            (["I2", "I4"], 2),
            (["I2", "I5"], 2),
        ];
        assert_eq!(l2.len(), expect.len());
        for ((got, gc), (want, wc)) in l2.iter().zip(expect) {
            assert_eq!(got, &want);
            assert_eq!(*gc, wc);
        }
        let last = run.stats.last().unwrap();
        assert_eq!((last.k, last.joined, last.candidates), (4, 1, 0));
    }

    #[test]
    fn support_above_db_size_gives_no_levels() {
        let db = textbook();
        let params = MiningParams::new(10, 0.0).unwrap();
        assert!(mine_frequent(&db, &params).unwrap().is_empty());
    }

    #[test]
    fn brute_force_tiny() {
        let mut db = TransactionDb::new(["a", "b"]).unwrap();
        db.push("1", &["a", "b"]).unwrap();
        let params = MiningParams::new(1, 0.0).unwrap();
        let levels = brute_force_frequent(&db, &params).unwrap();
        assert_eq!(levels.len(), 2);
        assert_eq!(levels[0].itemsets.len(), 2);
        assert_eq!(levels[1].itemsets, vec![CountedItemset { items: vec![0, 1], support_count: 1 }]);
        assert_eq!(levels, {
            let mut l = mine_frequent(&db, &params).unwrap();
            // Apriori keeps only counted candidates; compare the frequent part.
            for (a, b) in l.iter_mut().zip(&levels) {
                a.candidates_evaluated = b.candidates_evaluated.clone();
            }
            l
        });
    }

    #[test]
    fn brute_force_refuses_large_universe() {
        let db = TransactionDb::new((0..21).map(|i| format!("i{i}"))).unwrap();
        let params = MiningParams::new(1, 0.0).unwrap();
        assert!(matches!(
            brute_force_frequent(&db, &params),
            Err(Error::UniverseTooLarge { size: 21, .. })
        ));
    }

    #[test]
    fn rule_from_worked_example() {
        let db = textbook();
        let params = MiningParams::new(2, 0.0).unwrap();
        let levels = mine_frequent(&db, &params).unwrap();
        let rules = generate_rules(&levels, db.len(), &params).unwrap();
        let r = rules
            .iter()
            .find(|r| r.antecedent == vec![0] && r.consequent == vec![1])
            .unwrap();
        assert_eq!(r.support, 4.0 / 9.0);
        assert_eq!(r.confidence, 4.0 / 6.0);
    }

    #[test]
    fn zero_confidence_emits_every_split() {
        let db = textbook();
        let params = MiningParams::new(2, 0.0).unwrap();
        let levels = mine_frequent(&db, &params).unwrap();
        let rules = generate_rules(&levels, db.len(), &params).unwrap();
        // six pairs x 2 splits + two triples x 6 splits
        assert_eq!(rules.len(), 6 * 2 + 2 * 6);
    }

    #[test]
    fn unsatisfiable_confidence_emits_nothing() {
        let db = textbook();
        let params = MiningParams::with_any_confidence(2, 1.01).unwrap();
        let levels = mine_frequent(&db, &params).unwrap();
        assert!(generate_rules(&levels, db.len(), &params).unwrap().is_empty());
    }

    #[test]
    fn missing_subset_count_is_an_error() {
        let db = textbook();
        let broken = vec![level(&db, 2, &[&["I1", "I2"]])];
        let params = MiningParams::new(1, 0.0).unwrap();
        assert!(matches!(
            generate_rules(&broken, 9, &params),
            Err(Error::MissingSupport(_))
        ));
    }

    #[test]
    fn params_validation() {
        assert!(MiningParams::new(0, 0.5).is_err());
        assert!(MiningParams::new(1, 1.5).is_err());
        assert!(MiningParams::new(1, -0.1).is_err());
        assert_eq!(support_count_from_fraction(2.0 / 9.0, 9).unwrap(), 2);
        assert_eq!(support_count_from_fraction(0.22, 9).unwrap(), 2);
        assert_eq!(support_count_from_fraction(0.01, 9).unwrap(), 1);
        assert!(support_count_from_fraction(0.0, 9).is_err());
        assert!(support_count_from_fraction(1.5, 9).is_err());
    }

    #[test]
    fn digraph_transactions() {
        use crate::corpus::Alphabet;
        let alpha = Alphabet::new("ab", "ab".chars()).unwrap();
        let t = NGraphTable::from_counts(2, &alpha, [(vec!['a', 'b'], 2), (vec!['b', 'a'], 1)]).unwrap();
        let db = digraphs_as_transactions(&t).unwrap();
        assert_eq!(db.len(), 3);
        assert!(db.transactions().iter().all(|t| t.items == vec![0, 1]));

        let t = NGraphTable::from_counts(2, &alpha, [(vec!['a', 'a'], 5)]).unwrap();
        let db = digraphs_as_transactions(&t).unwrap();
        assert_eq!(db.universe(), &["a"]);
        assert_eq!(db.len(), 5);
        assert!(db.transactions().iter().all(|t| t.items == vec![0]));

        let mono = NGraphTable::from_counts(1, &alpha, [(vec!['a'], 1)]).unwrap();
        assert!(digraphs_as_transactions(&mono).is_err());
    }
}
