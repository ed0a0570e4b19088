//! Hand assignment driven by digraph association statistics, and placement
//! of each hand's letters onto physical key positions.
//!
//! Letters are taken in descending monograph order. Ranks 1 and 4 seed the
//! right hand, ranks 2 and 3 the left. Every later letter is compared with
//! the letters already on each hand:
//!
//! * left/right support: summed support of `{letter, other}` over the letters
//!   on that hand;
//! * left/right confidence: summed confidence of `letter => other` over the
//!   same letters.
//!
//! A letter goes right only when both left scores beat both right scores;
//! everything else, including ties, goes left. [`TiePolicy::BalancedTies`]
//! instead alternates letters whose signals disagree.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::corpus::{monograph_ranking, NGraphTable};
use crate::error::{Error, Result};
use crate::mining::TransactionDb;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hand {
    Left,
    Right,
}

impl Hand {
    pub fn other(self) -> Hand {
        match self {
            Hand::Left => Hand::Right,
            Hand::Right => Hand::Left,
        }
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hand::Left => "left",
            Hand::Right => "right",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    /// Right only when left support and left confidence both win.
    #[default]
    PaperLiteral,
    /// Letters with conflicting or tied signals alternate right, left, ...
    BalancedTies,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HandAffinity {
    pub letter: char,
    pub left_support: f64,
    pub right_support: f64,
    pub left_confidence: f64,
    pub right_confidence: f64,
}

/// Item and pair counts of a digraph transaction database, indexed by letter.
#[derive(Debug, Clone)]
pub struct AffinityStats {
    transactions: u64,
    position: HashMap<char, usize>,
    item_counts: Vec<u64>,
    pair_counts: HashMap<(usize, usize), u64>,
}

impl AffinityStats {
    /// Single pass over `db`. Item labels must be single letters.
    pub fn from_db(db: &TransactionDb) -> Result<Self> {
        let mut position = HashMap::new();
        for (i, label) in db.universe().iter().enumerate() {
            let mut chars = label.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => {
                    position.insert(c, i);
                }
                _ => return Err(Error::UnknownItem(label.clone())),
            }
        }
        let mut item_counts = vec![0u64; db.universe().len()];
        let mut pair_counts = HashMap::new();
        for t in db.transactions() {
            for (i, &a) in t.items.iter().enumerate() {
                item_counts[a] += 1;
                for &b in &t.items[i + 1..] {
                    *pair_counts.entry((a, b)).or_insert(0) += 1;
                }
            }
        }
        Ok(Self {
            transactions: db.len() as u64,
            position,
            item_counts,
            pair_counts,
        })
    }

    /// Transactions containing `x`.
    pub fn count(&self, x: char) -> u64 {
        self.position.get(&x).map_or(0, |&i| self.item_counts[i])
    }

    /// Transactions containing both `x` and `y`.
    pub fn pair_count(&self, x: char, y: char) -> u64 {
        match (self.position.get(&x), self.position.get(&y)) {
            (Some(&a), Some(&b)) if a != b => {
                let key = if a < b { (a, b) } else { (b, a) };
                self.pair_counts.get(&key).copied().unwrap_or(0)
            }
            (Some(&a), Some(_)) => self.item_counts[a],
            _ => 0,
        }
    }

    pub fn support(&self, x: char, y: char) -> f64 {
        if self.transactions == 0 {
            return 0.0;
        }
        self.pair_count(x, y) as f64 / self.transactions as f64
    }

    /// Confidence of `x => y`; zero when `x` never occurs in a transaction.
    pub fn confidence(&self, x: char, y: char) -> f64 {
        let cx = self.count(x);
        if cx == 0 {
            return 0.0;
        }
        self.pair_count(x, y) as f64 / cx as f64
    }

    pub fn transactions(&self) -> u64 {
        self.transactions
    }
}

/// Cumulative support and confidence of `letter` towards each hand's
/// current letters.
pub fn affinity(
    letter: char,
    left: &[char],
    right: &[char],
    stats: &AffinityStats,
    monograph: &NGraphTable,
) -> Result<HandAffinity> {
    if monograph.count(&[letter]) == 0 {
        return Err(Error::ZeroCount(letter));
    }
    let sum = |set: &[char], f: &dyn Fn(char) -> f64| set.iter().map(|&o| f(o)).sum::<f64>();
    Ok(HandAffinity {
        letter,
        left_support: sum(left, &|o| stats.support(letter, o)),
        right_support: sum(right, &|o| stats.support(letter, o)),
        left_confidence: sum(left, &|o| stats.confidence(letter, o)),
        right_confidence: sum(right, &|o| stats.confidence(letter, o)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionKind {
    Seed,
    Affinity,
    /// Conflicting signals resolved by alternation under `BalancedTies`.
    Alternated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decision {
    /// 1-based rank in the monograph ranking.
    pub rank: usize,
    pub count: u64,
    pub affinity: HandAffinity,
    pub hand: Hand,
    pub kind: DecisionKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HandPartition {
    /// In assignment order.
    pub left: Vec<char>,
    pub right: Vec<char>,
    pub policy: TiePolicy,
    pub trace: Option<Vec<Decision>>,
}

impl HandPartition {
    pub fn hand_of(&self, letter: char) -> Option<Hand> {
        if self.left.contains(&letter) {
            Some(Hand::Left)
        } else if self.right.contains(&letter) {
            Some(Hand::Right)
        } else {
            None
        }
    }

    fn hand_mut(&mut self, hand: Hand) -> &mut Vec<char> {
        match hand {
            Hand::Left => &mut self.left,
            Hand::Right => &mut self.right,
        }
    }

    /// `rank\tletter\tLS\tRS\tLC\tRC\thand`.
    pub fn trace_tsv(&self) -> Result<String> {
        let trace = self.trace.as_ref().ok_or(Error::MissingTrace)?;
        let mut out = String::from("rank\tletter\tLS\tRS\tLC\tRC\thand\n");
        for d in trace {
            let a = &d.affinity;
            let _ = writeln!(
                out,
                "{}\t{}\t{:.9}\t{:.9}\t{:.9}\t{:.9}\t{}",
                d.rank,
                a.letter,
                a.left_support,
                a.right_support,
                a.left_confidence,
                a.right_confidence,
                d.hand
            );
        }
        Ok(out)
    }
}

/// Hand for seed rank `r` (0-based), if it is one of the first four.
fn seed_hand(rank: usize) -> Option<Hand> {
    match rank {
        0 | 3 => Some(Hand::Right),
        1 | 2 => Some(Hand::Left),
        _ => None,
    }
}

fn decide(a: &HandAffinity, policy: TiePolicy, alternations: usize) -> (Hand, DecisionKind) {
    let left_wins = a.left_support > a.right_support && a.left_confidence > a.right_confidence;
    if left_wins {
        return (Hand::Right, DecisionKind::Affinity);
    }
    match policy {
        TiePolicy::PaperLiteral => (Hand::Left, DecisionKind::Affinity),
        TiePolicy::BalancedTies => {
            let right_wins =
                a.right_support > a.left_support && a.right_confidence > a.left_confidence;
            if right_wins {
                (Hand::Left, DecisionKind::Affinity)
            } else if alternations.is_multiple_of(2) {
                (Hand::Right, DecisionKind::Alternated)
            } else {
                (Hand::Left, DecisionKind::Alternated)
            }
        }
    }
}

/// Greedy two-hand assignment in monograph rank order.
pub fn assign_hands(
    monograph: &NGraphTable,
    db: &TransactionDb,
    policy: TiePolicy,
) -> Result<HandPartition> {
    let ranking = monograph_ranking(monograph)?;
    let stats = AffinityStats::from_db(db)?;
    let mut partition = HandPartition {
        left: Vec::new(),
        right: Vec::new(),
        policy,
        trace: None,
    };
    let mut trace = Vec::with_capacity(ranking.len());
    let mut alternations = 0;
    for (rank, entry) in ranking.iter().enumerate() {
        let aff = affinity(entry.letter, &partition.left, &partition.right, &stats, monograph)?;
        let (hand, kind) = match seed_hand(rank) {
            Some(h) => (h, DecisionKind::Seed),
            None => decide(&aff, policy, alternations),
        };
        if kind == DecisionKind::Alternated {
            alternations += 1;
        }
        partition.hand_mut(hand).push(entry.letter);
        trace.push(Decision {
            rank: rank + 1,
            count: entry.count,
            affinity: aff,
            hand,
            kind,
        });
    }
    partition.trace = Some(trace);
    Ok(partition)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum Audit {
    Pass { decisions: usize },
    Fail { rank: usize, letter: char, reason: String },
}

impl Audit {
    pub fn passed(&self) -> bool {
        matches!(self, Audit::Pass { .. })
    }
}

impl fmt::Display for Audit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Audit::Pass { decisions } => write!(f, "pass ({decisions} decisions replayed)"),
            Audit::Fail { rank, letter, reason } => {
                write!(f, "fail at rank {rank} ({letter}): {reason}")
            }
        }
    }
}

/// Replays every recorded decision against the statistics and checks it
/// was taken by the assignment rule.
pub fn audit_partition(
    partition: &HandPartition,
    monograph: &NGraphTable,
    db: &TransactionDb,
) -> Result<Audit> {
    let trace = partition.trace.as_ref().ok_or(Error::MissingTrace)?;
    let ranking = monograph_ranking(monograph)?;
    let stats = AffinityStats::from_db(db)?;
    let (mut left, mut right) = (Vec::new(), Vec::new());
    let mut alternations = 0;
    let fail = |d: &Decision, reason: String| Audit::Fail {
        rank: d.rank,
        letter: d.affinity.letter,
        reason,
    };
    if trace.len() != ranking.len() {
        let at = trace.get(ranking.len().min(trace.len()).saturating_sub(1));
        return Ok(match at {
            Some(d) => fail(d, format!("trace has {} decisions, ranking has {}", trace.len(), ranking.len())),
            None => Audit::Fail {
                rank: 0,
                letter: ranking.first().map_or('\0', |r| r.letter),
                reason: "empty trace".into(),
            },
        });
    }
    for (i, (d, entry)) in trace.iter().zip(&ranking).enumerate() {
        let letter = d.affinity.letter;
        if d.rank != i + 1 || letter != entry.letter {
            return Ok(fail(d, format!("expected rank {} letter {}", i + 1, entry.letter)));
        }
        let expected = affinity(letter, &left, &right, &stats, monograph)?;
        if expected != d.affinity {
            return Ok(fail(d, "recorded affinities do not match replay".into()));
        }
        let (hand, kind) = match seed_hand(i) {
            Some(h) => (h, DecisionKind::Seed),
            None => decide(&expected, partition.policy, alternations),
        };
        if kind == DecisionKind::Alternated {
            alternations += 1;
        }
        if hand != d.hand || kind != d.kind {
            return Ok(fail(d, format!("rule gives {hand}, trace records {}", d.hand)));
        }
        if partition.hand_of(letter) != Some(hand) {
            return Ok(fail(d, format!("letter is not on the {hand} hand of the partition")));
        }
        match hand {
            Hand::Left => left.push(letter),
            Hand::Right => right.push(letter),
        }
    }
    if left != partition.left || right != partition.right {
        let d = trace.last().expect("non-empty trace");
        return Ok(fail(d, "partition lists differ from the replayed order".into()));
    }
    Ok(Audit::Pass {
        decisions: trace.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Finger {
    Index,
    Middle,
    Ring,
    Pinky,
    Thumb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Row {
    Top,
    Home,
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Base,
    Shift,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub id: String,
    pub hand: Hand,
    pub finger: Finger,
    pub row: Row,
    pub layer: Layer,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeyboardGeometry {
    positions: Vec<Position>,
}

impl KeyboardGeometry {
    pub fn new(positions: Vec<Position>) -> Result<Self> {
        let mut ids = HashSet::new();
        for p in &positions {
            if !ids.insert(p.id.as_str()) {
                return Err(Error::InvalidGeometry(format!("duplicate position id {:?}", p.id)));
            }
            if !(p.cost.is_finite() && p.cost > 0.0) {
                return Err(Error::InvalidGeometry(format!(
                    "position {:?} has non-positive cost {}",
                    p.id, p.cost
                )));
            }
        }
        for hand in [Hand::Left, Hand::Right] {
            if !positions.iter().any(|p| p.hand == hand && p.layer == Layer::Base) {
                return Err(Error::InvalidGeometry(format!("no base-layer position for the {hand} hand")));
            }
        }
        Ok(Self { positions })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&crate::io::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.positions).expect("geometry serializes");
        s.push('\n');
        s
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn get(&self, id: &str) -> Option<&Position> {
        self.positions.iter().find(|p| p.id == id)
    }

    /// Positions of `hand`, cheapest first; base before shift at equal cost,
    /// then file order.
    pub fn ordered_positions(&self, hand: Hand) -> Vec<&Position> {
        let mut ps: Vec<(usize, &Position)> = self
            .positions
            .iter()
            .enumerate()
            .filter(|(_, p)| p.hand == hand)
            .collect();
        ps.sort_by(|(ia, a), (ib, b)| {
            a.cost
                .total_cmp(&b.cost)
                .then(a.layer.cmp(&b.layer))
                .then(ia.cmp(ib))
        });
        ps.into_iter().map(|(_, p)| p).collect()
    }

    /// Same keys with every hand flipped.
    pub fn mirrored(&self) -> Self {
        Self {
            positions: self
                .positions
                .iter()
                .map(|p| Position {
                    hand: p.hand.other(),
                    ..p.clone()
                })
                .collect(),
        }
    }
}

/// Three rows of ten keys per layer (QWERTY key labels as ids), 60 positions.
///
/// Cost is finger cost plus row offset (plus a stretch for the inner index
/// column) plus layer offset. Home row is cheapest; index and middle fingers
/// beat ring and pinky.
pub fn default_geometry() -> KeyboardGeometry {
    const ROWS: [(Row, &str, f64); 3] = [
        (Row::Top, "QWERTYUIOP", 0.6),
        (Row::Home, "ASDFGHJKL;", 0.0),
        (Row::Bottom, "ZXCVBNM,./", 0.9),
    ];
    const COLUMNS: [(Hand, Finger, f64); 10] = [
        (Hand::Left, Finger::Pinky, 1.8),
        (Hand::Left, Finger::Ring, 1.4),
        (Hand::Left, Finger::Middle, 1.1),
        (Hand::Left, Finger::Index, 1.0),
        (Hand::Left, Finger::Index, 1.5),
        (Hand::Right, Finger::Index, 1.5),
        (Hand::Right, Finger::Index, 1.0),
        (Hand::Right, Finger::Middle, 1.1),
        (Hand::Right, Finger::Ring, 1.4),
        (Hand::Right, Finger::Pinky, 1.8),
    ];
    const SHIFT_COST: f64 = 3.0;
    let mut positions = Vec::with_capacity(60);
    for (layer, prefix, layer_cost) in [(Layer::Base, "", 0.0), (Layer::Shift, "shift+", SHIFT_COST)] {
        for (row, keys, row_cost) in ROWS {
            for (key, (hand, finger, finger_cost)) in keys.chars().zip(COLUMNS) {
                // rounded so the JSON file shows tidy decimals
                let cost = ((finger_cost + row_cost + layer_cost) * 10.0).round() / 10.0;
                positions.push(Position {
                    id: format!("{prefix}{key}"),
                    hand,
                    finger,
                    row,
                    layer,
                    cost,
                });
            }
        }
    }
    KeyboardGeometry::new(positions).expect("default geometry is valid")
}

/// Injective letter-to-position assignment over a geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub name: String,
    pub geometry_ref: Option<String>,
    pub geometry: KeyboardGeometry,
    mapping: BTreeMap<char, String>,
}

impl Layout {
    pub fn new(
        name: impl Into<String>,
        geometry: KeyboardGeometry,
        mapping: BTreeMap<char, String>,
    ) -> Result<Self> {
        let mut used = HashSet::new();
        for (letter, id) in &mapping {
            if geometry.get(id).is_none() {
                return Err(Error::InvalidLayout(format!(
                    "mapping[{:?}]: unknown position {id:?}",
                    letter.to_string()
                )));
            }
            if !used.insert(id.as_str()) {
                return Err(Error::InvalidLayout(format!(
                    "mapping[{:?}]: position {id:?} already assigned",
                    letter.to_string()
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            geometry_ref: None,
            geometry,
            mapping,
        })
    }

    pub fn mapping(&self) -> &BTreeMap<char, String> {
        &self.mapping
    }

    pub fn position_of(&self, letter: char) -> Option<&Position> {
        self.mapping.get(&letter).and_then(|id| self.geometry.get(id))
    }

    pub fn hand_of(&self, letter: char) -> Option<Hand> {
        self.position_of(letter).map(|p| p.hand)
    }

    /// Letter to hand lookup table.
    pub fn hands(&self) -> HashMap<char, Hand> {
        self.mapping
            .keys()
            .filter_map(|&c| self.hand_of(c).map(|h| (c, h)))
            .collect()
    }

    /// The same layout on a mirrored geometry: every letter changes hand.
    pub fn with_hands_swapped(&self) -> Self {
        Self {
            name: format!("{}-swapped", self.name),
            geometry_ref: self.geometry_ref.clone(),
            geometry: self.geometry.mirrored(),
            mapping: self.mapping.clone(),
        }
    }

    /// `{"name", "geometry_ref", "mapping": {letter: position_id}}`.
    pub fn to_json(&self) -> String {
        let mapping: serde_json::Map<String, Value> = self
            .mapping
            .iter()
            .map(|(c, id)| (c.to_string(), Value::String(id.clone())))
            .collect();
        let mut obj = serde_json::Map::new();
        obj.insert("name".into(), Value::String(self.name.clone()));
        obj.insert(
            "geometry_ref".into(),
            self.geometry_ref.clone().map_or(Value::Null, Value::String),
        );
        obj.insert("mapping".into(), Value::Object(mapping));
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("layout serializes");
        s.push('\n');
        s
    }

    /// Parses a layout file against `geometry`. Errors name the offending
    /// field path.
    pub fn from_json(text: &str, geometry: KeyboardGeometry) -> Result<Self> {
        let file = LayoutFile::parse(text)?;
        let mut layout = Self::new(file.name, geometry, file.mapping)?;
        layout.geometry_ref = file.geometry_ref;
        Ok(layout)
    }

    /// Loads a layout. A `geometry_ref` is resolved relative to the layout
    /// file; without one, `fallback` (or [`default_geometry`]) is used.
    pub fn load(path: &Path, fallback: Option<&KeyboardGeometry>) -> Result<Self> {
        let text = crate::io::read_to_string(path)?;
        let file = LayoutFile::parse(&text).map_err(|e| match e {
            Error::InvalidLayout(m) => Error::InvalidLayout(format!("{}: {m}", path.display())),
            other => other,
        })?;
        let geometry = match (&file.geometry_ref, fallback) {
            (Some(r), _) => {
                let base = path.parent().unwrap_or(Path::new(""));
                KeyboardGeometry::load(&base.join(r))?
            }
            (None, Some(g)) => g.clone(),
            (None, None) => default_geometry(),
        };
        let mut layout = Self::new(file.name, geometry, file.mapping)
            .map_err(|e| Error::InvalidLayout(format!("{}: {e}", path.display())))?;
        layout.geometry_ref = file.geometry_ref;
        Ok(layout)
    }
}

struct LayoutFile {
    name: String,
    geometry_ref: Option<String>,
    mapping: BTreeMap<char, String>,
}

impl LayoutFile {
    fn parse(text: &str) -> Result<Self> {
        let bad = |path: &str, what: &str| Error::InvalidLayout(format!("{path}: {what}"));
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::InvalidLayout(format!("not valid JSON: {e}")))?;
        let obj = value.as_object().ok_or_else(|| bad("$", "expected an object"))?;
        let name = obj
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("name", "expected a string"))?
            .to_owned();
        let geometry_ref = match obj.get("geometry_ref") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(bad("geometry_ref", "expected a string or null")),
        };
        let raw = obj
            .get("mapping")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("mapping", "expected an object"))?;
        let mut mapping = BTreeMap::new();
        for (key, id) in raw {
            let path = format!("mapping[{key:?}]");
            let mut chars = key.chars();
            let letter = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(bad(&path, "key must be a single code point")),
            };
            let id = id
                .as_str()
                .ok_or_else(|| bad(&path, "expected a position id string"))?;
            mapping.insert(letter, id.to_owned());
        }
        Ok(Self {
            name,
            geometry_ref,
            mapping,
        })
    }
}

/// Puts each hand's letters, most frequent first, on that hand's positions,
/// cheapest first.
pub fn place_keys(
    partition: &HandPartition,
    monograph: &NGraphTable,
    geometry: &KeyboardGeometry,
    name: &str,
) -> Result<Layout> {
    let mut mapping = BTreeMap::new();
    for hand in [Hand::Left, Hand::Right] {
        let mut letters: Vec<char> = match hand {
            Hand::Left => partition.left.clone(),
            Hand::Right => partition.right.clone(),
        };
        // stable: equal counts keep assignment order
        letters.sort_by_key(|&c| std::cmp::Reverse(monograph.count(&[c])));
        let positions = geometry.ordered_positions(hand);
        if letters.len() > positions.len() {
            return Err(Error::Capacity {
                hand,
                needed: letters.len(),
                available: positions.len(),
                overflow_letters: letters[positions.len()..].to_vec(),
            });
        }
        for (c, p) in letters.into_iter().zip(positions) {
            mapping.insert(c, p.id.clone());
        }
    }
    Layout::new(name, geometry.clone(), mapping)
}

/// Appends `letters` onto the cheapest free shift-layer positions, in order.
pub fn place_on_shift_layer(layout: &mut Layout, letters: &[char]) -> Result<()> {
    let used: HashSet<String> = layout.mapping.values().cloned().collect();
    let mut free: Vec<&Position> = layout
        .geometry
        .positions()
        .iter()
        .filter(|p| p.layer == Layer::Shift && !used.contains(&p.id))
        .collect();
    free.sort_by(|a, b| a.cost.total_cmp(&b.cost));
    let pending: Vec<char> = letters
        .iter()
        .copied()
        .filter(|c| !layout.mapping.contains_key(c))
        .collect();
    if pending.len() > free.len() {
        return Err(Error::InvalidLayout(format!(
            "{} letters need shift positions but only {} are free",
            pending.len(),
            free.len()
        )));
    }
    let ids: Vec<String> = free.iter().map(|p| p.id.clone()).collect();
    for (c, id) in pending.into_iter().zip(ids) {
        layout.mapping.insert(c, id);
    }
    Ok(())
}
