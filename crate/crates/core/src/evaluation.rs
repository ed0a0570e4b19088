//! Hand-switching and hand-load scoring of a layout over a letter stream.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::{LetterStream, Token};
use crate::error::{Error, Result};
use crate::layout::{Hand, Layout};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub layout_name: String,
    pub hand_switching: u64,
    pub left_load: u64,
    pub right_load: u64,
    pub undetermined: u64,
    pub total_chars: u64,
}

impl EvalReport {
    fn empty(name: &str) -> Self {
        Self {
            layout_name: name.to_owned(),
            hand_switching: 0,
            left_load: 0,
            right_load: 0,
            undetermined: 0,
            total_chars: 0,
        }
    }

    fn absorb(&mut self, other: &EvalReport) {
        self.hand_switching += other.hand_switching;
        self.left_load += other.left_load;
        self.right_load += other.right_load;
        self.undetermined += other.undetermined;
        self.total_chars += other.total_chars;
    }

    pub fn typed(&self) -> u64 {
        self.left_load + self.right_load
    }

    pub fn switching_ratio(&self) -> f64 {
        ratio(self.hand_switching, self.typed())
    }

    pub fn load_imbalance(&self) -> f64 {
        ratio(self.left_load.abs_diff(self.right_load), self.typed())
    }

    pub const TSV_HEADER: &'static str =
        "name\thand_switching\tleft_load\tright_load\tundetermined\ttotal_chars";

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\n{}\t{}\t{}\t{}\t{}\t{}\n",
            Self::TSV_HEADER,
            self.layout_name,
            self.hand_switching,
            self.left_load,
            self.right_load,
            self.undetermined,
            self.total_chars
        )
    }

    /// Parses the single data row written by [`EvalReport::to_tsv`].
    pub fn from_tsv(text: &str, source: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: source.to_owned(),
            line,
            message,
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim_end() == Self::TSV_HEADER => {}
            Some((n, _)) => return Err(parse_err(n + 1, "unexpected header".into())),
            None => return Err(parse_err(1, "empty report".into())),
        }
        let (n, row) = lines.next().ok_or_else(|| parse_err(2, "missing data row".into()))?;
        let fields: Vec<&str> = row.trim_end_matches('\r').split('\t').collect();
        if fields.len() != 6 {
            return Err(parse_err(n + 1, format!("expected 6 fields, found {}", fields.len())));
        }
        let num = |i: usize| {
            fields[i]
                .parse::<u64>()
                .map_err(|e| parse_err(n + 1, format!("field {}: {e}", i + 1)))
        };
        Ok(Self {
            layout_name: fields[0].to_owned(),
            hand_switching: num(1)?,
            left_load: num(2)?,
            right_load: num(3)?,
            undetermined: num(4)?,
            total_chars: num(5)?,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Single pass over `stream`. Tokens the layout does not map (including all
/// undetermined tokens) add to `undetermined` and break the switching chain.
pub fn evaluate(stream: &LetterStream, layout: &Layout) -> EvalReport {
    evaluate_with(stream, &layout.name, &layout.hands())
}

fn evaluate_with(stream: &LetterStream, name: &str, hands: &HashMap<char, Hand>) -> EvalReport {
    let mut report = EvalReport::empty(name);
    let mut previous: Option<Hand> = None;
    for token in &stream.tokens {
        report.total_chars += 1;
        let hand = match *token {
            Token::Letter(c) => hands.get(&c).copied(),
            Token::Undetermined(_) => None,
        };
        match hand {
            Some(h) => {
                match h {
                    Hand::Left => report.left_load += 1,
                    Hand::Right => report.right_load += 1,
                }
                if previous.is_some_and(|p| p != h) {
                    report.hand_switching += 1;
                }
            }
            None => report.undetermined += 1,
        }
        previous = hand;
    }
    report
}

/// Sums per-source reports; no switch is counted across sources.
pub fn evaluate_streams(streams: &[LetterStream], layout: &Layout) -> EvalReport {
    use rayon::prelude::*;
    let hands = layout.hands();
    let parts: Vec<EvalReport> = streams
        .par_iter()
        .map(|s| evaluate_with(s, &layout.name, &hands))
        .collect();
    let mut total = EvalReport::empty(&layout.name);
    for p in &parts {
        total.absorb(p);
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    #[serde(flatten)]
    pub report: EvalReport,
    pub switching_ratio: f64,
    pub load_imbalance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "name\thand_switching\tleft_load\tright_load\tundetermined\tswitching_ratio\tload_imbalance\n",
        );
        for row in &self.rows {
            let r = &row.report;
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}",
                r.layout_name,
                r.hand_switching,
                r.left_load,
                r.right_load,
                r.undetermined,
                row.switching_ratio,
                row.load_imbalance
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn names(&self) -> Vec<&str> {
        self.rows.iter().map(|r| r.report.layout_name.as_str()).collect()
    }
}

/// Ranks reports by descending hand switching; ties keep input order.
pub fn compare(reports: &[EvalReport]) -> Result<ComparisonTable> {
    let first = reports.first().ok_or(Error::NoReports)?;
    if let Some(r) = reports.iter().find(|r| r.total_chars != first.total_chars) {
        return Err(Error::IncomparableReports(first.total_chars, r.total_chars));
    }
    let mut rows: Vec<ComparisonRow> = reports
        .iter()
        .map(|r| ComparisonRow {
            switching_ratio: r.switching_ratio(),
            load_imbalance: r.load_imbalance(),
            report: r.clone(),
        })
        .collect();
    rows.sort_by_key(|r| std::cmp::Reverse(r.report.hand_switching));
    Ok(ComparisonTable { rows })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::corpus::{tokenize, Alphabet};
    use crate::layout::default_geometry;

    fn layout(left: &str, right: &str) -> Layout {
        let mut m = BTreeMap::new();
        for (c, k) in left.chars().zip("ASDFGQWERTZXCVB".chars()) {
            m.insert(c, k.to_string());
        }
        for (c, k) in right.chars().zip("HJKL;YUIOPNM,./".chars()) {
            m.insert(c, k.to_string());
        }
        Layout::new("t", default_geometry(), m).unwrap()
    }

    fn stream(s: &str) -> LetterStream {
        tokenize(s, &Alphabet::new("t", "abcdefgh".chars()).unwrap())
    }

    #[test]
    fn single_token() {
        let r = evaluate(&stream("a"), &layout("a", "b"));
        assert_eq!((r.hand_switching, r.left_load, r.right_load, r.undetermined), (0, 1, 0, 0));
    }

    #[test]
    fn perfect_alternation() {
        let r = evaluate(&stream("abab"), &layout("a", "b"));
        assert_eq!((r.hand_switching, r.left_load, r.right_load, r.undetermined), (3, 2, 2, 0));
        assert_eq!(r.switching_ratio(), 0.75);
        assert_eq!(r.load_imbalance(), 0.0);
    }

    #[test]
    fn unmapped_tokens_break_the_chain() {
        // c is a letter without a key; 7 is undetermined
        let r = evaluate(&stream("ac b7a"), &layout("a", "b"));
        assert_eq!(r.hand_switching, 0);
        assert_eq!(r.undetermined, 2);
        assert_eq!(r.total_chars, 5);
    }

    #[test]
    fn one_hand_layout_never_switches() {
        let r = evaluate(&stream("abcabcabba"), &layout("abc", ""));
        assert_eq!(r.hand_switching, 0);
        assert_eq!(r.left_load, 10);
    }

    #[test]
    fn sources_do_not_chain() {
        let l = layout("a", "b");
        let r = evaluate_streams(&[stream("a"), stream("b")], &l);
        assert_eq!(r.hand_switching, 0);
        assert_eq!(r.total_chars, 2);
    }

    fn report(name: &str, switching: u64, total: u64) -> EvalReport {
        EvalReport {
            layout_name: name.into(),
            hand_switching: switching,
            left_load: total / 2,
            right_load: total - total / 2,
            undetermined: 0,
            total_chars: total,
        }
    }

    #[test]
    fn compare_orders_by_switching() {
        // Three layouts with close hand-switching totals.
        let t = compare(&[
            report("layout3", 358672, 856725),
            report("proposed", 410113, 856725),
            report("bijoy", 358873, 856725),
        ])
        .unwrap();
        assert_eq!(t.names(), vec!["proposed", "bijoy", "layout3"]);
    }

    #[test]
    fn compare_single_and_ties() {
        let t = compare(&[report("only", 5, 10)]).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].switching_ratio, 0.5);
        let t = compare(&[report("x", 5, 10), report("y", 5, 10)]).unwrap();
        assert_eq!(t.names(), vec!["x", "y"]);
    }

    #[test]
    fn compare_rejects_mismatch_and_empty() {
        assert!(matches!(
            compare(&[report("a", 1, 10), report("b", 1, 11)]),
            Err(Error::IncomparableReports(10, 11))
        ));
        assert!(matches!(compare(&[]), Err(Error::NoReports)));
    }

    #[test]
    fn report_serialization() {
        let r = report("n", 3, 4);
        assert_eq!(EvalReport::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(r.to_tsv().lines().nth(1).unwrap(), "n\t3\t2\t2\t0\t4");
        assert_eq!(EvalReport::from_tsv(&r.to_tsv(), "r.tsv").unwrap(), r);
        assert!(EvalReport::from_tsv("name\tx\n", "bad.tsv").is_err());
    }
}
