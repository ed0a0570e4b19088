use std::collections::HashMap;

use keymine_core::corpus::{count_ngraphs, tokenize};
use keymine_core::layout::{affinity, AffinityStats, Layer};
use keymine_core::{
    assign_hands, audit_partition, default_geometry, digraphs_as_transactions, place_keys, synth,
    Alphabet, Hand, NGraphTable, TiePolicy, TransactionDb,
};
use proptest::prelude::*;

fn stats(text: &str, alpha: &Alphabet) -> (NGraphTable, TransactionDb) {
    let s = tokenize(text, alpha);
    (
        count_ngraphs(&s, 1, alpha).unwrap(),
        digraphs_as_transactions(&count_ngraphs(&s, 2, alpha).unwrap()).unwrap(),
    )
}

#[test]
fn swapping_letters_exchanges_hand_affinities() {
    let alpha = Alphabet::new("t", "abcde".chars()).unwrap();
    let (mono, db) = stats(&"ea".repeat(15), &alpha);
    let s = AffinityStats::from_db(&db).unwrap();
    let a = affinity('e', &['b', 'c'], &['a', 'd'], &s, &mono).unwrap();

    let (mono2, db2) = stats(&"eb".repeat(15), &alpha);
    let s2 = AffinityStats::from_db(&db2).unwrap();
    let b = affinity('e', &['a', 'c'], &['b', 'd'], &s2, &mono2).unwrap();
    assert_eq!((a.left_support, a.right_support), (b.left_support, b.right_support));

    let c = affinity('e', &['b', 'd'], &['a', 'c'], &s2, &mono2).unwrap();
    assert_eq!(a.left_support, c.right_support);
    assert_eq!(a.right_support, c.left_support);
    assert_eq!(a.left_confidence, c.right_confidence);
    assert_eq!(a.right_confidence, c.left_confidence);
}

/// Ranks a,b,c,d seed the hands; e co-occurs four times with b and once
/// with a among ten digraph occurrences.
///
/// Hand-computed: LS = 4/10, RS = 1/10; e occurs in 5 transactions so
/// LC = 4/5, RC = 1/5. Both left scores win, so e goes right.
#[test]
fn engineered_fifth_letter_goes_right() {
    let alpha = Alphabet::new("t", "abcdef".chars()).unwrap();
    let mut text = String::new();
    text += &"be9".repeat(4);
    text += "ae9";
    text += &"ff9".repeat(5);
    text += &"e9".repeat(6);
    text += &"a9".repeat(39);
    text += &"b9".repeat(26);
    text += &"c9".repeat(25);
    text += &"d9".repeat(20);
    let (mono, db) = stats(&text, &alpha);
    assert_eq!(
        [mono.count(&['a']), mono.count(&['b']), mono.count(&['c']), mono.count(&['d']), mono.count(&['e']), mono.count(&['f'])],
        [40, 30, 25, 20, 11, 10]
    );
    assert_eq!(db.len(), 10);

    let p = assign_hands(&mono, &db, TiePolicy::PaperLiteral).unwrap();
    let trace = p.trace.as_ref().unwrap();
    let fifth = &trace[4];
    assert_eq!(fifth.affinity.letter, 'e');
    assert_eq!(fifth.affinity.left_support, 0.4);
    assert_eq!(fifth.affinity.right_support, 0.1);
    assert_eq!(fifth.affinity.left_confidence, 0.8);
    assert_eq!(fifth.affinity.right_confidence, 0.2);
    assert_eq!(fifth.hand, Hand::Right);
    assert_eq!(p.right, vec!['a', 'd', 'e']);
    assert_eq!(p.left, vec!['b', 'c', 'f']);
}

fn corpus(seed: u64, letters: &str, len: usize) -> (Alphabet, NGraphTable, TransactionDb) {
    let alpha = Alphabet::new("t", letters.chars()).unwrap();
    let text = synth::markov_text(seed, alpha.letters(), len, 0.02, 0.1);
    let (mono, db) = stats(&text, &alpha);
    (alpha, mono, db)
}

#[test]
fn seeded_corpora_seed_and_audit() {
    for seed in 0..20 {
        let (_, mono, db) = corpus(seed, "abcdefghijklmnopqrstuvwxyz", 3000);
        let ranking = keymine_core::monograph_ranking(&mono).unwrap();
        for policy in [TiePolicy::PaperLiteral, TiePolicy::BalancedTies] {
            let p = assign_hands(&mono, &db, policy).unwrap();
            assert_eq!(p.hand_of(ranking[0].letter), Some(Hand::Right));
            assert_eq!(p.hand_of(ranking[1].letter), Some(Hand::Left));
            assert_eq!(p.hand_of(ranking[2].letter), Some(Hand::Left));
            assert_eq!(p.hand_of(ranking[3].letter), Some(Hand::Right));
            assert_eq!(p.left.len() + p.right.len(), ranking.len());
            let audit = audit_partition(&p, &mono, &db).unwrap();
            assert!(audit.passed(), "seed {seed}: {audit}");
        }
    }
}

#[test]
fn fifty_letters_on_two_layers() {
    let letters: String = ('a'..='z').chain('A'..='X').collect();
    assert_eq!(letters.chars().count(), 50);
    let (_, mono, db) = corpus(77, &letters, 20_000);
    let p = assign_hands(&mono, &db, TiePolicy::PaperLiteral).unwrap();
    let geometry = default_geometry();
    let layout = place_keys(&p, &mono, &geometry, "fifty").unwrap();
    assert_eq!(layout.mapping().len(), p.left.len() + p.right.len());

    for (hand, set) in [(Hand::Left, &p.left), (Hand::Right, &p.right)] {
        // oracle: stable sort by descending count over assignment order
        let mut by_count: Vec<(usize, char)> = set.iter().copied().enumerate().collect();
        by_count.sort_by(|a, b| mono.count(&[b.1]).cmp(&mono.count(&[a.1])).then(a.0.cmp(&b.0)));
        let expected_base: Vec<char> = by_count.iter().take(15).map(|&(_, c)| c).collect();
        let mut on_base: Vec<char> = set
            .iter()
            .copied()
            .filter(|&c| layout.position_of(c).unwrap().layer == Layer::Base)
            .collect();
        let mut expected_sorted = expected_base.clone();
        on_base.sort_unstable();
        expected_sorted.sort_unstable();
        assert_eq!(on_base, expected_sorted, "{hand}");
        for &c in set {
            assert_eq!(layout.hand_of(c), Some(hand));
        }
    }
    assert_monotone(&layout, &mono);
}

fn assert_monotone(layout: &keymine_core::Layout, mono: &NGraphTable) {
    let placed: Vec<(char, Hand, f64, u64)> = layout
        .mapping()
        .keys()
        .map(|&c| {
            let p = layout.position_of(c).unwrap();
            (c, p.hand, p.cost, mono.count(&[c]))
        })
        .collect();
    for x in &placed {
        for y in &placed {
            if x.1 == y.1 && x.3 > y.3 {
                assert!(x.2 <= y.2, "{} (count {}) costs more than {} (count {})", x.0, x.3, y.0, y.3);
            }
        }
    }
}

#[test]
fn design_is_deterministic() {
    let (_, mono, db) = corpus(3, "abcdefghijklmnopqrstuvwxyz", 5000);
    let run = || {
        let p = assign_hands(&mono, &db, TiePolicy::PaperLiteral).unwrap();
        let l = place_keys(&p, &mono, &default_geometry(), "d").unwrap();
        (l.to_json(), p.trace_tsv().unwrap())
    };
    assert_eq!(run(), run());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn relabeling_permutes_partition(seed in any::<u64>(), perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let letters: Vec<char> = "abcdefghijkl".chars().collect();
        let mut shuffled = letters.clone();
        shuffled.shuffle(&mut synth::rng(perm_seed));
        let map: HashMap<char, char> = letters.iter().copied().zip(shuffled.iter().copied()).collect();

        let text = synth::markov_text(seed, &letters, 1500, 0.02, 0.1);
        let relabeled: String = text.chars().map(|c| *map.get(&c).unwrap_or(&c)).collect();

        let a1 = Alphabet::new("a", letters.iter().copied()).unwrap();
        let a2 = Alphabet::new("b", shuffled.iter().copied()).unwrap();
        let (m1, d1) = stats(&text, &a1);
        let (m2, d2) = stats(&relabeled, &a2);
        let p1 = assign_hands(&m1, &d1, TiePolicy::PaperLiteral).unwrap();
        let p2 = assign_hands(&m2, &d2, TiePolicy::PaperLiteral).unwrap();
        let left: Vec<char> = p1.left.iter().map(|c| map[c]).collect();
        let right: Vec<char> = p1.right.iter().map(|c| map[c]).collect();
        prop_assert_eq!(left, p2.left);
        prop_assert_eq!(right, p2.right);
    }

    #[test]
    fn every_seen_letter_gets_one_hand_and_audits(seed in any::<u64>(), len in 1usize..600) {
        let (alpha, mono, db) = corpus(seed, "abcdefghij", len);
        let p = assign_hands(&mono, &db, TiePolicy::PaperLiteral).unwrap();
        for &c in alpha.letters() {
            let seen = mono.count(&[c]) > 0;
            let hands = usize::from(p.left.contains(&c)) + usize::from(p.right.contains(&c));
            prop_assert_eq!(hands, usize::from(seen));
        }
        prop_assert!(audit_partition(&p, &mono, &db).unwrap().passed());
        let layout = place_keys(&p, &mono, &default_geometry(), "p").unwrap();
        assert_monotone(&layout, &mono);
    }
}
