use std::collections::BTreeMap;

use keymine_core::{default_geometry, evaluate, synth, Alphabet, Layout, LetterStream, Token};
use proptest::prelude::*;
use rand::Rng;

fn fixture_layout() -> Layout {
    let mut m = BTreeMap::new();
    for (c, k) in "aeiou".chars().zip("ASDFG".chars()) {
        m.insert(c, k.to_string());
    }
    for (c, k) in "tnsrh".chars().zip("HJKL;".chars()) {
        m.insert(c, k.to_string());
    }
    m.insert('x', "shift+A".to_string());
    Layout::new("fixture", default_geometry(), m).unwrap()
}

/// Reference scan: (switching, left, right, undetermined).
fn oracle(tokens: &[Token], left: &str, right: &str) -> (u64, u64, u64, u64) {
    let side = |t: &Token| match t {
        Token::Letter(c) if left.contains(*c) => 1,
        Token::Letter(c) if right.contains(*c) => 2,
        _ => 0,
    };
    let (mut sw, mut l, mut r, mut u) = (0, 0, 0, 0);
    for (i, t) in tokens.iter().enumerate() {
        match side(t) {
            1 => l += 1,
            2 => r += 1,
            _ => u += 1,
        }
        if i > 0 {
            let (a, b) = (side(&tokens[i - 1]), side(t));
            if a != 0 && b != 0 && a != b {
                sw += 1;
            }
        }
    }
    (sw, l, r, u)
}

fn random_stream(seed: u64, len: usize) -> LetterStream {
    let alpha = Alphabet::new("t", "aeioutnsrhxyz".chars()).unwrap();
    let mut rng = synth::rng(seed);
    let pool: Vec<char> = "aeioutnsrhxyz7".chars().collect();
    let tokens = (0..len)
        .map(|_| {
            let c = pool[rng.gen_range(0..pool.len())];
            if alpha.contains(c) {
                Token::Letter(c)
            } else {
                Token::Undetermined(c)
            }
        })
        .collect();
    LetterStream { source_id: "rand".into(), tokens }
}

#[test]
fn thousand_token_stream_matches_scan() {
    let stream = random_stream(2024, 1000);
    let r = evaluate(&stream, &fixture_layout());
    let (sw, l, rr, u) = oracle(&stream.tokens, "aeioux", "tnsrh");
    assert_eq!((r.hand_switching, r.left_load, r.right_load, r.undetermined), (sw, l, rr, u));
    assert_eq!(r.total_chars, 1000);
}

proptest! {
    #[test]
    fn identities_hold(seed in any::<u64>(), len in 0usize..400) {
        let stream = random_stream(seed, len);
        let layout = fixture_layout();
        let r = evaluate(&stream, &layout);
        prop_assert_eq!(r.left_load + r.right_load + r.undetermined, r.total_chars);
        prop_assert!(r.hand_switching <= (r.left_load + r.right_load).saturating_sub(1));
        prop_assert_eq!(&evaluate(&stream, &layout), &r);

        let s = evaluate(&stream, &layout.with_hands_swapped());
        prop_assert_eq!(s.left_load, r.right_load);
        prop_assert_eq!(s.right_load, r.left_load);
        prop_assert_eq!(s.hand_switching, r.hand_switching);
        prop_assert_eq!(s.undetermined, r.undetermined);
    }

    #[test]
    fn one_hand_layout_has_no_switching(seed in any::<u64>(), len in 0usize..400) {
        let stream = random_stream(seed, len);
        let mut m = BTreeMap::new();
        for (c, k) in "aeiouxtnsrh".chars().zip("QWERTASDFGZ".chars()) {
            m.insert(c, k.to_string());
        }
        let layout = Layout::new("left-only", default_geometry(), m).unwrap();
        prop_assert_eq!(evaluate(&stream, &layout).hand_switching, 0);
    }
}
