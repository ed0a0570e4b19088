//! Seeded synthetic corpora and transaction databases.
//!
//! All generators use ChaCha8 so outputs are stable across platforms.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mining::TransactionDb;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `transactions` random transactions over items `i0..i{universe-1}`; each
/// item is included independently with a per-item probability drawn once.
pub fn random_db(seed: u64, universe: usize, transactions: usize) -> TransactionDb {
    let mut rng = rng(seed);
    let labels: Vec<String> = (0..universe).map(|i| format!("i{i}")).collect();
    let mut db = TransactionDb::new(labels).expect("distinct labels");
    let density: Vec<f64> = (0..universe).map(|_| rng.gen_range(0.1..0.7)).collect();
    for t in 0..transactions {
        let items: Vec<usize> = (0..universe).filter(|&i| rng.gen_bool(density[i])).collect();
        db.push_positions(format!("T{t}"), items).expect("items in range");
    }
    db
}

/// First-order Markov text over `letters`: a random skewed unigram
/// distribution and a random transition matrix. `noise` is the probability
/// of emitting a digit instead of a letter; `space` the probability of
/// emitting a space.
pub fn markov_text(seed: u64, letters: &[char], len: usize, noise: f64, space: f64) -> String {
    let mut rng = rng(seed);
    let n = letters.len();
    let start_weights: Vec<f64> = (0..n).map(|i| rng.gen_range(0.5..1.5) / (i + 1) as f64).collect();
    let start = WeightedIndex::new(&start_weights).expect("positive weights");
    let rows: Vec<WeightedIndex<f64>> = (0..n)
        .map(|_| {
            let w: Vec<f64> = (0..n)
                .map(|j| {
                    let base = start_weights[j];
                    if rng.gen_bool(0.3) {
                        base * rng.gen_range(2.0..6.0)
                    } else {
                        base * rng.gen_range(0.05..1.0)
                    }
                })
                .collect();
            WeightedIndex::new(w).expect("positive weights")
        })
        .collect();
    let mut out = String::with_capacity(len * 2);
    let mut current = start.sample(&mut rng);
    let mut emitted = 0;
    while emitted < len {
        if rng.gen_bool(space) {
            out.push(' ');
        }
        if rng.gen_bool(noise) {
            out.push(char::from(b'0' + rng.gen_range(0..10u8)));
            current = start.sample(&mut rng);
        } else {
            out.push(letters[current]);
            current = rows[current].sample(&mut rng);
        }
        emitted += 1;
    }
    out
}

/// Text over two disjoint letter groups. After each letter the next one is
/// drawn from the other group with probability `cross`. Within a group
/// letters follow `weights` (same length as the group).
pub fn two_group_text(
    seed: u64,
    groups: [&[char]; 2],
    weights: [&[f64]; 2],
    len: usize,
    cross: f64,
) -> String {
    let mut rng = rng(seed);
    let pick = [
        WeightedIndex::new(weights[0]).expect("positive weights"),
        WeightedIndex::new(weights[1]).expect("positive weights"),
    ];
    let mut g = rng.gen_range(0..2usize);
    let mut out = String::with_capacity(len * 2);
    for _ in 0..len {
        out.push(groups[g][pick[g].sample(&mut rng)]);
        if rng.gen_bool(cross) {
            g = 1 - g;
        }
    }
    out
}

/// Two-group text over the first ten `letters`: group one is letters 0..5,
/// group two letters 5..10.
///
/// In-group weights make the overall ranking start group-one, group-two,
/// group-two, group-one, so the four seed letters already respect the group
/// split.
pub fn split_groups_text(seed: u64, letters: &[char], len: usize, cross: f64) -> String {
    assert!(letters.len() >= 10, "need at least ten letters");
    const ONE: [f64; 5] = [0.50, 0.20, 0.12, 0.10, 0.08];
    const TWO: [f64; 5] = [0.30, 0.28, 0.16, 0.14, 0.12];
    two_group_text(seed, [&letters[..5], &letters[5..10]], [&ONE, &TWO], len, cross)
}
