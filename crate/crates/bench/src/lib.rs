//! Shared inputs for the criterion benches.

use keymine_core::corpus::{count_ngraphs, tokenize};
use keymine_core::{digraphs_as_transactions, synth, Alphabet, LetterStream, NGraphTable, TransactionDb};

pub struct Workload {
    pub alphabet: Alphabet,
    pub stream: LetterStream,
    pub monographs: NGraphTable,
    pub digraphs: NGraphTable,
    pub transactions: TransactionDb,
}

/// Seeded 30-letter Markov corpus of `letters` tokens.
pub fn workload(letters: usize) -> Workload {
    let alphabet = Alphabet::new("bench", ('a'..='z').chain(['A', 'B', 'C', 'D'])).unwrap();
    let text = synth::markov_text(7, alphabet.letters(), letters, 0.02, 0.15);
    let stream = tokenize(&text, &alphabet);
    let monographs = count_ngraphs(&stream, 1, &alphabet).unwrap();
    let digraphs = count_ngraphs(&stream, 2, &alphabet).unwrap();
    let transactions = digraphs_as_transactions(&digraphs).unwrap();
    Workload {
        alphabet,
        stream,
        monographs,
        digraphs,
        transactions,
    }
}
