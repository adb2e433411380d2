#![allow(dead_code)]

use prepol_core::{CaseId, Letter, Word};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// One representative case per family, at a level where random words stay cheap.
pub const FAMILY_CASES: [(CaseId, i64); 5] = [
    (CaseId::E6R3, 2),
    (CaseId::E7R2, 2),
    (CaseId::E8R1, 1),
    (CaseId::F4R4, 2),
    (CaseId::E6TwistedR4, 2),
];

/// A random word of total degree at most `max_degree` over `nodes` nodes.
pub fn random_word(rng: &mut StdRng, nodes: usize, max_degree: u32) -> Word {
    let target = rng.random_range(1..=max_degree);
    let mut left = target;
    let mut letters = Vec::new();
    while left > 0 {
        let p = rng.random_range(1..=left.min(2));
        let i = rng.random_range(0..nodes);
        letters.push(if rng.random_bool(0.5) { Letter::e(i, p) } else { Letter::f(i, p) });
        left -= p;
    }
    Word(letters)
}

/// A word with the same letters in a different order (hence the same weight).
pub fn shuffled(rng: &mut StdRng, w: &Word) -> Word {
    let mut letters = w.letters().to_vec();
    letters.shuffle(rng);
    Word(letters)
}

/// A random word not certified zero by `engine` (tries up to 200 draws).
pub fn live_word(engine: &prepol_core::Engine, rng: &mut StdRng, nodes: usize, max_degree: u32) -> Word {
    let mut w = random_word(rng, nodes, max_degree);
    for _ in 0..200 {
        if engine.is_zero(&w).unwrap().is_none() {
            break;
        }
        w = random_word(rng, nodes, max_degree);
    }
    w
}
