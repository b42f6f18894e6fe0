use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::relation::{BinaryRelation, UniversePair};

pub const REFERENCE_MATRIX: [[u8; 6]; 5] = [
    [1, 1, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 1],
    [0, 1, 0, 1, 0, 0],
    [1, 0, 1, 1, 1, 1],
    [1, 1, 0, 0, 1, 0],
];

pub fn reference_relation() -> BinaryRelation {
    let rows = REFERENCE_MATRIX
        .iter()
        .map(|r| r.iter().map(|&b| b == 1).collect())
        .collect();
    BinaryRelation::new(UniversePair::indexed(5, 6).unwrap(), rows).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random relation with dimensions drawn from `1..=max_u` and `1..=max_v`.
pub fn random_relation(rng: &mut ChaCha8Rng, max_u: usize, max_v: usize) -> BinaryRelation {
    let u = rng.gen_range(1..=max_u);
    let v = rng.gen_range(1..=max_v);
    let rows = (0..u)
        .map(|_| BitSet::from_bools(&(0..v).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>()))
        .collect();
    BinaryRelation::from_rows(UniversePair::indexed(u, v).unwrap(), rows).unwrap()
}
