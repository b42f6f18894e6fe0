//! Deterministic relation generators for verification campaigns.
//!
//! Exhaustive mode enumerates every relation of the configured dimensions in
//! row-major bit order (relation number `k` has `R(x_i, y_j) = bit i·|V| + j`
//! of `k`). Random mode draws each relation from its own ChaCha stream keyed
//! by `(seed, index)`, so relation `k` is the same whether it is produced
//! first, last, or on another thread.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::relation::{BinaryRelation, UniversePair};
use crate::Ratio;

/// Largest `|U|·|V|` accepted for exhaustive enumeration.
pub const EXHAUSTIVE_CELL_CAP: usize = 20;

/// Seed-derivation domains. Relation and subset draws never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Relation = 1,
    Subset = 2,
    Classification = 3,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent RNG for item `index` of `stream` under `seed`.
pub fn derived_rng(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(seed ^ splitmix64(stream as u64)) ^ index);
    ChaCha8Rng::seed_from_u64(key)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dims {
    /// Exactly `u_size × v_size`.
    Exact,
    /// Every `u × v` with `1 ≤ u ≤ u_size`, `1 ≤ v ≤ v_size`. Exhaustive
    /// mode walks them in `(u, v)` order; random mode draws them uniformly.
    UpTo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random { density: Ratio, seed: u64, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub u_size: usize,
    pub v_size: usize,
    pub dims: Dims,
    pub mode: Mode,
}

impl GeneratorConfig {
    pub fn exhaustive(u_size: usize, v_size: usize) -> Self {
        GeneratorConfig {
            u_size,
            v_size,
            dims: Dims::Exact,
            mode: Mode::Exhaustive,
        }
    }

    pub fn random(u_size: usize, v_size: usize, density: Ratio, seed: u64, count: usize) -> Self {
        GeneratorConfig {
            u_size,
            v_size,
            dims: Dims::Exact,
            mode: Mode::Random { density, seed, count },
        }
    }

    pub fn up_to(mut self) -> Self {
        self.dims = Dims::UpTo;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.u_size == 0 || self.v_size == 0 {
            return Err(Error::Config("universe sizes must be positive".into()));
        }
        match &self.mode {
            Mode::Exhaustive => {
                if self.u_size * self.v_size > EXHAUSTIVE_CELL_CAP {
                    return Err(Error::ExhaustiveCap {
                        u: self.u_size,
                        v: self.v_size,
                        cap: EXHAUSTIVE_CELL_CAP,
                    });
                }
            }
            Mode::Random { density, count, .. } => {
                if *density > Ratio::from_integer(1) {
                    return Err(Error::Config(format!("density {density} exceeds 1")));
                }
                if *count == 0 {
                    return Err(Error::Config("count must be positive".into()));
                }
            }
        }
        Ok(())
    }

    /// A random-access view of the relations this configuration yields.
    pub fn source(&self) -> Result<RelationSource> {
        self.validate()?;
        let dims: Vec<(usize, usize)> = match self.dims {
            Dims::Exact => vec![(self.u_size, self.v_size)],
            Dims::UpTo => (1..=self.u_size)
                .flat_map(|u| (1..=self.v_size).map(move |v| (u, v)))
                .collect(),
        };
        let mut blocks = Vec::with_capacity(dims.len());
        let mut offset = 0u64;
        for (u, v) in dims {
            let count = match self.mode {
                Mode::Exhaustive => 1u64 << (u * v),
                Mode::Random { .. } => 0,
            };
            blocks.push(DimBlock {
                universes: Arc::new(UniversePair::indexed(u, v)?),
                offset,
            });
            offset += count;
        }
        let len = match self.mode {
            Mode::Exhaustive => offset,
            Mode::Random { count, .. } => count as u64,
        };
        Ok(RelationSource {
            mode: self.mode.clone(),
            blocks,
            len,
        })
    }
}

#[derive(Debug, Clone)]
struct DimBlock {
    universes: Arc<UniversePair>,
    offset: u64,
}

/// Indexable relation stream produced by a [`GeneratorConfig`].
#[derive(Debug, Clone)]
pub struct RelationSource {
    mode: Mode,
    blocks: Vec<DimBlock>,
    len: u64,
}

impl RelationSource {
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Relation number `index` in canonical order.
    pub fn get(&self, index: u64) -> BinaryRelation {
        assert!(index < self.len, "relation index {index} out of range");
        match &self.mode {
            Mode::Exhaustive => {
                let block = self
                    .blocks
                    .iter()
                    .rev()
                    .find(|b| b.offset <= index)
                    .expect("offsets start at zero");
                BinaryRelation::from_mask(block.universes.clone(), index - block.offset)
            }
            Mode::Random { density, seed, .. } => {
                let mut rng = derived_rng(*seed, Stream::Relation, index);
                let block = if self.blocks.len() == 1 {
                    &self.blocks[0]
                } else {
                    &self.blocks[rng.gen_range(0..self.blocks.len())]
                };
                let u = block.universes.size(crate::Side::U);
                let v = block.universes.size(crate::Side::V);
                let (num, den) = (*density.numer(), *density.denom());
                let rows = (0..u)
                    .map(|_| BitSet::from_indices(v, (0..v).filter(|_| rng.gen_range(0..den) < num)))
                    .collect();
                BinaryRelation::from_rows(block.universes.clone(), rows).expect("consistent dimensions")
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = BinaryRelation> + '_ {
        (0..self.len).map(move |k| self.get(k))
    }
}

/// Every relation described by `cfg`, in canonical order.
pub fn generate_relations(cfg: &GeneratorConfig) -> Result<impl Iterator<Item = BinaryRelation>> {
    let source = cfg.source()?;
    Ok((0..source.len()).map(move |k| source.get(k)))
}
