//! Binary relations between two labeled finite universes.
//!
//! A relation `R ⊆ U × V` is stored as `|U|` row bitsets of width `|V|`
//! (row `i` is the right neighborhood `r(x_i)`) together with the transposed
//! `|V|` column bitsets of width `|U|` (column `j` is the left neighborhood
//! `l(y_j)`). Elements are addressed by label at the API boundary and by dense
//! index internally; every rendered set lists labels in universe order.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Which universe a subset or partition lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    U,
    V,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::U => "U",
            Side::V => "V",
        })
    }
}

/// The two labeled universes `U` and `V`.
#[derive(Debug)]
pub struct UniversePair {
    u_labels: Vec<String>,
    v_labels: Vec<String>,
    u_index: HashMap<String, usize>,
    v_index: HashMap<String, usize>,
}

impl PartialEq for UniversePair {
    fn eq(&self, other: &Self) -> bool {
        self.u_labels == other.u_labels && self.v_labels == other.v_labels
    }
}

impl Eq for UniversePair {}

pub fn is_valid_label(label: &str) -> bool {
    !label.is_empty() && !label.chars().any(|c| c.is_whitespace() || c == ':')
}

fn index_side(side: Side, labels: &[String]) -> Result<HashMap<String, usize>> {
    if labels.is_empty() {
        return Err(Error::EmptyUniverse(side));
    }
    let mut index = HashMap::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        if !is_valid_label(label) {
            return Err(Error::InvalidLabel {
                side,
                label: label.clone(),
            });
        }
        if index.insert(label.clone(), i).is_some() {
            return Err(Error::DuplicateLabel {
                side,
                label: label.clone(),
            });
        }
    }
    Ok(index)
}

impl UniversePair {
    pub fn new<S: Into<String>>(
        u_labels: impl IntoIterator<Item = S>,
        v_labels: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let u_labels: Vec<String> = u_labels.into_iter().map(Into::into).collect();
        let v_labels: Vec<String> = v_labels.into_iter().map(Into::into).collect();
        let u_index = index_side(Side::U, &u_labels)?;
        let v_index = index_side(Side::V, &v_labels)?;
        Ok(UniversePair {
            u_labels,
            v_labels,
            u_index,
            v_index,
        })
    }

    /// `U = {x1..x_u}`, `V = {y1..y_v}`.
    pub fn indexed(u: usize, v: usize) -> Result<Self> {
        UniversePair::new((1..=u).map(|i| format!("x{i}")), (1..=v).map(|j| format!("y{j}")))
    }

    pub fn labels(&self, side: Side) -> &[String] {
        match side {
            Side::U => &self.u_labels,
            Side::V => &self.v_labels,
        }
    }

    pub fn size(&self, side: Side) -> usize {
        self.labels(side).len()
    }

    pub fn index_of(&self, side: Side, label: &str) -> Result<usize> {
        let index = match side {
            Side::U => &self.u_index,
            Side::V => &self.v_index,
        };
        index.get(label).copied().ok_or_else(|| Error::UnknownLabel {
            side,
            label: label.to_string(),
        })
    }
}

fn same_universes(a: &Arc<UniversePair>, b: &Arc<UniversePair>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A subset of one side of a [`UniversePair`].
#[derive(Clone)]
pub struct Subset {
    side: Side,
    bits: BitSet,
    universes: Arc<UniversePair>,
}

impl PartialEq for Subset {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.bits == other.bits && same_universes(&self.universes, &other.universes)
    }
}

impl Eq for Subset {}

impl Subset {
    pub fn from_bits(universes: Arc<UniversePair>, side: Side, bits: BitSet) -> Self {
        assert_eq!(
            bits.len(),
            universes.size(side),
            "bit width must match the {side} universe"
        );
        Subset { side, bits, universes }
    }

    pub fn empty(universes: Arc<UniversePair>, side: Side) -> Self {
        let bits = BitSet::empty(universes.size(side));
        Subset { side, bits, universes }
    }

    pub fn full(universes: Arc<UniversePair>, side: Side) -> Self {
        let bits = BitSet::full(universes.size(side));
        Subset { side, bits, universes }
    }

    pub fn from_labels<S: AsRef<str>>(
        universes: Arc<UniversePair>,
        side: Side,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let mut bits = BitSet::empty(universes.size(side));
        for label in labels {
            bits.insert(universes.index_of(side, label.as_ref())?);
        }
        Ok(Subset { side, bits, universes })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn universes(&self) -> &Arc<UniversePair> {
        &self.universes
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// True when the subset is the whole of its universe.
    pub fn is_full(&self) -> bool {
        self.bits.is_full()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.universes
            .index_of(self.side, label)
            .is_ok_and(|i| self.bits.contains(i))
    }

    /// Member labels in universe order.
    pub fn labels(&self) -> Vec<&str> {
        let names = self.universes.labels(self.side);
        self.bits.iter().map(|i| names[i].as_str()).collect()
    }

    pub(crate) fn check_compatible(&self, other: &Subset) -> Result<()> {
        if self.side != other.side {
            return Err(Error::SideMismatch {
                expected: self.side,
                found: other.side,
            });
        }
        if !same_universes(&self.universes, &other.universes) {
            return Err(Error::UniverseMismatch);
        }
        Ok(())
    }

    fn with_bits(&self, bits: BitSet) -> Subset {
        Subset {
            side: self.side,
            bits,
            universes: self.universes.clone(),
        }
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.check_compatible(other)?;
        Ok(self.with_bits(self.bits.union(&other.bits)))
    }

    pub fn intersection(&self, other: &Subset) -> Result<Subset> {
        self.check_compatible(other)?;
        Ok(self.with_bits(self.bits.intersection(&other.bits)))
    }

    pub fn difference(&self, other: &Subset) -> Result<Subset> {
        self.check_compatible(other)?;
        Ok(self.with_bits(self.bits.difference(&other.bits)))
    }

    pub fn is_subset(&self, other: &Subset) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    pub fn complement(&self) -> Subset {
        self.with_bits(self.bits.complement())
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(", "))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side, self)
    }
}

/// A partition of one universe into disjoint non-empty blocks, ordered by
/// each block's minimum element index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    side: Side,
    blocks: Vec<Subset>,
}

impl Partition {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    /// Blocks as label lists, for comparisons and rendering.
    pub fn label_blocks(&self) -> Vec<Vec<&str>> {
        self.blocks.iter().map(Subset::labels).collect()
    }

    /// Groups indices `0..keys.len()` by equal key.
    fn group_by_key(universes: &Arc<UniversePair>, side: Side, keys: &[BitSet]) -> Partition {
        let mut slot: HashMap<&BitSet, usize> = HashMap::new();
        let mut blocks: Vec<BitSet> = Vec::new();
        for (i, key) in keys.iter().enumerate() {
            let b = *slot.entry(key).or_insert_with(|| {
                blocks.push(BitSet::empty(keys.len()));
                blocks.len() - 1
            });
            blocks[b].insert(i);
        }
        Partition {
            side,
            blocks: blocks
                .into_iter()
                .map(|bits| Subset::from_bits(universes.clone(), side, bits))
                .collect(),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Boolean product of an `n×m` matrix `a` with an `m×k` matrix `b`, both
/// given as row bitsets; `k` is the width of the result.
fn bool_product(a: &[BitSet], b: &[BitSet], k: usize) -> Vec<BitSet> {
    a.iter()
        .map(|row| {
            let mut out = BitSet::empty(k);
            for j in row.iter() {
                out.union_with(&b[j]);
            }
            out
        })
        .collect()
}

/// The equivalence on indices `i ~ j ⟺ keys[i] = keys[j]` as a square matrix.
fn kernel_matrix(keys: &[BitSet]) -> Vec<BitSet> {
    keys.iter()
        .map(|ki| {
            BitSet::from_indices(
                keys.len(),
                keys.iter().enumerate().filter(|(_, kj)| *kj == ki).map(|(j, _)| j),
            )
        })
        .collect()
}

/// A binary relation `R ⊆ U × V`. Immutable after construction.
#[derive(Clone)]
pub struct BinaryRelation {
    universes: Arc<UniversePair>,
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
}

impl PartialEq for BinaryRelation {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && same_universes(&self.universes, &other.universes)
    }
}

impl Eq for BinaryRelation {}

fn transpose(rows: &[BitSet], width: usize) -> Vec<BitSet> {
    let mut cols = vec![BitSet::empty(rows.len()); width];
    for (i, row) in rows.iter().enumerate() {
        for j in row.iter() {
            cols[j].insert(i);
        }
    }
    cols
}

impl BinaryRelation {
    /// Builds a relation from boolean rows, one per element of `U`.
    pub fn new(universes: impl Into<Arc<UniversePair>>, rows: Vec<Vec<bool>>) -> Result<Self> {
        let universes = universes.into();
        let v = universes.size(Side::V);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != v && i < universes.size(Side::U) {
                return Err(Error::RowWidth {
                    row: universes.labels(Side::U)[i].clone(),
                    expected: v,
                    found: row.len(),
                });
            }
        }
        BinaryRelation::from_rows(universes, rows.iter().map(|r| BitSet::from_bools(r)).collect())
    }

    pub fn from_rows(universes: impl Into<Arc<UniversePair>>, rows: Vec<BitSet>) -> Result<Self> {
        let universes = universes.into();
        let (u, v) = (universes.size(Side::U), universes.size(Side::V));
        if rows.len() != u {
            return Err(Error::RowCount {
                expected: u,
                found: rows.len(),
            });
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != v) {
            return Err(Error::RowWidth {
                row: universes.labels(Side::U)[i].clone(),
                expected: v,
                found: row.len(),
            });
        }
        let cols = transpose(&rows, v);
        Ok(BinaryRelation { universes, rows, cols })
    }

    /// Decodes relation number `mask` in row-major bit order: bit `i*|V| + j`
    /// is `R(x_i, y_j)`. Requires `|U|·|V| <= 64`.
    pub fn from_mask(universes: Arc<UniversePair>, mask: u64) -> Self {
        let (u, v) = (universes.size(Side::U), universes.size(Side::V));
        assert!(u * v <= 64, "mask encoding limited to 64 cells");
        let rows = (0..u)
            .map(|i| {
                BitSet::from_mask(
                    v,
                    if v == 64 {
                        mask
                    } else {
                        (mask >> (i * v)) & ((1u64 << v) - 1)
                    },
                )
            })
            .collect();
        BinaryRelation::from_rows(universes, rows).expect("dimensions are consistent by construction")
    }

    /// Inverse of [`BinaryRelation::from_mask`].
    pub fn to_mask(&self) -> u64 {
        let v = self.v_len();
        assert!(self.u_len() * v <= 64, "mask encoding limited to 64 cells");
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, row)| acc | row.to_mask() << (i * v))
    }

    pub fn universes(&self) -> &Arc<UniversePair> {
        &self.universes
    }

    pub fn u_len(&self) -> usize {
        self.rows.len()
    }

    pub fn v_len(&self) -> usize {
        self.cols.len()
    }

    /// Row `i` of the incidence matrix, i.e. `r(x_i)`.
    pub fn row(&self, i: usize) -> &BitSet {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    /// Column `j` of the incidence matrix, i.e. `l(y_j)`.
    pub fn col(&self, j: usize) -> &BitSet {
        &self.cols[j]
    }

    pub fn cols(&self) -> &[BitSet] {
        &self.cols
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    pub fn related(&self, x: &str, y: &str) -> Result<bool> {
        let i = self.universes.index_of(Side::U, x)?;
        let j = self.universes.index_of(Side::V, y)?;
        Ok(self.get(i, j))
    }

    pub fn u_subset(&self, bits: BitSet) -> Subset {
        Subset::from_bits(self.universes.clone(), Side::U, bits)
    }

    pub fn v_subset(&self, bits: BitSet) -> Subset {
        Subset::from_bits(self.universes.clone(), Side::V, bits)
    }

    pub fn v_subset_of<S: AsRef<str>>(&self, labels: impl IntoIterator<Item = S>) -> Result<Subset> {
        Subset::from_labels(self.universes.clone(), Side::V, labels)
    }

    pub fn u_subset_of<S: AsRef<str>>(&self, labels: impl IntoIterator<Item = S>) -> Result<Subset> {
        Subset::from_labels(self.universes.clone(), Side::U, labels)
    }

    /// `r(x) = {y : (x, y) ∈ R}`.
    pub fn right_neighborhood(&self, x: &str) -> Result<Subset> {
        let i = self.universes.index_of(Side::U, x)?;
        Ok(self.v_subset(self.rows[i].clone()))
    }

    /// `l(y) = {x : (x, y) ∈ R}`.
    pub fn left_neighborhood(&self, y: &str) -> Result<Subset> {
        let j = self.universes.index_of(Side::V, y)?;
        Ok(self.u_subset(self.cols[j].clone()))
    }

    pub(crate) fn solitary_bits(&self) -> BitSet {
        BitSet::from_indices(
            self.u_len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.is_empty())
                .map(|(i, _)| i),
        )
    }

    /// The solitary set `S = {x : r(x) = ∅}`.
    pub fn solitary_set(&self) -> Subset {
        self.u_subset(self.solitary_bits())
    }

    /// Every element of `U` is related to something.
    pub fn is_serial(&self) -> bool {
        self.rows.iter().all(|r| !r.is_empty())
    }

    /// `⋃_x r(x)`: the V-elements related to at least one x.
    pub(crate) fn range_bits(&self) -> BitSet {
        self.rows.iter().fold(BitSet::empty(self.v_len()), |mut acc, r| {
            acc.union_with(r);
            acc
        })
    }

    /// `U/E_U` (equal right neighborhoods) and `V/E_V` (equal left
    /// neighborhoods), blocks ordered by minimum member.
    pub fn quotient_partitions(&self) -> (Partition, Partition) {
        (
            Partition::group_by_key(&self.universes, Side::U, &self.rows),
            Partition::group_by_key(&self.universes, Side::V, &self.cols),
        )
    }

    /// Checks `E_V ∘ R = R = R ∘ E_U` by explicit composition.
    ///
    /// Composition convention: `R ∘ E_U = {(x, y) : ∃x′, (x, x′) ∈ E_U ∧ (x′, y) ∈ R}`
    /// and `E_V ∘ R = {(x, y) : ∃y′, (x, y′) ∈ R ∧ (y′, y) ∈ E_V}`. As
    /// matrices these are the products `E_U · R` and `R · E_V`.
    pub fn saturation_identity_holds(&self) -> bool {
        let e_u = kernel_matrix(&self.rows);
        let e_v = kernel_matrix(&self.cols);
        let r_after_eu = bool_product(&e_u, &self.rows, self.v_len());
        let ev_after_r = bool_product(&self.rows, &e_v, self.v_len());
        r_after_eu == self.rows && ev_after_r == self.rows
    }
}

impl fmt::Debug for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| format!("{r:?}")).collect();
        write!(f, "R[{}]", rows.join("|"))
    }
}
