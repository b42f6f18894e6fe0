//! Classifications of `V`, their approximations, uncertainty measures, and
//! checkable forms of the classification theorems.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approx::{lower_set_form, upper_set_form};
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::relation::{BinaryRelation, Side, Subset, UniversePair};
use crate::Ratio;

/// One reason a family of blocks is not a classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooFewBlocks(usize),
    DuplicateName(String),
    WrongUniverse(String),
    EmptyBlock(String),
    Overlap {
        first: String,
        second: String,
        elements: Vec<String>,
    },
    CoverageGap(Vec<String>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewBlocks(n) => write!(f, "a classification needs more than one block, got {n}"),
            Violation::DuplicateName(name) => write!(f, "duplicate block name `{name}`"),
            Violation::WrongUniverse(name) => write!(f, "block `{name}` is not a subset of V"),
            Violation::EmptyBlock(name) => write!(f, "block `{name}` is empty"),
            Violation::Overlap {
                first,
                second,
                elements,
            } => {
                write!(f, "blocks `{first}` and `{second}` overlap on {}", elements.join(", "))
            }
            Violation::CoverageGap(elements) => write!(f, "elements not covered by any block: {}", elements.join(", ")),
        }
    }
}

/// A partition of `V` into more than one named, non-empty, disjoint block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    names: Vec<String>,
    blocks: Vec<Subset>,
}

impl Classification {
    /// Validates `blocks` against `universes`, collecting every violation.
    pub fn new(blocks: Vec<(String, Subset)>, universes: &Arc<UniversePair>) -> Result<Self> {
        let mut violations = Vec::new();
        if blocks.len() <= 1 {
            violations.push(Violation::TooFewBlocks(blocks.len()));
        }
        let mut seen = HashSet::new();
        for (name, set) in &blocks {
            if !seen.insert(name.as_str()) {
                violations.push(Violation::DuplicateName(name.clone()));
            }
            if set.side() != Side::V || **set.universes() != **universes {
                violations.push(Violation::WrongUniverse(name.clone()));
            }
        }
        if !violations.iter().any(|v| matches!(v, Violation::WrongUniverse(_))) {
            let v_labels = universes.labels(Side::V);
            let mut cover = BitSet::empty(universes.size(Side::V));
            for (i, (name, set)) in blocks.iter().enumerate() {
                if set.is_empty() {
                    violations.push(Violation::EmptyBlock(name.clone()));
                }
                for (other, other_set) in &blocks[i + 1..] {
                    let common = set.bits().intersection(other_set.bits());
                    if !common.is_empty() {
                        violations.push(Violation::Overlap {
                            first: name.clone(),
                            second: other.clone(),
                            elements: common.iter().map(|j| v_labels[j].clone()).collect(),
                        });
                    }
                }
                cover.union_with(set.bits());
            }
            if !cover.is_full() {
                violations.push(Violation::CoverageGap(
                    cover.complement().iter().map(|j| v_labels[j].clone()).collect(),
                ));
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidClassification(violations));
        }
        let (names, blocks) = blocks.into_iter().unzip();
        Ok(Classification { names, blocks })
    }

    /// Blocks named `Y1..Yn` in the given order.
    pub fn from_blocks(blocks: Vec<Subset>, universes: &Arc<UniversePair>) -> Result<Self> {
        let named = blocks
            .into_iter()
            .enumerate()
            .map(|(i, b)| (format!("Y{}", i + 1), b))
            .collect();
        Classification::new(named, universes)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    /// Union of the blocks selected by `indices` (0-based).
    pub fn union_of(&self, indices: &[usize]) -> BitSet {
        let width = self.blocks[0].bits().len();
        indices.iter().fold(BitSet::empty(width), |mut acc, &i| {
            acc.union_with(self.blocks[i].bits());
            acc
        })
    }

    /// Every classification of a `v`-element universe with more than one
    /// block, enumerated as restricted growth strings. Blocks appear in order
    /// of their minimum element.
    pub fn enumerate_all(universes: &Arc<UniversePair>) -> Vec<Classification> {
        let v = universes.size(Side::V);
        let mut out = Vec::new();
        let mut labels = vec![0usize; v];
        fn rec(
            pos: usize,
            max: usize,
            labels: &mut Vec<usize>,
            universes: &Arc<UniversePair>,
            out: &mut Vec<Classification>,
        ) {
            if pos == labels.len() {
                let n = max + 1;
                if n > 1 {
                    let blocks = (0..n)
                        .map(|b| {
                            let bits =
                                BitSet::from_indices(labels.len(), (0..labels.len()).filter(|&j| labels[j] == b));
                            Subset::from_bits(universes.clone(), Side::V, bits)
                        })
                        .collect();
                    out.push(
                        Classification::from_blocks(blocks, universes)
                            .expect("restricted growth strings are partitions"),
                    );
                }
                return;
            }
            for b in 0..=max + 1 {
                labels[pos] = b;
                rec(pos + 1, max.max(b), labels, universes, out);
            }
        }
        if v >= 2 {
            labels[0] = 0;
            rec(1, 0, &mut labels, universes, &mut out);
        }
        out
    }

    /// A random classification with between 2 and `|V|` blocks. Requires
    /// `|V| >= 2`.
    pub fn random<R: Rng>(universes: &Arc<UniversePair>, rng: &mut R) -> Classification {
        let v = universes.size(Side::V);
        assert!(v >= 2, "a classification needs at least two elements");
        loop {
            let n = rng.gen_range(2..=v);
            let assign: Vec<usize> = (0..v).map(|_| rng.gen_range(0..n)).collect();
            let blocks: Vec<BitSet> = (0..n)
                .map(|b| BitSet::from_indices(v, (0..v).filter(|&j| assign[j] == b)))
                .collect();
            if blocks.iter().all(|b| !b.is_empty()) {
                let subsets = blocks
                    .into_iter()
                    .map(|b| Subset::from_bits(universes.clone(), Side::V, b))
                    .collect();
                return Classification::from_blocks(subsets, universes).expect("non-empty blocks of an assignment");
            }
        }
    }
}

/// Element-wise lower and upper approximations of a classification.
#[derive(Debug, Clone)]
pub struct FamilyApprox {
    classification: Classification,
    lowers: Vec<Subset>,
    uppers: Vec<Subset>,
    u_size: usize,
    v_size: usize,
    serial: bool,
}

/// Quality of approximation in both normalizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quality<T> {
    /// `Σ |lower(Y_i)| / |V|`.
    pub verbatim: T,
    /// `Σ |lower(Y_i)| / |U|`.
    pub u_normalized: T,
}

pub fn approximate_family(r: &BinaryRelation, f: &Classification) -> Result<FamilyApprox> {
    if f.blocks.iter().any(|b| **b.universes() != **r.universes()) {
        return Err(Error::UniverseMismatch);
    }
    let lowers = f
        .blocks
        .iter()
        .map(|b| r.u_subset(lower_set_form(r, b.bits())))
        .collect();
    let uppers = f
        .blocks
        .iter()
        .map(|b| r.u_subset(upper_set_form(r, b.bits())))
        .collect();
    Ok(FamilyApprox {
        classification: f.clone(),
        lowers,
        uppers,
        u_size: r.u_len(),
        v_size: r.v_len(),
        serial: r.is_serial(),
    })
}

impl FamilyApprox {
    pub fn classification(&self) -> &Classification {
        &self.classification
    }

    pub fn lowers(&self) -> &[Subset] {
        &self.lowers
    }

    pub fn uppers(&self) -> &[Subset] {
        &self.uppers
    }

    /// Whether the generating relation was serial.
    pub fn serial(&self) -> bool {
        self.serial
    }

    pub fn lower_total(&self) -> usize {
        self.lowers.iter().map(Subset::len).sum()
    }

    pub fn upper_total(&self) -> usize {
        self.uppers.iter().map(Subset::len).sum()
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }

    pub fn v_size(&self) -> usize {
        self.v_size
    }

    /// `Σ |lower| / Σ |upper|` in any measure scalar.
    pub fn accuracy_as<T: Measure>(&self) -> Result<T> {
        match self.upper_total() {
            0 => Err(Error::UndefinedMeasure("accuracy")),
            den => Ok(T::from_counts(self.lower_total(), den)),
        }
    }

    pub fn quality_as<T: Measure>(&self) -> Quality<T> {
        Quality {
            verbatim: T::from_counts(self.lower_total(), self.v_size),
            u_normalized: T::from_counts(self.lower_total(), self.u_size),
        }
    }

    pub fn accuracy(&self) -> Result<Ratio> {
        self.accuracy_as()
    }

    pub fn quality(&self) -> Quality<Ratio> {
        self.quality_as()
    }

    /// Every block's lower and upper approximations coincide.
    pub fn is_r_definable(&self) -> bool {
        self.lowers.iter().zip(&self.uppers).all(|(l, u)| l == u)
    }
}

pub fn accuracy(fa: &FamilyApprox) -> Result<Ratio> {
    fa.accuracy()
}

pub fn quality(fa: &FamilyApprox) -> Quality<Ratio> {
    fa.quality()
}

pub fn is_r_definable(fa: &FamilyApprox) -> bool {
    fa.is_r_definable()
}

/// The statements checked on a relation and a classification.
///
/// Block-level claims take an index set `I` (or a single block `i`) and
/// relate approximations of `⋃_{i∈I} Y_i` to those of the remaining blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Claim {
    /// `upper(⋃_I) = U ⟺ lower(⋃_{∉I}) = ∅`
    UpperCoverIffRestLowerEmpty,
    /// `lower(⋃_I) ≠ ∅ ⟺ ⋃_{j∉I} upper(Y_j) ≠ U`
    LowerNonemptyIffRestUpperNotCover,
    /// `upper(⋃_I) = U ⟹ lower(Y_j) = ∅` for every `j ∉ I`
    UnionUpperCoverImpliesRestLowersEmpty,
    /// `upper(Y_i) = U ⟺ lower(⋃_{j≠i}) = ∅`
    BlockUpperCoverIffRestLowerEmpty,
    /// `lower(Y_i) = ∅ ⟺ upper(⋃_{j≠i}) = U`
    BlockLowerEmptyIffRestUpperCover,
    /// `upper(Y_i) = U ⟹ lower(Y_j) = ∅` for every `j ≠ i`
    SomeUpperCoverImpliesOtherLowersEmpty,
    /// `∀i upper(Y_i) = U ⟹ ∀i lower(Y_i) = ∅`
    AllUppersCoverImpliesAllLowersEmpty,
    /// `lower(⋃_I) ≠ ∅ ⟹ upper(Y_j) ≠ U` for every `j ∉ I`
    UnionLowerNonemptyImpliesRestUppersNotCover,
    /// `lower(Y_i) ≠ ∅ ⟺ ⋃_{j≠i} upper(Y_j) ≠ U`
    BlockLowerNonemptyIffRestUppersNotCover,
    /// `upper(Y_i) ≠ U ⟺ lower(⋃_{j≠i}) ≠ ∅`
    BlockUpperNotCoverIffRestLowerNonempty,
    /// `lower(Y_i) ≠ ∅ ⟹ upper(Y_j) ≠ U` for every `j ≠ i`
    SomeLowerNonemptyImpliesOtherUppersNotCover,
    /// `∀i lower(Y_i) ≠ ∅ ⟹ ∀j upper(Y_j) ≠ U`
    AllLowersNonemptyImpliesAllUppersNotCover,
    /// definable ⟹ α = 1
    DefinableAccuracyOne,
    /// definable ⟹ ν_U = 1
    DefinableQualityUOne,
    /// definable ⟹ ν = 1, evaluated only when `|U| = |V|`
    DefinableQualityOneSquare,
    /// serial ∧ α = 1 ⟹ definable
    SerialAccuracyOneImpliesDefinable,
    /// serial ⟹ 0 ≤ α ≤ ν_U ≤ 1
    SerialMeasureChain,
    /// serial ⟹ 0 ≤ α ≤ ν ≤ 1, evaluated only when `|U| = |V|`
    SerialMeasureChainSquare,
}

impl Claim {
    pub const THEOREMS: [Claim; 2] = [
        Claim::UpperCoverIffRestLowerEmpty,
        Claim::LowerNonemptyIffRestUpperNotCover,
    ];

    pub const COROLLARIES: [Claim; 10] = [
        Claim::UnionUpperCoverImpliesRestLowersEmpty,
        Claim::BlockUpperCoverIffRestLowerEmpty,
        Claim::BlockLowerEmptyIffRestUpperCover,
        Claim::SomeUpperCoverImpliesOtherLowersEmpty,
        Claim::AllUppersCoverImpliesAllLowersEmpty,
        Claim::UnionLowerNonemptyImpliesRestUppersNotCover,
        Claim::BlockLowerNonemptyIffRestUppersNotCover,
        Claim::BlockUpperNotCoverIffRestLowerNonempty,
        Claim::SomeLowerNonemptyImpliesOtherUppersNotCover,
        Claim::AllLowersNonemptyImpliesAllUppersNotCover,
    ];

    pub const MEASURES: [Claim; 6] = [
        Claim::DefinableAccuracyOne,
        Claim::DefinableQualityUOne,
        Claim::DefinableQualityOneSquare,
        Claim::SerialAccuracyOneImpliesDefinable,
        Claim::SerialMeasureChain,
        Claim::SerialMeasureChainSquare,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::UpperCoverIffRestLowerEmpty => "upper-cover-iff-rest-lower-empty",
            Claim::LowerNonemptyIffRestUpperNotCover => "lower-nonempty-iff-rest-upper-not-cover",
            Claim::UnionUpperCoverImpliesRestLowersEmpty => "union-upper-cover-implies-rest-lowers-empty",
            Claim::BlockUpperCoverIffRestLowerEmpty => "block-upper-cover-iff-rest-lower-empty",
            Claim::BlockLowerEmptyIffRestUpperCover => "block-lower-empty-iff-rest-upper-cover",
            Claim::SomeUpperCoverImpliesOtherLowersEmpty => "some-upper-cover-implies-other-lowers-empty",
            Claim::AllUppersCoverImpliesAllLowersEmpty => "all-uppers-cover-implies-all-lowers-empty",
            Claim::UnionLowerNonemptyImpliesRestUppersNotCover => "union-lower-nonempty-implies-rest-uppers-not-cover",
            Claim::BlockLowerNonemptyIffRestUppersNotCover => "block-lower-nonempty-iff-rest-uppers-not-cover",
            Claim::BlockUpperNotCoverIffRestLowerNonempty => "block-upper-not-cover-iff-rest-lower-nonempty",
            Claim::SomeLowerNonemptyImpliesOtherUppersNotCover => "some-lower-nonempty-implies-other-uppers-not-cover",
            Claim::AllLowersNonemptyImpliesAllUppersNotCover => "all-lowers-nonempty-implies-all-uppers-not-cover",
            Claim::DefinableAccuracyOne => "definable-accuracy-one",
            Claim::DefinableQualityUOne => "definable-u-quality-one",
            Claim::DefinableQualityOneSquare => "definable-quality-one-when-square",
            Claim::SerialAccuracyOneImpliesDefinable => "serial-accuracy-one-implies-definable",
            Claim::SerialMeasureChain => "serial-measure-chain",
            Claim::SerialMeasureChainSquare => "serial-measure-chain-when-square",
        }
    }

    pub fn is_equivalence(self) -> bool {
        matches!(
            self,
            Claim::UpperCoverIffRestLowerEmpty
                | Claim::LowerNonemptyIffRestUpperNotCover
                | Claim::BlockUpperCoverIffRestLowerEmpty
                | Claim::BlockLowerEmptyIffRestUpperCover
                | Claim::BlockLowerNonemptyIffRestUppersNotCover
                | Claim::BlockUpperNotCoverIffRestLowerNonempty
        )
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    /// The hypothesis of an implication was false.
    Vacuous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Vacuous => "vacuous",
        })
    }
}

/// One evaluated instance of a [`Claim`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremInstance {
    pub claim: Claim,
    /// 0-based block indices the instance was evaluated at.
    pub indices: Vec<usize>,
    pub hypothesis: bool,
    pub conclusion: bool,
    pub verdict: Verdict,
}

impl TheoremInstance {
    fn new(claim: Claim, indices: Vec<usize>, hypothesis: bool, conclusion: bool) -> Self {
        let verdict = if claim.is_equivalence() {
            if hypothesis == conclusion {
                Verdict::Holds
            } else {
                Verdict::Violated
            }
        } else if !hypothesis {
            Verdict::Vacuous
        } else if conclusion {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        TheoremInstance {
            claim,
            indices,
            hypothesis,
            conclusion,
            verdict,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TheoremReport {
    pub entries: Vec<TheoremInstance>,
}

impl TheoremReport {
    pub fn violations(&self) -> impl Iterator<Item = &TheoremInstance> {
        self.entries.iter().filter(|e| e.verdict == Verdict::Violated)
    }

    pub fn is_clean(&self) -> bool {
        self.violations().next().is_none()
    }

    /// `(holds, violated, vacuous)` counts for `claim`.
    pub fn tally(&self, claim: Claim) -> (usize, usize, usize) {
        self.entries
            .iter()
            .filter(|e| e.claim == claim)
            .fold((0, 0, 0), |(h, v, x), e| match e.verdict {
                Verdict::Holds => (h + 1, v, x),
                Verdict::Violated => (h, v + 1, x),
                Verdict::Vacuous => (h, v, x + 1),
            })
    }

    pub fn extend(&mut self, other: TheoremReport) {
        self.entries.extend(other.entries);
    }

    /// Canonical order: by claim, then lexicographically by index set.
    pub fn sort(&mut self) {
        self.entries
            .sort_by(|a, b| (a.claim, &a.indices).cmp(&(b.claim, &b.indices)));
    }
}

/// Index sets enumerated exhaustively up to this many blocks.
pub const EXHAUSTIVE_INDEX_LIMIT: usize = 12;
const SAMPLED_INDEX_SETS: usize = 256;
const INDEX_SAMPLE_SEED: u64 = 0x5eed_1d8e;

/// The non-empty proper subsets of `0..n` to evaluate, in lexicographic
/// order. All of them when `n <= 12`; otherwise singletons, complements of
/// singletons and a fixed-seed sample.
pub fn index_sets(n: usize) -> Vec<Vec<usize>> {
    let to_vec = |mask: u128| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>();
    let mut sets: Vec<Vec<usize>> = if n <= EXHAUSTIVE_INDEX_LIMIT {
        (1..(1u128 << n) - 1).map(to_vec).collect()
    } else {
        let mut sets = HashSet::new();
        for i in 0..n {
            sets.insert(vec![i]);
            sets.insert((0..n).filter(|&j| j != i).collect());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(INDEX_SAMPLE_SEED);
        while sets.len() < 2 * n + SAMPLED_INDEX_SETS {
            let picked: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            if !picked.is_empty() && picked.len() < n {
                sets.insert(picked);
            }
        }
        sets.into_iter().collect()
    };
    sets.sort();
    sets
}

fn check_index_set(f: &Classification, indices: &[usize]) -> Result<()> {
    let n = f.len();
    if indices.is_empty() || indices.iter().any(|&i| i >= n) {
        return Err(Error::InvalidIndexSet(format!(
            "{indices:?} is empty or out of range for {n} blocks"
        )));
    }
    let distinct: HashSet<_> = indices.iter().collect();
    if distinct.len() != indices.len() {
        return Err(Error::InvalidIndexSet(format!("{indices:?} repeats an index")));
    }
    if distinct.len() == n {
        return Err(Error::InvalidIndexSet(format!("{indices:?} is not a proper subset")));
    }
    Ok(())
}

fn complement_indices(n: usize, indices: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !indices.contains(i)).collect()
}

/// Evaluates `upper(⋃_{i∈I} Y_i) = U ⟺ lower(⋃_{j∉I} Y_j) = ∅`.
pub fn upper_cover_check(r: &BinaryRelation, f: &Classification, indices: &[usize]) -> Result<TheoremInstance> {
    check_index_set(f, indices)?;
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    let rest = complement_indices(f.len(), &sorted);
    let hyp = upper_set_form(r, &f.union_of(&sorted)).is_full();
    let concl = lower_set_form(r, &f.union_of(&rest)).is_empty();
    Ok(TheoremInstance::new(
        Claim::UpperCoverIffRestLowerEmpty,
        sorted,
        hyp,
        concl,
    ))
}

/// Evaluates `lower(⋃_{i∈I} Y_i) ≠ ∅ ⟺ ⋃_{j∉I} upper(Y_j) ≠ U`.
pub fn lower_nonempty_check(r: &BinaryRelation, f: &Classification, indices: &[usize]) -> Result<TheoremInstance> {
    check_index_set(f, indices)?;
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    let rest = complement_indices(f.len(), &sorted);
    let hyp = !lower_set_form(r, &f.union_of(&sorted)).is_empty();
    let union_of_uppers = rest.iter().fold(BitSet::empty(r.u_len()), |mut acc, &j| {
        acc.union_with(&upper_set_form(r, f.blocks()[j].bits()));
        acc
    });
    let concl = !union_of_uppers.is_full();
    Ok(TheoremInstance::new(
        Claim::LowerNonemptyIffRestUpperNotCover,
        sorted,
        hyp,
        concl,
    ))
}

/// Both block-union theorems over every index set from [`index_sets`].
pub fn theorems_report(r: &BinaryRelation, f: &Classification) -> Result<TheoremReport> {
    let mut report = TheoremReport::default();
    for set in index_sets(f.len()) {
        report.entries.push(upper_cover_check(r, f, &set)?);
        report.entries.push(lower_nonempty_check(r, f, &set)?);
    }
    report.sort();
    Ok(report)
}

/// Every corollary instance over all applicable block and index choices.
pub fn corollaries_report(r: &BinaryRelation, f: &Classification) -> Result<TheoremReport> {
    let fa = approximate_family(r, f)?;
    let n = f.len();
    let lower_empty: Vec<bool> = fa.lowers.iter().map(Subset::is_empty).collect();
    let upper_full: Vec<bool> = fa.uppers.iter().map(Subset::is_full).collect();
    let lower_of = |idx: &[usize]| lower_set_form(r, &f.union_of(idx));
    let upper_of = |idx: &[usize]| upper_set_form(r, &f.union_of(idx));
    let all: Vec<usize> = (0..n).collect();

    let mut entries = Vec::new();
    for set in index_sets(n) {
        let rest = complement_indices(n, &set);
        entries.push(TheoremInstance::new(
            Claim::UnionUpperCoverImpliesRestLowersEmpty,
            set.clone(),
            upper_of(&set).is_full(),
            rest.iter().all(|&j| lower_empty[j]),
        ));
        entries.push(TheoremInstance::new(
            Claim::UnionLowerNonemptyImpliesRestUppersNotCover,
            set.clone(),
            !lower_of(&set).is_empty(),
            rest.iter().all(|&j| !upper_full[j]),
        ));
    }
    for i in 0..n {
        let rest = complement_indices(n, &[i]);
        let rest_uppers = rest.iter().fold(BitSet::empty(r.u_len()), |mut acc, &j| {
            acc.union_with(fa.uppers[j].bits());
            acc
        });
        entries.push(TheoremInstance::new(
            Claim::BlockUpperCoverIffRestLowerEmpty,
            vec![i],
            upper_full[i],
            lower_of(&rest).is_empty(),
        ));
        entries.push(TheoremInstance::new(
            Claim::BlockLowerEmptyIffRestUpperCover,
            vec![i],
            lower_empty[i],
            upper_of(&rest).is_full(),
        ));
        entries.push(TheoremInstance::new(
            Claim::SomeUpperCoverImpliesOtherLowersEmpty,
            vec![i],
            upper_full[i],
            rest.iter().all(|&j| lower_empty[j]),
        ));
        entries.push(TheoremInstance::new(
            Claim::BlockLowerNonemptyIffRestUppersNotCover,
            vec![i],
            !lower_empty[i],
            !rest_uppers.is_full(),
        ));
        entries.push(TheoremInstance::new(
            Claim::BlockUpperNotCoverIffRestLowerNonempty,
            vec![i],
            !upper_full[i],
            !lower_of(&rest).is_empty(),
        ));
        entries.push(TheoremInstance::new(
            Claim::SomeLowerNonemptyImpliesOtherUppersNotCover,
            vec![i],
            !lower_empty[i],
            rest.iter().all(|&j| !upper_full[j]),
        ));
    }
    entries.push(TheoremInstance::new(
        Claim::AllUppersCoverImpliesAllLowersEmpty,
        all.clone(),
        upper_full.iter().all(|&b| b),
        lower_empty.iter().all(|&b| b),
    ));
    entries.push(TheoremInstance::new(
        Claim::AllLowersNonemptyImpliesAllUppersNotCover,
        all,
        lower_empty.iter().all(|&b| !b),
        upper_full.iter().all(|&b| !b),
    ));
    let mut report = TheoremReport { entries };
    report.sort();
    Ok(report)
}

/// Checkable forms of the measure theorems on one family.
///
/// Claims about the `|V|`-normalized quality are only evaluated when
/// `|U| = |V|`; the `|U|`-normalized forms are evaluated unconditionally.
pub fn measure_report(fa: &FamilyApprox) -> TheoremReport {
    let all: Vec<usize> = (0..fa.classification.len()).collect();
    let definable = fa.is_r_definable();
    let alpha = fa.accuracy().ok();
    let q = fa.quality();
    let one = Ratio::from_integer(1);
    let zero = Ratio::from_integer(0);
    let square = fa.u_size == fa.v_size;
    let mut entries = vec![
        TheoremInstance::new(Claim::DefinableAccuracyOne, all.clone(), definable, alpha == Some(one)),
        TheoremInstance::new(
            Claim::DefinableQualityUOne,
            all.clone(),
            definable,
            q.u_normalized == one,
        ),
        TheoremInstance::new(
            Claim::SerialAccuracyOneImpliesDefinable,
            all.clone(),
            fa.serial && alpha == Some(one),
            definable,
        ),
        TheoremInstance::new(
            Claim::SerialMeasureChain,
            all.clone(),
            fa.serial,
            alpha.is_some_and(|a| zero <= a && a <= q.u_normalized && q.u_normalized <= one),
        ),
    ];
    if square {
        entries.push(TheoremInstance::new(
            Claim::DefinableQualityOneSquare,
            all.clone(),
            definable,
            q.verbatim == one,
        ));
        entries.push(TheoremInstance::new(
            Claim::SerialMeasureChainSquare,
            all,
            fa.serial,
            alpha.is_some_and(|a| zero <= a && a <= q.verbatim && q.verbatim <= one),
        ));
    }
    let mut report = TheoremReport { entries };
    report.sort();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::reference_relation;

    fn classify(r: &BinaryRelation, blocks: &[&[&str]]) -> Classification {
        let named = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (format!("Y{}", i + 1), r.v_subset_of(b.iter().copied()).unwrap()))
            .collect();
        Classification::new(named, r.universes()).unwrap()
    }

    fn labels(sets: &[Subset]) -> Vec<Vec<&str>> {
        sets.iter().map(Subset::labels).collect()
    }

    fn rel(u: usize, v: usize, rows: &[&[usize]]) -> BinaryRelation {
        let rows = rows
            .iter()
            .map(|r| BitSet::from_indices(v, r.iter().copied()))
            .collect();
        BinaryRelation::from_rows(UniversePair::indexed(u, v).unwrap(), rows).unwrap()
    }

    #[test]
    fn validation() {
        let r = reference_relation();
        let f = classify(&r, &[&["y1", "y2", "y6"], &["y3", "y4", "y5"]]);
        assert_eq!(f.names(), ["Y1", "Y2"]);

        let bad = Classification::new(
            vec![
                ("Y1".into(), r.v_subset_of(["y1"]).unwrap()),
                (
                    "Y2".into(),
                    r.v_subset_of(["y1", "y2", "y3", "y4", "y5", "y6"]).unwrap(),
                ),
            ],
            r.universes(),
        );
        let Err(Error::InvalidClassification(v)) = bad else {
            panic!()
        };
        assert_eq!(
            v,
            vec![Violation::Overlap {
                first: "Y1".into(),
                second: "Y2".into(),
                elements: vec!["y1".into()]
            }]
        );

        let single = Classification::new(
            vec![("Y1".into(), Subset::full(r.universes().clone(), Side::V))],
            r.universes(),
        );
        let Err(Error::InvalidClassification(v)) = single else {
            panic!()
        };
        assert_eq!(v, vec![Violation::TooFewBlocks(1)]);

        let gaps = Classification::new(
            vec![
                ("A".into(), r.v_subset_of(["y1"]).unwrap()),
                ("A".into(), r.v_subset_of(Vec::<&str>::new()).unwrap()),
            ],
            r.universes(),
        );
        let Err(Error::InvalidClassification(v)) = gaps else {
            panic!()
        };
        assert!(v.contains(&Violation::DuplicateName("A".into())));
        assert!(v.contains(&Violation::EmptyBlock("A".into())));
        assert!(v.iter().any(|x| matches!(x, Violation::CoverageGap(e) if e.len() == 5)));

        let empty = Classification::new(vec![], r.universes());
        assert!(matches!(empty, Err(Error::InvalidClassification(_))));

        let x_block = Classification::new(
            vec![
                ("A".into(), r.u_subset_of(["x1"]).unwrap()),
                ("B".into(), r.v_subset_of(["y1"]).unwrap()),
            ],
            r.universes(),
        );
        let Err(Error::InvalidClassification(v)) = x_block else {
            panic!()
        };
        assert_eq!(v, vec![Violation::WrongUniverse("A".into())]);
    }

    #[test]
    fn family_examples() {
        let r = reference_relation();
        let fa = approximate_family(&r, &classify(&r, &[&["y1", "y2", "y4"], &["y3", "y5", "y6"]])).unwrap();
        assert_eq!(labels(fa.lowers()), vec![vec!["x3"], vec!["x2"]]);
        assert_eq!(
            labels(fa.uppers()),
            vec![vec!["x1", "x3", "x4", "x5"], vec!["x1", "x2", "x4", "x5"]]
        );

        let fa = approximate_family(&r, &classify(&r, &[&["y1", "y2", "y6"], &["y3", "y4", "y5"]])).unwrap();
        assert!(fa.lowers().iter().all(Subset::is_empty));
        assert!(fa.uppers().iter().all(Subset::is_full));

        let fa = approximate_family(&r, &classify(&r, &[&["y1", "y2", "y4"], &["y3", "y6"], &["y5"]])).unwrap();
        assert_eq!(fa.lowers()[1].labels(), ["x2"]);
        assert_eq!(fa.uppers()[1].labels(), ["x2", "x4"]);
        assert_eq!(fa.uppers()[2].labels(), ["x1", "x4", "x5"]);
    }

    #[test]
    fn measures() {
        let r = reference_relation();
        let fa = approximate_family(&r, &classify(&r, &[&["y1", "y2", "y4"], &["y3", "y5", "y6"]])).unwrap();
        assert_eq!(accuracy(&fa).unwrap(), Ratio::new(1, 4));
        assert_eq!(quality(&fa).verbatim, Ratio::new(1, 3));
        assert_eq!(quality(&fa).u_normalized, Ratio::new(2, 5));
        assert_eq!(fa.accuracy_as::<f64>().unwrap(), 0.25);
        assert!(!is_r_definable(&fa));

        let fa = approximate_family(&r, &classify(&r, &[&["y1", "y2", "y6"], &["y3", "y4", "y5"]])).unwrap();
        assert_eq!(accuracy(&fa).unwrap(), Ratio::from_integer(0));
        assert_eq!(quality(&fa).verbatim, Ratio::from_integer(0));
        assert_eq!(quality(&fa).u_normalized, Ratio::from_integer(0));
    }

    #[test]
    fn quality_can_exceed_one() {
        let r = rel(3, 2, &[&[0], &[0], &[0]]);
        let f = classify(&r, &[&["y1"], &["y2"]]);
        let fa = approximate_family(&r, &f).unwrap();
        assert_eq!(fa.lowers()[0].len(), 3);
        assert!(fa.lowers()[1].is_empty());
        assert_eq!(fa.quality().verbatim, Ratio::new(3, 2));
        assert_eq!(fa.quality().u_normalized, Ratio::from_integer(1));
    }

    #[test]
    fn definable_family() {
        let r = rel(2, 3, &[&[0], &[1, 2]]);
        let fa = approximate_family(&r, &classify(&r, &[&["y1"], &["y2", "y3"]])).unwrap();
        assert!(fa.is_r_definable());
        assert_eq!(fa.accuracy().unwrap(), Ratio::from_integer(1));
        assert_eq!(fa.quality().verbatim, Ratio::new(2, 3));
        assert_eq!(fa.quality().u_normalized, Ratio::from_integer(1));
        assert!(measure_report(&fa).is_clean());
    }

    #[test]
    fn solitary_blocks_definability() {
        let r = rel(2, 2, &[&[], &[0, 1]]);
        let fa = approximate_family(&r, &classify(&r, &[&["y1"], &["y2"]])).unwrap();
        assert!(!fa.is_r_definable());
        // accuracy and quality both reach one without definability
        assert_eq!(fa.accuracy().unwrap(), Ratio::from_integer(1));
        assert_eq!(fa.quality().verbatim, Ratio::from_integer(1));
        let report = measure_report(&fa);
        assert!(report.is_clean());
        assert_eq!(report.tally(Claim::SerialAccuracyOneImpliesDefinable), (0, 0, 1));
    }

    #[test]
    fn accuracy_undefined_for_empty_relation() {
        let r = rel(2, 2, &[&[], &[]]);
        let fa = approximate_family(&r, &classify(&r, &[&["y1"], &["y2"]])).unwrap();
        assert_eq!(fa.accuracy(), Err(Error::UndefinedMeasure("accuracy")));
    }

    #[test]
    fn theorem_examples() {
        let r = reference_relation();
        let f1 = classify(&r, &[&["y1", "y2", "y6"], &["y3", "y4", "y5"]]);
        let t = upper_cover_check(&r, &f1, &[0]).unwrap();
        assert!(t.hypothesis && t.conclusion);
        assert_eq!(t.verdict, Verdict::Holds);
        let t = lower_nonempty_check(&r, &f1, &[0]).unwrap();
        assert!(!t.hypothesis && !t.conclusion);
        assert_eq!(t.verdict, Verdict::Holds);

        let f2 = classify(&r, &[&["y1", "y2", "y4"], &["y3", "y5", "y6"]]);
        let t = upper_cover_check(&r, &f2, &[0]).unwrap();
        assert!(!t.hypothesis && !t.conclusion);
        assert_eq!(t.verdict, Verdict::Holds);
        let t = lower_nonempty_check(&r, &f2, &[0]).unwrap();
        assert!(t.hypothesis && t.conclusion);

        assert!(matches!(
            upper_cover_check(&r, &f2, &[]),
            Err(Error::InvalidIndexSet(_))
        ));
        assert!(matches!(
            upper_cover_check(&r, &f2, &[0, 1]),
            Err(Error::InvalidIndexSet(_))
        ));
        assert!(matches!(
            lower_nonempty_check(&r, &f2, &[2]),
            Err(Error::InvalidIndexSet(_))
        ));
        assert!(matches!(
            lower_nonempty_check(&r, &f2, &[0, 0]),
            Err(Error::InvalidIndexSet(_))
        ));
    }

    fn find(report: &TheoremReport, claim: Claim, indices: &[usize]) -> TheoremInstance {
        report
            .entries
            .iter()
            .find(|e| e.claim == claim && e.indices == indices)
            .cloned()
            .unwrap()
    }

    #[test]
    fn corollary_examples() {
        let r = reference_relation();
        let f = classify(&r, &[&["y2", "y3", "y5"], &["y1", "y4"], &["y6"]]);
        let rep = corollaries_report(&r, &f).unwrap();
        assert!(rep.is_clean());
        let e = find(&rep, Claim::SomeUpperCoverImpliesOtherLowersEmpty, &[0]);
        assert!(e.hypothesis);
        assert_eq!(e.verdict, Verdict::Holds);

        let f = classify(&r, &[&["y1", "y2", "y4"], &["y3", "y5", "y6"]]);
        let rep = corollaries_report(&r, &f).unwrap();
        let e = find(&rep, Claim::AllLowersNonemptyImpliesAllUppersNotCover, &[0, 1]);
        assert_eq!(e.verdict, Verdict::Holds);

        let f = classify(&r, &[&["y1", "y2", "y4"], &["y3", "y6"], &["y5"]]);
        let rep = corollaries_report(&r, &f).unwrap();
        assert_eq!(
            find(&rep, Claim::SomeLowerNonemptyImpliesOtherUppersNotCover, &[1]).verdict,
            Verdict::Holds
        );
        assert_eq!(
            find(&rep, Claim::SomeLowerNonemptyImpliesOtherUppersNotCover, &[0]).verdict,
            Verdict::Holds
        );
        // the singleton block {y5} has empty lower approximation
        assert_eq!(
            find(&rep, Claim::SomeLowerNonemptyImpliesOtherUppersNotCover, &[2]).verdict,
            Verdict::Vacuous
        );
        // canonical order
        let keys: Vec<_> = rep.entries.iter().map(|e| (e.claim, e.indices.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn index_set_enumeration() {
        assert_eq!(index_sets(2), vec![vec![0], vec![1]]);
        assert_eq!(
            index_sets(3),
            vec![vec![0], vec![0, 1], vec![0, 2], vec![1], vec![1, 2], vec![2]]
        );
        assert_eq!(index_sets(12).len(), (1 << 12) - 2);
        let big = index_sets(14);
        assert_eq!(big.len(), 2 * 14 + SAMPLED_INDEX_SETS);
        assert!(big.iter().all(|s| !s.is_empty() && s.len() < 14));
        assert_eq!(big, index_sets(14));
    }

    #[test]
    fn enumerated_classifications() {
        let u = Arc::new(UniversePair::indexed(1, 3).unwrap());
        let all = Classification::enumerate_all(&u);
        assert_eq!(all.len(), 4);
        let u4 = Arc::new(UniversePair::indexed(1, 4).unwrap());
        // Bell(4) - 1
        assert_eq!(Classification::enumerate_all(&u4).len(), 14);
        let u1 = Arc::new(UniversePair::indexed(1, 1).unwrap());
        assert!(Classification::enumerate_all(&u1).is_empty());
    }

    #[test]
    fn random_classification_is_valid() {
        let u = Arc::new(UniversePair::indexed(2, 5).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let f = Classification::random(&u, &mut rng);
            assert!(f.len() >= 2);
        }
    }
}
