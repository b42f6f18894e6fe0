//! Lower and upper approximations of V-subsets, and the four rough types.
//!
//! Each approximation has independent evaluation routes that must agree bit
//! for bit:
//!
//! * set form: `lower(Y) = {x : r(x) ⊆ Y}`, `upper(Y) = {x : r(x) ∩ Y ≠ ∅}`,
//!   evaluated row by row;
//! * matrix form: `(lower Y)(x) = ⋀_y ((1 − R(x,y)) ∨ Y(y))` and
//!   `(upper Y)(x) = ⋁_y (R(x,y) ∧ Y(y))` over `{0,1}` with min/max, evaluated
//!   column by column as word-wide boolean operations on U-bitsets;
//! * for the upper approximation only, the union of left neighborhoods
//!   `⋃_{y ∈ Y} l(y)`.

use std::fmt;

use serde::Serialize;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::relation::{BinaryRelation, Side, Subset};

/// Evaluation route for an approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    SetForm,
    MatrixForm,
    /// Union of left neighborhoods. Only defined for the upper approximation;
    /// the lower approximation falls back to the set form.
    LeftUnion,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::SetForm, Strategy::MatrixForm, Strategy::LeftUnion];
}

pub fn lower_set_form(r: &BinaryRelation, y: &BitSet) -> BitSet {
    BitSet::from_indices(
        r.u_len(),
        r.rows()
            .iter()
            .enumerate()
            .filter(|(_, row)| row.is_subset(y))
            .map(|(i, _)| i),
    )
}

pub fn lower_matrix_form(r: &BinaryRelation, y: &BitSet) -> BitSet {
    let all = BitSet::full(r.u_len());
    r.cols().iter().enumerate().fold(all.clone(), |mut acc, (j, col)| {
        // (1 − R(·,y)) ∨ Y(y)
        let term = if y.contains(j) { all.clone() } else { col.complement() };
        acc.intersect_with(&term);
        acc
    })
}

pub fn upper_set_form(r: &BinaryRelation, y: &BitSet) -> BitSet {
    BitSet::from_indices(
        r.u_len(),
        r.rows()
            .iter()
            .enumerate()
            .filter(|(_, row)| row.intersects(y))
            .map(|(i, _)| i),
    )
}

pub fn upper_matrix_form(r: &BinaryRelation, y: &BitSet) -> BitSet {
    let none = BitSet::empty(r.u_len());
    r.cols().iter().enumerate().fold(none.clone(), |mut acc, (j, col)| {
        // R(·,y) ∧ Y(y)
        let term = if y.contains(j) { col.clone() } else { none.clone() };
        acc.union_with(&term);
        acc
    })
}

pub fn upper_left_union(r: &BinaryRelation, y: &BitSet) -> BitSet {
    y.iter().fold(BitSet::empty(r.u_len()), |mut acc, j| {
        acc.union_with(r.col(j));
        acc
    })
}

pub fn lower_bits(r: &BinaryRelation, y: &BitSet, strategy: Strategy) -> BitSet {
    match strategy {
        Strategy::SetForm | Strategy::LeftUnion => lower_set_form(r, y),
        Strategy::MatrixForm => lower_matrix_form(r, y),
    }
}

pub fn upper_bits(r: &BinaryRelation, y: &BitSet, strategy: Strategy) -> BitSet {
    match strategy {
        Strategy::SetForm => upper_set_form(r, y),
        Strategy::MatrixForm => upper_matrix_form(r, y),
        Strategy::LeftUnion => upper_left_union(r, y),
    }
}

/// The four-way taxonomy by emptiness of the lower approximation and whether
/// the upper approximation is all of `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RoughType {
    /// lower ≠ ∅, upper ≠ U
    RoughlyDefinable,
    /// lower = ∅, upper ≠ U
    InternallyUndefinable,
    /// lower ≠ ∅, upper = U
    ExternallyUndefinable,
    /// lower = ∅, upper = U
    TotallyUndefinable,
}

impl RoughType {
    pub const ALL: [RoughType; 4] = [
        RoughType::RoughlyDefinable,
        RoughType::InternallyUndefinable,
        RoughType::ExternallyUndefinable,
        RoughType::TotallyUndefinable,
    ];

    pub fn classify(lower_empty: bool, upper_full: bool) -> RoughType {
        match (lower_empty, upper_full) {
            (false, false) => RoughType::RoughlyDefinable,
            (true, false) => RoughType::InternallyUndefinable,
            (false, true) => RoughType::ExternallyUndefinable,
            (true, true) => RoughType::TotallyUndefinable,
        }
    }

    pub fn of_bits(lower: &BitSet, upper: &BitSet) -> RoughType {
        RoughType::classify(lower.is_empty(), upper.is_full())
    }

    /// 1 through 4.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<RoughType> {
        RoughType::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            RoughType::RoughlyDefinable => "roughly definable",
            RoughType::InternallyUndefinable => "internally undefinable",
            RoughType::ExternallyUndefinable => "externally undefinable",
            RoughType::TotallyUndefinable => "totally undefinable",
        }
    }
}

impl fmt::Display for RoughType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Type {}", self.number())
    }
}

impl std::str::FromStr for RoughType {
    type Err = String;

    /// Accepts `1`..`4`, `type1`, `Type 1`, `t1`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let digits: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        let digits = digits.trim_start_matches("type").trim_start_matches('t');
        digits
            .parse::<u8>()
            .ok()
            .and_then(RoughType::from_number)
            .ok_or_else(|| format!("unknown rough type `{s}` (expected 1-4)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxResult {
    pub lower: Subset,
    pub upper: Subset,
    pub boundary: Subset,
    pub rough_type: RoughType,
}

fn check_v_subset(r: &BinaryRelation, y: &Subset) -> Result<()> {
    if y.side() != Side::V {
        return Err(Error::SideMismatch {
            expected: Side::V,
            found: y.side(),
        });
    }
    if **y.universes() != **r.universes() {
        return Err(Error::UniverseMismatch);
    }
    Ok(())
}

pub fn lower_approximation_with(r: &BinaryRelation, y: &Subset, strategy: Strategy) -> Result<Subset> {
    check_v_subset(r, y)?;
    Ok(r.u_subset(lower_bits(r, y.bits(), strategy)))
}

pub fn upper_approximation_with(r: &BinaryRelation, y: &Subset, strategy: Strategy) -> Result<Subset> {
    check_v_subset(r, y)?;
    Ok(r.u_subset(upper_bits(r, y.bits(), strategy)))
}

/// `{x ∈ U : r(x) ⊆ Y}`. Solitary elements are always members.
pub fn lower_approximation(r: &BinaryRelation, y: &Subset) -> Result<Subset> {
    lower_approximation_with(r, y, Strategy::SetForm)
}

/// `{x ∈ U : r(x) ∩ Y ≠ ∅}`.
pub fn upper_approximation(r: &BinaryRelation, y: &Subset) -> Result<Subset> {
    upper_approximation_with(r, y, Strategy::SetForm)
}

pub fn boundary(r: &BinaryRelation, y: &Subset) -> Result<Subset> {
    Ok(approximate(r, y)?.boundary)
}

pub fn rough_type(r: &BinaryRelation, y: &Subset) -> Result<RoughType> {
    Ok(approximate(r, y)?.rough_type)
}

/// Lower, upper, boundary and type of `y` in one pass.
pub fn approximate(r: &BinaryRelation, y: &Subset) -> Result<ApproxResult> {
    check_v_subset(r, y)?;
    let lower = lower_set_form(r, y.bits());
    let upper = upper_set_form(r, y.bits());
    let boundary = upper.difference(&lower);
    let rough_type = RoughType::of_bits(&lower, &upper);
    Ok(ApproxResult {
        lower: r.u_subset(lower),
        upper: r.u_subset(upper),
        boundary: r.u_subset(boundary),
        rough_type,
    })
}

#[cfg(test)]
mod tests {
    use super::Strategy;
    use super::*;
    use crate::relation::UniversePair;
    use crate::testutil::{random_relation, reference_relation, rng};
    use proptest::prelude::*;

    fn v(r: &BinaryRelation, labels: &[&str]) -> Subset {
        r.v_subset_of(labels.iter().copied()).unwrap()
    }

    /// Direct transcription of the defining formulas over label sets.
    fn oracle(r: &BinaryRelation, y: &Subset) -> (Vec<String>, Vec<String>) {
        let us = r.universes().labels(Side::U);
        let mut lower = vec![];
        let mut upper = vec![];
        for x in us {
            let rx = r.right_neighborhood(x).unwrap();
            if rx.labels().iter().all(|l| y.contains(l)) {
                lower.push(x.clone());
            }
            if rx.labels().iter().any(|l| y.contains(l)) {
                upper.push(x.clone());
            }
        }
        (lower, upper)
    }

    #[test]
    fn lower_examples() {
        let r = reference_relation();
        let all_strategies = |y: &Subset| {
            let got: Vec<_> = Strategy::ALL
                .iter()
                .map(|&s| lower_approximation_with(&r, y, s).unwrap())
                .collect();
            assert!(got.windows(2).all(|w| w[0] == w[1]));
            got[0].labels().into_iter().map(String::from).collect::<Vec<_>>()
        };
        assert_eq!(all_strategies(&v(&r, &["y1", "y2", "y4"])), ["x3"]);
        assert!(all_strategies(&v(&r, &[])).is_empty());
        assert_eq!(all_strategies(&v(&r, &["y1", "y2", "y3", "y4", "y5", "y6"])).len(), 5);
        assert_eq!(all_strategies(&v(&r, &["y3", "y5", "y6"])), ["x2"]);
    }

    #[test]
    fn upper_examples() {
        let r = reference_relation();
        let up = |labels: &[&str]| {
            let y = v(&r, labels);
            let got: Vec<_> = Strategy::ALL
                .iter()
                .map(|&s| upper_approximation_with(&r, &y, s).unwrap())
                .collect();
            assert!(got.windows(2).all(|w| w[0] == w[1]));
            got[0].labels().into_iter().map(String::from).collect::<Vec<_>>()
        };
        assert_eq!(up(&["y1", "y2", "y4"]), ["x1", "x3", "x4", "x5"]);
        assert_eq!(up(&["y5"]), ["x1", "x4", "x5"]);
        assert!(up(&[]).is_empty());
        assert_eq!(up(&["y2"]), ["x1", "x3", "x5"]);
        assert_eq!(up(&["y2"]), r.left_neighborhood("y2").unwrap().labels());
    }

    #[test]
    fn boundary_examples() {
        let r = reference_relation();
        assert_eq!(
            boundary(&r, &v(&r, &["y1", "y2", "y4"])).unwrap().labels(),
            ["x1", "x4", "x5"]
        );
        assert!(boundary(&r, &v(&r, &[])).unwrap().is_empty());
        let all = Subset::full(r.universes().clone(), Side::V);
        assert!(boundary(&r, &all).unwrap().is_empty());
    }

    #[test]
    fn type_examples() {
        let r = reference_relation();
        let t = |labels: &[&str]| rough_type(&r, &v(&r, labels)).unwrap();
        assert_eq!(t(&["y1", "y2", "y6"]), RoughType::TotallyUndefinable);
        assert_eq!(t(&["y1", "y2", "y4"]), RoughType::RoughlyDefinable);
        assert_eq!(t(&["y1"]), RoughType::InternallyUndefinable);
        assert_eq!(t(&["y2", "y3", "y4", "y6"]), RoughType::ExternallyUndefinable);
        let res = approximate(&r, &v(&r, &["y2", "y3", "y4", "y6"])).unwrap();
        assert_eq!(res.lower.labels(), ["x2", "x3"]);
        assert!(res.upper.is_full());
    }

    #[test]
    fn type_parsing() {
        for t in RoughType::ALL {
            assert_eq!(t.to_string().parse::<RoughType>().unwrap(), t);
            assert_eq!(RoughType::from_number(t.number()), Some(t));
        }
        assert_eq!("t3".parse::<RoughType>().unwrap(), RoughType::ExternallyUndefinable);
        assert!("5".parse::<RoughType>().is_err());
        assert_eq!(RoughType::from_number(0), None);
    }

    #[test]
    fn rejects_wrong_side() {
        let r = reference_relation();
        let x = r.u_subset_of(["x1"]).unwrap();
        assert!(matches!(lower_approximation(&r, &x), Err(Error::SideMismatch { .. })));
        let other = BinaryRelation::new(UniversePair::indexed(1, 6).unwrap(), vec![vec![true; 6]]).unwrap();
        let y = other.v_subset_of(["y1"]).unwrap();
        // same V labels but a different U: still a universe mismatch
        assert!(matches!(upper_approximation(&r, &y), Err(Error::UniverseMismatch)));
    }

    #[test]
    fn oracle_agreement_exhaustive_reference() {
        let r = reference_relation();
        for mask in 0..64u64 {
            let y = r.v_subset(BitSet::from_mask(6, mask));
            let (lo, up) = oracle(&r, &y);
            let res = approximate(&r, &y).unwrap();
            assert_eq!(res.lower.labels(), lo);
            assert_eq!(res.upper.labels(), up);
            assert_eq!(res.boundary, res.upper.difference(&res.lower).unwrap());
        }
    }

    proptest! {
        #[test]
        fn strategies_agree(seed in any::<u64>(), u in 1usize..10, w in 1usize..10, mask in any::<u64>()) {
            let r = random_relation(&mut rng(seed), u, w);
            let y = BitSet::from_mask(r.v_len(), mask & ((1u64 << r.v_len()) - 1));
            let lo = lower_set_form(&r, &y);
            prop_assert_eq!(&lo, &lower_matrix_form(&r, &y));
            let up = upper_set_form(&r, &y);
            prop_assert_eq!(&up, &upper_matrix_form(&r, &y));
            prop_assert_eq!(&up, &upper_left_union(&r, &y));
            // duality
            prop_assert_eq!(lo.complement(), upper_set_form(&r, &y.complement()));
        }
    }
}
