//! Algebraic laws of the approximation operators, checked on concrete
//! relations over exhaustive or sampled subset budgets.

use std::fmt;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{lower_matrix_form, lower_set_form, upper_left_union, upper_matrix_form, upper_set_form};
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::lab::generate::{derived_rng, GeneratorConfig, Stream};
use crate::relation::{BinaryRelation, Side, Subset, UniversePair};

/// Largest `|V|` for exhaustive subset enumeration.
pub const EXHAUSTIVE_SUBSET_LIMIT: usize = 12;
/// Largest `|V|` for which the exact-set search enumerates all of `P(V)`.
pub const EXACT_SET_SEARCH_LIMIT: usize = 20;
/// Families of three and four subsets are enumerated exhaustively only up to
/// this many subsets (i.e. `|V| <= 4`); beyond that they are sampled.
const EXHAUSTIVE_FAMILY_SUBSETS: usize = 16;
const SAMPLED_FAMILIES: usize = 1000;
const FAMILY_SEED: u64 = 0xfa_0111;
/// Violations retained per law; the count is always exact.
pub const MAX_WITNESSES: usize = 8;

/// The laws the lab checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Law {
    /// `upper(Y) = ⋃_{y∈Y} l(y)`
    UpperIsLeftUnion,
    /// `lower(∅) = S`, `upper(∅) = ∅`, `lower(V) = U`, `upper(V) = S′`
    BoundaryValues,
    /// `S ⊆ lower(X)` and `upper(X) ⊆ S′`
    SolitaryContainment,
    /// `lower(X) − S ⊆ upper(X)`
    LowerMinusSolitaryInUpper,
    /// `lower(X) = U ⟺ ⋃ r(x) ⊆ X`; `upper(X) = ∅ ⟺ X ⊆ (⋃ r(x))′`
    Extremes,
    /// `S ≠ ∅ ⟹ lower(X) ≠ upper(X)`
    SolitaryBreaksExactness,
    /// `lower(⋂ X_i) = ⋂ lower(X_i)`, `upper(⋃ X_i) = ⋃ upper(X_i)`
    Distributivity,
    /// `X ⊆ Y ⟹ lower(X) ⊆ lower(Y)`, `upper(X) ⊆ upper(Y)`
    Monotonicity,
    /// `lower(X) ∪ lower(Y) ⊆ lower(X ∪ Y)`, `upper(X ∩ Y) ⊆ upper(X) ∩ upper(Y)`
    SubDistributivity,
    /// `lower(X)′ = upper(X′)`, `upper(X)′ = lower(X′)`
    Duality,
    /// `(∃X lower(X) = upper(X)) ⟺ R serial`
    ExactSetIffSerial,
    /// Upper approximations of singletons determine the relation.
    UpperDeterminesRelation,
    /// Lower approximations of co-singletons determine the relation.
    LowerDeterminesRelation,
    /// Set, matrix and left-union evaluations agree bit for bit.
    EvaluationAgreement,
    /// `E_V ∘ R = R = R ∘ E_U`
    SaturationIdentity,
}

impl Law {
    /// Laws checked per subset by [`verify_algebraic_properties`].
    pub const ALGEBRAIC: [Law; 10] = [
        Law::UpperIsLeftUnion,
        Law::BoundaryValues,
        Law::SolitaryContainment,
        Law::LowerMinusSolitaryInUpper,
        Law::Extremes,
        Law::SolitaryBreaksExactness,
        Law::Distributivity,
        Law::Monotonicity,
        Law::SubDistributivity,
        Law::Duality,
    ];

    pub const ALL: [Law; 15] = [
        Law::UpperIsLeftUnion,
        Law::BoundaryValues,
        Law::SolitaryContainment,
        Law::LowerMinusSolitaryInUpper,
        Law::Extremes,
        Law::SolitaryBreaksExactness,
        Law::Distributivity,
        Law::Monotonicity,
        Law::SubDistributivity,
        Law::Duality,
        Law::ExactSetIffSerial,
        Law::UpperDeterminesRelation,
        Law::LowerDeterminesRelation,
        Law::EvaluationAgreement,
        Law::SaturationIdentity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Law::UpperIsLeftUnion => "upper-is-left-union",
            Law::BoundaryValues => "boundary-values",
            Law::SolitaryContainment => "solitary-containment",
            Law::LowerMinusSolitaryInUpper => "lower-minus-solitary-in-upper",
            Law::Extremes => "extremes",
            Law::SolitaryBreaksExactness => "solitary-breaks-exactness",
            Law::Distributivity => "distributivity",
            Law::Monotonicity => "monotonicity",
            Law::SubDistributivity => "sub-distributivity",
            Law::Duality => "duality",
            Law::ExactSetIffSerial => "exact-set-iff-serial",
            Law::UpperDeterminesRelation => "upper-determines-relation",
            Law::LowerDeterminesRelation => "lower-determines-relation",
            Law::EvaluationAgreement => "evaluation-agreement",
            Law::SaturationIdentity => "saturation-identity",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A failed instance of a law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawViolation {
    /// Relation rows as bit strings, `|`-separated.
    pub relation: String,
    /// The V-subsets involved, as bit strings.
    pub subsets: Vec<String>,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawRecord {
    pub law: Law,
    pub instances: u64,
    pub violation_count: u64,
    /// At most [`MAX_WITNESSES`] witnesses, earliest first.
    pub violations: Vec<LawViolation>,
}

impl LawRecord {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Per-law verdicts, in [`Law::ALL`] order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub records: Vec<LawRecord>,
}

impl Default for PropertyReport {
    fn default() -> Self {
        PropertyReport {
            records: Law::ALL
                .iter()
                .map(|&law| LawRecord {
                    law,
                    instances: 0,
                    violation_count: 0,
                    violations: vec![],
                })
                .collect(),
        }
    }
}

impl PropertyReport {
    fn slot(&mut self, law: Law) -> &mut LawRecord {
        let i = Law::ALL.iter().position(|&l| l == law).expect("every law has a slot");
        &mut self.records[i]
    }

    pub fn record(&self, law: Law) -> &LawRecord {
        self.records
            .iter()
            .find(|r| r.law == law)
            .expect("every law has a slot")
    }

    fn check(&mut self, law: Law, ok: bool, witness: impl FnOnce() -> LawViolation) {
        let rec = self.slot(law);
        rec.instances += 1;
        if !ok {
            rec.violation_count += 1;
            if rec.violations.len() < MAX_WITNESSES {
                rec.violations.push(witness());
            }
        }
    }

    /// Appends `other`'s counts and witnesses after this report's.
    pub fn merge(&mut self, other: PropertyReport) {
        for (mine, theirs) in self.records.iter_mut().zip(other.records) {
            mine.instances += theirs.instances;
            mine.violation_count += theirs.violation_count;
            let room = MAX_WITNESSES.saturating_sub(mine.violations.len());
            mine.violations.extend(theirs.violations.into_iter().take(room));
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(LawRecord::passed)
    }

    /// Only the laws that were actually exercised.
    pub fn exercised(&self) -> impl Iterator<Item = &LawRecord> {
        self.records.iter().filter(|r| r.instances > 0)
    }
}

/// Which V-subsets to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetBudget {
    /// All of `P(V)` and all pairs; families of three and four exhaustively
    /// when `|V| <= 4`, otherwise a fixed-seed sample.
    Exhaustive,
    /// `pairs` random subset pairs and `families` random families of two to
    /// four subsets, drawn from the subset stream of `seed`.
    Sampled { pairs: usize, families: usize, seed: u64 },
}

fn rel_str(r: &BinaryRelation) -> String {
    format!("{r:?}")
}

fn bits_str(b: &BitSet) -> String {
    format!("{b:?}")
}

/// Approximations of one relation with the solitary set and its complement
/// precomputed.
struct Approximator<'a> {
    r: &'a BinaryRelation,
    solitary: BitSet,
    non_solitary: BitSet,
    range: BitSet,
}

impl<'a> Approximator<'a> {
    fn new(r: &'a BinaryRelation) -> Self {
        let solitary = r.solitary_bits();
        Approximator {
            r,
            non_solitary: solitary.complement(),
            solitary,
            range: r.range_bits(),
        }
    }

    fn lower(&self, y: &BitSet) -> BitSet {
        lower_set_form(self.r, y)
    }

    fn upper(&self, y: &BitSet) -> BitSet {
        upper_set_form(self.r, y)
    }

    fn single(&self, y: &BitSet, report: &mut PropertyReport) {
        let r = self.r;
        let lo = self.lower(y);
        let up = self.upper(y);
        let w = |expected: String, got: String| {
            let subsets = vec![bits_str(y)];
            move || LawViolation {
                relation: rel_str(r),
                subsets,
                expected,
                got,
            }
        };

        let left = upper_left_union(r, y);
        report.check(Law::UpperIsLeftUnion, left == up, w(bits_str(&left), bits_str(&up)));

        let lo_m = lower_matrix_form(r, y);
        let up_m = upper_matrix_form(r, y);
        report.check(
            Law::EvaluationAgreement,
            lo_m == lo && up_m == up,
            w(format!("{lo:?}/{up:?}"), format!("{lo_m:?}/{up_m:?}")),
        );

        report.check(
            Law::SolitaryContainment,
            self.solitary.is_subset(&lo) && up.is_subset(&self.non_solitary),
            w(format!("S={:?}", self.solitary), format!("lower={lo:?} upper={up:?}")),
        );
        report.check(
            Law::LowerMinusSolitaryInUpper,
            lo.difference(&self.solitary).is_subset(&up),
            w(
                format!("upper={up:?}"),
                format!("lower-S={:?}", lo.difference(&self.solitary)),
            ),
        );
        let lo_full = lo.is_full() == self.range.is_subset(y);
        let up_empty = up.is_empty() == y.is_subset(&self.range.complement());
        report.check(
            Law::Extremes,
            lo_full && up_empty,
            w(format!("range={:?}", self.range), format!("lower={lo:?} upper={up:?}")),
        );
        report.check(
            Law::SolitaryBreaksExactness,
            self.solitary.is_empty() || lo != up,
            w("lower != upper".into(), format!("lower=upper={lo:?}")),
        );
        let comp = y.complement();
        let up_c = self.upper(&comp);
        let lo_c = self.lower(&comp);
        report.check(
            Law::Duality,
            lo.complement() == up_c && up.complement() == lo_c,
            w(
                format!("{:?}/{:?}", lo.complement(), up.complement()),
                format!("{up_c:?}/{lo_c:?}"),
            ),
        );
    }

    fn boundary_values(&self, report: &mut PropertyReport) {
        let v = self.r.v_len();
        let none = BitSet::empty(v);
        let all = BitSet::full(v);
        let got = [self.lower(&none), self.upper(&none), self.lower(&all), self.upper(&all)];
        let expected = [
            self.solitary.clone(),
            BitSet::empty(self.r.u_len()),
            BitSet::full(self.r.u_len()),
            self.non_solitary.clone(),
        ];
        report.check(Law::BoundaryValues, got == expected, || LawViolation {
            relation: rel_str(self.r),
            subsets: vec![bits_str(&none), bits_str(&all)],
            expected: format!("{expected:?}"),
            got: format!("{got:?}"),
        });
    }

    fn pair(&self, x: &BitSet, y: &BitSet, report: &mut PropertyReport) {
        let (lx, ly, ux, uy) = (self.lower(x), self.lower(y), self.upper(x), self.upper(y));
        let w = |expected: String, got: String| {
            let subsets = vec![bits_str(x), bits_str(y)];
            move || LawViolation {
                relation: rel_str(self.r),
                subsets,
                expected,
                got,
            }
        };
        let cap = x.intersection(y);
        let cup = x.union(y);
        let (l_cap, u_cup) = (self.lower(&cap), self.upper(&cup));
        let (l_cup, u_cap) = (self.lower(&cup), self.upper(&cap));

        let dist_lo = lx.intersection(&ly);
        let dist_up = ux.union(&uy);
        report.check(
            Law::Distributivity,
            l_cap == dist_lo && u_cup == dist_up,
            w(format!("{dist_lo:?}/{dist_up:?}"), format!("{l_cap:?}/{u_cup:?}")),
        );

        let mono = |a: &BitSet, b: &BitSet, la: &BitSet, lb: &BitSet, ua: &BitSet, ub: &BitSet| {
            !a.is_subset(b) || (la.is_subset(lb) && ua.is_subset(ub))
        };
        report.check(
            Law::Monotonicity,
            mono(x, y, &lx, &ly, &ux, &uy) && mono(y, x, &ly, &lx, &uy, &ux),
            w("monotone".into(), format!("lower {lx:?},{ly:?} upper {ux:?},{uy:?}")),
        );

        report.check(
            Law::SubDistributivity,
            lx.union(&ly).is_subset(&l_cup) && u_cap.is_subset(&ux.intersection(&uy)),
            w(
                format!("⊇{:?} / ⊆{:?}", lx.union(&ly), ux.intersection(&uy)),
                format!("{l_cup:?} / {u_cap:?}"),
            ),
        );
    }

    fn family(&self, members: &[&BitSet], report: &mut PropertyReport) {
        let v = self.r.v_len();
        let u = self.r.u_len();
        let mut cap = BitSet::full(v);
        let mut cup = BitSet::empty(v);
        let mut cap_lo = BitSet::full(u);
        let mut cup_up = BitSet::empty(u);
        for m in members {
            cap.intersect_with(m);
            cup.union_with(m);
            cap_lo.intersect_with(&self.lower(m));
            cup_up.union_with(&self.upper(m));
        }
        let (l, up) = (self.lower(&cap), self.upper(&cup));
        report.check(Law::Distributivity, l == cap_lo && up == cup_up, || LawViolation {
            relation: rel_str(self.r),
            subsets: members.iter().map(|m| bits_str(m)).collect(),
            expected: format!("{cap_lo:?}/{cup_up:?}"),
            got: format!("{l:?}/{up:?}"),
        });
    }
}

fn all_subsets(v: usize) -> Vec<BitSet> {
    (0..1u64 << v).map(|m| BitSet::from_mask(v, m)).collect()
}

fn random_subset<R: Rng>(rng: &mut R, v: usize) -> BitSet {
    BitSet::from_indices(v, (0..v).filter(|_| rng.gen_bool(0.5)))
}

/// Checks the ten per-subset laws (plus evaluation agreement) on `r`.
///
/// Violations are report entries, never errors.
pub fn verify_algebraic_properties(r: &BinaryRelation, budget: SubsetBudget) -> Result<PropertyReport> {
    let v = r.v_len();
    let ap = Approximator::new(r);
    let mut report = PropertyReport::default();
    ap.boundary_values(&mut report);
    match budget {
        SubsetBudget::Exhaustive => {
            if v > EXHAUSTIVE_SUBSET_LIMIT {
                return Err(Error::Config(format!(
                    "exhaustive subset budget needs |V| <= {EXHAUSTIVE_SUBSET_LIMIT}, got {v}"
                )));
            }
            let subsets = all_subsets(v);
            for y in &subsets {
                ap.single(y, &mut report);
            }
            for (i, x) in subsets.iter().enumerate() {
                for y in &subsets[i..] {
                    ap.pair(x, y, &mut report);
                }
            }
            if subsets.len() <= EXHAUSTIVE_FAMILY_SUBSETS {
                let n = subsets.len();
                for a in 0..n {
                    for b in a + 1..n {
                        for c in b + 1..n {
                            ap.family(&[&subsets[a], &subsets[b], &subsets[c]], &mut report);
                            for d in c + 1..n {
                                ap.family(&[&subsets[a], &subsets[b], &subsets[c], &subsets[d]], &mut report);
                            }
                        }
                    }
                }
            } else {
                let mut rng = derived_rng(FAMILY_SEED, Stream::Subset, 0);
                for _ in 0..SAMPLED_FAMILIES {
                    let k = rng.gen_range(3..=4);
                    let picked = sample(&mut rng, subsets.len(), k);
                    let members: Vec<&BitSet> = picked.iter().map(|i| &subsets[i]).collect();
                    ap.family(&members, &mut report);
                }
            }
        }
        SubsetBudget::Sampled { pairs, families, seed } => {
            let mut rng = derived_rng(seed, Stream::Subset, 0);
            sampled(&ap, v, pairs, families, &mut rng, &mut report);
        }
    }
    Ok(report)
}

fn sampled<R: Rng>(
    ap: &Approximator<'_>,
    v: usize,
    pairs: usize,
    families: usize,
    rng: &mut R,
    report: &mut PropertyReport,
) {
    for _ in 0..pairs {
        let x = random_subset(rng, v);
        let y = random_subset(rng, v);
        ap.single(&x, report);
        ap.single(&y, report);
        ap.pair(&x, &y, report);
    }
    for _ in 0..families {
        let k = rng.gen_range(2..=4);
        let members: Vec<BitSet> = (0..k).map(|_| random_subset(rng, v)).collect();
        ap.family(&members.iter().collect::<Vec<_>>(), report);
    }
}

/// Some `X ⊆ V` with `lower(X) = upper(X)`, found by enumerating `P(V)`.
pub fn exact_set_witness(r: &BinaryRelation) -> Result<Option<BitSet>> {
    let v = r.v_len();
    if v > EXACT_SET_SEARCH_LIMIT {
        return Err(Error::Config(format!(
            "exact-set search enumerates P(V) and needs |V| <= {EXACT_SET_SEARCH_LIMIT}, got {v}"
        )));
    }
    Ok((0..1u64 << v)
        .map(|m| BitSet::from_mask(v, m))
        .find(|x| lower_set_form(r, x) == upper_set_form(r, x)))
}

/// Whether `(∃X ⊆ V: lower(X) = upper(X)) ⟺ R serial` holds for `r`.
pub fn verify_serial_iff(r: &BinaryRelation) -> Result<bool> {
    Ok(exact_set_witness(r)?.is_some() == r.is_serial())
}

fn check_oracle_output(out: &Subset, universes: &Arc<UniversePair>) -> Result<()> {
    if out.side() != Side::U {
        return Err(Error::SideMismatch {
            expected: Side::U,
            found: out.side(),
        });
    }
    if **out.universes() != **universes {
        return Err(Error::UniverseMismatch);
    }
    Ok(())
}

/// The unique relation with `R(x, y) ⟺ x ∈ upper_oracle({y})`.
pub fn reconstruct_relation<F>(upper_oracle: F, universes: Arc<UniversePair>) -> Result<BinaryRelation>
where
    F: Fn(&Subset) -> Subset,
{
    let (u, v) = (universes.size(Side::U), universes.size(Side::V));
    let mut rows = vec![BitSet::empty(v); u];
    for j in 0..v {
        let single = Subset::from_bits(universes.clone(), Side::V, BitSet::from_indices(v, [j]));
        let col = upper_oracle(&single);
        check_oracle_output(&col, &universes)?;
        for i in col.bits().iter() {
            rows[i].insert(j);
        }
    }
    BinaryRelation::from_rows(universes, rows)
}

/// The unique relation with `R(x, y) ⟺ x ∉ lower_oracle(V − {y})`.
pub fn reconstruct_relation_from_lower<F>(lower_oracle: F, universes: Arc<UniversePair>) -> Result<BinaryRelation>
where
    F: Fn(&Subset) -> Subset,
{
    let (u, v) = (universes.size(Side::U), universes.size(Side::V));
    let mut rows = vec![BitSet::empty(v); u];
    for j in 0..v {
        let co_single = Subset::from_bits(universes.clone(), Side::V, BitSet::from_indices(v, [j]).complement());
        let kept = lower_oracle(&co_single);
        check_oracle_output(&kept, &universes)?;
        for i in kept.bits().complement().iter() {
            rows[i].insert(j);
        }
    }
    BinaryRelation::from_rows(universes, rows)
}

/// Relation-level laws: exact-set/seriality, reconstruction from both
/// operators, and the saturation identity.
pub fn verify_relation_laws(r: &BinaryRelation) -> Result<PropertyReport> {
    let mut report = PropertyReport::default();
    let w = |law: &str| {
        let relation = rel_str(r);
        let law = law.to_string();
        move || LawViolation {
            relation,
            subsets: vec![],
            expected: law,
            got: "mismatch".into(),
        }
    };
    if r.v_len() <= EXACT_SET_SEARCH_LIMIT {
        report.check(
            Law::ExactSetIffSerial,
            verify_serial_iff(r)?,
            w("exact set exists iff serial"),
        );
    }
    let from_upper = reconstruct_relation(|s| r.u_subset(upper_set_form(r, s.bits())), r.universes().clone())?;
    report.check(
        Law::UpperDeterminesRelation,
        from_upper == *r,
        w("reconstruction from upper"),
    );
    let from_lower =
        reconstruct_relation_from_lower(|s| r.u_subset(lower_set_form(r, s.bits())), r.universes().clone())?;
    report.check(
        Law::LowerDeterminesRelation,
        from_lower == *r,
        w("reconstruction from lower"),
    );
    report.check(
        Law::SaturationIdentity,
        r.saturation_identity_holds(),
        w("E_V∘R = R = R∘E_U"),
    );
    Ok(report)
}

/// Every law on every relation of `cfg`. With a sampled budget each relation
/// draws its subsets from its own stream of the budget's seed. Relations are
/// evaluated in parallel and merged in canonical order.
pub fn property_campaign(cfg: &GeneratorConfig, budget: SubsetBudget) -> Result<PropertyReport> {
    let source = cfg.source()?;
    let parts: Vec<PropertyReport> = (0..source.len())
        .into_par_iter()
        .map(|k| {
            let r = source.get(k);
            let per_relation = match budget {
                SubsetBudget::Exhaustive => SubsetBudget::Exhaustive,
                SubsetBudget::Sampled { pairs, families, seed } => SubsetBudget::Sampled {
                    pairs,
                    families,
                    seed: rand::RngCore::next_u64(&mut derived_rng(seed, Stream::Subset, k)),
                },
            };
            let mut rep = verify_algebraic_properties(&r, per_relation)?;
            rep.merge(verify_relation_laws(&r)?);
            Ok(rep)
        })
        .collect::<Result<_>>()?;
    let mut report = PropertyReport::default();
    for p in parts {
        report.merge(p);
    }
    Ok(report)
}
