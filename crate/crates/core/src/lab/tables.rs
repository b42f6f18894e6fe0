//! Rough types of unions and intersections.
//!
//! For `Z = X ∪ Y` (or `X ∩ Y`) the rough type of `Z` is constrained by the
//! types of `X` and `Y`. The constraint is kept as a static 4×4 table of
//! allowed result types per operation; sweeps compare observed outcomes with
//! it and record a witness for every outcome seen.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{lower_set_form, upper_set_form, RoughType};
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::lab::generate::GeneratorConfig;
use crate::relation::BinaryRelation;

/// Largest `|V|` for which all subset pairs are swept.
pub const TABLE_SUBSET_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SetOp {
    Union,
    Intersection,
}

impl SetOp {
    pub fn apply(self, x: &BitSet, y: &BitSet) -> BitSet {
        match self {
            SetOp::Union => x.union(y),
            SetOp::Intersection => x.intersection(y),
        }
    }

    fn apply_mask(self, x: u64, y: u64) -> u64 {
        match self {
            SetOp::Union => x | y,
            SetOp::Intersection => x & y,
        }
    }
}

impl fmt::Display for SetOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetOp::Union => "union",
            SetOp::Intersection => "intersection",
        })
    }
}

impl std::str::FromStr for SetOp {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "union" | "cup" | "or" => Ok(SetOp::Union),
            "intersection" | "cap" | "and" => Ok(SetOp::Intersection),
            _ => Err(format!("unknown operation `{s}` (expected union or intersection)")),
        }
    }
}

/// A set of rough types, bit `k` standing for type `k + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct TypeSet(u8);

impl TypeSet {
    pub const EMPTY: TypeSet = TypeSet(0);

    pub const fn of(types: &[u8]) -> TypeSet {
        let mut bits = 0;
        let mut i = 0;
        while i < types.len() {
            bits |= 1 << (types[i] - 1);
            i += 1;
        }
        TypeSet(bits)
    }

    pub fn contains(self, t: RoughType) -> bool {
        self.0 >> (t.number() - 1) & 1 == 1
    }

    pub fn insert(&mut self, t: RoughType) {
        self.0 |= 1 << (t.number() - 1);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: TypeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn difference(self, other: TypeSet) -> TypeSet {
        TypeSet(self.0 & !other.0)
    }

    pub fn union(self, other: TypeSet) -> TypeSet {
        TypeSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = RoughType> {
        RoughType::ALL.into_iter().filter(move |&t| self.contains(t))
    }

    pub fn numbers(self) -> Vec<u8> {
        self.iter().map(RoughType::number).collect()
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        let parts: Vec<String> = self.iter().map(|t| t.to_string()).collect();
        f.write_str(&parts.join(" / "))
    }
}

impl fmt::Debug for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}}",
            self.numbers().iter().map(u8::to_string).collect::<Vec<_>>().join(",")
        )
    }
}

impl Serialize for TypeSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.numbers().serialize(s)
    }
}

/// Allowed result types, indexed `[left type][right type]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeTable {
    pub op: SetOp,
    pub cells: [[TypeSet; 4]; 4],
}

const fn t(types: &[u8]) -> TypeSet {
    TypeSet::of(types)
}

pub static UNION_TABLE: TypeTable = TypeTable {
    op: SetOp::Union,
    cells: [
        [t(&[1, 3]), t(&[1, 3]), t(&[3]), t(&[3])],
        [t(&[1, 3]), t(&[1, 2, 3, 4]), t(&[3]), t(&[3, 4])],
        [t(&[3]), t(&[3]), t(&[3]), t(&[3])],
        [t(&[3]), t(&[3, 4]), t(&[3]), t(&[3, 4])],
    ],
};

pub static INTERSECTION_TABLE: TypeTable = TypeTable {
    op: SetOp::Intersection,
    cells: [
        [t(&[1, 2]), t(&[2]), t(&[1, 2]), t(&[2])],
        [t(&[2]), t(&[2]), t(&[2]), t(&[2])],
        [t(&[1, 2]), t(&[2]), t(&[1, 2, 3, 4]), t(&[2, 4])],
        [t(&[2]), t(&[2]), t(&[2, 4]), t(&[2, 4])],
    ],
};

impl TypeTable {
    pub fn builtin(op: SetOp) -> &'static TypeTable {
        match op {
            SetOp::Union => &UNION_TABLE,
            SetOp::Intersection => &INTERSECTION_TABLE,
        }
    }

    pub fn allowed(&self, left: RoughType, right: RoughType) -> TypeSet {
        self.cells[usize::from(left.number() - 1)][usize::from(right.number() - 1)]
    }

    pub fn ambiguous_cells(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.len() > 1).count()
    }

    pub fn unambiguous_cells(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.len() == 1).count()
    }

    /// Applies cell overrides to a copy of this table. One override per
    /// line, `<op> <left> <right>: <types...>` with types `1`..`4`; lines
    /// for the other operation are skipped and `#` starts a comment.
    pub fn with_overrides(&self, text: &str) -> Result<TypeTable> {
        let mut table = self.clone();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Config(format!("table override line {}: {msg}", n + 1));
            let (head, tail) = line.split_once(':').ok_or_else(|| bad("missing ':'"))?;
            let parse_type = |s: &str| s.parse::<RoughType>().map_err(|e| bad(&e));
            let key: Vec<&str> = head.split_whitespace().collect();
            let [op, l, r] = key[..] else {
                return Err(bad("expected `<op> <left> <right>:`"));
            };
            let op: SetOp = op.parse().map_err(|e: String| bad(&e))?;
            let (l, r) = (parse_type(l)?, parse_type(r)?);
            let mut cell = TypeSet::EMPTY;
            for tok in tail.split_whitespace() {
                cell.insert(parse_type(tok)?);
            }
            if op == self.op {
                table.cells[usize::from(l.number() - 1)][usize::from(r.number() - 1)] = cell;
            }
        }
        Ok(table)
    }
}

/// A relation and two V-subsets realizing some table outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub relation: BinaryRelation,
    pub x: BitSet,
    pub y: BitSet,
}

impl Witness {
    /// `(type(X), type(Y), type(X op Y))`, recomputed from scratch.
    pub fn types(&self, op: SetOp) -> (RoughType, RoughType, RoughType) {
        let ty =
            |s: &BitSet| RoughType::of_bits(&lower_set_form(&self.relation, s), &upper_set_form(&self.relation, s));
        (ty(&self.x), ty(&self.y), ty(&op.apply(&self.x, &self.y)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCellFinding {
    pub op: SetOp,
    pub left: RoughType,
    pub right: RoughType,
    /// Number of `(relation, X, Y)` triples falling into this cell.
    pub instances: u64,
    pub observed: TypeSet,
    pub allowed: TypeSet,
    /// First witness in canonical order for each observed result type.
    pub witnesses: Vec<(RoughType, Witness)>,
}

impl TableCellFinding {
    pub fn conforms(&self) -> bool {
        self.observed.is_subset(self.allowed)
    }

    /// Allowed alternatives not realized within the sweep.
    pub fn unrealized(&self) -> TypeSet {
        self.allowed.difference(self.observed)
    }

    /// Observed results outside the allowed cell.
    pub fn unexpected(&self) -> TypeSet {
        self.observed.difference(self.allowed)
    }
}

/// Canonical position of a witness: relation index, then X mask, then Y mask.
type Key = (u64, u64, u64);

#[derive(Clone)]
struct Accum {
    instances: [u64; 16],
    first: [[Option<Key>; 4]; 16],
}

impl Accum {
    fn new() -> Self {
        Accum {
            instances: [0; 16],
            first: [[None; 4]; 16],
        }
    }

    fn merge(mut self, other: Accum) -> Accum {
        for c in 0..16 {
            self.instances[c] += other.instances[c];
            for k in 0..4 {
                self.first[c][k] = match (self.first[c][k], other.first[c][k]) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
            }
        }
        self
    }
}

/// Types of every subset of V, indexed by subset mask.
fn subset_types(r: &BinaryRelation) -> Vec<RoughType> {
    let v = r.v_len();
    (0..1u64 << v)
        .map(|m| {
            let y = BitSet::from_mask(v, m);
            RoughType::of_bits(&lower_set_form(r, &y), &upper_set_form(r, &y))
        })
        .collect()
}

fn check_width(r: &BinaryRelation) -> Result<()> {
    if r.v_len() > TABLE_SUBSET_LIMIT {
        return Err(Error::Config(format!(
            "type-table sweeps enumerate all subset pairs and need |V| <= {TABLE_SUBSET_LIMIT}, got {}",
            r.v_len()
        )));
    }
    Ok(())
}

fn sweep_relation(index: u64, r: &BinaryRelation, op: SetOp) -> Accum {
    let types = subset_types(r);
    let n = types.len() as u64;
    let mut acc = Accum::new();
    for x in 0..n {
        for y in 0..n {
            let (tx, ty) = (types[x as usize], types[y as usize]);
            let tz = types[op.apply_mask(x, y) as usize];
            let cell = usize::from(tx.number() - 1) * 4 + usize::from(ty.number() - 1);
            acc.instances[cell] += 1;
            let slot = &mut acc.first[cell][usize::from(tz.number() - 1)];
            if slot.is_none() {
                *slot = Some((index, x, y));
            }
        }
    }
    acc
}

/// Sweeps every relation of `cfg` and every ordered pair of V-subsets,
/// comparing outcomes with the built-in table for `op`.
pub fn check_type_tables(cfg: &GeneratorConfig, op: SetOp) -> Result<Vec<TableCellFinding>> {
    check_type_tables_against(cfg, op, TypeTable::builtin(op))
}

/// As [`check_type_tables`], against an arbitrary table.
pub fn check_type_tables_against(cfg: &GeneratorConfig, op: SetOp, table: &TypeTable) -> Result<Vec<TableCellFinding>> {
    let source = cfg.source()?;
    let acc = (0..source.len())
        .into_par_iter()
        .map(|k| {
            let r = source.get(k);
            check_width(&r)?;
            Ok::<_, Error>(sweep_relation(k, &r, op))
        })
        .try_reduce(Accum::new, |a, b| Ok(a.merge(b)))?;
    Ok(findings(op, table, &acc, |k| source.get(k)))
}

/// Table findings for a single relation.
pub fn check_relation_tables(r: &BinaryRelation, op: SetOp, table: &TypeTable) -> Result<Vec<TableCellFinding>> {
    check_width(r)?;
    let acc = sweep_relation(0, r, op);
    Ok(findings(op, table, &acc, |_| r.clone()))
}

fn findings(
    op: SetOp,
    table: &TypeTable,
    acc: &Accum,
    relation: impl Fn(u64) -> BinaryRelation,
) -> Vec<TableCellFinding> {
    let mut out = Vec::with_capacity(16);
    for left in RoughType::ALL {
        for right in RoughType::ALL {
            let cell = usize::from(left.number() - 1) * 4 + usize::from(right.number() - 1);
            let mut observed = TypeSet::EMPTY;
            let mut witnesses = Vec::new();
            for result in RoughType::ALL {
                if let Some((k, x, y)) = acc.first[cell][usize::from(result.number() - 1)] {
                    observed.insert(result);
                    let relation = relation(k);
                    let v = relation.v_len();
                    witnesses.push((
                        result,
                        Witness {
                            relation,
                            x: BitSet::from_mask(v, x),
                            y: BitSet::from_mask(v, y),
                        },
                    ));
                }
            }
            out.push(TableCellFinding {
                op,
                left,
                right,
                instances: acc.instances[cell],
                observed,
                allowed: table.allowed(left, right),
                witnesses,
            });
        }
    }
    out
}

/// The first `(relation, X, Y)` in canonical order with
/// `type(X) = left`, `type(Y) = right` and `type(X op Y) = target`.
pub fn find_type_witness(
    op: SetOp,
    left: RoughType,
    right: RoughType,
    target: RoughType,
    search: &GeneratorConfig,
) -> Result<Option<Witness>> {
    let source = search.source()?;
    (0..source.len())
        .into_par_iter()
        .map(|k| {
            let r = source.get(k);
            check_width(&r)?;
            let types = subset_types(&r);
            let n = types.len() as u64;
            for x in 0..n {
                if types[x as usize] != left {
                    continue;
                }
                for y in 0..n {
                    if types[y as usize] == right && types[op.apply_mask(x, y) as usize] == target {
                        let v = r.v_len();
                        return Ok(Some(Witness {
                            x: BitSet::from_mask(v, x),
                            y: BitSet::from_mask(v, y),
                            relation: r,
                        }));
                    }
                }
            }
            Ok(None)
        })
        .find_map_first(|res: Result<Option<Witness>>| match res {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()
        .map(Option::flatten)
}
