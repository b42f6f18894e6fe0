use thiserror::Error;

use crate::relation::Side;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe {0} must contain at least one element")]
    EmptyUniverse(Side),
    #[error("duplicate label `{label}` in universe {side}")]
    DuplicateLabel { side: Side, label: String },
    #[error("invalid label `{label}` in universe {side}: labels must be non-empty and contain no whitespace or ':'")]
    InvalidLabel { side: Side, label: String },
    #[error("relation has {found} rows but universe U has {expected} elements")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} has width {found}, expected {expected}")]
    RowWidth { row: String, expected: usize, found: usize },
    #[error("unknown label `{label}` in universe {side}")]
    UnknownLabel { side: Side, label: String },
    #[error("expected a {expected}-side subset, got a {found}-side subset")]
    SideMismatch { expected: Side, found: Side },
    #[error("subsets belong to different universes")]
    UniverseMismatch,
    #[error("invalid classification: {}", render_violations(.0))]
    InvalidClassification(Vec<crate::classification::Violation>),
    #[error("{0} is undefined: denominator is zero")]
    UndefinedMeasure(&'static str),
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("exhaustive enumeration of {u}x{v} exceeds the cap of {cap} cells")]
    ExhaustiveCap { u: usize, v: usize, cap: usize },
    #[error("invalid generator configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Parse(#[from] crate::io::format::ParseError),
}

fn render_violations(v: &[crate::classification::Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
