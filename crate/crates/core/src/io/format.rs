//! Text formats for relations, classifications and command-line subsets.
//!
//! Relation file:
//!
//! ```text
//! # comment
//! V: y1 y2 y3
//! x1: 1 0 1
//! x2: 0 0 1
//! ```
//!
//! Classification file, one block per line: `Y1: y1 y3`.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::relation::{is_valid_label, BinaryRelation, Side, Subset, UniversePair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    MissingColon,
    EmptyHeader,
    NoRows,
    DuplicateLabel(String),
    InvalidLabel(String),
    BadCell(String),
    RowWidth { expected: usize, found: usize },
    UnknownLabel(String),
    DuplicateBlock(String),
    DuplicateMember(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MissingHeader => f.write_str("expected `V:` header before any row"),
            ParseErrorKind::MissingColon => f.write_str("expected `<label>:`"),
            ParseErrorKind::EmptyHeader => f.write_str("`V:` header lists no labels"),
            ParseErrorKind::NoRows => f.write_str("relation has no rows"),
            ParseErrorKind::DuplicateLabel(l) => write!(f, "duplicate label `{l}`"),
            ParseErrorKind::InvalidLabel(l) => write!(f, "invalid label `{l}`"),
            ParseErrorKind::BadCell(c) => write!(f, "cell `{c}` is not 0 or 1"),
            ParseErrorKind::RowWidth { expected, found } => {
                write!(f, "row has {found} cells, expected {expected}")
            }
            ParseErrorKind::UnknownLabel(l) => write!(f, "unknown label `{l}`"),
            ParseErrorKind::DuplicateBlock(n) => write!(f, "duplicate block name `{n}`"),
            ParseErrorKind::DuplicateMember(l) => write!(f, "label `{l}` listed twice in one block"),
        }
    }
}

/// A diagnostic addressed by 1-based line and column (in characters).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

fn err<T>(line: usize, column: usize, kind: ParseErrorKind) -> Result<T> {
    Err(Error::Parse(ParseError { line, column, kind }))
}

/// A significant line: number, the label before ':', and the tokens after
/// it, every token tagged with its column.
struct Line<'a> {
    number: usize,
    head: Option<(usize, &'a str)>,
    tokens: Vec<(usize, &'a str)>,
    end: usize,
}

fn tokens(text: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, c)) in text.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((col, i)),
            (true, Some((scol, si))) => {
                out.push((offset + scol, &text[si..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((scol, si)) = start {
        out.push((offset + scol, &text[si..]));
    }
    out
}

fn significant_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(n, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            return None;
        }
        let end = content.trim_end().chars().count() + 1;
        let line = match content.split_once(':') {
            Some((head, tail)) => {
                let head_tok = tokens(head, 1);
                let tail_offset = head.chars().count() + 2;
                Line {
                    number: n + 1,
                    head: Some(match head_tok.as_slice() {
                        [(c, h)] => (*c, *h),
                        // empty or multi-word label: report it whole
                        _ => (head_tok.first().map_or(1, |t| t.0), head.trim()),
                    }),
                    tokens: tokens(tail, tail_offset),
                    end,
                }
            }
            None => Line {
                number: n + 1,
                head: None,
                tokens: tokens(content, 1),
                end,
            },
        };
        Some(line)
    })
}

/// A parsed relation file.
#[derive(Debug, Clone)]
pub struct RelationDocument {
    pub universes: Arc<UniversePair>,
    pub rows: Vec<BitSet>,
    /// Where the document came from: a path, or `inline`.
    pub source: String,
}

impl PartialEq for RelationDocument {
    fn eq(&self, other: &Self) -> bool {
        self.universes == other.universes && self.rows == other.rows
    }
}

impl Eq for RelationDocument {}

impl RelationDocument {
    pub fn from_relation(r: &BinaryRelation, source: impl Into<String>) -> Self {
        RelationDocument {
            universes: r.universes().clone(),
            rows: r.rows().to_vec(),
            source: source.into(),
        }
    }

    pub fn relation(&self) -> BinaryRelation {
        BinaryRelation::from_rows(self.universes.clone(), self.rows.clone()).expect("validated on parse")
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }
}

pub fn parse_relation_file(text: &str) -> Result<RelationDocument> {
    let mut lines = significant_lines(text);
    let header = match lines.next() {
        Some(l) if l.head.is_some_and(|(_, h)| h == "V") => l,
        Some(l) => return err(l.number, l.head.map_or(1, |h| h.0), ParseErrorKind::MissingHeader),
        None => return err(1, 1, ParseErrorKind::MissingHeader),
    };
    if header.tokens.is_empty() {
        return err(header.number, header.end, ParseErrorKind::EmptyHeader);
    }
    let mut seen = HashSet::new();
    for &(col, label) in &header.tokens {
        if !is_valid_label(label) {
            return err(header.number, col, ParseErrorKind::InvalidLabel(label.into()));
        }
        if !seen.insert(label) {
            return err(header.number, col, ParseErrorKind::DuplicateLabel(label.into()));
        }
    }
    let width = header.tokens.len();

    let mut u_labels = Vec::new();
    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    let mut last_line = header.number;
    for line in lines {
        last_line = line.number;
        let Some((col, label)) = line.head else {
            return err(line.number, 1, ParseErrorKind::MissingColon);
        };
        if !is_valid_label(label) {
            return err(line.number, col, ParseErrorKind::InvalidLabel(label.into()));
        }
        if !seen.insert(label) {
            return err(line.number, col, ParseErrorKind::DuplicateLabel(label.into()));
        }
        let mut row = BitSet::empty(width);
        for (j, &(col, cell)) in line.tokens.iter().enumerate() {
            let bit = match cell {
                "0" => false,
                "1" => true,
                _ => return err(line.number, col, ParseErrorKind::BadCell(cell.into())),
            };
            if j >= width {
                return err(
                    line.number,
                    col,
                    ParseErrorKind::RowWidth {
                        expected: width,
                        found: line.tokens.len(),
                    },
                );
            }
            row.set(j, bit);
        }
        if line.tokens.len() < width {
            return err(
                line.number,
                line.end,
                ParseErrorKind::RowWidth {
                    expected: width,
                    found: line.tokens.len(),
                },
            );
        }
        u_labels.push(label.to_string());
        rows.push(row);
    }
    if rows.is_empty() {
        return err(last_line + 1, 1, ParseErrorKind::NoRows);
    }
    let v_labels = header.tokens.iter().map(|t| t.1.to_string()).collect::<Vec<_>>();
    let universes = Arc::new(UniversePair::new(u_labels, v_labels)?);
    Ok(RelationDocument {
        universes,
        rows,
        source: "inline".into(),
    })
}

/// Canonical text of a relation document; [`parse_relation_file`] inverts it.
pub fn render_relation(doc: &RelationDocument) -> String {
    let mut out = String::from("V:");
    for l in doc.universes.labels(Side::V) {
        out.push(' ');
        out.push_str(l);
    }
    out.push('\n');
    for (label, row) in doc.universes.labels(Side::U).iter().zip(&doc.rows) {
        out.push_str(label);
        out.push(':');
        for j in 0..row.len() {
            out.push_str(if row.contains(j) { " 1" } else { " 0" });
        }
        out.push('\n');
    }
    out
}

/// Ordered named V-subsets. Partition validity is checked later by
/// [`Classification::new`](crate::Classification::new).
pub fn parse_classification_file(text: &str, universes: &Arc<UniversePair>) -> Result<Vec<(String, Subset)>> {
    let mut blocks = Vec::new();
    let mut names = HashSet::new();
    for line in significant_lines(text) {
        let Some((col, name)) = line.head else {
            return err(line.number, 1, ParseErrorKind::MissingColon);
        };
        if !is_valid_label(name) {
            return err(line.number, col, ParseErrorKind::InvalidLabel(name.into()));
        }
        if !names.insert(name) {
            return err(line.number, col, ParseErrorKind::DuplicateBlock(name.into()));
        }
        let mut bits = BitSet::empty(universes.size(Side::V));
        for &(col, label) in &line.tokens {
            let Ok(j) = universes.index_of(Side::V, label) else {
                return err(line.number, col, ParseErrorKind::UnknownLabel(label.into()));
            };
            if bits.contains(j) {
                return err(line.number, col, ParseErrorKind::DuplicateMember(label.into()));
            }
            bits.insert(j);
        }
        blocks.push((name.to_string(), Subset::from_bits(universes.clone(), Side::V, bits)));
    }
    Ok(blocks)
}

pub fn render_classification(blocks: &[(String, Subset)]) -> String {
    let mut out = String::new();
    for (name, set) in blocks {
        let _ = write!(out, "{name}:");
        for l in set.labels() {
            let _ = write!(out, " {l}");
        }
        out.push('\n');
    }
    out
}

/// A comma-separated label list, e.g. `y1,y3`. The empty string (or `{}`)
/// is the empty set.
pub fn parse_subset(text: &str, universes: &Arc<UniversePair>, side: Side) -> Result<Subset> {
    let text = text.trim();
    let text = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')).unwrap_or(text);
    let labels: Vec<&str> = text.split(',').map(str::trim).filter(|l| !l.is_empty()).collect();
    Subset::from_labels(universes.clone(), side, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::reference_relation;
    use proptest::prelude::*;

    const REFERENCE: &str = "\
# reference relation
V: y1 y2 y3 y4 y5 y6
x1: 1 1 0 0 1 0
x2: 0 0 1 0 0 1
x3: 0 1 0 1 0 0   # trailing comment
x4: 1 0 1 1 1 1

x5: 1 1 0 0 1 0
";

    fn parse_err(text: &str) -> ParseError {
        match parse_relation_file(text) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_reference() {
        let doc = parse_relation_file(REFERENCE).unwrap();
        assert_eq!(doc.relation(), reference_relation());
        assert_eq!(doc.universes.size(Side::U), 5);
        assert_eq!(doc.universes.size(Side::V), 6);
        assert_eq!(parse_relation_file(&render_relation(&doc)).unwrap(), doc);
    }

    #[test]
    fn one_by_one() {
        let doc = parse_relation_file("V: y1\nx1: 1\n").unwrap();
        assert!(doc.relation().get(0, 0));
        assert_eq!(doc.rows.len(), 1);
    }

    #[test]
    fn diagnostics() {
        let e = parse_err("V: y1 y2\nx1: 1 0 1\n");
        assert_eq!((e.line, e.column), (2, 9));
        assert_eq!(e.kind, ParseErrorKind::RowWidth { expected: 2, found: 3 });
        let e = parse_err("V: y1 y2\nx1: 1\n");
        assert_eq!((e.line, e.column), (2, 6));
        assert!(matches!(e.kind, ParseErrorKind::RowWidth { expected: 2, found: 1 }));
        let e = parse_err("# only a comment\nx1: 1 0\n");
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::MissingHeader));
        assert_eq!(parse_err("").kind, ParseErrorKind::MissingHeader);
        let e = parse_err("V: y1 y1\n");
        assert_eq!((e.line, e.column), (1, 7));
        assert_eq!(e.kind, ParseErrorKind::DuplicateLabel("y1".into()));
        let e = parse_err("V: y1 y2\nx1: 1 0\nx1: 0 1\n");
        assert_eq!((e.line, e.column), (3, 1));
        let e = parse_err("V: y1 y2\nx1: 1 2\n");
        assert_eq!((e.line, e.column), (2, 7));
        assert_eq!(e.kind, ParseErrorKind::BadCell("2".into()));
        assert_eq!(parse_err("V: y1\n").kind, ParseErrorKind::NoRows);
        assert_eq!(parse_err("V:\nx1:\n").kind, ParseErrorKind::EmptyHeader);
        assert_eq!(parse_err("V: y1\nx1 1\n").kind, ParseErrorKind::MissingColon);
        assert_eq!(
            parse_err("V: y1\nx1: 1\nx1: 0\n").to_string(),
            "line 3, column 1: duplicate label `x1`"
        );
    }

    #[test]
    fn classification_files() {
        let r = reference_relation();
        let blocks = parse_classification_file("Y1: y1 y2 y6\nY2: y3 y4 y5\n", r.universes()).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].1.labels(), ["y1", "y2", "y6"]);
        assert_eq!(blocks[1].0, "Y2");
        let text = render_classification(&blocks);
        assert_eq!(parse_classification_file(&text, r.universes()).unwrap(), blocks);

        match parse_classification_file("Y1: y9\n", r.universes()) {
            Err(Error::Parse(e)) => {
                assert_eq!((e.line, e.column), (1, 5));
                assert_eq!(e.kind, ParseErrorKind::UnknownLabel("y9".into()));
            }
            other => panic!("{other:?}"),
        }
        match parse_classification_file("A: y1\n\nA: y2\n", r.universes()) {
            Err(Error::Parse(e)) => assert_eq!((e.line, e.kind), (3, ParseErrorKind::DuplicateBlock("A".into()))),
            other => panic!("{other:?}"),
        }
        assert!(parse_classification_file("", r.universes()).unwrap().is_empty());
    }

    #[test]
    fn subsets() {
        let r = reference_relation();
        let s = parse_subset("y3, y1", r.universes(), Side::V).unwrap();
        assert_eq!(s.labels(), ["y1", "y3"]);
        assert!(parse_subset("", r.universes(), Side::V).unwrap().is_empty());
        assert!(parse_subset("{}", r.universes(), Side::V).unwrap().is_empty());
        assert_eq!(parse_subset("{x2}", r.universes(), Side::U).unwrap().len(), 1);
        assert!(parse_subset("y7", r.universes(), Side::V).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(u in 1usize..6, v in 1usize..6, mask in any::<u64>()) {
            let universes = Arc::new(UniversePair::indexed(u, v).unwrap());
            let r = BinaryRelation::from_mask(universes, mask & ((1u64 << (u * v)) - 1));
            let doc = RelationDocument::from_relation(&r, "generated");
            let text = render_relation(&doc);
            prop_assert_eq!(parse_relation_file(&text).unwrap(), doc);
        }
    }
}
