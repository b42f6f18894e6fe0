//! Analysis reports and their JSON and text renderings.
//!
//! A report is an ordered tree of [`Node`]s. JSON output sorts object keys;
//! text output keeps insertion order and is meant for people. Both are
//! deterministic: the same report always serializes to the same bytes.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::approx::ApproxResult;
use crate::bits::BitSet;
use crate::classification::{FamilyApprox, TheoremInstance, TheoremReport};
use crate::lab::properties::PropertyReport;
use crate::lab::tables::{SetOp, TableCellFinding, Witness};
use crate::measure::decimal;
use crate::relation::{BinaryRelation, Partition, Side, Subset};
use crate::Ratio;

pub const SCHEMA_VERSION: u64 = 1;
const DECIMAL_PLACES: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    /// A value that does not exist, e.g. an accuracy with zero denominator.
    Undefined,
    Bool(bool),
    Int(u64),
    Str(String),
    Ratio(Ratio),
    /// Labels in universe order.
    Set(Vec<String>),
    List(Vec<Node>),
    /// A list whose emptiness is itself a result.
    Findings(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn map<K: Into<String>>(entries: impl IntoIterator<Item = (K, Node)>) -> Node {
        Node::Map(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn str(s: impl Into<String>) -> Node {
        Node::Str(s.into())
    }

    pub fn set(s: &Subset) -> Node {
        Node::Set(s.labels().into_iter().map(String::from).collect())
    }

    fn to_json(&self) -> Value {
        match self {
            Node::Undefined => Value::Null,
            Node::Bool(b) => json!(b),
            Node::Int(n) => json!(n),
            Node::Str(s) => json!(s),
            Node::Ratio(r) => json!({
                "num": r.numer(),
                "den": r.denom(),
                "decimal": decimal(r, DECIMAL_PLACES),
            }),
            Node::Set(labels) => json!(labels),
            Node::List(items) | Node::Findings(items) => Value::Array(items.iter().map(Node::to_json).collect()),
            Node::Map(entries) => Value::Object(
                entries
                    .iter()
                    .map(|(k, v)| (k.clone(), v.to_json()))
                    .collect::<Map<_, _>>(),
            ),
        }
    }

    fn inline(&self) -> Option<String> {
        Some(match self {
            Node::Undefined => "undefined".into(),
            Node::Bool(b) => if *b { "yes" } else { "no" }.into(),
            Node::Int(n) => n.to_string(),
            Node::Str(s) => s.clone(),
            Node::Ratio(r) => format!("{}/{} = {}", r.numer(), r.denom(), decimal(r, DECIMAL_PLACES)),
            Node::Set(labels) => format!("{{{}}}", labels.join(", ")),
            Node::Findings(items) if items.is_empty() => "no findings".into(),
            Node::List(items) if items.is_empty() => "none".into(),
            Node::List(items)
                if items
                    .iter()
                    .all(|i| !matches!(i, Node::Map(_) | Node::List(_) | Node::Findings(_))) =>
            {
                items.iter().filter_map(Node::inline).collect::<Vec<_>>().join(", ")
            }
            _ => return None,
        })
    }

    fn write_text(&self, out: &mut String, indent: usize) {
        let pad = " ".repeat(indent);
        match self {
            Node::Map(entries) => {
                for (k, v) in entries {
                    match v.inline() {
                        Some(s) => {
                            let _ = writeln!(out, "{pad}{k}: {s}");
                        }
                        None => {
                            let _ = writeln!(out, "{pad}{k}:");
                            v.write_text(out, indent + 2);
                        }
                    }
                }
            }
            Node::List(items) | Node::Findings(items) => {
                for item in items {
                    match item.inline() {
                        Some(s) => {
                            let _ = writeln!(out, "{pad}- {s}");
                        }
                        None => {
                            let mut inner = String::new();
                            item.write_text(&mut inner, indent + 2);
                            // replace the first line's indentation with the bullet
                            let _ = write!(out, "{pad}- {}", &inner[indent + 2..]);
                        }
                    }
                }
            }
            other => {
                let _ = writeln!(out, "{pad}{}", other.inline().unwrap_or_default());
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// The structured result of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub command: String,
    pub body: Vec<(String, Node)>,
}

impl AnalysisReport {
    pub fn new(command: impl Into<String>) -> Self {
        AnalysisReport {
            command: command.into(),
            body: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, node: Node) -> &mut Self {
        self.body.push((key.into(), node));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        self.body.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn tree(&self) -> Node {
        let mut entries = vec![
            ("schema_version".to_string(), Node::Int(SCHEMA_VERSION)),
            ("command".to_string(), Node::str(&self.command)),
        ];
        entries.extend(self.body.iter().cloned());
        Node::Map(entries)
    }
}

pub fn emit_report(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.tree().to_json()).expect("reports are valid JSON");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            report.tree().write_text(&mut s, 0);
            s
        }
    }
}

fn partition_node(p: &Partition) -> Node {
    Node::List(p.blocks().iter().map(Node::set).collect())
}

/// Dimensions, solitary set, seriality and the two quotient partitions.
pub fn relation_summary(r: &BinaryRelation) -> Node {
    let (pu, pv) = r.quotient_partitions();
    Node::map([
        ("u_size", Node::Int(r.u_len() as u64)),
        ("v_size", Node::Int(r.v_len() as u64)),
        ("solitary", Node::set(&r.solitary_set())),
        ("serial", Node::Bool(r.is_serial())),
        (
            "partitions",
            Node::map([("U", partition_node(&pu)), ("V", partition_node(&pv))]),
        ),
    ])
}

/// Right neighborhoods of every `x` and left neighborhoods of every `y`.
pub fn neighborhoods(r: &BinaryRelation) -> Node {
    let universes = r.universes();
    let side = |side: Side, f: &dyn Fn(&str) -> Subset| {
        Node::Map(
            universes
                .labels(side)
                .iter()
                .map(|l| (l.clone(), Node::set(&f(l))))
                .collect(),
        )
    };
    Node::map([
        (
            "right",
            side(Side::U, &|x| r.right_neighborhood(x).expect("known label")),
        ),
        ("left", side(Side::V, &|y| r.left_neighborhood(y).expect("known label"))),
    ])
}

pub fn approximation(query: &Subset, a: &ApproxResult) -> Node {
    Node::map([
        ("set", Node::set(query)),
        ("lower", Node::set(&a.lower)),
        ("upper", Node::set(&a.upper)),
        ("boundary", Node::set(&a.boundary)),
        ("type", Node::Int(u64::from(a.rough_type.number()))),
        ("type_name", Node::str(a.rough_type.name())),
    ])
}

pub fn family(fa: &FamilyApprox) -> Node {
    let f = fa.classification();
    let blocks = f
        .names()
        .iter()
        .zip(f.blocks())
        .zip(fa.lowers().iter().zip(fa.uppers()))
        .map(|((name, block), (lower, upper))| {
            let boundary = upper.difference(lower).expect("same universe");
            Node::map([
                ("name", Node::str(name)),
                ("set", Node::set(block)),
                ("lower", Node::set(lower)),
                ("upper", Node::set(upper)),
                ("boundary", Node::set(&boundary)),
            ])
        })
        .collect();
    let q = fa.quality();
    Node::map([
        ("blocks", Node::List(blocks)),
        ("accuracy", fa.accuracy().map_or(Node::Undefined, Node::Ratio)),
        ("quality", Node::Ratio(q.verbatim)),
        ("quality_u", Node::Ratio(q.u_normalized)),
        ("definable", Node::Bool(fa.is_r_definable())),
    ])
}

fn instance_nodes<'a>(entries: impl Iterator<Item = &'a TheoremInstance>, names: &[String]) -> Vec<Node> {
    entries
        .map(|e| {
            Node::map([
                ("claim", Node::str(e.claim.id())),
                (
                    "blocks",
                    Node::Set(e.indices.iter().map(|&i| names[i].clone()).collect()),
                ),
                ("hypothesis", Node::Bool(e.hypothesis)),
                ("conclusion", Node::Bool(e.conclusion)),
                ("verdict", Node::str(e.verdict.to_string())),
            ])
        })
        .collect()
}

/// Every instance, block indices rendered as block names.
pub fn theorem_entries(report: &TheoremReport, names: &[String]) -> Node {
    Node::List(instance_nodes(report.entries.iter(), names))
}

/// Only the violated instances.
pub fn theorem_violations(report: &TheoremReport, names: &[String]) -> Node {
    Node::Findings(instance_nodes(report.violations(), names))
}

pub fn property_report(report: &PropertyReport) -> Node {
    Node::List(
        report
            .records
            .iter()
            .map(|rec| {
                let violations = rec
                    .violations
                    .iter()
                    .map(|v| {
                        Node::map([
                            ("relation", Node::str(&v.relation)),
                            ("subsets", Node::List(v.subsets.iter().map(Node::str).collect())),
                            ("expected", Node::str(&v.expected)),
                            ("got", Node::str(&v.got)),
                        ])
                    })
                    .collect();
                Node::map([
                    ("law", Node::str(rec.law.id())),
                    ("instances", Node::Int(rec.instances)),
                    ("violation_count", Node::Int(rec.violation_count)),
                    ("violations", Node::Findings(violations)),
                ])
            })
            .collect(),
    )
}

fn bits_labels(r: &BinaryRelation, bits: &BitSet) -> Node {
    Node::set(&r.v_subset(bits.clone()))
}

pub fn witness(op: SetOp, w: &Witness) -> Node {
    let r = &w.relation;
    let (tx, ty, tz) = w.types(op);
    let rows = r
        .rows()
        .iter()
        .zip(r.universes().labels(Side::U))
        .map(|(row, l)| (l.clone(), Node::str(format!("{row:?}"))))
        .collect();
    Node::map([
        ("u_size", Node::Int(r.u_len() as u64)),
        ("v_size", Node::Int(r.v_len() as u64)),
        ("rows", Node::Map(rows)),
        ("x", bits_labels(r, &w.x)),
        ("y", bits_labels(r, &w.y)),
        ("result", bits_labels(r, &op.apply(&w.x, &w.y))),
        (
            "types",
            Node::List(vec![
                Node::Int(u64::from(tx.number())),
                Node::Int(u64::from(ty.number())),
                Node::Int(u64::from(tz.number())),
            ]),
        ),
    ])
}

fn type_list(t: crate::lab::tables::TypeSet) -> Node {
    Node::List(t.numbers().into_iter().map(|n| Node::Int(u64::from(n))).collect())
}

/// Per-cell conformance and witness inventory.
pub fn table_cells(findings: &[TableCellFinding]) -> Node {
    Node::List(
        findings
            .iter()
            .map(|f| {
                Node::map([
                    ("op", Node::str(f.op.to_string())),
                    ("left", Node::Int(u64::from(f.left.number()))),
                    ("right", Node::Int(u64::from(f.right.number()))),
                    ("instances", Node::Int(f.instances)),
                    ("allowed", type_list(f.allowed)),
                    ("observed", type_list(f.observed)),
                    ("conforms", Node::Bool(f.conforms())),
                    (
                        "witnesses",
                        Node::List(
                            f.witnesses
                                .iter()
                                .map(|(t, w)| {
                                    Node::map([
                                        ("result_type", Node::Int(u64::from(t.number()))),
                                        ("witness", witness(f.op, w)),
                                    ])
                                })
                                .collect(),
                        ),
                    ),
                ])
            })
            .collect(),
    )
}

/// Out-of-table outcomes and, for ambiguous cells, unrealized alternatives.
pub fn table_findings(findings: &[TableCellFinding]) -> Node {
    let mut out = Vec::new();
    for f in findings {
        let cell = |kind: &str, types| {
            Node::map([
                ("kind", Node::str(kind)),
                ("left", Node::Int(u64::from(f.left.number()))),
                ("right", Node::Int(u64::from(f.right.number()))),
                ("types", type_list(types)),
            ])
        };
        if !f.unexpected().is_empty() {
            out.push(cell("outside-table", f.unexpected()));
        }
        if f.allowed.len() > 1 && !f.unrealized().is_empty() {
            out.push(cell("unrealized-alternative", f.unrealized()));
        }
    }
    Node::Findings(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::{approximate_family, Classification};
    use crate::testutil::reference_relation;

    fn example_report() -> AnalysisReport {
        let r = reference_relation();
        let blocks = vec![
            r.v_subset_of(["y1", "y2", "y4"]).unwrap(),
            r.v_subset_of(["y3", "y5", "y6"]).unwrap(),
        ];
        let f = Classification::from_blocks(blocks, r.universes()).unwrap();
        let fa = approximate_family(&r, &f).unwrap();
        let mut rep = AnalysisReport::new("classify");
        rep.push("relation", relation_summary(&r)).push("family", family(&fa));
        rep
    }

    #[test]
    fn accuracy_json() {
        let json = emit_report(&example_report(), Format::Json);
        let compact: String = json.split_whitespace().collect();
        assert!(
            compact.contains(r#""accuracy":{"decimal":"0.250000","den":4,"num":1}"#),
            "{json}"
        );
        assert!(compact.contains(r#""quality":{"decimal":"0.333333","den":3,"num":1}"#));
        assert!(compact.contains(r#""quality_u":{"decimal":"0.400000","den":5,"num":2}"#));
        assert!(compact.contains(r#""schema_version":1"#));
        let v: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["family"]["blocks"][1]["lower"], json!(["x2"]));
        assert_eq!(
            v["relation"]["partitions"]["U"],
            json!([["x1", "x5"], ["x2"], ["x3"], ["x4"]])
        );
    }

    #[test]
    fn keys_sorted() {
        let json = emit_report(&example_report(), Format::Json);
        let v: Value = serde_json::from_str(&json).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let first_key = json.lines().nth(1).unwrap().trim();
        assert!(first_key.starts_with("\"command\""));
    }

    #[test]
    fn empty_findings() {
        let mut rep = AnalysisReport::new("t");
        rep.push("findings", Node::Findings(vec![]));
        assert!(emit_report(&rep, Format::Json).contains("\"findings\": []"));
        assert!(emit_report(&rep, Format::Text).contains("findings: no findings"));
    }

    #[test]
    fn deterministic() {
        for fmt in [Format::Json, Format::Text] {
            assert_eq!(emit_report(&example_report(), fmt), emit_report(&example_report(), fmt));
        }
    }

    #[test]
    fn text_layout() {
        let text = emit_report(&example_report(), Format::Text);
        assert!(text.starts_with("schema_version: 1\ncommand: classify\n"));
        assert!(text.contains("  accuracy: 1/4 = 0.250000\n"), "{text}");
        assert!(text.contains("    - name: Y2\n      set: {y3, y5, y6}\n"), "{text}");
        assert!(text.contains("    U: {x1, x5}, {x2}, {x3}, {x4}\n"), "{text}");
    }
}
