//! File formats and report serialization.

pub mod format;
pub mod report;

pub use format::{
    parse_classification_file, parse_relation_file, parse_subset, render_classification, render_relation, ParseError,
    ParseErrorKind, RelationDocument,
};
pub use report::{emit_report, AnalysisReport, Format, Node, SCHEMA_VERSION};
