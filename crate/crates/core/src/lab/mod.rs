//! Verification engine: relation generators, algebraic-law campaigns,
//! union/intersection type tables and witness search.

pub mod generate;
pub mod properties;
pub mod tables;

pub use generate::{generate_relations, Dims, GeneratorConfig, Mode, RelationSource};
pub use properties::{
    exact_set_witness, property_campaign, reconstruct_relation, reconstruct_relation_from_lower,
    verify_algebraic_properties, verify_relation_laws, verify_serial_iff, Law, PropertyReport, SubsetBudget,
};
pub use tables::{
    check_relation_tables, check_type_tables, check_type_tables_against, find_type_witness, SetOp, TableCellFinding,
    TypeSet, TypeTable, Witness,
};
