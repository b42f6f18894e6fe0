use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rough_two::classification::{corollaries_report, measure_report, theorems_report, Claim};
use rough_two::io::report::{self, Node};
use rough_two::io::{
    emit_report, parse_classification_file, parse_relation_file, parse_subset, render_relation, AnalysisReport, Format,
    RelationDocument,
};
use rough_two::lab::generate::GeneratorConfig;
use rough_two::lab::properties::{property_campaign, verify_algebraic_properties, verify_relation_laws};
use rough_two::lab::tables::{check_relation_tables, check_type_tables_against, find_type_witness, SetOp, TypeTable};
use rough_two::lab::SubsetBudget;
use rough_two::{approximate, approximate_family, BinaryRelation, Classification, Error, Ratio, RoughType, Side};

#[derive(Parser)]
#[command(name = "rough-two", version, about = "Rough approximations over two universes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower and upper approximation, boundary and rough type of V-subsets.
    Approx {
        relation: PathBuf,
        /// Comma-separated V labels; repeat for several sets.
        #[arg(short, long = "set", required = true)]
        sets: Vec<String>,
    },
    /// Neighborhoods, solitary set, seriality and quotient partitions.
    Neighbors { relation: PathBuf },
    /// Approximate a classification of V; measures and theorem verdicts.
    Classify { relation: PathBuf, classes: PathBuf },
    /// Check the algebraic laws on a relation file or on generated relations.
    Verify(VerifyArgs),
    /// Type-table conformance and witness inventory.
    Tables(TablesArgs),
    /// Search for a relation and subsets realizing a type-table outcome.
    Witness(WitnessArgs),
    /// Emit a seeded random relation file.
    Gen(GenArgs),
}

#[derive(Args)]
struct Bounds {
    #[arg(long, default_value_t = 3)]
    max_u: usize,
    #[arg(long, default_value_t = 3)]
    max_v: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Relation to check; without it, relations are generated.
    relation: Option<PathBuf>,
    /// Every subset (and, when generating, every relation up to the bounds).
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Sample count: subset pairs for a relation file, relations otherwise.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest |U| of generated relations.
    #[arg(long)]
    max_u: Option<usize>,
    /// Largest |V| of generated relations.
    #[arg(long)]
    max_v: Option<usize>,
    /// Replacement type-table cells, one `<op> <left> <right>: <types...>` per line.
    #[arg(long)]
    table_overrides: Option<PathBuf>,
}

#[derive(Args)]
struct TablesArgs {
    #[command(flatten)]
    bounds: Bounds,
    /// Operation to check; both when omitted.
    #[arg(long)]
    op: Option<SetOp>,
    /// Check a single relation instead of sweeping the bounds.
    #[arg(long)]
    relation: Option<PathBuf>,
    #[arg(long)]
    table_overrides: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    op: SetOp,
    #[arg(long)]
    left: RoughType,
    #[arg(long)]
    right: RoughType,
    #[arg(long)]
    result: RoughType,
    #[command(flatten)]
    bounds: Bounds,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long = "u", default_value_t = 5)]
    u_size: usize,
    #[arg(long = "v", default_value_t = 6)]
    v_size: usize,
    /// Probability of each cell being 1, as a fraction such as `1/2`.
    #[arg(long, default_value = "1/2")]
    density: Ratio,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Sampled subset budget per generated relation.
const CAMPAIGN_PAIRS: usize = 50;
const CAMPAIGN_FAMILIES: usize = 50;

enum Failure {
    Input(String),
    Internal(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ExhaustiveCap { .. } | Error::Config(_) => Failure::Input(e.to_string()),
            other => Failure::Internal(other),
        }
    }
}

type Outcome = Result<(AnalysisReport, bool), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn input<T>(path: &Path, r: rough_two::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_relation(path: &Path) -> Result<BinaryRelation, Failure> {
    let doc = input(path, parse_relation_file(&read(path)?))?;
    Ok(doc.relation())
}

fn load_table(op: SetOp, path: Option<&Path>) -> Result<TypeTable, Failure> {
    let base = TypeTable::builtin(op);
    match path {
        Some(p) => input(p, base.with_overrides(&read(p)?)),
        None => Ok(base.clone()),
    }
}

fn ops(op: Option<SetOp>) -> Vec<SetOp> {
    op.map_or(vec![SetOp::Union, SetOp::Intersection], |o| vec![o])
}

fn approx_cmd(path: &Path, sets: &[String]) -> Outcome {
    let r = load_relation(path)?;
    let mut results = Vec::new();
    for s in sets {
        let y = parse_subset(s, r.universes(), Side::V).map_err(|e| Failure::Input(format!("--set {s}: {e}")))?;
        results.push(report::approximation(&y, &approximate(&r, &y)?));
    }
    let mut rep = AnalysisReport::new("approx");
    rep.push("relation", report::relation_summary(&r))
        .push("approximations", Node::List(results));
    Ok((rep, true))
}

fn neighbors_cmd(path: &Path) -> Outcome {
    let r = load_relation(path)?;
    let mut rep = AnalysisReport::new("neighbors");
    rep.push("relation", report::relation_summary(&r))
        .push("neighborhoods", report::neighborhoods(&r));
    Ok((rep, true))
}

fn classify_cmd(path: &Path, classes: &Path) -> Outcome {
    let r = load_relation(path)?;
    let blocks = input(classes, parse_classification_file(&read(classes)?, r.universes()))?;
    let f = input(classes, Classification::new(blocks, r.universes()))?;
    let fa = approximate_family(&r, &f)?;
    let mut claims = theorems_report(&r, &f)?;
    claims.extend(corollaries_report(&r, &f)?);
    claims.extend(measure_report(&fa));
    claims.sort();
    let tallies = Claim::THEOREMS
        .iter()
        .chain(&Claim::COROLLARIES)
        .chain(&Claim::MEASURES)
        .filter_map(|&c| {
            let (h, v, x) = claims.tally(c);
            (h + v + x > 0).then(|| {
                Node::map([
                    ("claim", Node::str(c.id())),
                    ("holds", Node::Int(h as u64)),
                    ("violated", Node::Int(v as u64)),
                    ("vacuous", Node::Int(x as u64)),
                ])
            })
        })
        .collect();
    let clean = claims.is_clean();
    let mut rep = AnalysisReport::new("classify");
    rep.push("relation", report::relation_summary(&r))
        .push("family", report::family(&fa))
        .push("claims", Node::List(tallies))
        .push("instances", report::theorem_entries(&claims, f.names()))
        .push("findings", report::theorem_violations(&claims, f.names()));
    Ok((rep, clean))
}

fn verify_cmd(args: &VerifyArgs) -> Outcome {
    if !args.exhaustive && args.samples.is_none() {
        return Err(Failure::Input("verify needs --exhaustive or --samples N".into()));
    }
    let mut rep = AnalysisReport::new("verify");
    let mut clean = true;
    let laws = match &args.relation {
        Some(path) => {
            if args.max_u.is_some() || args.max_v.is_some() {
                return Err(Failure::Input(
                    "--max-u/--max-v only apply to generated relations".into(),
                ));
            }
            let r = load_relation(path)?;
            let budget = match args.samples {
                None => SubsetBudget::Exhaustive,
                Some(n) => SubsetBudget::Sampled {
                    pairs: n,
                    families: n,
                    seed: args.seed,
                },
            };
            let mut laws = verify_algebraic_properties(&r, budget)?;
            laws.merge(verify_relation_laws(&r)?);
            rep.push("relation", report::relation_summary(&r));
            if r.v_len() <= rough_two::lab::tables::TABLE_SUBSET_LIMIT {
                let mut cells = Vec::new();
                for op in ops(None) {
                    let table = load_table(op, args.table_overrides.as_deref())?;
                    cells.extend(check_relation_tables(&r, op, &table)?);
                }
                clean &= cells.iter().all(|c| c.conforms());
                let outside: Vec<_> = cells.iter().filter(|c| !c.conforms()).cloned().collect();
                rep.push("table_violations", report::table_cells(&outside));
            }
            laws
        }
        None => {
            let (max_u, max_v) = match args.samples {
                None => (args.max_u.unwrap_or(3), args.max_v.unwrap_or(3)),
                Some(_) => (args.max_u.unwrap_or(8), args.max_v.unwrap_or(8)),
            };
            let (cfg, budget) = match args.samples {
                None => (
                    GeneratorConfig::exhaustive(max_u, max_v).up_to(),
                    SubsetBudget::Exhaustive,
                ),
                Some(n) => (
                    GeneratorConfig::random(max_u, max_v, Ratio::new(1, 2), args.seed, n).up_to(),
                    SubsetBudget::Sampled {
                        pairs: CAMPAIGN_PAIRS,
                        families: CAMPAIGN_FAMILIES,
                        seed: args.seed,
                    },
                ),
            };
            let relations = cfg.source()?.len();
            rep.push(
                "campaign",
                Node::map([
                    ("relations", Node::Int(relations)),
                    ("max_u", Node::Int(max_u as u64)),
                    ("max_v", Node::Int(max_v as u64)),
                    (
                        "mode",
                        Node::str(if args.exhaustive { "exhaustive" } else { "sampled" }),
                    ),
                    ("seed", Node::Int(args.seed)),
                ]),
            );
            property_campaign(&cfg, budget)?
        }
    };
    clean &= laws.passed();
    rep.push("laws", report::property_report(&laws));
    rep.push("passed", Node::Bool(clean));
    Ok((rep, clean))
}

fn tables_cmd(args: &TablesArgs) -> Outcome {
    let mut rep = AnalysisReport::new("tables");
    let mut clean = true;
    let single = args.relation.as_deref().map(load_relation).transpose()?;
    match &single {
        Some(r) => rep.push("relation", report::relation_summary(r)),
        None => rep.push(
            "bounds",
            Node::map([
                ("max_u", Node::Int(args.bounds.max_u as u64)),
                ("max_v", Node::Int(args.bounds.max_v as u64)),
            ]),
        ),
    };
    for op in ops(args.op) {
        let table = load_table(op, args.table_overrides.as_deref())?;
        let cells = match &single {
            Some(r) => check_relation_tables(r, op, &table)?,
            None => {
                let cfg = GeneratorConfig::exhaustive(args.bounds.max_u, args.bounds.max_v).up_to();
                check_type_tables_against(&cfg, op, &table)?
            }
        };
        clean &= cells.iter().all(|c| c.conforms());
        rep.push(
            op.to_string(),
            Node::map([
                ("ambiguous_cells", Node::Int(table.ambiguous_cells() as u64)),
                ("unambiguous_cells", Node::Int(table.unambiguous_cells() as u64)),
                ("conforms", Node::Bool(cells.iter().all(|c| c.conforms()))),
                ("findings", report::table_findings(&cells)),
                ("cells", report::table_cells(&cells)),
            ]),
        );
    }
    Ok((rep, clean))
}

fn witness_cmd(args: &WitnessArgs) -> Outcome {
    let cfg = GeneratorConfig::exhaustive(args.bounds.max_u, args.bounds.max_v).up_to();
    let found = find_type_witness(args.op, args.left, args.right, args.result, &cfg)?;
    let allowed = TypeTable::builtin(args.op)
        .allowed(args.left, args.right)
        .contains(args.result);
    let mut rep = AnalysisReport::new("witness");
    rep.push(
        "query",
        Node::map([
            ("op", Node::str(args.op.to_string())),
            ("left", Node::Int(u64::from(args.left.number()))),
            ("right", Node::Int(u64::from(args.right.number()))),
            ("result", Node::Int(u64::from(args.result.number()))),
            ("max_u", Node::Int(args.bounds.max_u as u64)),
            ("max_v", Node::Int(args.bounds.max_v as u64)),
            ("in_table", Node::Bool(allowed)),
        ]),
    );
    let ok = found.is_some();
    rep.push(
        "witness",
        found.map_or(Node::Undefined, |w| report::witness(args.op, &w)),
    );
    Ok((rep, ok))
}

fn gen_cmd(args: &GenArgs) -> Result<String, Failure> {
    let cfg = GeneratorConfig::random(args.u_size, args.v_size, args.density, args.seed, 1);
    let r = cfg.source()?.get(0);
    let doc = RelationDocument::from_relation(&r, "generated");
    Ok(format!(
        "# {}x{} relation, density {}, seed {}\n{}",
        args.u_size,
        args.v_size,
        args.density,
        args.seed,
        render_relation(&doc)
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Approx { relation, sets } => approx_cmd(relation, sets),
        Command::Neighbors { relation } => neighbors_cmd(relation),
        Command::Classify { relation, classes } => classify_cmd(relation, classes),
        Command::Verify(a) => verify_cmd(a),
        Command::Tables(a) => tables_cmd(a),
        Command::Witness(a) => witness_cmd(a),
        Command::Gen(a) => match gen_cmd(a) {
            Ok(text) => {
                print!("{text}");
                return ExitCode::SUCCESS;
            }
            Err(e) => Err(e),
        },
    };
    match outcome {
        Ok((rep, ok)) => {
            print!("{}", emit_report(&rep, cli.format));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
