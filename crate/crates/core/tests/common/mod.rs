#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

const REL: &str = "reference.rel";

/// Every golden command. Output files live in `tests/golden/<name>`; for
/// exit code 2 the golden holds stderr, otherwise stdout.
pub const CASES: &[Case] = &[
    Case {
        name: "approx.txt",
        args: &[
            "approx", REL, "--set", "y1,y2,y4", "--set", "y3,y5,y6", "--set", "y5", "--set", "",
        ],
        exit: 0,
    },
    Case {
        name: "approx.json",
        args: &["--format", "json", "approx", REL, "--set", "y1,y2,y4", "--set", "y2"],
        exit: 0,
    },
    Case {
        name: "neighbors.txt",
        args: &["neighbors", REL],
        exit: 0,
    },
    Case {
        name: "neighbors.json",
        args: &["neighbors", REL, "--format", "json"],
        exit: 0,
    },
    Case {
        name: "classify_cover.txt",
        args: &["classify", REL, "cover.cls"],
        exit: 0,
    },
    Case {
        name: "classify_two_blocks.json",
        args: &["--format", "json", "classify", REL, "two_blocks.cls"],
        exit: 0,
    },
    Case {
        name: "classify_three_blocks.txt",
        args: &["classify", REL, "three_blocks.cls"],
        exit: 0,
    },
    Case {
        name: "verify.txt",
        args: &["verify", REL, "--exhaustive"],
        exit: 0,
    },
    Case {
        name: "verify_sampled.json",
        args: &["--format", "json", "verify", REL, "--samples", "25", "--seed", "7"],
        exit: 0,
    },
    Case {
        name: "verify_generated.txt",
        args: &[
            "verify",
            "--samples",
            "20",
            "--seed",
            "3",
            "--max-u",
            "5",
            "--max-v",
            "5",
        ],
        exit: 0,
    },
    Case {
        name: "verify_mutant.txt",
        args: &["verify", REL, "--exhaustive", "--table-overrides", "mutant_union.table"],
        exit: 1,
    },
    Case {
        name: "tables.txt",
        args: &["tables", "--max-u", "2", "--max-v", "3"],
        exit: 0,
    },
    Case {
        name: "tables_relation.json",
        args: &["--format", "json", "tables", "--relation", REL, "--op", "intersection"],
        exit: 0,
    },
    Case {
        name: "tables_mutant.txt",
        args: &[
            "tables",
            "--relation",
            REL,
            "--op",
            "union",
            "--table-overrides",
            "mutant_union.table",
        ],
        exit: 1,
    },
    Case {
        name: "witness.json",
        args: &[
            "--format",
            "json",
            "witness",
            "--op",
            "intersection",
            "--left",
            "3",
            "--right",
            "3",
            "--result",
            "4",
            "--max-u",
            "4",
            "--max-v",
            "4",
        ],
        exit: 0,
    },
    Case {
        name: "witness_missing.txt",
        args: &[
            "witness", "--op", "union", "--left", "1", "--right", "1", "--result", "2",
        ],
        exit: 1,
    },
    Case {
        name: "gen.rel",
        args: &["gen", "--u", "5", "--v", "6", "--seed", "42"],
        exit: 0,
    },
    Case {
        name: "err_short_row.txt",
        args: &["neighbors", "short_row.rel"],
        exit: 2,
    },
    Case {
        name: "err_no_header.txt",
        args: &["approx", "no_header.rel", "--set", "y1"],
        exit: 2,
    },
    Case {
        name: "err_bad_cell.txt",
        args: &["neighbors", "bad_cell.rel"],
        exit: 2,
    },
    Case {
        name: "err_unknown_label.txt",
        args: &["classify", REL, "unknown_label.cls"],
        exit: 2,
    },
    Case {
        name: "err_gap.txt",
        args: &["classify", REL, "gap.cls"],
        exit: 2,
    },
    Case {
        name: "err_bad_set.txt",
        args: &["approx", REL, "--set", "y1,y7"],
        exit: 2,
    },
    Case {
        name: "err_missing_file.txt",
        args: &["neighbors", "absent.rel"],
        exit: 2,
    },
    Case {
        name: "err_verify_mode.txt",
        args: &["verify", REL],
        exit: 2,
    },
];

fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

/// Runs one case; `Err` describes the first mismatch. With
/// `UPDATE_GOLDEN=1` the golden file is rewritten instead of compared.
pub fn run_case(case: &Case) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_rough-two"))
        .args(case.args)
        .current_dir(dir("data"))
        .output()
        .map_err(|e| format!("{}: cannot run binary: {e}", case.name))?;
    let code = out.status.code().unwrap_or(-1);
    if code != case.exit {
        return Err(format!(
            "{}: exit {code}, expected {}; stderr: {}",
            case.name,
            case.exit,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let got = if case.exit == 2 { out.stderr } else { out.stdout };
    let path = dir("golden").join(case.name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(dir("golden")).unwrap();
        fs::write(&path, &got).unwrap();
        return Ok(());
    }
    let want = fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if got != want {
        return Err(format!(
            "{}: output differs from golden\n--- got ---\n{}",
            case.name,
            String::from_utf8_lossy(&got)
        ));
    }
    Ok(())
}
