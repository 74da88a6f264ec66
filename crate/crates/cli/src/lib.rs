//! Batch front end: JSON experiment configs in, JSON reports and CSV
//! profiles out.

pub mod commands;
pub mod config;
pub mod expr;
pub mod report;
pub mod suite;

use std::path::Path;
use std::time::Instant;

use report::{ErrorInfo, Report};

pub const EXIT_OK: i32 = 0;
/// A suite ran but at least one check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;

pub const COMMANDS: [&str; 8] = ["norm", "vmoa", "semigroup-flow", "continuity", "condition", "volterra", "gamma", "suite"];

/// Runs one experiment and writes its report into `out`.
pub fn run(command: &str, config_path: &Path, out: &Path) -> i32 {
    let exp = match config::load(command, config_path) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_SCHEMA;
        }
    };
    if let Err(e) = std::fs::create_dir_all(out) {
        eprintln!("error: cannot create {}: {e}", out.display());
        return EXIT_COMPUTATION;
    }
    let start = Instant::now();
    let outcome = commands::execute(&exp);
    let wall_time = start.elapsed().as_secs_f64();
    let mut report = Report {
        tool_version: report::TOOL_VERSION,
        command: exp.command(),
        config: serde_json::to_value(&exp).expect("config serializes"),
        wall_time,
        results: serde_json::Value::Null,
        warnings: Vec::new(),
        error: None,
    };
    let code = match outcome {
        Ok(o) => {
            report.results = o.results;
            report.warnings = o.warnings;
            if let Err(e) = report::write_profile_sets(out, &o.profiles) {
                eprintln!("error: cannot write profiles: {e}");
                return EXIT_COMPUTATION;
            }
            if o.failed {
                EXIT_CHECK_FAILED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            report.error = Some(ErrorInfo::from(&e));
            EXIT_COMPUTATION
        }
    };
    if exp.command() == "suite" {
        print!("{}", commands::suite_table(&report.results));
    }
    match report::write_report(out, &report) {
        Ok(path) => eprintln!("wrote {}", path.display()),
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            return EXIT_COMPUTATION;
        }
    }
    code
}
