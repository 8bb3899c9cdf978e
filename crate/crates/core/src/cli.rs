//! The `tworay` command line.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::lemmas::{verify_lemmas, LemmaId, DEFAULT_BUDGET};
use crate::census::census;
use crate::check::{check_all, CheckOptions};
use crate::correspondence::{admissible_lemma, ancestry, cross_check_extension, derive_structure, extend_ds};
use crate::error::Error;
use crate::quiver::{BoundQuiver, Vertex};
use crate::system::{enumerate, Bounds, DefiningSystem};

#[derive(Parser, Debug)]
#[command(name = "tworay", version, about = "Defining systems, their quivers and combinatorial structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the defining-system constraints.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the bound quiver.
    Quiver {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = QuiverFormat::Text)]
        format: QuiverFormat,
        #[arg(long)]
        json: bool,
    },
    /// Print the combinatorial structure and its axiom report.
    Structure {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List admissible indices.
    Admissible {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Extend by an admissible index (`x:i:j` or `z:i:j`).
    Extend {
        file: PathBuf,
        index: String,
        #[arg(long)]
        json: bool,
    },
    /// A chain of admissible extensions from the fundamental system.
    Ancestry {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Count the Auslander–Reiten components.
    Census {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check the homological lemmas with exact linear algebra.
    Verify {
        file: PathBuf,
        /// Comma-separated subset of tau,end,ext,homx,homrx,homr,lfund,paths,onepoint.
        #[arg(long, value_delimiter = ',')]
        lemmas: Option<Vec<String>>,
        /// Largest algebra dimension to attempt.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// List every defining system within bounds, or check them all.
    Enumerate {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        max_p: u32,
        #[arg(long)]
        max_q: u32,
        #[arg(long)]
        max_t: usize,
        #[arg(long)]
        check_all: bool,
        /// Largest algebra dimension for the lemma suite.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Skip the lemma suite.
        #[arg(long)]
        no_lemmas: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum QuiverFormat {
    Text,
    Dot,
    Json,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn failed(stdout: String) -> Outcome {
        Outcome { code: 1, stdout, stderr: String::new() }
    }

    fn usage(stderr: String) -> Outcome {
        Outcome { code: 2, stdout: String::new(), stderr }
    }

    fn verdict(ok: bool, stdout: String) -> Outcome {
        if ok {
            Outcome::ok(stdout)
        } else {
            Outcome::failed(stdout)
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn read(file: &PathBuf) -> Result<String, Outcome> {
    std::fs::read_to_string(file).map_err(|e| Outcome::usage(format!("cannot read {}: {e}\n", file.display())))
}

/// Reads and validates; an invalid system is a validation failure (exit 1).
fn load(file: &PathBuf, json: bool) -> Result<DefiningSystem, Outcome> {
    let text = read(file)?;
    DefiningSystem::from_json(&text).map_err(|e| error_outcome(&e, json))
}

fn error_outcome(e: &Error, json: bool) -> Outcome {
    if json {
        let v = match e {
            Error::Invalid(report) => json!({"error": "invalid", "report": report}),
            other => json!({"error": other.to_string()}),
        };
        Outcome::failed(pretty(&v))
    } else {
        Outcome::failed(format!("error: {e}\n"))
    }
}

fn names(vs: impl IntoIterator<Item = Vertex>) -> Vec<String> {
    vs.into_iter().map(|v| v.cli_name()).collect()
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome::usage(text),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) | Err(o) => o,
    }
}

fn dispatch(command: Command) -> Result<Outcome, Outcome> {
    Ok(match command {
        Command::Validate { file, json } => {
            let text = read(&file)?;
            let ds = DefiningSystem::from_json_unchecked(&text).map_err(|e| error_outcome(&e, json))?;
            let report = ds.validate();
            let out = if json { pretty(&json!(report)) } else { format!("{report}\n") };
            Outcome::verdict(report.ok, out)
        }
        Command::Quiver { file, format, json } => {
            let ds = load(&file, json)?;
            let bq = BoundQuiver::build(&ds);
            let format = if json { QuiverFormat::Json } else { format };
            Outcome::ok(match format {
                QuiverFormat::Dot => bq.to_dot(),
                QuiverFormat::Json => pretty(&bq.to_json_value()),
                QuiverFormat::Text => quiver_text(&bq),
            })
        }
        Command::Structure { file, json } => {
            let ds = load(&file, json)?;
            let d = derive_structure(&ds);
            let report = d.cs.check_axioms();
            let cs = d.cs.map_indices(|v| v.cli_name());
            let out = if json {
                pretty(&json!({"structure": cs.to_json_value(), "axioms": report.to_json_value()}))
            } else {
                let mut s = String::new();
                let v = cs.to_json_value();
                for key in ["I", "phi", "rho", "psi", "l"] {
                    s.push_str(&format!("{key}: {}\n", v[key]));
                }
                s.push_str(&format!("{report}\n"));
                s
            };
            Outcome::verdict(report.all_pass(), out)
        }
        Command::Admissible { file, json } => {
            let ds = load(&file, json)?;
            let from_structure = derive_structure(&ds).cs.admissible_set().map_err(|e| error_outcome(&e, json))?;
            let from_vertices = admissible_lemma(&ds);
            let agree = from_structure == from_vertices;
            let out = if json {
                pretty(&json!({
                    "admissible": names(from_structure.iter().copied()),
                    "characterization": names(from_vertices.iter().copied()),
                    "agree": agree,
                }))
            } else {
                let mut s = names(from_structure.iter().copied()).join("\n");
                s.push('\n');
                if !agree {
                    s.push_str(&format!("characterization disagrees: {}\n", names(from_vertices).join(", ")));
                }
                s
            };
            Outcome::verdict(agree, out)
        }
        Command::Extend { file, index, json } => {
            let ds = load(&file, json)?;
            let y: Vertex = index.parse().map_err(|e: Error| Outcome::usage(format!("{e}\n")))?;
            let step = extend_ds(&ds, y).map_err(|e| error_outcome(&e, json))?;
            let diff = cross_check_extension(&ds, y).map_err(|e| error_outcome(&e, json))?;
            let out = if json {
                pretty(&json!({
                    "index": y.cli_name(),
                    "new_index": step.new_index.cli_name(),
                    "system": step.system,
                    "structure_agrees": diff.is_empty(),
                    "differences": diff,
                }))
            } else {
                let mut s = format!("{}\nnew index {}\n", step.system.to_json(), step.new_index.cli_name());
                for d in &diff {
                    s.push_str(&format!("difference: {d}\n"));
                }
                s
            };
            Outcome::verdict(diff.is_empty(), out)
        }
        Command::Ancestry { file, json } => {
            let ds = load(&file, json)?;
            let a = ancestry(&ds).map_err(|e| error_outcome(&e, json))?;
            let out = if json {
                pretty(&json!({
                    "start": a.start,
                    "steps": a.steps.iter().map(|s| json!({
                        "index": s.index.cli_name(),
                        "new_index": s.new_index.cli_name(),
                        "system": s.system,
                    })).collect::<Vec<_>>(),
                }))
            } else {
                let mut s = format!("start {}\n", a.start.to_json());
                for (k, step) in a.steps.iter().enumerate() {
                    s.push_str(&format!("{:>3}. {} -> {}\n", k + 1, step.index.cli_name(), step.system.to_json()));
                }
                s
            };
            Outcome::verdict(a.end() == &ds, out)
        }
        Command::Census { file, json } => {
            let ds = load(&file, json)?;
            let c = census(&ds).map_err(|e| error_outcome(&e, json))?;
            let out = if json { pretty(&c.to_json_value()) } else { c.to_string() };
            Outcome::ok(out)
        }
        Command::Verify { file, lemmas, budget, json } => {
            let ds = load(&file, json)?;
            let ids = match lemmas {
                None => LemmaId::ALL.to_vec(),
                Some(list) => list
                    .iter()
                    .map(|s| s.trim().parse::<LemmaId>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| Outcome::usage(format!("{e}\n")))?,
            };
            let report = verify_lemmas(&ds, &ids, budget).map_err(|e| error_outcome(&e, json))?;
            let out = if json { pretty(&json!(report)) } else { report.to_text() };
            Outcome::verdict(report.ok() && !report.skipped, out)
        }
        Command::Enumerate { max_n, max_p, max_q, max_t, check_all: check, budget, no_lemmas, json } => {
            let bounds = Bounds::new(max_n, max_p, max_q, max_t);
            if check {
                let report = check_all(CheckOptions { bounds, budget, lemmas: !no_lemmas });
                let out = if json { pretty(&json!(report)) } else { report.to_text() };
                Outcome::verdict(report.ok(), out)
            } else {
                let mut out = String::new();
                for ds in enumerate(bounds) {
                    out.push_str(&ds.to_json());
                    out.push('\n');
                }
                Outcome::ok(out)
            }
        }
    })
}

fn quiver_text(bq: &BoundQuiver) -> String {
    let [r1, r2, r3, r4] = bq.relation_counts();
    let mut s = format!(
        "{} vertices, {} arrows, {} relations (R1 {r1}, R2 {r2}, R3 {r3}, R4 {r4})\n",
        bq.vertices().len(),
        bq.arrows().len(),
        bq.relations().len()
    );
    s.push_str(&format!("vertices: {}\n", names(bq.vertices().iter().copied()).join(" ")));
    for a in bq.arrows() {
        s.push_str(&format!("{}: {} -> {}\n", a.arrow.math_name(), a.source.cli_name(), a.target.cli_name()));
    }
    for r in bq.relations() {
        s.push_str(&format!("{r}\n"));
    }
    s
}
