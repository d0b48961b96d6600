use std::io::{self, Write};
use std::path::PathBuf;
use std::process;
use std::time::Instant;

use clap::{Parser, Subcommand};
use edist::commands::{self, Flavor, Outcome};
use edist::runlog::{self, RunRecord};
use edist_core::gen::{GenProfile, KappaKind, MapKind, Mutation, SpaceKind};
use edist_core::solver::TheoremId;

#[derive(Debug, Parser)]
#[command(name = "edist", version)]
#[command(
    about = "Decide distance axioms, MT gauges, hyperspace metrics and fixed-point hypotheses on finite instances"
)]
struct Cli {
    /// Append one JSON record per run to this file.
    #[arg(long, global = true)]
    log: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify kappa against the distance axioms.
    Check { file: PathBuf },
    /// Decide the ten MT characterizations for mu.
    CheckMt { file: PathBuf },
    /// Distance between two labelled point sets.
    Dist {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<String>,
        #[arg(long, value_enum, default_value = "dkappa")]
        flavor: Flavor,
    },
    /// Run the greedy orbit from a start point.
    Solve {
        file: PathBuf,
        #[arg(long)]
        x0: String,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Check a theorem's hypotheses and conclusion.
    Verify {
        #[arg(required_unless_present = "dir", conflicts_with = "dir")]
        file: Option<PathBuf>,
        #[arg(long, value_parser = parse::<TheoremId>)]
        theorem: TheoremId,
        /// Verify every .json file in this directory.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Generate an instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        n: Option<usize>,
        /// `key=value` pairs as recorded in an instance's provenance.
        #[arg(long)]
        profile: Option<String>,
        #[arg(long, value_parser = parse::<TheoremId>)]
        theorem: Option<TheoremId>,
        #[arg(long, value_parser = parse::<KappaKind>)]
        kappa: Option<KappaKind>,
        #[arg(long, value_parser = parse::<MapKind>)]
        map: Option<MapKind>,
        #[arg(long, value_parser = parse::<SpaceKind>)]
        space: Option<SpaceKind>,
        #[arg(long, value_parser = parse::<Mutation>)]
        mutation: Option<Mutation>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse<T: std::str::FromStr<Err = edist_core::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: edist_core::Error| e.to_string())
}

fn run(command: &Command) -> (&'static str, Outcome) {
    match command {
        Command::Check { file } => ("check", commands::check(file)),
        Command::CheckMt { file } => ("check-mt", commands::check_mt(file)),
        Command::Dist { file, a, b, flavor } => ("dist", commands::dist(file, a, b, *flavor)),
        Command::Solve { file, x0, max_iter } => ("solve", commands::solve(file, x0, *max_iter)),
        Command::Verify { file, theorem, dir } => match (file, dir) {
            (_, Some(dir)) => ("verify", commands::verify_dir(dir, *theorem)),
            (Some(file), None) => ("verify", commands::verify(file, *theorem)),
            (None, None) => unreachable!("clap requires a file or --dir"),
        },
        Command::Gen {
            seed,
            n,
            profile,
            theorem,
            kappa,
            map,
            space,
            mutation,
            out,
        } => {
            let base = match profile {
                Some(text) => GenProfile::from_description(*seed, text),
                None => Ok(GenProfile::new(*seed, 8)),
            };
            let outcome = match base {
                Ok(mut p) => {
                    p.n_points = n.unwrap_or(p.n_points);
                    p.theorem_target = theorem.or(p.theorem_target);
                    p.kappa_kind = kappa.unwrap_or(p.kappa_kind);
                    p.map_kind = map.unwrap_or(p.map_kind);
                    p.space_kind = space.unwrap_or(p.space_kind);
                    p.mutation = mutation.or(p.mutation);
                    commands::gen(&p, out.as_deref())
                }
                Err(e) => Outcome {
                    code: commands::EXIT_INPUT,
                    output: serde_json::json!({ "error": e.to_string() }),
                    instance_hash: None,
                },
            };
            ("gen", outcome)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let (name, outcome) = run(&cli.command);
    if let Some(err) = outcome.output.get("error").and_then(|e| e.as_str()) {
        eprintln!("edist {name}: {err}");
    }
    let text = serde_json::to_string_pretty(&outcome.output).expect("JSON values serialize");
    // A closed pipe downstream is not an error worth reporting.
    let _ = writeln!(io::stdout().lock(), "{text}");
    if let Some(path) = &cli.log {
        let mut record = RunRecord::new(name, std::env::args().skip(1).collect());
        record.instance_hash = outcome.instance_hash.clone();
        record.exit_code = outcome.code;
        record.report = outcome.output.clone();
        record.wall_time_ms = started.elapsed().as_secs_f64() * 1000.0;
        if let Err(e) = runlog::append(path, &record) {
            eprintln!("edist: cannot write run log {}: {e}", path.display());
        }
    }
    process::exit(outcome.code);
}
