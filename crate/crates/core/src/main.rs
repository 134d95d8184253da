use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use finsylow::document::{self, Request, TowerDocument};
use finsylow::error::Error;
use finsylow::report;

/// Sylow theory for finite Postnikov towers.
#[derive(Parser)]
#[command(name = "finsylow", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Target {
    /// Tower document (JSON).
    file: PathBuf,
    /// Tower to analyze; may be omitted when the document has only one.
    #[arg(long)]
    tower: Option<String>,
}

#[derive(Args)]
struct WithPrime {
    #[command(flatten)]
    target: Target,
    #[arg(long)]
    prime: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a p-Sylow map.
    Sylow(WithPrime),
    /// Count p-Sylow maps up to equivalence.
    SylowCount(WithPrime),
    /// Factor a map from a p-tower through a Sylow map.
    Factor {
        file: PathBuf,
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        prime: u64,
    },
    /// Show that all p-Sylow maps are conjugate.
    Conjugate(WithPrime),
    /// Check the normality conditions of a p-Sylow map.
    Normality(WithPrime),
    /// Decide whether the tower is nilpotent.
    NilpotentCheck(Target),
    /// Split a nilpotent tower into its Sylow towers.
    Decompose(Target),
    /// Algebraic p-completion of a nilpotent tower.
    PComplete(WithPrime),
    /// Fixed points of a p-group action: a fibration map or a finite G-set.
    Burnside {
        file: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long, conflicts_with = "gset")]
        map: Option<String>,
        #[arg(long)]
        gset: Option<String>,
    },
    /// H^n(G; M) for a document module or a trivial module given by its
    /// factor orders, e.g. `--module 2,4`.
    Cohomology {
        file: Option<PathBuf>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        module: String,
        #[arg(long)]
        degree: usize,
    },
    /// Run the built-in invariant checks.
    Selftest,
    /// Run every request listed in the document.
    Run { file: PathBuf },
}

fn request(command: &str) -> Request {
    Request {
        command: command.into(),
        ..Default::default()
    }
}

fn with_tower(command: &str, t: &Target, prime: Option<u64>) -> Request {
    Request {
        tower: t.tower.clone(),
        prime,
        ..request(command)
    }
}

/// The document and its requests; `true` when the requests come from the
/// document itself.
fn plan(cmd: Command) -> Result<(TowerDocument, Vec<Request>, bool), Error> {
    let load = |f: &PathBuf| document::load(f);
    Ok(match cmd {
        Command::Sylow(a) => (load(&a.target.file)?, vec![with_tower("sylow", &a.target, Some(a.prime))], false),
        Command::SylowCount(a) => (load(&a.target.file)?, vec![with_tower("sylow-count", &a.target, Some(a.prime))], false),
        Command::Conjugate(a) => (load(&a.target.file)?, vec![with_tower("conjugate", &a.target, Some(a.prime))], false),
        Command::Normality(a) => (load(&a.target.file)?, vec![with_tower("normality", &a.target, Some(a.prime))], false),
        Command::PComplete(a) => (load(&a.target.file)?, vec![with_tower("p-complete", &a.target, Some(a.prime))], false),
        Command::NilpotentCheck(t) => (load(&t.file)?, vec![with_tower("nilpotent-check", &t, None)], false),
        Command::Decompose(t) => (load(&t.file)?, vec![with_tower("decompose", &t, None)], false),
        Command::Factor { file, map, prime } => (
            load(&file)?,
            vec![Request {
                map,
                prime: Some(prime),
                ..request("factor")
            }],
            false,
        ),
        Command::Burnside { file, prime, map, gset } => (
            load(&file)?,
            vec![Request {
                map,
                gset,
                prime: Some(prime),
                ..request("burnside")
            }],
            false,
        ),
        Command::Cohomology {
            file,
            group,
            module,
            degree,
        } => {
            let doc = match file {
                Some(f) => load(&f)?,
                None => TowerDocument::default(),
            };
            let r = Request {
                group,
                module: Some(module),
                degree: Some(degree),
                ..request("cohomology")
            };
            (doc, vec![r], false)
        }
        Command::Selftest => (TowerDocument::default(), vec![request("selftest")], false),
        Command::Run { file } => {
            let doc = load(&file)?;
            let reqs = doc.requests.clone();
            (doc, reqs, true)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = plan(cli.command).and_then(|(doc, reqs, batch)| {
        if batch {
            report::run_all(&doc, &reqs)
        } else {
            reqs.iter().map(|r| report::run(&doc, r)).collect()
        }
    });
    match result {
        Ok(reports) => {
            print!("{}", report::emit(&reports, cli.json));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.class().exit_code() as u8)
        }
    }
}
