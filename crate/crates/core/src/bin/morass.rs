use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use morass::fixtures;
use morass::mutate::{self, MUTATIONS};
use morass::suites::{self, Forcing, Subject, SuiteOptions, SUITES};
use morass::{Error, MorassTree, Report};

#[derive(Parser)]
#[command(name = "morass", version, about = "Finite simplified morasses and the forcings built along them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a fixture morass as JSON.
    Build {
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a morass against its axioms.
    Validate {
        #[arg(long, conflicts_with = "fixture")]
        input: Option<PathBuf>,
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        mutate: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run registered suites.
    Verify {
        /// Suite name; repeat for several, or `all`.
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Fixture name; repeat for several.
        #[arg(long, conflicts_with = "input")]
        fixture: Vec<String>,
        #[arg(long)]
        mutate: Option<String>,
        /// `B` for topology runs on an input morass.
        #[arg(long)]
        block: Option<usize>,
        /// Include the slow checks and fixtures.
        #[arg(long)]
        full: bool,
        /// Record wall-clock time in the report.
        #[arg(long)]
        timing: bool,
        /// List the suites and mutations and exit.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a generic filter and report what it adds.
    Extend {
        #[arg(long, value_enum)]
        forcing: ForcingArg,
        #[arg(long)]
        fixture: String,
        /// Tie-break seed; omitted means least extensions in canonical order.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Export a morass tree as DOT, or the morass as JSON.
    Export {
        #[arg(long, conflicts_with = "fixture")]
        input: Option<PathBuf>,
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// For a gap-2 morass, draw the inner tree instead of the θ-level tree.
        #[arg(long)]
        inner: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ForcingArg {
    Topology,
    Chain,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// How a run ended.
enum Outcome {
    Pass,
    Fail,
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Error> {
    match output {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn read_subject(path: &Path) -> Result<(String, Subject), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let label = path.file_stem().map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned());
    Ok((label, Subject::from_json(&text)?))
}

/// Any fixture name as the morass it is built on.
fn fixture_subject(name: &str) -> Result<Subject, Error> {
    if fixtures::GAP1_NAMES.contains(&name) {
        return Ok(Subject::Gap1(fixtures::gap1(name)?));
    }
    if fixtures::GAP2_NAMES.contains(&name) {
        return Ok(Subject::Gap2(fixtures::gap2(name)?));
    }
    if fixtures::CHAIN_NAMES.contains(&name) {
        return Ok(Subject::Gap1(fixtures::chain(name)?));
    }
    if fixtures::TOPOLOGY_NAMES.contains(&name) {
        return Ok(Subject::Gap2(fixtures::topology(name)?.morass));
    }
    let known = [fixtures::GAP1_NAMES, fixtures::GAP2_NAMES, fixtures::CHAIN_NAMES, fixtures::TOPOLOGY_NAMES].concat();
    Err(Error::Parse(format!("unknown fixture {name:?}; known: {}", known.join(", "))))
}

fn subject(input: Option<&Path>, fixture: Option<&str>) -> Result<(String, Subject), Error> {
    match (input, fixture) {
        (Some(p), _) => read_subject(p),
        (None, Some(f)) => Ok((f.to_string(), fixture_subject(f)?)),
        (None, None) => Err(Error::Parse("give --input or --fixture".into())),
    }
}

fn listing() -> String {
    let mut s = String::from("suites:\n");
    for (name, about) in SUITES {
        s.push_str(&format!("  {name:<20} {about}\n"));
    }
    s.push_str("mutations:\n");
    for m in MUTATIONS {
        s.push_str(&format!("  {:<28} {} on {} (breaks {})\n", m.name, m.suite(), m.fixture, m.breaks));
    }
    s
}

fn outcome(reports: &[&Report]) -> Outcome {
    if reports.iter().all(|r| r.all_pass()) {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Build { fixture, output } => {
            emit(&fixture_subject(&fixture)?.to_json(), output.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::Validate { input, fixture, mutate, output } => {
            let (label, subj) = subject(input.as_deref(), fixture.as_deref())?;
            let name = match subj {
                Subject::Gap1(_) => "gap1-axioms",
                Subject::Gap2(_) => "gap2-axioms",
            };
            let opts = SuiteOptions {
                input: Some((label, subj)),
                mutation: mutate.as_deref().map(mutate::mutation).transpose()?,
                ..Default::default()
            };
            let rep = suites::run_suite(name, &opts)?;
            emit(&rep.to_json(), output.as_deref())?;
            Ok(outcome(&[&rep]))
        }
        Command::Verify { suite, input, fixture, mutate, block, full, timing, list, output } => {
            if list {
                print!("{}", listing());
                return Ok(Outcome::Pass);
            }
            if suite.is_empty() {
                return Err(Error::Parse(format!("give --suite\n{}", listing())));
            }
            let names: Vec<String> = if suite.iter().any(|s| s == "all") {
                suites::suite_names().into_iter().map(String::from).collect()
            } else {
                suite
            };
            let opts = SuiteOptions {
                fixtures: fixture,
                input: input.as_deref().map(read_subject).transpose()?,
                mutation: mutate.as_deref().map(mutate::mutation).transpose()?,
                block,
                full,
            };
            let mut reports = Vec::new();
            let mut sorted = names.clone();
            sorted.sort();
            sorted.dedup();
            for n in &sorted {
                let t0 = Instant::now();
                let mut r = suites::run_suite(n, &opts)?;
                if timing {
                    r.elapsed_ms = Some(t0.elapsed().as_millis() as u64);
                }
                reports.push(r);
            }
            let text = match reports.as_slice() {
                [one] => one.to_json(),
                many => serde_json::to_string_pretty(many).expect("reports serialize"),
            };
            emit(&text, output.as_deref())?;
            Ok(outcome(&reports.iter().collect::<Vec<_>>()))
        }
        Command::Extend { forcing, fixture, seed, output } => {
            let forcing = match forcing {
                ForcingArg::Topology => Forcing::Topology,
                ForcingArg::Chain => Forcing::Chain,
            };
            let ext = suites::extend(forcing, &fixture, seed)?;
            emit(&serde_json::to_string_pretty(&ext).expect("extension serializes"), output.as_deref())?;
            Ok(outcome(&[ext.report()]))
        }
        Command::Export { input, fixture, format, inner, output } => {
            let (_, subj) = subject(input.as_deref(), fixture.as_deref())?;
            let text = match format {
                Format::Json => subj.to_json(),
                Format::Dot => {
                    let m = match &subj {
                        Subject::Gap1(m) => m.clone(),
                        Subject::Gap2(m) if inner => m.inner().clone(),
                        Subject::Gap2(m) => m.theta_morass(),
                    };
                    MorassTree::build(&m)?.to_dot()
                }
            };
            emit(text.trim_end(), output.as_deref())?;
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
