use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use eqexc_cli::{run, selftest, text, RunSpec};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "eqexc", version, about = "Equivariant exceptional collections, computed exactly")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    /// Run spec (JSON).
    #[arg(long, conflicts_with = "catalog")]
    spec: Option<PathBuf>,
    /// Catalog shortcut such as `delpezzo:kn3` or `projective:n=3`, with a trivial group.
    #[arg(long)]
    catalog: Option<String>,
    /// Request every verification, whatever the spec says.
    #[arg(long)]
    verify: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Seeded property checks on random small groups and collections.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        cases: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn load_spec(cli: &Cli) -> Result<RunSpec> {
    match (&cli.spec, &cli.catalog) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            RunSpec::parse(&text).with_context(|| format!("in {}", path.display()))
        }
        (None, Some(arg)) => RunSpec::from_catalog_arg(arg),
        (None, None) => bail!("one of --spec or --catalog is required"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(Command::Selftest { seed, cases }) = cli.command {
        let mut ok = true;
        for check in selftest::run(seed, cases) {
            let status = if check.failures.is_empty() { "PASS" } else { "FAIL" };
            println!("{status}  {} ({} cases, seed {seed})", check.name, check.cases);
            for f in &check.failures {
                println!("      {f}");
            }
            ok &= check.failures.is_empty();
        }
        return if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAIL) };
    }

    let report = match load_spec(&cli).and_then(|spec| run(&spec, cli.verify)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let rendered = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => text::render(&report),
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &rendered).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_INPUT);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
