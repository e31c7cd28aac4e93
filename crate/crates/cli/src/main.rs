mod args;
mod commands;
mod output;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use graph_zeta::io::read_graph;
use graph_zeta::{Error, Graph};

use args::{Cli, Command};
use output::Report;

/// Exit statuses: parse or validation problems, failed numeric checks, and
/// an exceeded orbit-catalog cap.
const EXIT_INVALID: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 2;
const EXIT_CAP: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CatalogCap { .. } => EXIT_CAP,
        Error::NoConvergence { .. } | Error::NoNullDirection(_) | Error::Divergent(_) => EXIT_CHECK_FAILED,
        _ => EXIT_INVALID,
    }
}

fn load(cli: &Cli) -> Result<Graph, Error> {
    let path = cli
        .graph
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("--graph PATH is required".into()))?;
    let g = read_graph(path).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{message} (in {})", path.display()),
        },
        other => other,
    })?;
    if !g.is_connected() {
        eprintln!("warning: {} is disconnected", path.display());
    }
    Ok(g)
}

/// The report plus whether every numeric check passed.
fn run(cli: &Cli) -> Result<(Report, bool), Error> {
    let g = load(cli)?;
    let f = cli.format;
    let report = match &cli.command {
        Command::Spectrum { kind, zeros } => commands::spectrum(&g, kind.resolve(&g), *zeros, f)?,
        Command::Verify { samples, inject_fault } => {
            let kind = graph_zeta::laplacian::LaplacianKind::natural_for(&g);
            let checks = verify::run_checks(&g, kind, *samples, cli.seed, *inject_fault)?;
            let ok = checks.iter().all(|c| c.passed());
            for c in checks.iter().filter(|c| !c.passed()) {
                eprintln!("check failed: {} ({:?} >= {})", c.name, c.value, c.tolerance);
            }
            return Ok((verify::report(&checks, kind, cli.seed, f), ok));
        }
        Command::Orbits {
            max_len,
            non_backtracking,
            list,
            cap,
        } => commands::orbits(&g, *max_len, *non_backtracking, *list, *cap, f)?,
        Command::Zeta { lambda, max_len, kind } => commands::zeta(&g, *lambda, *max_len, kind.resolve(&g), f)?,
        Command::Ihara { u, max_len, counts } => commands::ihara(&g, *u, *max_len, *counts, f)?,
        Command::Stark { u, random_eta, max_len } => commands::stark(&g, *u, *random_eta, *max_len, cli.seed, f)?,
        Command::Trace {
            eps,
            grid,
            max_len,
            max_rep,
            kind,
        } => commands::trace(&g, *eps, *grid, *max_len, *max_rep, kind.resolve(&g), f)?,
        Command::Classical {
            lambda,
            sharp,
            steps,
            kind,
        } => commands::classical(&g, *lambda, *sharp, *steps, kind.resolve(&g), f)?,
    };
    Ok((report, true))
}

fn emit(cli: &Cli, report: &Report) -> io::Result<()> {
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.write(&mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            report.write(&mut w)?;
            w.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INVALID),
            };
        }
    };
    match run(&cli) {
        Ok((report, ok)) => {
            match emit(&cli, &report) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_INVALID);
                }
                Ok(()) => {}
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
