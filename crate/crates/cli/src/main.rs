use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use quadtrace_cli::args::{Cli, Command};
use quadtrace_cli::commands;
use quadtrace_cli::report::write_file;
use quadtrace_cli::Result;

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Interpolate(args) => {
            let out = commands::interpolate_function(&args)?;
            let residual = format!(
                "max |p(x) - f(x)| on {} points: {:.3e}",
                commands::RESIDUAL_GRID,
                out.residual
            );
            match &args.out {
                Some(path) => {
                    out.coeffs.save(path)?;
                    println!("{residual}");
                }
                None => {
                    println!("{}", out.coeffs.to_json());
                    eprintln!("{residual}");
                }
            }
        }
        Command::Estimate(args) => {
            let result = commands::estimate(&args)?;
            commands::write_result(&result, &args.output)?;
        }
        Command::Reproduce(args) => {
            let result = commands::reproduce(&args)?;
            print!("{}", commands::reproduce_summary(&result));
            if let Some(path) = &args.output.out {
                write_file(path, &result.render(args.output.format))?;
            }
            if let Some(path) = &args.output.csv {
                write_file(path, &result.to_csv())?;
            }
        }
        Command::MatvecCount(args) => print!("{}", commands::matvec_count(&args)),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
