use std::io::{self, IsTerminal};
use std::process::ExitCode;

use clap::Parser;

use cartogrammer::cli::{ansi_enabled, run, Cli, Command, Confirmation, Console};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let assume = match &cli.command {
        Command::Generate(a) | Command::Bundle(a) => a.assume_additive,
        Command::Validate(_) => false,
    };
    let mut confirm = if assume {
        Confirmation::Assume
    } else if io::stdin().is_terminal() {
        Confirmation::Interactive(Box::new(io::stdin().lock()))
    } else {
        Confirmation::Unavailable
    };
    let ansi = ansi_enabled(io::stderr().is_terminal());
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let mut console = Console {
        out: &mut out,
        err: &mut err,
        ansi,
    };
    let code = run(&cli, &mut confirm, &mut console);
    ExitCode::from(code as u8)
}
