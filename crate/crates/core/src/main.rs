use std::process::ExitCode;

use clap::Parser;
use ssm2sysml::cli::{color_from_env, run, Cli, Io};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let mut io = Io {
        out: &mut out,
        err: &mut err,
        color: color_from_env(),
    };
    ExitCode::from(run(cli, &mut io))
}
