// Copyright 2026 The clusterfpm Authors. Licensed under Apache-2.0.

use std::io::{self, Write};
use std::process::ExitCode;

use clusterfpm::cli::{self, CliError};

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli::run(std::env::args_os(), &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(e)) => {
            let _ = out.flush();
            let _ = e.print();
            ExitCode::from(e.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("clusterfpm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
