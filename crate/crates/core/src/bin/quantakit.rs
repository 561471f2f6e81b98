use std::io::{self, Write};
use std::process::ExitCode;

use quantakit::cli;

fn main() -> ExitCode {
    let result = cli::init_threads().and_then(|_| {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        let r = cli::run(std::env::args_os(), &mut out);
        out.flush()?;
        r
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            if let Some(clap_err) = e.downcast_ref::<clap::Error>() {
                let _ = clap_err.print();
                return ExitCode::from(clap_err.exit_code() as u8);
            }
            eprintln!("quantakit: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
