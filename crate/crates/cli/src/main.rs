use clap::Parser;
use kinkforge::{run, Args, CliError};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let config = Args::parse().into_config();
    let result = run(&config).and_then(|out| {
        let text = out.render()?;
        match &config.out {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            for w in &out.envelope.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            report(&e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn report(e: &CliError) {
    eprintln!("error[{}]: {e}", e.class());
}
