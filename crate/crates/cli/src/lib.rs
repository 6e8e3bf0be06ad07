//! Front end for the `antizeno` binary: configuration, presets, experiment
//! runners and CSV/JSON emission.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

use std::path::Path;

pub use config::{preset, ExperimentConfig, ExperimentKind, Format};
pub use error::CliError;
pub use run::{run, RunOutput};

/// Runs `config` and writes the result to its output path (atomically) or
/// to standard output.
pub fn execute(config: &ExperimentConfig) -> Result<(), CliError> {
    let out = run(config)?;
    let text = output::render(&out, config.output.format);
    match &config.output.path {
        Some(p) => output::write_atomic(Path::new(p), &text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
