use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Format};
use crate::error::CliError;
use crate::run::{Metadata, RunOutput};

const CONFIG_PREFIX: &str = "# config: ";

fn number(v: f64) -> String {
    // shortest round-trip form, exponent notation for extreme magnitudes
    format!("{v:?}")
}

pub fn render_csv(out: &RunOutput) -> String {
    let md = &out.metadata;
    let config_json = serde_json::to_string(&md.config).expect("config serializes");
    let mut s = String::new();
    s.push_str(&format!("# tool: {} {}\n", md.tool, md.version));
    s.push_str(&format!("# kind: {}\n", md.config.kind));
    s.push_str(&format!("# generator: {}\n", md.generator));
    s.push_str(&format!("# seed: {}\n", md.seed));
    s.push_str(&format!(
        "# cutoff: n_max={} mode={} tol={:?} checked_at_g={:?}\n",
        md.cutoff.n_max, md.cutoff.mode, md.cutoff.tol, md.cutoff.checked_at_g
    ));
    s.push_str(&format!("# commensurate_schedule: {}\n", md.commensurate_schedule));
    s.push_str(CONFIG_PREFIX);
    s.push_str(&config_json);
    s.push('\n');
    s.push_str(&out.table.columns.join(","));
    s.push('\n');
    for row in &out.table.rows {
        let cells: Vec<String> = row.iter().map(|&v| number(v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn render_json(out: &RunOutput) -> String {
    // NaN cells (e.g. chi at zero coupling) become null
    let doc = json!({
        "metadata": out.metadata,
        "series": {
            "columns": out.table.columns,
            "rows": out.table.rows,
        },
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("output serializes");
    text.push('\n');
    text
}

pub fn render(out: &RunOutput, format: Format) -> String {
    match format {
        Format::Csv => render_csv(out),
        Format::Json => render_json(out),
    }
}

/// Recovers the exact configuration from a CSV or JSON output file.
pub fn read_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let invalid = |e: serde_json::Error| CliError::Validation(format!("cli: unreadable metadata: {e}"));
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(text).map_err(invalid)?;
        let md: Metadata = serde_json::from_value(doc["metadata"].clone()).map_err(invalid)?;
        return Ok(md.config);
    }
    let line = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix(CONFIG_PREFIX))
        .ok_or_else(|| CliError::Validation("cli: no config line in metadata header".into()))?;
    serde_json::from_str(line).map_err(invalid)
}

/// Writes through a temporary file in the target directory, then renames, so
/// a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
