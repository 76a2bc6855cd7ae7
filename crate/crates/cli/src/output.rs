use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;
use crate::error::CliError;
use crate::settings::OutputChoice;

/// Writes `rows` as CSV (header plus one line per row) or as a JSON object
/// `{ "meta": …, "rows": [...] }`.
pub fn emit<T: Serialize>(command: &str, config: Value, rows: &[T], out: &OutputChoice) -> Result<(), CliError> {
    let bytes = match out.format {
        Format::Csv => csv_bytes(rows)?,
        Format::Json => json_bytes(command, config, rows, out.timestamp)?,
    };
    match &out.output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(&bytes)
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

fn json_bytes<T: Serialize>(command: &str, config: Value, rows: &[T], timestamp: bool) -> Result<Vec<u8>, CliError> {
    let mut meta = json!({
        "tool": "erlimit",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
    });
    if timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        meta["timestamp_unix"] = json!(secs);
    }
    let doc = json!({ "meta": meta, "rows": rows });
    let mut bytes = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}
