use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// SHA-256 of the compact JSON form of the config.
pub fn config_hash(config: &Value) -> String {
    let bytes = serde_json::to_vec(config).expect("config serializes");
    hex::encode(Sha256::digest(&bytes))
}

pub fn header(config: &Value, seed: Option<u64>) -> Value {
    json!({
        "tool": "eyefree",
        "version": VERSION,
        "config_hash": config_hash(config),
        "seed": seed,
    })
}

/// `{header, config, result}` as pretty JSON.
pub fn report<T: Serialize>(config: &Value, seed: Option<u64>, result: &T) -> Result<String> {
    let doc = json!({
        "header": header(config, seed),
        "config": config,
        "result": serde_json::to_value(result)?,
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// Writes the JSON report to `out`, or to stdout when there is none.
/// With a file, `summary` goes to stdout instead.
pub fn emit(out: Option<&Path>, json: &str, summary: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
            println!("{summary}");
        }
        None => {
            std::io::stdout().write_all(json.as_bytes())?;
        }
    }
    Ok(())
}

/// CSV with `#` comment lines carrying the header fields.
pub fn write_csv(path: &Path, config: &Value, seed: Option<u64>, columns: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut buf = Vec::new();
    let h = header(config, seed);
    writeln!(buf, "# tool=eyefree version={VERSION}")?;
    writeln!(buf, "# config_hash={}", h["config_hash"].as_str().unwrap_or_default())?;
    match seed {
        Some(s) => writeln!(buf, "# seed={s}")?,
        None => writeln!(buf, "# seed=none")?,
    }
    writeln!(buf, "# config={}", serde_json::to_string(config)?)?;
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(columns)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
    }
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
