//! Deterministic report emission: 17-significant-digit JSON, atomic file
//! writes, run metadata segregated into a sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

use crate::CliError;

/// JSON formatter printing every float with 17 significant digits, so
/// identical inputs produce byte-identical reports.
struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: Write + ?Sized>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: Write + ?Sized>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json(value: &impl Serialize) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, SigDigits);
    value
        .serialize(&mut ser)
        .expect("report types serialize");
    let _ = CompactFormatter; // default everywhere except floats
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// Write via a temp file and rename, so failures leave no partial artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| {
                CliError::input(format!("cannot create {}: {e}", parent.display()))
            })?;
        }
    }
    let mut tmp = PathBuf::from(path);
    tmp.set_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, bytes)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| CliError::input(format!("cannot rename to {}: {e}", path.display())))?;
    Ok(())
}

/// Sidecar with non-deterministic run metadata, kept out of the payload.
#[derive(Serialize)]
struct Meta<'a> {
    command: &'a str,
    duration_ms: u128,
    unix_time: u64,
}

pub fn write_meta(path: &Path, command: &str, duration_ms: u128) -> Result<(), CliError> {
    let unix_time = SystemTime::now()
        .duration_since(SystemTime::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = Meta {
        command,
        duration_ms,
        unix_time,
    };
    write_atomic(path, serde_json::to_string(&meta).expect("meta").as_bytes())
}
