//! Number formatting and file writing shared by every exported artifact.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Decimal string with 17 significant digits; parses back to the same bits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse17(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Config(format!("bad decimal string {s:?}: {e}")))
}

/// Write through a sibling temp file and rename, so readers never observe a
/// partial artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}
