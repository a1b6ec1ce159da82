use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Writes the file in full next to its destination, then renames it into place.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut Vec<u8>) -> Result<(), CliError>) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut buf = Vec::new();
    fill(&mut buf)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(&buf).and_then(|_| f.sync_all()).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    write_atomic(path, |buf| {
        serde_json::to_writer_pretty(&mut *buf, value).map_err(ddfrac::Error::from)?;
        buf.push(b'\n');
        Ok(())
    })
}

pub fn write_rows<T: serde::Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<(), CliError> {
    write_atomic(path, |buf| {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(buf);
        w.write_record(header).map_err(ddfrac::Error::from)?;
        for r in rows {
            w.serialize(r).map_err(ddfrac::Error::from)?;
        }
        w.flush().map_err(ddfrac::Error::from)?;
        Ok(())
    })
}
