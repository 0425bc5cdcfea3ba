//! Artifact persistence. Writes are atomic: content lands in a sibling
//! temp file that is renamed into place, so readers never see a torn file.

use serde_json::Value;
use std::io;
use std::path::Path;

pub fn write_json(path: &Path, value: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// CSV with the given header; every row must match its width.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    write_atomic(path, &bytes)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::other(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp.{}", name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, bytes)?;
    match std::fs::rename(&tmp, path) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = std::fs::remove_file(&tmp);
            Err(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_write_is_complete_and_stable() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.json");
        let v = serde_json::json!({"b": 1, "a": [2, 3]});
        write_json(&path, &v).unwrap();
        let first = std::fs::read_to_string(&path).unwrap();
        assert!(first.ends_with('\n'));
        write_json(&path, &v).unwrap();
        assert_eq!(first, std::fs::read_to_string(&path).unwrap());
        // Keys come out sorted regardless of insertion order.
        assert!(first.find("\"a\"").unwrap() < first.find("\"b\"").unwrap());
    }

    #[test]
    fn csv_quotes_embedded_commas() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_csv(&path, &["shape", "count"], &[vec!["(2,1)".into(), "5".into()]]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"(2,1)\""));
    }
}
