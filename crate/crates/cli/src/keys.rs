//! Key files: one signed 64-bit decimal integer per line, LF or CRLF.
//! Blank lines are skipped; line numbers in errors are 1-based file lines.

use std::path::Path;

use crate::error::CliError;

/// Parses keys, remembering the file line each came from.
pub fn parse_keys(text: &str, path: &Path) -> Result<Vec<(usize, i64)>, CliError> {
    let mut keys = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let key = line.parse::<i64>().map_err(|e| CliError::Malformed {
            path: path.to_path_buf(),
            reason: format!("line {}: {line:?} is not a 64-bit integer ({e})", i + 1),
        })?;
        keys.push((i + 1, key));
    }
    Ok(keys)
}

/// Reads a key file, sorting it when `sort` is set and rejecting unsorted
/// input otherwise.
pub fn load_keys(path: &Path, sort: bool) -> Result<Vec<i64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let numbered = parse_keys(&text, path)?;
    let mut keys: Vec<i64> = numbered.iter().map(|&(_, k)| k).collect();
    if sort {
        keys.sort_unstable();
    } else if let Some(i) = keys.windows(2).position(|w| w[0] > w[1]) {
        return Err(CliError::Unsorted {
            path: path.to_path_buf(),
            line: numbered[i + 1].0,
        });
    }
    Ok(keys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_crlf_and_blank_lines() {
        let keys = parse_keys("1\r\n\r\n-5\n7", Path::new("k")).unwrap();
        assert_eq!(keys, vec![(1, 1), (3, -5), (4, 7)]);
    }

    #[test]
    fn rejects_garbage_with_line_number() {
        let err = parse_keys("1\n2\nthree\n", Path::new("k")).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn unsorted_reports_first_offending_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("keys.txt");
        std::fs::write(&path, "1\n\n5\n3\n2\n").unwrap();
        match load_keys(&path, false).unwrap_err() {
            CliError::Unsorted { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(load_keys(&path, true).unwrap(), vec![1, 2, 3, 5]);
    }
}
