use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use thiserror::Error;

/// Failures of the command-line layer; engine errors pass through unchanged.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}: schema error at {pointer}: {message}")]
    SchemaError {
        file: String,
        pointer: String,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] partite_core::Error),

    #[error("invalid argument: {0}")]
    Argument(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::SchemaError { .. } => "SchemaError",
            CliError::Io { .. } => "Io",
            CliError::Core(e) => e.code(),
            CliError::Argument(_) => "Argument",
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Renders a serde path as a JSON pointer.
fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

/// Parses `text`, reporting failures with the JSON pointer of the offending value.
pub fn parse_json<T: DeserializeOwned>(file: &str, text: &str) -> CliResult<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| CliError::SchemaError {
        file: file.to_string(),
        pointer: pointer(e.path()),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| CliError::SchemaError {
        file: file.to_string(),
        pointer: String::new(),
        message: e.to_string(),
    })?;
    Ok(value)
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    parse_json(&path.display().to_string(), &read_text(path)?)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    #[test]
    fn pointer_names_the_failing_value() {
        let e = parse_json::<BTreeMap<String, Vec<usize>>>("f.json", r#"{"a": [1, 2], "b/c": [3, "x"]}"#).unwrap_err();
        match e {
            CliError::SchemaError { pointer, .. } => assert_eq!(pointer, "/b~1c/1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trailing_garbage_is_a_schema_error() {
        let e = parse_json::<Vec<usize>>("f.json", "[1] [2]").unwrap_err();
        assert_eq!(e.code(), "SchemaError");
    }

    #[test]
    fn engine_codes_pass_through() {
        let e = CliError::from(partite_core::Error::Invalid("x".into()));
        assert_eq!(e.code(), "Invalid");
    }
}
