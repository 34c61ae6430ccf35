use std::path::PathBuf;

use serde::Serialize;

/// Failure of a CLI command, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Numerical(qsteer_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
    exit_code: i32,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: ErrorBody<'a>,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::Io { .. } => "io",
        }
    }

    /// 2 for bad input or unreadable/unwritable files, 3 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }

    /// One-line JSON document for stderr.
    pub fn to_json(&self) -> String {
        let doc = ErrorDoc {
            error: ErrorBody {
                kind: self.kind(),
                message: self.to_string(),
                exit_code: self.exit_code(),
            },
        };
        serde_json::to_string(&doc).unwrap_or_else(|_| String::from(r#"{"error":{"kind":"internal"}}"#))
    }
}

impl From<qsteer_core::Error> for CliError {
    fn from(e: qsteer_core::Error) -> Self {
        use qsteer_core::Error as E;
        match e {
            E::NotHermitian(_) | E::NotUnitary(_) | E::ImpossibleOutcome { .. } | E::Singular(_) | E::NoConvergence => {
                CliError::Numerical(e)
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("invalid JSON: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_kind() {
        let numerical: CliError = qsteer_core::Error::NoConvergence.into();
        assert_eq!((numerical.kind(), numerical.exit_code()), ("numerical", 3));
        let bad_input: CliError = qsteer_core::Error::DimensionMismatch { expected: 2, found: 3 }.into();
        assert_eq!((bad_input.kind(), bad_input.exit_code()), ("config", 2));
        let io = CliError::io("x", std::io::Error::other("denied"));
        assert_eq!((io.kind(), io.exit_code()), ("io", 2));
    }

    #[test]
    fn error_json_shape() {
        let v: serde_json::Value = serde_json::from_str(&CliError::config("bad").to_json()).unwrap();
        assert_eq!(v["error"]["kind"], "config");
        assert_eq!(v["error"]["message"], "bad");
        assert_eq!(v["error"]["exit_code"], 2);
    }
}
