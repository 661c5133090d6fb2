use serde_json::json;

/// Everything that can stop a run.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown preset `{0}` (see `magphon presets`)")]
    UnknownPreset(String),
    #[error("cannot read config file {path}: {source}")]
    ReadConfig {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("bad override `{0}`: {1}")]
    Override(String, String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] magphon_core::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if !e.is_config_error() => EXIT_NUMERIC,
            CliError::Write { .. } => EXIT_IO,
            _ => EXIT_CONFIG,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            EXIT_CONFIG => "config",
            EXIT_NUMERIC => "numeric",
            _ => "io",
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> serde_json::Value {
        let mut body = json!({
            "kind": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        if let CliError::Model(magphon_core::Error::InvalidParameter { field, .. }) = self {
            body["field"] = json!(field);
        }
        json!({ "error": body })
    }
}
