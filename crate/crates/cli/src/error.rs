use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("numerical failure at {cell}: {source}")]
    Numerical { cell: String, source: cfrisk::Error },

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigInvalid(_) | CliError::Io(_) => 2,
            CliError::Numerical { .. } => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::ConfigInvalid(_) => "config",
            CliError::Numerical { .. } => "numerical",
            CliError::Io(_) => "io",
        }
    }

    /// One-line JSON object for stderr.
    pub fn report(&self) -> String {
        let mut obj = serde_json::json!({ "error": self.kind(), "message": self.to_string() });
        if let CliError::Numerical { cell, .. } = self {
            obj["cell"] = serde_json::Value::String(cell.clone());
        }
        obj.to_string()
    }
}

pub fn config_err(msg: impl Into<String>) -> CliError {
    CliError::ConfigInvalid(msg.into())
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
