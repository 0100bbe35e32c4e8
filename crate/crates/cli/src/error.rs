use serde_json::{json, Value};
use squeezelab::SqueezeError;

#[derive(Debug)]
pub enum CliError {
    ConfigParse(String),
    Model { source: SqueezeError, params: Value },
    Io(String),
    /// The run completed but a comparison fell outside its tolerance.
    ValidationFailed(String),
}

impl CliError {
    pub fn model(source: SqueezeError, params: Value) -> Self {
        CliError::Model { source, params }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ConfigParse(_) => 2,
            CliError::Model { .. } | CliError::Io(_) => 1,
            CliError::ValidationFailed(_) => 3,
        }
    }

    /// Single-line JSON for stderr.
    pub fn to_json(&self) -> Value {
        match self {
            CliError::ConfigParse(m) => json!({ "error": "ConfigParse", "message": m }),
            CliError::Io(m) => json!({ "error": "Io", "message": m }),
            CliError::ValidationFailed(m) => json!({ "error": "ValidationFailed", "message": m }),
            CliError::Model { source, params } => json!({
                "error": source.kind(),
                "message": source.to_string(),
                "params": params,
            }),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
