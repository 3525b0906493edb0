use std::fmt;

use serde_json::{json, Value};

/// Failures surfaced by the front end. Every variant maps to a stable code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed input. `context` names the file, line and field when known.
    Parse { context: String, message: String },
    /// A library error, tagged with where it happened.
    Core { context: Option<String>, error: novp_core::Error },
    Io { path: String, message: String },
    Usage(String),
}

impl CliError {
    pub fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse {
            context: context.into(),
            message: message.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "PARSE_ERROR",
            CliError::Core { error, .. } => error.code(),
            CliError::Io { .. } => "IO_ERROR",
            CliError::Usage(_) => "USAGE_ERROR",
        }
    }

    /// Prefixes the context, e.g. with the input file name.
    pub fn within(self, outer: &str) -> Self {
        match self {
            CliError::Parse { context, message } => CliError::Parse {
                context: join(outer, &context),
                message,
            },
            CliError::Core { context, error } => CliError::Core {
                context: Some(join(outer, context.as_deref().unwrap_or(""))),
                error,
            },
            e => e,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut err = json!({ "code": self.code(), "message": self.message() });
        let context = match self {
            CliError::Parse { context, .. } => Some(context.clone()),
            CliError::Core { context, .. } => context.clone(),
            CliError::Io { path, .. } => Some(path.clone()),
            CliError::Usage(_) => None,
        };
        if let Some(c) = context.filter(|c| !c.is_empty()) {
            err["context"] = Value::String(c);
        }
        json!({ "schema": 1, "error": err })
    }

    fn message(&self) -> String {
        match self {
            CliError::Parse { message, .. } => message.clone(),
            CliError::Core { error, .. } => error.to_string(),
            CliError::Io { message, .. } => message.clone(),
            CliError::Usage(m) => m.clone(),
        }
    }
}

fn join(outer: &str, inner: &str) -> String {
    match (outer.is_empty(), inner.is_empty()) {
        (_, true) => outer.to_string(),
        (true, false) => inner.to_string(),
        (false, false) => format!("{outer}: {inner}"),
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<novp_core::Error> for CliError {
    fn from(error: novp_core::Error) -> Self {
        CliError::Core { context: None, error }
    }
}

pub type CliResult<T> = Result<T, CliError>;
