use std::path::PathBuf;

/// Failures surfaced by the command layer, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Rejected configuration; every entry names the offending field.
    #[error("invalid configuration:\n{}", format_issues(.0))]
    Config(Vec<FieldIssue>),
    #[error("{0}")]
    Runtime(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl AppError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        AppError::Config(vec![FieldIssue::new(field, message)])
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }

    /// 2 for configuration problems, 3 for everything that fails while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Runtime(_) | AppError::Io { .. } => 3,
        }
    }
}

impl From<adiaprep_core::Error> for AppError {
    fn from(e: adiaprep_core::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldIssue {
    pub field: String,
    pub message: String,
}

impl FieldIssue {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

fn format_issues(issues: &[FieldIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  {}: {}", i.field, i.message))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T, E = AppError> = std::result::Result<T, E>;
