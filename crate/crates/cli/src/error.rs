use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or arguments; exit code 2.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] quadcalc::Error),
    /// A check suite ran but some rows failed.
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    /// Short machine-readable name of the failure.
    pub fn kind(&self) -> String {
        match self {
            CliError::Usage(_) => "usage".into(),
            CliError::Domain(e) => {
                let debug = format!("{e:?}");
                let name = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("domain");
                name.to_string()
            }
            CliError::ChecksFailed(_) => "checksFailed".into(),
            CliError::Io { .. } => "io".into(),
            CliError::Csv(_) => "csv".into(),
            CliError::Json(_) => "json".into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
