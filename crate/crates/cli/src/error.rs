use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("no subgroup named {0:?} in the presentation file")]
    UnknownSubgroup(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] lpres_core::Error),
}

impl CliError {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        CliError::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// 2 when a computation ran out of budget, 1 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_resource_limit() => 2,
            _ => 1,
        }
    }
}
