use procsim::families::FamilyError;
use procsim::matchkit::MatchError;

/// Every failure a subcommand can end with, mapped onto the process exit
/// code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    UnknownFamily(String),
    #[error("{0}")]
    InvalidParams(String),
    #[error("{0}")]
    Unwritable(String),
    #[error("{0}")]
    MalformedInput(String),
    #[error("{0}")]
    JudgeUnreachable(String),
    #[error("{0}")]
    EmptyResults(String),
    #[error("{0}")]
    PortBusy(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Other(_) => 1,
            CliError::UnknownFamily(_) => 2,
            CliError::InvalidParams(_) => 3,
            CliError::Unwritable(_) => 4,
            CliError::MalformedInput(_) => 5,
            CliError::JudgeUnreachable(_) => 6,
            CliError::EmptyResults(_) => 7,
            CliError::PortBusy(_) => 8,
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::UnknownFamily(_) => CliError::UnknownFamily(e.to_string()),
            FamilyError::Param(_) | FamilyError::TooSmall(..) => CliError::InvalidParams(e.to_string()),
            FamilyError::Generation(_) => CliError::Other(e.to_string()),
        }
    }
}

impl From<MatchError> for CliError {
    fn from(e: MatchError) -> Self {
        let msg = e.to_string();
        match e {
            MatchError::JudgeTimeout { .. } | MatchError::JudgeUnavailable { .. } => CliError::JudgeUnreachable(msg),
            MatchError::EmptyResults => CliError::EmptyResults(msg),
            MatchError::InsufficientFamilies { .. }
            | MatchError::InsufficientSeeds { .. }
            | MatchError::Malformed { .. }
            | MatchError::UnknownTrial(_)
            | MatchError::ChoiceOutOfRange(_) => CliError::MalformedInput(msg),
            MatchError::Io { .. } => CliError::MalformedInput(msg),
            _ => CliError::Other(msg),
        }
    }
}
