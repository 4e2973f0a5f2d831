use serde::Serialize;

use tropicap::construction::ConstructionError;
use tropicap::convexity::ConvexityError;
use tropicap::tropical::TropicalError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const BALANCING: i32 = 1;
    pub const RETRIES_EXHAUSTED: i32 = 2;
    pub const PARSE_OR_CONFIG: i32 = 3;
    pub const INVARIANT: i32 = 4;
    /// The fan is balanced but the certificate does not hold.
    pub const NOT_CERTIFIED: i32 = 5;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Balancing,
    RetriesExhausted,
    Parse,
    Config,
    Io,
    Invariant,
}

/// A failure with the stage it happened in. Printed to stderr as JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub stage: String,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ErrorKind, stage: impl Into<String>, message: impl Into<String>) -> Self {
        CliError { kind, stage: stage.into(), message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Parse, "parse", message)
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Config, "config", message)
    }

    pub fn at(mut self, stage: impl Into<String>) -> Self {
        self.stage = stage.into();
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Balancing => exit::BALANCING,
            ErrorKind::RetriesExhausted => exit::RETRIES_EXHAUSTED,
            ErrorKind::Parse | ErrorKind::Config | ErrorKind::Io => exit::PARSE_OR_CONFIG,
            ErrorKind::Invariant => exit::INVARIANT,
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Diagnostic<'a> {
            error: &'a CliError,
            exit_code: i32,
        }
        serde_json::to_string(&Diagnostic { error: self, exit_code: self.exit_code() }).expect("diagnostic serializes")
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.stage, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        let kind = match &e {
            ConstructionError::RetriesExhausted { .. } => ErrorKind::RetriesExhausted,
            ConstructionError::DimensionBound { .. } | ConstructionError::InvalidConfig(_) => ErrorKind::Config,
            ConstructionError::Invariant(_) | ConstructionError::Polyhedra(_) | ConstructionError::Tropical(_) => {
                ErrorKind::Invariant
            }
        };
        let stage = match &e {
            ConstructionError::RetriesExhausted { stage, .. } => stage.to_string(),
            _ => "build".to_string(),
        };
        CliError::new(kind, stage, e.to_string())
    }
}

impl From<TropicalError> for CliError {
    fn from(e: TropicalError) -> Self {
        let kind = match e {
            TropicalError::NotBalanced { .. } => ErrorKind::Balancing,
            TropicalError::NotPure | TropicalError::NotSimplicial | TropicalError::NotComplete => ErrorKind::Parse,
            _ => ErrorKind::Invariant,
        };
        CliError::new(kind, "tropical", e.to_string())
    }
}

impl From<ConvexityError> for CliError {
    fn from(e: ConvexityError) -> Self {
        match e {
            ConvexityError::Tropical(t) => CliError::from(t).at("certify"),
            ConvexityError::BadPartition(_) => CliError::new(ErrorKind::Parse, "certify", e.to_string()),
            _ => CliError::new(ErrorKind::Invariant, "certify", e.to_string()),
        }
    }
}
