use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polygon needs at least 3 vertices, got {0}")]
    DegeneratePolygon(usize),
    #[error("apex lies inside or on the unit disk")]
    ApexInDisk,
    #[error("unit disks overlap or touch")]
    DisksNotDisjoint,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid gadget parameters: {0}")]
    InvalidGadget(String),
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("point {index} lies outside its region")]
    OutsideRegion { index: usize },
    #[error("enumeration budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("assignment does not satisfy the formula")]
    Unsatisfied,
    #[error("compile failed: {0}")]
    Compile(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
