use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("operator {op} at {pos} is not available in logic {logic}")]
    OperatorNotInLogic { op: String, logic: String, pos: usize },
    #[error("unbound variable {name} at {pos}")]
    UnboundVariable { name: String, pos: usize },
    #[error("agent {agent} at {pos} is out of range 1..={max}")]
    AgentOutOfRange { agent: u32, max: u32, pos: usize },
    #[error("variable {name} at {pos} occurs under an odd number of negations")]
    NegativeVariable { name: String, pos: usize },
    #[error("formula is outside the fragment supported by {0}")]
    UnsupportedFragment(String),
    #[error("the tableau engine is not available for logic {0}")]
    UnsupportedEngine(String),
    #[error("resource budget exhausted: {0}")]
    Budget(String),
    #[error("unknown {kind} '{value}'")]
    Unknown { kind: &'static str, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;
