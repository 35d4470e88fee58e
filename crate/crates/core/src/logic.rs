use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::formula::ModalOp;

/// The supported logic instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Logic {
    /// Relational μ-calculus over arbitrary frames.
    K,
    /// Relational μ-calculus over serial frames.
    KD,
    /// Graded μ-calculus over multigraphs.
    Graded,
    /// Alternating-time μ-calculus over concurrent game frames.
    Amc,
}

impl Logic {
    pub const ALL: [Logic; 4] = [Logic::K, Logic::KD, Logic::Graded, Logic::Amc];

    pub fn admits(self, op: ModalOp) -> bool {
        match self {
            Logic::K | Logic::KD => matches!(op, ModalOp::Diamond | ModalOp::Box),
            Logic::Graded => matches!(op, ModalOp::AtLeast(_) | ModalOp::AllBut(_)),
            Logic::Amc => matches!(op, ModalOp::Enforce(_) | ModalOp::Allow(_)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Logic::K => "k",
            Logic::KD => "kd",
            Logic::Graded => "graded",
            Logic::Amc => "amc",
        }
    }

    pub fn has_tableau(self) -> bool {
        !matches!(self, Logic::Graded)
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Logic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "k" => Ok(Logic::K),
            "kd" => Ok(Logic::KD),
            "graded" => Ok(Logic::Graded),
            "amc" | "atl" | "coalition" => Ok(Logic::Amc),
            _ => Err(Error::Unknown { kind: "logic", value: s.to_string() }),
        }
    }
}
