//! Satisfiability checking for coalgebraic modal fixpoint logics.
//!
//! The pipeline: [`parse`] a formula, build its [`Closure`], track formula
//! evaluations with the automaton in [`tracking`], determinize it on the fly
//! ([`determinize`]), and explore and solve the satisfiability game
//! ([`game`], [`solve`]).

pub mod analysis;
pub mod bench;
pub mod closure;
pub mod determinize;
pub mod error;
pub mod formula;
pub mod game;
pub mod logic;
pub mod onestep;
pub mod oracle;
pub mod parse;
pub mod solve;
pub mod tracking;

pub use closure::{Closure, NodeId};
pub use error::{Error, Result};
pub use formula::{AgentSet, FixKind, Formula, ModalOp};
pub use game::{run, Engine, Report, RunConfig, Schedule, Stats, Verdict};
pub use logic::Logic;
pub use parse::parse;
