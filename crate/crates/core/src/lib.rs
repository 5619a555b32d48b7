//! Decompositional ioco testing: suspension semantics, composition,
//! conformance and inclusion checks, quotient automata, and on-the-fly
//! testing of components against a system specification and a platform.

pub mod canonical;
pub mod composition;
pub mod conformance;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod interface;
pub mod model;
pub mod onthefly;
pub mod quotient;
pub mod random;
pub mod semantics;

pub use error::{Error, Result};
pub use format::{parse_iolts, parse_model, parse_sa, serialize};
pub use model::{
    format_word, parse_word, Action, ActionKind, Alphabet, Iolts, Label, Limits, Lts, LtsBuilder,
    Model, ModelKind, StateId, SuspensionAutomaton,
};
