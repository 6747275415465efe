//! MIRELA front end: parsing, implicit-target completion and printing.

mod ast;
mod parser;
mod print;
mod resolve;

use std::fmt;

use thiserror::Error;

pub use ast::{Component, ComponentDecl, ComponentKind, Interval, Position, Source, SpecAst};
pub use parser::parse;
pub use print::pretty_print;
pub use resolve::{resolve_targets, ResolvedSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecErrorKind {
    Lexical,
    Syntax,
    /// Wrong number or shape of parameters for a component kind.
    Arity,
    DuplicateId,
    DuplicateSource,
    DuplicateTarget,
    UnknownComponent,
    /// A declared target does not list the declarer among its sources.
    TargetNotSource,
    KindRule,
}

impl fmt::Display for SpecErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpecErrorKind::Lexical => "lexical error",
            SpecErrorKind::Syntax => "syntax error",
            SpecErrorKind::Arity => "shape error",
            SpecErrorKind::DuplicateId => "duplicate component",
            SpecErrorKind::DuplicateSource => "duplicate source",
            SpecErrorKind::DuplicateTarget => "duplicate target",
            SpecErrorKind::UnknownComponent => "unknown component",
            SpecErrorKind::TargetNotSource => "target mismatch",
            SpecErrorKind::KindRule => "kind rule violation",
        };
        f.write_str(s)
    }
}

/// Error in a MIRELA specification, located at a line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}:{}: {kind}: {message}", position.line, position.column)]
pub struct SpecError {
    pub kind: SpecErrorKind,
    pub position: Position,
    pub message: String,
}

impl SpecError {
    pub fn new(kind: SpecErrorKind, position: Position, message: impl Into<String>) -> Self {
        SpecError {
            kind,
            position,
            message: message.into(),
        }
    }

    pub(crate) fn lexical(position: Position, message: impl Into<String>) -> Self {
        Self::new(SpecErrorKind::Lexical, position, message)
    }

    pub(crate) fn syntax(position: Position, message: impl Into<String>) -> Self {
        Self::new(SpecErrorKind::Syntax, position, message)
    }

    pub(crate) fn arity(position: Position, message: impl Into<String>) -> Self {
        Self::new(SpecErrorKind::Arity, position, message)
    }

    pub(crate) fn duplicate(position: Position, id: &str) -> Self {
        Self::new(
            SpecErrorKind::DuplicateId,
            position,
            format!("component `{id}` is declared twice"),
        )
    }
}

/// Parses and resolves in one step.
pub fn load(text: &str) -> Result<ResolvedSpec, SpecError> {
    resolve_targets(&parse(text)?)
}
