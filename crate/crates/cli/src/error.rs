use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Pipeline stage an error belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Parse,
    Group,
    Representation,
    Subspace,
    Design,
    Inverse,
    Reconstruct,
    Dynamics,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Parse => "parse",
            Stage::Group => "group",
            Stage::Representation => "representation",
            Stage::Subspace => "subspace",
            Stage::Design => "design",
            Stage::Inverse => "inverse",
            Stage::Reconstruct => "reconstruct",
            Stage::Dynamics => "dynamics",
            Stage::Output => "output",
        };
        f.write_str(name)
    }
}

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitStatus {
    Pass,
    CheckFailure,
    ConfigError,
    Unrecoverable,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Pass => 0,
            ExitStatus::CheckFailure => 1,
            ExitStatus::ConfigError => 2,
            ExitStatus::Unrecoverable => 3,
        }
    }
}

#[derive(Debug, Clone, Error)]
#[error("{stage} stage: {message}")]
pub struct CliError {
    pub stage: Stage,
    pub message: String,
    pub status: ExitStatus,
}

impl CliError {
    pub fn config(stage: Stage, message: impl fmt::Display) -> Self {
        Self { stage, message: message.to_string(), status: ExitStatus::ConfigError }
    }

    pub fn check(stage: Stage, message: impl fmt::Display) -> Self {
        Self { stage, message: message.to_string(), status: ExitStatus::CheckFailure }
    }

    pub fn unrecoverable(message: impl fmt::Display) -> Self {
        Self { stage: Stage::Design, message: message.to_string(), status: ExitStatus::Unrecoverable }
    }
}
