use std::fmt;

use thiserror::Error;

/// Coarse error classification, surfaced in CLI messages and exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    UserInput,
    Capacity,
    TheoryViolation,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::UserInput => 1,
            ErrorClass::Capacity => 2,
            ErrorClass::TheoryViolation => 3,
        }
    }
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorClass::UserInput => "user-input",
            ErrorClass::Capacity => "capacity",
            ErrorClass::TheoryViolation => "theory-violation",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed input or a violated precondition.
    #[error("user-input error at {}: {message} (hint: {hint})", at(location))]
    UserInput {
        location: String,
        message: String,
        hint: String,
    },
    /// A brute-force bound was exceeded.
    #[error("capacity error at {}: {message} (hint: {hint})", at(location))]
    Capacity {
        location: String,
        message: String,
        hint: String,
    },
    /// A computation that the theory guarantees to succeed failed.
    #[error("theory violation at {}: {message}; this indicates an implementation bug (hint: {hint})", at(location))]
    TheoryViolation {
        location: String,
        message: String,
        hint: String,
    },
}

fn at(location: &str) -> &str {
    if location.is_empty() {
        "top level"
    } else {
        location
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn input(location: impl Into<String>, message: impl Into<String>, hint: impl Into<String>) -> Self {
        Error::UserInput {
            location: location.into(),
            message: message.into(),
            hint: hint.into(),
        }
    }

    pub fn precondition(location: impl Into<String>, message: impl Into<String>, hint: impl Into<String>) -> Self {
        Error::UserInput {
            location: location.into(),
            message: format!("precondition failed: {}", message.into()),
            hint: hint.into(),
        }
    }

    pub fn capacity(location: impl Into<String>, message: impl Into<String>, hint: impl Into<String>) -> Self {
        Error::Capacity {
            location: location.into(),
            message: message.into(),
            hint: hint.into(),
        }
    }

    pub fn theory(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::TheoryViolation {
            location: location.into(),
            message: message.into(),
            hint: "please report the input that triggered this".into(),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::UserInput { .. } => ErrorClass::UserInput,
            Error::Capacity { .. } => ErrorClass::Capacity,
            Error::TheoryViolation { .. } => ErrorClass::TheoryViolation,
        }
    }

    pub fn location(&self) -> &str {
        match self {
            Error::UserInput { location, .. }
            | Error::Capacity { location, .. }
            | Error::TheoryViolation { location, .. } => location,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Error::UserInput { message, .. }
            | Error::Capacity { message, .. }
            | Error::TheoryViolation { message, .. } => message,
        }
    }

    /// Prefix the location with an outer path segment.
    pub fn within(mut self, outer: &str) -> Self {
        let loc = match &mut self {
            Error::UserInput { location, .. }
            | Error::Capacity { location, .. }
            | Error::TheoryViolation { location, .. } => location,
        };
        *loc = if loc.is_empty() {
            outer.to_string()
        } else {
            format!("{outer}{loc}")
        };
        self
    }
}
