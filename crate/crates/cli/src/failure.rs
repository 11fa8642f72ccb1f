use std::fmt;

/// A run that could not complete, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const INPUT: u8 = 2;
pub const CONSISTENCY: u8 = 3;

pub fn input(message: impl Into<String>) -> Failure {
    Failure { code: INPUT, message: message.into() }
}

pub fn consistency(message: impl Into<String>) -> Failure {
    Failure { code: CONSISTENCY, message: message.into() }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<nuca::Error> for Failure {
    fn from(e: nuca::Error) -> Self {
        match e {
            nuca::Error::Consistency(_) => consistency(e.to_string()),
            _ => input(e.to_string()),
        }
    }
}
