use std::fmt;

use cylnav::Error;

/// Process exit statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Code {
    Ok = 0,
    Verification = 1,
    Admissibility = 2,
    Integration = 3,
    Hypothesis = 4,
    RootFinding = 5,
}

#[derive(Debug)]
pub struct Failure {
    pub code: Code,
    pub message: String,
}

impl Failure {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub fn classify(e: &Error) -> Code {
    match e {
        Error::WindTooStrong { .. } | Error::WindStep { .. } | Error::InvalidInput(_) => Code::Admissibility,
        Error::Domain { .. }
        | Error::StepUnderflow { .. }
        | Error::TooManySteps { .. }
        | Error::MissingArclength
        | Error::NonMonotone { .. } => Code::Integration,
        Error::Quadrature { .. }
        | Error::NoRoot(_)
        | Error::SingularTurningPoint { .. }
        | Error::NoConvergence { .. } => Code::RootFinding,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::new(classify(&e), e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::new(Code::Integration, format!("i/o: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self::new(Code::Integration, format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self::new(Code::Admissibility, format!("json: {e}"))
    }
}
