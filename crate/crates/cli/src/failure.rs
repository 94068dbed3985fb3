use std::process::ExitCode;

use steerbound::Error;

/// Maps onto the exit-code contract: 2 parse/validation, 3 math,
/// 4 assertion, 5 verification failure.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Math(anyhow::Error),
    Assertion(String),
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Input(_) => 2,
            Failure::Math(_) => 3,
            Failure::Assertion(_) => 4,
            Failure::Verification(_) => 5,
        })
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Input(e) => format!("input error: {e:#}"),
            Failure::Math(e) => format!("math error: {e:#}"),
            Failure::Assertion(m) => format!("assertion failed: {m}"),
            Failure::Verification(m) => format!("verification failed: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DimensionMismatch { .. }
            | Error::NotSquare { .. }
            | Error::NonFinite { .. }
            | Error::NonOrthonormal { .. }
            | Error::IncompleteBasis { .. }
            | Error::NotCompleteToIdentity { .. }
            | Error::NotHermitian { .. }
            | Error::InvalidState(_)
            | Error::BadParameter(_)
            | Error::BadFactorization { .. }
            | Error::InvalidProbability { .. }
            | Error::BadWeights(_)
            | Error::BadSpectrum(_)
            | Error::SettingCountMismatch { .. }
            | Error::LengthMismatch { .. }
            | Error::RangeError(_)
            | Error::GridTooLarge { .. }
            | Error::KOutOfRange { .. }
            | Error::TooFewSettings { .. } => Failure::Input(e.into()),
            other => Failure::Math(other.into()),
        }
    }
}

pub trait InputContext<T> {
    /// Classifies any error as a parse/validation failure.
    fn input(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> InputContext<T> for Result<T, E> {
    fn input(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Input(e.into()))
    }
}
