use thiserror::Error;

use crate::network::DeviceId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("self-loop on device {0}")]
    SelfLoop(DeviceId),

    #[error("duplicate link between {0} and {1}")]
    DuplicateLink(DeviceId, DeviceId),

    #[error("link references unknown device {0}")]
    DanglingDevice(DeviceId),

    #[error("invalid link {a}-{b}: {reason}")]
    InvalidLink {
        a: DeviceId,
        b: DeviceId,
        reason: &'static str,
    },

    #[error("unknown device {0}")]
    UnknownDevice(DeviceId),

    #[error("device {0} is down")]
    DeviceDown(DeviceId),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("topology error: {0}")]
    Topology(String),

    #[error("device {0} cannot reach every up device")]
    Unreachable(DeviceId),

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no storage left for file {file}: every fog device is full and the cloud already holds a replica")]
    StorageExhausted { file: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
