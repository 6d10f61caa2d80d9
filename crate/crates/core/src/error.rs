use thiserror::Error;

use crate::decomposition::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("graph is disconnected: no path between vertex {0} and vertex {1}")]
    Disconnected(usize, usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("hub set is empty")]
    NoHubs,

    #[error("radius {0} is infeasible: some demand has no vertex within that routing cost")]
    RadiusInfeasible(u64),

    #[error("infeasible instance: {0}")]
    Infeasible(String),

    #[error("enumeration cap exceeded: {subsets} subsets of {hubs} hub locations with k = {k} (cap {cap})")]
    CapExceeded {
        subsets: u128,
        hubs: usize,
        k: usize,
        cap: u128,
    },

    #[error("tree decomposition is invalid: {0}")]
    InvalidDecomposition(Violation),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
