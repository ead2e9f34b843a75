use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-positive photon hopping: xi = {0}")]
    NonPositiveHopping(f64),

    #[error("negative coupling: {name} = {value}")]
    NegativeCoupling { name: &'static str, value: f64 },

    #[error("non-finite parameter: {0}")]
    NonFinite(&'static str),

    #[error("coincident coupling sites")]
    CoincidentSites,

    #[error("index out of range: site {index} not in [0, {n_sites})")]
    IndexOutOfRange { index: usize, n_sites: usize },

    #[error("coupling sites of atom {atom} out of order: {first} >= {second}")]
    UnorderedSites { atom: u8, first: usize, second: usize },

    #[error("lattice too large for dense diagonalization: {n_sites} sites (limit {limit})")]
    DenseCapExceeded { n_sites: usize, limit: usize },

    #[error("eigensolver did not converge for dimension {0}")]
    NoConvergence(usize),

    #[error("state is not normalized: norm^2 = {0}")]
    NotNormalized(f64),

    #[error("state dimension {got} does not match lattice dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("empty phase grid")]
    EmptyPhaseGrid,

    #[error("phase grid is not strictly increasing at index {0}")]
    NonIncreasingGrid(usize),

    #[error("invalid time list: {0}")]
    InvalidTimes(String),
}

pub type Result<T> = std::result::Result<T, Error>;
