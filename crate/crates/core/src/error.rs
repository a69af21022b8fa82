use thiserror::Error;

use crate::majorana::QuadraticGenerator;

/// Errors raised by the library.
///
/// Variants are grouped so that a front end can map them onto exit codes:
/// parse failures, invariant violations, search exhaustion and enumeration
/// budget overruns each get their own family.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operand sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("path is not closed")]
    OpenPath,

    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),

    #[error("missing {0}")]
    Missing(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("code definition rejected: {0}")]
    Rejected(Violation),

    #[error("total occupation parity is odd")]
    OddParity,

    #[error("no parity-fixing edge in component containing vertex {0}")]
    NoParityFix(usize),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("enumeration of {requested} strings exceeds the budget; largest feasible weight bound is {feasible}")]
    Budget { requested: u128, feasible: usize },
}

/// Why a code definition was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("image of {0} is not Hermitian")]
    NotHermitian(Gen),

    #[error("{first} and {second} have the wrong commutation relation")]
    Commutation { first: Gen, second: Gen },

    #[error("{generator} acts on qubit {qubit}, which is not incident to it")]
    Locality { generator: Gen, qubit: usize },

    #[error("{form} on edge ({}, {}) has weight {weight} < {min}", edge.0, edge.1)]
    Weight { edge: (usize, usize), form: &'static str, weight: usize, min: usize },

    #[error("boundary family {family}_{index}: {reason}")]
    Boundary { family: char, index: usize, reason: String },
}

/// Display wrapper naming a generator as `eta_k` or `xi_jk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gen(pub QuadraticGenerator);

impl std::fmt::Display for Gen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            QuadraticGenerator::Vertex(k) => write!(f, "eta_{k}"),
            QuadraticGenerator::Edge(j, k) => write!(f, "xi_({j},{k})"),
        }
    }
}

impl Error {
    pub(crate) fn size(left: usize, right: usize) -> Self {
        Error::SizeMismatch { left, right }
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
