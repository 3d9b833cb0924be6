//! Finite-field arithmetic: the tower F_p ⊂ F_q ⊂ F_{q^3} and flat search
//! fields used for exhaustive sweeps.

pub mod ext;
pub(crate) mod poly;
pub mod tower;

use serde::Serialize;
use std::fmt;
use thiserror::Error;

pub use ext::{ExtField, Fe, TowerEmbedding};
pub use tower::FieldTower;

/// Which field of the tower an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Level {
    Prime,
    Base,
    Cubic,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Level::Prime => "prime",
            Level::Base => "base",
            Level::Cubic => "cubic",
        };
        f.write_str(s)
    }
}

/// A tower element: a canonical integer encoding tagged with its level.
///
/// Codes are little-endian digit strings (base `p` inside F_q, base `q` for
/// the cubic layer). A subfield element has the same code at every level it
/// belongs to, so embedding is just a relabelling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub level: Level,
    pub code: u32,
}

impl Element {
    pub const fn new(level: Level, code: u32) -> Self {
        Element { level, code }
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }

    /// Same element viewed at a larger level.
    pub fn lift(self, level: Level) -> Self {
        Element {
            level: self.level.max(level),
            code: self.code,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field of size {size} exceeds the limit {limit}")]
    TooLarge { size: u64, limit: u64 },
    #[error("expected an element of the {expected} field, got {found}")]
    WrongLevel { expected: Level, found: Level },
    #[error("code {code} out of range for a field of size {size}")]
    OutOfRange { code: u64, size: u64 },
}
