//! Satisfiability and equivalence of circuits over finite algebras.
//!
//! The crate couples a small computational universal algebra toolkit
//! (congruence lattices, the modular commutator, minimal sets and type
//! labels) with solvers for the circuit problems CSAT, MCSAT, SCSAT and
//! CEQV. A classification pass decides which solver applies.

pub mod algebra;
pub mod circuit;
pub mod cli;
pub mod clone;
pub mod commutator;
pub mod congruence;
pub mod error;
pub mod gen;
mod lexer;
pub mod malcev;
pub mod partition;
pub mod reductions;
pub mod solvers;
pub mod structure;
pub mod tct;
pub mod term;
pub mod zoo;

pub use algebra::{Elem, FiniteAlgebra, Operation};
pub use error::{Error, Result};
pub use partition::Partition;
pub use term::Term;

use serde::Serialize;

/// Three-valued answer for properties whose search may hit a cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            _ => Tri::Unknown,
        }
    }
}

impl std::ops::Not for Tri {
    type Output = Tri;

    fn not(self) -> Tri {
        match self {
            Tri::Yes => Tri::No,
            Tri::No => Tri::Yes,
            Tri::Unknown => Tri::Unknown,
        }
    }
}

impl std::fmt::Display for Tri {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        })
    }
}
