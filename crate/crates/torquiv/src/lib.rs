//! Exact computations with quiver polyhedra ∇(Q,θ) and the toric varieties
//! they define: lattice points, vertices, tightening, prime decomposition,
//! skeleton classification, and minimal binomial generators of the toric
//! ideal with degree-bound certificates.
//!
//! All arithmetic is over the integers or exact rationals.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod ideal;
pub mod lp;
pub mod polytope;
pub mod quiver;
pub mod reductions;

pub use error::{Error, Result};
pub use quiver::{IntFlow, Quiver, Weight};

/// Default cap on backtracking nodes for enumerations.
pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

/// Resource caps shared by the enumerating operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_nodes: DEFAULT_MAX_NODES }
    }
}

/// Counts backtracking nodes against a [`Limits`] budget.
#[derive(Debug)]
pub(crate) struct Budget {
    used: u64,
    max: u64,
    what: &'static str,
}

impl Budget {
    pub(crate) fn new(limits: &Limits, what: &'static str) -> Budget {
        Budget { used: 0, max: limits.max_nodes, what }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.max {
            return Err(Error::CapExceeded { what: format!("{} nodes", self.what), limit: self.max });
        }
        Ok(())
    }
}
