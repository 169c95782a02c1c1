//! Graphs on the naturals presented by oracles.
//!
//! A graph here is an adjacency predicate plus up to two constructive
//! oracles. The star-witness oracle answers "a vertex above a bound adjacent
//! to everything in U and nothing in W"; hosts need it. The undominated
//! oracle answers "a vertex above a bound not adjacent to (and distinct
//! from) anything in D"; patterns need it. Either may be absent, and
//! operations that need an absent oracle report that instead of guessing.

mod builtins;
mod rado;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::vertex::VertexId;

pub use builtins::{builtin_family, complete_graph, GraphSpec};
pub use rado::{rado_graph, rado_star_witness, rado_undominated};

type AdjFn = dyn Fn(&VertexId, &VertexId) -> bool + Send + Sync;
type WitnessFn =
    dyn Fn(&[VertexId], &[VertexId], &VertexId) -> Result<VertexId> + Send + Sync;
type UndominatedFn = dyn Fn(&[VertexId], &VertexId) -> Result<VertexId> + Send + Sync;

#[derive(Clone)]
pub struct ComputableGraph {
    name: String,
    adjacency: Arc<AdjFn>,
    star_witness: Option<Arc<WitnessFn>>,
    undominated: Option<Arc<UndominatedFn>>,
}

impl fmt::Debug for ComputableGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComputableGraph")
            .field("name", &self.name)
            .field("star_witness", &self.star_witness.is_some())
            .field("undominated", &self.undominated.is_some())
            .finish()
    }
}

impl ComputableGraph {
    pub fn new(name: impl Into<String>, adjacency: Arc<AdjFn>) -> Self {
        ComputableGraph {
            name: name.into(),
            adjacency,
            star_witness: None,
            undominated: None,
        }
    }

    pub fn with_star_witness(mut self, f: Arc<WitnessFn>) -> Self {
        self.star_witness = Some(f);
        self
    }

    pub fn with_undominated(mut self, f: Arc<UndominatedFn>) -> Self {
        self.undominated = Some(f);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Irreflexive by construction: `adjacent(v, v)` is false regardless of
    /// the underlying predicate.
    pub fn adjacent(&self, a: &VertexId, b: &VertexId) -> bool {
        a != b && (self.adjacency)(a, b)
    }

    pub fn adjacency_fn(&self) -> Arc<AdjFn> {
        Arc::clone(&self.adjacency)
    }

    pub fn has_star_witness(&self) -> bool {
        self.star_witness.is_some()
    }

    pub fn has_undominated(&self) -> bool {
        self.undominated.is_some()
    }

    /// Least vertex above `bound`, outside `wanted` and `excluded`, adjacent
    /// to every vertex of `wanted` and to none of `excluded`.
    pub fn star_witness(
        &self,
        wanted: &[VertexId],
        excluded: &[VertexId],
        bound: &VertexId,
    ) -> Result<VertexId> {
        for u in wanted {
            if excluded.contains(u) {
                return Err(Error::Input(format!(
                    "vertex {u} both wanted and excluded"
                )));
            }
        }
        match &self.star_witness {
            Some(f) => f(wanted, excluded, bound),
            None => Err(Error::OracleMissing(format!(
                "graph {} has no star-witness oracle",
                self.name
            ))),
        }
    }

    /// Least vertex above `bound` neither in `others` nor adjacent to any of
    /// its members.
    pub fn undominated(&self, others: &[VertexId], bound: &VertexId) -> Result<VertexId> {
        match &self.undominated {
            Some(f) => f(others, bound),
            None => Err(Error::OracleMissing(format!(
                "graph {} has no undominated-vertex oracle",
                self.name
            ))),
        }
    }
}

/// Scan oracle for locally finite adjacency: walk upward from the bound until
/// a vertex clear of `others` appears. Termination needs every vertex to have
/// finite degree, which the callers guarantee.
pub(crate) fn scan_undominated(
    adjacency: &Arc<AdjFn>,
    others: &[VertexId],
    bound: &VertexId,
) -> VertexId {
    let mut a = bound.succ();
    loop {
        if !others.contains(&a) && others.iter().all(|d| !(adjacency)(&a, d)) {
            return a;
        }
        a = a.succ();
    }
}
