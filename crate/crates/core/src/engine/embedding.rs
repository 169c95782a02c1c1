use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graphs::ComputableGraph;
use crate::vertex::{EdgePair, VertexId};

/// A partial isomorphism from a pattern graph into a host, together with the
/// host edges that carry the pattern's edges.
///
/// Invariant maintained by users: two domain vertices are pattern-adjacent
/// exactly when the host edge between their images has been placed, and
/// every placed edge is a host edge. `check_isomorphism` re-derives this
/// from scratch for verification.
#[derive(Debug, Clone, Default)]
pub struct PartialEmbedding {
    forward: BTreeMap<VertexId, VertexId>,
    inverse: BTreeMap<VertexId, VertexId>,
    placed: BTreeSet<EdgePair>,
}

impl PartialEmbedding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn domain_contains(&self, pv: &VertexId) -> bool {
        self.forward.contains_key(pv)
    }

    pub fn image_contains(&self, hv: &VertexId) -> bool {
        self.inverse.contains_key(hv)
    }

    pub fn image_of(&self, pv: &VertexId) -> Option<&VertexId> {
        self.forward.get(pv)
    }

    pub fn preimage_of(&self, hv: &VertexId) -> Option<&VertexId> {
        self.inverse.get(hv)
    }

    pub fn max_domain(&self) -> Option<&VertexId> {
        self.forward.keys().next_back()
    }

    pub fn domain(&self) -> impl Iterator<Item = &VertexId> {
        self.forward.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> {
        self.forward.iter()
    }

    pub fn placed_edges(&self) -> &BTreeSet<EdgePair> {
        &self.placed
    }

    pub fn insert(&mut self, pv: VertexId, hv: VertexId) -> Result<()> {
        if self.forward.contains_key(&pv) {
            return Err(Error::Input(format!("pattern vertex {pv} already mapped")));
        }
        if self.inverse.contains_key(&hv) {
            return Err(Error::Input(format!("host vertex {hv} already an image")));
        }
        self.forward.insert(pv.clone(), hv.clone());
        self.inverse.insert(hv, pv);
        Ok(())
    }

    pub fn place(&mut self, e: EdgePair) -> Result<()> {
        if !self.inverse.contains_key(e.lo()) || !self.inverse.contains_key(e.hi()) {
            return Err(Error::Input(format!(
                "edge {e} placed outside the embedding's image"
            )));
        }
        if !self.placed.insert(e.clone()) {
            return Err(Error::Input(format!("edge {e} placed twice")));
        }
        Ok(())
    }

    /// Full re-check of the partial-isomorphism invariant; returns
    /// descriptions of every violation found.
    pub fn check_isomorphism(&self, pattern: &ComputableGraph) -> Vec<String> {
        let mut problems = Vec::new();
        let entries: Vec<(&VertexId, &VertexId)> = self.forward.iter().collect();
        for (i, (pu, hu)) in entries.iter().enumerate() {
            for (pv, hv) in entries.iter().skip(i + 1) {
                let in_pattern = pattern.adjacent(pu, pv);
                let edge = EdgePair::new((*hu).clone(), (*hv).clone())
                    .expect("images are distinct");
                let carried = self.placed.contains(&edge);
                if in_pattern && !carried {
                    problems.push(format!(
                        "pattern edge {{{pu},{pv}}} has no placed edge {edge}"
                    ));
                }
                if !in_pattern && carried {
                    problems.push(format!(
                        "placed edge {edge} joins nonadjacent pattern vertices {pu},{pv}"
                    ));
                }
            }
        }
        for e in &self.placed {
            if !self.inverse.contains_key(e.lo()) || !self.inverse.contains_key(e.hi()) {
                problems.push(format!("placed edge {e} leaves the image"));
            }
        }
        problems
    }
}
