use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graphs::ComputableGraph;
use crate::vertex::VertexId;

/// Spread a pattern out with isolated vertices: original vertex n becomes
/// n * (interleave + 1) and everything in between is edgeless. The result
/// always has an undominated-vertex oracle, because the padding vertices
/// dominate nothing; this upgrades patterns like star forests whose every
/// vertex is dominated.
pub fn pad_with_isolated(
    pattern: &ComputableGraph,
    interleave: u64,
) -> Result<ComputableGraph> {
    if interleave == 0 {
        return Err(Error::Config("interleave must be positive".into()));
    }
    let stride = interleave + 1;
    let inner = pattern.adjacency_fn();
    let inner_for_scan = Arc::clone(&inner);
    let adjacency = Arc::new(move |a: &VertexId, b: &VertexId| {
        a.is_multiple_of(stride)
            && b.is_multiple_of(stride)
            && inner(&a.div_floor_by(stride), &b.div_floor_by(stride))
    });
    let adjacency_for_scan: Arc<dyn Fn(&VertexId, &VertexId) -> bool + Send + Sync> =
        Arc::new(move |a: &VertexId, b: &VertexId| {
            a.is_multiple_of(stride)
                && b.is_multiple_of(stride)
                && inner_for_scan(&a.div_floor_by(stride), &b.div_floor_by(stride))
        });
    let name = format!("pad({},{interleave})", pattern.name());
    Ok(
        ComputableGraph::new(name, adjacency).with_undominated(Arc::new(
            move |others: &[VertexId], bound: &VertexId| {
                // a padding vertex just past the bound is always reachable,
                // so the upward scan stops quickly
                Ok(crate::graphs::scan_undominated(
                    &adjacency_for_scan,
                    others,
                    bound,
                ))
            },
        )),
    )
}
