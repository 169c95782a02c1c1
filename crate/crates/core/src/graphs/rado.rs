use std::collections::BTreeMap;
use std::sync::Arc;

use crate::digits::{least_above_with_digits, DigitRule, DigitSet};
use crate::error::Result;
use crate::vertex::VertexId;

/// Digit-defined graph on the naturals: with x < y, the edge {x,y} is
/// present exactly when digit x of y (in the set's base) lies in the set.
///
/// Both oracles are closed-form. The star witness is the least value above
/// the bound and above every constrained vertex whose digit at each wanted
/// position lies in the set and at each excluded position avoids it; the
/// undominated oracle additionally avoids the positions of the given
/// vertices. Constrained positions larger than the value being built read as
/// digit 0, so constraints at astronomically large vertices are either free
/// (when digit 0 satisfies them) or unservable.
pub fn rado_graph(set: DigitSet) -> super::ComputableGraph {
    let name = format!("rado({},{{{}}})", set.q(), join_digits(&set));
    let adj_set = set.clone();
    let wit_set = set.clone();
    let und_set = set.clone();
    super::ComputableGraph::new(
        name,
        Arc::new(move |a: &VertexId, b: &VertexId| adj_set.adjacent(a, b)),
    )
    .with_star_witness(Arc::new(
        move |wanted: &[VertexId], excluded: &[VertexId], bound: &VertexId| {
            rado_star_witness(&wit_set, wanted, excluded, bound)
        },
    ))
    .with_undominated(Arc::new(move |others: &[VertexId], bound: &VertexId| {
        rado_undominated(&und_set, others, bound)
    }))
}

fn join_digits(set: &DigitSet) -> String {
    set.digits()
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Least z above `bound` and above every listed vertex that is adjacent to
/// all of `wanted` and none of `excluded`.
pub fn rado_star_witness(
    set: &DigitSet,
    wanted: &[VertexId],
    excluded: &[VertexId],
    bound: &VertexId,
) -> Result<VertexId> {
    let mut rules: BTreeMap<VertexId, DigitRule> = BTreeMap::new();
    for u in wanted {
        rules.insert(u.clone(), DigitRule::In);
    }
    for w in excluded {
        rules.insert(w.clone(), DigitRule::Out);
    }
    let floor = floor_above(bound, wanted.iter().chain(excluded));
    least_above_with_digits(set, &rules, &floor)
}

/// Least z above `bound`, distinct from and nonadjacent to every vertex in
/// `others`.
pub fn rado_undominated(
    set: &DigitSet,
    others: &[VertexId],
    bound: &VertexId,
) -> Result<VertexId> {
    let mut rules: BTreeMap<VertexId, DigitRule> = BTreeMap::new();
    for d in others {
        rules.insert(d.clone(), DigitRule::Out);
    }
    let floor = floor_above(bound, others.iter());
    least_above_with_digits(set, &rules, &floor)
}

fn floor_above<'a>(
    bound: &VertexId,
    constrained: impl Iterator<Item = &'a VertexId>,
) -> VertexId {
    let mut floor = bound.clone();
    for v in constrained {
        if *v > floor {
            floor = v.clone();
        }
    }
    floor
}
