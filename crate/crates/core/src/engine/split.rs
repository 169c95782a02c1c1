use crate::digits::DigitSet;
use crate::error::Result;
use crate::vertex::EdgePair;

use super::{Engine, Family, FamilyMember, HostGraph};

/// The two halves of a decomposition of the complete graph.
///
/// With x < y, the edge {x,y} goes to the even half when digit x of y is 0
/// in binary and to the odd half when it is 1, so the two hosts partition
/// every edge. Family members alternate: even-indexed members are built
/// inside the even half, odd-indexed inside the odd half.
pub struct SplitOutcome {
    pub even: Engine,
    pub odd: Engine,
}

impl SplitOutcome {
    /// No edge may appear on both sides; with digit-complementary hosts this
    /// is structural, and this check re-derives it.
    pub fn overlapping_edges(&self) -> Vec<EdgePair> {
        self.even
            .used_edges()
            .keys()
            .filter(|e| self.odd.used_edges().contains_key(*e))
            .cloned()
            .collect()
    }
}

/// Decompose the complete graph by splitting it into the two binary digit
/// classes and running one construction in each.
pub fn factorize_complete_via_split(
    family: &Family,
    stages: u64,
) -> Result<SplitOutcome> {
    let members = family.members();
    let len = members.len();
    let side_members = |offset: usize| -> Vec<FamilyMember> {
        (0..len).map(|i| members[(2 * i + offset) % len].clone()).collect()
    };
    let mut even = Engine::new(
        HostGraph::Rado(DigitSet::new(2, [0]).expect("valid")),
        Family::repeating(side_members(0))?,
    )?;
    let mut odd = Engine::new(
        HostGraph::Rado(DigitSet::new(2, [1]).expect("valid")),
        Family::repeating(side_members(1))?,
    )?;
    even.run_stages(stages)?;
    odd.run_stages(stages)?;
    Ok(SplitOutcome { even, odd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::parse_pattern;

    fn family(specs: &[&str]) -> Family {
        Family::repeating(specs.iter().map(|s| parse_pattern(s).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn sides_partition_the_complete_graph() {
        let out =
            factorize_complete_via_split(&family(&["path", "matching"]), 12).unwrap();
        assert!(out.overlapping_edges().is_empty());
        // every used edge is an edge of its side's host
        for (e, _) in out.even.used_edges() {
            assert!(out.even.host().adjacent(e.lo(), e.hi()));
            assert!(!out.odd.host().adjacent(e.lo(), e.hi()));
        }
        for (e, _) in out.odd.used_edges() {
            assert!(out.odd.host().adjacent(e.lo(), e.hi()));
        }
    }

    #[test]
    fn member_alternation() {
        // family [a, b, c]: even side gets a, c, b cycling; odd side b, a, c
        let out = factorize_complete_via_split(
            &family(&["path", "matching", "cliques:3"]),
            6,
        )
        .unwrap();
        let even_names: Vec<&str> =
            out.even.factors().iter().map(|f| f.name()).collect();
        let odd_names: Vec<&str> = out.odd.factors().iter().map(|f| f.name()).collect();
        assert_eq!(
            even_names,
            ["path", "cliques(3)", "matching", "path", "cliques(3)", "matching"]
        );
        assert_eq!(
            odd_names,
            ["matching", "path", "cliques(3)", "matching", "path", "cliques(3)"]
        );
    }

    #[test]
    fn both_sides_satisfy_their_stage_conditions() {
        let out = factorize_complete_via_split(&family(&["path"]), 10).unwrap();
        for side in [&out.even, &out.odd] {
            assert!(side.check_back_and_forth().is_empty());
            assert!(side.check_embeddings().is_empty());
        }
        // the union covers the first few complete-graph edges: each colex
        // edge belongs to the host of exactly one side and that side covers
        // its own edge prefix
        let mut even = out.even;
        let mut odd = out.odd;
        assert!(even.check_cover_prefix(10).unwrap().is_empty());
        assert!(odd.check_cover_prefix(10).unwrap().is_empty());
        let all_used: Vec<EdgePair> = even
            .used_edges()
            .keys()
            .chain(odd.used_edges().keys())
            .cloned()
            .collect();
        for k in 0..6u64 {
            let e = crate::vertex::edge_pair(&crate::vertex::EdgeIndex::from(k));
            assert!(
                all_used.contains(&e),
                "complete-graph edge {e} missed by both sides"
            );
        }
    }
}
