use std::str::FromStr;
use std::sync::Arc;

use crate::digits::DigitSet;
use crate::error::{Error, Result};
use crate::vertex::VertexId;

use super::{rado_graph, scan_undominated, ComputableGraph};

/// The complete graph on the naturals. Its star witness is one past the
/// larger of the bound and the wanted vertices; excluding anything is
/// impossible because every pair is adjacent. No vertex is ever undominated,
/// so that oracle is absent.
pub fn complete_graph() -> ComputableGraph {
    ComputableGraph::new("complete", Arc::new(|a: &VertexId, b: &VertexId| a != b))
        .with_star_witness(Arc::new(
            |wanted: &[VertexId], excluded: &[VertexId], bound: &VertexId| {
                if !excluded.is_empty() {
                    return Err(Error::WitnessImpossible(
                        "every vertex of the complete graph is adjacent to the \
                         excluded vertices"
                            .into(),
                    ));
                }
                let mut floor = bound.clone();
                for u in wanted {
                    if u > &floor {
                        floor = u.clone();
                    }
                }
                Ok(floor.succ())
            },
        ))
}

/// Specification of a pattern graph, parseable from the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    /// Vertices n and n+1 adjacent.
    Path,
    /// Rooted tree in breadth-first numbering: the root has `degree`
    /// children, every other vertex has `degree - 1`, so all degrees equal
    /// `degree`.
    Tree { degree: u64 },
    /// Edges {2i, 2i+1}.
    Matching,
    /// Complete graphs on consecutive blocks of `size` vertices.
    Cliques { size: u64 },
    /// Digit-defined graph.
    Rado { q: u64, digits: Vec<u64> },
    /// `count` disjoint infinite stars: centers 0..count, leaf v >= count
    /// attached to v mod count.
    Stars { count: u64 },
}

impl std::fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphSpec::Path => write!(f, "path"),
            GraphSpec::Tree { degree } => write!(f, "tree:{degree}"),
            GraphSpec::Matching => write!(f, "matching"),
            GraphSpec::Cliques { size } => write!(f, "cliques:{size}"),
            GraphSpec::Rado { q, digits } => {
                write!(f, "rado:{q}:")?;
                for (i, d) in digits.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
            GraphSpec::Stars { count } => write!(f, "star:{count}"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or("");
        let arg = |p: Option<&str>| -> Result<u64> {
            p.ok_or_else(|| Error::Input(format!("{head}: missing parameter in {s:?}")))?
                .parse()
                .map_err(|_| Error::Input(format!("bad parameter in {s:?}")))
        };
        let spec = match head {
            "path" => GraphSpec::Path,
            "tree" => GraphSpec::Tree { degree: arg(parts.next())? },
            "matching" => GraphSpec::Matching,
            "cliques" => GraphSpec::Cliques { size: arg(parts.next())? },
            "star" | "stars" => GraphSpec::Stars { count: arg(parts.next())? },
            "rado" => {
                let q = arg(parts.next())?;
                let digit_part = parts
                    .next()
                    .ok_or_else(|| Error::Input(format!("rado: missing digits in {s:?}")))?;
                let digits = digit_part
                    .split(',')
                    .map(|d| {
                        d.parse::<u64>()
                            .map_err(|_| Error::Input(format!("bad digit {d:?} in {s:?}")))
                    })
                    .collect::<Result<Vec<u64>>>()?;
                GraphSpec::Rado { q, digits }
            }
            _ => return Err(Error::Input(format!("unknown pattern {s:?}"))),
        };
        if parts.next().is_some() {
            return Err(Error::Input(format!("trailing parameters in {s:?}")));
        }
        Ok(spec)
    }
}

/// Build the oracle presentation of a built-in pattern.
pub fn builtin_family(spec: &GraphSpec) -> Result<ComputableGraph> {
    match spec {
        GraphSpec::Path => {
            let adj = Arc::new(|a: &VertexId, b: &VertexId| {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                hi.checked_sub(lo) == Some(VertexId::from(1u64))
            });
            Ok(with_scan_undominated(ComputableGraph::new("path", adj)))
        }
        GraphSpec::Tree { degree } => {
            let d = *degree;
            if d < 2 {
                return Err(Error::Config(format!(
                    "tree degree must be at least 2, got {d}"
                )));
            }
            let adj = Arc::new(move |a: &VertexId, b: &VertexId| {
                if a == b {
                    return false;
                }
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                tree_parent(hi, d).as_ref() == Some(lo)
            });
            Ok(with_scan_undominated(ComputableGraph::new(
                format!("tree({d})"),
                adj,
            )))
        }
        GraphSpec::Matching => {
            let adj = Arc::new(|a: &VertexId, b: &VertexId| {
                a != b && a.div_floor_by(2) == b.div_floor_by(2)
            });
            Ok(with_scan_undominated(ComputableGraph::new("matching", adj)))
        }
        GraphSpec::Cliques { size } => {
            let c = *size;
            if c < 2 {
                return Err(Error::Config(format!(
                    "clique size must be at least 2, got {c}"
                )));
            }
            let adj = Arc::new(move |a: &VertexId, b: &VertexId| {
                a != b && a.div_floor_by(c) == b.div_floor_by(c)
            });
            Ok(with_scan_undominated(ComputableGraph::new(
                format!("cliques({c})"),
                adj,
            )))
        }
        GraphSpec::Rado { q, digits } => {
            let set = DigitSet::new(*q, digits.iter().copied())?;
            Ok(rado_graph(set))
        }
        GraphSpec::Stars { count } => {
            let k = *count;
            if k == 0 {
                return Err(Error::Config("star count must be positive".into()));
            }
            let kk = VertexId::from(k);
            let adj = Arc::new(move |a: &VertexId, b: &VertexId| {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                lo < &kk && hi >= &kk && hi.rem_by(k) == lo.to_u64().expect("center fits")
            });
            // every vertex is dominated by some center, so no oracle
            Ok(ComputableGraph::new(format!("stars({k})"), adj))
        }
    }
}

/// Parent of `v` (which must be >= 1) in the breadth-first numbering of the
/// tree where the root has `d` children and everyone else `d - 1`.
fn tree_parent(v: &VertexId, d: u64) -> Option<VertexId> {
    if v.is_zero() {
        return None;
    }
    if *v <= VertexId::from(d) {
        return Some(VertexId::zero());
    }
    // v = d + 1 + (p - 1)(d - 1) + offset recovers p
    let shifted = v.checked_sub(&VertexId::from(d + 1)).expect("v > d");
    Some(shifted.div_floor_by(d - 1).succ())
}

fn with_scan_undominated(g: ComputableGraph) -> ComputableGraph {
    let adj = g.adjacency_fn();
    g.with_undominated(Arc::new(move |others: &[VertexId], bound: &VertexId| {
        Ok(scan_undominated(&adj, others, bound))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: u64) -> VertexId {
        VertexId::from(n)
    }

    fn vs(ns: &[u64]) -> Vec<VertexId> {
        ns.iter().copied().map(VertexId::from).collect()
    }

    fn build(s: &str) -> ComputableGraph {
        builtin_family(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn complete_graph_oracles() {
        let k = complete_graph();
        assert!(k.adjacent(&v(0), &v(7)));
        assert!(!k.adjacent(&v(7), &v(7)));
        assert_eq!(k.star_witness(&vs(&[0, 1]), &[], &v(9)).unwrap(), v(10));
        assert_eq!(k.star_witness(&[], &[], &v(0)).unwrap(), v(1));
        assert!(matches!(
            k.star_witness(&vs(&[1]), &vs(&[2]), &v(0)),
            Err(Error::WitnessImpossible(_))
        ));
        assert!(matches!(
            k.undominated(&vs(&[0]), &v(0)),
            Err(Error::OracleMissing(_))
        ));
    }

    #[test]
    fn path_adjacency() {
        let p = build("path");
        assert!(p.adjacent(&v(4), &v(5)));
        assert!(!p.adjacent(&v(4), &v(6)));
        assert!(p.adjacent(&v(5), &v(4)));
        assert!(!p.adjacent(&v(0), &v(0)));
    }

    #[test]
    fn path_undominated_scan() {
        let p = build("path");
        // 2 is blocked by neighbor 1; 3 is clear
        assert_eq!(p.undominated(&vs(&[0, 1]), &v(1)).unwrap(), v(3));
        assert_eq!(p.undominated(&vs(&[0]), &v(0)).unwrap(), v(2));
    }

    #[test]
    fn matching_adjacency_and_undominated() {
        let m = build("matching");
        assert!(m.adjacent(&v(0), &v(1)));
        assert!(m.adjacent(&v(6), &v(7)));
        assert!(!m.adjacent(&v(1), &v(2)));
        assert_eq!(m.undominated(&vs(&[0, 1]), &v(1)).unwrap(), v(2));
    }

    #[test]
    fn tree_structure() {
        let t = build("tree:3");
        // root 0 has children 1, 2, 3; vertex 1 has children 4, 5; etc.
        assert!(t.adjacent(&v(0), &v(1)));
        assert!(t.adjacent(&v(0), &v(3)));
        assert!(!t.adjacent(&v(0), &v(4)));
        assert!(t.adjacent(&v(1), &v(4)));
        assert!(t.adjacent(&v(1), &v(5)));
        assert!(!t.adjacent(&v(1), &v(6)));
        assert!(t.adjacent(&v(2), &v(6)));
        // degree of the root is 3, of vertex 1 is 1 + 2 = 3
        let deg = |x: u64| (0..40).filter(|y| t.adjacent(&v(x), &v(*y))).count();
        assert_eq!(deg(0), 3);
        assert_eq!(deg(1), 3);
        assert_eq!(deg(5), 3);
        assert!(builtin_family(&GraphSpec::Tree { degree: 1 }).is_err());
    }

    #[test]
    fn tree_is_acyclic_and_connected_on_prefix() {
        // every vertex 1..n has exactly one neighbor below itself
        let t = build("tree:4");
        for x in 1..60u64 {
            let below = (0..x).filter(|y| t.adjacent(&v(x), &v(*y))).count();
            assert_eq!(below, 1, "vertex {x}");
        }
    }

    #[test]
    fn cliques_blocks() {
        let c = build("cliques:4");
        assert!(c.adjacent(&v(0), &v(3)));
        assert!(!c.adjacent(&v(3), &v(4)));
        assert!(c.adjacent(&v(5), &v(6)));
        assert_eq!(c.undominated(&vs(&[0, 1, 2, 3]), &v(3)).unwrap(), v(4));
        assert!(builtin_family(&GraphSpec::Cliques { size: 1 }).is_err());
    }

    #[test]
    fn star_forest_shape() {
        let s = build("star:2");
        assert!(s.adjacent(&v(0), &v(2)));
        assert!(s.adjacent(&v(1), &v(3)));
        assert!(!s.adjacent(&v(0), &v(3)));
        assert!(!s.adjacent(&v(2), &v(4)));
        assert!(!s.adjacent(&v(0), &v(1)));
        assert!(matches!(
            s.undominated(&vs(&[0]), &v(0)),
            Err(Error::OracleMissing(_))
        ));
        let s1 = build("star:1");
        assert!(s1.adjacent(&v(0), &v(9)));
        assert!(!s1.adjacent(&v(4), &v(9)));
    }

    #[test]
    fn spec_parse_round_trip() {
        for s in ["path", "tree:3", "matching", "cliques:4", "rado:2:1", "star:2"] {
            let spec: GraphSpec = s.parse().unwrap();
            builtin_family(&spec).unwrap();
        }
        let spec: GraphSpec = "rado:3:0,2".parse().unwrap();
        assert_eq!(
            spec,
            GraphSpec::Rado { q: 3, digits: vec![0, 2] }
        );
        assert_eq!(spec.to_string(), "rado:3:0,2");
        assert!("frob".parse::<GraphSpec>().is_err());
        assert!("tree".parse::<GraphSpec>().is_err());
        assert!("tree:x".parse::<GraphSpec>().is_err());
        assert!("rado:2".parse::<GraphSpec>().is_err());
    }
}
