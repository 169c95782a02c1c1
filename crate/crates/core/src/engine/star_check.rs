use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::vertex::VertexId;

/// Outcome of sampling the extension property of an adjacency relation:
/// for random small disjoint sets W (wanted) and X (excluded), is there a
/// vertex adjacent to all of W and none of X?
#[derive(Debug, Clone)]
pub struct StarCheckReport {
    pub trials: u64,
    pub successes: u64,
    pub failures: Vec<StarCheckFailure>,
    pub seed: u64,
    pub element_bound: u64,
    pub search_cap: u64,
}

impl StarCheckReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct StarCheckFailure {
    pub wanted: Vec<u64>,
    pub excluded: Vec<u64>,
}

/// Least vertex below `cap`, outside both sets, adjacent to all of `wanted`
/// and none of `excluded`.
pub fn star_witness_below(
    adjacent: &dyn Fn(&VertexId, &VertexId) -> bool,
    wanted: &[u64],
    excluded: &[u64],
    cap: u64,
) -> Option<u64> {
    (0..cap).find(|z| {
        if wanted.contains(z) || excluded.contains(z) {
            return false;
        }
        let zz = VertexId::from(*z);
        wanted
            .iter()
            .all(|u| adjacent(&zz, &VertexId::from(*u)))
            && excluded
                .iter()
                .all(|w| !adjacent(&zz, &VertexId::from(*w)))
    })
}

/// Draw `trials` random pairs of disjoint sets with 0..=3 elements below
/// `element_bound` and scan for a witness below `search_cap` for each. The
/// stream of draws depends only on the seed and parameters, so a report is
/// reproducible.
pub fn check_star_property(
    adjacent: &dyn Fn(&VertexId, &VertexId) -> bool,
    trials: u64,
    element_bound: u64,
    search_cap: u64,
    seed: u64,
) -> Result<StarCheckReport> {
    if element_bound < 6 {
        return Err(Error::Config(format!(
            "element bound must be at least 6 to fit two disjoint triples, \
             got {element_bound}"
        )));
    }
    if search_cap == 0 {
        return Err(Error::Config("search cap must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut successes = 0u64;
    let mut failures = Vec::new();
    for _ in 0..trials {
        let n_wanted = rng.random_range(0..=3u32);
        let n_excluded = rng.random_range(0..=3u32);
        let mut picked: Vec<u64> = Vec::new();
        while (picked.len() as u32) < n_wanted + n_excluded {
            let x = rng.random_range(0..element_bound);
            if !picked.contains(&x) {
                picked.push(x);
            }
        }
        let wanted: Vec<u64> = picked[..n_wanted as usize].to_vec();
        let excluded: Vec<u64> = picked[n_wanted as usize..].to_vec();
        if star_witness_below(adjacent, &wanted, &excluded, search_cap).is_some() {
            successes += 1;
        } else {
            failures.push(StarCheckFailure { wanted, excluded });
        }
    }
    Ok(StarCheckReport {
        trials,
        successes,
        failures,
        seed,
        element_bound,
        search_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::DigitSet;
    use crate::graphs::builtin_family;

    #[test]
    fn digit_graph_passes_every_trial() {
        let set = DigitSet::new(2, [1]).unwrap();
        let report = check_star_property(
            &|a, b| set.adjacent(a, b),
            100,
            12,
            1 << 16,
            271828,
        )
        .unwrap();
        assert_eq!(report.successes, 100);
        assert!(report.all_passed());
    }

    #[test]
    fn path_fails_some_trial() {
        // any wanted pair at distance > 2 has no common neighbor, so enough
        // trials must fail
        let path = builtin_family(&"path".parse().unwrap()).unwrap();
        let report = check_star_property(
            &|a, b| path.adjacent(a, b),
            200,
            12,
            1 << 12,
            271828,
        )
        .unwrap();
        assert!(!report.all_passed());
        assert!(report.successes < report.trials);
    }

    #[test]
    fn pinned_path_obstruction() {
        // the only common neighbor of 0 and 2 is 1, so excluding 1 blocks
        // every witness no matter how far the scan goes
        let path = builtin_family(&"path".parse().unwrap()).unwrap();
        let adj = |a: &VertexId, b: &VertexId| path.adjacent(a, b);
        assert_eq!(star_witness_below(&adj, &[0, 2], &[1], 1 << 12), None);
        assert_eq!(star_witness_below(&adj, &[0, 2], &[], 1 << 12), Some(1));
    }

    #[test]
    fn same_seed_same_report() {
        let set = DigitSet::new(2, [0]).unwrap();
        let a = check_star_property(&|x, y| set.adjacent(x, y), 50, 10, 4096, 7).unwrap();
        let b = check_star_property(&|x, y| set.adjacent(x, y), 50, 10, 4096, 7).unwrap();
        assert_eq!(a.successes, b.successes);
        assert_eq!(a.failures.len(), b.failures.len());
    }

    #[test]
    fn rejects_tiny_bounds() {
        let set = DigitSet::new(2, [1]).unwrap();
        assert!(check_star_property(&|a, b| set.adjacent(a, b), 1, 3, 64, 0).is_err());
        assert!(check_star_property(&|a, b| set.adjacent(a, b), 1, 12, 0, 0).is_err());
    }
}
