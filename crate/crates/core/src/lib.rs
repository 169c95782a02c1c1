//! Edge decompositions of countably infinite graphs.
//!
//! The naturals are the vertex set throughout. Edges are enumerated in colex
//! order, hosts and patterns are presented by adjacency and search oracles,
//! and a staged back-and-forth construction splits a host graph into
//! pairwise edge-disjoint copies of prescribed patterns while covering every
//! host edge. Companion modules handle star forests over the integers with
//! their translation covers, and resolutions of block decompositions.

pub mod digits;
pub mod engine;
pub mod error;
pub mod graphs;
pub mod vertex;

pub use digits::{digit_at, digit_len, DigitRule, DigitSet};
pub use engine::{
    check_star_property, factorize_complete_via_split, pad_with_isolated, parse_pattern,
    verify_manifest, Engine, EngineMode, Family, HostGraph, Manifest, ManifestEvent,
    PartialEmbedding,
};
pub use error::{Error, Result};
pub use graphs::{builtin_family, complete_graph, rado_graph, ComputableGraph, GraphSpec};
pub use vertex::{edge_index, edge_pair, ColexPairs, EdgeIndex, EdgePair, VertexId};
