use std::fmt;

use crate::error::{Error, Result};
use crate::vertex::{EdgeIndex, VertexId};

/// Append-only record of a construction run.
///
/// `E k f` assigns the host edge with colex index k to factor f. `M f p h`
/// maps pattern vertex p of factor f to host vertex h. Events appear in the
/// order the construction made them, map lines before the edge lines they
/// enable, so a replay can rebuild the embeddings and check every claim.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    events: Vec<ManifestEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManifestEvent {
    Edge { index: EdgeIndex, factor: u64 },
    Map { factor: u64, pattern: VertexId, host: VertexId },
}

impl fmt::Display for ManifestEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifestEvent::Edge { index, factor } => write!(f, "E {index} {factor}"),
            ManifestEvent::Map { factor, pattern, host } => {
                write!(f, "M {factor} {pattern} {host}")
            }
        }
    }
}

impl Manifest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, event: ManifestEvent) {
        self.events.push(event);
    }

    pub fn events(&self) -> &[ManifestEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, ManifestEvent::Edge { .. }))
            .count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Parse manifest text; `#` lines and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Manifest> {
        let mut events = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let kind = parts.next().unwrap_or("");
            let fields: Vec<&str> = parts.collect();
            let bad = |what: &str| {
                Error::Input(format!("manifest line {}: {what}: {line:?}", lineno + 1))
            };
            let event = match kind {
                "E" => {
                    if fields.len() != 2 {
                        return Err(bad("expected E <index> <factor>"));
                    }
                    ManifestEvent::Edge {
                        index: fields[0].parse().map_err(|_| bad("bad edge index"))?,
                        factor: fields[1].parse().map_err(|_| bad("bad factor"))?,
                    }
                }
                "M" => {
                    if fields.len() != 3 {
                        return Err(bad("expected M <factor> <pattern> <host>"));
                    }
                    ManifestEvent::Map {
                        factor: fields[0].parse().map_err(|_| bad("bad factor"))?,
                        pattern: fields[1].parse().map_err(|_| bad("bad pattern vertex"))?,
                        host: fields[2].parse().map_err(|_| bad("bad host vertex"))?,
                    }
                }
                _ => return Err(bad("unknown event kind")),
            };
            events.push(event);
        }
        Ok(Manifest { events })
    }
}
