//! Staged construction of edge decompositions.
//!
//! The host graph is split into pairwise edge-disjoint copies of pattern
//! graphs, one new factor per stage, while a back-and-forth sweep keeps
//! every existing factor's embedding alive: each stage pushes the current
//! vertex into the domain of every factor (placing the host edges that carry
//! its pattern edges) and into the image of every factor (absorbing it as an
//! undominated pattern vertex, which needs no edges). Covering the stage's
//! host edge when creating the stage's factor makes the union of the factors
//! exhaust the host.

mod embedding;
mod manifest;
mod pad;
mod split;
mod star_check;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::digits::{digit_len, pow_q, selected_positions, DigitSet};
use crate::error::{Error, Result};
use crate::graphs::{builtin_family, complete_graph, rado_graph, ComputableGraph, GraphSpec};
use crate::vertex::{edge_index, edge_pair, ColexPairs, EdgePair, VertexId};

pub use embedding::PartialEmbedding;
pub use manifest::{Manifest, ManifestEvent};
pub use pad::pad_with_isolated;
pub use split::{factorize_complete_via_split, SplitOutcome};
pub use star_check::{check_star_property, StarCheckFailure, StarCheckReport};

/// Hosts are graphs whose edge set is being decomposed. Only structured
/// hosts are supported: the image chooser exploits their digit structure
/// rather than searching blindly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HostGraph {
    Complete,
    Rado(DigitSet),
}

impl HostGraph {
    pub fn adjacent(&self, a: &VertexId, b: &VertexId) -> bool {
        match self {
            HostGraph::Complete => a != b,
            HostGraph::Rado(set) => set.adjacent(a, b),
        }
    }

    pub fn graph(&self) -> ComputableGraph {
        match self {
            HostGraph::Complete => complete_graph(),
            HostGraph::Rado(set) => rado_graph(set.clone()),
        }
    }

    pub fn name(&self) -> String {
        self.graph().name().to_string()
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "complete" {
            return Ok(HostGraph::Complete);
        }
        match s.parse::<GraphSpec>()? {
            GraphSpec::Rado { q, digits } => {
                Ok(HostGraph::Rado(DigitSet::new(q, digits)?))
            }
            other => Err(Error::Config(format!(
                "host must be complete or a digit-defined graph, got {other}"
            ))),
        }
    }
}

/// Which pattern each factor receives.
#[derive(Debug, Clone)]
pub struct Family {
    members: Vec<FamilyMember>,
    repeats: bool,
}

#[derive(Debug, Clone)]
pub struct FamilyMember {
    spec: GraphSpec,
    padded: bool,
    graph: ComputableGraph,
}

impl FamilyMember {
    pub fn name(&self) -> &str {
        self.graph.name()
    }

    pub fn graph(&self) -> &ComputableGraph {
        &self.graph
    }

    pub fn digit_set(&self) -> Option<DigitSet> {
        match (&self.spec, self.padded) {
            (GraphSpec::Rado { q, digits }, false) => {
                Some(DigitSet::new(*q, digits.iter().copied()).expect("validated"))
            }
            _ => None,
        }
    }
}

/// Pattern syntax: a built-in spec, optionally wrapped as `pad:<spec>` to
/// interleave isolated vertices.
pub fn parse_pattern(s: &str) -> Result<FamilyMember> {
    if let Some(inner) = s.strip_prefix("pad:") {
        let spec: GraphSpec = inner.parse()?;
        let graph = pad_with_isolated(&builtin_family(&spec)?, 1)?;
        return Ok(FamilyMember { spec, padded: true, graph });
    }
    let spec: GraphSpec = s.parse()?;
    let graph = builtin_family(&spec)?;
    Ok(FamilyMember { spec, padded: false, graph })
}

impl Family {
    /// Cyclic family: factor k gets member k mod len.
    pub fn repeating(members: Vec<FamilyMember>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Config("family must have at least one member".into()));
        }
        Ok(Family { members, repeats: true })
    }

    /// Finite family used verbatim; factor indices beyond it are errors.
    pub fn listed(members: Vec<FamilyMember>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Config("family must have at least one member".into()));
        }
        Ok(Family { members, repeats: false })
    }

    pub fn parse_repeating(specs: &[String]) -> Result<Self> {
        Self::repeating(specs.iter().map(|s| parse_pattern(s)).collect::<Result<_>>()?)
    }

    pub fn parse_listed(specs: &[String]) -> Result<Self> {
        Self::listed(specs.iter().map(|s| parse_pattern(s)).collect::<Result<_>>()?)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn repeats(&self) -> bool {
        self.repeats
    }

    pub fn members(&self) -> &[FamilyMember] {
        &self.members
    }

    pub fn member(&self, idx: u64) -> Result<&FamilyMember> {
        if self.repeats {
            Ok(&self.members[(idx % self.members.len() as u64) as usize])
        } else {
            self.members.get(idx as usize).ok_or_else(|| {
                Error::Config(format!(
                    "factor {idx} requested from a family of {}",
                    self.members.len()
                ))
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineMode {
    /// One factor per stage, every host edge covered.
    CoverAll,
    /// Finitely many growing factors; the uncovered remainder of the host is
    /// itself the final factor and is never materialized.
    FiniteWithResidual,
}

#[derive(Debug, Clone)]
pub struct Factor {
    name: String,
    pattern: ComputableGraph,
    emb: PartialEmbedding,
}

impl Factor {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pattern(&self) -> &ComputableGraph {
        &self.pattern
    }

    pub fn embedding(&self) -> &PartialEmbedding {
        &self.emb
    }
}

/// Numeric scan width above the largest wanted image; grows with the stage
/// so later stages look a little further before resorting to constructed
/// values.
fn scan_span(stage: u64) -> u64 {
    4096 + 16 * stage
}

/// Cap on digit positions the direct construction will materialize; a value
/// with a required nonzero digit beyond this would not fit in memory.
const BUILD_POS_CAP: u64 = 1 << 22;

/// First digit position handed out as a spare digit on constructed values.
/// Everything the run touches by scanning or absorption stays far below
/// this, so the values at these positions are still fresh when a later
/// constraint steps down onto one.
const TWEAK_BASE: u64 = 1 << 14;

/// Cap on pairs scanned while extending the host edge enumeration.
const EDGE_SCAN_CAP: u64 = 50_000_000;

pub struct Engine {
    host: HostGraph,
    family: Family,
    mode: EngineMode,
    stage: u64,
    factors: Vec<Factor>,
    used: BTreeMap<EdgePair, u64>,
    /// Endpoints of all placed edges. Vertices only absorbed into images
    /// carry no edges and stay available as fresh images elsewhere.
    touched: BTreeSet<VertexId>,
    /// Every host vertex in some factor's image. A placed edge must take
    /// its new endpoint from outside this set, so each one is collision
    /// free by construction.
    seen: BTreeSet<VertexId>,
    /// Next spare digit position to grant a constructed value. Monotone, so
    /// every spare is handed out once and the position stays a fresh image
    /// candidate for whichever constraint later names its carrier.
    spare_cursor: u64,
    /// Floor for the unconstrained-image scan. Everything below it is
    /// permanently consumed: returned images are recorded in some factor,
    /// and a vertex passed over as the stage in flight is absorbed into an
    /// image at that same stage.
    open_cursor: VertexId,
    host_edges: Vec<EdgePair>,
    pair_cursor: ColexPairs,
    manifest: Manifest,
}

impl Engine {
    pub fn new(host: HostGraph, family: Family) -> Result<Self> {
        Ok(Engine {
            host,
            family,
            mode: EngineMode::CoverAll,
            stage: 0,
            factors: Vec::new(),
            used: BTreeMap::new(),
            touched: BTreeSet::new(),
            seen: BTreeSet::new(),
            spare_cursor: TWEAK_BASE,
            open_cursor: VertexId::zero(),
            host_edges: Vec::new(),
            pair_cursor: ColexPairs::new(),
            manifest: Manifest::new(),
        })
    }

    /// Finite mode: all members but the last grow as embedded factors; the
    /// last is declared to be the residual and must be digit-defined, as
    /// must the host, so the residual's structure can be sampled afterwards.
    pub fn new_finite(host: HostGraph, family: Family) -> Result<Self> {
        if family.repeats() {
            return Err(Error::Config(
                "finite mode needs a finite family, not a repeating one".into(),
            ));
        }
        if family.len() < 2 {
            return Err(Error::Config(
                "finite mode needs at least one growing member plus the residual".into(),
            ));
        }
        if !matches!(host, HostGraph::Rado(_)) {
            return Err(Error::Config(
                "finite mode needs a digit-defined host".into(),
            ));
        }
        let last = family.members().last().expect("nonempty");
        if last.digit_set().is_none() {
            return Err(Error::Config(format!(
                "the last family member is the residual and must be \
                 digit-defined, got {}",
                last.name()
            )));
        }
        let mut engine = Engine::new(host, family)?;
        engine.mode = EngineMode::FiniteWithResidual;
        Ok(engine)
    }

    pub fn host(&self) -> &HostGraph {
        &self.host
    }

    pub fn mode(&self) -> EngineMode {
        self.mode
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn used_edges(&self) -> &BTreeMap<EdgePair, u64> {
        &self.used
    }

    pub fn touched_vertices(&self) -> &BTreeSet<VertexId> {
        &self.touched
    }

    /// Colex prefix of the host's edge enumeration, extended on demand.
    pub fn host_edge(&mut self, idx: usize) -> Result<EdgePair> {
        self.ensure_host_edges(idx + 1)?;
        Ok(self.host_edges[idx].clone())
    }

    fn ensure_host_edges(&mut self, n: usize) -> Result<()> {
        let mut scanned = 0u64;
        while self.host_edges.len() < n {
            let pair = self.pair_cursor.next().expect("infinite enumeration");
            if self.host.adjacent(pair.lo(), pair.hi()) {
                self.host_edges.push(pair);
            }
            scanned += 1;
            if scanned > EDGE_SCAN_CAP {
                return Err(Error::SearchExhausted {
                    cap: EDGE_SCAN_CAP,
                    scanned,
                    context: "host edge enumeration".into(),
                });
            }
        }
        Ok(())
    }

    pub fn run_stages(&mut self, n: u64) -> Result<()> {
        for _ in 0..n {
            self.run_stage()?;
        }
        Ok(())
    }

    /// One stage: create this stage's factor (covering the stage's host edge
    /// if it is still free), then sweep every factor forward and backward.
    pub fn run_stage(&mut self) -> Result<u64> {
        let gamma = self.stage;
        match self.mode {
            EngineMode::CoverAll => {
                let e = self.host_edge(gamma as usize)?;
                let target = if self.used.contains_key(&e) {
                    self.least_unused_edge(gamma)?
                } else {
                    e
                };
                self.init_factor(gamma, target)?;
                self.sweep(gamma, self.factors.len())?;
            }
            EngineMode::FiniteWithResidual => {
                let growing = self.family.len() - 1;
                if (gamma as usize) < growing {
                    let target = self.least_unused_edge(gamma)?;
                    self.init_factor(gamma, target)?;
                }
                let upto = growing.min(gamma as usize + 1);
                self.sweep(gamma, upto)?;
            }
        }
        self.stage += 1;
        Ok(gamma)
    }

    fn sweep(&mut self, gamma: u64, factor_count: usize) -> Result<()> {
        let v = VertexId::from(gamma);
        for alpha in 0..factor_count {
            if !self.factors[alpha].emb.domain_contains(&v) {
                self.extend_domain(alpha, v.clone())?;
            }
            if !self.factors[alpha].emb.image_contains(&v) {
                self.extend_image(alpha, v.clone())?;
            }
        }
        Ok(())
    }

    fn init_factor(&mut self, gamma: u64, e: EdgePair) -> Result<()> {
        debug_assert_eq!(self.factors.len(), gamma as usize);
        debug_assert!(!self.used.contains_key(&e));
        let member = self.family.member(gamma)?;
        let (plo, phi) = colex_least_pattern_edge(member.graph())?;
        let mut factor = Factor {
            name: member.name().to_string(),
            pattern: member.graph().clone(),
            emb: PartialEmbedding::new(),
        };
        factor.emb.insert(plo.clone(), e.lo().clone())?;
        factor.emb.insert(phi.clone(), e.hi().clone())?;
        factor.emb.place(e.clone())?;
        self.manifest.push(ManifestEvent::Map {
            factor: gamma,
            pattern: plo,
            host: e.lo().clone(),
        });
        self.manifest.push(ManifestEvent::Map {
            factor: gamma,
            pattern: phi,
            host: e.hi().clone(),
        });
        self.manifest.push(ManifestEvent::Edge { index: edge_index(&e), factor: gamma });
        self.touched.insert(e.lo().clone());
        self.touched.insert(e.hi().clone());
        self.seen.insert(e.lo().clone());
        self.seen.insert(e.hi().clone());
        let previous = self.used.insert(e, gamma);
        assert!(previous.is_none(), "edge assigned twice");
        self.factors.push(factor);
        Ok(())
    }

    /// Least-colex host edge no factor has claimed, preferring one with
    /// both endpoints below `stage`. An endpoint at or past the current
    /// stage sits in the new factor's image exactly when that host vertex
    /// comes up for absorption; the skipped absorption leaves the next
    /// growth step chaining constructed images instead of plain host
    /// vertices. Later anchors may share endpoints with earlier edges;
    /// only the edge itself has to be free. Hunting for an edge with
    /// untouched endpoints instead degenerates on a digit host once the
    /// small vertices fill up: the least such edge is {p, d*q^p} for p
    /// the least untouched value, and that upper endpoint's one neighbor
    /// from below is p itself, burned by the very edge that anchors it.
    fn least_unused_edge(&mut self, stage: u64) -> Result<EdgePair> {
        let bound = VertexId::from(stage);
        let mut i = 0;
        // colex order never lowers the upper endpoint, so the below-stage
        // candidates end where the upper endpoints reach the stage
        loop {
            let e = self.host_edge(i)?;
            if *e.hi() >= bound {
                break;
            }
            if !self.used.contains_key(&e) {
                return Ok(e);
            }
            i += 1;
        }
        loop {
            let e = self.host_edge(i)?;
            if !self.used.contains_key(&e) {
                return Ok(e);
            }
            i += 1;
        }
    }

    /// Least vertex at or above `from` not yet an endpoint of any edge.
    fn least_fresh_from(&self, from: &VertexId) -> VertexId {
        let mut candidate = from.clone();
        for v in self.touched.range(from.clone()..) {
            if *v == candidate {
                candidate = candidate.succ();
            } else {
                break;
            }
        }
        candidate
    }

    /// Push pattern vertex `v` into factor `alpha`'s domain: pick a fresh
    /// host image adjacent to the images of all of `v`'s mapped pattern
    /// neighbors, then place the host edges carrying those pattern edges.
    pub fn extend_domain(&mut self, alpha: usize, v: VertexId) -> Result<()> {
        let factor = self
            .factors
            .get(alpha)
            .ok_or_else(|| Error::Input(format!("no factor {alpha}")))?;
        if factor.emb.domain_contains(&v) {
            return Err(Error::Input(format!(
                "pattern vertex {v} already in factor {alpha}'s domain"
            )));
        }
        let mut wanted: Vec<VertexId> = factor
            .emb
            .iter()
            .filter(|(pv, _)| factor.pattern.adjacent(pv, &v))
            .map(|(_, hv)| hv.clone())
            .collect();
        wanted.sort();
        let a = self.choose_image(&wanted).map_err(|e| match e {
            Error::WitnessImpossible(msg) => {
                let name = self.factors[alpha].name.clone();
                Error::WitnessImpossible(format!("factor {alpha} ({name}): {msg}"))
            }
            other => other,
        })?;
        debug_assert!(!self.touched.contains(&a));
        self.manifest.push(ManifestEvent::Map {
            factor: alpha as u64,
            pattern: v.clone(),
            host: a.clone(),
        });
        self.seen.insert(a.clone());
        let factor = &mut self.factors[alpha];
        factor.emb.insert(v, a.clone())?;
        for hv in wanted {
            let e = EdgePair::new(a.clone(), hv).expect("fresh image is distinct");
            debug_assert!(self.host.adjacent(e.lo(), e.hi()));
            factor.emb.place(e.clone())?;
            self.manifest.push(ManifestEvent::Edge {
                index: edge_index(&e),
                factor: alpha as u64,
            });
            self.touched.insert(e.lo().clone());
            self.touched.insert(e.hi().clone());
            let previous = self.used.insert(e, alpha as u64);
            assert!(previous.is_none(), "edge assigned twice");
        }
        Ok(())
    }

    /// Pull host vertex `x` into factor `alpha`'s image as an undominated
    /// pattern vertex, so no pattern edge (hence no host edge) is involved.
    pub fn extend_image(&mut self, alpha: usize, x: VertexId) -> Result<()> {
        let factor = self
            .factors
            .get(alpha)
            .ok_or_else(|| Error::Input(format!("no factor {alpha}")))?;
        if factor.emb.image_contains(&x) {
            return Err(Error::Input(format!(
                "host vertex {x} already in factor {alpha}'s image"
            )));
        }
        let domain: Vec<VertexId> = factor.emb.domain().cloned().collect();
        let bound = domain.last().cloned().unwrap_or_else(VertexId::zero);
        let a = factor.pattern.undominated(&domain, &bound)?;
        debug_assert!(!domain.contains(&a));
        self.manifest.push(ManifestEvent::Map {
            factor: alpha as u64,
            pattern: a.clone(),
            host: x.clone(),
        });
        self.seen.insert(x.clone());
        self.factors[alpha].emb.insert(a, x)?;
        Ok(())
    }

    /// Least vertex that carries no edge yet and sits in no factor's
    /// image, skipping the stage in flight: that host vertex is due for
    /// absorption into the very image being extended, and taking it as an
    /// unconstrained image would block its own absorption.
    fn least_open(&mut self) -> VertexId {
        let stage = VertexId::from(self.stage);
        let mut c = self.open_cursor.clone();
        loop {
            c = self.least_fresh_from(&c);
            if !self.seen.contains(&c) && c != stage {
                self.open_cursor = c.clone();
                return c;
            }
            c = c.succ();
        }
    }

    /// A host image for a new domain vertex: in no factor's image, no edge
    /// endpoint, and adjacent to everything in `wanted` (sorted ascending).
    ///
    /// Candidates run from cheap to constructed: the selected digit
    /// positions of the wanted vertices themselves (small values, adjacent
    /// from below), a bounded numeric window above the wanted set, and
    /// finally a value built digit by digit. Every path keeps the image as
    /// small as it can. Witness construction above all used vertices would
    /// need a digit at a position equal to each wanted value, so its digit
    /// count would match those values' magnitudes, and iterating that
    /// squares the representation size each round; small images are what
    /// keep every wanted value reachable as a digit position later on.
    fn choose_image(&mut self, wanted: &[VertexId]) -> Result<VertexId> {
        let set = match &self.host {
            HostGraph::Complete => return Ok(self.least_open()),
            HostGraph::Rado(set) => set.clone(),
        };
        if wanted.is_empty() {
            return Ok(self.least_open());
        }

        // selected digit positions of the wanted vertices, merged ascending
        let mut positions: BTreeSet<u64> = BTreeSet::new();
        for u in wanted {
            positions.extend(selected_positions(u.as_biguint(), &set).below_len);
        }
        for p in positions {
            let cand = VertexId::from(p);
            if self.fits(&set, wanted, &cand) {
                return Ok(cand);
            }
        }
        let top = wanted.last().expect("nonempty");
        let span = scan_span(self.stage);
        if set.zero_selected() {
            // every position past a vertex's digit length also selects, so
            // small values below the top are worth a bounded scan
            let min_len = wanted
                .iter()
                .map(|u| digit_len(u.as_biguint(), set.q()))
                .min()
                .unwrap_or(0);
            let mut p = VertexId::from(min_len);
            let mut steps = 0u64;
            while p < *top && steps < span {
                if self.fits(&set, wanted, &p) {
                    return Ok(p);
                }
                p = p.succ();
                steps += 1;
            }
        }

        // numeric window above the top vertex
        let stop = if set.zero_selected() {
            Some(top.as_biguint() + span)
        } else {
            // without digit 0 selected, a neighbor above the top carries a
            // digit at the top's own position, so the window is empty
            // unless it reaches that high; anything past it needs a digit
            // at a wanted position anyway, which is cheaper to build
            let abs = BigUint::from(span);
            top.to_u64()
                .filter(|t| digit_len(&abs, set.q()) > *t)
                .map(|_| abs)
        };
        if let Some(stop) = stop {
            let mut z = top.succ();
            while z.as_biguint() <= &stop {
                if self.fits(&set, wanted, &z) {
                    return Ok(z);
                }
                z = z.succ();
            }
        }

        let z = self.build_image(&set, wanted)?;
        debug_assert!(self.fits(&set, wanted, &z));
        Ok(z)
    }

    /// An image candidate must carry no edge, sit in no factor's image, and
    /// be adjacent to every wanted vertex.
    fn fits(&self, set: &DigitSet, wanted: &[VertexId], cand: &VertexId) -> bool {
        !self.touched.contains(cand)
            && !self.seen.contains(cand)
            && wanted.iter().all(|u| set.adjacent(cand, u))
    }

    /// Construct a vertex adjacent to every wanted vertex outright: the
    /// least selected digit at each wanted position, plus tweak digits that
    /// keep the value off every edge and out of every image. Wanted values
    /// must fit as digit positions; a vertex too large to index a digit
    /// cannot be reached from above at all.
    ///
    /// Small constraints take one tweak digit sliding up from zero, keeping
    /// the result itself below the position cap so a later constraint
    /// naming it can be built the same way. Once any wanted value pushes
    /// the result past the cap, that route is gone, so the build switches
    /// to two spare digits from the reserved band instead: each spare
    /// position is a small value no other part of the run will touch, and
    /// it stays adjacent to the built vertex from below. A constraint that
    /// later names the oversized vertex is then served by stepping down
    /// onto a spare position, and the second spare keeps that move open
    /// twice, which is as often as any pattern in the family looks back at
    /// one vertex.
    fn build_image(&mut self, set: &DigitSet, wanted: &[VertexId]) -> Result<VertexId> {
        let q = set.q();
        let d = BigUint::from(set.min_digit().max(1));
        let mut base = BigUint::zero();
        if set.zero_selected() {
            // digit 0 already selects every position past a value's digit
            // length, so one tweak digit above the wanted lengths suffices
            let mut t = wanted
                .iter()
                .map(|u| digit_len(u.as_biguint(), q))
                .max()
                .unwrap_or(0);
            loop {
                let tv = VertexId::from(t);
                if !wanted.contains(&tv) {
                    let z = VertexId::from(&d * pow_q(q, t));
                    if !self.touched.contains(&z) && !self.seen.contains(&z) {
                        return Ok(z);
                    }
                }
                t += 1;
            }
        }
        for u in wanted {
            let p = u.to_u64().filter(|p| *p <= BUILD_POS_CAP).ok_or_else(|| {
                let shown = if u.as_biguint().bits() > 64 {
                    format!("a {}-digit value", u.as_biguint().bits())
                } else {
                    u.to_string()
                };
                Error::WitnessImpossible(format!(
                    "an image adjacent to {shown} needs a digit at that \
                     position, beyond the {BUILD_POS_CAP}-digit build cap"
                ))
            })?;
            base += &d * pow_q(q, p);
        }
        let cap = BigUint::from(BUILD_POS_CAP);
        let mut t = 0u64;
        while base <= cap {
            let tv = VertexId::from(t);
            if !wanted.contains(&tv) {
                let z = VertexId::from(&base + &d * pow_q(q, t));
                if z.as_biguint() > &cap {
                    break;
                }
                if !self.touched.contains(&z) && !self.seen.contains(&z) {
                    return Ok(z);
                }
            }
            t += 1;
        }
        let spare_a = self.claim_spare(wanted);
        let mut spare_b = self.claim_spare(wanted);
        loop {
            let z = VertexId::from(&base + &d * pow_q(q, spare_a) + &d * pow_q(q, spare_b));
            if !self.touched.contains(&z) && !self.seen.contains(&z) {
                return Ok(z);
            }
            spare_b = self.claim_spare(wanted);
        }
    }

    /// Next spare digit position: no constructed value carries it yet and
    /// its own value is still free.
    fn claim_spare(&mut self, wanted: &[VertexId]) -> u64 {
        loop {
            let t = self.spare_cursor;
            self.spare_cursor += 1;
            let tv = VertexId::from(t);
            if !wanted.contains(&tv)
                && !self.touched.contains(&tv)
                && !self.seen.contains(&tv)
            {
                return t;
            }
        }
    }

    /// Check that the first `upto` host edges all belong to some factor;
    /// returns the uncovered ones.
    pub fn check_cover_prefix(&mut self, upto: usize) -> Result<Vec<String>> {
        self.ensure_host_edges(upto)?;
        let mut problems = Vec::new();
        for i in 0..upto {
            let e = &self.host_edges[i];
            if !self.used.contains_key(e) {
                problems.push(format!("host edge {i} ({e}) uncovered"));
            }
        }
        Ok(problems)
    }

    /// Re-derive the partial-isomorphism invariant of every factor.
    pub fn check_embeddings(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (alpha, f) in self.factors.iter().enumerate() {
            for p in f.emb.check_isomorphism(&f.pattern) {
                problems.push(format!("factor {alpha}: {p}"));
            }
        }
        problems
    }

    /// Check the staged conditions: after stage s, every vertex from a
    /// factor's birth stage through s-1 lies in that factor's domain and
    /// image.
    pub fn check_back_and_forth(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let growing = match self.mode {
            EngineMode::CoverAll => self.factors.len(),
            EngineMode::FiniteWithResidual => self.family.len() - 1,
        };
        for alpha in 0..growing.min(self.factors.len()) {
            let f = &self.factors[alpha];
            for g in alpha as u64..self.stage {
                let v = VertexId::from(g);
                if !f.emb.domain_contains(&v) {
                    problems.push(format!("factor {alpha}: vertex {g} not in domain"));
                }
                if !f.emb.image_contains(&v) {
                    problems.push(format!("factor {alpha}: vertex {g} not in image"));
                }
            }
        }
        problems
    }

    /// Whether an edge is a host edge not claimed by any factor.
    pub fn residual_contains(&self, a: &VertexId, b: &VertexId) -> bool {
        if a == b || !self.host.adjacent(a, b) {
            return false;
        }
        let e = EdgePair::new(a.clone(), b.clone()).expect("distinct");
        !self.used.contains_key(&e)
    }

    /// Sample the residual's extension property.
    pub fn check_residual_star_property(
        &self,
        trials: u64,
        element_bound: u64,
        search_cap: u64,
        seed: u64,
    ) -> Result<StarCheckReport> {
        check_star_property(
            &|a: &VertexId, b: &VertexId| self.residual_contains(a, b),
            trials,
            element_bound,
            search_cap,
            seed,
        )
    }
}

/// First pattern edge in colex order; patterns with no edge near the origin
/// are rejected rather than scanned forever.
fn colex_least_pattern_edge(pattern: &ComputableGraph) -> Result<(VertexId, VertexId)> {
    const CAP: u64 = 1_000_000;
    for (i, pair) in ColexPairs::new().enumerate() {
        if pattern.adjacent(pair.lo(), pair.hi()) {
            return Ok((pair.lo().clone(), pair.hi().clone()));
        }
        if i as u64 >= CAP {
            break;
        }
    }
    Err(Error::Config(format!(
        "pattern {} has no edge among the first {CAP} vertex pairs",
        pattern.name()
    )))
}

/// Rebuild a run from its manifest against the same host and family,
/// checking that every recorded edge is a real unused host edge between
/// mapped images, that maps are injective, and that each factor's placed
/// edges realize exactly its pattern's adjacency.
pub fn verify_manifest(
    manifest: &Manifest,
    host: &HostGraph,
    family: &Family,
) -> Result<ReplayReport> {
    let mut embeddings: BTreeMap<u64, PartialEmbedding> = BTreeMap::new();
    let mut used: BTreeSet<EdgePair> = BTreeSet::new();
    let mut maps = 0usize;
    let mut edges = 0usize;
    for (i, event) in manifest.events().iter().enumerate() {
        let fail = |what: String| Error::Input(format!("event {i}: {what}"));
        match event {
            ManifestEvent::Map { factor, pattern, host } => {
                let emb = embeddings.entry(*factor).or_default();
                emb.insert(pattern.clone(), host.clone())
                    .map_err(|e| fail(e.to_string()))?;
                maps += 1;
            }
            ManifestEvent::Edge { index, factor } => {
                let e = edge_pair(index);
                if !host.adjacent(e.lo(), e.hi()) {
                    return Err(fail(format!("{e} is not a host edge")));
                }
                if !used.insert(e.clone()) {
                    return Err(fail(format!("{e} assigned twice")));
                }
                let emb = embeddings
                    .get_mut(factor)
                    .ok_or_else(|| fail(format!("edge for unknown factor {factor}")))?;
                emb.place(e).map_err(|e| fail(e.to_string()))?;
                edges += 1;
            }
        }
    }
    for (factor, emb) in &embeddings {
        let member = family.member(*factor)?;
        let problems = emb.check_isomorphism(member.graph());
        if let Some(p) = problems.first() {
            return Err(Error::Input(format!(
                "factor {factor} is not a partial copy of {}: {p}",
                member.name()
            )));
        }
    }
    Ok(ReplayReport { factors: embeddings.len(), maps, edges })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayReport {
    pub factors: usize,
    pub maps: usize,
    pub edges: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: u64) -> VertexId {
        VertexId::from(n)
    }

    fn host_r21() -> HostGraph {
        HostGraph::Rado(DigitSet::new(2, [1]).unwrap())
    }

    fn family(specs: &[&str]) -> Family {
        Family::repeating(specs.iter().map(|s| parse_pattern(s).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn first_factor_maps_least_pattern_edge_onto_first_host_edge() {
        let mut eng = Engine::new(host_r21(), family(&["rado:2:1"])).unwrap();
        eng.run_stage().unwrap();
        let f = &eng.factors()[0];
        assert_eq!(f.embedding().image_of(&v(0)), Some(&v(0)));
        assert_eq!(f.embedding().image_of(&v(1)), Some(&v(1)));
        let e01 = EdgePair::new(v(0), v(1)).unwrap();
        assert_eq!(eng.used_edges().get(&e01), Some(&0));
    }

    #[test]
    fn three_stages_on_complete_host_cover_the_triangle() {
        let mut eng =
            Engine::new(HostGraph::Complete, family(&["path", "matching"])).unwrap();
        eng.run_stages(3).unwrap();
        assert!(eng.check_cover_prefix(3).unwrap().is_empty());
        // {0,1}, {0,2}, {1,2} each claimed by exactly one factor
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let e = EdgePair::new(v(a), v(b)).unwrap();
            assert!(eng.used_edges().contains_key(&e), "edge {e} unclaimed");
        }
        assert!(eng.check_embeddings().is_empty());
        assert!(eng.check_back_and_forth().is_empty());
    }

    #[test]
    fn chooser_with_no_constraints_picks_least_untouched() {
        let mut eng = Engine::new(HostGraph::Complete, family(&["path"])).unwrap();
        eng.run_stages(1).unwrap();
        // stage 0 placed {0,1}
        assert_eq!(eng.choose_image(&[]).unwrap(), v(2));
        eng.touched.insert(v(2));
        eng.touched.insert(v(4));
        assert_eq!(eng.choose_image(&[]).unwrap(), v(3));
    }

    #[test]
    fn chooser_scans_past_touched_vertices_to_a_joint_neighbor() {
        let mut eng = Engine::new(host_r21(), family(&["path"])).unwrap();
        eng.run_stages(1).unwrap();
        eng.touched.insert(v(2));
        eng.touched.insert(v(3));
        // a joint neighbor of 1 and 3 needs binary digits 1 at positions 1
        // and 3; the least fresh such value is 1010
        assert_eq!(eng.choose_image(&[v(1), v(3)]).unwrap(), v(10));
    }

    #[test]
    fn chooser_prefers_fresh_digit_positions_below_the_top() {
        let mut eng = Engine::new(host_r21(), family(&["path"])).unwrap();
        eng.run_stages(1).unwrap();
        let top = v(0b10100); // digit positions 2 and 4
        eng.touched.insert(top.clone());
        eng.touched.insert(v(2));
        assert_eq!(eng.choose_image(&[top.clone()]).unwrap(), v(4));
        eng.touched.insert(v(4));
        // both positions burned, and nothing in the scan window has a digit
        // at position 20, so the image is built outright
        let z = eng.choose_image(&[top.clone()]).unwrap();
        assert!(z > top);
        assert!(eng.host.adjacent(&z, &top));
        assert!(!eng.touched.contains(&z));
    }

    #[test]
    fn built_image_serves_unscannable_constraints() {
        let mut eng = Engine::new(host_r21(), family(&["path"])).unwrap();
        eng.run_stages(1).unwrap();
        let big = VertexId::from(num_bigint::BigUint::from(3u32).pow(12));
        eng.touched.insert(big.clone());
        // every selected position of the big vertex is artificially burned
        let sel = selected_positions(big.as_biguint(), &DigitSet::new(2, [1]).unwrap());
        for p in &sel.below_len {
            eng.touched.insert(VertexId::from(*p));
        }
        let z = eng.choose_image(&[big.clone()]).unwrap();
        assert!(eng.host.adjacent(&z, &big));
        assert!(!eng.touched.contains(&z));
        assert!(z > big);
    }

    #[test]
    fn built_images_for_one_constraint_set_stay_distinct() {
        let mut eng = Engine::new(host_r21(), family(&["path"])).unwrap();
        eng.run_stages(1).unwrap();
        let set = DigitSet::new(2, [1]).unwrap();
        let a = eng.build_image(&set, &[v(5)]).unwrap();
        eng.touched.insert(a.clone());
        let b = eng.build_image(&set, &[v(5)]).unwrap();
        assert_ne!(a, b);
        assert!(eng.host.adjacent(&a, &v(5)));
        assert!(eng.host.adjacent(&b, &v(5)));
    }

    #[test]
    fn fifty_stages_on_digit_host_cover_fifty_edges() {
        let mut eng = Engine::new(host_r21(), family(&["rado:2:1"])).unwrap();
        eng.run_stages(50).unwrap();
        assert!(eng.check_cover_prefix(50).unwrap().is_empty());
        assert!(eng.check_embeddings().is_empty());
        assert!(eng.check_back_and_forth().is_empty());
        assert_eq!(eng.factors().len(), 50);
        // factors are pairwise edge-disjoint by keying, and every factor's
        // placed edges appear in the global ledger under its index
        for (alpha, f) in eng.factors().iter().enumerate() {
            for e in f.embedding().placed_edges() {
                assert_eq!(eng.used_edges().get(e), Some(&(alpha as u64)));
            }
        }
    }

    #[test]
    fn absorbing_vertices_needs_the_undominated_oracle() {
        let mut eng = Engine::new(host_r21(), family(&["star:1"])).unwrap();
        // the star forest has no undominated vertex, so the backward sweep
        // cannot absorb host vertices and the run stops
        let err = eng.run_stages(3).unwrap_err();
        assert!(matches!(err, Error::OracleMissing(_)), "{err}");
    }

    #[test]
    fn manifest_replays() {
        let fam = family(&["path", "matching", "rado:2:1"]);
        let mut eng = Engine::new(host_r21(), fam.clone()).unwrap();
        eng.run_stages(20).unwrap();
        let report = verify_manifest(eng.manifest(), &host_r21(), &fam).unwrap();
        assert_eq!(report.factors, 20);
        assert_eq!(report.edges, eng.used_edges().len());
        // and the text form round-trips to the same events
        let parsed = Manifest::parse(&eng.manifest().to_text()).unwrap();
        assert_eq!(&parsed, eng.manifest());
    }

    #[test]
    fn manifest_verifier_rejects_tampering() {
        let fam = family(&["path"]);
        let mut eng = Engine::new(host_r21(), fam.clone()).unwrap();
        eng.run_stages(5).unwrap();
        let mut text = eng.manifest().to_text();
        // claim an extra edge for factor 0: it will not match the pattern
        text.push_str("E 2 0\n");
        let doctored = Manifest::parse(&text).unwrap();
        assert!(verify_manifest(&doctored, &host_r21(), &fam).is_err());
        // duplicate edge assignment
        let mut dup = eng.manifest().clone();
        dup.push(eng.manifest().events()[2].clone());
        assert!(verify_manifest(&dup, &host_r21(), &fam).is_err());
    }

    #[test]
    fn reruns_are_bit_identical() {
        let build = || {
            let mut eng =
                Engine::new(host_r21(), family(&["path", "rado:2:1", "matching"]))
                    .unwrap();
            eng.run_stages(25).unwrap();
            eng.manifest().to_text()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn finite_mode_validations() {
        let listed = |specs: &[&str]| {
            Family::listed(specs.iter().map(|s| parse_pattern(s).unwrap()).collect())
                .unwrap()
        };
        assert!(Engine::new_finite(host_r21(), family(&["path", "rado:2:1"])).is_err());
        assert!(Engine::new_finite(host_r21(), listed(&["path", "matching"])).is_err());
        assert!(
            Engine::new_finite(HostGraph::Complete, listed(&["path", "rado:2:1"]))
                .is_err()
        );
        assert!(Engine::new_finite(host_r21(), listed(&["rado:2:1"])).is_err());
        assert!(Engine::new_finite(host_r21(), listed(&["path", "rado:2:1"])).is_ok());
    }

    #[test]
    fn finite_mode_grows_only_the_non_residual_members() {
        let listed = Family::listed(
            ["path", "matching", "rado:2:1"]
                .iter()
                .map(|s| parse_pattern(s).unwrap())
                .collect(),
        )
        .unwrap();
        let mut eng = Engine::new_finite(host_r21(), listed).unwrap();
        eng.run_stages(12).unwrap();
        assert_eq!(eng.factors().len(), 2);
        assert!(eng.check_back_and_forth().is_empty());
        assert!(eng.check_embeddings().is_empty());
        // the residual still has edges: the construction must not have
        // swallowed the whole host prefix
        let mut residual_edges = 0;
        for a in 0..12u64 {
            for b in a + 1..12u64 {
                if eng.residual_contains(&v(a), &v(b)) {
                    residual_edges += 1;
                }
            }
        }
        assert!(residual_edges > 0);
    }

    #[test]
    fn host_parsing() {
        assert!(matches!(HostGraph::parse("complete"), Ok(HostGraph::Complete)));
        assert!(matches!(HostGraph::parse("rado:2:1"), Ok(HostGraph::Rado(_))));
        assert!(HostGraph::parse("path").is_err());
        assert!(HostGraph::parse("rado:2:0,1").is_err());
    }
}
