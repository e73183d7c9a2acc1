//! The synchronous k-call rumor spreading engine.
//!
//! In every round, each informed node samples k neighbors uniformly at random
//! with replacement and sends the rumor to them (push), while each uninformed
//! node samples k neighbors the same way and requests the rumor (pull); a
//! pull succeeds iff any of the k draws lands on an informed node. All
//! sampling in a round references the informed set as of the start of that
//! round: a node informed in round t cannot relay until round t+1.
//!
//! Sampling is performed distribution-exactly but not draw-by-draw where a
//! shortcut exists:
//!
//! - A node's pull outcome depends only on whether any draw hits the informed
//!   set, so it is sampled as one Bernoulli with the exact closed-form
//!   probability 1 - (1 - m/deg)^k.
//! - A push with k >= deg(u) samples the multinomial occupancy of the
//!   neighbor list by sequential conditional binomials, costing O(deg)
//!   instead of O(k).
//!
//! Randomness is drawn from per-(round, node) ChaCha substreams derived from
//! the trial seed, so results are identical under any execution schedule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::nodeset::NodeSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("k must be at least 1")]
    ZeroCalls,
    #[error("round cap must be at least 1")]
    ZeroRoundCap,
    #[error("source node {node} out of range for n = {n}")]
    SourceOutOfRange { node: u32, n: u32 },
    #[error("informed set must be nonempty")]
    EmptyStartSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Push,
    Pull,
    PushPull,
}

impl Mode {
    fn has_push(self) -> bool {
        matches!(self, Mode::Push | Mode::PushPull)
    }

    fn has_pull(self) -> bool {
        matches!(self, Mode::Pull | Mode::PushPull)
    }
}

/// Round semantics. `StartOfRound` is the protocol; `EndOfRoundPull` is a
/// deliberately broken variant (pulls see the current round's push gains)
/// kept as a mutation target for the distribution tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RoundSemantics {
    #[default]
    StartOfRound,
    EndOfRoundPull,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub mode: Mode,
    /// Calls per node per round.
    pub k: u32,
    pub round_cap: u32,
    pub seed: u64,
    #[serde(default)]
    pub semantics: RoundSemantics,
}

impl ProtocolConfig {
    pub fn new(mode: Mode, k: u32, round_cap: u32, seed: u64) -> Result<Self, ProtocolError> {
        if k == 0 {
            return Err(ProtocolError::ZeroCalls);
        }
        if round_cap == 0 {
            return Err(ProtocolError::ZeroRoundCap);
        }
        Ok(ProtocolConfig {
            mode,
            k,
            round_cap,
            seed,
            semantics: RoundSemantics::StartOfRound,
        })
    }

    /// Default cap: 100 (ceil(log2 n) + 1), two orders of magnitude above the
    /// worst-case clique round count, so censoring signals disconnection or a
    /// pathological instance rather than an unlucky run.
    pub fn default_round_cap(n: u32) -> u32 {
        let ceil_log2 = if n <= 1 {
            0
        } else {
            (n as u64).next_power_of_two().trailing_zeros()
        };
        100 * (ceil_log2 + 1)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// One executed round: the start-of-round sizes and the newly informed nodes
/// partitioned by the mechanism that reached them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrace {
    /// Round index t; the row describes the transition I_t -> I_{t+1}.
    pub round: u32,
    /// |I_t|.
    pub informed: u32,
    /// |boundary(I_t)|.
    pub boundary: u32,
    pub push_only: u32,
    pub pull_only: u32,
    /// Nodes reached by both mechanisms in the same round (informed once).
    pub both: u32,
}

impl RoundTrace {
    pub fn gained(&self) -> u32 {
        self.push_only + self.pull_only + self.both
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completion {
    /// All n nodes informed after this many rounds.
    Completed(u32),
    /// Round cap reached with nodes still uninformed.
    Censored(u32),
}

impl Completion {
    pub fn rounds(&self) -> Option<u32> {
        match self {
            Completion::Completed(r) => Some(*r),
            Completion::Censored(_) => None,
        }
    }

    pub fn is_censored(&self) -> bool {
        matches!(self, Completion::Censored(_))
    }

    /// Rounds with censoring mapped to the +infinity sentinel, for order
    /// statistics and KS tests.
    pub fn as_extended(&self) -> u64 {
        match self {
            Completion::Completed(r) => *r as u64,
            Completion::Censored(_) => u64::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub completion: Completion,
    pub trace: Vec<RoundTrace>,
    /// Starting node, when the trial started from a single source.
    pub source: Option<u32>,
    pub n: u32,
    pub final_informed: u32,
    pub config: ProtocolConfig,
}

impl TrialResult {
    /// CSV rows `t,informed,boundary,push_only,pull_only,both`.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("t,informed,boundary,push_only,pull_only,both\n");
        for row in &self.trace {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.round, row.informed, row.boundary, row.push_only, row.pull_only, row.both
            ));
        }
        out
    }
}

#[inline]
fn substream(base: &ChaCha8Rng, round: u32, node: u32) -> ChaCha8Rng {
    let mut rng = base.clone();
    rng.set_stream(((round as u64) << 32) | node as u64);
    rng
}

/// Probability that at least one of k uniform-with-replacement draws over
/// `deg` neighbors lands in a target set of size `m`.
#[inline]
fn hit_probability(m: u32, deg: u32, k: u32) -> f64 {
    let q = 1.0 - m as f64 / deg as f64;
    1.0 - q.powi(k.min(i32::MAX as u32) as i32)
}

/// Samples the set of distinct targets of k uniform-with-replacement draws
/// from `neighbors`, inserting them into `gain`. For k below the degree the
/// draws are made directly; otherwise the occupancy vector is sampled by
/// sequential conditional binomials, which has the same joint distribution.
fn sample_push_targets(neighbors: &[u32], k: u32, rng: &mut ChaCha8Rng, gain: &mut NodeSet) {
    let d = neighbors.len();
    if d == 0 {
        return;
    }
    if (k as usize) < d {
        for _ in 0..k {
            gain.insert(neighbors[rng.random_range(0..d)]);
        }
    } else {
        let mut remaining = k as u64;
        let mut cells = d as u64;
        for &w in neighbors {
            if remaining == 0 {
                break;
            }
            let c = if cells == 1 {
                remaining
            } else {
                Binomial::new(remaining, 1.0 / cells as f64)
                    .expect("valid binomial")
                    .sample(rng)
            };
            if c > 0 {
                gain.insert(w);
            }
            remaining -= c;
            cells -= 1;
        }
    }
}

/// Trial state for one spreading process. The informed-neighbor counts
/// m_v = |N(v) ∩ I_t| are maintained incrementally as nodes become informed,
/// so the total counting cost over a whole trial is one pass over the edges
/// rather than one per round.
struct Engine<'g> {
    g: &'g Graph,
    cfg: ProtocolConfig,
    base: ChaCha8Rng,
    informed: NodeSet,
    counts: Vec<u32>,
    boundary_nodes: Vec<u32>,
    push_gain: NodeSet,
    pull_gain: NodeSet,
}

impl<'g> Engine<'g> {
    fn new(g: &'g Graph, start: &NodeSet, cfg: &ProtocolConfig) -> Self {
        let n = g.node_count();
        let mut counts = vec![0u32; n as usize];
        for u in start {
            for &w in g.neighbors(u) {
                counts[w as usize] += 1;
            }
        }
        Engine {
            g,
            cfg: *cfg,
            base: ChaCha8Rng::seed_from_u64(cfg.seed),
            informed: start.clone(),
            counts,
            boundary_nodes: Vec::new(),
            push_gain: NodeSet::new(n),
            pull_gain: NodeSet::new(n),
        }
    }

    /// Executes round `t`, advancing the informed set, and returns the trace
    /// row for the transition.
    fn round(&mut self, round: u32) -> RoundTrace {
        debug_assert!(!self.informed.is_empty());
        let g = self.g;
        let start_informed = self.informed.len();

        self.boundary_nodes.clear();
        for v in g.nodes() {
            if self.counts[v as usize] > 0 && !self.informed.contains(v) {
                self.boundary_nodes.push(v);
            }
        }
        let boundary = self.boundary_nodes.len() as u32;

        self.push_gain.clear();
        if self.cfg.mode.has_push() {
            for u in self.informed.iter() {
                let neighbors = g.neighbors(u);
                if neighbors.is_empty() {
                    continue;
                }
                let mut rng = substream(&self.base, round, u);
                sample_push_targets(neighbors, self.cfg.k, &mut rng, &mut self.push_gain);
            }
        }

        self.pull_gain.clear();
        if self.cfg.mode.has_pull() {
            match self.cfg.semantics {
                RoundSemantics::StartOfRound => {
                    for &v in &self.boundary_nodes {
                        let m = self.counts[v as usize];
                        let p = hit_probability(m, g.degree(v), self.cfg.k);
                        let mut rng = substream(&self.base, round, v);
                        if rng.random_bool(p) {
                            self.pull_gain.insert(v);
                        }
                    }
                }
                RoundSemantics::EndOfRoundPull => {
                    // Mutated semantics: pulls observe push gains from the
                    // same round. Diagnostic only, recounted from scratch.
                    let mut merged = self.informed.clone();
                    merged.union_with(&self.push_gain);
                    for v in g.nodes() {
                        if merged.contains(v) {
                            continue;
                        }
                        let m = g
                            .neighbors(v)
                            .iter()
                            .filter(|&&w| merged.contains(w))
                            .count() as u32;
                        if m == 0 {
                            continue;
                        }
                        let p = hit_probability(m, g.degree(v), self.cfg.k);
                        let mut rng = substream(&self.base, round, v);
                        if rng.random_bool(p) {
                            self.pull_gain.insert(v);
                        }
                    }
                }
            }
        }

        // Partition the gains. Push targets may already be informed; pulls
        // are uninformed by construction.
        self.push_gain.difference_with(&self.informed);
        let both = self.push_gain.intersection_count(&self.pull_gain);
        let push_only = self.push_gain.len() - both;
        let pull_only = self.pull_gain.len() - both;

        for gain in [&self.push_gain, &self.pull_gain] {
            for v in gain {
                if self.informed.insert(v) {
                    for &w in g.neighbors(v) {
                        self.counts[w as usize] += 1;
                    }
                }
            }
        }

        RoundTrace {
            round,
            informed: start_informed,
            boundary,
            push_only,
            pull_only,
            both,
        }
    }
}

/// Executes a single round against the start-of-round informed set and
/// returns the new informed set and the trace row. Randomness comes from the
/// per-(round, node) substreams of `cfg.seed`, so a sequence of `step` calls
/// with increasing `round` reproduces `run_trial` exactly.
pub fn step(
    g: &Graph,
    informed: &NodeSet,
    cfg: &ProtocolConfig,
    round: u32,
) -> Result<(NodeSet, RoundTrace), ProtocolError> {
    if informed.is_empty() {
        return Err(ProtocolError::EmptyStartSet);
    }
    let mut engine = Engine::new(g, informed, cfg);
    let row = engine.round(round);
    Ok((engine.informed, row))
}

/// Runs a full trial from a single source until every node is informed or
/// the round cap is hit. The censored result retains the full trace.
pub fn run_trial(g: &Graph, source: u32, cfg: &ProtocolConfig) -> Result<TrialResult, ProtocolError> {
    let n = g.node_count();
    if source >= n {
        return Err(ProtocolError::SourceOutOfRange { node: source, n });
    }
    let start = NodeSet::singleton(n, source);
    run_from_set_observed(g, &start, Some(source), cfg, |_, _| {})
}

/// As [`run_trial`], but starting from an arbitrary nonempty set.
pub fn run_from_set(
    g: &Graph,
    start: &NodeSet,
    cfg: &ProtocolConfig,
) -> Result<TrialResult, ProtocolError> {
    run_from_set_observed(g, start, None, cfg, |_, _| {})
}

/// Trial loop with an observer invoked as `observer(t, &I_t)` before each
/// executed round; used by diagnostics that need the informed set itself
/// rather than just the trace.
pub fn run_from_set_observed<F>(
    g: &Graph,
    start: &NodeSet,
    source: Option<u32>,
    cfg: &ProtocolConfig,
    mut observer: F,
) -> Result<TrialResult, ProtocolError>
where
    F: FnMut(u32, &NodeSet),
{
    let n = g.node_count();
    assert_eq!(start.universe(), n, "start set universe mismatch");
    if start.is_empty() {
        return Err(ProtocolError::EmptyStartSet);
    }
    let mut engine = Engine::new(g, start, cfg);
    let mut trace = Vec::new();
    let mut t = 0u32;
    let completion = loop {
        if engine.informed.len() == n {
            break Completion::Completed(t);
        }
        if t == cfg.round_cap {
            break Completion::Censored(cfg.round_cap);
        }
        observer(t, &engine.informed);
        let row = engine.round(t);
        trace.push(row);
        t += 1;
    };
    Ok(TrialResult {
        completion,
        trace,
        source,
        n,
        final_informed: engine.informed.len(),
        config: *cfg,
    })
}

/// Rounds until the informed set intersects `target` (0 if they already
/// intersect), censored at the round cap.
pub fn run_until_target(
    g: &Graph,
    start: &NodeSet,
    target: &NodeSet,
    cfg: &ProtocolConfig,
) -> Result<Completion, ProtocolError> {
    let n = g.node_count();
    assert_eq!(start.universe(), n);
    assert_eq!(target.universe(), n);
    if start.is_empty() || target.is_empty() {
        return Err(ProtocolError::EmptyStartSet);
    }
    let mut engine = Engine::new(g, start, cfg);
    let mut t = 0u32;
    Ok(loop {
        if engine.informed.intersection_count(target) > 0 {
            break Completion::Completed(t);
        }
        if t == cfg.round_cap || engine.informed.len() == n {
            break Completion::Censored(cfg.round_cap);
        }
        engine.round(t);
        t += 1;
    })
}
