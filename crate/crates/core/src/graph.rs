//! Immutable simple undirected graphs.
//!
//! Nodes are identifiers `0..n`; adjacency is stored in compressed sparse
//! rows with each neighbor list sorted, which makes equality, serialization,
//! and index-based sampling canonical. Values are immutable after
//! construction and safe to share across threads.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::nodeset::NodeSet;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    EmptyGraph,
    #[error("node count must be even, got {0}")]
    OddNodeCount(u32),
    #[error("edge probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("self-loop on node {0}")]
    SelfLoop(u32),
    #[error("node {node} out of range for n = {n}")]
    NodeOutOfRange { node: u64, n: u32 },
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing `n <count>` header before edges")]
    MissingHeader,
    #[error("duplicate `n <count>` header")]
    DuplicateHeader,
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("expected two endpoints")]
    WrongFieldCount,
    #[error("self-loop `{0} {0}`")]
    SelfLoop(u64),
    #[error("node {node} out of range for n = {n}")]
    NodeOutOfRange { node: u64, n: u32 },
}

/// Diameter of a graph; `Infinite` iff the graph is disconnected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diameter {
    Finite(u32),
    Infinite,
}

impl Diameter {
    pub fn is_finite(self) -> bool {
        matches!(self, Diameter::Finite(_))
    }
}

impl std::fmt::Display for Diameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => write!(f, "infinite"),
        }
    }
}

/// Simple undirected graph in CSR form with sorted adjacency rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Builds a graph from undirected edges. Duplicate edges and both
    /// orientations collapse to a single edge; self-loops and out-of-range
    /// endpoints are rejected.
    pub fn from_edges<I>(n: u32, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut directed: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::NodeOutOfRange {
                        node: w as u64,
                        n,
                    });
                }
            }
            directed.push((u, v));
            directed.push((v, u));
        }
        directed.sort_unstable();
        directed.dedup();

        let mut offsets = vec![0usize; n as usize + 1];
        for &(u, _) in &directed {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n as usize {
            offsets[i + 1] += offsets[i];
        }
        let neighbors = directed.into_iter().map(|(_, v)| v).collect();
        Ok(Graph { offsets, neighbors })
    }

    pub fn node_count(&self) -> u32 {
        (self.offsets.len() - 1) as u32
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> u64 {
        self.neighbors.len() as u64 / 2
    }

    #[inline]
    pub fn degree(&self, v: u32) -> u32 {
        (self.offsets[v as usize + 1] - self.offsets[v as usize]) as u32
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn nodes(&self) -> std::ops::Range<u32> {
        0..self.node_count()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn min_degree(&self) -> u32 {
        self.nodes().map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> u32 {
        self.nodes().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Sum of degrees over the members of `s`.
    pub fn volume(&self, s: &NodeSet) -> u64 {
        s.iter().map(|v| self.degree(v) as u64).sum()
    }

    /// N(S): nodes adjacent to at least one member of `s`. Note that
    /// N({v}) never contains v, but N(S) may intersect S for |S| >= 2.
    pub fn neighborhood(&self, s: &NodeSet) -> NodeSet {
        assert_eq!(s.universe(), self.node_count());
        let mut out = NodeSet::new(self.node_count());
        for u in s {
            for &w in self.neighbors(u) {
                out.insert(w);
            }
        }
        out
    }

    /// Boundary of S: N(S) \ S.
    pub fn boundary(&self, s: &NodeSet) -> NodeSet {
        assert_eq!(s.universe(), self.node_count());
        let mut out = NodeSet::new(self.node_count());
        for u in s {
            for &w in self.neighbors(u) {
                if !s.contains(w) {
                    out.insert(w);
                }
            }
        }
        out
    }

    /// Size of the boundary of S, without materializing the set.
    pub fn boundary_size(&self, s: &NodeSet) -> u32 {
        self.boundary(s).len()
    }

    /// Cumulative BFS ball sizes |N^i[v]| for i = 0, 1, ... The sequence is
    /// non-decreasing and stops once it stabilizes at the size of v's
    /// component; the last entry is that component size.
    pub fn bfs_layers(&self, v: u32) -> Vec<u32> {
        assert!(v < self.node_count());
        let mut visited = NodeSet::new(self.node_count());
        visited.insert(v);
        let mut frontier = vec![v];
        let mut sizes = vec![1u32];
        let mut next = Vec::new();
        while !frontier.is_empty() {
            next.clear();
            for &u in &frontier {
                for &w in self.neighbors(u) {
                    if visited.insert(w) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            sizes.push(visited.len());
            std::mem::swap(&mut frontier, &mut next);
        }
        sizes
    }

    /// Eccentricity of `v` restricted to its component, plus the number of
    /// nodes reached.
    fn eccentricity(&self, v: u32, scratch: &mut BfsScratch) -> (u32, u32) {
        scratch.reset(self.node_count());
        scratch.visited.insert(v);
        scratch.frontier.push(v);
        let mut reached = 1u32;
        let mut depth = 0u32;
        while !scratch.frontier.is_empty() {
            scratch.next.clear();
            for i in 0..scratch.frontier.len() {
                let u = scratch.frontier[i];
                for &w in self.neighbors(u) {
                    if scratch.visited.insert(w) {
                        scratch.next.push(w);
                        reached += 1;
                    }
                }
            }
            if scratch.next.is_empty() {
                break;
            }
            depth += 1;
            std::mem::swap(&mut scratch.frontier, &mut scratch.next);
        }
        (depth, reached)
    }

    /// Exact diameter by BFS from every node; `Infinite` iff disconnected.
    /// O(n (n + m)) — fine at desk scale; see `diameter_lower_bound` for
    /// larger instances.
    pub fn diameter(&self) -> Diameter {
        let n = self.node_count();
        let worst = (0..n)
            .into_par_iter()
            .map_init(BfsScratch::default, |scratch, v| {
                let (ecc, reached) = self.eccentricity(v, scratch);
                (reached < n, ecc)
            })
            .reduce(
                || (false, 0),
                |a, b| (a.0 || b.0, a.1.max(b.1)),
            );
        if worst.0 {
            Diameter::Infinite
        } else {
            Diameter::Finite(worst.1)
        }
    }

    /// Diameter lower bound from BFS at `samples` seeded random sources.
    /// Returns `Infinite` as soon as one BFS fails to reach all nodes (which
    /// is then exact, not a bound).
    pub fn diameter_lower_bound(&self, samples: u32, seed: u64) -> Diameter {
        let n = self.node_count();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut scratch = BfsScratch::default();
        let mut best = 0u32;
        for _ in 0..samples.min(n) {
            let v = rng.random_range(0..n);
            let (ecc, reached) = self.eccentricity(v, &mut scratch);
            if reached < n {
                return Diameter::Infinite;
            }
            best = best.max(ecc);
        }
        Diameter::Finite(best)
    }

    pub fn is_connected(&self) -> bool {
        let mut scratch = BfsScratch::default();
        let (_, reached) = self.eccentricity(0, &mut scratch);
        reached == self.node_count()
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Graph {{ n: {}, m: {} }}",
            self.node_count(),
            self.edge_count()
        )
    }
}

#[derive(Default)]
struct BfsScratch {
    visited: NodeSet,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl BfsScratch {
    fn reset(&mut self, n: u32) {
        if self.visited.universe() != n {
            self.visited = NodeSet::new(n);
        } else {
            self.visited.clear();
        }
        self.frontier.clear();
        self.next.clear();
    }
}

/// K_n: every pair of distinct nodes adjacent.
pub fn generate_complete(n: u32) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let mut offsets = Vec::with_capacity(n as usize + 1);
    let mut neighbors = Vec::with_capacity(n as usize * (n as usize - 1));
    offsets.push(0usize);
    for u in 0..n {
        for v in 0..n {
            if v != u {
                neighbors.push(v);
            }
        }
        offsets.push(neighbors.len());
    }
    Ok(Graph { offsets, neighbors })
}

/// Two disjoint complete graphs K_{n/2} + K_{n/2}; n must be even.
pub fn generate_disjoint_cliques(n: u32) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if n % 2 != 0 {
        return Err(GraphError::OddNodeCount(n));
    }
    let half = n / 2;
    let mut offsets = Vec::with_capacity(n as usize + 1);
    let mut neighbors = Vec::new();
    offsets.push(0usize);
    for u in 0..n {
        let (lo, hi) = if u < half { (0, half) } else { (half, n) };
        for v in lo..hi {
            if v != u {
                neighbors.push(v);
            }
        }
        offsets.push(neighbors.len());
    }
    Ok(Graph { offsets, neighbors })
}

/// Erdős–Rényi G(n, p): each of the C(n,2) potential edges appears
/// independently with probability p. Deterministic for a fixed seed; uses
/// geometric skips so the cost is O(n + m).
pub fn generate_er(n: u32, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(GraphError::InvalidProbability(p));
    }
    if p == 0.0 {
        return Graph::from_edges(n, std::iter::empty());
    }
    if p == 1.0 {
        return generate_complete(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_q = (1.0 - p).ln();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    // Batagelj-Brandes skip sampling over the lower triangle (w < v).
    let mut v: u64 = 1;
    let mut w: i64 = -1;
    let n = n as u64;
    while v < n {
        let r: f64 = rng.random();
        let skip = ((1.0 - r).ln() / log_q).floor() as i64;
        w += 1 + skip.max(0);
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as u32, v as u32));
        }
    }
    Graph::from_edges(n as u32, edges)
}

/// Reads the plain-text edge-list format: an `n <count>` header, then one
/// `u v` edge per line. Lines starting with `#` are ignored; CRLF accepted.
/// Duplicate lines and both orientations collapse to one undirected edge.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
    let mut n: Option<u32> = None;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| GraphError::Io(e.to_string()))?;
        let line = line.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |kind| GraphError::Parse {
            line: line_no,
            kind,
        };
        let mut fields = line.split_whitespace();
        let first = fields.next().expect("nonempty line");
        if first == "n" {
            if n.is_some() {
                return Err(parse_err(ParseErrorKind::DuplicateHeader));
            }
            let count = fields
                .next()
                .ok_or_else(|| parse_err(ParseErrorKind::WrongFieldCount))?;
            if fields.next().is_some() {
                return Err(parse_err(ParseErrorKind::WrongFieldCount));
            }
            let count: u32 = count
                .parse()
                .map_err(|_| parse_err(ParseErrorKind::MalformedToken(count.to_string())))?;
            if count == 0 {
                return Err(GraphError::EmptyGraph);
            }
            n = Some(count);
            continue;
        }
        let n = n.ok_or_else(|| parse_err(ParseErrorKind::MissingHeader))?;
        let second = fields
            .next()
            .ok_or_else(|| parse_err(ParseErrorKind::WrongFieldCount))?;
        if fields.next().is_some() {
            return Err(parse_err(ParseErrorKind::WrongFieldCount));
        }
        let endpoint = |tok: &str| -> Result<u64, GraphError> {
            tok.parse::<u64>()
                .map_err(|_| parse_err(ParseErrorKind::MalformedToken(tok.to_string())))
        };
        let u = endpoint(first)?;
        let v = endpoint(second)?;
        if u == v {
            return Err(parse_err(ParseErrorKind::SelfLoop(u)));
        }
        for x in [u, v] {
            if x >= n as u64 {
                return Err(parse_err(ParseErrorKind::NodeOutOfRange { node: x, n }));
            }
        }
        edges.push((u as u32, v as u32));
    }
    match n {
        Some(n) => Graph::from_edges(n, edges),
        None => Err(GraphError::Parse {
            line: 0,
            kind: ParseErrorKind::MissingHeader,
        }),
    }
}

/// Writes the canonical edge-list form: header, then each edge once as
/// `u v` with u < v, sorted, LF line endings. `load(save(g)) == g`.
pub fn save_edge_list<W: Write>(g: &Graph, mut writer: W) -> std::io::Result<()> {
    writeln!(writer, "n {}", g.node_count())?;
    for u in g.nodes() {
        for &v in g.neighbors(u) {
            if u < v {
                writeln!(writer, "{u} {v}")?;
            }
        }
    }
    Ok(())
}

/// Convenience wrapper over [`load_edge_list`] for in-memory text.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    load_edge_list(text.as_bytes())
}

/// Canonical text form of a graph (see [`save_edge_list`]).
pub fn edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    save_edge_list(g, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("edge list is ascii")
}

/// Path 0-1-2-...-(n-1). Test and fixture helper.
pub fn generate_path(n: u32) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    Graph::from_edges(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)))
}

/// Cycle on n >= 3 nodes.
pub fn generate_cycle(n: u32) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::EmptyGraph);
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Star with center 0 and n-1 leaves.
pub fn generate_star(n: u32) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::EmptyGraph);
    }
    Graph::from_edges(n, (1..n).map(|v| (0, v)))
}

/// Two K_{n/2} cliques joined by the single edge {0, n/2}; n even, n >= 4.
pub fn generate_barbell(n: u32) -> Result<Graph, GraphError> {
    if n < 4 || n % 2 != 0 {
        return Err(GraphError::OddNodeCount(n));
    }
    let half = n / 2;
    let mut edges = Vec::new();
    for u in 0..half {
        for v in (u + 1)..half {
            edges.push((u, v));
            edges.push((u + half, v + half));
        }
    }
    edges.push((0, half));
    Graph::from_edges(n, edges)
}
