//! Degree-bucket analysis of the informed-set boundary.
//!
//! The boundary of I_t is partitioned into dyadic degree buckets
//! A_i = { u in boundary : d_i <= deg(u) < 2 d_i } with d_i = 2^(i-1).
//! A bucket index is *good* when the bucket is large enough relative to the
//! boundary and its degree floor is balanced against the bucket size or the
//! boundary size. The good buckets always cover at least half the boundary;
//! `check_half_boundary` verifies that as a machine check of the bucket
//! implementation.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::nodeset::NodeSet;
use crate::protocol::TrialResult;
use crate::rational::Frac;
use crate::seeds::derive_seed;

#[derive(Debug, Error, PartialEq)]
pub enum BoundaryError {
    #[error("q must lie in (0, 1], got {0}")]
    InvalidQ(String),
    #[error("nodes {0:?} are not in the boundary of the informed set")]
    NotInBoundary(Vec<u32>),
    #[error("nodes {0:?} have informed-neighbor fraction below q")]
    QFractionViolated(Vec<u32>),
}

/// Partition of the boundary into dyadic degree buckets, with the good-index
/// subset. The `log_n` field is log(n) in the configured base, as used in
/// the size threshold |A_i| >= |boundary| / (4 log n).
#[derive(Debug, Clone)]
pub struct BoundaryPartition {
    pub boundary: NodeSet,
    /// Nonempty buckets only, keyed by index i >= 1.
    pub buckets: BTreeMap<u32, NodeSet>,
    /// Vol(A_i) = sum of deg(u) over the bucket.
    pub volumes: BTreeMap<u32, u64>,
    pub good_indices: Vec<u32>,
    pub log_n: f64,
}

/// Bucket index for a degree d >= 1: the i with 2^(i-1) <= d < 2^i.
pub fn bucket_index(degree: u32) -> u32 {
    debug_assert!(degree >= 1);
    32 - degree.leading_zeros()
}

/// Degree floor d_i = 2^(i-1) of bucket i.
pub fn bucket_floor(i: u32) -> u64 {
    1u64 << (i - 1)
}

impl BoundaryPartition {
    pub fn boundary_size(&self) -> u32 {
        self.boundary.len()
    }

    pub fn is_good(&self, i: u32) -> bool {
        self.good_indices.contains(&i)
    }

    /// CSV table `i,d_i,bucket_size,volume,in_good_set,regime` for the given
    /// call count.
    pub fn csv_table(&self, k: u32) -> String {
        let regimes = classify_regimes(self, k);
        let mut out = String::from("i,d_i,bucket_size,volume,in_good_set,regime\n");
        for (&i, bucket) in &self.buckets {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                i,
                bucket_floor(i),
                bucket.len(),
                self.volumes[&i],
                self.is_good(i),
                regimes[&i],
            ));
        }
        out
    }
}

/// Partitions the boundary of `informed` using the natural logarithm in the
/// good-index size threshold.
pub fn partition_boundary(g: &Graph, informed: &NodeSet) -> BoundaryPartition {
    partition_boundary_with_log_base(g, informed, std::f64::consts::E)
}

/// As [`partition_boundary`] with an explicit logarithm base for the
/// |A_i| >= |boundary| / (4 log n) threshold; the base only rescales a
/// constant and exists for sensitivity studies.
pub fn partition_boundary_with_log_base(
    g: &Graph,
    informed: &NodeSet,
    log_base: f64,
) -> BoundaryPartition {
    assert!(log_base > 1.0, "logarithm base must exceed 1");
    let n = g.node_count();
    let boundary = g.boundary(informed);

    let mut buckets: BTreeMap<u32, NodeSet> = BTreeMap::new();
    let mut volumes: BTreeMap<u32, u64> = BTreeMap::new();
    for u in &boundary {
        let deg = g.degree(u);
        debug_assert!(deg >= 1, "boundary nodes have informed neighbors");
        let i = bucket_index(deg);
        buckets
            .entry(i)
            .or_insert_with(|| NodeSet::new(n))
            .insert(u);
        *volumes.entry(i).or_insert(0) += deg as u64;
    }

    let log_n = if boundary.is_empty() {
        0.0
    } else {
        (n as f64).ln() / log_base.ln()
    };
    let b = boundary.len() as f64;
    let good_indices = buckets
        .iter()
        .filter(|(&i, bucket)| {
            let size = bucket.len() as u64;
            let big_enough = (size as f64) * 4.0 * log_n >= b;
            let d = bucket_floor(i);
            big_enough && (d <= 16 * size || d >= 2 * boundary.len() as u64)
        })
        .map(|(&i, _)| i)
        .collect();

    BoundaryPartition {
        boundary,
        buckets,
        volumes,
        good_indices,
        log_n,
    }
}

/// The good buckets cover at least half the boundary. This is a proven
/// deterministic fact, so a `false` here is an implementation bug, never a
/// property of the input.
pub fn check_half_boundary(p: &BoundaryPartition) -> bool {
    let good_mass: u64 = p
        .good_indices
        .iter()
        .map(|i| p.buckets[i].len() as u64)
        .sum();
    2 * good_mass >= p.boundary.len() as u64
}

/// Degree-regime labels of one bucket. Medium and high may hold at once;
/// `none` marks the buckets excluded from the good set's degree disjunct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegimeLabels {
    pub low: bool,
    pub medium: bool,
    pub high: bool,
}

impl RegimeLabels {
    pub fn is_none(&self) -> bool {
        !(self.low || self.medium || self.high)
    }
}

impl std::fmt::Display for RegimeLabels {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_none() {
            return write!(f, "none");
        }
        let mut parts = Vec::new();
        if self.low {
            parts.push("low");
        }
        if self.medium {
            parts.push("medium");
        }
        if self.high {
            parts.push("high");
        }
        write!(f, "{}", parts.join("|"))
    }
}

/// Low / medium / high degree-regime classification per bucket:
/// low when d_i <= 1024*96*k, medium when 1024*96*k < d_i <= 16 |A_i|,
/// high when d_i >= 2 |boundary|.
pub fn classify_regimes(p: &BoundaryPartition, k: u32) -> BTreeMap<u32, RegimeLabels> {
    let low_cut = 1024u64 * 96 * k as u64;
    let boundary = p.boundary.len() as u64;
    p.buckets
        .iter()
        .map(|(&i, bucket)| {
            let d = bucket_floor(i);
            let size = bucket.len() as u64;
            let labels = RegimeLabels {
                low: d <= low_cut,
                medium: d > low_cut && d <= 16 * size,
                high: d >= 2 * boundary,
            };
            (i, labels)
        })
        .collect()
}

/// h_i(v) = |N(v) ∩ bucket| for every node v. Summing over v gives
/// Vol(bucket).
pub fn h_counts(g: &Graph, bucket: &NodeSet) -> Vec<u32> {
    let mut h = vec![0u32; g.node_count() as usize];
    for u in bucket {
        for &w in g.neighbors(u) {
            h[w as usize] += 1;
        }
    }
    h
}

#[derive(Debug, Clone, Serialize)]
pub struct PullProgressReport {
    /// Fraction of trials in which at least |B|/4 members of B pulled the
    /// rumor within the round budget.
    pub success_rate: f64,
    /// ceil(1/(q k)) rounds granted per trial.
    pub rounds: u32,
    pub b_size: u32,
    /// Whether |B| >= ln n, the asymptotic size assumption, holds here.
    pub b_large_enough: bool,
    pub trials: u32,
}

/// Empirically checks the pull-progress property: every node of B has at
/// least a q-fraction of informed neighbors, and we measure how often at
/// least a quarter of B pulls the rumor within ceil(1/(q k)) pull-only
/// rounds (the informed set is frozen as the request target).
pub fn pull_progress_check(
    g: &Graph,
    informed: &NodeSet,
    b: &NodeSet,
    q: Frac,
    k: u32,
    trials: u32,
    seed: u64,
) -> Result<PullProgressReport, BoundaryError> {
    use num::Zero;
    if q <= Frac::zero() || q > Frac::from_integer(1) {
        return Err(BoundaryError::InvalidQ(crate::rational::format_frac(q)));
    }
    assert!(k >= 1 && trials >= 1);

    let boundary = g.boundary(informed);
    let outside: Vec<u32> = b.iter().filter(|&v| !boundary.contains(v)).collect();
    if !outside.is_empty() {
        return Err(BoundaryError::NotInBoundary(outside));
    }

    // q-fraction precondition, checked exactly: m * q_den >= q_num * deg.
    let (qn, qd) = (*q.numer() as u64, *q.denom() as u64);
    let mut offenders = Vec::new();
    let mut hit_prob = vec![0.0f64; g.node_count() as usize];
    for u in b {
        let deg = g.degree(u) as u64;
        let m = g
            .neighbors(u)
            .iter()
            .filter(|&&w| informed.contains(w))
            .count() as u64;
        if m * qd < qn * deg {
            offenders.push(u);
        }
        let miss = 1.0 - m as f64 / deg as f64;
        hit_prob[u as usize] = 1.0 - miss.powi(k.min(i32::MAX as u32) as i32);
    }
    if !offenders.is_empty() {
        return Err(BoundaryError::QFractionViolated(offenders));
    }

    // rounds = ceil(1 / (q k)) = ceil(q_den / (q_num k))
    let rounds = qd.div_ceil(qn * k as u64) as u32;

    let b_size = b.len();
    let mut successes = 0u32;
    for trial in 0..trials {
        let base = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[trial as u64]));
        let mut pulled = 0u32;
        let mut done = NodeSet::new(g.node_count());
        'rounds: for round in 0..rounds {
            for u in b {
                if done.contains(u) {
                    continue;
                }
                let mut rng = base.clone();
                rng.set_stream(((round as u64) << 32) | u as u64);
                if rng.random_bool(hit_prob[u as usize]) {
                    done.insert(u);
                    pulled += 1;
                    if 4 * pulled >= b_size {
                        break 'rounds;
                    }
                }
            }
        }
        if 4 * pulled >= b_size {
            successes += 1;
        }
    }

    let n = g.node_count() as f64;
    Ok(PullProgressReport {
        success_rate: successes as f64 / trials as f64,
        rounds,
        b_size,
        b_large_enough: b_size as f64 >= n.ln(),
        trials,
    })
}

/// One audited window of a trace: growth of the informed set and of the
/// boundary over `[start, start + window]`, against the thresholds
/// |boundary|/256 and (k^(1/6)/64) |boundary|.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthWindow {
    pub start: u32,
    pub informed_start: u32,
    pub boundary_start: u32,
    pub informed_delta: u32,
    pub boundary_delta: i64,
    pub informed_ok: bool,
    pub boundary_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthAudit {
    pub k: u32,
    pub window: u32,
    pub windows: Vec<GrowthWindow>,
    pub audited: usize,
    /// Windows where at least one growth disjunct held.
    pub ok_count: usize,
    pub fraction_ok: f64,
}

/// Audits a trace for the growth dichotomy: over each window starting at a
/// round with |I_t| <= n/2, either the informed set grew by at least
/// |boundary|/256 or the boundary grew by at least (k^(1/6)/64) |boundary|.
/// Growth must be strictly positive, so stalled windows report both false.
/// The audit reports rates; the underlying claims are asymptotic
/// high-probability statements, not per-window guarantees.
pub fn growth_audit(trial: &TrialResult, k: u32, window: u32) -> GrowthAudit {
    assert!(window >= 1);
    let boundary_factor = (k as f64).powf(1.0 / 6.0) / 64.0;
    let rows = &trial.trace;
    // States 0..rows.len() are recorded rows; state rows.len() is the final
    // informed count, with boundary 0 when the trial completed.
    let informed_at = |idx: usize| -> u32 {
        if idx < rows.len() {
            rows[idx].informed
        } else {
            trial.final_informed
        }
    };
    let end_state_usable = !trial.completion.is_censored();

    let mut windows = Vec::new();
    for (t, row) in rows.iter().enumerate() {
        let end = t + window as usize;
        if 2 * row.informed as u64 > trial.n as u64 {
            continue;
        }
        let boundary_end = if end < rows.len() {
            rows[end].boundary
        } else if end == rows.len() && end_state_usable {
            0
        } else {
            continue;
        };
        let informed_delta = informed_at(end) - row.informed;
        let boundary_delta = boundary_end as i64 - row.boundary as i64;
        let informed_ok =
            informed_delta >= 1 && 256 * informed_delta as u64 >= row.boundary as u64;
        let boundary_ok =
            boundary_delta >= 1 && boundary_delta as f64 >= boundary_factor * row.boundary as f64;
        windows.push(GrowthWindow {
            start: t as u32,
            informed_start: row.informed,
            boundary_start: row.boundary,
            informed_delta,
            boundary_delta,
            informed_ok,
            boundary_ok,
        });
    }

    let audited = windows.len();
    let ok_count = windows
        .iter()
        .filter(|w| w.informed_ok || w.boundary_ok)
        .count();
    GrowthAudit {
        k,
        window,
        windows,
        audited,
        ok_count,
        fraction_ok: if audited == 0 {
            1.0
        } else {
            ok_count as f64 / audited as f64
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_complete, generate_er, generate_path, generate_star};
    use crate::protocol::{run_trial, Mode, ProtocolConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bucket_indices_are_dyadic() {
        assert_eq!(bucket_index(1), 1);
        assert_eq!(bucket_index(2), 2);
        assert_eq!(bucket_index(3), 2);
        assert_eq!(bucket_index(4), 3);
        assert_eq!(bucket_index(7), 3);
        assert_eq!(bucket_index(8), 4);
        for d in 1u32..10_000 {
            let i = bucket_index(d);
            let floor = bucket_floor(i);
            assert!(floor <= d as u64 && (d as u64) < 2 * floor);
        }
    }

    #[test]
    fn star_center_partition() {
        let g = generate_star(9).unwrap();
        let p = partition_boundary(&g, &NodeSet::singleton(9, 0));
        assert_eq!(p.boundary_size(), 8);
        assert_eq!(p.buckets.len(), 1);
        assert_eq!(p.buckets[&1].len(), 8);
        assert_eq!(p.good_indices, vec![1]);
        assert!(check_half_boundary(&p));
    }

    #[test]
    fn k8_single_source_partition() {
        // Boundary nodes have degree 7, landing in bucket 3 (d_3 = 4).
        let g = generate_complete(8).unwrap();
        let p = partition_boundary(&g, &NodeSet::singleton(8, 0));
        assert_eq!(p.boundary_size(), 7);
        assert_eq!(p.buckets.keys().copied().collect::<Vec<_>>(), vec![3]);
        assert_eq!(p.volumes[&3], 49);
        assert_eq!(p.good_indices, vec![3]);
    }

    #[test]
    fn last_uninformed_node_partition() {
        let g = generate_er(64, 0.2, 5).unwrap();
        let v = 17u32;
        let mut informed = NodeSet::full(64);
        informed.remove(v);
        let p = partition_boundary(&g, &informed);
        assert_eq!(p.boundary_size(), 1);
        let i = bucket_index(g.degree(v));
        assert_eq!(p.buckets.keys().copied().collect::<Vec<_>>(), vec![i]);
        // a singleton bucket is always good
        assert_eq!(p.good_indices, vec![i]);
        assert!(check_half_boundary(&p));
    }

    #[test]
    fn empty_boundary_partition() {
        let g = generate_complete(4).unwrap();
        let p = partition_boundary(&g, &NodeSet::full(4));
        assert!(p.boundary.is_empty());
        assert!(p.buckets.is_empty());
        assert!(p.good_indices.is_empty());
        assert!(check_half_boundary(&p));
    }

    #[test]
    fn buckets_partition_the_boundary() {
        for seed in 0..30 {
            let g = generate_er(128, 0.05, seed).unwrap();
            let informed =
                NodeSet::from_members(128, (0..128).filter(|v| (v * 7 + seed as u32) % 5 == 0));
            if informed.is_empty() {
                continue;
            }
            let p = partition_boundary(&g, &informed);
            let mut union = NodeSet::new(128);
            let mut total = 0u32;
            for bucket in p.buckets.values() {
                assert!(bucket.is_disjoint(&union));
                union.union_with(bucket);
                total += bucket.len();
            }
            assert_eq!(union, p.boundary);
            assert_eq!(total, p.boundary_size());
            // volume bounds: d_i |A_i| <= Vol(A_i) < 2 d_i |A_i|
            for (&i, bucket) in &p.buckets {
                let vol = p.volumes[&i];
                let d = bucket_floor(i);
                assert!(d * bucket.len() as u64 <= vol);
                assert!(vol < 2 * d * bucket.len() as u64);
            }
            assert!(check_half_boundary(&p));
        }
    }

    #[test]
    fn half_boundary_randomized_sweep() {
        let mut rng = <ChaCha8Rng as SeedableRng>::seed_from_u64(42);
        for _ in 0..1000 {
            let n = rng.random_range(2..=256);
            let p_edge = rng.random_range(0.01..0.3);
            let g = generate_er(n, p_edge, rng.random()).unwrap();
            let size = rng.random_range(1..n);
            let mut informed = NodeSet::new(n);
            while informed.len() < size {
                informed.insert(rng.random_range(0..n));
            }
            let p = partition_boundary(&g, &informed);
            assert!(check_half_boundary(&p), "n={n} informed={size}");
        }
    }

    #[test]
    fn regime_thresholds() {
        // synthetic partitions exercise the exact threshold constants
        let mk = |i: u32, bucket_size: u32, boundary_size: u32| -> BoundaryPartition {
            let n = 1 << 21;
            let mut buckets = BTreeMap::new();
            buckets.insert(i, NodeSet::from_members(n, 0..bucket_size));
            let mut volumes = BTreeMap::new();
            volumes.insert(i, bucket_floor(i) * bucket_size as u64);
            BoundaryPartition {
                boundary: NodeSet::from_members(n, 0..boundary_size),
                buckets,
                volumes,
                good_indices: vec![],
                log_n: (n as f64).ln(),
            }
        };

        // d_i = 1, k = 2: low (1 <= 196608)
        let p = mk(1, 4, 4);
        assert_eq!(
            classify_regimes(&p, 2)[&1],
            RegimeLabels {
                low: true,
                medium: false,
                high: false
            }
        );

        // d_i = 2^20, |A_i| = 2^18, k = 2: medium (196608 < 2^20 <= 2^22)
        let p = mk(21, 1 << 18, 1 << 19);
        let labels = classify_regimes(&p, 2)[&21];
        assert!(labels.medium && !labels.low);

        // d_i = 64, |boundary| = 16: high (64 >= 32); also low for any k
        let p = mk(7, 8, 16);
        let labels = classify_regimes(&p, 1)[&7];
        assert!(labels.high && labels.low);
        assert_eq!(labels.to_string(), "low|high");
    }

    #[test]
    fn good_indices_are_regime_covered() {
        // every good bucket carries at least one regime label (the three
        // cases cover the good set)
        for seed in 0..50 {
            let g = generate_er(200, 0.08, seed).unwrap();
            let informed = NodeSet::from_members(200, (0..200).filter(|v| v % 3 == 0));
            let p = partition_boundary(&g, &informed);
            let regimes = classify_regimes(&p, 1);
            for &i in &p.good_indices {
                assert!(!regimes[&i].is_none(), "good bucket {i} unlabeled");
            }
        }
    }

    #[test]
    fn h_counts_examples() {
        let k4 = generate_complete(4).unwrap();
        let bucket = NodeSet::from_members(4, [1, 2]);
        assert_eq!(h_counts(&k4, &bucket), vec![2, 1, 1, 2]);

        let star = generate_star(6).unwrap();
        let leaves = NodeSet::from_members(6, 1..6);
        let h = h_counts(&star, &leaves);
        assert_eq!(h[0], 5);
        assert!(h[1..].iter().all(|&x| x == 0));

        let empty = NodeSet::new(4);
        assert_eq!(h_counts(&k4, &empty), vec![0; 4]);
    }

    #[test]
    fn h_counts_volume_identity() {
        for seed in 0..20 {
            let g = generate_er(100, 0.1, seed).unwrap();
            let bucket = NodeSet::from_members(100, (0..100).filter(|v| v % 4 == 1));
            let h = h_counts(&g, &bucket);
            let sum: u64 = h.iter().map(|&x| x as u64).sum();
            assert_eq!(sum, g.volume(&bucket));
        }
    }

    #[test]
    fn pull_progress_on_clique_core() {
        // 66 informed core nodes of K_130; B = 64 boundary nodes, each with
        // informed fraction 66/129 >= 1/2. One round, per-node success
        // probability 1 - (63/129)^2 ~ 0.76, so P[fewer than 16 of 64] is
        // below 1e-12 and every trial should succeed.
        let g = generate_complete(130).unwrap();
        let informed = NodeSet::from_members(130, 0..66);
        let b = NodeSet::from_members(130, 66..130);
        let rep = pull_progress_check(&g, &informed, &b, Frac::new(1, 2), 2, 1000, 5).unwrap();
        assert_eq!(rep.rounds, 1);
        assert_eq!(rep.b_size, 64);
        assert!(rep.b_large_enough);
        assert!(rep.success_rate >= 0.99, "rate {}", rep.success_rate);
    }

    #[test]
    fn pull_progress_round_budget() {
        // qk > 1 gives a single round
        let g = generate_complete(16).unwrap();
        let informed = NodeSet::from_members(16, 0..8);
        let b = NodeSet::from_members(16, 8..16);
        let rep = pull_progress_check(&g, &informed, &b, Frac::new(1, 2), 3, 10, 1).unwrap();
        assert_eq!(rep.rounds, 1);
        // qk < 1 stretches the budget: q = 1/8, k = 2 -> ceil(4) = 4
        let rep = pull_progress_check(&g, &informed, &b, Frac::new(1, 8), 2, 10, 1).unwrap();
        assert_eq!(rep.rounds, 4);
    }

    #[test]
    fn pull_progress_vacuous_on_empty_b() {
        let g = generate_complete(8).unwrap();
        let informed = NodeSet::from_members(8, 0..4);
        let rep =
            pull_progress_check(&g, &informed, &NodeSet::new(8), Frac::new(1, 2), 1, 5, 0).unwrap();
        assert_eq!(rep.success_rate, 1.0);
        assert_eq!(rep.b_size, 0);
    }

    #[test]
    fn pull_progress_preconditions() {
        let g = generate_path(4).unwrap();
        let informed = NodeSet::singleton(4, 0);
        // node 3 is not in the boundary of {0}
        let err = pull_progress_check(
            &g,
            &informed,
            &NodeSet::from_members(4, [1, 3]),
            Frac::new(1, 2),
            1,
            5,
            0,
        )
        .unwrap_err();
        assert_eq!(err, BoundaryError::NotInBoundary(vec![3]));

        // node 1 of the path has informed fraction 1/2 < 3/4
        let err = pull_progress_check(
            &g,
            &informed,
            &NodeSet::singleton(4, 1),
            Frac::new(3, 4),
            1,
            5,
            0,
        )
        .unwrap_err();
        assert_eq!(err, BoundaryError::QFractionViolated(vec![1]));
    }

    #[test]
    fn growth_audit_on_clique_trial() {
        let g = generate_complete(256).unwrap();
        let cfg = ProtocolConfig::new(Mode::PushPull, 16, 1000, 3).unwrap();
        let trial = run_trial(&g, 0, &cfg).unwrap();
        let audit = growth_audit(&trial, 16, 1);
        assert!(audit.audited >= 1);
        // cliques grow aggressively; every audited window should pass
        assert_eq!(audit.ok_count, audit.audited);
        assert!((audit.fraction_ok - 1.0).abs() < 1e-12);
    }

    #[test]
    fn growth_audit_stalled_windows_fail() {
        let g = crate::graph::generate_disjoint_cliques(8).unwrap();
        let cfg = ProtocolConfig::new(Mode::PushPull, 2, 30, 9).unwrap();
        let trial = run_trial(&g, 0, &cfg).unwrap();
        let audit = growth_audit(&trial, 2, 1);
        // once the component is saturated the boundary is empty and nothing
        // grows: both disjuncts must read false
        let stalled: Vec<_> = audit
            .windows
            .iter()
            .filter(|w| w.boundary_start == 0)
            .collect();
        assert!(!stalled.is_empty());
        for w in stalled {
            assert!(!w.informed_ok && !w.boundary_ok);
        }
    }
}
