//! Small-set vertex-expansion certification.
//!
//! A graph is a (phi, alpha)-expander when every nonempty set S of at most
//! alpha*n nodes has |boundary(S)| / |S| >= phi. Exact certification
//! enumerates every candidate set; sampled falsification minimizes over a
//! randomized candidate pool and can only ever refute or report an upper
//! bound. All ratios are exact rationals so certification is bit-exact.

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::graph::{Diameter, Graph};
use crate::nodeset::NodeSet;
use crate::rational::{ceil_log, ceil_mul, floor_mul, format_frac, Frac};

#[derive(Debug, Error, PartialEq)]
pub enum ExpansionError {
    #[error("alpha must lie in (0, 1/2], got {0}")]
    InvalidAlpha(String),
    #[error("phi must be positive, got {0}")]
    InvalidPhi(String),
    #[error("floor(alpha n) = 0 for alpha = {alpha}, n = {n}: no nonempty candidate sets")]
    AlphaTooSmall { alpha: String, n: u32 },
    #[error("exact enumeration needs {required} subsets, budget is {budget}; switch to sampling")]
    BudgetExceeded { required: u128, budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Sampled,
}

/// Result of an expansion computation. For `Sampled`, `phi_min` is only an
/// upper bound on the true minimum; for `Exact` it is the minimum itself.
#[derive(Debug, Clone)]
pub struct ExpansionReport {
    pub alpha: Frac,
    pub phi_min: Frac,
    /// A set achieving `phi_min`, sorted.
    pub witness: Vec<u32>,
    pub method: Method,
    pub sets_examined: u64,
}

impl ExpansionReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "alpha": format_frac(self.alpha),
            "phi_min": format_frac(self.phi_min),
            "witness": self.witness,
            "method": match self.method { Method::Exact => "exact", Method::Sampled => "sampled" },
            "sets_examined": self.sets_examined,
        })
    }
}

fn validate_alpha(alpha: Frac) -> Result<(), ExpansionError> {
    if alpha <= Frac::zero() || alpha > Frac::new(1, 2) {
        return Err(ExpansionError::InvalidAlpha(format_frac(alpha)));
    }
    Ok(())
}

fn validate_phi(phi: Frac) -> Result<(), ExpansionError> {
    if phi <= Frac::zero() {
        return Err(ExpansionError::InvalidPhi(format_frac(phi)));
    }
    Ok(())
}

fn max_set_size(g: &Graph, alpha: Frac) -> Result<u32, ExpansionError> {
    let smax = floor_mul(alpha, g.node_count() as u64) as u32;
    if smax == 0 {
        return Err(ExpansionError::AlphaTooSmall {
            alpha: format_frac(alpha),
            n: g.node_count(),
        });
    }
    Ok(smax)
}

/// Number of subsets an exact run must visit: sum of C(n, s) for s <= smax.
fn subsets_required(n: u32, smax: u32) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for s in 1..=smax as u128 {
        binom = binom.saturating_mul(n as u128 - s + 1) / s;
        total = total.saturating_add(binom);
    }
    total
}

/// Counts |boundary(S)| for the set marked in `in_s`, using a stamp array so
/// nothing needs clearing between candidates.
fn boundary_count_stamped(
    g: &Graph,
    members: &[u32],
    in_s: &[bool],
    stamp: &mut [u32],
    cur: u32,
) -> u64 {
    let mut count = 0u64;
    for &u in members {
        for &w in g.neighbors(u) {
            if !in_s[w as usize] && stamp[w as usize] != cur {
                stamp[w as usize] = cur;
                count += 1;
            }
        }
    }
    count
}

struct Best {
    num: u64, // |boundary|
    den: u64, // |S|
    witness: Vec<u32>,
}

impl Best {
    fn ratio(&self) -> Frac {
        Frac::new(self.num as i64, self.den as i64)
    }

    /// Strictly-smaller comparison num/den < self.num/self.den, exact.
    fn improves(&self, num: u64, den: u64) -> bool {
        (num as u128) * (self.den as u128) < (self.num as u128) * (den as u128)
    }
}

fn consider(best: &mut Option<Best>, num: u64, den: u64, witness: impl FnOnce() -> Vec<u32>) {
    let better = match best {
        None => true,
        Some(b) => b.improves(num, den),
    };
    if better {
        *best = Some(Best {
            num,
            den,
            witness: witness(),
        });
    }
}

fn found_zero(best: &Option<Best>) -> bool {
    best.as_ref().is_some_and(|b| b.num == 0)
}

/// Exact small-set vertex expansion: enumerates every nonempty S with
/// |S| <= floor(alpha n) in size-ascending lexicographic order and returns
/// the exact minimum boundary ratio with the first argmin encountered.
/// Stops early when a ratio of zero is found, since it cannot be beaten.
pub fn vertex_expansion_exact(
    g: &Graph,
    alpha: Frac,
    work_budget: u64,
) -> Result<ExpansionReport, ExpansionError> {
    validate_alpha(alpha)?;
    let n = g.node_count();
    let smax = max_set_size(g, alpha)?;
    let required = subsets_required(n, smax);
    if required > work_budget as u128 {
        return Err(ExpansionError::BudgetExceeded {
            required,
            budget: work_budget,
        });
    }

    let mut in_s = vec![false; n as usize];
    let mut stamp = vec![0u32; n as usize];
    let mut cur = 0u32;
    let mut examined = 0u64;
    let mut best: Option<Best> = None;

    'sizes: for s in 1..=smax as usize {
        let mut idx: Vec<u32> = (0..s as u32).collect();
        loop {
            cur += 1;
            examined += 1;
            for &v in &idx {
                in_s[v as usize] = true;
            }
            let b = boundary_count_stamped(g, &idx, &in_s, &mut stamp, cur);
            for &v in &idx {
                in_s[v as usize] = false;
            }
            consider(&mut best, b, s as u64, || idx.clone());
            if found_zero(&best) {
                break 'sizes;
            }

            // Advance to the next lexicographic combination of this size.
            let mut advanced = false;
            for i in (0..s).rev() {
                if idx[i] != i as u32 + n - s as u32 {
                    idx[i] += 1;
                    for j in i + 1..s {
                        idx[j] = idx[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }

    let best = best.expect("smax >= 1 guarantees at least the singletons");
    Ok(ExpansionReport {
        alpha,
        phi_min: best.ratio(),
        witness: best.witness,
        method: Method::Exact,
        sets_examined: examined,
    })
}

/// Sampled upper bound on the small-set vertex expansion. The candidate pool
/// contains every singleton, uniform random subsets at geometrically spaced
/// sizes, and BFS balls around random centers up to the size cap. BFS balls
/// are what find disconnected or locally clustered counterexamples, which
/// uniform subsets almost never hit.
pub fn vertex_expansion_sample(
    g: &Graph,
    alpha: Frac,
    samples: u64,
    seed: u64,
) -> Result<ExpansionReport, ExpansionError> {
    validate_alpha(alpha)?;
    let n = g.node_count();
    let smax = max_set_size(g, alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut examined = 0u64;
    let mut best: Option<Best> = None;

    // Singletons: |boundary({v})| = deg(v).
    for v in 0..n {
        examined += 1;
        consider(&mut best, g.degree(v) as u64, 1, || vec![v]);
        if found_zero(&best) {
            break;
        }
    }

    // Geometrically spaced subset sizes: 2, 4, 8, ..., plus smax itself.
    let mut sizes: Vec<u32> = Vec::new();
    let mut s = 2u32;
    while s < smax {
        sizes.push(s);
        s = s.saturating_mul(2);
    }
    if smax >= 2 {
        sizes.push(smax);
    }

    let mut perm: Vec<u32> = (0..n).collect();
    let mut in_s = vec![false; n as usize];
    let mut stamp = vec![0u32; n as usize];
    let mut cur = 0u32;

    for j in 0..samples {
        if found_zero(&best) {
            break;
        }

        // One uniform random subset at a rotating size.
        if !sizes.is_empty() {
            let size = sizes[(j % sizes.len() as u64) as usize] as usize;
            for i in 0..size {
                let pick = rng.random_range(i..n as usize);
                perm.swap(i, pick);
            }
            cur += 1;
            for &v in &perm[..size] {
                in_s[v as usize] = true;
            }
            let b = boundary_count_stamped(g, &perm[..size], &in_s, &mut stamp, cur);
            for &v in &perm[..size] {
                in_s[v as usize] = false;
            }
            examined += 1;
            let members = &perm[..size];
            consider(&mut best, b, size as u64, || {
                let mut w = members.to_vec();
                w.sort_unstable();
                w
            });
        }

        // BFS balls around a random center: the ball N^i[center] has
        // |boundary| equal to the next layer's increment, read directly off
        // the cumulative layer sizes.
        let center = rng.random_range(0..n);
        let layers = g.bfs_layers(center);
        for (i, &size) in layers.iter().enumerate() {
            if size > smax {
                break;
            }
            let b = if i + 1 < layers.len() {
                (layers[i + 1] - size) as u64
            } else {
                0 // ball swallowed the whole component
            };
            examined += 1;
            let radius = i as u32;
            consider(&mut best, b, size as u64, || ball_members(g, center, radius));
        }
    }

    let best = best.expect("singleton pool is never empty");
    Ok(ExpansionReport {
        alpha,
        phi_min: best.ratio(),
        witness: best.witness,
        method: Method::Sampled,
        sets_examined: examined,
    })
}

/// Members of the BFS ball N^radius[center], sorted.
fn ball_members(g: &Graph, center: u32, radius: u32) -> Vec<u32> {
    let mut visited = NodeSet::singleton(g.node_count(), center);
    let mut frontier = vec![center];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in g.neighbors(u) {
                if visited.insert(w) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    visited.to_vec()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Exact enumeration proved the expansion property.
    Certified,
    /// A concrete witness set violates it (valid from either method).
    Refuted { witness: Vec<u32>, ratio: Frac },
    /// Sampling failed to refute; nothing is proven.
    Unknown,
}

#[derive(Debug, Clone, Copy)]
pub enum CertStrategy {
    Exact { work_budget: u64 },
    Sampled { samples: u64, seed: u64 },
}

/// Default subset budget for exact certification (about n = 24 at alpha = 1/2).
pub const DEFAULT_WORK_BUDGET: u64 = 50_000_000;

/// Decides whether `g` is a (phi, alpha)-expander. CERTIFIED can come only
/// from exact enumeration; REFUTED carries a violating witness from either
/// method; sampling that fails to refute yields UNKNOWN.
pub fn is_expander(
    g: &Graph,
    phi: Frac,
    alpha: Frac,
    strategy: CertStrategy,
) -> Result<(Verdict, ExpansionReport), ExpansionError> {
    validate_phi(phi)?;
    let report = match strategy {
        CertStrategy::Exact { work_budget } => vertex_expansion_exact(g, alpha, work_budget)?,
        CertStrategy::Sampled { samples, seed } => {
            vertex_expansion_sample(g, alpha, samples, seed)?
        }
    };
    let verdict = if report.phi_min < phi {
        Verdict::Refuted {
            witness: report.witness.clone(),
            ratio: report.phi_min,
        }
    } else if report.method == Method::Exact {
        Verdict::Certified
    } else {
        Verdict::Unknown
    };
    Ok((verdict, report))
}

/// Parameter-regime classification for (phi, alpha).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRegime {
    /// alpha > 1/(1+phi): no such expander exists on any graph.
    Impossible,
    /// alpha = 1/(1+phi) with phi >= 1: only diameter-2, dense graphs qualify.
    Restricted,
    /// alpha <= 1/(2+2phi): expanders may be disconnected.
    RiskDisconnected,
    /// 1/(2+2phi) < alpha < 1/(1+phi): the well-behaved regime.
    Standard,
}

pub fn check_alpha_feasibility(phi: Frac, alpha: Frac) -> Result<AlphaRegime, ExpansionError> {
    validate_phi(phi)?;
    validate_alpha(alpha)?;
    let one = Frac::one();
    let restricted_edge = one / (one + phi);
    let disconnect_edge = one / (Frac::from_integer(2) + Frac::from_integer(2) * phi);
    Ok(if alpha > restricted_edge {
        AlphaRegime::Impossible
    } else if alpha == restricted_edge && phi >= one {
        AlphaRegime::Restricted
    } else if alpha <= disconnect_edge {
        AlphaRegime::RiskDisconnected
    } else {
        AlphaRegime::Standard
    })
}

/// Outcome of checking the small-diameter consequence of expansion: an
/// expander with alpha > 1/(2+2phi) and phi > 1 has diameter at most
/// 2 ceil(log_phi n).
#[derive(Debug, Clone, serde::Serialize)]
pub struct DiameterLemmaReport {
    #[serde(serialize_with = "serialize_diameter")]
    pub diameter: Diameter,
    /// 2 ceil(log_phi n); absent when phi <= 1 (the bound is undefined).
    pub bound: Option<u64>,
    pub holds: bool,
    /// phi > 1 and 2 (1+phi) floor(alpha n) > n, the integer-sharp form of
    /// alpha > 1/(2+2phi). The floor form matters: with admissible set sizes
    /// capped at floor(alpha n), a graph can be certified while the ball-
    /// growth argument has no set of size alpha*n to work with (two disjoint
    /// K_3 at alpha = 1/4 is certified a (2, 1/4)-expander yet disconnected).
    pub precondition_ok: bool,
    pub note: Option<String>,
}

pub(crate) fn serialize_diameter<S: serde::Serializer>(
    d: &Diameter,
    s: S,
) -> Result<S::Ok, S::Error> {
    match d {
        Diameter::Finite(v) => s.serialize_u32(*v),
        Diameter::Infinite => s.serialize_str("infinite"),
    }
}

pub fn check_diameter_lemma(g: &Graph, phi: Frac, alpha: Frac) -> DiameterLemmaReport {
    let n = g.node_count();
    let one = Frac::one();
    let smax = floor_mul(alpha.max(Frac::zero()), n as u64);
    let precondition_ok = phi > one
        && Frac::from_integer(2) * (one + phi) * Frac::from_integer(smax as i64)
            > Frac::from_integer(n as i64);
    let bound = (phi > one).then(|| 2 * ceil_log(phi, n as u64) as u64);
    let diameter = g.diameter();
    let (holds, note) = match (diameter, bound) {
        (Diameter::Finite(d), Some(b)) => (d as u64 <= b, None),
        (Diameter::Infinite, _) => (
            false,
            Some("graph is disconnected; diameter is infinite".to_string()),
        ),
        (_, None) => (false, Some("bound undefined for phi <= 1".to_string())),
    };
    let note = if !precondition_ok {
        let mut msg = note.unwrap_or_default();
        if !msg.is_empty() {
            msg.push_str("; ");
        }
        msg.push_str("lemma precondition violated: need alpha > 1/(2+2phi) and phi > 1");
        Some(msg)
    } else {
        note
    };
    DiameterLemmaReport {
        diameter,
        bound,
        holds,
        precondition_ok,
        note,
    }
}

/// Outcome of checking the consequences forced at the restricted edge
/// alpha = 1/(1+phi): diameter at most 2 and minimum degree at least
/// ceil(phi n / (1+phi)).
#[derive(Debug, Clone, PartialEq)]
pub enum RestrictedRegimeReport {
    /// The graph is not a (phi, 1/(1+phi))-expander; nothing to check.
    NotApplicable { phi_min: Frac },
    Checked {
        diameter: Diameter,
        diameter_le_2: bool,
        min_degree: u32,
        required_min_degree: u64,
        min_degree_ok: bool,
    },
}

pub fn check_restricted_regime(
    g: &Graph,
    phi: Frac,
    work_budget: u64,
) -> Result<RestrictedRegimeReport, ExpansionError> {
    validate_phi(phi)?;
    if phi < Frac::one() {
        return Err(ExpansionError::InvalidPhi(format_frac(phi)));
    }
    let alpha = Frac::one() / (Frac::one() + phi);
    let report = vertex_expansion_exact(g, alpha, work_budget)?;
    if report.phi_min < phi {
        return Ok(RestrictedRegimeReport::NotApplicable {
            phi_min: report.phi_min,
        });
    }
    let n = g.node_count() as u64;
    let required = ceil_mul(phi / (Frac::one() + phi), n);
    let diameter = g.diameter();
    let diameter_le_2 = matches!(diameter, Diameter::Finite(d) if d <= 2);
    let min_degree = g.min_degree();
    Ok(RestrictedRegimeReport::Checked {
        diameter,
        diameter_le_2,
        min_degree,
        required_min_degree: required,
        min_degree_ok: min_degree as u64 >= required,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        generate_complete, generate_disjoint_cliques, generate_path, generate_star,
    };

    fn frac(p: i64, q: i64) -> Frac {
        Frac::new(p, q)
    }

    #[test]
    fn exact_on_k6() {
        let g = generate_complete(6).unwrap();
        let r = vertex_expansion_exact(&g, frac(1, 3), 1 << 20).unwrap();
        assert_eq!(r.phi_min, frac(2, 1));
        assert_eq!(r.witness.len(), 2);
        assert_eq!(r.method, Method::Exact);
        // C(6,1) + C(6,2) candidates
        assert_eq!(r.sets_examined, 6 + 15);
    }

    #[test]
    fn exact_clique_closed_form() {
        // K_n at any alpha: minimum ratio is (n - s)/s at s = floor(alpha n)
        for n in 2i64..=16 {
            for alpha in [frac(1, 2), frac(1, 3), frac(1, 4)] {
                let s = floor_mul(alpha, n as u64) as i64;
                if s == 0 {
                    continue;
                }
                let g = generate_complete(n as u32).unwrap();
                let r = vertex_expansion_exact(&g, alpha, 1 << 20).unwrap();
                assert_eq!(r.phi_min, frac(n - s, s), "K_{n} at {alpha}");
            }
        }
    }

    #[test]
    fn exact_on_path() {
        let g = generate_path(4).unwrap();
        let r = vertex_expansion_exact(&g, frac(1, 2), 1 << 20).unwrap();
        assert_eq!(r.phi_min, frac(1, 2));
        assert_eq!(r.witness, vec![0, 1]);
    }

    #[test]
    fn exact_on_two_disjoint_k6() {
        let g = generate_disjoint_cliques(12).unwrap();
        let r = vertex_expansion_exact(&g, frac(1, 6), 1 << 20).unwrap();
        assert_eq!(r.phi_min, frac(2, 1));
        assert_eq!(r.witness.len(), 2);
        // witness is two nodes of one clique; boundary is the 4 remaining
        let w = NodeSet::from_members(12, r.witness.iter().copied());
        assert_eq!(g.boundary(&w).len(), 4);
    }

    #[test]
    fn exact_budget_enforced() {
        let g = generate_complete(12).unwrap();
        let err = vertex_expansion_exact(&g, frac(1, 2), 10).unwrap_err();
        match err {
            ExpansionError::BudgetExceeded { required, budget } => {
                assert_eq!(budget, 10);
                // sum_{s=1..6} C(12, s) = 12+66+220+495+792+924
                assert_eq!(required, 2509);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn exact_rejects_tiny_alpha() {
        let g = generate_complete(4).unwrap();
        assert!(matches!(
            vertex_expansion_exact(&g, frac(1, 8), 1 << 20),
            Err(ExpansionError::AlphaTooSmall { .. })
        ));
    }

    #[test]
    fn sampled_reaches_clique_minimum() {
        let g = generate_complete(8).unwrap();
        let r = vertex_expansion_sample(&g, frac(1, 4), 64, 1).unwrap();
        // exact expansion of K_8 at alpha = 1/4 is (8-2)/2 = 3, and size-2
        // subsets all achieve it.
        assert_eq!(r.phi_min, frac(3, 1));
        assert_eq!(r.method, Method::Sampled);
    }

    #[test]
    fn sampled_finds_disconnected_component_via_bfs_ball() {
        let g = generate_disjoint_cliques(6).unwrap(); // two triangles
        let r = vertex_expansion_sample(&g, frac(1, 2), 100, 7).unwrap();
        assert_eq!(r.phi_min, frac(0, 1));
        assert_eq!(r.witness.len(), 3);
        let w = NodeSet::from_members(6, r.witness.iter().copied());
        assert!(g.boundary(&w).is_empty());
    }

    #[test]
    fn sampled_with_zero_samples_is_singleton_pool() {
        let g = generate_star(9).unwrap();
        let r = vertex_expansion_sample(&g, frac(1, 2), 0, 3).unwrap();
        assert_eq!(r.phi_min, frac(1, 1)); // min degree singleton: a leaf
        assert_eq!(r.witness.len(), 1);
    }

    #[test]
    fn sample_never_beats_exact() {
        for seed in 0..5 {
            let g = crate::graph::generate_er(18, 0.25, seed).unwrap();
            let exact = vertex_expansion_exact(&g, frac(1, 3), 1 << 24).unwrap();
            let sampled = vertex_expansion_sample(&g, frac(1, 3), 50, seed).unwrap();
            assert!(sampled.phi_min >= exact.phi_min);
        }
    }

    #[test]
    fn witness_ratio_reproducible_from_graph_ops() {
        let g = crate::graph::generate_er(16, 0.3, 11).unwrap();
        for r in [
            vertex_expansion_exact(&g, frac(1, 2), 1 << 24).unwrap(),
            vertex_expansion_sample(&g, frac(1, 2), 40, 5).unwrap(),
        ] {
            let w = NodeSet::from_members(16, r.witness.iter().copied());
            assert!(!w.is_empty());
            assert!(w.len() as u64 <= floor_mul(r.alpha, 16));
            let recomputed = Frac::new(g.boundary(&w).len() as i64, w.len() as i64);
            assert_eq!(recomputed, r.phi_min);
        }
    }

    #[test]
    fn verdicts() {
        let g = generate_complete(6).unwrap();
        let (v, _) = is_expander(
            &g,
            frac(2, 1),
            frac(1, 3),
            CertStrategy::Exact {
                work_budget: 1 << 20,
            },
        )
        .unwrap();
        assert_eq!(v, Verdict::Certified);

        // disconnected graph refuted by a sampled BFS ball at alpha = 1/2
        let g2 = generate_disjoint_cliques(12).unwrap();
        let (v2, _) = is_expander(
            &g2,
            frac(2, 1),
            frac(1, 2),
            CertStrategy::Sampled {
                samples: 200,
                seed: 3,
            },
        )
        .unwrap();
        assert!(matches!(v2, Verdict::Refuted { ratio, .. } if ratio == frac(0, 1)));

        // phi above the min degree is refuted by a singleton from sampling
        let star = generate_star(9).unwrap();
        let (v3, _) = is_expander(
            &star,
            frac(2, 1),
            frac(1, 4),
            CertStrategy::Sampled {
                samples: 0,
                seed: 0,
            },
        )
        .unwrap();
        match v3 {
            Verdict::Refuted { witness, ratio } => {
                assert_eq!(witness.len(), 1);
                assert_eq!(ratio, frac(1, 1));
            }
            other => panic!("expected refutation, got {other:?}"),
        }

        // sampling that fails to refute is only UNKNOWN
        let k6 = generate_complete(6).unwrap();
        let (v4, _) = is_expander(
            &k6,
            frac(1, 1),
            frac(1, 3),
            CertStrategy::Sampled {
                samples: 50,
                seed: 0,
            },
        )
        .unwrap();
        assert_eq!(v4, Verdict::Unknown);
    }

    #[test]
    fn alpha_feasibility_regimes() {
        // 0.3 > 1/4
        assert_eq!(
            check_alpha_feasibility(frac(3, 1), frac(3, 10)).unwrap(),
            AlphaRegime::Impossible
        );
        // 1/8 = 1/(2+2*3)
        assert_eq!(
            check_alpha_feasibility(frac(3, 1), frac(1, 8)).unwrap(),
            AlphaRegime::RiskDisconnected
        );
        // 1/8 < 0.2 <= 1/4
        assert_eq!(
            check_alpha_feasibility(frac(3, 1), frac(1, 5)).unwrap(),
            AlphaRegime::Standard
        );
        // exactly at the restricted edge
        assert_eq!(
            check_alpha_feasibility(frac(3, 1), frac(1, 4)).unwrap(),
            AlphaRegime::Restricted
        );
        assert_eq!(
            check_alpha_feasibility(frac(1, 1), frac(1, 2)).unwrap(),
            AlphaRegime::Restricted
        );
        assert!(check_alpha_feasibility(frac(0, 1), frac(1, 4)).is_err());
        assert!(check_alpha_feasibility(frac(1, 1), frac(2, 3)).is_err());
    }

    #[test]
    fn diameter_lemma_on_k16() {
        let g = generate_complete(16).unwrap();
        let rep = check_diameter_lemma(&g, frac(3, 1), frac(1, 4));
        assert_eq!(rep.diameter, Diameter::Finite(1));
        assert_eq!(rep.bound, Some(6)); // 2 ceil(log_3 16)
        assert!(rep.holds);
        assert!(rep.precondition_ok);
    }

    #[test]
    fn diameter_lemma_flags_disconnected() {
        let g = generate_disjoint_cliques(12).unwrap();
        let rep = check_diameter_lemma(&g, frac(2, 1), frac(1, 6));
        assert_eq!(rep.diameter, Diameter::Infinite);
        assert!(!rep.holds);
        assert!(!rep.precondition_ok); // 1/6 = 1/(2+2*2) is not > threshold
        assert!(rep.note.unwrap().contains("precondition"));
    }

    #[test]
    fn restricted_regime_reports() {
        let k8 = generate_complete(8).unwrap();
        match check_restricted_regime(&k8, frac(3, 1), 1 << 20).unwrap() {
            RestrictedRegimeReport::Checked {
                diameter_le_2,
                min_degree,
                required_min_degree,
                min_degree_ok,
                ..
            } => {
                assert!(diameter_le_2);
                assert_eq!(min_degree, 7);
                assert_eq!(required_min_degree, 6);
                assert!(min_degree_ok);
            }
            other => panic!("unexpected {other:?}"),
        }

        let k2 = generate_complete(2).unwrap();
        match check_restricted_regime(&k2, frac(1, 1), 1 << 20).unwrap() {
            RestrictedRegimeReport::Checked {
                diameter_le_2,
                min_degree_ok,
                required_min_degree,
                ..
            } => {
                assert!(diameter_le_2);
                assert_eq!(required_min_degree, 1);
                assert!(min_degree_ok);
            }
            other => panic!("unexpected {other:?}"),
        }

        let path = generate_path(4).unwrap();
        match check_restricted_regime(&path, frac(1, 1), 1 << 20).unwrap() {
            RestrictedRegimeReport::NotApplicable { phi_min } => {
                assert_eq!(phi_min, frac(1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn report_json_schema() {
        let g = generate_complete(8).unwrap();
        let r = vertex_expansion_exact(&g, frac(1, 4), 1 << 20).unwrap();
        let v = r.to_json();
        assert_eq!(v["phi_min"], "3/1");
        assert_eq!(v["alpha"], "1/4");
        assert_eq!(v["method"], "exact");
        assert!(v["witness"].as_array().unwrap().len() == 2);
    }
}
