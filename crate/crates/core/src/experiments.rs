//! Batch trial execution and statistical analysis.
//!
//! An [`ExperimentPlan`] sweeps instance families and protocol parameters;
//! [`run_experiment`] executes every cell with per-(cell, trial) derived
//! seeds and aggregates censoring-aware statistics. Summaries are
//! deterministic for a fixed master seed at any thread count: trial seeds
//! never depend on scheduling and aggregation is order-independent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{self, Graph, GraphError};
use crate::nodeset::NodeSet;
use crate::protocol::{
    run_trial, run_until_target, Completion, Mode, ProtocolConfig, ProtocolError,
};
use crate::seeds::derive_seed;
use crate::stats::{ks_two_sample, KsReport, StatsError};

const SALT_GRAPH: u64 = 1;
const SALT_TRIAL: u64 = 2;
const SALT_SOURCE: u64 = 3;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("fit refused: {0}")]
    FitRefused(String),
    #[error("symmetry test needs nonempty disjoint sets: {0}")]
    BadSets(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Complete,
    Er,
    DisjointCliques,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SourcePolicy {
    #[default]
    FixedZero,
    UniformRandom,
}

/// A sweep over instance and protocol parameters. Cells are the cartesian
/// product of `n`, `k`, and (for ER) exactly one of `phi` (edge probability
/// 3 phi / n) or `p` (explicit edge probability).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentPlan {
    pub family: Family,
    /// Edge-list path, only for `family = file`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_file: Option<String>,
    #[serde(default)]
    pub n: Vec<u32>,
    pub k: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phi: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p: Vec<f64>,
    pub mode: Mode,
    pub trials: u32,
    pub master_seed: u64,
    /// Per-trial round cap; derived from n when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_cap: Option<u32>,
    #[serde(default)]
    pub source: SourcePolicy,
}

impl ExperimentPlan {
    fn validate(&self) -> Result<(), ExperimentError> {
        let fail = |msg: &str| Err(ExperimentError::InvalidPlan(msg.to_string()));
        if self.trials == 0 {
            return fail("trials must be at least 1");
        }
        if self.k.is_empty() || self.k.contains(&0) {
            return fail("k sweep must be nonempty with k >= 1");
        }
        match self.family {
            Family::File => {
                if self.graph_file.is_none() {
                    return fail("family `file` needs graph_file");
                }
                if !self.n.is_empty() {
                    return fail("family `file` takes its node count from the file; leave n empty");
                }
            }
            _ => {
                if self.n.is_empty() {
                    return fail("n sweep must be nonempty");
                }
            }
        }
        match self.family {
            Family::Er => {
                if self.phi.is_empty() == self.p.is_empty() {
                    return fail("family `er` needs exactly one of phi or p");
                }
            }
            _ => {
                if !self.phi.is_empty() || !self.p.is_empty() {
                    return fail("phi/p sweeps apply only to family `er`");
                }
            }
        }
        Ok(())
    }
}

/// Censoring-aware per-cell statistics. Moments cover completed trials only;
/// order statistics treat censored trials as +infinity, rendered as absent
/// values.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CellSummary {
    pub family: Family,
    pub n: u32,
    pub k: u32,
    pub phi: Option<f64>,
    pub p: Option<f64>,
    pub trials: u32,
    pub completed: u32,
    pub censored: u32,
    pub mean: Option<f64>,
    pub std_err: Option<f64>,
    pub median: Option<u32>,
    pub q05: Option<u32>,
    pub q25: Option<u32>,
    pub q75: Option<u32>,
    pub q95: Option<u32>,
    pub max: Option<u32>,
    /// Closed-form reference value where one exists for the family:
    /// log n / log k on cliques (k >= 2), the expander model value for ER
    /// cells swept by phi.
    pub model_value: Option<f64>,
    pub ratio: Option<f64>,
    /// Instance-generation failure, when the cell could not run.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentSummary {
    pub schema: String,
    pub plan: ExperimentPlan,
    pub cells: Vec<CellSummary>,
}

impl ExperimentSummary {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    /// One CSV row per cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "family,n,k,phi,p,trials,mean,median,q05,q25,q75,q95,max,censored,model_value,ratio\n",
        );
        for c in &self.cells {
            let fam = match c.family {
                Family::Complete => "complete",
                Family::Er => "er",
                Family::DisjointCliques => "disjoint_cliques",
                Family::File => "file",
            };
            let opt_f = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
            let opt_q = |v: Option<u32>| v.map_or("inf".to_string(), |x| x.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                fam,
                c.n,
                c.k,
                opt_f(c.phi),
                opt_f(c.p),
                c.trials,
                opt_f(c.mean),
                opt_q(c.median),
                opt_q(c.q05),
                opt_q(c.q25),
                opt_q(c.q75),
                opt_q(c.q95),
                opt_q(c.max),
                c.censored,
                opt_f(c.model_value),
                opt_f(c.ratio),
            ));
        }
        out
    }
}

/// Order statistic at quantile q over the ascending extended values
/// (censored = u64::MAX), as the ceil(q T)-th smallest.
fn quantile(sorted: &[u64], q: f64) -> Option<u32> {
    let t = sorted.len();
    if t == 0 {
        return None;
    }
    let rank = ((q * t as f64).ceil() as usize).clamp(1, t);
    let v = sorted[rank - 1];
    (v != u64::MAX).then_some(v as u32)
}

/// Aggregates raw trial outcomes into the standard censoring-aware cell
/// summary. Attaches the family's closed-form model value where one exists.
pub fn summarize_outcomes(
    family: Family,
    n: u32,
    k: u32,
    phi: Option<f64>,
    p: Option<f64>,
    outcomes: &[Completion],
) -> CellSummary {
    let trials = outcomes.len() as u32;
    let mut extended: Vec<u64> = outcomes.iter().map(|c| c.as_extended()).collect();
    extended.sort_unstable();
    let completed_rounds: Vec<u64> = extended.iter().copied().filter(|&v| v != u64::MAX).collect();
    let completed = completed_rounds.len() as u32;
    let censored = trials - completed;

    let (mean, std_err) = if completed == 0 {
        (None, None)
    } else {
        let sum: u64 = completed_rounds.iter().sum();
        let mean = sum as f64 / completed as f64;
        let se = if completed >= 2 {
            let sumsq: u128 = completed_rounds.iter().map(|&v| (v as u128) * (v as u128)).sum();
            let c = completed as f64;
            let var = (sumsq as f64 - (sum as f64) * (sum as f64) / c) / (c - 1.0);
            Some((var.max(0.0) / c).sqrt())
        } else {
            None
        };
        (Some(mean), se)
    };

    let model_value = match family {
        Family::Complete if k >= 2 => Some((n as f64).ln() / (k as f64).ln()),
        Family::Er => phi
            .filter(|&phi| phi > 1.0 && k >= 2)
            .map(|phi| expander_model_value(n, phi, k)),
        _ => None,
    };
    let ratio = match (mean, model_value) {
        (Some(m), Some(mv)) if mv > 0.0 => Some(m / mv),
        _ => None,
    };

    CellSummary {
        family,
        n,
        k,
        phi,
        p,
        trials,
        completed,
        censored,
        mean,
        std_err,
        median: quantile(&extended, 0.50),
        q05: quantile(&extended, 0.05),
        q25: quantile(&extended, 0.25),
        q75: quantile(&extended, 0.75),
        q95: quantile(&extended, 0.95),
        max: quantile(&extended, 1.0),
        model_value,
        ratio,
        error: None,
    }
}

/// Model round count for a (phi, alpha)-expander at the ER-lemma edge
/// alpha = 1/(1+1.6 phi):
/// (log_phi n + 1/(phi (alpha - 1/(2+2 phi)))) log_k n.
pub fn expander_model_value(n: u32, phi: f64, k: u32) -> f64 {
    let alpha = er_lemma_alpha(phi);
    let ln_n = (n as f64).ln();
    let log_phi_n = ln_n / phi.ln();
    let log_k_n = ln_n / (k as f64).ln();
    let gap = alpha - 1.0 / (2.0 + 2.0 * phi);
    (log_phi_n + 1.0 / (phi * gap)) * log_k_n
}

/// Largest alpha the ER expander construction certifies: 1/(1+1.6 phi).
/// It exceeds the disconnection threshold 1/(2+2 phi) for every phi > 0, so
/// the model's gap term is positive by construction.
pub fn er_lemma_alpha(phi: f64) -> f64 {
    1.0 / (1.0 + 1.6 * phi)
}

/// Explicit phi lower bound under which the ER construction's expansion
/// guarantee is proved, with a = 1.6 and failure exponent c = 1:
/// max{50, 2/((1 - 1/(a(1-1/e)))^2 a(1-1/e))} (c+2) ln n.
/// The constants are not claimed tight; desk-scale sweeps run far below
/// this threshold and the reports say so rather than hiding it.
pub fn er_lemma_phi_threshold(n: u32) -> f64 {
    let q = 1.6 * (1.0 - (-1.0f64).exp());
    let c = 1.0;
    (2.0 / ((1.0 - 1.0 / q).powi(2) * q)).max(50.0) * (c + 2.0) * (n as f64).ln()
}

fn make_static_instance(family: Family, n: u32, plan: &ExperimentPlan) -> Result<Graph, GraphError> {
    match family {
        Family::Complete => graph::generate_complete(n),
        Family::DisjointCliques => graph::generate_disjoint_cliques(n),
        Family::File => {
            let path = plan.graph_file.as_ref().expect("validated");
            let file = std::fs::File::open(path)
                .map_err(|e| GraphError::Io(format!("{path}: {e}")))?;
            graph::load_edge_list(std::io::BufReader::new(file))
        }
        Family::Er => unreachable!("ER instances are per-trial"),
    }
}

/// Runs every cell of the plan. Per-trial seeds derive from
/// (master seed, cell index, trial index), so the summary is reproducible
/// bit-for-bit regardless of the rayon pool executing it.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentSummary, ExperimentError> {
    plan.validate()?;

    // File instances are shared across cells; load once.
    let file_graph = if plan.family == Family::File {
        Some(make_static_instance(Family::File, 0, plan)?)
    } else {
        None
    };
    let n_values: Vec<u32> = match &file_graph {
        Some(g) => vec![g.node_count()],
        None => plan.n.clone(),
    };

    // (phi, p) parameter axis; a single empty slot for non-ER families.
    let params: Vec<(Option<f64>, Option<f64>)> = if plan.family == Family::Er {
        if !plan.phi.is_empty() {
            plan.phi.iter().map(|&phi| (Some(phi), None)).collect()
        } else {
            plan.p.iter().map(|&p| (None, Some(p))).collect()
        }
    } else {
        vec![(None, None)]
    };

    let mut cells = Vec::new();
    let mut cell_index = 0u64;
    for &n in &n_values {
        for &k in &plan.k {
            for &(phi, p_explicit) in &params {
                let cell = run_cell(plan, file_graph.as_ref(), cell_index, n, k, phi, p_explicit);
                cells.push(cell);
                cell_index += 1;
            }
        }
    }

    Ok(ExperimentSummary {
        schema: "multigossip/experiment-summary/v1".to_string(),
        plan: plan.clone(),
        cells,
    })
}

fn run_cell(
    plan: &ExperimentPlan,
    file_graph: Option<&Graph>,
    cell_index: u64,
    n: u32,
    k: u32,
    phi: Option<f64>,
    p_explicit: Option<f64>,
) -> CellSummary {
    let round_cap = plan.round_cap.unwrap_or_else(|| ProtocolConfig::default_round_cap(n));
    let base_cfg = match ProtocolConfig::new(plan.mode, k, round_cap, 0) {
        Ok(c) => c,
        Err(e) => {
            let mut cell = summarize_outcomes(plan.family, n, k, phi, p_explicit, &[]);
            cell.trials = plan.trials;
            cell.error = Some(e.to_string());
            return cell;
        }
    };

    let er_p = match (phi, p_explicit) {
        (Some(phi), _) => Some(3.0 * phi / n as f64),
        (None, Some(p)) => Some(p),
        (None, None) => None,
    };
    if let Some(p) = er_p {
        if !(0.0..=1.0).contains(&p) {
            let mut cell = summarize_outcomes(plan.family, n, k, phi, p_explicit, &[]);
            cell.trials = plan.trials;
            cell.error = Some(format!("derived edge probability {p} outside [0, 1]"));
            return cell;
        }
    }

    // Static instance families build once per cell.
    let static_graph: Option<Graph> = match plan.family {
        Family::Complete | Family::DisjointCliques => {
            match make_static_instance(plan.family, n, plan) {
                Ok(g) => Some(g),
                Err(e) => {
                    let mut cell = summarize_outcomes(plan.family, n, k, phi, p_explicit, &[]);
                    cell.trials = plan.trials;
                    cell.error = Some(e.to_string());
                    return cell;
                }
            }
        }
        Family::File => None, // shared
        Family::Er => None,   // per trial
    };

    let master = plan.master_seed;
    let outcomes: Vec<Completion> = (0..plan.trials)
        .into_par_iter()
        .map(|trial| {
            let t = trial as u64;
            let er_instance;
            let g: &Graph = match plan.family {
                Family::Er => {
                    let seed = derive_seed(master, &[cell_index, t, SALT_GRAPH]);
                    er_instance = graph::generate_er(n, er_p.expect("er has p"), seed)
                        .expect("validated parameters");
                    &er_instance
                }
                Family::File => file_graph.expect("loaded"),
                _ => static_graph.as_ref().expect("built"),
            };
            let source = match plan.source {
                SourcePolicy::FixedZero => 0,
                SourcePolicy::UniformRandom => {
                    let seed = derive_seed(master, &[cell_index, t, SALT_SOURCE]);
                    ChaCha8Rng::seed_from_u64(seed).random_range(0..g.node_count())
                }
            };
            let cfg = base_cfg.with_seed(derive_seed(master, &[cell_index, t, SALT_TRIAL]));
            run_trial(g, source, &cfg)
                .expect("validated config and source")
                .completion
        })
        .collect();

    summarize_outcomes(plan.family, n, k, phi, p_explicit, &outcomes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Mean rounds against log n / log k (k varies).
    K,
    /// Mean rounds against log n (n varies at fixed k).
    N,
    /// Mean rounds against log n / log phi (phi varies).
    Phi,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// (regressor, mean, residual) per cell.
    pub points: Vec<(f64, f64, f64)>,
}

/// Least-squares fit of per-cell mean completion rounds against the model
/// regressor for the chosen axis. Censored cells poison means, so any
/// censoring refuses the fit.
pub fn fit_log_scaling(summary: &ExperimentSummary, axis: Axis) -> Result<FitReport, ExperimentError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for cell in &summary.cells {
        if let Some(err) = &cell.error {
            return Err(ExperimentError::FitRefused(format!(
                "cell (n={}, k={}) failed: {err}",
                cell.n, cell.k
            )));
        }
        if cell.censored > 0 {
            return Err(ExperimentError::FitRefused(format!(
                "cell (n={}, k={}) has {} censored trials",
                cell.n, cell.k, cell.censored
            )));
        }
        let mean = cell.mean.expect("no censoring implies completed trials");
        let ln_n = (cell.n as f64).ln();
        let x = match axis {
            Axis::K => {
                if cell.k < 2 {
                    return Err(ExperimentError::FitRefused(
                        "axis K needs k >= 2 in every cell".to_string(),
                    ));
                }
                ln_n / (cell.k as f64).ln()
            }
            Axis::N => ln_n,
            Axis::Phi => {
                let phi = cell.phi.filter(|&v| v > 1.0).ok_or_else(|| {
                    ExperimentError::FitRefused("axis Phi needs phi > 1 in every cell".to_string())
                })?;
                ln_n / phi.ln()
            }
        };
        xs.push(x);
        ys.push(mean);
    }
    if xs.len() < 3 {
        return Err(ExperimentError::FitRefused(format!(
            "need at least 3 cells along the axis, got {}",
            xs.len()
        )));
    }

    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(ExperimentError::FitRefused(
            "regressor is constant across cells".to_string(),
        ));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    let points: Vec<(f64, f64, f64)> = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| {
            let r = y - (slope * x + intercept);
            ss_res += r * r;
            ss_tot += (y - mean_y) * (y - mean_y);
            (x, y, r)
        })
        .collect();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(FitReport {
        slope,
        intercept,
        r_squared,
        points,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    pub ks: KsReport,
    pub trials: u32,
    pub forward_censored: u32,
    pub backward_censored: u32,
    /// CONSISTENT iff the KS statistic is below the critical value.
    pub consistent: bool,
}

/// Samples the hitting time S -> T and T -> S `trials` times each and
/// compares the two empirical distributions with a two-sample KS test at
/// significance `alpha`. Censored samples enter as +infinity.
pub fn symmetry_test(
    g: &Graph,
    s: &NodeSet,
    t: &NodeSet,
    cfg: &ProtocolConfig,
    trials: u32,
    alpha: f64,
) -> Result<SymmetryReport, ExperimentError> {
    if s.is_empty() || t.is_empty() {
        return Err(ExperimentError::BadSets("a set is empty".to_string()));
    }
    if !s.is_disjoint(t) {
        return Err(ExperimentError::BadSets("sets intersect".to_string()));
    }
    let sample = |from: &NodeSet, to: &NodeSet, dir: u64| -> Result<Vec<u64>, ExperimentError> {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let c = cfg.with_seed(derive_seed(cfg.seed, &[dir, i as u64]));
                Ok(run_until_target(g, from, to, &c)?.as_extended())
            })
            .collect()
    };
    let forward = sample(s, t, 0)?;
    let backward = sample(t, s, 1)?;
    let ks = ks_two_sample(&forward, &backward, alpha)?;
    let censored = |v: &[u64]| v.iter().filter(|&&x| x == u64::MAX).count() as u32;
    Ok(SymmetryReport {
        consistent: ks.consistent,
        trials,
        forward_censored: censored(&forward),
        backward_censored: censored(&backward),
        ks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingCell {
    pub n: u32,
    pub phi: f64,
    pub k: u32,
    pub p: f64,
    pub alpha: f64,
    pub trials: u32,
    pub censored: u32,
    pub mean: Option<f64>,
    pub std_err: Option<f64>,
    /// (log_phi n + 1/(phi (alpha - 1/(2+2 phi)))) log_k n.
    pub model_value: f64,
    /// log_phi n + log_k n.
    pub lower_bound_value: f64,
    pub ratio_model: Option<f64>,
    pub ratio_lower: Option<f64>,
    /// k > ln^3 n, the multi-call hypothesis of the expander bound.
    pub k_hypothesis_ok: bool,
    /// Proof threshold for phi (see [`er_lemma_phi_threshold`]); whether the
    /// swept phi clears it is reported, not required.
    pub phi_lemma_threshold: f64,
    pub phi_meets_lemma_bound: bool,
    /// Set when an instance stayed disconnected after the resample budget.
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub schema: String,
    pub master_seed: u64,
    pub cells: Vec<ScalingCell>,
}

impl ScalingReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "n,phi,k,p,alpha,trials,censored,mean,model_value,lower_bound_value,ratio_model,ratio_lower,k_hypothesis_ok,phi_lemma_threshold,phi_meets_lemma_bound,flagged\n",
        );
        for c in &self.cells {
            let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                c.n,
                c.phi,
                c.k,
                c.p,
                c.alpha,
                c.trials,
                c.censored,
                opt(c.mean),
                c.model_value,
                c.lower_bound_value,
                opt(c.ratio_model),
                opt(c.ratio_lower),
                c.k_hypothesis_ok,
                c.phi_lemma_threshold,
                c.phi_meets_lemma_bound,
                c.flagged,
            ));
        }
        out
    }
}

/// Sweeps G(n, 3 phi / n) instances under PUSH&PULL and reports measured
/// means against the expander model value and the lower-bound value.
/// Disconnected instances are resampled up to 3 times, then the cell is
/// flagged and the trial runs censored on the last instance.
pub fn expander_scaling_experiment(
    ns: &[u32],
    phis: &[f64],
    ks: &[u32],
    trials: u32,
    master_seed: u64,
) -> Result<ScalingReport, ExperimentError> {
    if ns.is_empty() || phis.is_empty() || ks.is_empty() || trials == 0 {
        return Err(ExperimentError::InvalidPlan(
            "scaling sweep needs nonempty n, phi, k and trials >= 1".to_string(),
        ));
    }
    let mut cells = Vec::new();
    let mut cell_index = 0u64;
    for &n in ns {
        for &phi in phis {
            for &k in ks {
                if k == 0 || phi <= 1.0 {
                    return Err(ExperimentError::InvalidPlan(
                        "scaling sweep needs k >= 1 and phi > 1".to_string(),
                    ));
                }
                let p = 3.0 * phi / n as f64;
                if p > 1.0 {
                    return Err(ExperimentError::InvalidPlan(format!(
                        "p = 3 phi / n = {p} exceeds 1 for n = {n}, phi = {phi}"
                    )));
                }
                let cap = ProtocolConfig::default_round_cap(n);
                let cfg = ProtocolConfig::new(Mode::PushPull, k, cap, 0)?;
                let results: Vec<(Completion, bool)> = (0..trials)
                    .into_par_iter()
                    .map(|trial| {
                        let t = trial as u64;
                        let mut flagged = true;
                        let mut instance = None;
                        for attempt in 0..3u64 {
                            let seed = derive_seed(master_seed, &[cell_index, t, SALT_GRAPH, attempt]);
                            let g = graph::generate_er(n, p, seed).expect("validated p");
                            let connected = g.is_connected();
                            instance = Some(g);
                            if connected {
                                flagged = false;
                                break;
                            }
                        }
                        let g = instance.expect("at least one attempt");
                        let cfg = cfg.with_seed(derive_seed(master_seed, &[cell_index, t, SALT_TRIAL]));
                        let completion = run_trial(&g, 0, &cfg).expect("valid").completion;
                        (completion, flagged)
                    })
                    .collect();

                let outcomes: Vec<Completion> = results.iter().map(|(c, _)| *c).collect();
                let flagged = results.iter().any(|&(_, f)| f);
                let base = summarize_outcomes(Family::Er, n, k, Some(phi), None, &outcomes);
                let ln_n = (n as f64).ln();
                let model_value = expander_model_value(n, phi, k);
                let lower_bound_value = ln_n / phi.ln() + ln_n / (k as f64).ln();
                let phi_lemma_threshold = er_lemma_phi_threshold(n);
                cells.push(ScalingCell {
                    n,
                    phi,
                    k,
                    p,
                    alpha: er_lemma_alpha(phi),
                    trials,
                    censored: base.censored,
                    mean: base.mean,
                    std_err: base.std_err,
                    model_value,
                    lower_bound_value,
                    ratio_model: base.mean.map(|m| m / model_value),
                    ratio_lower: base.mean.map(|m| m / lower_bound_value),
                    k_hypothesis_ok: (k as f64) > ln_n.powi(3),
                    phi_lemma_threshold,
                    phi_meets_lemma_bound: phi >= phi_lemma_threshold,
                    flagged,
                });
                cell_index += 1;
            }
        }
    }
    Ok(ScalingReport {
        schema: "multigossip/scaling-report/v1".to_string(),
        master_seed,
        cells,
    })
}
