//! Distributional properties of the round engine that hold in expectation:
//! push&pull dominates either mechanism alone, and more calls never slow the
//! clique down. Tested at two standard errors, one-sided.

use multigossip::experiments::{run_experiment, ExperimentPlan, Family, SourcePolicy};
use multigossip::protocol::Mode;

fn clique_plan(mode: Mode, k: u32, trials: u32) -> ExperimentPlan {
    ExperimentPlan {
        family: Family::Complete,
        graph_file: None,
        n: vec![64],
        k: vec![k],
        phi: vec![],
        p: vec![],
        mode,
        trials,
        master_seed: 20_240_601,
        round_cap: None,
        source: SourcePolicy::FixedZero,
    }
}

fn mean_se(mode: Mode, k: u32, trials: u32) -> (f64, f64) {
    let summary = run_experiment(&clique_plan(mode, k, trials)).unwrap();
    let cell = &summary.cells[0];
    assert_eq!(cell.censored, 0, "clique trials must complete");
    (cell.mean.unwrap(), cell.std_err.unwrap())
}

/// one-sided check: a <= b within 2 combined standard errors
fn le_within_2se(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.0 + 2.0 * (a.1 * a.1 + b.1 * b.1).sqrt()
}

#[test]
fn push_pull_dominates_each_mechanism() {
    let trials = 10_000;
    let both = mean_se(Mode::PushPull, 2, trials);
    let push = mean_se(Mode::Push, 2, trials);
    let pull = mean_se(Mode::Pull, 2, trials);
    assert!(
        le_within_2se(both, push),
        "push&pull {both:?} vs push {push:?}"
    );
    assert!(
        le_within_2se(both, pull),
        "push&pull {both:?} vs pull {pull:?}"
    );
}

#[test]
fn more_calls_never_slow_the_clique() {
    let trials = 10_000;
    let means: Vec<(f64, f64)> = [1u32, 2, 4]
        .iter()
        .map(|&k| mean_se(Mode::PushPull, k, trials))
        .collect();
    for pair in means.windows(2) {
        assert!(
            le_within_2se(pair[1], pair[0]),
            "k-monotonicity violated: {pair:?}"
        );
    }
}
