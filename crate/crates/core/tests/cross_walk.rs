use std::f64::consts::PI;

use proptest::prelude::*;
use walksearch::analytics::{self, Cell, WalkKind};
use walksearch::{
    model, qw_continuous, qw_discrete, rw_continuous, rw_discrete, CompleteGraph, VertexReadout,
};

fn graph(n: usize, marked: usize) -> CompleteGraph {
    CompleteGraph::new(n, marked).unwrap()
}

#[test]
fn gap_bounds_random_walk_difference_at_large_n() {
    let n = 10_000;
    let bound = analytics::delta_max(n).unwrap().delta_max;
    for k in 0..=400 {
        let t = k as f64 * n as f64 / 40.0;
        let d = rw_discrete::success_closed_form(n, t).unwrap();
        let c = rw_continuous::success_closed_form(n, t).unwrap();
        assert!((d - c).abs() <= bound + 1e-15, "t={t}");
    }
}

#[test]
fn gap_equals_difference_of_success_curves() {
    for n in [3, 10, 57] {
        for k in 0..50 {
            let t = k as f64 * 0.7;
            let diff = rw_discrete::success_closed_form(n, t).unwrap()
                - rw_continuous::success_closed_form(n, t).unwrap();
            let scale = (n as f64 - 1.0) / n as f64;
            assert!((diff - scale * analytics::delta(n, t).unwrap()).abs() < 1e-14);
        }
    }
}

#[test]
fn continuous_quantum_walk_beats_coined_asymptotically() {
    // the continuous walk peaks at 1, the coined walk at one half
    let n = 4096;
    let (coined, continuous) =
        analytics::quantum_asymptotic_comparison(n, qw_continuous::runtime(n).unwrap()).unwrap();
    assert!((continuous - 1.0).abs() < 1e-12);
    assert!(coined < 0.5);
    let t = qw_discrete::asymptotic_steps(n);
    let (coined, _) = analytics::quantum_asymptotic_comparison(n, t).unwrap();
    assert!((coined - 0.5).abs() < 1e-12);
}

#[test]
fn coined_asymptote_tracks_exact_evolution() {
    let n = 2500;
    for t in [10u64, 20, 40] {
        let exact = qw_discrete::success_closed_form(n, t).unwrap();
        let (approx, _) = analytics::quantum_asymptotic_comparison(n, t as f64).unwrap();
        assert!(
            (exact - approx).abs() < 0.05,
            "t={t} exact={exact} approx={approx}"
        );
    }
}

#[test]
fn table_cells_come_from_walk_modules() {
    let t = analytics::summary_table(64, 0.01).unwrap();
    let number = |w: WalkKind, f: fn(&analytics::WalkColumn) -> &Cell| {
        f(t.column(w).unwrap()).as_number().unwrap()
    };
    assert_eq!(
        number(WalkKind::RwDiscrete, |c| &c.runtime),
        rw_discrete::runtime_for_epsilon(64, 0.01).unwrap()
    );
    assert_eq!(
        number(WalkKind::RwContinuous, |c| &c.asymptotic_runtime),
        rw_continuous::asymptotic_runtime(64, 0.01).unwrap()
    );
    assert_eq!(number(WalkKind::QwContinuous, |c| &c.runtime), 4.0 * PI);
    assert_eq!(
        number(WalkKind::QwDiscrete, |c| &c.asymptotic_probability),
        0.5
    );
    let plan = qw_discrete::repetition_plan(64, 0.01).unwrap();
    assert_eq!(plan.runs, 7);
    assert_eq!(
        number(WalkKind::QwDiscrete, |c| c
            .amplified_probability
            .as_ref()
            .unwrap()),
        1.0 - 0.01
    );
}

#[test]
fn sampling_is_reproducible_and_follows_the_distribution() {
    let g = graph(4, 2);
    let state = qw_discrete::state_at(&g, 2).unwrap();
    let first: Vec<usize> = (0..200)
        .map(|s| model::sample_vertex(&state, s).unwrap())
        .collect();
    let again: Vec<usize> = (0..200)
        .map(|s| model::sample_vertex(&state, s).unwrap())
        .collect();
    assert_eq!(first, again);
    let hits = first.iter().filter(|&&v| v == 2).count() as f64 / first.len() as f64;
    // marked probability 25/36 after two steps
    assert!((hits - 25.0 / 36.0).abs() < 0.12, "hits={hits}");
    let absorbed = rw_discrete::distribution_at(&g, 10_000).unwrap();
    assert_eq!(model::sample_vertex(&absorbed, 7).unwrap(), 2);
}

#[test]
fn every_state_type_reports_normalized_vertex_probabilities() {
    let g = graph(6, 4);
    let states: Vec<Box<dyn VertexReadout>> = vec![
        Box::new(rw_discrete::distribution_at(&g, 7).unwrap()),
        Box::new(rw_continuous::distribution_at(&g, 3.3).unwrap()),
        Box::new(qw_discrete::state_at(&g, 5).unwrap()),
        Box::new(qw_continuous::state_at(&g, 1.0 / 6.0, 2.2).unwrap()),
    ];
    for s in &states {
        let total: f64 = s.vertex_probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }
}

#[test]
fn non_critical_gamma_degrades_the_peak() {
    let n = 64;
    let g = graph(n, 1);
    let peak = |gamma: f64| {
        qw_continuous::evolve_full(&g, gamma, 3.0 * PI * (n as f64).sqrt(), 0.2)
            .unwrap()
            .successes()
            .into_iter()
            .fold(0.0, f64::max)
    };
    let critical = peak(1.0 / n as f64);
    assert!(critical > 0.999);
    for gamma in [0.5 / n as f64, 2.0 / n as f64] {
        assert!(peak(gamma) < 0.9, "gamma={gamma}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeling_the_marked_vertex_is_invisible(n in 3usize..9, a in 1usize..9, steps in 0u64..25) {
        let a = 1 + (a - 1) % n;
        let reference = qw_discrete::evolve_full(&graph(n, 1), steps).unwrap().successes();
        let other = qw_discrete::evolve_full(&graph(n, a), steps).unwrap().successes();
        for (x, y) in reference.iter().zip(&other) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        let reference = rw_discrete::evolve_full(&graph(n, 1), steps).unwrap().successes();
        let other = rw_discrete::evolve_full(&graph(n, a), steps).unwrap().successes();
        for (x, y) in reference.iter().zip(&other) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn random_walk_success_is_monotone(n in 2usize..40, t in 0.0f64..200.0) {
        let d0 = rw_discrete::success_closed_form(n, t).unwrap();
        let d1 = rw_discrete::success_closed_form(n, t + 1.0).unwrap();
        prop_assert!(d1 >= d0 - 1e-15 && d1 <= 1.0);
        let c0 = rw_continuous::success_closed_form(n, t).unwrap();
        let c1 = rw_continuous::success_closed_form(n, t + 0.5).unwrap();
        prop_assert!(c1 >= c0 - 1e-15 && c1 <= 1.0);
    }
}
