//! End-to-end solves on small instances: MIP optima against the brute-force
//! oracle, warm starts, lazy cut behaviour, and determinism.

mod common;

use fsmvrp::checker::{brute_force_optimum, decode_solution, validate_solution};
use fsmvrp::formulations::{build_model, BuildOptions, ModelKind};
use fsmvrp::instance::load_instance;
use fsmvrp::solver::{separate_subtours, solve_mip, MipStatus, SolveParams};
use fsmvrp::strengthen::StrengthenConfig;
use fsmvrp::warmstart::{construct_initial, encode_start, improve_iters};

fn base_options() -> BuildOptions {
    BuildOptions { strengthen: StrengthenConfig::none(), stable_slack: 0 }
}

fn quick_params() -> SolveParams {
    SolveParams { time_limit_s: 120.0, ..SolveParams::default() }
}

#[test]
fn all_four_kinds_match_the_oracle_on_one_instance() {
    let inst = common::suite_instance(0);
    let fleet = fsmvrp::formulations::make_fleet(&inst, fsmvrp::formulations::FleetKind::Stable, 0).unwrap();
    let (oracle_value, oracle_sol) = brute_force_optimum(&inst, &fleet).unwrap();
    assert!(validate_solution(&inst, &fleet, &oracle_sol).pass());

    for kind in ModelKind::all() {
        let built = build_model(&inst, kind, &base_options()).unwrap();
        let result = solve_mip(&built, &quick_params(), None).unwrap();
        assert_eq!(result.status, MipStatus::Optimal, "{kind} did not solve");
        let value = result.objective.unwrap();
        let rel = (value - oracle_value).abs() / oracle_value.abs().max(1e-9);
        assert!(rel < 1e-6, "{kind}: mip {value} vs oracle {oracle_value}");

        // decoded solutions are valid and cost what the MIP claims
        let sol = decode_solution(&built, &result.incumbent.as_ref().unwrap().values).unwrap();
        let report = validate_solution(&built.instance, &built.fleet, &sol);
        assert!(report.pass(), "{kind}: {}", report.summary());
        assert!((report.objective - value).abs() < 1e-6);
    }
}

#[test]
fn lp_relaxation_bounds_the_integer_optimum() {
    let inst = common::suite_instance(1);
    let fleet = fsmvrp::formulations::make_fleet(&inst, fsmvrp::formulations::FleetKind::Stable, 0).unwrap();
    let (oracle_value, _) = brute_force_optimum(&inst, &fleet).unwrap();
    let built = build_model(&inst, ModelKind::SC, &base_options()).unwrap();
    let lp = fsmvrp::solver::solve_lp(&built.model).unwrap();
    assert_eq!(lp.status, fsmvrp::solver::LpStatus::Optimal);
    assert!(lp.objective <= oracle_value + 1e-7, "relaxation {} above optimum {}", lp.objective, oracle_value);
}

#[test]
fn warm_start_is_respected_and_never_worsened() {
    let inst = common::suite_instance(2);
    for kind in ModelKind::all() {
        let built = build_model(&inst, kind, &base_options()).unwrap();
        let sol0 = construct_initial(&built.instance, &built.fleet, 3).unwrap();
        let sol = improve_iters(&built.instance, &built.fleet, &sol0, 40, 3);
        let warm = encode_start(&built, &sol).unwrap();
        let warm_obj = built.model.objective_value(&warm);
        assert!((warm_obj - sol.objective).abs() < 1e-9, "objective identity");

        let result = solve_mip(&built, &quick_params(), Some(&warm)).unwrap();
        assert_eq!(result.status, MipStatus::Optimal);
        assert!(result.objective.unwrap() <= warm_obj + 1e-9, "{kind}: incumbent worse than warm start");
        let first = result.first_incumbent_value.unwrap();
        assert!((first - warm_obj).abs() < 1e-9, "root incumbent should equal the warm start");
    }
}

#[test]
fn invalid_warm_start_reports_the_offending_row() {
    let inst = common::suite_instance(2);
    let built = build_model(&inst, ModelKind::SC, &base_options()).unwrap();
    let sol = construct_initial(&built.instance, &built.fleet, 0).unwrap();
    let mut warm = encode_start(&built, &sol).unwrap();
    // corrupt one delivery variable
    let y = built
        .model
        .variables()
        .iter()
        .position(|v| v.name.starts_with("y[") && warm.values[built.model.variables().iter().position(|w| std::ptr::eq(v, w)).unwrap()] > 0.0);
    let y = y.expect("some positive delivery");
    warm.values[y] = 0.0;
    let err = solve_mip(&built, &quick_params(), Some(&warm)).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("demand") || msg.contains("flow_balance"), "unexpected: {msg}");
}

#[test]
fn two_cluster_instance_triggers_lazy_subtour_cuts() {
    // two tight pairs far apart; vehicle-flow LP splits into depot-free cycles
    let doc = r#"{
        "depot": {"x": 0.0, "y": 0.0},
        "customers": [
            {"id": 1, "x": 30.0, "y": 0.5, "demand": {"ambient": 10}},
            {"id": 2, "x": 30.5, "y": 0.0, "demand": {"ambient": 10}},
            {"id": 3, "x": -30.0, "y": -0.5, "demand": {"ambient": 10}},
            {"id": 4, "x": -30.5, "y": 0.0, "demand": {"ambient": 10}}
        ],
        "commodities": ["ambient"],
        "fleet": {"mode": "stable", "counts": [2]},
        "vehicle_types": [{"id": "t", "capacity": 20, "cost_per_km": 1.0, "compatible": ["ambient"]}]
    }"#;
    let inst: fsmvrp::Instance = load_instance(doc).unwrap();
    let built = build_model(&inst, ModelKind::SV, &base_options()).unwrap();
    let result = solve_mip(&built, &quick_params(), None).unwrap();
    assert_eq!(result.status, MipStatus::Optimal);
    assert!(result.subtour_cuts >= 1, "expected at least one lazy cut");

    // the returned solution holds no depot-free cycle
    let values = &result.incumbent.as_ref().unwrap().values;
    let subtours = separate_subtours(&built.catalog, values).unwrap();
    assert!(subtours.is_empty());
}

#[test]
fn solver_is_deterministic_for_fixed_inputs() {
    let inst = common::suite_instance(3);
    let built = build_model(&inst, ModelKind::SV, &base_options()).unwrap();
    let a = solve_mip(&built, &quick_params(), None).unwrap();
    let b = solve_mip(&built, &quick_params(), None).unwrap();
    assert_eq!(a.nodes, b.nodes);
    assert_eq!(a.subtour_cuts, b.subtour_cuts);
    assert_eq!(a.objective.unwrap(), b.objective.unwrap());
    let seq_a: Vec<(u64, f64)> = a
        .events
        .iter()
        .filter(|e| e.kind == fsmvrp::solver::EventKind::Incumbent)
        .map(|e| (e.node, e.value))
        .collect();
    let seq_b: Vec<(u64, f64)> = b
        .events
        .iter()
        .filter(|e| e.kind == fsmvrp::solver::EventKind::Incumbent)
        .map(|e| (e.node, e.value))
        .collect();
    assert_eq!(seq_a, seq_b, "incumbent sequence must be identical");
}

#[test]
fn infeasible_by_construction_is_reported_eagerly() {
    let doc = r#"{
        "depot": {"x": 0.0, "y": 0.0},
        "customers": [{"id": 1, "x": 1.0, "y": 0.0, "demand": {"ambient": 100}}],
        "commodities": ["ambient"],
        "fleet": {"mode": "stable", "counts": [2]},
        "vehicle_types": [{"id": "t", "capacity": 10, "cost_per_km": 1.0, "compatible": ["ambient"]}]
    }"#;
    let inst: fsmvrp::Instance = load_instance(doc).unwrap();
    let err = build_model(&inst, ModelKind::SC, &base_options()).unwrap_err();
    assert!(err.to_string().contains("capacity"), "got: {err}");
}
