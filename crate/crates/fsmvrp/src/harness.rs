//! Experiment runner: benchmark tables over (instance, variant) cells, the
//! warm-start budget sweep, and CSV/markdown report emission.

use std::fmt::Write as _;
use std::time::Instant;

use thiserror::Error;

use crate::formulations::{build_model, BuildError, BuildOptions, ModelKind, RoutingKind};
use crate::instance::Instance;
use crate::scalar::Scalar;
use crate::solver::{compute_gap, root_gap, solve_lp, solve_mip, MipStatus, SimplexError, SolveError, SolveParams};
use crate::warmstart::{construct_initial, encode_start, lns_improve, EncodeError, HeuristicError};

/// One model variant to benchmark: a kind plus its strengthening options.
#[derive(Debug, Clone)]
pub struct VariantSpec {
    pub label: String,
    pub kind: ModelKind,
    pub options: BuildOptions,
}

impl VariantSpec {
    pub fn new(kind: ModelKind, options: BuildOptions) -> Self {
        VariantSpec { label: kind.code().to_string(), kind, options }
    }
}

#[derive(Debug, Clone)]
pub struct BenchParams {
    pub solve: SolveParams,
    /// Report deterministic work-based "times" instead of wall clock, so
    /// repeated runs emit byte-identical reports.
    pub logical_clock: bool,
    /// Heuristic seconds before each solve; None disables warm starts.
    pub warmstart_budget_s: Option<f64>,
    pub seed: u64,
}

impl Default for BenchParams {
    fn default() -> Self {
        BenchParams { solve: SolveParams::default(), logical_clock: false, warmstart_budget_s: None, seed: 0 }
    }
}

/// A solved or timed-out cell: exactly one of time (solved) or gap (timeout).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Time(f64),
    Gap(f64),
    Fail,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Time(t) => format!("{t:.2}"),
            Cell::Gap(g) => format!("({:.2}%)", g * 100.0),
            Cell::Fail => "-".into(),
        }
    }

    /// Times rank above gaps; within a class smaller is better.
    pub fn rank_key(&self) -> (u8, f64) {
        match self {
            Cell::Time(t) => (0, *t),
            Cell::Gap(g) => (1, *g),
            Cell::Fail => (2, f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VariantOutcome {
    pub label: String,
    pub cell: Cell,
    pub value: Option<f64>,
    /// Lazy subtour rows added; only vehicle-flow variants separate any.
    pub subtour_cuts: usize,
    pub vehicle_flow: bool,
    pub root_time_s: f64,
    pub root_gap: Option<f64>,
    pub first_time_s: Option<f64>,
    pub first_gap: Option<f64>,
    pub nodes: u64,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance_id: String,
    pub best_value: Option<f64>,
    pub variants: Vec<VariantOutcome>,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("no rows to report")]
    EmptyReport,
    #[error("no instances or variants")]
    EmptyBenchmark,
    #[error("unknown variant {0:?}")]
    UnknownVariant(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Heuristic(#[from] HeuristicError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}

fn logical_seconds(lp_iterations: u64, nodes: u64) -> f64 {
    // fixed nominal rate: 10^5 simplex iterations or 10^3 nodes per "second"
    lp_iterations as f64 * 1e-5 + nodes as f64 * 1e-3
}

/// Run every (instance, variant) cell under a shared time limit. The
/// best-value column is the row-wise minimum across variants.
pub fn run_benchmark<S: Scalar>(
    instances: &[(String, Instance<S>)],
    variants: &[VariantSpec],
    params: &BenchParams,
) -> Result<Vec<BenchRow>, HarnessError> {
    if instances.is_empty() || variants.is_empty() {
        return Err(HarnessError::EmptyBenchmark);
    }
    let mut rows = Vec::with_capacity(instances.len());
    for (id, inst) in instances {
        let mut outcomes = Vec::with_capacity(variants.len());
        for spec in variants {
            let built = build_model(inst, spec.kind, &spec.options)?;
            let warm = match params.warmstart_budget_s {
                Some(budget) => {
                    let sol0 = construct_initial(&built.instance, &built.fleet, params.seed)?;
                    let sol = lns_improve(&built.instance, &built.fleet, &sol0, budget - sol0.construction_s, params.seed);
                    Some(encode_start(&built, &sol)?)
                }
                None => None,
            };
            let result = solve_mip(&built, &params.solve, warm.as_ref())?;
            let time = if params.logical_clock {
                logical_seconds(result.lp_iterations, result.nodes)
            } else {
                result.wall_s
            };
            let cell = match result.status {
                MipStatus::Optimal => Cell::Time(time),
                MipStatus::Feasible => Cell::Gap(result.gap.to_f64().unwrap()),
                _ => Cell::Fail,
            };
            outcomes.push(VariantOutcome {
                label: spec.label.clone(),
                cell,
                value: result.objective.map(|v| v.to_f64().unwrap()),
                subtour_cuts: result.subtour_cuts,
                vehicle_flow: spec.kind.routing == RoutingKind::Vehicle,
                root_time_s: if params.logical_clock {
                    logical_seconds(result.root_lp_iterations, 0)
                } else {
                    result.root_lp_s
                },
                root_gap: result.root_lp_value.map(|b| b.to_f64().unwrap()),
                first_time_s: if params.logical_clock {
                    result.first_incumbent_node.map(|n| logical_seconds(0, n))
                } else {
                    result.first_incumbent_s
                },
                first_gap: result.first_incumbent_value.map(|v| v.to_f64().unwrap()),
                nodes: result.nodes,
            });
        }
        let best_value = outcomes
            .iter()
            .filter_map(|o| o.value)
            .fold(None::<f64>, |acc, v| Some(acc.map_or(v, |a| a.min(v))));
        // convert stored raw bounds/values into gaps vs the row best
        if let Some(best) = best_value {
            for o in &mut outcomes {
                o.root_gap = o.root_gap.map(|bound| root_gap(best, bound));
                o.first_gap = o.first_gap.map(|first| compute_gap(first, best).max(0.0));
            }
        }
        rows.push(BenchRow { instance_id: id.clone(), best_value, variants: outcomes });
    }
    Ok(rows)
}

/// Mean gap over timeout cells per variant (the table-footer semantics:
/// instances not solved to optimality).
pub fn average_gaps(rows: &[BenchRow]) -> Vec<(String, Option<f64>)> {
    if rows.is_empty() {
        return Vec::new();
    }
    let n_variants = rows[0].variants.len();
    (0..n_variants)
        .map(|c| {
            let label = rows[0].variants[c].label.clone();
            let gaps: Vec<f64> = rows
                .iter()
                .filter_map(|r| match r.variants[c].cell {
                    Cell::Gap(g) => Some(g),
                    _ => None,
                })
                .collect();
            let avg = if gaps.is_empty() {
                None
            } else {
                Some(gaps.iter().sum::<f64>() / gaps.len() as f64)
            };
            (label, avg)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

/// Stable-column-order report. Markdown marks the row-best cell in bold
/// (times rank above gaps).
pub fn write_report(rows: &[BenchRow], format: ReportFormat) -> Result<String, HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    let labels: Vec<String> = rows[0].variants.iter().map(|v| v.label.clone()).collect();
    let subtour_labels: Vec<String> = rows[0]
        .variants
        .iter()
        .filter(|v| v.vehicle_flow)
        .map(|v| v.label.clone())
        .collect();

    let best_index = |row: &BenchRow| -> Option<usize> {
        row.variants
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.cell.rank_key().partial_cmp(&b.cell.rank_key()).unwrap())
            .map(|(i, _)| i)
    };

    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str("instance,value");
            for l in &labels {
                let _ = write!(out, ",{l}");
            }
            for l in &subtour_labels {
                let _ = write!(out, ",subtours_{l}");
            }
            for l in &labels {
                let _ = write!(out, ",root_time_{l},root_gap_{l}");
            }
            for l in &labels {
                let _ = write!(out, ",first_time_{l},first_gap_{l}");
            }
            out.push('\n');
            for row in rows {
                let _ = write!(
                    out,
                    "{},{}",
                    row.instance_id,
                    row.best_value.map_or("-".into(), |v| format!("{v:.2}"))
                );
                for o in &row.variants {
                    let _ = write!(out, ",{}", o.cell.render());
                }
                for o in row.variants.iter().filter(|o| o.vehicle_flow) {
                    let _ = write!(out, ",{}", o.subtour_cuts);
                }
                for o in &row.variants {
                    let _ = write!(
                        out,
                        ",{:.2},{}",
                        o.root_time_s,
                        o.root_gap.map_or("-".into(), |g| format!("{:.2}", g * 100.0))
                    );
                }
                for o in &row.variants {
                    let _ = write!(
                        out,
                        ",{},{}",
                        o.first_time_s.map_or("-".into(), |t| format!("{t:.2}")),
                        o.first_gap.map_or("-".into(), |g| format!("{:.2}", g * 100.0))
                    );
                }
                out.push('\n');
            }
            out.push_str("avg_gap,");
            for (_, avg) in average_gaps(rows) {
                out.push(',');
                let _ = write!(out, "{}", avg.map_or("-".into(), |g| format!("{:.2}%", g * 100.0)));
            }
            out.push('\n');
        }
        ReportFormat::Markdown => {
            let _ = write!(out, "| instance | value |");
            for l in &labels {
                let _ = write!(out, " {l} |");
            }
            for l in &subtour_labels {
                let _ = write!(out, " subtours {l} |");
            }
            out.push('\n');
            let _ = write!(out, "|---|---|");
            for _ in labels.iter().chain(subtour_labels.iter()) {
                out.push_str("---|");
            }
            out.push('\n');
            for row in rows {
                let best = best_index(row);
                let _ = write!(
                    out,
                    "| {} | {} |",
                    row.instance_id,
                    row.best_value.map_or("-".into(), |v| format!("{v:.2}"))
                );
                for (i, o) in row.variants.iter().enumerate() {
                    if Some(i) == best {
                        let _ = write!(out, " **{}** |", o.cell.render());
                    } else {
                        let _ = write!(out, " {} |", o.cell.render());
                    }
                }
                for o in row.variants.iter().filter(|o| o.vehicle_flow) {
                    let _ = write!(out, " {} |", o.subtour_cuts);
                }
                out.push('\n');
            }
            let _ = write!(out, "| avg gap | |");
            for (_, avg) in average_gaps(rows) {
                let _ = write!(out, " {} |", avg.map_or("-".into(), |g| format!("{:.2}%", g * 100.0)));
            }
            out.push('\n');
        }
    }
    Ok(out)
}

/// One point of the warm-start budget sweep.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub budget_s: f64,
    pub heuristic_s: f64,
    pub mip_s: f64,
    pub value: Option<f64>,
    pub gap: f64,
    pub solved: bool,
}

/// For each budget b: run the heuristic for b seconds (b = 0 keeps the first
/// constructed solution), then the MIP for total − b seconds warm-started
/// from it. The degenerate b = total point reports the warm-start value
/// against the root bound.
pub fn sweep_warmstart_budget<S: Scalar>(
    inst: &Instance<S>,
    variant: &VariantSpec,
    budgets: &[f64],
    total_s: f64,
    seed: u64,
) -> Result<Vec<SweepPoint>, HarnessError> {
    let built = build_model(inst, variant.kind, &variant.options)?;
    let mut points = Vec::with_capacity(budgets.len());
    for &budget in budgets {
        let t0 = Instant::now();
        let sol0 = construct_initial(&built.instance, &built.fleet, seed)?;
        let sol = if budget > 0.0 {
            lns_improve(&built.instance, &built.fleet, &sol0, budget - t0.elapsed().as_secs_f64(), seed)
        } else {
            sol0
        };
        let heuristic_s = t0.elapsed().as_secs_f64();
        let warm = encode_start(&built, &sol)?;
        let mip_budget = total_s - budget;
        if mip_budget > 0.0 {
            let params = SolveParams { time_limit_s: mip_budget, ..SolveParams::default() };
            let t1 = Instant::now();
            let result = solve_mip(&built, &params, Some(&warm))?;
            points.push(SweepPoint {
                budget_s: budget,
                heuristic_s,
                mip_s: t1.elapsed().as_secs_f64(),
                value: result.objective.map(|v| v.to_f64().unwrap()),
                gap: result.gap.to_f64().unwrap(),
                solved: result.status == MipStatus::Optimal,
            });
        } else {
            // no MIP time left: gap of the heuristic value against the root bound
            let t1 = Instant::now();
            let root = solve_lp(&built.model)?;
            let bound = root.objective.to_f64().unwrap();
            let value = sol.objective.to_f64().unwrap();
            points.push(SweepPoint {
                budget_s: budget,
                heuristic_s,
                mip_s: t1.elapsed().as_secs_f64(),
                value: Some(value),
                gap: compute_gap(value, bound),
                solved: false,
            });
        }
    }
    Ok(points)
}

pub fn write_sweep_csv(points: &[SweepPoint]) -> Result<String, HarnessError> {
    if points.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    let mut out = String::from("budget_s,heuristic_s,mip_s,value,gap,solved\n");
    for p in points {
        let _ = writeln!(
            out,
            "{:.2},{:.2},{:.2},{},{:.4},{}",
            p.budget_s,
            p.heuristic_s,
            p.mip_s,
            p.value.map_or("-".into(), |v| format!("{v:.2}")),
            p.gap * 100.0,
            p.solved
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fake_row(cells: Vec<Cell>) -> BenchRow {
        BenchRow {
            instance_id: "1".into(),
            best_value: Some(31358.95),
            variants: cells
                .into_iter()
                .enumerate()
                .map(|(i, cell)| VariantOutcome {
                    label: ["sc", "sv", "fc", "ff"][i].into(),
                    cell,
                    value: Some(31358.95),
                    subtour_cuts: if i % 2 == 1 { 216 } else { 0 },
                    vehicle_flow: i % 2 == 1,
                    root_time_s: 0.44,
                    root_gap: Some(0.0661),
                    first_time_s: Some(0.15),
                    first_gap: Some(0.5616),
                    nodes: 10,
                })
                .collect(),
        }
    }

    #[test]
    fn csv_row_formats_value_and_time_with_two_decimals() {
        let rows = vec![fake_row(vec![
            Cell::Time(15.19),
            Cell::Time(26.02),
            Cell::Time(32.63),
            Cell::Time(33.81),
        ])];
        let csv = write_report(&rows, ReportFormat::Csv).unwrap();
        let line = csv.lines().nth(1).unwrap();
        assert!(line.starts_with("1,31358.95,15.19,26.02,32.63,33.81,216,"), "line: {line}");
    }

    #[test]
    fn timeout_cells_render_as_percent_gaps() {
        let rows = vec![fake_row(vec![
            Cell::Time(723.32),
            Cell::Time(758.51),
            Cell::Gap(0.0020),
            Cell::Gap(0.0113),
        ])];
        let csv = write_report(&rows, ReportFormat::Csv).unwrap();
        assert!(csv.contains("(0.20%)"));
        assert!(csv.contains("(1.13%)"));
    }

    #[test]
    fn empty_report_is_an_error() {
        assert!(matches!(write_report(&[], ReportFormat::Csv), Err(HarnessError::EmptyReport)));
    }

    #[test]
    fn markdown_marks_best_cell_by_time_before_gap() {
        let rows = vec![fake_row(vec![
            Cell::Gap(0.001),
            Cell::Time(800.0),
            Cell::Time(25.0),
            Cell::Gap(0.9),
        ])];
        let md = write_report(&rows, ReportFormat::Markdown).unwrap();
        assert!(md.contains("**25.00**"), "md: {md}");

        // independent argmin: times (order-0) beat gaps (order-1)
        let cells = [Cell::Gap(0.001), Cell::Time(800.0), Cell::Time(25.0), Cell::Gap(0.9)];
        let best = cells
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.rank_key().partial_cmp(&b.rank_key()).unwrap())
            .unwrap()
            .0;
        assert_eq!(best, 2);
    }

    #[test]
    fn average_gap_only_counts_timeout_cells() {
        let rows = vec![
            fake_row(vec![Cell::Time(1.0), Cell::Gap(0.02), Cell::Time(2.0), Cell::Gap(0.04)]),
            fake_row(vec![Cell::Time(1.0), Cell::Gap(0.04), Cell::Time(3.0), Cell::Time(9.0)]),
        ];
        let avgs = average_gaps(&rows);
        assert_eq!(avgs[0].1, None);
        assert!((avgs[1].1.unwrap() - 0.03).abs() < 1e-12);
        assert_eq!(avgs[2].1, None);
        assert!((avgs[3].1.unwrap() - 0.04).abs() < 1e-12);
    }
}
