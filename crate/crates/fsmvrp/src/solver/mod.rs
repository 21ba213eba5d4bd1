//! Exact MIP solving: LP relaxations via the in-crate simplex, best-bound
//! branch-and-bound with priority-guided most-fractional branching and
//! depth-first plunging, lazy subtour elimination, and warm starts.

pub mod simplex;

use std::collections::{BTreeSet, BinaryHeap};
use std::time::Instant;

use thiserror::Error;

use crate::formulations::{BuiltModel, FleetKind, VariableCatalog};
use crate::instance::DEPOT;
use crate::mip::{Assignment, Sense, VarId, VarKind};
use crate::scalar::Scalar;
pub use simplex::{solve_lp, LpResult, LpStatus, Simplex, SimplexError};

pub const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct SolveParams {
    pub time_limit_s: f64,
    pub rel_gap_target: f64,
    /// Carried into logs; the search itself is deterministic.
    pub seed: u64,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams { time_limit_s: 900.0, rel_gap_target: 1e-6, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MipStatus {
    Optimal,
    /// Time limit hit with an incumbent in hand.
    Feasible,
    Infeasible,
    Unbounded,
    /// Time limit hit before any incumbent; feasibility undetermined.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Incumbent,
    Bound,
}

#[derive(Debug, Clone)]
pub struct SolveEvent<S> {
    pub wall_s: f64,
    pub node: u64,
    pub kind: EventKind,
    pub value: S,
}

#[derive(Debug, Clone)]
pub struct MipResult<S> {
    pub status: MipStatus,
    pub incumbent: Option<Assignment<S>>,
    pub objective: Option<S>,
    pub bound: S,
    pub gap: S,
    pub nodes: u64,
    pub subtour_cuts: usize,
    pub wall_s: f64,
    pub root_lp_s: f64,
    pub root_lp_value: Option<S>,
    pub root_lp_iterations: u64,
    pub first_incumbent_s: Option<f64>,
    pub first_incumbent_value: Option<S>,
    pub first_incumbent_node: Option<u64>,
    pub lp_iterations: u64,
    pub events: Vec<SolveEvent<S>>,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("warm start violates rows: {0:?}")]
    InvalidWarmStart(Vec<String>),
    #[error("warm start assigns non-integral value to binary {0}")]
    FractionalWarmStart(String),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error("assignment has non-integral arc values")]
    NonIntegralArcs,
}

/// Relative optimality gap: (incumbent − bound) / max(|incumbent|, ε).
pub fn compute_gap<S: Scalar>(incumbent: S, bound: S) -> S {
    let eps = S::from_f64_lossy(1e-9);
    (incumbent - bound) / incumbent.abs().max(eps)
}

/// Root-relaxation gap in the bound-denominator form that allows values above
/// 100%: (best_known − bound) / max(|bound|, ε).
pub fn root_gap<S: Scalar>(best_known: S, bound: S) -> S {
    let eps = S::from_f64_lossy(1e-9);
    (best_known - bound) / bound.abs().max(eps)
}

/// Connected components of each vehicle's used-arc graph that avoid the
/// depot. `values` must be integral on the arc variables.
pub fn separate_subtours<S: Scalar>(
    catalog: &VariableCatalog,
    values: &[S],
) -> Result<Vec<(usize, BTreeSet<usize>)>, SolveError> {
    let tol = S::from_f64_lossy(INT_TOL);
    let half = S::from_f64_lossy(0.5);
    let mut out = Vec::new();
    for v in 0..catalog.n_vehicles {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); catalog.n_locs];
        let mut touched = vec![false; catalog.n_locs];
        for i in 0..catalog.n_locs {
            for j in 0..catalog.n_locs {
                if i == j {
                    continue;
                }
                let mut used = false;
                for id in arc_ids(catalog, v, i, j) {
                    let x = values[id.0];
                    if (x - x.round()).abs() > tol {
                        return Err(SolveError::NonIntegralArcs);
                    }
                    if x > half {
                        used = true;
                    }
                }
                if used {
                    adj[i].push(j);
                    adj[j].push(i);
                    touched[i] = true;
                    touched[j] = true;
                }
            }
        }
        let mut seen = vec![false; catalog.n_locs];
        for start in 0..catalog.n_locs {
            if !touched[start] || seen[start] {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(node) = stack.pop() {
                comp.insert(node);
                for &next in &adj[node] {
                    if !seen[next] {
                        seen[next] = true;
                        stack.push(next);
                    }
                }
            }
            if !comp.contains(&DEPOT) {
                out.push((v, comp));
            }
        }
    }
    Ok(out)
}

fn arc_ids(catalog: &VariableCatalog, v: usize, i: usize, j: usize) -> Vec<VarId> {
    if catalog.is_stable() {
        catalog.x(v, i, j).into_iter().collect()
    } else {
        (0..catalog.n_types).filter_map(|t| catalog.x_t(v, t, i, j)).collect()
    }
}

struct HeapNode<S> {
    bound: S,
    id: u64,
    node: Node,
}

struct Node {
    id: u64,
    bound: f64,
    /// (column, lower, upper) overrides relative to the root bounds.
    overrides: Vec<(usize, f64, f64)>,
}

impl<S: Scalar> PartialEq for HeapNode<S> {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl<S: Scalar> Eq for HeapNode<S> {}
impl<S: Scalar> PartialOrd for HeapNode<S> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<S: Scalar> Ord for HeapNode<S> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // BinaryHeap is a max-heap; invert so the smallest bound pops first,
        // ties by oldest node id
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(other.id.cmp(&self.id))
    }
}

/// Branch-and-bound over the frozen model with lazy subtour elimination.
pub fn solve_mip<S: Scalar>(
    built: &BuiltModel<S>,
    params: &SolveParams,
    warm: Option<&Assignment<S>>,
) -> Result<MipResult<S>, SolveError> {
    let t0 = Instant::now();
    let model = &built.model;
    let int_tol = S::from_f64_lossy(INT_TOL);
    let has_lazy = !model.lazy_hooks().is_empty();

    let mut incumbent: Option<Assignment<S>> = None;
    let mut incumbent_obj = S::infinity();
    let mut events: Vec<SolveEvent<S>> = Vec::new();
    let mut first_incumbent: Option<(f64, S, u64)> = None;

    if let Some(w) = warm {
        validate_warm(built, w)?;
        incumbent_obj = model.objective_value(w);
        incumbent = Some(w.clone());
        events.push(SolveEvent { wall_s: 0.0, node: 0, kind: EventKind::Incumbent, value: incumbent_obj });
        first_incumbent = Some((0.0, incumbent_obj, 0));
    }

    let mut tab = Simplex::from_model(model);
    let root_bounds: Vec<(S, S)> = (0..model.n_variables()).map(|c| tab.column_bounds(c)).collect();

    // root relaxation, before any lazy cut
    let root_t = Instant::now();
    let root_status = tab.solve()?;
    let root_lp_s = root_t.elapsed().as_secs_f64();
    let root_lp_iterations = tab.iterations;
    let root_lp_value = match root_status {
        LpStatus::Optimal => Some(tab.objective()),
        LpStatus::Infeasible => {
            return Ok(MipResult {
                status: MipStatus::Infeasible,
                incumbent: None,
                objective: None,
                bound: S::infinity(),
                gap: S::zero(),
                nodes: 0,
                subtour_cuts: 0,
                wall_s: t0.elapsed().as_secs_f64(),
                root_lp_s,
                root_lp_value: None,
                root_lp_iterations: tab.iterations,
                first_incumbent_s: None,
                first_incumbent_value: None,
                first_incumbent_node: None,
                lp_iterations: tab.iterations,
                events,
            });
        }
        LpStatus::Unbounded => {
            return Ok(MipResult {
                status: MipStatus::Unbounded,
                incumbent: None,
                objective: None,
                bound: S::neg_infinity(),
                gap: S::zero(),
                nodes: 0,
                subtour_cuts: 0,
                wall_s: t0.elapsed().as_secs_f64(),
                root_lp_s,
                root_lp_value: None,
                root_lp_iterations: tab.iterations,
                first_incumbent_s: None,
                first_incumbent_value: None,
                first_incumbent_node: None,
                lp_iterations: tab.iterations,
                events,
            });
        }
    };

    let binaries: Vec<usize> = model
        .variables()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == VarKind::Binary)
        .map(|(i, _)| i)
        .collect();

    let mut heap: BinaryHeap<HeapNode<S>> = BinaryHeap::new();
    let mut plunge: Vec<Node> = Vec::new();
    let mut next_id: u64 = 1;
    let mut nodes_processed: u64 = 0;
    let mut subtour_cuts = 0usize;
    let mut reported_bound = S::neg_infinity();
    let mut applied: Vec<usize> = Vec::new();

    plunge.push(Node { id: 0, bound: root_lp_value.unwrap().to_f64().unwrap(), overrides: Vec::new() });

    let mut timed_out = false;
    'search: while let Some(node) = plunge.pop().or_else(|| heap.pop().map(|h| h.node)) {
        if t0.elapsed().as_secs_f64() > params.time_limit_s {
            // push the node back so the final bound accounts for it
            heap.push(HeapNode { bound: S::from_f64_lossy(node.bound), id: node.id, node });
            timed_out = true;
            break;
        }
        // bound-based prune against the incumbent
        let cutoff = prune_cutoff(incumbent_obj, params.rel_gap_target);
        if S::from_f64_lossy(node.bound) >= cutoff {
            continue;
        }

        // swap in this node's bounds
        for &col in &applied {
            let (lo, hi) = root_bounds[col];
            tab.set_column_bounds(col, lo, hi);
        }
        applied.clear();
        for &(col, lo, hi) in &node.overrides {
            tab.set_column_bounds(col, S::from_f64_lossy(lo), S::from_f64_lossy(hi));
            applied.push(col);
        }

        nodes_processed += 1;

        // solve, separating lazy cuts until the LP point is clean
        let mut node_bound;
        loop {
            let status = tab.solve()?;
            match status {
                LpStatus::Infeasible => continue 'search,
                LpStatus::Unbounded => continue 'search,
                LpStatus::Optimal => {}
            }
            node_bound = tab.objective();
            if node_bound >= cutoff {
                continue 'search;
            }
            let values = tab.structural_values();
            let fractional = most_fractional(model, &binaries, &values, int_tol);
            if let Some((col, frac)) = fractional {
                // branch
                let parent_bound = node_bound.to_f64().unwrap();
                let mut down = node.overrides.clone();
                down.push((col, 0.0, 0.0));
                let mut up = node.overrides.clone();
                up.push((col, 1.0, 1.0));
                let down_node = Node { id: next_id, bound: parent_bound, overrides: down };
                next_id += 1;
                let up_node = Node { id: next_id, bound: parent_bound, overrides: up };
                next_id += 1;
                // plunge towards the rounding of the fractional value
                if frac >= 0.5 {
                    plunge.push(up_node);
                    heap.push(HeapNode { bound: S::from_f64_lossy(parent_bound), id: down_node.id, node: down_node });
                } else {
                    plunge.push(down_node);
                    heap.push(HeapNode { bound: S::from_f64_lossy(parent_bound), id: up_node.id, node: up_node });
                }
                break;
            }

            // integral point: lazy separation first
            if has_lazy {
                let subtours = separate_subtours(&built.catalog, &values)?;
                if !subtours.is_empty() {
                    subtour_cuts += add_subtour_cuts(built, &mut tab, &subtours);
                    continue; // re-solve the same node with the new rows
                }
            }

            // accepted incumbent
            if node_bound < incumbent_obj - S::from_f64_lossy(1e-9) {
                let snapped = snap_assignment(model, &values, &binaries);
                incumbent_obj = model.objective_value(&snapped);
                incumbent = Some(snapped);
                let wall = t0.elapsed().as_secs_f64();
                events.push(SolveEvent { wall_s: wall, node: nodes_processed, kind: EventKind::Incumbent, value: incumbent_obj });
                if first_incumbent.is_none() {
                    first_incumbent = Some((wall, incumbent_obj, nodes_processed));
                }
            }
            break;
        }

        // report bound progress
        let open_min = open_bound_min(&heap, &plunge);
        let global = match open_min {
            Some(b) => b.min(incumbent_obj),
            None => incumbent_obj,
        };
        if global > reported_bound {
            reported_bound = global;
            if global.is_finite() {
                events.push(SolveEvent {
                    wall_s: t0.elapsed().as_secs_f64(),
                    node: nodes_processed,
                    kind: EventKind::Bound,
                    value: global,
                });
            }
        }
    }

    let open_min = open_bound_min(&heap, &plunge);
    let bound = match (timed_out, open_min, incumbent.is_some()) {
        (false, _, true) => incumbent_obj,
        (false, _, false) => S::infinity(), // exhausted without incumbent
        (true, Some(b), _) => b.min(incumbent_obj).max(reported_bound),
        (true, None, _) => incumbent_obj,
    };

    let status = match (&incumbent, timed_out) {
        (Some(_), false) => MipStatus::Optimal,
        (Some(_), true) => MipStatus::Feasible,
        (None, false) => MipStatus::Infeasible,
        (None, true) => MipStatus::Unknown,
    };

    let gap = match &incumbent {
        Some(_) if status == MipStatus::Optimal => S::zero(),
        Some(_) => compute_gap(incumbent_obj, bound),
        None => S::zero(),
    };

    Ok(MipResult {
        status,
        objective: incumbent.as_ref().map(|_| incumbent_obj),
        incumbent,
        bound,
        gap,
        nodes: nodes_processed,
        subtour_cuts,
        wall_s: t0.elapsed().as_secs_f64(),
        root_lp_s,
        root_lp_value,
        root_lp_iterations,
        first_incumbent_s: first_incumbent.map(|(t, _, _)| t),
        first_incumbent_value: first_incumbent.map(|(_, v, _)| v),
        first_incumbent_node: first_incumbent.map(|(_, _, n)| n),
        lp_iterations: tab.iterations,
        events,
    })
}

fn prune_cutoff<S: Scalar>(incumbent_obj: S, rel_gap: f64) -> S {
    if incumbent_obj.is_finite() {
        incumbent_obj - (incumbent_obj.abs() * S::from_f64_lossy(rel_gap)).max(S::from_f64_lossy(1e-9))
    } else {
        S::infinity()
    }
}

fn open_bound_min<S: Scalar>(heap: &BinaryHeap<HeapNode<S>>, plunge: &[Node]) -> Option<S> {
    let heap_min = heap.peek().map(|h| h.bound);
    let plunge_min = plunge
        .iter()
        .map(|n| n.bound)
        .fold(None::<f64>, |acc, b| Some(acc.map_or(b, |a| a.min(b))))
        .map(S::from_f64_lossy);
    match (heap_min, plunge_min) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// Highest-priority class with a fractional variable, then most fractional,
/// ties by lowest id. Returns (column, fractional part).
fn most_fractional<S: Scalar>(
    model: &crate::mip::Model<S>,
    binaries: &[usize],
    values: &[S],
    int_tol: S,
) -> Option<(usize, f64)> {
    let mut best: Option<(i32, S, usize, f64)> = None; // (priority, fracness, col, frac)
    for &col in binaries {
        let v = values[col];
        let frac = v - v.floor();
        let fracness = frac.min(S::one() - frac);
        if fracness <= int_tol {
            continue;
        }
        let prio = model.variable(VarId(col)).priority;
        let better = match best {
            None => true,
            Some((bp, bf, bc, _)) => prio > bp || (prio == bp && (fracness > bf || (fracness == bf && col < bc))),
        };
        if better {
            best = Some((prio, fracness, col, frac.to_f64().unwrap()));
        }
    }
    best.map(|(_, _, col, frac)| (col, frac))
}

fn snap_assignment<S: Scalar>(
    model: &crate::mip::Model<S>,
    values: &[S],
    binaries: &[usize],
) -> Assignment<S> {
    let mut a = Assignment { values: values.to_vec() };
    for &col in binaries {
        a.values[col] = a.values[col].round();
    }
    for (col, v) in model.variables().iter().enumerate() {
        a.values[col] = a.values[col].max(v.lower).min(v.upper);
    }
    a
}

fn add_subtour_cuts<S: Scalar>(
    built: &BuiltModel<S>,
    tab: &mut Simplex<S>,
    subtours: &[(usize, BTreeSet<usize>)],
) -> usize {
    let cat = &built.catalog;
    let mut added = 0;
    for (v, comp) in subtours {
        let rhs = S::from_usize(comp.len() - 1).unwrap();
        match built.kind.fleet {
            FleetKind::Stable => {
                let mut row: Vec<(usize, S)> = Vec::new();
                for &i in comp {
                    for &j in comp {
                        if i != j {
                            row.push((cat.x(*v, i, j).unwrap().0, S::one()));
                        }
                    }
                }
                tab.push_row(row, Sense::Le, rhs);
                added += 1;
            }
            FleetKind::Flexible => {
                for t in 0..cat.n_types {
                    let mut row: Vec<(usize, S)> = Vec::new();
                    for &i in comp {
                        for &j in comp {
                            if i != j {
                                row.push((cat.x_t(*v, t, i, j).unwrap().0, S::one()));
                            }
                        }
                    }
                    tab.push_row(row, Sense::Le, rhs);
                    added += 1;
                }
            }
        }
    }
    added
}

fn validate_warm<S: Scalar>(built: &BuiltModel<S>, warm: &Assignment<S>) -> Result<(), SolveError> {
    let model = &built.model;
    assert_eq!(warm.values.len(), model.n_variables(), "warm start must cover every variable");
    let tol = S::from_f64_lossy(INT_TOL);
    for (col, var) in model.variables().iter().enumerate() {
        let v = warm.values[col];
        if v < var.lower - tol || v > var.upper + tol {
            return Err(SolveError::InvalidWarmStart(vec![format!("bounds:{}", var.name)]));
        }
        if var.kind == VarKind::Binary && (v - v.round()).abs() > tol {
            return Err(SolveError::FractionalWarmStart(var.name.clone()));
        }
    }
    let violated = model.violated_rows(warm, S::from_f64_lossy(1e-6));
    if !violated.is_empty() {
        return Err(SolveError::InvalidWarmStart(violated));
    }
    Ok(())
}
