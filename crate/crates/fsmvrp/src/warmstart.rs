//! Constructive heuristic plus Large Neighbourhood Search producing feasible
//! routing solutions, and the encoder that turns them into MIP starting
//! assignments.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formulations::{BuiltModel, FleetKind};
use crate::instance::{Fleet, Instance, DEPOT};
use crate::mip::Assignment;
use crate::quantity::Qty;
use crate::scalar::Scalar;

/// Solver-independent answer format: one depot-anchored cycle per vehicle
/// (possibly empty) plus exact delivery quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingSolution<S> {
    /// Full cycles `[0, c1, .., cm, 0]`; empty vector = unused vehicle.
    pub routes: Vec<Vec<usize>>,
    /// Per vehicle: (customer location, commodity) -> quantity.
    pub deliveries: Vec<BTreeMap<(usize, usize), Qty>>,
    /// Type index per vehicle (fixed by the fleet in stable mode, chosen by
    /// the heuristic in flexible mode).
    pub vehicle_types: Vec<usize>,
    pub objective: S,
    pub construction_s: f64,
}

impl<S: Scalar> RoutingSolution<S> {
    pub fn n_vehicles(&self) -> usize {
        self.routes.len()
    }

    pub fn used_vehicles(&self) -> usize {
        self.routes.iter().filter(|r| !r.is_empty()).count()
    }

    pub fn customers_of_route(&self, v: usize) -> &[usize] {
        let r = &self.routes[v];
        if r.is_empty() {
            &[]
        } else {
            &r[1..r.len() - 1]
        }
    }

    pub fn delivered_total(&self, v: usize) -> Qty {
        self.deliveries[v].values().copied().sum()
    }

    /// Route cost under the given per-vehicle cost rates.
    pub fn recompute_objective(&mut self, inst: &Instance<S>) {
        let mut total = S::zero();
        for (v, route) in self.routes.iter().enumerate() {
            let cost = inst.vehicle_types[self.vehicle_types[v]].cost_per_km;
            for w in route.windows(2) {
                total = total + cost * inst.dist(w[0], w[1]);
            }
        }
        self.objective = total;
    }
}

#[derive(Debug, Error)]
pub enum HeuristicError {
    #[error("capacity shortfall for commodity {commodity}: {missing} units cannot be placed")]
    CapacityShortfall { commodity: String, missing: i64 },
    #[error("solution has {got} vehicles, fleet has {expected}")]
    FleetMismatch { got: usize, expected: usize },
}

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("solution does not fit the built fleet: {0}")]
    Heuristic(#[from] HeuristicError),
    #[error("encoded start violates rows after canonical permutation: {0:?}")]
    Unsatisfiable(Vec<String>),
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct DeliveryDoc {
    customer: usize,
    commodity: String,
    qty: i64,
}

#[derive(Debug, Serialize, Deserialize)]
struct VehicleSolutionDoc {
    route: Vec<usize>,
    #[serde(rename = "type")]
    vehicle_type: String,
    deliveries: Vec<DeliveryDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SolutionDoc {
    objective: f64,
    vehicles: Vec<VehicleSolutionDoc>,
}

pub fn save_solution<S: Scalar>(inst: &Instance<S>, sol: &RoutingSolution<S>) -> String {
    let doc = SolutionDoc {
        objective: sol.objective.to_f64().unwrap(),
        vehicles: (0..sol.n_vehicles())
            .map(|v| VehicleSolutionDoc {
                route: sol.routes[v].clone(),
                vehicle_type: inst.vehicle_types[sol.vehicle_types[v]].name.clone(),
                deliveries: sol.deliveries[v]
                    .iter()
                    .map(|(&(i, k), &q)| DeliveryDoc {
                        customer: i,
                        commodity: inst.commodities[k].clone(),
                        qty: q.units(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("solution serialization")
}

pub fn load_solution<S: Scalar>(inst: &Instance<S>, text: &str) -> Result<RoutingSolution<S>, String> {
    let doc: SolutionDoc = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let mut routes = Vec::new();
    let mut deliveries = Vec::new();
    let mut vehicle_types = Vec::new();
    for vdoc in doc.vehicles {
        let t = inst
            .vehicle_types
            .iter()
            .position(|ty| ty.name == vdoc.vehicle_type)
            .ok_or_else(|| format!("unknown vehicle type {:?}", vdoc.vehicle_type))?;
        let mut dmap = BTreeMap::new();
        for d in vdoc.deliveries {
            let k = inst
                .commodities
                .iter()
                .position(|c| *c == d.commodity)
                .ok_or_else(|| format!("unknown commodity {:?}", d.commodity))?;
            dmap.insert((d.customer, k), Qty(d.qty));
        }
        routes.push(vdoc.route);
        deliveries.push(dmap);
        vehicle_types.push(t);
    }
    let mut sol = RoutingSolution {
        routes,
        deliveries,
        vehicle_types,
        objective: S::zero(),
        construction_s: 0.0,
    };
    sol.recompute_objective(inst);
    Ok(sol)
}

// ---------------------------------------------------------------------------
// Greedy construction
// ---------------------------------------------------------------------------

struct VehicleState<S> {
    route: Vec<usize>, // customers only, in visit order
    type_idx: Option<usize>,
    remaining: Qty,
    cost_per_km: S,
    compatible: Vec<bool>,
}

/// Cheapest insertion position for customer `i` in `route`; returns
/// (extra distance, position). Position p inserts between p-1 and p.
fn cheapest_insertion<S: Scalar>(inst: &Instance<S>, route: &[usize], i: usize) -> (S, usize) {
    if route.contains(&i) {
        return (S::zero(), usize::MAX); // already visited, no new arc
    }
    let mut best = (S::infinity(), 0);
    let stops: Vec<usize> = std::iter::once(DEPOT)
        .chain(route.iter().copied())
        .chain(std::iter::once(DEPOT))
        .collect();
    for p in 0..stops.len() - 1 {
        let (a, b) = (stops[p], stops[p + 1]);
        let delta = inst.dist(a, i) + inst.dist(i, b) - inst.dist(a, b);
        if delta < best.0 {
            best = (delta, p);
        }
    }
    best
}

/// Greedy cheapest-insertion construction with splitting. Restricted
/// commodities are placed first so their dedicated capacity is not consumed
/// by commodities that could ride anywhere.
pub fn construct_initial<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    seed: u64,
) -> Result<RoutingSolution<S>, HeuristicError> {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut vehicles: Vec<VehicleState<S>> = match fleet {
        Fleet::Stable { vehicles, .. } => vehicles
            .iter()
            .map(|v| VehicleState {
                route: Vec::new(),
                type_idx: Some(v.type_idx),
                remaining: v.capacity,
                cost_per_km: v.cost_per_km,
                compatible: v.compatible.clone(),
            })
            .collect(),
        Fleet::Flexible { count } => (0..*count)
            .map(|_| VehicleState {
                route: Vec::new(),
                type_idx: None,
                remaining: Qty::ZERO,
                cost_per_km: S::zero(),
                compatible: Vec::new(),
            })
            .collect(),
    };

    let chunks = demand_chunks(inst, &BTreeMap::new());
    let mut deliveries: Vec<BTreeMap<(usize, usize), Qty>> = vec![BTreeMap::new(); vehicles.len()];
    for (i, k, qty) in chunks {
        place_chunk(inst, &mut vehicles, &mut deliveries, &mut rng, i, k, qty)?;
    }

    Ok(finish_solution(inst, fleet, vehicles, deliveries, t0.elapsed().as_secs_f64()))
}

/// (customer, commodity, residual) triples ordered most-restricted commodity
/// first, then customers by decreasing total demand. `already` holds amounts
/// served elsewhere (used by LNS repair).
fn demand_chunks<S: Scalar>(
    inst: &Instance<S>,
    already: &BTreeMap<(usize, usize), Qty>,
) -> Vec<(usize, usize, Qty)> {
    let restriction: Vec<usize> = (0..inst.n_commodities())
        .map(|k| inst.vehicle_types.iter().filter(|t| t.compatible[k]).count())
        .collect();
    let mut custs: Vec<usize> = (1..inst.n_locations()).collect();
    custs.sort_by(|&a, &b| {
        inst.customer_total_demand(b)
            .cmp(&inst.customer_total_demand(a))
            .then(a.cmp(&b))
    });
    let mut comms: Vec<usize> = (0..inst.n_commodities()).collect();
    comms.sort_by_key(|&k| (restriction[k], k));

    let mut out = Vec::new();
    for &k in &comms {
        for &i in &custs {
            let rest = inst.demand(i, k) - already.get(&(i, k)).copied().unwrap_or(Qty::ZERO);
            if rest.is_positive() {
                out.push((i, k, rest));
            }
        }
    }
    out
}

fn place_chunk<S: Scalar>(
    inst: &Instance<S>,
    vehicles: &mut [VehicleState<S>],
    deliveries: &mut [BTreeMap<(usize, usize), Qty>],
    rng: &mut ChaCha8Rng,
    i: usize,
    k: usize,
    qty: Qty,
) -> Result<(), HeuristicError> {
    let tie = S::from_f64_lossy(1e-12);
    let mut residual = qty;
    while residual.is_positive() {
        // candidate (vehicle, type for untyped, insertion cost, position)
        let mut best: Option<(S, usize, Option<usize>, usize)> = None;
        for (v, state) in vehicles.iter().enumerate() {
            match state.type_idx {
                Some(_) => {
                    if !state.compatible.get(k).copied().unwrap_or(false) || !state.remaining.is_positive() {
                        continue;
                    }
                    let (delta, pos) = cheapest_insertion(inst, &state.route, i);
                    let cost = delta * state.cost_per_km;
                    let replace = match best {
                        None => true,
                        Some((bc, ..)) => cost < bc - tie || (cost < bc + tie && rng.gen_bool(0.5)),
                    };
                    if replace {
                        best = Some((cost, v, None, pos));
                    }
                }
                None => {
                    // untyped flexible vehicle: try every compatible type
                    for (t, ty) in inst.vehicle_types.iter().enumerate() {
                        if !ty.compatible[k] || !ty.capacity.is_positive() {
                            continue;
                        }
                        let cost = (inst.dist(DEPOT, i) + inst.dist(i, DEPOT)) * ty.cost_per_km;
                        let replace = match best {
                            None => true,
                            Some((bc, ..)) => cost < bc - tie || (cost < bc + tie && rng.gen_bool(0.5)),
                        };
                        if replace {
                            best = Some((cost, v, Some(t), 0));
                        }
                    }
                }
            }
        }
        let Some((_, v, new_type, pos)) = best else {
            return Err(HeuristicError::CapacityShortfall {
                commodity: inst.commodities[k].clone(),
                missing: residual.units(),
            });
        };
        let state = &mut vehicles[v];
        if let Some(t) = new_type {
            let ty = &inst.vehicle_types[t];
            state.type_idx = Some(t);
            state.remaining = ty.capacity;
            state.cost_per_km = ty.cost_per_km;
            state.compatible = ty.compatible.clone();
        }
        if !state.route.contains(&i) {
            let p = if pos == usize::MAX { state.route.len() } else { pos };
            state.route.insert(p.min(state.route.len()), i);
        }
        let amount = residual.min(state.remaining);
        state.remaining -= amount;
        residual -= amount;
        *deliveries[v].entry((i, k)).or_insert(Qty::ZERO) += amount;
    }
    Ok(())
}

fn finish_solution<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    vehicles: Vec<VehicleState<S>>,
    deliveries: Vec<BTreeMap<(usize, usize), Qty>>,
    construction_s: f64,
) -> RoutingSolution<S> {
    let default_type = inst.vehicle_types.len() - 1;
    let mut routes = Vec::with_capacity(vehicles.len());
    let mut types = Vec::with_capacity(vehicles.len());
    for (v, state) in vehicles.into_iter().enumerate() {
        if state.route.is_empty() {
            routes.push(Vec::new());
        } else {
            let mut full = Vec::with_capacity(state.route.len() + 2);
            full.push(DEPOT);
            full.extend(&state.route);
            full.push(DEPOT);
            routes.push(full);
        }
        let t = match fleet {
            Fleet::Stable { vehicles, .. } => vehicles[v].type_idx,
            Fleet::Flexible { .. } => state.type_idx.unwrap_or(default_type),
        };
        types.push(t);
    }
    let mut sol = RoutingSolution {
        routes,
        deliveries,
        vehicle_types: types,
        objective: S::zero(),
        construction_s,
    };
    sol.recompute_objective(inst);
    sol
}

// ---------------------------------------------------------------------------
// Large neighbourhood search
// ---------------------------------------------------------------------------

/// Deterministic LNS core: `iters` destroy/repair rounds accepting strict
/// improvements only.
pub fn improve_iters<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    start: &RoutingSolution<S>,
    iters: u64,
    seed: u64,
) -> RoutingSolution<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = start.clone();
    for _ in 0..iters {
        if let Some(candidate) = destroy_repair(inst, fleet, &best, &mut rng) {
            if candidate.objective < best.objective - S::from_f64_lossy(1e-9) {
                best = candidate;
            }
        }
    }
    best
}

/// Wall-clock wrapper around [`improve_iters`]; budget 0 returns the input
/// unchanged (protocol: "use the first feasible solution").
pub fn lns_improve<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    start: &RoutingSolution<S>,
    budget_s: f64,
    seed: u64,
) -> RoutingSolution<S> {
    if budget_s <= 0.0 {
        return start.clone();
    }
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = start.clone();
    while t0.elapsed().as_secs_f64() < budget_s {
        for _ in 0..16 {
            if let Some(candidate) = destroy_repair(inst, fleet, &best, &mut rng) {
                if candidate.objective < best.objective - S::from_f64_lossy(1e-9) {
                    best = candidate;
                }
            }
        }
    }
    best
}

/// One destroy + repair round; None when the rebuilt solution is infeasible
/// (rejected).
fn destroy_repair<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    current: &RoutingSolution<S>,
    rng: &mut ChaCha8Rng,
) -> Option<RoutingSolution<S>> {
    // visits = (vehicle, customer) pairs with deliveries
    let mut visits: Vec<(usize, usize)> = Vec::new();
    for v in 0..current.n_vehicles() {
        for &i in current.customers_of_route(v) {
            visits.push((v, i));
        }
    }
    if visits.is_empty() {
        return None;
    }

    let q = 1 + rng.gen_range(0..visits.len().div_ceil(3).max(1));
    let removed: Vec<(usize, usize)> = match rng.gen_range(0..3u8) {
        0 => {
            // random removal
            let mut pool = visits.clone();
            let mut out = Vec::new();
            for _ in 0..q.min(pool.len()) {
                let idx = rng.gen_range(0..pool.len());
                out.push(pool.swap_remove(idx));
            }
            out
        }
        1 => {
            // worst-cost removal: largest detour savings first
            let mut scored: Vec<((usize, usize), S)> = visits
                .iter()
                .map(|&(v, i)| ((v, i), removal_saving(inst, current, v, i)))
                .collect();
            scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
            scored.into_iter().take(q).map(|(vi, _)| vi).collect()
        }
        _ => {
            // contiguous segment of one route
            let used: Vec<usize> = (0..current.n_vehicles())
                .filter(|&v| !current.routes[v].is_empty())
                .collect();
            let v = used[rng.gen_range(0..used.len())];
            let custs = current.customers_of_route(v).to_vec();
            let len = 1 + rng.gen_range(0..custs.len());
            let start = rng.gen_range(0..=custs.len() - len);
            custs[start..start + len].iter().map(|&i| (v, i)).collect()
        }
    };
    if removed.is_empty() {
        return None;
    }

    // rebuild vehicle states without the removed visits
    let mut vehicles: Vec<VehicleState<S>> = Vec::with_capacity(current.n_vehicles());
    let mut deliveries: Vec<BTreeMap<(usize, usize), Qty>> = Vec::with_capacity(current.n_vehicles());
    for v in 0..current.n_vehicles() {
        let kept: Vec<usize> = current
            .customers_of_route(v)
            .iter()
            .copied()
            .filter(|&i| !removed.contains(&(v, i)))
            .collect();
        let mut dmap = current.deliveries[v].clone();
        dmap.retain(|&(i, _), _| !removed.contains(&(v, i)));
        let (type_idx, cost, compat, cap) = vehicle_shape(inst, fleet, current, v, kept.is_empty());
        let used: Qty = dmap.values().copied().sum();
        vehicles.push(VehicleState {
            route: kept,
            type_idx,
            remaining: cap - used,
            cost_per_km: cost,
            compatible: compat,
        });
        deliveries.push(dmap);
    }

    // served amounts after removal
    let mut already: BTreeMap<(usize, usize), Qty> = BTreeMap::new();
    for dmap in &deliveries {
        for (&(i, k), &qv) in dmap {
            *already.entry((i, k)).or_insert(Qty::ZERO) += qv;
        }
    }
    for (i, k, qty) in demand_chunks(inst, &already) {
        if place_chunk(inst, &mut vehicles, &mut deliveries, rng, i, k, qty).is_err() {
            return None;
        }
    }
    Some(finish_solution(inst, fleet, vehicles, deliveries, current.construction_s))
}

fn vehicle_shape<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    current: &RoutingSolution<S>,
    v: usize,
    now_empty: bool,
) -> (Option<usize>, S, Vec<bool>, Qty) {
    match fleet {
        Fleet::Stable { vehicles, .. } => {
            let vv = &vehicles[v];
            (Some(vv.type_idx), vv.cost_per_km, vv.compatible.clone(), vv.capacity)
        }
        Fleet::Flexible { .. } => {
            if now_empty {
                // emptied vehicles may be re-typed by the repair
                (None, S::zero(), Vec::new(), Qty::ZERO)
            } else {
                let t = current.vehicle_types[v];
                let ty = &inst.vehicle_types[t];
                (Some(t), ty.cost_per_km, ty.compatible.clone(), ty.capacity)
            }
        }
    }
}

fn removal_saving<S: Scalar>(inst: &Instance<S>, sol: &RoutingSolution<S>, v: usize, i: usize) -> S {
    let route = &sol.routes[v];
    let cost = inst.vehicle_types[sol.vehicle_types[v]].cost_per_km;
    let pos = route.iter().position(|&x| x == i).unwrap();
    let (a, b) = (route[pos - 1], route[pos + 1]);
    (inst.dist(a, i) + inst.dist(i, b) - inst.dist(a, b)) * cost
}

// ---------------------------------------------------------------------------
// Warm-start encoding
// ---------------------------------------------------------------------------

/// Encode a feasible solution as a full assignment for a built model:
/// vehicles are permuted canonically so the active symmetry rows hold, then x,
/// y, u, z, f are set and every row is replayed.
pub fn encode_start<S: Scalar>(
    built: &BuiltModel<S>,
    sol: &RoutingSolution<S>,
) -> Result<Assignment<S>, EncodeError> {
    let fleet = &built.fleet;
    let inst = &built.instance;
    let cat = &built.catalog;
    if sol.n_vehicles() != fleet.len() {
        return Err(HeuristicError::FleetMismatch { got: sol.n_vehicles(), expected: fleet.len() }.into());
    }

    let perm = canonical_permutation(built, sol);
    let n_types = inst.vehicle_types.len();
    let mut a = Assignment::zeros(&built.model);

    for (new_v, &old_v) in perm.iter().enumerate() {
        let route = &sol.routes[old_v];
        let used = !route.is_empty();
        a.values[cat.u(new_v).0] = if used { S::zero() } else { S::one() };

        let type_idx = if built.kind.fleet == FleetKind::Flexible {
            let t = if used { sol.vehicle_types[old_v] } else { n_types - 1 };
            a.values[cat.z(new_v, t).0] = S::one();
            t
        } else {
            fleet.vehicle(new_v).type_idx
        };

        for w in route.windows(2) {
            let id = match built.kind.fleet {
                FleetKind::Stable => cat.x(new_v, w[0], w[1]).unwrap(),
                FleetKind::Flexible => cat.x_t(new_v, type_idx, w[0], w[1]).unwrap(),
            };
            a.values[id.0] = S::one();
        }

        for (&(i, k), &q) in &sol.deliveries[old_v] {
            if let Some(y) = cat.y(new_v, i, k) {
                a.values[y.0] = q.to_scalar();
            }
        }

        if cat.has_f() && used {
            let cap = match fleet {
                Fleet::Stable { vehicles, .. } => vehicles[new_v].capacity,
                Fleet::Flexible { .. } => inst.vehicle_types[type_idx].capacity,
            };
            let compat: Vec<bool> = match fleet {
                Fleet::Stable { vehicles, .. } => vehicles[new_v].compatible.clone(),
                Fleet::Flexible { .. } => vec![true; inst.n_commodities()],
            };
            let pad = if built.strengthen.total_load {
                cap - sol.delivered_total(old_v)
            } else {
                Qty::ZERO
            };
            let pad_k = compat.iter().position(|&c| c).unwrap_or(0);
            let mut remaining: Vec<Qty> = (0..inst.n_commodities())
                .map(|k| {
                    sol.deliveries[old_v]
                        .iter()
                        .filter(|(&(_, kk), _)| kk == k)
                        .map(|(_, &q)| q)
                        .sum()
                })
                .collect();
            for w in route.windows(2) {
                let (from, to) = (w[0], w[1]);
                for k in 0..inst.n_commodities() {
                    let mut load = remaining[k];
                    if k == pad_k {
                        load += pad;
                    }
                    if load.is_positive() {
                        if let Some(f) = cat.f(new_v, k, from, to) {
                            a.values[f.0] = load.to_scalar();
                        }
                    }
                }
                if to != DEPOT {
                    for k in 0..inst.n_commodities() {
                        let dropped = sol.deliveries[old_v].get(&(to, k)).copied().unwrap_or(Qty::ZERO);
                        remaining[k] -= dropped;
                    }
                }
            }
        }
    }

    let violated = built.model.violated_rows(&a, S::from_f64_lossy(1e-6));
    if !violated.is_empty() {
        return Err(EncodeError::Unsatisfiable(violated));
    }
    Ok(a)
}

/// Order of original vehicle indices satisfying the active label-symmetry
/// rows: used vehicles first (per pool in stable mode), sorted by type and/or
/// smallest visited customer index depending on the enabled families.
fn canonical_permutation<S: Scalar>(built: &BuiltModel<S>, sol: &RoutingSolution<S>) -> Vec<usize> {
    let min_visited = |v: usize| -> usize {
        sol.customers_of_route(v).iter().copied().min().unwrap_or(usize::MAX)
    };
    match &built.fleet {
        Fleet::Stable { pools, .. } => {
            let mut perm = Vec::with_capacity(sol.n_vehicles());
            for p in pools {
                let mut members: Vec<usize> = (p.start..p.start + p.count).collect();
                members.sort_by_key(|&v| (sol.routes[v].is_empty(), min_visited(v), v));
                perm.extend(members);
            }
            perm
        }
        Fleet::Flexible { count } => {
            let type_first = built.strengthen.fleet_order || built.strengthen.visit_order;
            let mut all: Vec<usize> = (0..*count).collect();
            all.sort_by_key(|&v| {
                let unused = sol.routes[v].is_empty();
                let t = sol.vehicle_types[v];
                if type_first {
                    (unused, t, min_visited(v), v)
                } else {
                    (unused, min_visited(v), t, v)
                }
            });
            all
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::load_instance;

    fn forced_split_doc() -> &'static str {
        r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [{"id": 1, "x": 3.0, "y": 4.0, "demand": {"ambient": 25}}],
            "commodities": ["ambient"],
            "fleet": {"mode": "stable", "counts": [3]},
            "vehicle_types": [
                {"id": "truck", "capacity": 10, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#
    }

    #[test]
    fn forced_split_uses_three_out_and_back_routes() {
        let inst: Instance<f64> = load_instance(forced_split_doc()).unwrap();
        let fleet = crate::instance::stable_fleet_from_counts(&inst, &[3]).unwrap();
        let sol = construct_initial(&inst, &fleet, 0).unwrap();
        assert_eq!(sol.used_vehicles(), 3);
        for v in 0..3 {
            assert_eq!(sol.routes[v], vec![0, 1, 0]);
        }
        let mut amounts: Vec<i64> = (0..3).map(|v| sol.delivered_total(v).units()).collect();
        amounts.sort_unstable();
        assert_eq!(amounts, vec![5, 10, 10]);
        // objective: three round trips of 5 km at 2/km
        assert!((sol.objective - 60.0).abs() < 1e-9);
    }

    #[test]
    fn all_demand_in_one_vehicle_leaves_the_rest_unused() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [
                {"id": 1, "x": 1.0, "y": 0.0, "demand": {"ambient": 3}},
                {"id": 2, "x": 2.0, "y": 0.0, "demand": {"ambient": 4}}
            ],
            "commodities": ["ambient"],
            "fleet": {"mode": "stable", "counts": [3]},
            "vehicle_types": [
                {"id": "truck", "capacity": 10, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#;
        let inst: Instance<f64> = load_instance(doc).unwrap();
        let fleet = crate::instance::stable_fleet_from_counts(&inst, &[3]).unwrap();
        let sol = construct_initial(&inst, &fleet, 0).unwrap();
        assert_eq!(sol.used_vehicles(), 1);
        assert_eq!(sol.routes.iter().filter(|r| r.is_empty()).count(), 2);
    }

    #[test]
    fn shortfall_is_reported_with_the_commodity() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [{"id": 1, "x": 1.0, "y": 0.0, "demand": {"chilled": 30}}],
            "commodities": ["chilled"],
            "fleet": {"mode": "stable", "counts": [2]},
            "vehicle_types": [
                {"id": "refrigerated", "capacity": 10, "cost_per_km": 3.0, "compatible": ["chilled"]}
            ]
        }"#;
        let inst: Instance<f64> = load_instance(doc).unwrap();
        let fleet = crate::instance::stable_fleet_from_counts(&inst, &[2]).unwrap();
        let err = construct_initial(&inst, &fleet, 0).unwrap_err();
        assert!(matches!(err, HeuristicError::CapacityShortfall { ref commodity, missing: 10 } if commodity == "chilled"));
    }

    #[test]
    fn lns_budget_zero_returns_input() {
        let inst: Instance<f64> = load_instance(forced_split_doc()).unwrap();
        let fleet = crate::instance::stable_fleet_from_counts(&inst, &[3]).unwrap();
        let sol = construct_initial(&inst, &fleet, 0).unwrap();
        let out = lns_improve(&inst, &fleet, &sol, 0.0, 7);
        assert_eq!(out, sol);
    }

    #[test]
    fn lns_never_worsens_and_is_deterministic() {
        let profiles = crate::instance::default_type_profiles(2);
        for seed in [3u64, 9] {
            let inst: Instance<f64> =
                crate::instance::generate_instance(seed, 6, 2, &profiles, crate::instance::DemandProfile::Modest)
                    .unwrap();
            let assignment = crate::instance::default_commodity_assignment(&inst);
            let fleet = crate::instance::size_stable_fleet(&inst, &assignment, 1).unwrap();
            let start = construct_initial(&inst, &fleet, seed).unwrap();
            let a = improve_iters(&inst, &fleet, &start, 60, 42);
            let b = improve_iters(&inst, &fleet, &start, 60, 42);
            assert!(a.objective <= start.objective + 1e-12);
            assert_eq!(a, b, "same seed and iteration count must agree");
        }
    }

    #[test]
    fn solution_documents_round_trip() {
        let inst: Instance<f64> = load_instance(forced_split_doc()).unwrap();
        let fleet = crate::instance::stable_fleet_from_counts(&inst, &[3]).unwrap();
        let sol = construct_initial(&inst, &fleet, 0).unwrap();
        let text = save_solution(&inst, &sol);
        let back = load_solution(&inst, &text).unwrap();
        assert_eq!(back.routes, sol.routes);
        assert_eq!(back.deliveries, sol.deliveries);
        assert_eq!(back.vehicle_types, sol.vehicle_types);
    }
}
