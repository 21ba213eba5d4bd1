//! Solver-independent validation and a brute-force exact oracle for small
//! instances. Quantities are checked in exact integer arithmetic; delivery
//! feasibility for fixed routes is an integral max-flow, so the oracle does
//! not depend on the simplex it is used to audit.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashSet};
use std::cmp::Reverse;

use thiserror::Error;

use crate::formulations::{BuiltModel, FleetKind};
use crate::instance::{Fleet, Instance, DEPOT};
use crate::quantity::Qty;
use crate::scalar::Scalar;
use crate::warmstart::RoutingSolution;

/// Per-check verdicts of a solution validation; `pass()` iff every check
/// holds.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport<S> {
    pub demand_failures: Vec<(usize, usize)>,
    pub capacity_failures: Vec<usize>,
    pub compatibility_failures: Vec<(usize, usize)>,
    pub connectivity_failures: Vec<usize>,
    pub linkage_failures: Vec<(usize, usize)>,
    pub objective: S,
}

impl<S: Scalar> ValidationReport<S> {
    pub fn pass(&self) -> bool {
        self.demand_failures.is_empty()
            && self.capacity_failures.is_empty()
            && self.compatibility_failures.is_empty()
            && self.connectivity_failures.is_empty()
            && self.linkage_failures.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.pass() {
            return "all checks pass".into();
        }
        let mut parts = Vec::new();
        if !self.demand_failures.is_empty() {
            parts.push(format!("demand mismatches at {:?}", self.demand_failures));
        }
        if !self.capacity_failures.is_empty() {
            parts.push(format!("capacity exceeded for vehicles {:?}", self.capacity_failures));
        }
        if !self.compatibility_failures.is_empty() {
            parts.push(format!("incompatible deliveries {:?}", self.compatibility_failures));
        }
        if !self.connectivity_failures.is_empty() {
            parts.push(format!("broken routes for vehicles {:?}", self.connectivity_failures));
        }
        if !self.linkage_failures.is_empty() {
            parts.push(format!("deliveries without visits {:?}", self.linkage_failures));
        }
        parts.join("; ")
    }
}

#[derive(Debug, Error)]
pub enum CheckerError {
    #[error("route of vehicle {vehicle} references unknown location {location}")]
    UnknownLocation { vehicle: usize, location: usize },
    #[error("size guard exceeded: {customers} customers / {vehicles} vehicles (oracle limit 5 / 3)")]
    SizeGuard { customers: usize, vehicles: usize },
    #[error("instance is infeasible for this fleet")]
    Infeasible,
}

fn vehicle_cost_cap_compat<'a, S: Scalar>(
    inst: &'a Instance<S>,
    fleet: &'a Fleet<S>,
    sol: &RoutingSolution<S>,
    v: usize,
) -> (S, Qty, &'a [bool]) {
    match fleet {
        Fleet::Stable { vehicles, .. } => {
            let vv = &vehicles[v];
            (vv.cost_per_km, vv.capacity, &vv.compatible)
        }
        Fleet::Flexible { .. } => {
            let ty = &inst.vehicle_types[sol.vehicle_types[v]];
            (ty.cost_per_km, ty.capacity, &ty.compatible)
        }
    }
}

/// Recompute the routing cost: Σ over route arcs of cost_v · dist.
pub fn objective_of<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    sol: &RoutingSolution<S>,
) -> Result<S, CheckerError> {
    let mut total = S::zero();
    for v in 0..sol.n_vehicles() {
        let (cost, _, _) = vehicle_cost_cap_compat(inst, fleet, sol, v);
        for w in sol.routes[v].windows(2) {
            if w[0] >= inst.n_locations() || w[1] >= inst.n_locations() {
                return Err(CheckerError::UnknownLocation {
                    vehicle: v,
                    location: w[0].max(w[1]),
                });
            }
            total = total + cost * inst.dist(w[0], w[1]);
        }
    }
    Ok(total)
}

/// Check every core constraint plus route connectivity with exact quantity
/// arithmetic. Failures are verdicts, not errors.
pub fn validate_solution<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    sol: &RoutingSolution<S>,
) -> ValidationReport<S> {
    let mut report = ValidationReport::default();
    let n_locs = inst.n_locations();

    for i in 1..n_locs {
        for k in 0..inst.n_commodities() {
            let delivered: Qty = (0..sol.n_vehicles())
                .map(|v| sol.deliveries[v].get(&(i, k)).copied().unwrap_or(Qty::ZERO))
                .sum();
            if delivered != inst.demand(i, k) {
                report.demand_failures.push((i, k));
            }
        }
    }

    for v in 0..sol.n_vehicles() {
        let (_, cap, compat) = vehicle_cost_cap_compat(inst, fleet, sol, v);
        if sol.delivered_total(v) > cap {
            report.capacity_failures.push(v);
        }
        for (&(_, k), &q) in &sol.deliveries[v] {
            if q.is_positive() && !compat.get(k).copied().unwrap_or(false) {
                report.compatibility_failures.push((v, k));
            }
        }
    }

    for v in 0..sol.n_vehicles() {
        let route = &sol.routes[v];
        if route.is_empty() {
            continue;
        }
        let ok = route.len() >= 3
            && route[0] == DEPOT
            && *route.last().unwrap() == DEPOT
            && route[1..route.len() - 1]
                .iter()
                .all(|&i| i >= 1 && i < n_locs)
            && {
                let middle = &route[1..route.len() - 1];
                let set: BTreeSet<usize> = middle.iter().copied().collect();
                set.len() == middle.len()
            };
        if !ok {
            report.connectivity_failures.push(v);
        }
    }

    for v in 0..sol.n_vehicles() {
        let visited: BTreeSet<usize> = sol.customers_of_route(v).iter().copied().collect();
        for (&(i, _), &q) in &sol.deliveries[v] {
            if q.is_positive() && !visited.contains(&i) {
                report.linkage_failures.push((v, i));
            }
        }
    }

    report.objective = objective_of(inst, fleet, sol).unwrap_or_else(|_| S::nan());
    report
}

// ---------------------------------------------------------------------------
// Integral delivery feasibility (max-flow)
// ---------------------------------------------------------------------------

struct Dinic {
    to: Vec<usize>,
    cap: Vec<i64>,
    head: Vec<Vec<usize>>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic { to: Vec::new(), cap: Vec::new(), head: vec![Vec::new(); n] }
    }

    fn add_edge(&mut self, a: usize, b: usize, cap: i64) -> usize {
        let id = self.to.len();
        self.to.push(b);
        self.cap.push(cap);
        self.head[a].push(id);
        self.to.push(a);
        self.cap.push(0);
        self.head[b].push(id + 1);
        id
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            // BFS levels
            let mut level = vec![usize::MAX; self.head.len()];
            level[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &e in &self.head[u] {
                    if self.cap[e] > 0 && level[self.to[e]] == usize::MAX {
                        level[self.to[e]] = level[u] + 1;
                        queue.push_back(self.to[e]);
                    }
                }
            }
            if level[t] == usize::MAX {
                return flow;
            }
            let mut iter = vec![0usize; self.head.len()];
            loop {
                let pushed = self.dfs(s, t, i64::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64, level: &[usize], iter: &mut [usize]) -> i64 {
        if u == t {
            return limit;
        }
        while iter[u] < self.head[u].len() {
            let e = self.head[u][iter[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let pushed = self.dfs(v, t, limit.min(self.cap[e]), level, iter);
                if pushed > 0 {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            iter[u] += 1;
        }
        0
    }
}

/// Exact integral deliveries for fixed visit sets, or None when demand cannot
/// be met. Vehicles are described positionally by capacity, compatibility
/// row, and visited customers.
pub fn integral_deliveries<S: Scalar>(
    inst: &Instance<S>,
    caps: &[Qty],
    compat: &[Vec<bool>],
    visits: &[BTreeSet<usize>],
) -> Option<Vec<BTreeMap<(usize, usize), Qty>>> {
    let n_comms = inst.n_commodities();
    let n_custs = inst.n_customers();
    let n_veh = caps.len();
    // nodes: 0 = source, demand nodes, vehicle nodes, sink
    let dnode = |i: usize, k: usize| 1 + (i - 1) * n_comms + k;
    let vnode = |v: usize| 1 + n_custs * n_comms + v;
    let sink = 1 + n_custs * n_comms + n_veh;
    let mut net = Dinic::new(sink + 1);

    let mut total = 0i64;
    for i in 1..=n_custs {
        for k in 0..n_comms {
            let d = inst.demand(i, k).units();
            if d > 0 {
                net.add_edge(0, dnode(i, k), d);
                total += d;
            }
        }
    }
    let mut delivery_edges: Vec<(usize, usize, usize, usize)> = Vec::new(); // (edge, v, i, k)
    for v in 0..n_veh {
        for &i in &visits[v] {
            for k in 0..n_comms {
                if compat[v][k] && inst.demand(i, k).is_positive() {
                    let e = net.add_edge(dnode(i, k), vnode(v), i64::MAX / 4);
                    delivery_edges.push((e, v, i, k));
                }
            }
        }
        net.add_edge(vnode(v), sink, caps[v].units());
    }

    if net.max_flow(0, sink) != total {
        return None;
    }
    let mut out = vec![BTreeMap::new(); n_veh];
    for (e, v, i, k) in delivery_edges {
        let sent = net.cap[e ^ 1]; // reverse capacity equals flow
        if sent > 0 {
            out[v].insert((i, k), Qty(sent));
        }
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct RouteOption<S> {
    cost: S,
    customers: Vec<usize>,
    type_idx: usize,
}

fn simple_routes<S: Scalar>(inst: &Instance<S>) -> Vec<Vec<usize>> {
    let n = inst.n_customers();
    let custs: Vec<usize> = (1..=n).collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    // all ordered sequences over all subsets, keeping one orientation
    for mask in 1u32..(1 << n) {
        let subset: Vec<usize> = custs.iter().copied().filter(|&c| mask & (1 << (c - 1)) != 0).collect();
        permutations(&subset, &mut |perm| {
            if perm.len() == 1 || perm.first() < perm.last() {
                out.push(perm.to_vec());
            }
        });
    }
    out
}

fn permutations<T: Clone>(items: &[T], visit: &mut impl FnMut(&[T])) {
    let mut arr = items.to_vec();
    let n = arr.len();
    permute_rec(&mut arr, n, visit);
}

fn permute_rec<T: Clone>(arr: &mut Vec<T>, k: usize, visit: &mut impl FnMut(&[T])) {
    if k <= 1 {
        visit(arr);
        return;
    }
    for i in 0..k {
        permute_rec(arr, k - 1, visit);
        if k % 2 == 0 {
            arr.swap(i, k - 1);
        } else {
            arr.swap(0, k - 1);
        }
    }
}

fn route_cost<S: Scalar>(inst: &Instance<S>, customers: &[usize], cost_per_km: S) -> S {
    if customers.is_empty() {
        return S::zero();
    }
    let mut d = inst.dist(DEPOT, customers[0]);
    for w in customers.windows(2) {
        d = d + inst.dist(w[0], w[1]);
    }
    d = d + inst.dist(*customers.last().unwrap(), DEPOT);
    d * cost_per_km
}

/// Exhaustive optimum for small instances: per-vehicle depot-anchored simple
/// routes enumerated in ascending combined cost (vehicles of one pool kept in
/// nondecreasing option order to kill label symmetry); the first combination
/// with a feasible integral delivery plan is optimal, since the objective
/// depends on routes alone.
pub fn brute_force_optimum<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
) -> Result<(S, RoutingSolution<S>), CheckerError> {
    let n_veh = fleet.len();
    if inst.n_customers() > 5 || n_veh > 3 {
        return Err(CheckerError::SizeGuard { customers: inst.n_customers(), vehicles: n_veh });
    }

    // quick global feasibility probe: every vehicle visits everyone
    {
        let all: BTreeSet<usize> = (1..inst.n_locations()).collect();
        let (caps, compat): (Vec<Qty>, Vec<Vec<bool>>) = match fleet {
            Fleet::Stable { vehicles, .. } => (
                vehicles.iter().map(|v| v.capacity).collect(),
                vehicles.iter().map(|v| v.compatible.clone()).collect(),
            ),
            Fleet::Flexible { count } => {
                // best case: every vehicle takes the best type per commodity
                let best_cap = inst.vehicle_types.iter().map(|t| t.capacity).max().unwrap();
                (
                    vec![best_cap; *count],
                    vec![vec![true; inst.n_commodities()]; *count],
                )
            }
        };
        let visits = vec![all; n_veh];
        if integral_deliveries(inst, &caps, &compat, &visits).is_none() {
            return Err(CheckerError::Infeasible);
        }
    }

    let bare = simple_routes(inst);
    let per_vehicle_options = |v: usize| -> Vec<RouteOption<S>> {
        let mut opts = Vec::new();
        match fleet {
            Fleet::Stable { vehicles, .. } => {
                let vv = &vehicles[v];
                for customers in &bare {
                    opts.push(RouteOption {
                        cost: route_cost(inst, customers, vv.cost_per_km),
                        customers: customers.clone(),
                        type_idx: vv.type_idx,
                    });
                }
            }
            Fleet::Flexible { .. } => {
                opts.push(RouteOption { cost: S::zero(), customers: Vec::new(), type_idx: inst.vehicle_types.len() - 1 });
                for customers in bare.iter().filter(|c| !c.is_empty()) {
                    for (t, ty) in inst.vehicle_types.iter().enumerate() {
                        opts.push(RouteOption {
                            cost: route_cost(inst, customers, ty.cost_per_km),
                            customers: customers.clone(),
                            type_idx: t,
                        });
                    }
                }
            }
        }
        opts.sort_by(|a, b| {
            a.cost
                .partial_cmp(&b.cost)
                .unwrap()
                .then(a.customers.len().cmp(&b.customers.len()))
                .then(a.customers.cmp(&b.customers))
                .then(a.type_idx.cmp(&b.type_idx))
        });
        opts
    };
    let options: Vec<Vec<RouteOption<S>>> = (0..n_veh).map(per_vehicle_options).collect();

    // vehicles interchangeable within a pool (or globally when flexible):
    // enforce nondecreasing option indices there
    let pool_of: Vec<usize> = match fleet {
        Fleet::Stable { .. } => (0..n_veh).map(|v| fleet.pool_of(v)).collect(),
        Fleet::Flexible { .. } => vec![0; n_veh],
    };

    #[derive(PartialEq)]
    struct State<S> {
        cost: S,
        idx: Vec<u32>,
    }
    impl<S: Scalar> Eq for State<S> {}
    impl<S: Scalar> PartialOrd for State<S> {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl<S: Scalar> Ord for State<S> {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.cost
                .partial_cmp(&other.cost)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| self.idx.cmp(&other.idx))
        }
    }

    let mut heap: BinaryHeap<Reverse<State<S>>> = BinaryHeap::new();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let start = vec![0u32; n_veh];
    heap.push(Reverse(State { cost: S::zero(), idx: start.clone() }));
    seen.insert(start);

    while let Some(Reverse(state)) = heap.pop() {
        // delivery feasibility for this combination
        let caps: Vec<Qty> = (0..n_veh)
            .map(|v| match fleet {
                Fleet::Stable { vehicles, .. } => vehicles[v].capacity,
                Fleet::Flexible { .. } => inst.vehicle_types[options[v][state.idx[v] as usize].type_idx].capacity,
            })
            .collect();
        let compat: Vec<Vec<bool>> = (0..n_veh)
            .map(|v| match fleet {
                Fleet::Stable { vehicles, .. } => vehicles[v].compatible.clone(),
                Fleet::Flexible { .. } => inst.vehicle_types[options[v][state.idx[v] as usize].type_idx]
                    .compatible
                    .clone(),
            })
            .collect();
        let visits: Vec<BTreeSet<usize>> = (0..n_veh)
            .map(|v| options[v][state.idx[v] as usize].customers.iter().copied().collect())
            .collect();

        if let Some(deliveries) = integral_deliveries(inst, &caps, &compat, &visits) {
            let mut routes = Vec::with_capacity(n_veh);
            let mut types = Vec::with_capacity(n_veh);
            for v in 0..n_veh {
                let opt = &options[v][state.idx[v] as usize];
                if opt.customers.is_empty() {
                    routes.push(Vec::new());
                } else {
                    let mut full = vec![DEPOT];
                    full.extend(&opt.customers);
                    full.push(DEPOT);
                    routes.push(full);
                }
                types.push(opt.type_idx);
            }
            let mut sol = RoutingSolution {
                routes,
                deliveries,
                vehicle_types: types,
                objective: S::zero(),
                construction_s: 0.0,
            };
            sol.recompute_objective(inst);
            return Ok((state.cost, sol));
        }

        for v in 0..n_veh {
            let next = state.idx[v] + 1;
            if next as usize >= options[v].len() {
                continue;
            }
            // keep same-pool successors nondecreasing
            if v + 1 < n_veh && pool_of[v + 1] == pool_of[v] && next > state.idx[v + 1] {
                continue;
            }
            let mut idx = state.idx.clone();
            idx[v] = next;
            if seen.insert(idx.clone()) {
                let cost = (0..n_veh).map(|w| options[w][idx[w] as usize].cost).sum();
                heap.push(Reverse(State { cost, idx }));
            }
        }
    }

    Err(CheckerError::Infeasible)
}

/// Turn a MIP assignment into a routing solution: routes from the used arcs,
/// integral deliveries re-derived by max-flow so the quantities are exact.
pub fn decode_solution<S: Scalar>(
    built: &BuiltModel<S>,
    values: &[S],
) -> Result<RoutingSolution<S>, CheckerError> {
    let inst = &built.instance;
    let cat = &built.catalog;
    let n_locs = inst.n_locations();
    let half = S::from_f64_lossy(0.5);

    let mut routes = Vec::with_capacity(cat.n_vehicles);
    let mut types = Vec::with_capacity(cat.n_vehicles);
    let mut visits: Vec<BTreeSet<usize>> = Vec::with_capacity(cat.n_vehicles);
    for v in 0..cat.n_vehicles {
        let type_idx = match built.kind.fleet {
            FleetKind::Stable => built.fleet.vehicle(v).type_idx,
            FleetKind::Flexible => (0..cat.n_types)
                .max_by(|&a, &b| values[cat.z(v, a).0].partial_cmp(&values[cat.z(v, b).0]).unwrap())
                .unwrap_or(0),
        };
        // successor walk over used arcs (Eulerian through the depot)
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n_locs];
        for i in 0..n_locs {
            for j in 0..n_locs {
                if i == j {
                    continue;
                }
                let used = match built.kind.fleet {
                    FleetKind::Stable => cat.x(v, i, j).is_some_and(|id| values[id.0] > half),
                    FleetKind::Flexible => {
                        (0..cat.n_types).any(|t| cat.x_t(v, t, i, j).is_some_and(|id| values[id.0] > half))
                    }
                };
                if used {
                    succ[i].push(j);
                }
            }
        }
        for s in &mut succ {
            s.sort_unstable();
            s.reverse(); // pop smallest first
        }
        let mut route = Vec::new();
        if !succ[DEPOT].is_empty() {
            route.push(DEPOT);
            let mut at = DEPOT;
            loop {
                let Some(next) = succ[at].pop() else { break };
                route.push(next);
                at = next;
                if at == DEPOT && succ.iter().all(|s| s.is_empty()) {
                    break;
                }
                if at == DEPOT && succ[DEPOT].is_empty() {
                    break;
                }
            }
        }
        let visited: BTreeSet<usize> = route.iter().copied().filter(|&i| i != DEPOT).collect();
        visits.push(visited);
        types.push(type_idx);
        routes.push(route);
    }

    let caps: Vec<Qty> = (0..cat.n_vehicles)
        .map(|v| match &built.fleet {
            Fleet::Stable { vehicles, .. } => vehicles[v].capacity,
            Fleet::Flexible { .. } => inst.vehicle_types[types[v]].capacity,
        })
        .collect();
    let compat: Vec<Vec<bool>> = (0..cat.n_vehicles)
        .map(|v| match &built.fleet {
            Fleet::Stable { vehicles, .. } => vehicles[v].compatible.clone(),
            Fleet::Flexible { .. } => inst.vehicle_types[types[v]].compatible.clone(),
        })
        .collect();
    let deliveries = integral_deliveries(inst, &caps, &compat, &visits).ok_or(CheckerError::Infeasible)?;

    let mut sol = RoutingSolution {
        routes,
        deliveries,
        vehicle_types: types,
        objective: S::zero(),
        construction_s: 0.0,
    };
    sol.recompute_objective(inst);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{load_instance, stable_fleet_from_counts};
    use crate::warmstart::construct_initial;

    fn two_customer_doc() -> &'static str {
        r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [
                {"id": 1, "x": 3.0, "y": 4.0, "demand": {"chilled": 4, "ambient": 2}},
                {"id": 2, "x": 0.0, "y": 2.0, "demand": {"ambient": 7}}
            ],
            "commodities": ["chilled", "ambient"],
            "fleet": {"mode": "stable", "counts": [1, 1]},
            "vehicle_types": [
                {"id": "refrigerated", "capacity": 10, "cost_per_km": 3.0, "compatible": ["chilled", "ambient"]},
                {"id": "regular", "capacity": 12, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#
    }

    #[test]
    fn empty_solution_has_zero_objective() {
        let inst: crate::instance::Instance<f64> = load_instance(two_customer_doc()).unwrap();
        let fleet = stable_fleet_from_counts(&inst, &[1, 1]).unwrap();
        let sol = RoutingSolution::<f64> {
            routes: vec![Vec::new(), Vec::new()],
            deliveries: vec![BTreeMap::new(), BTreeMap::new()],
            vehicle_types: vec![0, 1],
            objective: 0.0,
            construction_s: 0.0,
        };
        assert_eq!(objective_of(&inst, &fleet, &sol).unwrap(), 0.0);
    }

    #[test]
    fn out_and_back_objective_is_twice_dist_times_cost() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [{"id": 1, "x": 3.0, "y": 4.0, "demand": {"ambient": 5}}],
            "commodities": ["ambient"],
            "fleet": {"mode": "stable", "counts": [1]},
            "vehicle_types": [{"id": "t", "capacity": 10, "cost_per_km": 2.0, "compatible": ["ambient"]}]
        }"#;
        let inst: crate::instance::Instance<f64> = load_instance(doc).unwrap();
        let fleet = stable_fleet_from_counts(&inst, &[1]).unwrap();
        let mut deliveries = vec![BTreeMap::new()];
        deliveries[0].insert((1, 0), Qty(5));
        let sol = RoutingSolution {
            routes: vec![vec![0, 1, 0]],
            deliveries,
            vehicle_types: vec![0],
            objective: 0.0,
            construction_s: 0.0,
        };
        assert_eq!(objective_of(&inst, &fleet, &sol).unwrap(), 20.0);
        assert!(validate_solution(&inst, &fleet, &sol).pass());
    }

    #[test]
    fn tampered_delivery_fails_the_demand_check() {
        let inst: crate::instance::Instance<f64> = load_instance(two_customer_doc()).unwrap();
        let fleet = stable_fleet_from_counts(&inst, &[1, 1]).unwrap();
        let mut sol = construct_initial(&inst, &fleet, 0).unwrap();
        assert!(validate_solution(&inst, &fleet, &sol).pass());
        // remove one unit from some delivery
        let (&key, &q) = sol.deliveries[0].iter().next().or_else(|| sol.deliveries[1].iter().next()).unwrap();
        let v = if sol.deliveries[0].contains_key(&key) { 0 } else { 1 };
        sol.deliveries[v].insert(key, q - Qty(1));
        let report = validate_solution(&inst, &fleet, &sol);
        assert!(!report.pass());
        assert_eq!(report.demand_failures, vec![key]);
    }

    #[test]
    fn depotless_cycle_fails_connectivity() {
        let inst: crate::instance::Instance<f64> = load_instance(two_customer_doc()).unwrap();
        let fleet = stable_fleet_from_counts(&inst, &[1, 1]).unwrap();
        let mut sol = construct_initial(&inst, &fleet, 0).unwrap();
        sol.routes[0] = vec![1, 2, 1];
        let report = validate_solution(&inst, &fleet, &sol);
        assert!(report.connectivity_failures.contains(&0));
    }

    #[test]
    fn oracle_single_customer_uses_cheapest_compatible_vehicle() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [{"id": 1, "x": 3.0, "y": 4.0, "demand": {"ambient": 5}}],
            "commodities": ["ambient"],
            "fleet": {"mode": "stable", "counts": [1, 1]},
            "vehicle_types": [
                {"id": "dear", "capacity": 10, "cost_per_km": 3.0, "compatible": ["ambient"]},
                {"id": "cheap", "capacity": 10, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#;
        let inst: crate::instance::Instance<f64> = load_instance(doc).unwrap();
        let fleet = stable_fleet_from_counts(&inst, &[1, 1]).unwrap();
        let (value, sol) = brute_force_optimum(&inst, &fleet).unwrap();
        assert!((value - 2.0 * 5.0 * 2.0).abs() < 1e-9);
        assert!(validate_solution(&inst, &fleet, &sol).pass());
    }

    #[test]
    fn oracle_forced_split_doubles_the_trip() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [{"id": 1, "x": 3.0, "y": 4.0, "demand": {"ambient": 15}}],
            "commodities": ["ambient"],
            "fleet": {"mode": "stable", "counts": [2]},
            "vehicle_types": [{"id": "t", "capacity": 10, "cost_per_km": 2.0, "compatible": ["ambient"]}]
        }"#;
        let inst: crate::instance::Instance<f64> = load_instance(doc).unwrap();
        let fleet = stable_fleet_from_counts(&inst, &[2]).unwrap();
        let (value, sol) = brute_force_optimum(&inst, &fleet).unwrap();
        assert!((value - 4.0 * 5.0 * 2.0).abs() < 1e-9);
        assert_eq!(sol.used_vehicles(), 2);
    }

    #[test]
    fn oracle_guard_rejects_large_inputs() {
        let profiles = crate::instance::default_type_profiles(2);
        let inst: crate::instance::Instance<f64> =
            crate::instance::generate_instance(1, 6, 2, &profiles, crate::instance::DemandProfile::Modest).unwrap();
        let fleet = crate::instance::size_stable_fleet(
            &inst,
            &crate::instance::default_commodity_assignment(&inst),
            0,
        )
        .unwrap();
        assert!(matches!(
            brute_force_optimum(&inst, &fleet),
            Err(CheckerError::SizeGuard { customers: 6, .. })
        ));
    }

    #[test]
    fn oracle_is_invariant_under_relabeling() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [
                {"id": 1, "x": 3.0, "y": 4.0, "demand": {"ambient": 9}},
                {"id": 2, "x": -2.0, "y": 1.0, "demand": {"ambient": 6}},
                {"id": 3, "x": 1.0, "y": -5.0, "demand": {"ambient": 8}}
            ],
            "commodities": ["ambient"],
            "fleet": {"mode": "stable", "counts": [2]},
            "vehicle_types": [{"id": "t", "capacity": 15, "cost_per_km": 2.0, "compatible": ["ambient"]}]
        }"#;
        let inst: crate::instance::Instance<f64> = load_instance(doc).unwrap();
        let fleet = stable_fleet_from_counts(&inst, &[2]).unwrap();
        let (value, _) = brute_force_optimum(&inst, &fleet).unwrap();
        let relabeled = crate::strengthen::reorder_customers_farthest_first(&inst);
        let (value2, _) = brute_force_optimum(&relabeled, &fleet).unwrap();
        assert!((value - value2).abs() < 1e-9);
    }

    #[test]
    fn oracle_beats_thousand_random_feasible_solutions() {
        let inst: crate::instance::Instance<f64> = load_instance(two_customer_doc()).unwrap();
        let fleet = stable_fleet_from_counts(&inst, &[1, 1]).unwrap();
        let (value, _) = brute_force_optimum(&inst, &fleet).unwrap();
        for seed in 0..1000u64 {
            let sol = construct_initial(&inst, &fleet, seed).unwrap();
            assert!(validate_solution(&inst, &fleet, &sol).pass());
            assert!(sol.objective >= value - 1e-9);
        }
    }
}
