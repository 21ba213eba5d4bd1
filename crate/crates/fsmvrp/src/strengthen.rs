//! Valid-cut and symmetry-breaking families, each independently switchable.
//!
//! Cut families tighten the relaxation without removing optimal values; the
//! symmetry families remove label-permuted duplicates. Stable fleets restrict
//! label chains to same-type pools (vehicles of different pools are not
//! interchangeable); flexible fleets chain globally.

use thiserror::Error;

use crate::formulations::{BuiltModel, FleetKind, RoutingKind};
use crate::instance::{Fleet, Instance, DEPOT};
use crate::mip::{ModelError, Sense, VarId};
use crate::scalar::Scalar;

pub const CUT_FAMILIES: [&str; 6] = [
    "min_visits",
    "min_vehicles",
    "max_vehicles",
    "fractional_subtour",
    "depot_outdegree",
    "single_visit",
];

pub const SYMMETRY_FAMILIES: [&str; 5] = [
    "usage_order",
    "visit_order",
    "fleet_order",
    "customer_assignment",
    "total_load",
];

/// Which cut/symmetry/ordering families to add on top of a base model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrengthenConfig {
    pub min_visits: bool,
    pub min_vehicles: bool,
    pub max_vehicles: bool,
    pub fractional_subtour: bool,
    pub depot_outdegree: bool,
    pub single_visit: bool,

    pub usage_order: bool,
    pub visit_order: bool,
    pub fleet_order: bool,
    pub customer_assignment: bool,
    pub total_load: bool,

    /// Re-index customers farthest-from-depot-first before building.
    pub reorder_customers: bool,
}

impl StrengthenConfig {
    pub fn none() -> Self {
        Self::default()
    }

    /// Everything the given kind supports, ordering included.
    pub fn all_for(fleet: FleetKind, routing: RoutingKind) -> Self {
        StrengthenConfig {
            min_visits: true,
            min_vehicles: true,
            max_vehicles: true,
            fractional_subtour: true,
            depot_outdegree: true,
            single_visit: true,
            usage_order: true,
            visit_order: true,
            fleet_order: fleet == FleetKind::Flexible,
            customer_assignment: true,
            total_load: routing == RoutingKind::Commodity,
            reorder_customers: true,
        }
    }

    pub fn with_cut(mut self, name: &str) -> Result<Self, String> {
        self.set_family(name, true, &CUT_FAMILIES)?;
        Ok(self)
    }

    pub fn with_symmetry(mut self, name: &str) -> Result<Self, String> {
        self.set_family(name, true, &SYMMETRY_FAMILIES)?;
        Ok(self)
    }

    fn set_family(&mut self, name: &str, value: bool, allowed: &[&str]) -> Result<(), String> {
        if !allowed.contains(&name) {
            return Err(format!("unknown family {name:?} (expected one of {allowed:?})"));
        }
        match name {
            "min_visits" => self.min_visits = value,
            "min_vehicles" => self.min_vehicles = value,
            "max_vehicles" => self.max_vehicles = value,
            "fractional_subtour" => self.fractional_subtour = value,
            "depot_outdegree" => self.depot_outdegree = value,
            "single_visit" => self.single_visit = value,
            "usage_order" => self.usage_order = value,
            "visit_order" => self.visit_order = value,
            "fleet_order" => self.fleet_order = value,
            "customer_assignment" => self.customer_assignment = value,
            "total_load" => self.total_load = value,
            _ => unreachable!(),
        }
        Ok(())
    }

    /// Parse `all`, `none`, or a comma list of cut family names.
    pub fn parse_cuts(&mut self, spec: &str) -> Result<(), String> {
        match spec {
            "all" => {
                for name in CUT_FAMILIES {
                    self.set_family(name, true, &CUT_FAMILIES)?;
                }
            }
            "none" => {
                for name in CUT_FAMILIES {
                    self.set_family(name, false, &CUT_FAMILIES)?;
                }
            }
            list => {
                for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    self.set_family(name, true, &CUT_FAMILIES)?;
                }
            }
        }
        Ok(())
    }

    /// Parse `all`, `none`, or a comma list of symmetry family names. Kind
    /// compatibility is checked at apply time.
    pub fn parse_symmetry(&mut self, spec: &str, fleet: FleetKind, routing: RoutingKind) -> Result<(), String> {
        match spec {
            "all" => {
                self.usage_order = true;
                self.visit_order = true;
                self.fleet_order = fleet == FleetKind::Flexible;
                self.customer_assignment = true;
                self.total_load = routing == RoutingKind::Commodity;
            }
            "none" => {
                for name in SYMMETRY_FAMILIES {
                    self.set_family(name, false, &SYMMETRY_FAMILIES)?;
                }
            }
            list => {
                for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    self.set_family(name, true, &SYMMETRY_FAMILIES)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum StrengthenError {
    #[error("total_load requires commodity-flow routing")]
    TotalLoadNeedsCommodity,
    #[error("fleet_order requires a flexible fleet")]
    FleetOrderNeedsFlexible,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// ⌈dem_i / cap_max⌉ summed over customers: the visit/vehicle lower bound the
/// min-visit and min-vehicle families share.
pub fn total_min_visits<S: Scalar>(inst: &Instance<S>, fleet: &Fleet<S>) -> i64 {
    let cap_max = fleet.cap_max(inst);
    (1..inst.n_locations())
        .map(|i| inst.customer_total_demand(i).div_ceil(cap_max))
        .sum()
}

/// Clamped rhs of the stable minimum-vehicle row: max(0, Σ_t F_t − Σ_i ⌈dem_i/cap_max⌉).
pub fn stable_min_vehicles_rhs<S: Scalar>(inst: &Instance<S>, fleet: &Fleet<S>) -> i64 {
    (fleet.len() as i64 - total_min_visits(inst, fleet)).max(0)
}

/// Lower bound on vehicles that stay at the depot:
/// max(0, |fleet| − Σ_i ⌈dem_i / cap_min⌉).
pub fn max_vehicles_bound<S: Scalar>(inst: &Instance<S>, fleet: &Fleet<S>) -> i64 {
    let cap_min = fleet.cap_min(inst);
    let visits: i64 = (1..inst.n_locations())
        .map(|i| inst.customer_total_demand(i).div_ceil(cap_min))
        .sum();
    (fleet.len() as i64 - visits).max(0)
}

/// Consecutive (previous, current) vehicle pairs a label-symmetry chain may
/// constrain: within pools for stable fleets, global for flexible.
fn chain_pairs<S: Scalar>(fleet: &Fleet<S>) -> Vec<(usize, usize)> {
    match fleet {
        Fleet::Stable { pools, .. } => pools
            .iter()
            .flat_map(|p| (p.start + 1..p.start + p.count).map(|v| (v - 1, v)))
            .collect(),
        Fleet::Flexible { count } => (1..*count).map(|v| (v - 1, v)).collect(),
    }
}

/// Add every enabled valid-cut family; returns the number of rows added.
pub fn apply_valid_cuts<S: Scalar>(built: &mut BuiltModel<S>) -> Result<usize, StrengthenError> {
    let config = built.strengthen.clone();
    let inst = built.instance.clone();
    let fleet = built.fleet.clone();
    let cat = &built.catalog;
    let model = &mut built.model;
    let n_locs = inst.n_locations();
    let n_vehicles = fleet.len();
    let mut added = 0usize;

    if config.min_visits {
        let cap_max = fleet.cap_max(&inst);
        for i in 1..n_locs {
            let rhs = inst.customer_total_demand(i).div_ceil(cap_max);
            let mut row: Vec<(VarId, S)> = Vec::new();
            for v in 0..n_vehicles {
                for id in cat.arcs_into(v, i) {
                    row.push((id, S::one()));
                }
            }
            model.add_linear_constraint(row, Sense::Ge, S::from_units(rhs), format!("min_visits[i={i}]"))?;
            added += 1;
        }
    }

    if config.min_vehicles {
        match fleet {
            Fleet::Stable { .. } => {
                let rhs = stable_min_vehicles_rhs(&inst, &fleet);
                let row: Vec<(VarId, S)> = (0..n_vehicles).map(|v| (cat.u(v), S::one())).collect();
                model.add_linear_constraint(row, Sense::Le, S::from_units(rhs), "min_vehicles")?;
                added += 1;
            }
            Fleet::Flexible { .. } => {
                for k in 0..inst.n_commodities() {
                    let mut row: Vec<(VarId, S)> = Vec::new();
                    for v in 0..n_vehicles {
                        for (t, ty) in inst.vehicle_types.iter().enumerate() {
                            row.push((cat.z(v, t), ty.capacity.to_scalar()));
                        }
                    }
                    let rhs = inst.commodity_total_demand(k).to_scalar();
                    model.add_linear_constraint(row, Sense::Ge, rhs, format!("min_vehicles[k={}]", inst.commodities[k]))?;
                    added += 1;
                }
            }
        }
    }

    if config.max_vehicles {
        let v_dep = max_vehicles_bound(&inst, &fleet);
        if v_dep > 0 {
            let row: Vec<(VarId, S)> = (0..n_vehicles).map(|v| (cat.u(v), S::one())).collect();
            model.add_linear_constraint(row, Sense::Ge, S::from_units(v_dep), "max_vehicles")?;
            added += 1;
        }
    }

    if config.fractional_subtour {
        // customer-to-customer arcs only: entering j from i forces leaving j
        // towards some l != i (possibly the depot)
        for v in 0..n_vehicles {
            for i in 1..n_locs {
                for j in 1..n_locs {
                    if i == j {
                        continue;
                    }
                    match &fleet {
                        Fleet::Stable { .. } => {
                            let mut row: Vec<(VarId, S)> = vec![(cat.x(v, i, j).unwrap(), S::one())];
                            for l in 0..n_locs {
                                if l != i && l != j {
                                    row.push((cat.x(v, j, l).unwrap(), -S::one()));
                                }
                            }
                            model.add_linear_constraint(row, Sense::Le, S::zero(), format!("frac_subtour[v={v},i={i},j={j}]"))?;
                            added += 1;
                        }
                        Fleet::Flexible { .. } => {
                            for t in 0..inst.vehicle_types.len() {
                                let mut row: Vec<(VarId, S)> = vec![(cat.x_t(v, t, i, j).unwrap(), S::one())];
                                for l in 0..n_locs {
                                    if l != i && l != j {
                                        row.push((cat.x_t(v, t, j, l).unwrap(), -S::one()));
                                    }
                                }
                                model.add_linear_constraint(row, Sense::Le, S::zero(), format!("frac_subtour[v={v},t={t},i={i},j={j}]"))?;
                                added += 1;
                            }
                        }
                    }
                }
            }
        }
    }

    if config.depot_outdegree {
        for v in 0..n_vehicles {
            let mut row: Vec<(VarId, S)> = cat
                .arcs_out_of(v, DEPOT)
                .into_iter()
                .map(|id| (id, S::one()))
                .collect();
            row.push((cat.u(v), S::one()));
            model.add_linear_constraint(row, Sense::Eq, S::one(), format!("depot_exit[v={v}]"))?;
            added += 1;
        }
    }

    if config.single_visit {
        for v in 0..n_vehicles {
            for i in 1..n_locs {
                let out: Vec<(VarId, S)> = cat.arcs_out_of(v, i).into_iter().map(|id| (id, S::one())).collect();
                model.add_linear_constraint(out, Sense::Le, S::one(), format!("single_exit[v={v},i={i}]"))?;
                let inn: Vec<(VarId, S)> = cat.arcs_into(v, i).into_iter().map(|id| (id, S::one())).collect();
                model.add_linear_constraint(inn, Sense::Le, S::one(), format!("single_entry[v={v},i={i}]"))?;
                added += 2;
            }
        }
    }

    Ok(added)
}

/// Add every enabled symmetry family; returns the number of rows added.
pub fn apply_symmetry<S: Scalar>(built: &mut BuiltModel<S>) -> Result<usize, StrengthenError> {
    let config = built.strengthen.clone();
    if config.total_load && built.kind.routing != RoutingKind::Commodity {
        return Err(StrengthenError::TotalLoadNeedsCommodity);
    }
    if config.fleet_order && built.kind.fleet != FleetKind::Flexible {
        return Err(StrengthenError::FleetOrderNeedsFlexible);
    }

    let inst = built.instance.clone();
    let fleet = built.fleet.clone();
    let cat = &built.catalog;
    let model = &mut built.model;
    let n_locs = inst.n_locations();
    let n_types = inst.vehicle_types.len();
    let n_vehicles = fleet.len();
    let mut added = 0usize;

    if config.usage_order {
        // unused vehicles form a suffix of each chain: u[prev] <= u[v]
        for (prev, v) in chain_pairs(&fleet) {
            model.add_linear_constraint(
                vec![(cat.u(prev), S::one()), (cat.u(v), -S::one())],
                Sense::Le,
                S::zero(),
                format!("usage_order[v={v}]"),
            )?;
            added += 1;
        }
    }

    if config.visit_order {
        // vehicle v may enter customer j only if its predecessor entered some
        // customer l <= j (rows only for entered customers; a depot row would
        // forbid closing the route)
        for (prev, v) in chain_pairs(&fleet) {
            for j in 1..n_locs {
                for i in 0..n_locs {
                    if i == j {
                        continue;
                    }
                    match &fleet {
                        Fleet::Stable { .. } => {
                            let mut row: Vec<(VarId, S)> = Vec::new();
                            for l in 1..=j {
                                for h in 0..n_locs {
                                    if h != l {
                                        row.push((cat.x(prev, h, l).unwrap(), S::one()));
                                    }
                                }
                            }
                            row.push((cat.x(v, i, j).unwrap(), -S::one()));
                            model.add_linear_constraint(row, Sense::Ge, S::zero(), format!("visit_order[v={v},i={i},j={j}]"))?;
                            added += 1;
                        }
                        Fleet::Flexible { .. } => {
                            for t in 0..n_types {
                                let mut row: Vec<(VarId, S)> = Vec::new();
                                for tau in 0..=t {
                                    row.push((cat.z(prev, tau), S::one()));
                                }
                                for l in 1..=j {
                                    for h in 0..n_locs {
                                        if h != l {
                                            row.push((cat.x_t(prev, t, h, l).unwrap(), S::one()));
                                        }
                                    }
                                }
                                row.push((cat.x_t(v, t, i, j).unwrap(), -S::one()));
                                model.add_linear_constraint(
                                    row,
                                    Sense::Ge,
                                    S::zero(),
                                    format!("visit_order[v={v},t={t},i={i},j={j}]"),
                                )?;
                                added += 1;
                            }
                        }
                    }
                }
            }
        }
    }

    if config.fleet_order {
        // types are nondecreasing along the vehicle sequence
        for v in 1..n_vehicles {
            for t in 0..n_types {
                let mut row: Vec<(VarId, S)> = (0..=t).map(|tau| (cat.z(v - 1, tau), S::one())).collect();
                row.push((cat.z(v, t), -S::one()));
                model.add_linear_constraint(row, Sense::Ge, S::zero(), format!("fleet_order[v={v},t={t}]"))?;
                added += 1;
            }
        }
    }

    if config.customer_assignment {
        if let Some(fc) = inst.farthest_customer() {
            match &fleet {
                Fleet::Stable { pools, .. } => {
                    // at least one of the first vehicles of each pool enters
                    // the farthest customer
                    let mut row: Vec<(VarId, S)> = Vec::new();
                    for p in pools {
                        for id in cat.arcs_into(p.start, fc) {
                            row.push((id, S::one()));
                        }
                    }
                    model.add_linear_constraint(row, Sense::Ge, S::one(), "farthest_customer")?;
                    added += 1;
                }
                Fleet::Flexible { .. } => {
                    if config.fleet_order || config.visit_order {
                        // those families force nondecreasing types along the
                        // sequence, and pinning vehicle 0 to the farthest
                        // customer clashes with that whenever the customer is
                        // only served by a non-minimal type; fall back to the
                        // aggregate visit form
                        let mut row: Vec<(VarId, S)> = Vec::new();
                        for v in 0..n_vehicles {
                            for id in cat.arcs_into(v, fc) {
                                row.push((id, S::one()));
                            }
                        }
                        model.add_linear_constraint(row, Sense::Ge, S::one(), "farthest_customer")?;
                    } else {
                        let row: Vec<(VarId, S)> =
                            cat.arcs_into(0, fc).into_iter().map(|id| (id, S::one())).collect();
                        model.add_linear_constraint(row, Sense::Eq, S::one(), "farthest_customer")?;
                    }
                    added += 1;
                }
            }
        }
    }

    if config.total_load {
        // vehicles leave the depot fully loaded; conditioned on use so unused
        // vehicles stay feasible
        for v in 0..n_vehicles {
            match &fleet {
                Fleet::Stable { vehicles, .. } => {
                    let cap = vehicles[v].capacity.to_scalar::<S>();
                    let mut row: Vec<(VarId, S)> = Vec::new();
                    for k in 0..inst.n_commodities() {
                        for j in 1..n_locs {
                            if let Some(f) = cat.f(v, k, DEPOT, j) {
                                row.push((f, S::one()));
                            }
                        }
                    }
                    row.push((cat.u(v), cap));
                    model.add_linear_constraint(row, Sense::Eq, cap, format!("total_load[v={v}]"))?;
                    added += 1;
                }
                Fleet::Flexible { .. } => {
                    // sum f >= cap(z) - cap_max * u  and  sum f <= cap(z)
                    let cap_max = fleet.cap_max(&inst).to_scalar::<S>();
                    let mut fsum: Vec<(VarId, S)> = Vec::new();
                    for k in 0..inst.n_commodities() {
                        for j in 1..n_locs {
                            if let Some(f) = cat.f(v, k, DEPOT, j) {
                                fsum.push((f, S::one()));
                            }
                        }
                    }
                    let mut lo = fsum.clone();
                    for (t, ty) in inst.vehicle_types.iter().enumerate() {
                        lo.push((cat.z(v, t), -ty.capacity.to_scalar::<S>()));
                    }
                    lo.push((cat.u(v), cap_max));
                    model.add_linear_constraint(lo, Sense::Ge, S::zero(), format!("total_load[v={v}]"))?;
                    let mut hi = fsum;
                    for (t, ty) in inst.vehicle_types.iter().enumerate() {
                        hi.push((cat.z(v, t), -ty.capacity.to_scalar::<S>()));
                    }
                    model.add_linear_constraint(hi, Sense::Le, S::zero(), format!("total_load_ub[v={v}]"))?;
                    added += 2;
                }
            }
        }
    }

    Ok(added)
}

/// Re-index customers so farther customers (from the depot) get smaller
/// indices; ties keep the original id order. Distances are permuted, not
/// recomputed, so loaded matrices survive exactly.
pub fn reorder_customers_farthest_first<S: Scalar>(inst: &Instance<S>) -> Instance<S> {
    let n = inst.n_customers();
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by(|&a, &b| {
        inst.dist(DEPOT, b)
            .partial_cmp(&inst.dist(DEPOT, a))
            .unwrap()
            .then(inst.customers[a - 1].id.cmp(&inst.customers[b - 1].id))
    });

    let mut customers = Vec::with_capacity(n);
    for (new_pos, &old_loc) in order.iter().enumerate() {
        let mut c = inst.customers[old_loc - 1].clone();
        c.id = new_pos + 1;
        customers.push(c);
    }

    let loc_map: Vec<usize> = std::iter::once(DEPOT).chain(order.iter().copied()).collect();
    let n_locs = inst.n_locations();
    let mut dist = vec![vec![S::zero(); n_locs]; n_locs];
    for (a, row) in dist.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = inst.dist(loc_map[a], loc_map[b]);
        }
    }

    Instance {
        depot: inst.depot,
        customers,
        commodities: inst.commodities.clone(),
        vehicle_types: inst.vehicle_types.clone(),
        dist,
        scale: inst.scale,
        fleet_spec: inst.fleet_spec.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::load_instance;

    fn three_customer_doc() -> &'static str {
        r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [
                {"id": 1, "x": 5.0, "y": 0.0, "demand": {"ambient": 4}},
                {"id": 2, "x": 9.0, "y": 0.0, "demand": {"ambient": 6}},
                {"id": 3, "x": 2.0, "y": 0.0, "demand": {"ambient": 5}}
            ],
            "commodities": ["ambient"],
            "vehicle_types": [
                {"id": "truck", "capacity": 15, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#
    }

    #[test]
    fn reorder_sorts_by_decreasing_depot_distance() {
        let inst: Instance<f64> = load_instance(three_customer_doc()).unwrap();
        let out = reorder_customers_farthest_first(&inst);
        // distances (5, 9, 2) for ids (1, 2, 3): new order is old (2, 1, 3)
        assert_eq!(out.customers[0].x, 9.0);
        assert_eq!(out.customers[1].x, 5.0);
        assert_eq!(out.customers[2].x, 2.0);
        assert_eq!(out.customers.iter().map(|c| c.id).collect::<Vec<_>>(), vec![1, 2, 3]);
        // permuted matrix matches the coordinates
        assert_eq!(out.dist(DEPOT, 1), 9.0);
        assert_eq!(out.dist(1, 2), 4.0);
    }

    #[test]
    fn reorder_breaks_ties_by_original_id() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [
                {"id": 1, "x": 3.0, "y": 0.0, "demand": {"ambient": 4}},
                {"id": 2, "x": 0.0, "y": 3.0, "demand": {"ambient": 6}}
            ],
            "commodities": ["ambient"],
            "vehicle_types": [
                {"id": "truck", "capacity": 15, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#;
        let inst: Instance<f64> = load_instance(doc).unwrap();
        let out = reorder_customers_farthest_first(&inst);
        assert_eq!(out.customers[0].x, 3.0, "equal distances keep original order");
        assert_eq!(out.customers[1].y, 3.0);
    }

    #[test]
    fn min_visit_ceiling_arithmetic() {
        // dem 35, cap_max 15 -> 3
        use crate::quantity::Qty;
        assert_eq!(Qty(35).div_ceil(Qty(15)), 3);
    }

    #[test]
    fn stable_min_vehicles_rhs_matches_hand_arithmetic() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [
                {"id": 1, "x": 1.0, "y": 0.0, "demand": {"ambient": 20}},
                {"id": 2, "x": 2.0, "y": 0.0, "demand": {"ambient": 11}},
                {"id": 3, "x": 3.0, "y": 0.0, "demand": {"ambient": 10}}
            ],
            "commodities": ["ambient"],
            "fleet": {"mode": "stable", "counts": [5]},
            "vehicle_types": [
                {"id": "truck", "capacity": 15, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#;
        let inst: Instance<f64> = load_instance(doc).unwrap();
        let fleet = crate::instance::stable_fleet_from_counts(&inst, &[5]).unwrap();
        // ceilings: 20/15 -> 2, 11/15 -> 1, 10/15 -> 1; sum 4?? choose demands
        // so the sum is 3: 20 -> 2, 11 -> 1 ... adjust expectations instead
        assert_eq!(total_min_visits(&inst, &fleet), 4);
        assert_eq!(stable_min_vehicles_rhs(&inst, &fleet), 1);
    }

    #[test]
    fn min_vehicles_rhs_clamps_at_zero() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [
                {"id": 1, "x": 1.0, "y": 0.0, "demand": {"ambient": 50}},
                {"id": 2, "x": 2.0, "y": 0.0, "demand": {"ambient": 50}}
            ],
            "commodities": ["ambient"],
            "fleet": {"mode": "stable", "counts": [3]},
            "vehicle_types": [
                {"id": "truck", "capacity": 15, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#;
        let inst: Instance<f64> = load_instance(doc).unwrap();
        let fleet = crate::instance::stable_fleet_from_counts(&inst, &[3]).unwrap();
        assert_eq!(total_min_visits(&inst, &fleet), 8);
        assert_eq!(stable_min_vehicles_rhs(&inst, &fleet), 0);
    }

    #[test]
    fn max_vehicles_bound_with_unequal_caps() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [{"id": 1, "x": 1.0, "y": 0.0, "demand": {"ambient": 12}}],
            "commodities": ["ambient"],
            "fleet": {"mode": "stable", "counts": [2, 3]},
            "vehicle_types": [
                {"id": "big", "capacity": 30, "cost_per_km": 3.0, "compatible": ["ambient"]},
                {"id": "small", "capacity": 10, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#;
        let inst: Instance<f64> = load_instance(doc).unwrap();
        let fleet = crate::instance::stable_fleet_from_counts(&inst, &[2, 3]).unwrap();
        // cap_min 10, ceil(12/10) = 2, fleet 5 -> at least 3 stay home
        assert_eq!(max_vehicles_bound(&inst, &fleet), 3);
    }
}
