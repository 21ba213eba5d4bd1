//! Builders for the four complete models: stable/flexible fleet crossed with
//! commodity/vehicle-flow routing, exposing a symbol catalogue from model
//! families (x, y, u, z, f) to IR variable ids.

use thiserror::Error;

use crate::instance::{Fleet, FleetError, Instance};
use crate::mip::{LazyHook, Model, ModelError, Sense, VarId};
use crate::scalar::Scalar;
use crate::strengthen::{self, StrengthenConfig, StrengthenError};

pub const PRIORITY_USAGE: i32 = 100;
pub const PRIORITY_TYPE: i32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FleetKind {
    Stable,
    Flexible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoutingKind {
    Commodity,
    Vehicle,
}

/// One of the four model kinds, abbreviated "sc", "sv", "fc", "ff" (first
/// letter fleet, second routing).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelKind {
    pub fleet: FleetKind,
    pub routing: RoutingKind,
}

impl ModelKind {
    pub const SC: ModelKind = ModelKind { fleet: FleetKind::Stable, routing: RoutingKind::Commodity };
    pub const SV: ModelKind = ModelKind { fleet: FleetKind::Stable, routing: RoutingKind::Vehicle };
    pub const FC: ModelKind = ModelKind { fleet: FleetKind::Flexible, routing: RoutingKind::Commodity };
    pub const FF: ModelKind = ModelKind { fleet: FleetKind::Flexible, routing: RoutingKind::Vehicle };

    pub fn all() -> [ModelKind; 4] {
        [Self::SC, Self::SV, Self::FC, Self::FF]
    }

    pub fn code(&self) -> &'static str {
        match (self.fleet, self.routing) {
            (FleetKind::Stable, RoutingKind::Commodity) => "sc",
            (FleetKind::Stable, RoutingKind::Vehicle) => "sv",
            (FleetKind::Flexible, RoutingKind::Commodity) => "fc",
            (FleetKind::Flexible, RoutingKind::Vehicle) => "ff",
        }
    }

    pub fn parse(code: &str) -> Option<ModelKind> {
        match code {
            "sc" => Some(Self::SC),
            "sv" => Some(Self::SV),
            "fc" => Some(Self::FC),
            "ff" => Some(Self::FF),
            _ => None,
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Bidirectional index between model families with their subscripts and IR
/// variable ids. Absent combinations (incompatible commodities, self-loops)
/// map to None.
#[derive(Debug, Clone)]
pub struct VariableCatalog {
    pub n_locs: usize,
    pub n_comms: usize,
    pub n_types: usize,
    pub n_vehicles: usize,
    stable: bool,
    x_stable: Vec<Option<VarId>>, // [v][i][j]
    x_flex: Vec<Option<VarId>>,   // [v][t][i][j]
    y: Vec<Option<VarId>>,        // [v][i-1][k]
    u: Vec<VarId>,
    z: Vec<VarId>,                // [v][t], flexible only
    f: Vec<Option<VarId>>,        // [v][k][i][j], commodity routing only
}

impl VariableCatalog {
    pub fn is_stable(&self) -> bool {
        self.stable
    }

    /// Arc-use variable of a stable model.
    pub fn x(&self, v: usize, i: usize, j: usize) -> Option<VarId> {
        debug_assert!(self.stable);
        self.x_stable[(v * self.n_locs + i) * self.n_locs + j]
    }

    /// Arc-use variable on a type layer of a flexible model.
    pub fn x_t(&self, v: usize, t: usize, i: usize, j: usize) -> Option<VarId> {
        debug_assert!(!self.stable);
        self.x_flex[((v * self.n_types + t) * self.n_locs + i) * self.n_locs + j]
    }

    /// All arc variables of vehicle `v` entering location `j` (all layers in
    /// flexible mode).
    pub fn arcs_into(&self, v: usize, j: usize) -> Vec<VarId> {
        let mut out = Vec::new();
        for i in 0..self.n_locs {
            if i == j {
                continue;
            }
            if self.stable {
                out.extend(self.x(v, i, j));
            } else {
                for t in 0..self.n_types {
                    out.extend(self.x_t(v, t, i, j));
                }
            }
        }
        out
    }

    pub fn arcs_out_of(&self, v: usize, i: usize) -> Vec<VarId> {
        let mut out = Vec::new();
        for j in 0..self.n_locs {
            if i == j {
                continue;
            }
            if self.stable {
                out.extend(self.x(v, i, j));
            } else {
                for t in 0..self.n_types {
                    out.extend(self.x_t(v, t, i, j));
                }
            }
        }
        out
    }

    /// Every arc variable of a vehicle (all layers).
    pub fn all_arcs(&self, v: usize) -> Vec<VarId> {
        let mut out = Vec::new();
        for i in 0..self.n_locs {
            for j in 0..self.n_locs {
                if i == j {
                    continue;
                }
                if self.stable {
                    out.extend(self.x(v, i, j));
                } else {
                    for t in 0..self.n_types {
                        out.extend(self.x_t(v, t, i, j));
                    }
                }
            }
        }
        out
    }

    /// Delivery variable; None when the vehicle is incompatible with `k`.
    pub fn y(&self, v: usize, i: usize, k: usize) -> Option<VarId> {
        self.y[(v * (self.n_locs - 1) + (i - 1)) * self.n_comms + k]
    }

    pub fn u(&self, v: usize) -> VarId {
        self.u[v]
    }

    pub fn z(&self, v: usize, t: usize) -> VarId {
        debug_assert!(!self.stable);
        self.z[v * self.n_types + t]
    }

    pub fn has_z(&self) -> bool {
        !self.z.is_empty()
    }

    pub fn has_f(&self) -> bool {
        self.f.iter().any(|e| e.is_some())
    }

    pub fn n_f_vars(&self) -> usize {
        self.f.iter().filter(|e| e.is_some()).count()
    }

    /// Commodity-flow variable; None if absent (incompatible k or vehicle-flow
    /// routing).
    pub fn f(&self, v: usize, k: usize, i: usize, j: usize) -> Option<VarId> {
        if self.f.is_empty() {
            return None;
        }
        self.f[((v * self.n_comms + k) * self.n_locs + i) * self.n_locs + j]
    }
}

/// A finished model with its catalogue, kind, fleet, the (possibly reordered)
/// instance it was built from, and the strengthening applied to it.
#[derive(Debug, Clone)]
pub struct BuiltModel<S> {
    pub model: Model<S>,
    pub catalog: VariableCatalog,
    pub kind: ModelKind,
    pub fleet: Fleet<S>,
    pub instance: Instance<S>,
    pub strengthen: StrengthenConfig,
}

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub strengthen: StrengthenConfig,
    /// Extra vehicles per stable pool beyond the demand-driven count.
    pub stable_slack: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { strengthen: StrengthenConfig::none(), stable_slack: 1 }
    }
}

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("commodity {commodity}: compatible fleet capacity {capacity} below demand {demand}")]
    InsufficientCapacity { commodity: String, capacity: i64, demand: i64 },
    #[error("total fleet capacity {capacity} below total demand {demand}")]
    InsufficientTotalCapacity { capacity: i64, demand: i64 },
    #[error(transparent)]
    Fleet(#[from] FleetError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Strengthen(#[from] StrengthenError),
}

/// Concretize the fleet for a model kind: stable pools from the document spec
/// or demand-driven sizing, flexible count from the spec or the smallest-truck
/// bound.
pub fn make_fleet<S: Scalar>(
    inst: &Instance<S>,
    kind: FleetKind,
    stable_slack: usize,
) -> Result<Fleet<S>, FleetError> {
    use crate::instance::{default_commodity_assignment, size_flexible_fleet, size_stable_fleet, stable_fleet_from_counts, FleetSpec};
    match kind {
        FleetKind::Stable => match &inst.fleet_spec {
            Some(FleetSpec::Stable { counts }) => stable_fleet_from_counts(inst, counts),
            _ => {
                let assignment = default_commodity_assignment(inst);
                size_stable_fleet(inst, &assignment, stable_slack)
            }
        },
        FleetKind::Flexible => match &inst.fleet_spec {
            Some(FleetSpec::Flexible { count }) => Ok(Fleet::Flexible { count: *count }),
            _ => Ok(Fleet::Flexible { count: size_flexible_fleet(inst) }),
        },
    }
}

fn check_capacity<S: Scalar>(inst: &Instance<S>, fleet: &Fleet<S>) -> Result<(), BuildError> {
    for k in 0..inst.n_commodities() {
        let dem = inst.commodity_total_demand(k);
        if !dem.is_positive() {
            continue;
        }
        let cap = fleet.compatible_capacity(inst, k);
        if cap < dem {
            return Err(BuildError::InsufficientCapacity {
                commodity: inst.commodities[k].clone(),
                capacity: cap.units(),
                demand: dem.units(),
            });
        }
    }
    let total_cap = match fleet {
        Fleet::Stable { vehicles, .. } => vehicles.iter().map(|v| v.capacity).sum(),
        Fleet::Flexible { count } => fleet.cap_max(inst) * (*count as i64),
    };
    if total_cap < inst.total_demand() {
        return Err(BuildError::InsufficientTotalCapacity {
            capacity: total_cap.units(),
            demand: inst.total_demand().units(),
        });
    }
    Ok(())
}

/// Create the variable families for a model kind, with objective coefficients
/// on the arc variables and branching priorities on u (100) and z (50).
pub fn create_catalog<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    kind: ModelKind,
    model: &mut Model<S>,
) -> Result<VariableCatalog, BuildError> {
    let n_locs = inst.n_locations();
    let n_comms = inst.n_commodities();
    let n_types = inst.vehicle_types.len();
    let n_vehicles = fleet.len();
    let stable = kind.fleet == FleetKind::Stable;
    let cap_max = fleet.cap_max(inst);

    let mut cat = VariableCatalog {
        n_locs,
        n_comms,
        n_types,
        n_vehicles,
        stable,
        x_stable: Vec::new(),
        x_flex: Vec::new(),
        y: vec![None; n_vehicles * (n_locs - 1) * n_comms],
        u: Vec::with_capacity(n_vehicles),
        z: Vec::new(),
        f: Vec::new(),
    };

    if stable {
        cat.x_stable = vec![None; n_vehicles * n_locs * n_locs];
        for v in 0..n_vehicles {
            let cost = fleet.vehicle(v).cost_per_km;
            for (i, j) in inst.arcs() {
                let id = model.add_binary(cost * inst.dist(i, j), 0, format!("x[{v},{i},{j}]"));
                cat.x_stable[(v * n_locs + i) * n_locs + j] = Some(id);
            }
        }
    } else {
        cat.x_flex = vec![None; n_vehicles * n_types * n_locs * n_locs];
        for v in 0..n_vehicles {
            for t in 0..n_types {
                let cost = inst.vehicle_types[t].cost_per_km;
                for (i, j) in inst.arcs() {
                    let id = model.add_binary(cost * inst.dist(i, j), 0, format!("x[{v},{t},{i},{j}]"));
                    cat.x_flex[((v * n_types + t) * n_locs + i) * n_locs + j] = Some(id);
                }
            }
        }
    }

    for v in 0..n_vehicles {
        for i in 1..n_locs {
            for k in 0..n_comms {
                let make = if stable { fleet.vehicle(v).compatible[k] } else { true };
                if make {
                    let ub = if stable { fleet.vehicle(v).capacity } else { cap_max };
                    let id = model.add_continuous(S::zero(), ub.to_scalar(), S::zero(), format!("y[{v},{i},{k}]"))?;
                    cat.y[(v * (n_locs - 1) + (i - 1)) * n_comms + k] = Some(id);
                }
            }
        }
    }

    for v in 0..n_vehicles {
        cat.u.push(model.add_binary(S::zero(), PRIORITY_USAGE, format!("u[{v}]")));
    }

    if !stable {
        for v in 0..n_vehicles {
            for t in 0..n_types {
                cat.z.push(model.add_binary(S::zero(), PRIORITY_TYPE, format!("z[{v},{t}]")));
            }
        }
    }

    if kind.routing == RoutingKind::Commodity {
        cat.f = vec![None; n_vehicles * n_comms * n_locs * n_locs];
        for v in 0..n_vehicles {
            for k in 0..n_comms {
                let make = if stable { fleet.vehicle(v).compatible[k] } else { true };
                if !make {
                    continue;
                }
                let ub = if stable { fleet.vehicle(v).capacity } else { cap_max };
                for (i, j) in inst.arcs() {
                    let id = model.add_continuous(S::zero(), ub.to_scalar(), S::zero(), format!("f[{v},{k},{i},{j}]"))?;
                    cat.f[((v * n_comms + k) * n_locs + i) * n_locs + j] = Some(id);
                }
            }
        }
    }

    Ok(cat)
}

/// Core rows shared by every model: demand satisfaction, vehicle capacity
/// (stable; flexible capacity is type-linked in the fleet rows), usage
/// linking, and the delivery/visit link.
pub fn build_core<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    catalog: &VariableCatalog,
    model: &mut Model<S>,
) -> Result<(), BuildError> {
    let n_locs = inst.n_locations();
    let n_comms = inst.n_commodities();
    let n_vehicles = fleet.len();
    let n_arcs = S::from_usize(inst.n_arcs()).unwrap();

    // the printed usage row conflicts with the depot-exit family; we link arc
    // use to 1 - u so u = 1 marks an unused vehicle
    log::debug!("usage rows use the complement form: sum(x) <= |E| * (1 - u)");

    for i in 1..n_locs {
        for k in 0..n_comms {
            let row: Vec<(VarId, S)> = (0..n_vehicles)
                .filter_map(|v| catalog.y(v, i, k).map(|id| (id, S::one())))
                .collect();
            let dem = inst.demand(i, k);
            if row.is_empty() {
                // no compatible vehicle; only legal when there is no demand
                debug_assert!(dem.is_zero());
                continue;
            }
            model.add_linear_constraint(row, Sense::Eq, dem.to_scalar(), format!("demand[i={i},k={}]", inst.commodities[k]))?;
        }
    }

    if fleet.is_stable() {
        for v in 0..n_vehicles {
            let mut row: Vec<(VarId, S)> = Vec::new();
            for i in 1..n_locs {
                for k in 0..n_comms {
                    if let Some(id) = catalog.y(v, i, k) {
                        row.push((id, S::one()));
                    }
                }
            }
            model.add_linear_constraint(row, Sense::Le, fleet.vehicle(v).capacity.to_scalar(), format!("capacity[v={v}]"))?;
        }
    }

    for v in 0..n_vehicles {
        let mut row: Vec<(VarId, S)> = catalog.all_arcs(v).into_iter().map(|id| (id, S::one())).collect();
        row.push((catalog.u(v), n_arcs));
        model.add_linear_constraint(row, Sense::Le, n_arcs, format!("usage[v={v}]"))?;
    }

    for v in 0..n_vehicles {
        for i in 1..n_locs {
            for k in 0..n_comms {
                let Some(y) = catalog.y(v, i, k) else { continue };
                let dem = inst.demand(i, k).to_scalar::<S>();
                let mut row: Vec<(VarId, S)> = vec![(y, S::one())];
                for id in catalog.arcs_into(v, i) {
                    row.push((id, -dem));
                }
                model.add_linear_constraint(row, Sense::Le, S::zero(), format!("visited[v={v},i={i},k={}]", inst.commodities[k]))?;
            }
        }
    }

    Ok(())
}

/// Flexible-fleet rows: one type per vehicle, type-linked capacity and
/// compatibility, and the edge/type link. Stable fleets need nothing here
/// (compatibility is implicit in the catalogue).
pub fn build_fleet_rows<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    catalog: &VariableCatalog,
    model: &mut Model<S>,
) -> Result<(), BuildError> {
    if fleet.is_stable() {
        return Ok(());
    }
    let n_locs = inst.n_locations();
    let n_comms = inst.n_commodities();
    let n_types = inst.vehicle_types.len();
    let n_vehicles = fleet.len();
    let n_arcs = S::from_usize(inst.n_arcs()).unwrap();

    for v in 0..n_vehicles {
        let row: Vec<(VarId, S)> = (0..n_types).map(|t| (catalog.z(v, t), S::one())).collect();
        model.add_linear_constraint(row, Sense::Eq, S::one(), format!("type_choice[v={v}]"))?;
    }

    for v in 0..n_vehicles {
        for k in 0..n_comms {
            let mut row: Vec<(VarId, S)> = Vec::new();
            for i in 1..n_locs {
                if let Some(y) = catalog.y(v, i, k) {
                    row.push((y, S::one()));
                }
            }
            for t in 0..n_types {
                let ty = &inst.vehicle_types[t];
                if ty.compatible[k] {
                    row.push((catalog.z(v, t), -ty.capacity.to_scalar::<S>()));
                }
            }
            model.add_linear_constraint(row, Sense::Le, S::zero(), format!("type_compat[v={v},k={}]", inst.commodities[k]))?;
        }
    }

    for v in 0..n_vehicles {
        let mut row: Vec<(VarId, S)> = Vec::new();
        for i in 1..n_locs {
            for k in 0..n_comms {
                if let Some(y) = catalog.y(v, i, k) {
                    row.push((y, S::one()));
                }
            }
        }
        for t in 0..n_types {
            row.push((catalog.z(v, t), -inst.vehicle_types[t].capacity.to_scalar::<S>()));
        }
        model.add_linear_constraint(row, Sense::Le, S::zero(), format!("type_capacity[v={v}]"))?;
    }

    for v in 0..n_vehicles {
        for t in 0..n_types {
            let mut row: Vec<(VarId, S)> = Vec::new();
            for (i, j) in inst.arcs() {
                row.push((catalog.x_t(v, t, i, j).unwrap(), S::one()));
            }
            row.push((catalog.z(v, t), -n_arcs));
            model.add_linear_constraint(row, Sense::Le, S::zero(), format!("edge_type[v={v},t={t}]"))?;
        }
    }

    Ok(())
}

/// Routing rows. Vehicle flow adds degree balance per location (per type
/// layer in flexible mode) and registers the lazy subtour hook; commodity
/// flow adds flow-difference equalities at customers and per-arc carry caps.
pub fn build_routing<S: Scalar>(
    inst: &Instance<S>,
    fleet: &Fleet<S>,
    kind: ModelKind,
    catalog: &VariableCatalog,
    model: &mut Model<S>,
) -> Result<(), BuildError> {
    let n_locs = inst.n_locations();
    let n_comms = inst.n_commodities();
    let n_types = inst.vehicle_types.len();
    let n_vehicles = fleet.len();

    match kind.routing {
        RoutingKind::Vehicle => {
            for v in 0..n_vehicles {
                if kind.fleet == FleetKind::Stable {
                    for i in 0..n_locs {
                        let mut row: Vec<(VarId, S)> = Vec::new();
                        for j in 0..n_locs {
                            if j == i {
                                continue;
                            }
                            row.push((catalog.x(v, i, j).unwrap(), S::one()));
                            row.push((catalog.x(v, j, i).unwrap(), -S::one()));
                        }
                        model.add_linear_constraint(row, Sense::Eq, S::zero(), format!("balance[v={v},i={i}]"))?;
                    }
                } else {
                    for t in 0..n_types {
                        for i in 0..n_locs {
                            let mut row: Vec<(VarId, S)> = Vec::new();
                            for j in 0..n_locs {
                                if j == i {
                                    continue;
                                }
                                row.push((catalog.x_t(v, t, i, j).unwrap(), S::one()));
                                row.push((catalog.x_t(v, t, j, i).unwrap(), -S::one()));
                            }
                            model.add_linear_constraint(row, Sense::Eq, S::zero(), format!("balance[v={v},t={t},i={i}]"))?;
                        }
                    }
                }
            }
            model.register_lazy_hook(LazyHook::SubtourElimination);
        }
        RoutingKind::Commodity => {
            for v in 0..n_vehicles {
                for i in 1..n_locs {
                    for k in 0..n_comms {
                        let Some(y) = catalog.y(v, i, k) else { continue };
                        let mut row: Vec<(VarId, S)> = Vec::new();
                        for j in 0..n_locs {
                            if j == i {
                                continue;
                            }
                            row.push((catalog.f(v, k, j, i).unwrap(), S::one()));
                            row.push((catalog.f(v, k, i, j).unwrap(), -S::one()));
                        }
                        row.push((y, -S::one()));
                        model.add_linear_constraint(row, Sense::Eq, S::zero(), format!("flow_balance[v={v},i={i},k={}]", inst.commodities[k]))?;
                    }
                }
                for (i, j) in inst.arcs() {
                    let mut row: Vec<(VarId, S)> = Vec::new();
                    for k in 0..n_comms {
                        if let Some(f) = catalog.f(v, k, i, j) {
                            row.push((f, S::one()));
                        }
                    }
                    if row.is_empty() {
                        continue;
                    }
                    if kind.fleet == FleetKind::Stable {
                        row.push((catalog.x(v, i, j).unwrap(), -fleet.vehicle(v).capacity.to_scalar::<S>()));
                    } else {
                        for t in 0..n_types {
                            row.push((catalog.x_t(v, t, i, j).unwrap(), -inst.vehicle_types[t].capacity.to_scalar::<S>()));
                        }
                    }
                    model.add_linear_constraint(row, Sense::Le, S::zero(), format!("carry[v={v},i={i},j={j}]"))?;
                }
            }
        }
    }

    Ok(())
}

/// Compose the complete model of a kind: variables, core rows, fleet rows,
/// routing rows, then the configured cut/symmetry families. The instance is
/// re-indexed farthest-first when the options ask for it.
pub fn build_model<S: Scalar>(
    inst: &Instance<S>,
    kind: ModelKind,
    options: &BuildOptions,
) -> Result<BuiltModel<S>, BuildError> {
    let inst = if options.strengthen.reorder_customers {
        strengthen::reorder_customers_farthest_first(inst)
    } else {
        inst.clone()
    };
    let fleet = make_fleet(&inst, kind.fleet, options.stable_slack)?;
    check_capacity(&inst, &fleet)?;

    let mut model = Model::new();
    let catalog = create_catalog(&inst, &fleet, kind, &mut model)?;
    build_core(&inst, &fleet, &catalog, &mut model)?;
    build_fleet_rows(&inst, &fleet, &catalog, &mut model)?;
    build_routing(&inst, &fleet, kind, &catalog, &mut model)?;

    let mut built = BuiltModel {
        model,
        catalog,
        kind,
        fleet,
        instance: inst,
        strengthen: options.strengthen.clone(),
    };
    strengthen::apply_valid_cuts(&mut built)?;
    strengthen::apply_symmetry(&mut built)?;
    built.model.freeze();
    Ok(built)
}
