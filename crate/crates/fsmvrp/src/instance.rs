//! Problem instances: depot, customers, commodities, vehicle types, distances,
//! plus loading, generation, demand aggregation, and fleet sizing.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantity::Qty;
use crate::scalar::Scalar;

pub const DEPOT: usize = 0;

/// A customer with planar coordinates (km) and a per-commodity demand vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Customer<S> {
    pub id: usize,
    pub x: S,
    pub y: S,
    /// Demand per commodity index; zero entries allowed, total must be positive.
    pub demand: Vec<Qty>,
}

impl<S> Customer<S> {
    pub fn total_demand(&self) -> Qty {
        self.demand.iter().copied().sum()
    }
}

/// A vehicle type: shared capacity across commodities, cost per unit distance,
/// and a 0/1 compatibility row over commodities.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleType<S> {
    pub name: String,
    pub capacity: Qty,
    pub cost_per_km: S,
    pub compatible: Vec<bool>,
}

/// A validated problem instance. Location 0 is the depot; customers are
/// locations 1..=n. Immutable after load, safe to share across solves.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<S> {
    pub depot: (S, S),
    pub customers: Vec<Customer<S>>,
    pub commodities: Vec<String>,
    pub vehicle_types: Vec<VehicleType<S>>,
    /// Symmetric distance matrix over locations 0..=n, zero diagonal.
    pub dist: Vec<Vec<S>>,
    /// Quantity units per 1.0 of the document's nominal unit.
    pub scale: i64,
    /// Fleet hint carried from the document, if any.
    pub fleet_spec: Option<FleetSpec>,
}

/// Fleet description as it appears in an instance document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum FleetSpec {
    Stable { counts: Vec<usize> },
    Flexible { count: usize },
}

/// One concrete vehicle of a stable fleet.
#[derive(Debug, Clone, PartialEq)]
pub struct Vehicle<S> {
    pub type_idx: usize,
    pub capacity: Qty,
    pub cost_per_km: S,
    pub compatible: Vec<bool>,
}

/// A contiguous pool of same-type vehicles inside a stable fleet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pool {
    pub type_idx: usize,
    pub start: usize,
    pub count: usize,
}

/// The concrete vehicle list. Stable fleets fix a type per vehicle (pools are
/// contiguous); flexible fleets fix only the vehicle count and leave the type
/// choice to the model.
#[derive(Debug, Clone, PartialEq)]
pub enum Fleet<S> {
    Stable { vehicles: Vec<Vehicle<S>>, pools: Vec<Pool> },
    Flexible { count: usize },
}

impl<S: Scalar> Fleet<S> {
    pub fn len(&self) -> usize {
        match self {
            Fleet::Stable { vehicles, .. } => vehicles.len(),
            Fleet::Flexible { count } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_stable(&self) -> bool {
        matches!(self, Fleet::Stable { .. })
    }

    /// Largest vehicle capacity in the fleet (stable) or over all types
    /// (flexible, where any vehicle may take any type).
    pub fn cap_max(&self, inst: &Instance<S>) -> Qty {
        match self {
            Fleet::Stable { vehicles, .. } => {
                vehicles.iter().map(|v| v.capacity).max().unwrap_or(Qty::ZERO)
            }
            Fleet::Flexible { .. } => {
                inst.vehicle_types.iter().map(|t| t.capacity).max().unwrap_or(Qty::ZERO)
            }
        }
    }

    pub fn cap_min(&self, inst: &Instance<S>) -> Qty {
        match self {
            Fleet::Stable { vehicles, .. } => {
                vehicles.iter().map(|v| v.capacity).min().unwrap_or(Qty::ZERO)
            }
            Fleet::Flexible { .. } => {
                inst.vehicle_types.iter().map(|t| t.capacity).min().unwrap_or(Qty::ZERO)
            }
        }
    }

    /// Stable-mode vehicle accessor; panics in flexible mode.
    pub fn vehicle(&self, v: usize) -> &Vehicle<S> {
        match self {
            Fleet::Stable { vehicles, .. } => &vehicles[v],
            Fleet::Flexible { .. } => panic!("flexible fleet has no fixed vehicles"),
        }
    }

    pub fn pools(&self) -> &[Pool] {
        match self {
            Fleet::Stable { pools, .. } => pools,
            Fleet::Flexible { .. } => &[],
        }
    }

    /// Pool index of a stable vehicle; 0 for every flexible vehicle.
    pub fn pool_of(&self, v: usize) -> usize {
        match self {
            Fleet::Stable { pools, .. } => pools
                .iter()
                .position(|p| v >= p.start && v < p.start + p.count)
                .expect("vehicle outside every pool"),
            Fleet::Flexible { .. } => 0,
        }
    }

    /// Total capacity compatible with commodity `k`.
    pub fn compatible_capacity(&self, inst: &Instance<S>, k: usize) -> Qty {
        match self {
            Fleet::Stable { vehicles, .. } => vehicles
                .iter()
                .filter(|v| v.compatible[k])
                .map(|v| v.capacity)
                .sum(),
            Fleet::Flexible { count } => {
                // every vehicle may take the biggest compatible type
                let best = inst
                    .vehicle_types
                    .iter()
                    .filter(|t| t.compatible[k])
                    .map(|t| t.capacity)
                    .max()
                    .unwrap_or(Qty::ZERO);
                best * (*count as i64)
            }
        }
    }
}

impl<S: Scalar> Instance<S> {
    pub fn n_customers(&self) -> usize {
        self.customers.len()
    }

    /// Number of locations including the depot.
    pub fn n_locations(&self) -> usize {
        self.customers.len() + 1
    }

    pub fn n_commodities(&self) -> usize {
        self.commodities.len()
    }

    pub fn dist(&self, i: usize, j: usize) -> S {
        self.dist[i][j]
    }

    /// Complete directed arc set on locations, no self-loops.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n_locations();
        (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
    }

    pub fn n_arcs(&self) -> usize {
        let n = self.n_locations();
        n * (n - 1)
    }

    /// Demand of customer location `i` (1-based location index) for commodity `k`.
    pub fn demand(&self, i: usize, k: usize) -> Qty {
        self.customers[i - 1].demand[k]
    }

    pub fn customer_total_demand(&self, i: usize) -> Qty {
        self.customers[i - 1].total_demand()
    }

    pub fn commodity_total_demand(&self, k: usize) -> Qty {
        self.customers.iter().map(|c| c.demand[k]).sum()
    }

    pub fn total_demand(&self) -> Qty {
        self.customers.iter().map(|c| c.total_demand()).sum()
    }

    /// Farthest customer location index from the depot; ties take the smaller id.
    pub fn farthest_customer(&self) -> Option<usize> {
        (1..self.n_locations()).max_by(|&a, &b| {
            self.dist(DEPOT, a)
                .partial_cmp(&self.dist(DEPOT, b))
                .unwrap()
                .then(b.cmp(&a))
        })
    }
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("malformed instance document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("customer {0} has zero total demand")]
    ZeroDemand(usize),
    #[error("negative demand {qty} for customer {customer}, commodity {commodity}")]
    NegativeDemand { customer: usize, commodity: String, qty: i64 },
    #[error("commodity {0} has positive demand but no compatible vehicle type")]
    NoCompatibleType(String),
}

#[derive(Debug, Error)]
pub enum FleetError {
    #[error("commodity {commodity} assigned to incompatible vehicle type {vehicle_type}")]
    IncompatibleAssignment { commodity: String, vehicle_type: String },
    #[error("fleet spec counts length {got} does not match {expected} vehicle types")]
    CountsMismatch { got: usize, expected: usize },
}

// ---------------------------------------------------------------------------
// Document schema
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct PointDoc {
    x: f64,
    y: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CustomerDoc {
    id: usize,
    x: f64,
    y: f64,
    demand: BTreeMap<String, i64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VehicleTypeDoc {
    id: String,
    capacity: i64,
    cost_per_km: f64,
    compatible: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    #[serde(default = "default_scale")]
    scale: i64,
    depot: PointDoc,
    customers: Vec<CustomerDoc>,
    commodities: Vec<String>,
    vehicle_types: Vec<VehicleTypeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fleet: Option<FleetSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dist: Option<Vec<Vec<f64>>>,
}

fn default_scale() -> i64 {
    1
}

/// Parse and validate an instance document. The distance matrix is computed
/// from coordinates when the document does not carry one.
pub fn load_instance<S: Scalar>(text: &str) -> Result<Instance<S>, InstanceError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    instance_from_doc(doc)
}

/// Serialize an instance back to its document form (canonical field order,
/// demands as integers at the declared scale).
pub fn save_instance<S: Scalar>(inst: &Instance<S>) -> String {
    let doc = InstanceDoc {
        scale: inst.scale,
        depot: PointDoc {
            x: inst.depot.0.to_f64().unwrap(),
            y: inst.depot.1.to_f64().unwrap(),
        },
        customers: inst
            .customers
            .iter()
            .map(|c| CustomerDoc {
                id: c.id,
                x: c.x.to_f64().unwrap(),
                y: c.y.to_f64().unwrap(),
                demand: inst
                    .commodities
                    .iter()
                    .zip(&c.demand)
                    .filter(|(_, q)| q.is_positive())
                    .map(|(name, q)| (name.clone(), q.units()))
                    .collect(),
            })
            .collect(),
        commodities: inst.commodities.clone(),
        vehicle_types: inst
            .vehicle_types
            .iter()
            .map(|t| VehicleTypeDoc {
                id: t.name.clone(),
                capacity: t.capacity.units(),
                cost_per_km: t.cost_per_km.to_f64().unwrap(),
                compatible: inst
                    .commodities
                    .iter()
                    .zip(&t.compatible)
                    .filter(|(_, &c)| c)
                    .map(|(name, _)| name.clone())
                    .collect(),
            })
            .collect(),
        fleet: inst.fleet_spec.clone(),
        dist: None,
    };
    serde_json::to_string_pretty(&doc).expect("instance serialization")
}

fn instance_from_doc<S: Scalar>(doc: InstanceDoc) -> Result<Instance<S>, InstanceError> {
    if doc.scale <= 0 {
        return Err(InstanceError::Schema("scale must be positive".into()));
    }
    if doc.commodities.is_empty() {
        return Err(InstanceError::Schema("no commodities declared".into()));
    }
    if doc.vehicle_types.is_empty() {
        return Err(InstanceError::Schema("no vehicle types declared".into()));
    }
    let commodity_index: BTreeMap<&str, usize> = doc
        .commodities
        .iter()
        .enumerate()
        .map(|(k, name)| (name.as_str(), k))
        .collect();
    if commodity_index.len() != doc.commodities.len() {
        return Err(InstanceError::Schema("duplicate commodity names".into()));
    }

    let mut customers = Vec::with_capacity(doc.customers.len());
    for (pos, c) in doc.customers.iter().enumerate() {
        if c.id != pos + 1 {
            return Err(InstanceError::Schema(format!(
                "customer ids must be 1..=n in order; found id {} at position {}",
                c.id,
                pos + 1
            )));
        }
        let mut demand = vec![Qty::ZERO; doc.commodities.len()];
        for (name, &qty) in &c.demand {
            let k = *commodity_index
                .get(name.as_str())
                .ok_or_else(|| InstanceError::Schema(format!("unknown commodity {name:?} in demand of customer {}", c.id)))?;
            if qty < 0 {
                return Err(InstanceError::NegativeDemand {
                    customer: c.id,
                    commodity: name.clone(),
                    qty,
                });
            }
            demand[k] = Qty(qty);
        }
        let customer = Customer {
            id: c.id,
            x: S::from_f64_lossy(c.x),
            y: S::from_f64_lossy(c.y),
            demand,
        };
        if !customer.total_demand().is_positive() {
            return Err(InstanceError::ZeroDemand(c.id));
        }
        customers.push(customer);
    }
    if customers.is_empty() {
        return Err(InstanceError::Schema("instance has no customers".into()));
    }

    let mut vehicle_types = Vec::with_capacity(doc.vehicle_types.len());
    for t in &doc.vehicle_types {
        if t.capacity <= 0 {
            return Err(InstanceError::Schema(format!("vehicle type {:?} has nonpositive capacity", t.id)));
        }
        if t.cost_per_km <= 0.0 {
            return Err(InstanceError::Schema(format!("vehicle type {:?} has nonpositive cost", t.id)));
        }
        let mut compatible = vec![false; doc.commodities.len()];
        for name in &t.compatible {
            let k = *commodity_index
                .get(name.as_str())
                .ok_or_else(|| InstanceError::Schema(format!("unknown commodity {name:?} in compatibility of type {:?}", t.id)))?;
            compatible[k] = true;
        }
        if !compatible.iter().any(|&c| c) {
            return Err(InstanceError::Schema(format!("vehicle type {:?} is compatible with nothing", t.id)));
        }
        vehicle_types.push(VehicleType {
            name: t.id.clone(),
            capacity: Qty(t.capacity),
            cost_per_km: S::from_f64_lossy(t.cost_per_km),
            compatible,
        });
    }

    for (k, name) in doc.commodities.iter().enumerate() {
        let total: Qty = customers.iter().map(|c| c.demand[k]).sum();
        if total.is_positive() && !vehicle_types.iter().any(|t| t.compatible[k]) {
            return Err(InstanceError::NoCompatibleType(name.clone()));
        }
    }

    let n = customers.len() + 1;
    let dist = match doc.dist {
        Some(matrix) => {
            if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                return Err(InstanceError::Schema(format!("distance matrix must be {n}x{n}")));
            }
            for i in 0..n {
                if matrix[i][i] != 0.0 {
                    return Err(InstanceError::Schema(format!("dist[{i}][{i}] must be 0")));
                }
                for j in 0..n {
                    if matrix[i][j] < 0.0 {
                        return Err(InstanceError::Schema(format!("dist[{i}][{j}] is negative")));
                    }
                    if matrix[i][j] != matrix[j][i] {
                        return Err(InstanceError::Schema(format!("dist[{i}][{j}] != dist[{j}][{i}]")));
                    }
                }
            }
            matrix
                .into_iter()
                .map(|row| row.into_iter().map(S::from_f64_lossy).collect())
                .collect()
        }
        None => euclidean_matrix(
            S::from_f64_lossy(doc.depot.x),
            S::from_f64_lossy(doc.depot.y),
            &customers,
        ),
    };

    Ok(Instance {
        depot: (S::from_f64_lossy(doc.depot.x), S::from_f64_lossy(doc.depot.y)),
        customers,
        commodities: doc.commodities,
        vehicle_types,
        dist,
        scale: doc.scale,
        fleet_spec: doc.fleet,
    })
}

fn euclidean_matrix<S: Scalar>(dep_x: S, dep_y: S, customers: &[Customer<S>]) -> Vec<Vec<S>> {
    let mut points = Vec::with_capacity(customers.len() + 1);
    points.push((dep_x, dep_y));
    points.extend(customers.iter().map(|c| (c.x, c.y)));
    let n = points.len();
    let mut dist = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = points[i].0 - points[j].0;
            let dy = points[i].1 - points[j].1;
            let d = (dx * dx + dy * dy).sqrt();
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    dist
}

/// Recompute the distance matrix from coordinates (used after re-indexing or
/// aggregation).
pub fn recompute_distances<S: Scalar>(inst: &mut Instance<S>) {
    inst.dist = euclidean_matrix(inst.depot.0, inst.depot.1, &inst.customers);
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// Greedily merge customers into clusters whose members lie within `radius`
/// of the cluster seed. Seeds are picked farthest-from-depot first; the
/// cluster location is the demand-weighted centroid and the cluster demand is
/// the exact per-commodity sum. Radius 0 returns the instance unchanged.
pub fn aggregate_customers<S: Scalar>(inst: &Instance<S>, radius: S) -> Instance<S> {
    assert!(radius >= S::zero(), "radius must be nonnegative");
    if radius == S::zero() || inst.customers.len() <= 1 {
        return inst.clone();
    }

    let n = inst.n_customers();
    let mut unassigned: Vec<usize> = (0..n).collect();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    while !unassigned.is_empty() {
        // seed: unassigned customer farthest from the depot, ties by smaller id
        let &seed = unassigned
            .iter()
            .max_by(|&&a, &&b| {
                inst.dist(DEPOT, a + 1)
                    .partial_cmp(&inst.dist(DEPOT, b + 1))
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .unwrap();
        let members: Vec<usize> = unassigned
            .iter()
            .copied()
            .filter(|&c| inst.dist(seed + 1, c + 1) <= radius)
            .collect();
        unassigned.retain(|c| !members.contains(c));
        clusters.push(members);
    }

    let mut customers = Vec::with_capacity(clusters.len());
    for (idx, members) in clusters.iter().enumerate() {
        let mut demand = vec![Qty::ZERO; inst.n_commodities()];
        let mut weight_sum = 0i64;
        let mut wx = S::zero();
        let mut wy = S::zero();
        for &c in members {
            let cust = &inst.customers[c];
            for (k, q) in cust.demand.iter().enumerate() {
                demand[k] += *q;
            }
            let w = cust.total_demand().units();
            weight_sum += w;
            wx = wx + cust.x * S::from_units(w);
            wy = wy + cust.y * S::from_units(w);
        }
        let w = S::from_units(weight_sum);
        customers.push(Customer {
            id: idx + 1,
            x: wx / w,
            y: wy / w,
            demand,
        });
    }

    let mut out = Instance {
        depot: inst.depot,
        customers,
        commodities: inst.commodities.clone(),
        vehicle_types: inst.vehicle_types.clone(),
        dist: Vec::new(),
        scale: inst.scale,
        fleet_spec: None,
    };
    recompute_distances(&mut out);
    out
}

// ---------------------------------------------------------------------------
// Fleet sizing
// ---------------------------------------------------------------------------

/// Tag each commodity with the cheapest vehicle type compatible with it.
pub fn default_commodity_assignment<S: Scalar>(inst: &Instance<S>) -> Vec<usize> {
    (0..inst.n_commodities())
        .map(|k| {
            inst.vehicle_types
                .iter()
                .enumerate()
                .filter(|(_, t)| t.compatible[k])
                .min_by(|(_, a), (_, b)| a.cost_per_km.partial_cmp(&b.cost_per_km).unwrap())
                .map(|(idx, _)| idx)
                .unwrap_or(0)
        })
        .collect()
}

/// Size per-type pools: F_t = ⌈(demand assigned to t) / cap_t⌉ + slack.
/// Pools are ordered most-expensive type first (refrigerated-style vehicles
/// lead), then by type index.
pub fn size_stable_fleet<S: Scalar>(
    inst: &Instance<S>,
    assignment: &[usize],
    slack: usize,
) -> Result<Fleet<S>, FleetError> {
    assert_eq!(assignment.len(), inst.n_commodities(), "assignment covers every commodity");
    for (k, &t) in assignment.iter().enumerate() {
        if inst.commodity_total_demand(k).is_positive() && !inst.vehicle_types[t].compatible[k] {
            return Err(FleetError::IncompatibleAssignment {
                commodity: inst.commodities[k].clone(),
                vehicle_type: inst.vehicle_types[t].name.clone(),
            });
        }
    }

    let mut order: Vec<usize> = (0..inst.vehicle_types.len()).collect();
    order.sort_by(|&a, &b| {
        inst.vehicle_types[b]
            .cost_per_km
            .partial_cmp(&inst.vehicle_types[a].cost_per_km)
            .unwrap()
            .then(a.cmp(&b))
    });

    let mut vehicles = Vec::new();
    let mut pools = Vec::new();
    for &t in &order {
        let class_demand: Qty = assignment
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a == t)
            .map(|(k, _)| inst.commodity_total_demand(k))
            .sum();
        let ty = &inst.vehicle_types[t];
        let count = class_demand.div_ceil(ty.capacity) as usize + slack;
        if count == 0 {
            continue;
        }
        let start = vehicles.len();
        for _ in 0..count {
            vehicles.push(Vehicle {
                type_idx: t,
                capacity: ty.capacity,
                cost_per_km: ty.cost_per_km,
                compatible: ty.compatible.clone(),
            });
        }
        pools.push(Pool { type_idx: t, start, count });
    }
    Ok(Fleet::Stable { vehicles, pools })
}

/// Build a stable fleet from explicit per-type counts (document fleet spec).
pub fn stable_fleet_from_counts<S: Scalar>(
    inst: &Instance<S>,
    counts: &[usize],
) -> Result<Fleet<S>, FleetError> {
    if counts.len() != inst.vehicle_types.len() {
        return Err(FleetError::CountsMismatch { got: counts.len(), expected: inst.vehicle_types.len() });
    }
    let mut order: Vec<usize> = (0..inst.vehicle_types.len()).collect();
    order.sort_by(|&a, &b| {
        inst.vehicle_types[b]
            .cost_per_km
            .partial_cmp(&inst.vehicle_types[a].cost_per_km)
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut vehicles = Vec::new();
    let mut pools = Vec::new();
    for &t in &order {
        if counts[t] == 0 {
            continue;
        }
        let ty = &inst.vehicle_types[t];
        let start = vehicles.len();
        for _ in 0..counts[t] {
            vehicles.push(Vehicle {
                type_idx: t,
                capacity: ty.capacity,
                cost_per_km: ty.cost_per_km,
                compatible: ty.compatible.clone(),
            });
        }
        pools.push(Pool { type_idx: t, start, count: counts[t] });
    }
    Ok(Fleet::Stable { vehicles, pools })
}

/// Maximum useful fleet size when every vehicle could be the smallest truck:
/// ⌈Σ_i dem_i / min_t cap_t⌉.
pub fn size_flexible_fleet<S: Scalar>(inst: &Instance<S>) -> usize {
    let cap_min = inst
        .vehicle_types
        .iter()
        .map(|t| t.capacity)
        .min()
        .expect("at least one vehicle type");
    inst.total_demand().div_ceil(cap_min) as usize
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum CompatSpec {
    All,
    Subset(Vec<usize>),
}

/// Blueprint for one vehicle type handed to the generator.
#[derive(Debug, Clone)]
pub struct TypeProfile {
    pub name: String,
    pub capacity: i64,
    pub cost_per_km: f64,
    pub compatible: CompatSpec,
}

/// Demand regimes. `SplitHeavy` guarantees at least one customer whose demand
/// exceeds the largest capacity, forcing split deliveries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemandProfile {
    /// Small demands, several customers per route.
    Modest,
    /// Each customer close to one full load of the biggest vehicle.
    NearTruckload,
    /// NearTruckload with a fraction of customers at nearly two full loads.
    SplitHeavy,
}

/// Two types with equal cost structure to the paper's setting: an expensive
/// type compatible with everything and a cheaper one barred from commodity 0.
pub fn default_type_profiles(n_commodities: usize) -> Vec<TypeProfile> {
    vec![
        TypeProfile {
            name: "refrigerated".into(),
            capacity: 25,
            cost_per_km: 3.0,
            compatible: CompatSpec::All,
        },
        TypeProfile {
            name: "regular".into(),
            capacity: 25,
            cost_per_km: 2.0,
            compatible: CompatSpec::Subset((1..n_commodities.max(2)).collect()),
        },
    ]
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("need at least one customer")]
    NoCustomers,
    #[error("need at least one commodity")]
    NoCommodities,
    #[error("need at least one vehicle type profile")]
    NoTypes,
    #[error("type profile {0:?} is compatible with no commodity")]
    EmptyCompatibility(String),
}

/// Deterministically generate an instance: coordinates uniform in a 20 km
/// square around a central depot, demands drawn per `profile`.
pub fn generate_instance<S: Scalar>(
    seed: u64,
    n_customers: usize,
    n_commodities: usize,
    profiles: &[TypeProfile],
    profile: DemandProfile,
) -> Result<Instance<S>, GenerateError> {
    if n_customers == 0 {
        return Err(GenerateError::NoCustomers);
    }
    if n_commodities == 0 {
        return Err(GenerateError::NoCommodities);
    }
    if profiles.is_empty() {
        return Err(GenerateError::NoTypes);
    }

    let commodities: Vec<String> = if n_commodities == 2 {
        vec!["chilled".into(), "ambient".into()]
    } else {
        (0..n_commodities).map(|k| format!("k{k}")).collect()
    };

    let mut vehicle_types = Vec::with_capacity(profiles.len());
    for p in profiles {
        let compatible: Vec<bool> = match &p.compatible {
            CompatSpec::All => vec![true; n_commodities],
            CompatSpec::Subset(ks) => {
                let mut row = vec![false; n_commodities];
                for &k in ks {
                    if k < n_commodities {
                        row[k] = true;
                    }
                }
                row
            }
        };
        if !compatible.iter().any(|&c| c) {
            return Err(GenerateError::EmptyCompatibility(p.name.clone()));
        }
        vehicle_types.push(VehicleType {
            name: p.name.clone(),
            capacity: Qty(p.capacity),
            cost_per_km: S::from_f64_lossy(p.cost_per_km),
            compatible,
        });
    }
    let cap_max = vehicle_types.iter().map(|t| t.capacity.units()).max().unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 20.0;
    let mut customers = Vec::with_capacity(n_customers);
    for i in 0..n_customers {
        let x: f64 = rng.gen_range(0.0..side);
        let y: f64 = rng.gen_range(0.0..side);
        let heavy = match profile {
            DemandProfile::Modest => false,
            DemandProfile::NearTruckload => false,
            // first customer always heavy so the split-forcing property is
            // deterministic, the rest with probability 0.3
            DemandProfile::SplitHeavy => i == 0 || rng.gen_bool(0.3),
        };
        let total = match (profile, heavy) {
            (DemandProfile::Modest, _) => rng.gen_range(cap_max / 5..=cap_max * 3 / 5),
            (_, false) => rng.gen_range(cap_max * 88 / 100..=cap_max),
            (_, true) => rng.gen_range(cap_max * 188 / 100..=cap_max * 2),
        }
        .max(1);

        // commodity 0 takes a minority share, the remainder spreads over the rest
        let mut demand = vec![0i64; n_commodities];
        if n_commodities == 1 {
            demand[0] = total;
        } else {
            demand[0] = rng.gen_range(0..=total * 2 / 5);
            let mut rest = total - demand[0];
            for k in 1..n_commodities - 1 {
                let share = rng.gen_range(0..=rest);
                demand[k] = share;
                rest -= share;
            }
            demand[n_commodities - 1] = rest;
        }

        customers.push(Customer {
            id: i + 1,
            x: S::from_f64_lossy(x),
            y: S::from_f64_lossy(y),
            demand: demand.into_iter().map(Qty).collect(),
        });
    }

    let depot = (S::from_f64_lossy(side / 2.0), S::from_f64_lossy(side / 2.0));
    let dist = euclidean_matrix(depot.0, depot.1, &customers);
    Ok(Instance {
        depot,
        customers,
        commodities,
        vehicle_types,
        dist,
        scale: 1,
        fleet_spec: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_doc() -> String {
        r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [{"id": 1, "x": 3.0, "y": 4.0, "demand": {"chilled": 5}}],
            "commodities": ["chilled", "ambient"],
            "vehicle_types": [
                {"id": "refrigerated", "capacity": 10, "cost_per_km": 3.0, "compatible": ["chilled", "ambient"]}
            ]
        }"#
        .to_string()
    }

    #[test]
    fn euclidean_distance_is_computed_when_matrix_absent() {
        let inst: Instance<f64> = load_instance(&tiny_doc()).unwrap();
        assert_eq!(inst.dist(DEPOT, 1), 5.0);
        assert_eq!(inst.dist(1, DEPOT), 5.0);
        assert_eq!(inst.dist(1, 1), 0.0);
    }

    #[test]
    fn negative_demand_is_rejected() {
        let doc = tiny_doc().replace("\"chilled\": 5", "\"chilled\": -2");
        let err = load_instance::<f64>(&doc).unwrap_err();
        assert!(matches!(err, InstanceError::NegativeDemand { qty: -2, .. }));
    }

    #[test]
    fn zero_demand_customer_is_rejected() {
        let doc = tiny_doc().replace("\"chilled\": 5", "\"chilled\": 0");
        let err = load_instance::<f64>(&doc).unwrap_err();
        assert!(matches!(err, InstanceError::ZeroDemand(1)));
    }

    #[test]
    fn demand_without_compatible_type_is_rejected() {
        let doc = tiny_doc().replace("[\"chilled\", \"ambient\"]}", "[\"ambient\"]}");
        let err = load_instance::<f64>(&doc).unwrap_err();
        assert!(matches!(err, InstanceError::NoCompatibleType(ref k) if k == "chilled"));
    }

    #[test]
    fn save_then_load_round_trips_generated_instance() {
        let profiles = default_type_profiles(2);
        let inst: Instance<f64> =
            generate_instance(7, 5, 2, &profiles, DemandProfile::NearTruckload).unwrap();
        let text = save_instance(&inst);
        let back: Instance<f64> = load_instance(&text).unwrap();
        assert_eq!(inst.customers, back.customers);
        assert_eq!(inst.commodities, back.commodities);
        assert_eq!(inst.vehicle_types, back.vehicle_types);
        // documents omit the matrix; recomputed from identical coordinates
        for i in 0..inst.n_locations() {
            for j in 0..inst.n_locations() {
                assert!((inst.dist(i, j) - back.dist(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let profiles = default_type_profiles(2);
        let a: Instance<f64> = generate_instance(9, 6, 2, &profiles, DemandProfile::SplitHeavy).unwrap();
        let b: Instance<f64> = generate_instance(9, 6, 2, &profiles, DemandProfile::SplitHeavy).unwrap();
        assert_eq!(save_instance(&a), save_instance(&b));
    }

    #[test]
    fn split_heavy_generates_an_oversized_customer() {
        let profiles = default_type_profiles(2);
        for seed in 0..5 {
            let inst: Instance<f64> =
                generate_instance(seed, 5, 2, &profiles, DemandProfile::SplitHeavy).unwrap();
            let cap_max = inst.vehicle_types.iter().map(|t| t.capacity).max().unwrap();
            assert!(
                inst.customers.iter().any(|c| c.total_demand() > cap_max),
                "seed {seed} has no split-forcing customer"
            );
        }
    }

    #[test]
    fn empty_generation_is_an_error() {
        let profiles = default_type_profiles(2);
        assert!(matches!(
            generate_instance::<f64>(1, 0, 2, &profiles, DemandProfile::Modest),
            Err(GenerateError::NoCustomers)
        ));
    }

    #[test]
    fn aggregation_radius_zero_is_identity() {
        let profiles = default_type_profiles(2);
        let inst: Instance<f64> = generate_instance(3, 6, 2, &profiles, DemandProfile::Modest).unwrap();
        let out = aggregate_customers(&inst, 0.0);
        assert_eq!(inst, out);
    }

    #[test]
    fn colocated_customers_merge_with_exact_sums() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [
                {"id": 1, "x": 2.0, "y": 2.0, "demand": {"chilled": 3, "ambient": 1}},
                {"id": 2, "x": 2.0, "y": 2.0, "demand": {"chilled": 2, "ambient": 4}}
            ],
            "commodities": ["chilled", "ambient"],
            "vehicle_types": [
                {"id": "refrigerated", "capacity": 10, "cost_per_km": 3.0, "compatible": ["chilled", "ambient"]}
            ]
        }"#;
        let inst: Instance<f64> = load_instance(doc).unwrap();
        let out = aggregate_customers(&inst, 0.5);
        assert_eq!(out.n_customers(), 1);
        assert_eq!(out.customers[0].demand, vec![Qty(5), Qty(5)]);
        assert_eq!(out.customers[0].x, 2.0);
        assert_eq!(out.customers[0].y, 2.0);
    }

    #[test]
    fn aggregation_preserves_commodity_totals_exactly() {
        let profiles = default_type_profiles(2);
        let inst: Instance<f64> = generate_instance(11, 18, 2, &profiles, DemandProfile::Modest).unwrap();
        for radius in [1.0, 3.0, 8.0, 50.0] {
            let out = aggregate_customers(&inst, radius);
            for k in 0..inst.n_commodities() {
                assert_eq!(inst.commodity_total_demand(k), out.commodity_total_demand(k));
            }
        }
    }

    #[test]
    fn aggregation_reaches_small_instance_node_counts() {
        // an 18-customer instance clustered down to roughly 5 nodes
        let profiles = default_type_profiles(2);
        let inst: Instance<f64> = generate_instance(11, 18, 2, &profiles, DemandProfile::Modest).unwrap();
        let mut best = inst.n_customers();
        for radius in [4.0, 6.0, 8.0, 10.0, 12.0] {
            let out = aggregate_customers(&inst, radius);
            if out.n_customers().abs_diff(5) < best.abs_diff(5) {
                best = out.n_customers();
            }
        }
        assert!((3..=7).contains(&best), "no radius yields ~5 clusters (best {best})");
    }

    #[test]
    fn stable_fleet_ceiling_arithmetic() {
        // chilled total 25, refrigerated cap 10, slack 0 -> 3 refrigerated
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [{"id": 1, "x": 1.0, "y": 0.0, "demand": {"chilled": 25, "ambient": 7}}],
            "commodities": ["chilled", "ambient"],
            "vehicle_types": [
                {"id": "refrigerated", "capacity": 10, "cost_per_km": 3.0, "compatible": ["chilled", "ambient"]},
                {"id": "regular", "capacity": 15, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#;
        let inst: Instance<f64> = load_instance(doc).unwrap();
        let assignment = default_commodity_assignment(&inst);
        assert_eq!(assignment, vec![0, 1]);
        let fleet = size_stable_fleet(&inst, &assignment, 0).unwrap();
        let pools = fleet.pools().to_vec();
        assert_eq!(pools.len(), 2);
        // refrigerated (more expensive) leads
        assert_eq!(pools[0].type_idx, 0);
        assert_eq!(pools[0].count, 3);
        assert_eq!(pools[1].count, 1);
    }

    #[test]
    fn zero_class_demand_gives_empty_pool() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [{"id": 1, "x": 1.0, "y": 0.0, "demand": {"ambient": 7}}],
            "commodities": ["chilled", "ambient"],
            "vehicle_types": [
                {"id": "refrigerated", "capacity": 10, "cost_per_km": 3.0, "compatible": ["chilled", "ambient"]},
                {"id": "regular", "capacity": 15, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#;
        let inst: Instance<f64> = load_instance(doc).unwrap();
        let fleet = size_stable_fleet(&inst, &default_commodity_assignment(&inst), 0).unwrap();
        assert_eq!(fleet.pools().len(), 1);
        assert_eq!(fleet.pools()[0].type_idx, 1);
    }

    #[test]
    fn incompatible_assignment_is_an_error() {
        let doc = r#"{
            "depot": {"x": 0.0, "y": 0.0},
            "customers": [{"id": 1, "x": 1.0, "y": 0.0, "demand": {"chilled": 5}}],
            "commodities": ["chilled", "ambient"],
            "vehicle_types": [
                {"id": "refrigerated", "capacity": 10, "cost_per_km": 3.0, "compatible": ["chilled", "ambient"]},
                {"id": "regular", "capacity": 15, "cost_per_km": 2.0, "compatible": ["ambient"]}
            ]
        }"#;
        let inst: Instance<f64> = load_instance(doc).unwrap();
        let err = size_stable_fleet(&inst, &[1, 1], 0).unwrap_err();
        assert!(matches!(err, FleetError::IncompatibleAssignment { .. }));
    }

    #[test]
    fn stable_sizing_matches_independent_recount() {
        let profiles = default_type_profiles(2);
        for seed in [2u64, 5, 8] {
            let inst: Instance<f64> =
                generate_instance(seed, 7, 2, &profiles, DemandProfile::Modest).unwrap();
            let assignment = default_commodity_assignment(&inst);
            let fleet = size_stable_fleet(&inst, &assignment, 1).unwrap();
            // oracle: recompute per-type ceilings independently
            for pool in fleet.pools() {
                let t = pool.type_idx;
                let mut class_total = 0i64;
                for (k, &a) in assignment.iter().enumerate() {
                    if a == t {
                        class_total += inst.commodity_total_demand(k).units();
                    }
                }
                let cap = inst.vehicle_types[t].capacity.units();
                let expect = (class_total + cap - 1).div_euclid(cap) + 1;
                assert_eq!(pool.count as i64, expect);
            }
            // sized capacity covers each class
            for (k, &t) in assignment.iter().enumerate() {
                let class_cap: i64 = fleet
                    .pools()
                    .iter()
                    .filter(|p| p.type_idx == t)
                    .map(|p| p.count as i64 * inst.vehicle_types[t].capacity.units())
                    .sum();
                assert!(class_cap >= inst.commodity_total_demand(k).units());
            }
        }
    }

    #[test]
    fn flexible_sizing_is_total_over_min_cap() {
        // total demand 47, min cap 10 -> 5 ; total 10 -> 1
        let mk = |demand: i64| {
            format!(
                r#"{{
            "depot": {{"x": 0.0, "y": 0.0}},
            "customers": [{{"id": 1, "x": 1.0, "y": 0.0, "demand": {{"ambient": {demand}}}}}],
            "commodities": ["ambient"],
            "vehicle_types": [
                {{"id": "large", "capacity": 30, "cost_per_km": 3.0, "compatible": ["ambient"]}},
                {{"id": "small", "capacity": 10, "cost_per_km": 2.0, "compatible": ["ambient"]}}
            ]
        }}"#
            )
        };
        let inst: Instance<f64> = load_instance(&mk(47)).unwrap();
        assert_eq!(size_flexible_fleet(&inst), 5);
        let inst: Instance<f64> = load_instance(&mk(10)).unwrap();
        assert_eq!(size_flexible_fleet(&inst), 1);
    }

    #[test]
    fn flexible_sizing_matches_brute_recount() {
        let profiles = default_type_profiles(2);
        for seed in [1u64, 4, 12] {
            let inst: Instance<f64> =
                generate_instance(seed, 6, 2, &profiles, DemandProfile::SplitHeavy).unwrap();
            let total: i64 = inst.customers.iter().map(|c| c.total_demand().units()).sum();
            let cap_min = inst.vehicle_types.iter().map(|t| t.capacity.units()).min().unwrap();
            let expect = (total + cap_min - 1).div_euclid(cap_min) as usize;
            assert_eq!(size_flexible_fleet(&inst), expect);
        }
    }

    #[test]
    fn distance_matrix_is_symmetric_zero_diagonal() {
        let profiles = default_type_profiles(2);
        let inst: Instance<f64> = generate_instance(21, 9, 2, &profiles, DemandProfile::Modest).unwrap();
        for i in 0..inst.n_locations() {
            assert_eq!(inst.dist(i, i), 0.0);
            for j in 0..inst.n_locations() {
                assert_eq!(inst.dist(i, j), inst.dist(j, i));
                assert!(inst.dist(i, j) >= 0.0);
            }
        }
    }
}
