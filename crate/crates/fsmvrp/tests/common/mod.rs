//! Shared fixtures: the oracle suite generator.
//!
//! Suite instances are built so the stable and flexible fleet models describe
//! the same problem: both vehicle types have equal capacity (costs and
//! compatibility differ), only customer 1 demands the restricted commodity,
//! and the demand split is resampled until the stable pool total equals
//! ⌈total demand / capacity⌉, the minimum vehicle count any solution needs.
//! Under those conditions one optimal solution always uses exactly the pool
//! profile, so all four formulations share one optimum, and the near-full
//! per-customer demands make the minimum-vehicle cut family value-safe.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fsmvrp::instance::{Customer, Instance, VehicleType};
use fsmvrp::quantity::Qty;

pub const CAP: i64 = 25;

fn suite_types() -> Vec<VehicleType<f64>> {
    vec![
        VehicleType {
            name: "refrigerated".into(),
            capacity: Qty(CAP),
            cost_per_km: 3.0,
            compatible: vec![true, true],
        },
        VehicleType {
            name: "regular".into(),
            capacity: Qty(CAP),
            cost_per_km: 2.0,
            compatible: vec![false, true],
        },
    ]
}

/// One oracle-suite instance (1..=3 customers, 2 commodities, <= 3 vehicles).
pub fn suite_instance(seed: u64) -> Instance<f64> {
    for attempt in 0..200u64 {
        if let Some(inst) = try_suite_instance(seed, attempt) {
            return inst;
        }
    }
    panic!("no valid suite instance for seed {seed}");
}

fn try_suite_instance(seed: u64, attempt: u64) -> Option<Instance<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(attempt));
    let n = 1 + (seed as usize + attempt as usize / 40) % 3;

    let mut totals: Vec<i64> = Vec::with_capacity(n);
    for i in 0..n {
        // near-truckload demands; at most one near-double load when the
        // three-vehicle budget allows it
        let heavy = n <= 2 && i == 0 && rng.gen_bool(0.4);
        totals.push(if heavy {
            rng.gen_range(CAP * 188 / 100..=CAP * 2)
        } else {
            rng.gen_range(CAP * 88 / 100..=CAP)
        });
    }
    let total: i64 = totals.iter().sum();
    let needed = (total + CAP - 1) / CAP; // ⌈total/cap⌉
    if needed > 3 {
        return None;
    }

    // restricted commodity lives only at customer 1
    let chilled = rng.gen_range(0..=totals[0].min(CAP));
    let ambient_total = total - chilled;
    let pool_ref = (chilled + CAP - 1) / CAP;
    let pool_reg = (ambient_total + CAP - 1) / CAP;
    if pool_ref + pool_reg != needed {
        return None;
    }

    let mut customers = Vec::with_capacity(n);
    for (i, &t) in totals.iter().enumerate() {
        let ch = if i == 0 { chilled } else { 0 };
        customers.push(Customer {
            id: i + 1,
            x: rng.gen_range(0.0..20.0),
            y: rng.gen_range(0.0..20.0),
            demand: vec![Qty(ch), Qty(t - ch)],
        });
    }

    let mut inst = Instance {
        depot: (10.0, 10.0),
        customers,
        commodities: vec!["chilled".into(), "ambient".into()],
        vehicle_types: suite_types(),
        dist: Vec::new(),
        scale: 1,
        fleet_spec: None,
    };
    fsmvrp::instance::recompute_distances(&mut inst);
    Some(inst)
}

/// The first `count` suite instances.
pub fn suite(count: u64) -> Vec<Instance<f64>> {
    (0..count).map(suite_instance).collect()
}
