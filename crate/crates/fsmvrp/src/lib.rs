//! Solver toolkit for the fleet-size-and-mix, multi-commodity, capacitated,
//! split-delivery vehicle routing problem.
//!
//! The crate builds four MIP formulations (stable/flexible fleet crossed with
//! commodity/vehicle-flow routing), strengthens them with switchable valid
//! cuts and symmetry-breaking rows, solves them with an in-crate bounded
//! simplex and branch-and-bound with lazy subtour elimination, warm-starts
//! from a greedy + LNS heuristic, and benchmarks every variant against a
//! brute-force oracle.
//!
//! Core numerics are generic over the floating [`scalar::Scalar`] type;
//! demand quantities are exact integers ([`quantity::Qty`]). The aliases
//! below pin the f64 instantiations most code wants.

pub mod checker;
pub mod formulations;
pub mod harness;
pub mod instance;
pub mod mip;
pub mod quantity;
pub mod scalar;
pub mod solver;
pub mod strengthen;
pub mod warmstart;

pub use quantity::Qty;
pub use scalar::Scalar;

/// f64 instantiations of the generic core.
pub type Instance = instance::Instance<f64>;
pub type Fleet = instance::Fleet<f64>;
pub type Model = mip::Model<f64>;
pub type Assignment = mip::Assignment<f64>;
pub type BuiltModel = formulations::BuiltModel<f64>;
pub type RoutingSolution = warmstart::RoutingSolution<f64>;
pub type MipResult = solver::MipResult<f64>;
pub type LpResult = solver::LpResult<f64>;
pub type ValidationReport = checker::ValidationReport<f64>;
