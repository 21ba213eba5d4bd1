//! Minimal mixed-integer linear program IR: binary/continuous variables with
//! bounds, tagged sparse constraints, a minimize objective, and lazy-hook
//! registration. Built by the formulation layer, consumed by the solver.

use std::fmt::Write as _;
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstraintId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Variable<S> {
    pub kind: VarKind,
    pub lower: S,
    pub upper: S,
    pub obj: S,
    /// Branching priority; higher solves first. Usage variables get 100,
    /// type-choice variables 50, everything else 0.
    pub priority: i32,
    pub name: String,
}

#[derive(Debug, Clone)]
pub struct Constraint<S> {
    pub row: Vec<(VarId, S)>,
    pub sense: Sense,
    pub rhs: S,
    /// Mandatory audit tag, e.g. "demand[i=1,k=chilled]" or "plumbing".
    pub tag: String,
}

/// Separation routines a formulation can register; the solver invokes them on
/// every integral candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LazyHook {
    SubtourElimination,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("lower bound {lower} exceeds upper bound {upper}")]
    InvertedBounds { lower: f64, upper: f64 },
    #[error("constraint row is empty (tag {tag:?})")]
    EmptyRow { tag: String },
    #[error("constraint references undeclared variable id {0}")]
    UnknownVariable(usize),
    #[error("model is frozen; no further edits allowed")]
    Frozen,
    #[error("assignment value {value} for {name} outside bounds [{lower}, {upper}]")]
    ValueOutOfBounds { name: String, value: f64, lower: f64, upper: f64 },
}

/// A mutable-until-frozen minimization model.
#[derive(Debug, Clone, Default)]
pub struct Model<S> {
    variables: Vec<Variable<S>>,
    constraints: Vec<Constraint<S>>,
    lazy_hooks: Vec<LazyHook>,
    frozen: bool,
}

impl<S: Scalar> Model<S> {
    pub fn new() -> Self {
        Model { variables: Vec::new(), constraints: Vec::new(), lazy_hooks: Vec::new(), frozen: false }
    }

    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn variables(&self) -> &[Variable<S>] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint<S>] {
        &self.constraints
    }

    pub fn variable(&self, id: VarId) -> &Variable<S> {
        &self.variables[id.0]
    }

    pub fn lazy_hooks(&self) -> &[LazyHook] {
        &self.lazy_hooks
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Freeze the model; later edits error out. Shareable afterwards.
    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn add_variable(
        &mut self,
        kind: VarKind,
        lower: S,
        upper: S,
        obj: S,
        priority: i32,
        name: impl Into<String>,
    ) -> Result<VarId, ModelError> {
        if self.frozen {
            return Err(ModelError::Frozen);
        }
        let (lower, upper) = match kind {
            VarKind::Binary => (S::zero(), S::one()),
            VarKind::Continuous => (lower, upper),
        };
        if lower > upper {
            return Err(ModelError::InvertedBounds {
                lower: lower.to_f64().unwrap_or(f64::NAN),
                upper: upper.to_f64().unwrap_or(f64::NAN),
            });
        }
        let id = VarId(self.variables.len());
        self.variables.push(Variable { kind, lower, upper, obj, priority, name: name.into() });
        Ok(id)
    }

    pub fn add_binary(&mut self, obj: S, priority: i32, name: impl Into<String>) -> VarId {
        self.add_variable(VarKind::Binary, S::zero(), S::one(), obj, priority, name)
            .expect("binary bounds are never inverted")
    }

    pub fn add_continuous(&mut self, lower: S, upper: S, obj: S, name: impl Into<String>) -> Result<VarId, ModelError> {
        self.add_variable(VarKind::Continuous, lower, upper, obj, 0, name)
    }

    /// Append a constraint. Zero coefficients are dropped; a row that becomes
    /// empty is rejected.
    pub fn add_linear_constraint(
        &mut self,
        row: Vec<(VarId, S)>,
        sense: Sense,
        rhs: S,
        tag: impl Into<String>,
    ) -> Result<ConstraintId, ModelError> {
        if self.frozen {
            return Err(ModelError::Frozen);
        }
        let tag = tag.into();
        let mut clean: Vec<(VarId, S)> = Vec::with_capacity(row.len());
        for (id, coeff) in row {
            if id.0 >= self.variables.len() {
                return Err(ModelError::UnknownVariable(id.0));
            }
            if coeff != S::zero() {
                match clean.iter_mut().find(|(v, _)| *v == id) {
                    Some((_, c)) => *c = *c + coeff,
                    None => clean.push((id, coeff)),
                }
            }
        }
        if clean.is_empty() {
            return Err(ModelError::EmptyRow { tag });
        }
        let id = ConstraintId(self.constraints.len());
        self.constraints.push(Constraint { row: clean, sense, rhs, tag });
        Ok(id)
    }

    pub fn register_lazy_hook(&mut self, hook: LazyHook) {
        if !self.lazy_hooks.contains(&hook) {
            self.lazy_hooks.push(hook);
        }
    }

    /// Constraints carrying a tag with the given prefix (audit lookup).
    pub fn constraints_tagged<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Constraint<S>> + 'a {
        self.constraints.iter().filter(move |c| c.tag.starts_with(prefix))
    }

    /// LP relaxation: integrality marks dropped, bounds retained. Relaxing an
    /// already continuous model is the identity.
    pub fn relax_to_lp(&self) -> Model<S> {
        let mut out = self.clone();
        for v in &mut out.variables {
            v.kind = VarKind::Continuous;
        }
        out.frozen = false;
        out
    }

    /// Objective value of a full assignment.
    pub fn objective_value(&self, assignment: &Assignment<S>) -> S {
        self.variables
            .iter()
            .enumerate()
            .map(|(i, v)| v.obj * assignment.values[i])
            .sum()
    }

    /// Replay every constraint against an assignment; returns the tags of
    /// violated rows (empty means feasible) using the given tolerance.
    pub fn violated_rows(&self, assignment: &Assignment<S>, tol: S) -> Vec<String> {
        let mut bad = Vec::new();
        for c in &self.constraints {
            let lhs: S = c.row.iter().map(|&(id, coeff)| coeff * assignment.values[id.0]).sum();
            let violated = match c.sense {
                Sense::Le => lhs > c.rhs + tol,
                Sense::Ge => lhs < c.rhs - tol,
                Sense::Eq => (lhs - c.rhs).abs() > tol,
            };
            if violated {
                bad.push(c.tag.clone());
            }
        }
        bad
    }

    /// Export to LP text format, one constraint per line with the tag as a
    /// trailing comment, for cross-checking against external solvers.
    pub fn write_lp(&self) -> String {
        let mut out = String::new();
        out.push_str("Minimize\n obj:");
        for (i, v) in self.variables.iter().enumerate() {
            if v.obj != S::zero() {
                let c = v.obj.to_f64().unwrap();
                let _ = write!(out, " {}{} {}", if c < 0.0 { "- " } else { "+ " }, c.abs(), ident(&v.name, i));
            }
        }
        out.push_str("\nSubject To\n");
        for (r, c) in self.constraints.iter().enumerate() {
            let _ = write!(out, " c{r}:");
            for &(id, coeff) in &c.row {
                let v = coeff.to_f64().unwrap();
                let _ = write!(
                    out,
                    " {}{} {}",
                    if v < 0.0 { "- " } else { "+ " },
                    v.abs(),
                    ident(&self.variables[id.0].name, id.0)
                );
            }
            let _ = writeln!(out, " {} {} \\ {}", c.sense.symbol(), c.rhs.to_f64().unwrap(), c.tag);
        }
        out.push_str("Bounds\n");
        for (i, v) in self.variables.iter().enumerate() {
            let _ = writeln!(
                out,
                " {} <= {} <= {}",
                v.lower.to_f64().unwrap(),
                ident(&v.name, i),
                v.upper.to_f64().unwrap()
            );
        }
        out.push_str("Binaries\n");
        for (i, v) in self.variables.iter().enumerate() {
            if v.kind == VarKind::Binary {
                let _ = writeln!(out, " {}", ident(&v.name, i));
            }
        }
        out.push_str("End\n");
        out
    }
}

fn ident(name: &str, idx: usize) -> String {
    if name.is_empty() {
        format!("v{idx}")
    } else {
        name.replace([' ', ','], "_").replace(['[', ']', '='], ".")
    }
}

/// A dense value per variable, bounds-checked on injection.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment<S> {
    pub values: Vec<S>,
}

impl<S: Scalar> Assignment<S> {
    pub fn zeros(model: &Model<S>) -> Self {
        Assignment { values: vec![S::zero(); model.n_variables()] }
    }

    pub fn get(&self, id: VarId) -> S {
        self.values[id.0]
    }

    pub fn set(&mut self, model: &Model<S>, id: VarId, value: S) -> Result<(), ModelError> {
        let v = model.variable(id);
        let tol = S::from_f64_lossy(1e-9);
        if value < v.lower - tol || value > v.upper + tol {
            return Err(ModelError::ValueOutOfBounds {
                name: v.name.clone(),
                value: value.to_f64().unwrap_or(f64::NAN),
                lower: v.lower.to_f64().unwrap_or(f64::NAN),
                upper: v.upper.to_f64().unwrap_or(f64::NAN),
            });
        }
        self.values[id.0] = value;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_bounds_are_forced_to_unit_interval() {
        let mut m: Model<f64> = Model::new();
        let id = m.add_variable(VarKind::Binary, -5.0, 5.0, 1.0, 0, "b").unwrap();
        assert_eq!(m.variable(id).lower, 0.0);
        assert_eq!(m.variable(id).upper, 1.0);
    }

    #[test]
    fn continuous_bounds_are_stored_verbatim() {
        let mut m: Model<f64> = Model::new();
        let id = m.add_continuous(0.0, 25.0, 0.0, "y").unwrap();
        assert_eq!(m.variable(id).lower, 0.0);
        assert_eq!(m.variable(id).upper, 25.0);
    }

    #[test]
    fn inverted_bounds_error() {
        let mut m: Model<f64> = Model::new();
        let err = m.add_continuous(2.0, 1.0, 0.0, "y").unwrap_err();
        assert!(matches!(err, ModelError::InvertedBounds { .. }));
    }

    #[test]
    fn constraints_store_nonzeros_and_are_tag_retrievable() {
        let mut m: Model<f64> = Model::new();
        let a = m.add_binary(0.0, 0, "x1");
        let b = m.add_binary(0.0, 0, "x2");
        m.add_linear_constraint(vec![(a, 1.0), (b, 1.0)], Sense::Le, 1.0, "demand[i=1,k=chilled]")
            .unwrap();
        let found: Vec<_> = m.constraints_tagged("demand").collect();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].row.len(), 2);
    }

    #[test]
    fn empty_row_is_rejected() {
        let mut m: Model<f64> = Model::new();
        let err = m.add_linear_constraint(vec![], Sense::Le, 1.0, "plumbing").unwrap_err();
        assert!(matches!(err, ModelError::EmptyRow { .. }));
    }

    #[test]
    fn unknown_variable_is_rejected() {
        let mut m: Model<f64> = Model::new();
        let err = m
            .add_linear_constraint(vec![(VarId(3), 1.0)], Sense::Le, 1.0, "plumbing")
            .unwrap_err();
        assert!(matches!(err, ModelError::UnknownVariable(3)));
    }

    #[test]
    fn relaxation_drops_integrality_and_is_idempotent() {
        let mut m: Model<f64> = Model::new();
        for i in 0..3 {
            m.add_binary(1.0, 0, format!("x{i}"));
        }
        let relaxed = m.relax_to_lp();
        assert!(relaxed.variables().iter().all(|v| v.kind == VarKind::Continuous));
        assert!(relaxed
            .variables()
            .iter()
            .all(|v| v.lower == 0.0 && v.upper == 1.0));
        let twice = relaxed.relax_to_lp();
        assert_eq!(twice.n_variables(), relaxed.n_variables());
        assert!(twice.variables().iter().all(|v| v.kind == VarKind::Continuous));
    }

    #[test]
    fn frozen_model_rejects_edits() {
        let mut m: Model<f64> = Model::new();
        m.add_binary(1.0, 0, "x");
        m.freeze();
        assert!(matches!(m.add_continuous(0.0, 1.0, 0.0, "y"), Err(ModelError::Frozen)));
    }

    #[test]
    fn assignment_injection_checks_bounds() {
        let mut m: Model<f64> = Model::new();
        let id = m.add_continuous(0.0, 2.0, 0.0, "y").unwrap();
        let mut a = Assignment::zeros(&m);
        a.set(&m, id, 1.5).unwrap();
        assert!(a.set(&m, id, 3.0).is_err());
    }

    #[test]
    fn lp_export_mentions_every_tag() {
        let mut m: Model<f64> = Model::new();
        let x = m.add_binary(2.0, 0, "x[v=0]");
        m.add_linear_constraint(vec![(x, 1.0)], Sense::Le, 1.0, "usage[v=0]").unwrap();
        let text = m.write_lp();
        assert!(text.contains("\\ usage[v=0]"));
        assert!(text.contains("Binaries"));
    }
}
