//! Bounded-variable primal simplex on a dense tableau.
//!
//! Phase 1 minimizes the sum of bound infeasibilities of the basic variables
//! (no artificial columns; equality and >= rows get restricted slacks), phase
//! 2 runs Dantzig pricing with a Bland fallback after stall detection. The
//! tableau persists across bound changes and row additions, which is what
//! makes branch-and-bound node re-solves cheap.

use crate::mip::{Model, Sense};
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Error)]
pub enum SimplexError {
    #[error("iteration limit hit after {0} pivots")]
    IterationLimit(u64),
    #[error("numerical failure: {0}")]
    Numerical(&'static str),
}

#[derive(Debug, Clone)]
pub struct LpResult<S> {
    pub status: LpStatus,
    pub objective: S,
    /// Structural variable values (empty unless optimal).
    pub values: Vec<S>,
    pub iterations: u64,
}

/// Solve the LP relaxation of a model from scratch.
pub fn solve_lp<S: Scalar>(model: &Model<S>) -> Result<LpResult<S>, SimplexError> {
    assert!(model.n_variables() > 0, "model has no variables");
    let mut tab = Simplex::from_model(model);
    let status = tab.solve()?;
    Ok(LpResult {
        status,
        objective: if status == LpStatus::Optimal { tab.objective() } else { S::zero() },
        values: if status == LpStatus::Optimal { tab.structural_values() } else { Vec::new() },
        iterations: tab.iterations,
    })
}

enum Blocking {
    EnteringBound,
    Basic { row: usize, to_upper: bool },
}

enum StepOutcome {
    Flip,
    Pivoted { row: usize },
    Unbounded,
}

pub struct Simplex<S> {
    n_struct: usize,
    // original data: sparse structural rows, slack implied by sense
    rows: Vec<Vec<(usize, S)>>,
    rhs: Vec<S>,
    obj: Vec<S>, // structurals only
    lower: Vec<S>,
    upper: Vec<S>, // per column (structurals then slacks)
    // tableau state
    tab: Vec<Vec<S>>,   // per basic row: B^-1 A, dense over all columns
    binv_b: Vec<S>,     // B^-1 b
    basis: Vec<usize>,  // column basic in each row
    row_of: Vec<Option<usize>>,
    at_upper: Vec<bool>, // nonbasic rest position
    xb: Vec<S>,
    pub iterations: u64,
    values_dirty: bool,
}

impl<S: Scalar> Simplex<S> {
    pub fn from_model(model: &Model<S>) -> Self {
        let n = model.n_variables();
        let m = model.n_constraints();
        let mut s = Simplex {
            n_struct: n,
            rows: Vec::with_capacity(m),
            rhs: Vec::with_capacity(m),
            obj: model.variables().iter().map(|v| v.obj).collect(),
            lower: model.variables().iter().map(|v| v.lower).collect(),
            upper: model.variables().iter().map(|v| v.upper).collect(),
            tab: Vec::with_capacity(m),
            binv_b: Vec::with_capacity(m),
            basis: Vec::with_capacity(m),
            row_of: vec![None; n],
            at_upper: vec![false; n],
            xb: Vec::with_capacity(m),
            iterations: 0,
            values_dirty: true,
        };
        for c in model.constraints() {
            let row: Vec<(usize, S)> = c.row.iter().map(|&(id, v)| (id.0, v)).collect();
            s.push_row(row, c.sense, c.rhs);
        }
        s
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    fn n_cols(&self) -> usize {
        self.n_struct + self.rows.len()
    }

    /// Append a constraint; the new slack starts basic so the tableau row only
    /// needs the existing basics eliminated from it.
    pub fn push_row(&mut self, row: Vec<(usize, S)>, sense: Sense, rhs: S) {
        let (slo, shi) = match sense {
            Sense::Le => (S::zero(), S::infinity()),
            Sense::Eq => (S::zero(), S::zero()),
            Sense::Ge => (S::neg_infinity(), S::zero()),
        };
        let slack_col = self.n_cols();
        // widen every existing tableau row by the new slack column
        for t in &mut self.tab {
            t.push(S::zero());
        }
        self.lower.push(slo);
        self.upper.push(shi);
        self.at_upper.push(false);

        // dense copy of the row, then eliminate current basics
        let mut dense = vec![S::zero(); slack_col + 1];
        for &(c, v) in &row {
            dense[c] = dense[c] + v;
        }
        dense[slack_col] = S::one();
        let mut b = rhs;
        for r in 0..self.tab.len() {
            let f = dense[self.basis[r]];
            if f != S::zero() {
                let tr = &self.tab[r];
                for j in 0..slack_col + 1 {
                    dense[j] = dense[j] - f * tr[j];
                }
                b = b - f * self.binv_b[r];
            }
        }

        self.rows.push(row);
        self.rhs.push(rhs);
        let r_new = self.tab.len();
        self.tab.push(dense);
        self.binv_b.push(b);
        self.basis.push(slack_col);
        self.row_of.push(Some(r_new));
        self.xb.push(S::zero());
        self.values_dirty = true;
    }

    /// Override a structural column's bounds (branching, relaxation tweaks).
    pub fn set_column_bounds(&mut self, col: usize, lower: S, upper: S) {
        debug_assert!(col < self.n_struct);
        debug_assert!(lower <= upper);
        self.lower[col] = lower;
        self.upper[col] = upper;
        self.values_dirty = true;
    }

    pub fn column_bounds(&self, col: usize) -> (S, S) {
        (self.lower[col], self.upper[col])
    }

    fn rest_value(&self, col: usize) -> S {
        if self.at_upper[col] {
            if self.upper[col].is_finite() {
                self.upper[col]
            } else if self.lower[col].is_finite() {
                self.lower[col]
            } else {
                S::zero()
            }
        } else if self.lower[col].is_finite() {
            self.lower[col]
        } else if self.upper[col].is_finite() {
            self.upper[col]
        } else {
            S::zero()
        }
    }

    /// Recompute basic values for the current basis and rest positions.
    fn refresh_values(&mut self) {
        let m = self.tab.len();
        self.xb.clone_from(&self.binv_b);
        for col in 0..self.n_cols() {
            if self.row_of[col].is_some() {
                continue;
            }
            // normalize stale rest positions after bound edits
            if self.at_upper[col] && !self.upper[col].is_finite() {
                self.at_upper[col] = false;
            }
            let v = self.rest_value(col);
            if v != S::zero() {
                for r in 0..m {
                    let t = self.tab[r][col];
                    if t != S::zero() {
                        self.xb[r] = self.xb[r] - t * v;
                    }
                }
            }
        }
        self.values_dirty = false;
    }

    /// Direction eligibility of a nonbasic column. Fixed columns never move.
    fn can_move(&self, col: usize) -> (bool, bool) {
        if self.upper[col] - self.lower[col] <= S::zero() {
            return (false, false);
        }
        let up = !self.at_upper[col];
        let down = self.at_upper[col] || self.lower[col].is_infinite();
        (up, down)
    }

    pub fn structural_values(&self) -> Vec<S> {
        (0..self.n_struct).map(|c| self.value_of(c)).collect()
    }

    pub fn value_of(&self, col: usize) -> S {
        match self.row_of[col] {
            Some(r) => self.xb[r],
            None => self.rest_value(col),
        }
    }

    pub fn objective(&self) -> S {
        (0..self.n_struct).map(|c| self.obj[c] * self.value_of(c)).sum()
    }

    fn infeasibility(&self) -> S {
        let eps = S::feas_eps();
        let mut w = S::zero();
        for r in 0..self.xb.len() {
            let c = self.basis[r];
            if self.xb[r] < self.lower[c] - eps {
                w = w + (self.lower[c] - self.xb[r]);
            } else if self.xb[r] > self.upper[c] + eps {
                w = w + (self.xb[r] - self.upper[c]);
            }
        }
        w
    }

    pub fn solve(&mut self) -> Result<LpStatus, SimplexError> {
        if self.values_dirty {
            self.refresh_values();
        }
        let limit = 20_000 + 200 * self.tab.len() as u64;
        match self.solve_inner(limit) {
            Ok(st) => Ok(st),
            Err(SimplexError::Numerical(_)) => {
                // rebuild the tableau from original data and retry once
                self.rebuild()?;
                self.solve_inner(limit)
            }
            Err(e) => Err(e),
        }
    }

    fn solve_inner(&mut self, limit: u64) -> Result<LpStatus, SimplexError> {
        self.phase1(limit)?;
        if self.infeasibility() > S::feas_eps() * S::from_f64_lossy(10.0) {
            return Ok(LpStatus::Infeasible);
        }
        let st = self.phase2(limit)?;
        if st == LpStatus::Optimal && !self.verify_feasible() {
            return Err(SimplexError::Numerical("residual check failed"));
        }
        Ok(st)
    }

    /// Minimize the sum of basic bound violations until feasible or stuck.
    fn phase1(&mut self, limit: u64) -> Result<(), SimplexError> {
        let eps = S::feas_eps();
        let mut stall = 0u32;
        let mut last_w = S::infinity();
        loop {
            let m = self.tab.len();
            let ncols = self.n_cols();
            let mut below = Vec::new();
            let mut above = Vec::new();
            for r in 0..m {
                let c = self.basis[r];
                if self.xb[r] < self.lower[c] - eps {
                    below.push(r);
                } else if self.xb[r] > self.upper[c] + eps {
                    above.push(r);
                }
            }
            if below.is_empty() && above.is_empty() {
                return Ok(());
            }
            let w = self.infeasibility();
            if w < last_w - eps {
                stall = 0;
                last_w = w;
            } else {
                stall += 1;
            }
            let bland = stall > 100;

            // phase-1 reduced costs: d_j = sum_below T[r][j] - sum_above T[r][j];
            // only violated rows contribute, so pricing is cheap on warm starts
            let mut entering: Option<(usize, S, bool)> = None; // (col, |d|, increasing)
            for col in 0..ncols {
                if self.row_of[col].is_some() {
                    continue;
                }
                let (up_ok, down_ok) = self.can_move(col);
                if !up_ok && !down_ok {
                    continue;
                }
                let mut d = S::zero();
                for &r in &below {
                    d = d + self.tab[r][col];
                }
                for &r in &above {
                    d = d - self.tab[r][col];
                }
                let candidate = if d < -eps && up_ok {
                    Some((col, -d, true))
                } else if d > eps && down_ok {
                    Some((col, d, false))
                } else {
                    None
                };
                if let Some(cand) = candidate {
                    if bland {
                        entering = Some(cand);
                        break;
                    }
                    if entering.as_ref().map_or(true, |best| cand.1 > best.1) {
                        entering = Some(cand);
                    }
                }
            }
            let Some((col, _, increasing)) = entering else {
                return Ok(()); // phase-1 optimum; caller checks residual w
            };
            if matches!(self.step(col, increasing, true)?, StepOutcome::Unbounded) {
                return Err(SimplexError::Numerical("unbounded phase-1 ray"));
            }
            self.iterations += 1;
            if self.iterations > limit {
                return Err(SimplexError::IterationLimit(self.iterations));
            }
        }
    }

    /// Reduced costs c_j - c_B B^-1 a_j for every column.
    fn reduced_costs(&self) -> Vec<S> {
        let m = self.tab.len();
        let ncols = self.n_cols();
        let mut z: Vec<S> = (0..ncols)
            .map(|c| if c < self.n_struct { self.obj[c] } else { S::zero() })
            .collect();
        for r in 0..m {
            let c = self.basis[r];
            let cb = if c < self.n_struct { self.obj[c] } else { S::zero() };
            if cb != S::zero() {
                let tr = &self.tab[r];
                for j in 0..ncols {
                    z[j] = z[j] - cb * tr[j];
                }
            }
        }
        z
    }

    fn phase2(&mut self, limit: u64) -> Result<LpStatus, SimplexError> {
        let eps = S::feas_eps();
        let mut stall = 0u32;
        let mut last_obj = S::infinity();
        let mut zrow = self.reduced_costs();
        let mut since_rebuild = 0u32;
        loop {
            let obj_now = self.objective();
            if obj_now < last_obj - eps {
                stall = 0;
                last_obj = obj_now;
            } else {
                stall += 1;
            }
            let bland = stall > 100;

            let mut entering: Option<(usize, S, bool)> = None;
            for (col, &z) in zrow.iter().enumerate() {
                if self.row_of[col].is_some() {
                    continue;
                }
                let (up_ok, down_ok) = self.can_move(col);
                let candidate = if z < -eps && up_ok {
                    Some((col, -z, true))
                } else if z > eps && down_ok {
                    Some((col, z, false))
                } else {
                    None
                };
                if let Some(cand) = candidate {
                    if bland {
                        entering = Some(cand);
                        break;
                    }
                    if entering.as_ref().map_or(true, |best| cand.1 > best.1) {
                        entering = Some(cand);
                    }
                }
            }
            let Some((col, _, increasing)) = entering else {
                return Ok(LpStatus::Optimal);
            };
            match self.step(col, increasing, false)? {
                StepOutcome::Unbounded => return Ok(LpStatus::Unbounded),
                StepOutcome::Flip => {}
                StepOutcome::Pivoted { row } => {
                    // cheap incremental update; refresh periodically for drift
                    let zc = zrow[col];
                    if zc != S::zero() {
                        let tr = &self.tab[row];
                        for j in 0..zrow.len() {
                            zrow[j] = zrow[j] - zc * tr[j];
                        }
                    }
                    zrow[col] = S::zero();
                    since_rebuild += 1;
                    if since_rebuild >= 512 {
                        zrow = self.reduced_costs();
                        since_rebuild = 0;
                    }
                }
            }
            self.iterations += 1;
            if self.iterations > limit {
                return Err(SimplexError::IterationLimit(self.iterations));
            }
        }
    }

    /// Move the entering column in the given direction to the first blocking
    /// breakpoint.
    fn step(&mut self, col: usize, increasing: bool, phase1: bool) -> Result<StepOutcome, SimplexError> {
        let eps = S::feas_eps();
        let piv = S::pivot_eps();
        let m = self.tab.len();
        let dir = if increasing { S::one() } else { -S::one() };

        let own_range = self.upper[col] - self.lower[col];
        let mut theta = if own_range.is_finite() { own_range } else { S::infinity() };
        let mut blocking = Blocking::EnteringBound;

        for r in 0..m {
            let rate = -self.tab[r][col] * dir; // d x_r / d theta
            if rate.abs() <= piv {
                continue;
            }
            let c = self.basis[r];
            let x = self.xb[r];
            let (lo, hi) = (self.lower[c], self.upper[c]);
            let candidate: Option<(S, bool)> = if phase1 && x < lo - eps {
                // infeasible below: blocks when rising to its lower bound
                if rate > S::zero() {
                    Some(((lo - x) / rate, false))
                } else {
                    None
                }
            } else if phase1 && x > hi + eps {
                if rate < S::zero() {
                    Some(((x - hi) / -rate, true))
                } else {
                    None
                }
            } else if rate > S::zero() {
                if hi.is_finite() {
                    Some(((hi - x).max(S::zero()) / rate, true))
                } else {
                    None
                }
            } else if lo.is_finite() {
                Some(((x - lo).max(S::zero()) / -rate, false))
            } else {
                None
            };
            if let Some((t, to_upper)) = candidate {
                let better = t < theta - piv
                    || (t < theta + piv
                        && match blocking {
                            Blocking::Basic { row, .. } => self.basis[r] < self.basis[row],
                            Blocking::EnteringBound => false,
                        });
                if better {
                    theta = t.max(S::zero());
                    blocking = Blocking::Basic { row: r, to_upper };
                }
            }
        }

        if theta.is_infinite() {
            return Ok(StepOutcome::Unbounded);
        }

        match blocking {
            Blocking::EnteringBound => {
                // bound flip: entering travels its whole range, basis unchanged
                for r in 0..m {
                    let rate = -self.tab[r][col] * dir;
                    self.xb[r] = self.xb[r] + rate * theta;
                }
                self.at_upper[col] = increasing;
                Ok(StepOutcome::Flip)
            }
            Blocking::Basic { row, to_upper } => {
                let start = self.rest_value(col);
                for r in 0..m {
                    let rate = -self.tab[r][col] * dir;
                    self.xb[r] = self.xb[r] + rate * theta;
                }
                let leaving = self.basis[row];
                self.pivot(row, col)?;
                self.row_of[leaving] = None;
                self.at_upper[leaving] = to_upper;
                self.row_of[col] = Some(row);
                self.basis[row] = col;
                self.xb[row] = start + dir * theta;
                Ok(StepOutcome::Pivoted { row })
            }
        }
    }

    fn pivot(&mut self, prow: usize, pcol: usize) -> Result<(), SimplexError> {
        let p = self.tab[prow][pcol];
        if p.abs() <= S::pivot_eps() {
            return Err(SimplexError::Numerical("zero pivot"));
        }
        let inv = S::one() / p;
        let ncols = self.n_cols();
        for j in 0..ncols {
            self.tab[prow][j] = self.tab[prow][j] * inv;
        }
        self.tab[prow][pcol] = S::one();
        self.binv_b[prow] = self.binv_b[prow] * inv;
        let pivot_row = self.tab[prow].clone();
        let pivot_b = self.binv_b[prow];
        for r in 0..self.tab.len() {
            if r == prow {
                continue;
            }
            let f = self.tab[r][pcol];
            if f != S::zero() {
                let row = &mut self.tab[r];
                for j in 0..ncols {
                    row[j] = row[j] - f * pivot_row[j];
                }
                row[pcol] = S::zero();
                self.binv_b[r] = self.binv_b[r] - f * pivot_b;
            }
        }
        Ok(())
    }

    /// Residuals of the original rows at the current point.
    fn verify_feasible(&self) -> bool {
        let eps = S::feas_eps() * S::from_f64_lossy(100.0);
        for (r, row) in self.rows.iter().enumerate() {
            let mut lhs: S = row.iter().map(|&(c, v)| v * self.value_of(c)).sum();
            lhs = lhs + self.value_of(self.n_struct + r); // slack
            if (lhs - self.rhs[r]).abs() > eps * (S::one() + self.rhs[r].abs()) {
                return false;
            }
        }
        for col in 0..self.n_cols() {
            let v = self.value_of(col);
            if v < self.lower[col] - eps || v > self.upper[col] + eps {
                return false;
            }
        }
        true
    }

    /// Rebuild the tableau for the current basis from the original data by
    /// Gauss-Jordan elimination. Expensive; only used on numerical failure.
    fn rebuild(&mut self) -> Result<(), SimplexError> {
        let m = self.rows.len();
        let ncols = self.n_cols();
        let mut mat: Vec<Vec<S>> = Vec::with_capacity(m);
        for (r, row) in self.rows.iter().enumerate() {
            let mut dense = vec![S::zero(); ncols];
            for &(c, v) in row {
                dense[c] = dense[c] + v;
            }
            dense[self.n_struct + r] = S::one();
            mat.push(dense);
        }
        let mut b = self.rhs.clone();
        let mut basis = self.basis.clone();
        for slot in 0..m {
            let c = basis[slot];
            let mut best = slot;
            for r in slot..m {
                if mat[r][c].abs() > mat[best][c].abs() {
                    best = r;
                }
            }
            if mat[best][c].abs() <= S::pivot_eps() {
                return Err(SimplexError::Numerical("singular basis in rebuild"));
            }
            mat.swap(slot, best);
            b.swap(slot, best);
            let inv = S::one() / mat[slot][c];
            for j in 0..ncols {
                mat[slot][j] = mat[slot][j] * inv;
            }
            mat[slot][c] = S::one();
            let pivot_row = mat[slot].clone();
            let pb = b[slot] * inv;
            b[slot] = pb;
            for r in 0..m {
                if r == slot {
                    continue;
                }
                let f = mat[r][c];
                if f != S::zero() {
                    for j in 0..ncols {
                        mat[r][j] = mat[r][j] - f * pivot_row[j];
                    }
                    mat[r][c] = S::zero();
                    b[r] = b[r] - f * pb;
                }
            }
        }
        // re-associate rows with basis slots
        self.tab = mat;
        self.binv_b = b;
        self.row_of = vec![None; ncols];
        for (r, &c) in basis.iter().enumerate() {
            self.row_of[c] = Some(r);
        }
        self.basis = std::mem::take(&mut basis);
        self.refresh_values();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mip::{Model, Sense, VarKind};

    fn model1() -> Model<f64> {
        let mut m: Model<f64> = Model::new();
        m.add_variable(VarKind::Continuous, 0.0, 1.0, -1.0, 0, "x").unwrap();
        m
    }

    #[test]
    fn bound_optimum_without_rows() {
        let res = solve_lp(&model1()).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.objective, -1.0);
        assert_eq!(res.values, vec![1.0]);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut m: Model<f64> = Model::new();
        let x = m.add_continuous(0.0, 10.0, 0.0, "x").unwrap();
        m.add_linear_constraint(vec![(x, 1.0)], Sense::Ge, 2.0, "plumbing").unwrap();
        m.add_linear_constraint(vec![(x, 1.0)], Sense::Le, 1.0, "plumbing").unwrap();
        let res = solve_lp(&m).unwrap();
        assert_eq!(res.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray_is_detected() {
        let mut m: Model<f64> = Model::new();
        let x = m.add_continuous(0.0, f64::INFINITY, -1.0, "x").unwrap();
        m.add_linear_constraint(vec![(x, -1.0)], Sense::Le, 1.0, "plumbing").unwrap();
        let res = solve_lp(&m).unwrap();
        assert_eq!(res.status, LpStatus::Unbounded);
    }

    #[test]
    fn small_diet_style_lp() {
        // min 2a + 3b st a + b >= 4, a - b <= 1, a,b in [0, 10]
        let mut m: Model<f64> = Model::new();
        let a = m.add_continuous(0.0, 10.0, 2.0, "a").unwrap();
        let b = m.add_continuous(0.0, 10.0, 3.0, "b").unwrap();
        m.add_linear_constraint(vec![(a, 1.0), (b, 1.0)], Sense::Ge, 4.0, "plumbing").unwrap();
        m.add_linear_constraint(vec![(a, 1.0), (b, -1.0)], Sense::Le, 1.0, "plumbing").unwrap();
        let res = solve_lp(&m).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        // optimum at a=2.5, b=1.5 -> 9.5
        assert!((res.objective - 9.5).abs() < 1e-7, "objective {}", res.objective);
    }

    #[test]
    fn equality_rows_are_honoured() {
        // min x + y st x + 2y = 4, x - y = 1  ->  x = 2, y = 1
        let mut m: Model<f64> = Model::new();
        let x = m.add_continuous(0.0, 100.0, 1.0, "x").unwrap();
        let y = m.add_continuous(0.0, 100.0, 1.0, "y").unwrap();
        m.add_linear_constraint(vec![(x, 1.0), (y, 2.0)], Sense::Eq, 4.0, "plumbing").unwrap();
        m.add_linear_constraint(vec![(x, 1.0), (y, -1.0)], Sense::Eq, 1.0, "plumbing").unwrap();
        let res = solve_lp(&m).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert!((res.values[0] - 2.0).abs() < 1e-7);
        assert!((res.values[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn warm_resolve_after_bound_change_matches_fresh_solve() {
        let mut m: Model<f64> = Model::new();
        let x = m.add_continuous(0.0, 1.0, -2.0, "x").unwrap();
        let y = m.add_continuous(0.0, 1.0, -1.0, "y").unwrap();
        m.add_linear_constraint(vec![(x, 1.0), (y, 1.0)], Sense::Le, 1.5, "plumbing").unwrap();
        let mut tab = Simplex::from_model(&m);
        assert_eq!(tab.solve().unwrap(), LpStatus::Optimal);
        assert!((tab.objective() + 2.5).abs() < 1e-9);

        // fix x to 0 and re-solve warm
        tab.set_column_bounds(x.0, 0.0, 0.0);
        assert_eq!(tab.solve().unwrap(), LpStatus::Optimal);
        assert!((tab.objective() + 1.0).abs() < 1e-9, "objective {}", tab.objective());

        // relax again
        tab.set_column_bounds(x.0, 0.0, 1.0);
        assert_eq!(tab.solve().unwrap(), LpStatus::Optimal);
        assert!((tab.objective() + 2.5).abs() < 1e-9);
    }

    #[test]
    fn appended_rows_take_effect_warm() {
        let mut m: Model<f64> = Model::new();
        let x = m.add_continuous(0.0, 2.0, -1.0, "x").unwrap();
        let mut tab = Simplex::from_model(&m);
        assert_eq!(tab.solve().unwrap(), LpStatus::Optimal);
        assert_eq!(tab.value_of(x.0), 2.0);
        tab.push_row(vec![(x.0, 1.0)], Sense::Le, 1.25);
        assert_eq!(tab.solve().unwrap(), LpStatus::Optimal);
        assert!((tab.value_of(x.0) - 1.25).abs() < 1e-9);
    }
}
