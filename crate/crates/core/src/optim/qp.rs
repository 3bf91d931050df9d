//! Convex diagonal-Hessian QP via outer approximation.
//!
//! The quadratic part `sum q_j x_j^2` is lifted into an epigraph variable
//! constrained by tangent cuts; each cut is globally valid, so the pool can be
//! shared across a branch-and-bound tree. The LP value is always a lower
//! bound on the true QP value; the loop refines until the model gap closes.

use super::simplex::{Basis, LpCore, LpStatus};
use super::{MipProblem, ProblemError, SolveResult, SolveStatus, SolverConfig};

const MAX_CUTS: usize = 600;

#[derive(Debug)]
pub(crate) struct QpOutcome {
    pub status: SolveStatus,
    /// Values of the original problem columns.
    pub x: Vec<f64>,
    /// Valid lower bound on the node optimum (LP value plus offset).
    pub bound: f64,
    /// Exact objective of `x` (linear + quadratic + offset).
    pub objective: f64,
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub iterations: u64,
}

/// Reusable QP/LP solve state. Bounds of original columns may be mutated
/// between solves; tangent cuts accumulate.
pub(crate) struct QpEngine {
    core: LpCore,
    costs: Vec<f64>,
    offset: f64,
    n_orig: usize,
    n_rows_orig: usize,
    quad_cols: Vec<usize>,
    qvals: Vec<f64>,
    eta: Option<usize>,
    cuts: usize,
}

impl QpEngine {
    pub fn new(p: &MipProblem, cfg: &SolverConfig) -> Result<Self, ProblemError> {
        let mut prob = p.clone();
        let n_orig = p.num_cols();
        let quad_cols: Vec<usize> = (0..n_orig).filter(|&j| p.quadratic(j) > 0.0).collect();
        let qvals: Vec<f64> = quad_cols.iter().map(|&j| p.quadratic(j)).collect();
        let eta = if quad_cols.is_empty() {
            None
        } else {
            Some(prob.add_col(1.0, 0.0, f64::INFINITY, false))
        };
        let costs: Vec<f64> = (0..n_orig).map(|j| p.cost(j)).collect();
        let offset = p.offset();
        let core = LpCore::new(&mut prob, cfg)?;
        let mut engine = QpEngine {
            core,
            costs,
            offset,
            n_orig,
            n_rows_orig: p.num_rows(),
            quad_cols,
            qvals,
            eta,
            cuts: 0,
        };
        if engine.eta.is_some() {
            // Seed with the tangent at the separable unconstrained minimizer;
            // this puts the first LP's marginal costs in the right ballpark.
            let seed: Vec<f64> = engine
                .quad_cols
                .iter()
                .zip(&engine.qvals)
                .map(|(&j, &q)| {
                    let (lo, hi) = engine.core.bounds(j);
                    let t = -engine.costs[j] / (2.0 * q);
                    clamp_finite(t, lo, hi)
                })
                .collect();
            engine.add_cut(&seed);
        }
        Ok(engine)
    }

    pub fn set_bounds(&mut self, col: usize, lo: f64, hi: f64) {
        debug_assert!(col < self.n_orig);
        self.core.set_bounds(col, lo, hi);
    }

    pub fn bounds(&self, col: usize) -> (f64, f64) {
        self.core.bounds(col)
    }

    pub fn snapshot_basis(&self) -> Basis {
        self.core.snapshot_basis()
    }

    fn add_cut(&mut self, point: &[f64]) {
        let eta = self.eta.expect("cuts require a quadratic objective");
        let mut coeffs: Vec<(usize, f64)> = Vec::with_capacity(point.len() + 1);
        let mut rhs = 0.0;
        for ((&j, &q), &y) in self.quad_cols.iter().zip(&self.qvals).zip(point) {
            coeffs.push((j, 2.0 * q * y));
            rhs += q * y * y;
        }
        coeffs.push((eta, -1.0));
        self.core.add_le_row(&coeffs, rhs);
        self.cuts += 1;
    }

    fn quad_value(&self, x: &[f64]) -> f64 {
        self.quad_cols
            .iter()
            .zip(&self.qvals)
            .map(|(&j, &q)| q * x[j] * x[j])
            .sum()
    }

    fn true_objective(&self, x: &[f64]) -> f64 {
        let lin: f64 = self.costs.iter().enumerate().map(|(j, &c)| c * x[j]).sum();
        lin + self.quad_value(x) + self.offset
    }

    /// Solve to the configured model gap. Restores `warm` first if given,
    /// otherwise continues from the current internal basis.
    pub fn solve(&mut self, warm: Option<&Basis>, cfg: &SolverConfig) -> QpOutcome {
        let mut warm = warm;
        let mut iterations = 0u64;
        let mut last_point: Option<Vec<f64>> = None;
        loop {
            let sol = self.core.solve(warm.take(), cfg.max_pivots);
            iterations += sol.iterations;
            let ray = match &sol.status {
                LpStatus::Unbounded(ray) => Some(ray.clone()),
                _ => None,
            };
            match &sol.status {
                LpStatus::Infeasible => {
                    return self.outcome(SolveStatus::Infeasible, sol, iterations, false);
                }
                LpStatus::PivotLimit => {
                    return self.outcome(SolveStatus::IterationLimit, sol, iterations, true);
                }
                LpStatus::Unbounded(_) => {
                    let ray = ray.expect("ray present");
                    if self.eta.is_none() {
                        return self.outcome(SolveStatus::Unbounded, sol, iterations, false);
                    }
                    // A ray touching a quadratic column is not a true ray of
                    // the QP; cut far enough along it to price it out.
                    let mut q_dir_sq = 0.0;
                    let mut q_x_dir = 0.0;
                    let mut lin_rate = 0.0;
                    for &(j, d) in &ray {
                        if let Some(k) = self.quad_cols.iter().position(|&c| c == j) {
                            q_dir_sq += self.qvals[k] * d * d;
                            q_x_dir += self.qvals[k] * sol.x[j] * d;
                        }
                        if j < self.n_orig {
                            lin_rate += self.costs[j] * d;
                        }
                    }
                    if q_dir_sq <= 0.0 {
                        return self.outcome(SolveStatus::Unbounded, sol, iterations, false);
                    }
                    let tau = ((-lin_rate - 2.0 * q_x_dir) / (2.0 * q_dir_sq)).max(0.0) + 1.0;
                    let point: Vec<f64> = self
                        .quad_cols
                        .iter()
                        .map(|&j| {
                            let d = ray
                                .iter()
                                .find(|&&(c, _)| c == j)
                                .map(|&(_, d)| d)
                                .unwrap_or(0.0);
                            sol.x[j] + tau * d
                        })
                        .collect();
                    self.add_cut(&point);
                }
                LpStatus::Optimal => {
                    if self.eta.is_none() {
                        return self.outcome(SolveStatus::Optimal, sol, iterations, true);
                    }
                    let eta_col = self.eta.unwrap();
                    let qval = self.quad_value(&sol.x);
                    let eta_val = sol.x[eta_col];
                    let gap = qval - eta_val;
                    let scale = 1.0 + (sol.objective + self.offset - eta_val + qval).abs();
                    let point: Vec<f64> = self.quad_cols.iter().map(|&j| sol.x[j]).collect();
                    let moved = match &last_point {
                        None => f64::INFINITY,
                        Some(prev) => point
                            .iter()
                            .zip(prev)
                            .map(|(a, b)| (a - b).abs() / (1.0 + a.abs()))
                            .fold(0.0f64, f64::max),
                    };
                    #[cfg(test)]
                    eprintln!("kelley: cuts={} gap={:.3e} moved={:.3e} xj={:?} eta={:.6}", self.cuts, gap, moved, point, eta_val);
                    if gap <= cfg.qp_gap * scale || moved <= 1e-11 || self.cuts >= MAX_CUTS {
                        return self.outcome(SolveStatus::Optimal, sol, iterations, true);
                    }
                    last_point = Some(point.clone());
                    self.add_cut(&point);
                }
            }
        }
    }

    fn outcome(
        &self,
        status: SolveStatus,
        sol: super::simplex::LpSolution,
        iterations: u64,
        value_valid: bool,
    ) -> QpOutcome {
        let bound = match status {
            SolveStatus::Unbounded => f64::NEG_INFINITY,
            SolveStatus::Infeasible => f64::INFINITY,
            _ => sol.objective + self.offset,
        };
        let mut x = sol.x;
        x.truncate(self.n_orig);
        let objective = if value_valid { self.true_objective(&x) } else { 0.0 };
        let mut duals = sol.duals;
        duals.truncate(self.n_rows_orig);
        let mut reduced = sol.reduced_costs;
        reduced.truncate(self.n_orig);
        QpOutcome {
            status,
            x,
            bound,
            objective,
            duals,
            reduced_costs: reduced,
            iterations,
        }
    }
}

fn clamp_finite(t: f64, lo: f64, hi: f64) -> f64 {
    let mut v = if t.is_finite() { t } else { 0.0 };
    if lo.is_finite() {
        v = v.max(lo);
    }
    if hi.is_finite() {
        v = v.min(hi);
    }
    if !v.is_finite() {
        v = 0.0;
    }
    v
}

/// Solve the continuous relaxation of a convex diagonally-quadratic program.
/// With `q = 0` this is exactly [`super::solve_lp`].
pub fn solve_qp(p: &MipProblem, cfg: &SolverConfig) -> SolveResult {
    let mut engine = match QpEngine::new(p, cfg) {
        Ok(e) => e,
        Err(e) => panic!("malformed problem: {e}"),
    };
    let out = engine.solve(None, cfg);
    SolveResult {
        status: out.status,
        x: out.x,
        objective: out.objective,
        duals: out.duals,
        reduced_costs: out.reduced_costs,
        iterations: out.iterations,
        node_count: 0,
    }
}
