//! Self-contained deterministic optimization core: a bounded-variable primal
//! simplex for LP, a cutting-plane layer for convex diagonal-Hessian QP, and
//! best-first branch-and-bound for MIP/MIQP, plus a brute-force oracle used
//! by the test suites.

mod bnb;
pub mod io;
mod qp;
mod simplex;

#[cfg(test)]
mod tests;

pub use bnb::{brute_force_mip, solve_mip, solve_mip_with_start};
pub use qp::solve_qp;
pub use simplex::solve_lp;

/// Row-major sparse triplet storage for a constraint matrix.
///
/// Entries are kept in insertion order and normalized (sorted, checked for
/// duplicates) on demand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl SparseMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Append an entry, growing the dimensions as needed.
    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        assert!(value.is_finite(), "matrix entry ({row},{col}) is not finite");
        self.nrows = self.nrows.max(row + 1);
        self.ncols = self.ncols.max(col + 1);
        self.entries.push((row as u32, col as u32, value));
    }

    pub fn entries(&self) -> &[(u32, u32, f64)] {
        &self.entries
    }

    /// Sort entries row-major and fail on duplicate coordinates.
    pub fn normalize(&mut self) -> Result<(), ProblemError> {
        self.entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        for pair in self.entries.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(ProblemError::DuplicateEntry {
                    row: pair[0].0 as usize,
                    col: pair[0].1 as usize,
                });
            }
        }
        Ok(())
    }
}

/// Constraint row sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

/// A sparse linear or diagonally-quadratic mathematical program:
///
/// minimize `c'x + sum_j q_j x_j^2 + offset`
/// subject to `A x {<=,=,>=} b`, `lo <= x <= hi`, some `x_j` integral.
///
/// `q >= 0` elementwise (convexity) is enforced by [`MipProblem::validate`].
#[derive(Debug, Clone, Default)]
pub struct MipProblem {
    costs: Vec<f64>,
    quad: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    integer: Vec<bool>,
    senses: Vec<RowSense>,
    rhs: Vec<f64>,
    matrix: SparseMatrix,
    offset: f64,
}

impl MipProblem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a column; returns its index.
    pub fn add_col(&mut self, cost: f64, lower: f64, upper: f64, integer: bool) -> usize {
        assert!(!lower.is_nan() && !upper.is_nan(), "NaN bound");
        assert!(cost.is_finite(), "cost must be finite");
        self.costs.push(cost);
        self.quad.push(0.0);
        self.lower.push(lower);
        self.upper.push(upper);
        self.integer.push(integer);
        self.costs.len() - 1
    }

    /// Add a row `sum coeffs {<=,=,>=} rhs`; returns its index.
    pub fn add_row(&mut self, sense: RowSense, rhs: f64, coeffs: &[(usize, f64)]) -> usize {
        assert!(rhs.is_finite(), "rhs must be finite");
        let row = self.senses.len();
        self.senses.push(sense);
        self.rhs.push(rhs);
        for &(col, val) in coeffs {
            assert!(col < self.costs.len(), "row references unknown column");
            if val != 0.0 {
                self.matrix.push(row, col, val);
            }
        }
        row
    }

    /// Set the diagonal quadratic cost of a column.
    pub fn set_quadratic(&mut self, col: usize, q: f64) {
        self.quad[col] = q;
    }

    pub fn add_to_cost(&mut self, col: usize, delta: f64) {
        self.costs[col] += delta;
    }

    /// Constant added to the reported objective.
    pub fn set_offset(&mut self, offset: f64) {
        self.offset = offset;
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn num_cols(&self) -> usize {
        self.costs.len()
    }

    pub fn num_rows(&self) -> usize {
        self.senses.len()
    }

    pub fn cost(&self, col: usize) -> f64 {
        self.costs[col]
    }

    pub fn quadratic(&self, col: usize) -> f64 {
        self.quad[col]
    }

    pub fn bounds(&self, col: usize) -> (f64, f64) {
        (self.lower[col], self.upper[col])
    }

    pub fn set_bounds(&mut self, col: usize, lower: f64, upper: f64) {
        self.lower[col] = lower;
        self.upper[col] = upper;
    }

    pub fn is_integer(&self, col: usize) -> bool {
        self.integer[col]
    }

    pub fn set_integer(&mut self, col: usize, flag: bool) {
        self.integer[col] = flag;
    }

    pub fn integer_cols(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_cols()).filter(|&j| self.integer[j])
    }

    pub fn sense(&self, row: usize) -> RowSense {
        self.senses[row]
    }

    pub fn rhs(&self, row: usize) -> f64 {
        self.rhs[row]
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn has_quadratic(&self) -> bool {
        self.quad.iter().any(|&q| q != 0.0)
    }

    /// Objective value of a point, including quadratic terms and offset.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        let mut v = self.offset;
        for j in 0..self.num_cols() {
            v += self.costs[j] * x[j] + self.quad[j] * x[j] * x[j];
        }
        v
    }

    /// Structural checks: convexity, bound ordering, duplicate coordinates.
    pub fn validate(&mut self) -> Result<(), ProblemError> {
        for (j, &q) in self.quad.iter().enumerate() {
            if q < 0.0 || !q.is_finite() {
                return Err(ProblemError::NonConvex { col: j, q });
            }
        }
        for j in 0..self.num_cols() {
            if self.lower[j] > self.upper[j] {
                return Err(ProblemError::BoundOrder {
                    col: j,
                    lower: self.lower[j],
                    upper: self.upper[j],
                });
            }
        }
        self.matrix.normalize()
    }

    /// Max-norm feasibility residual of a point, relative to `1 + |b|_inf`.
    pub fn feasibility_residual(&self, x: &[f64]) -> f64 {
        let mut act = vec![0.0; self.num_rows()];
        for &(r, c, v) in self.matrix.entries() {
            act[r as usize] += v * x[c as usize];
        }
        let bmax = self.rhs.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let mut worst = 0.0f64;
        for i in 0..self.num_rows() {
            let viol = match self.senses[i] {
                RowSense::Le => act[i] - self.rhs[i],
                RowSense::Ge => self.rhs[i] - act[i],
                RowSense::Eq => (act[i] - self.rhs[i]).abs(),
            };
            worst = worst.max(viol);
        }
        for j in 0..self.num_cols() {
            worst = worst.max(self.lower[j] - x[j]);
            worst = worst.max(x[j] - self.upper[j]);
        }
        worst / (1.0 + bmax)
    }
}

/// Structural defects in a [`MipProblem`].
#[derive(Debug, Clone, thiserror::Error)]
pub enum ProblemError {
    #[error("duplicate matrix entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("negative quadratic cost {q} on column {col}")]
    NonConvex { col: usize, q: f64 },
    #[error("column {col} has lower bound {lower} > upper bound {upper}")]
    BoundOrder { col: usize, lower: f64, upper: f64 },
    #[error("integer column {col} has unbounded range")]
    UnboundedInteger { col: usize },
    #[error("enumeration would exceed the bound: {combinations} > {limit}")]
    EnumerationTooLarge { combinations: u128, limit: u128 },
}

/// Termination status of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Solution of a [`MipProblem`].
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Row duals of the final LP (marginal objective change per unit rhs).
    pub duals: Vec<f64>,
    /// Reduced costs of structural columns in the final LP.
    pub reduced_costs: Vec<f64>,
    /// Simplex pivots performed.
    pub iterations: u64,
    /// Branch-and-bound nodes processed (0 for pure LP/QP solves).
    pub node_count: u64,
}

impl SolveResult {
    pub(crate) fn empty(status: SolveStatus) -> Self {
        SolveResult {
            status,
            x: Vec::new(),
            objective: 0.0,
            duals: Vec::new(),
            reduced_costs: Vec::new(),
            iterations: 0,
            node_count: 0,
        }
    }

    /// Dual objective `b'y + sum of bound terms`, for strong-duality checks
    /// on optimal LP results.
    pub fn dual_objective(&self, p: &MipProblem) -> f64 {
        let mut v = p.offset();
        for (i, &d) in self.duals.iter().enumerate() {
            v += d * p.rhs(i);
        }
        for j in 0..p.num_cols() {
            let d = self.reduced_costs[j];
            let (lo, hi) = p.bounds(j);
            if d > 0.0 && lo.is_finite() {
                v += d * lo;
            } else if d < 0.0 && hi.is_finite() {
                v += d * hi;
            }
        }
        v
    }
}

/// Centralized solver tolerances and limits.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Primal feasibility tolerance, relative to `1 + |b|_inf`.
    pub feas_tol: f64,
    /// Integrality tolerance on flagged columns.
    pub int_tol: f64,
    /// Relative optimality gap at which branch-and-bound stops.
    pub mip_gap: f64,
    /// Node budget for branch-and-bound.
    pub max_nodes: u64,
    /// Pivot budget per LP solve (safety valve).
    pub max_pivots: u64,
    /// Relative model gap at which the quadratic cutting-plane loop stops.
    pub qp_gap: f64,
    /// Enumeration budget for the brute-force oracle.
    pub enumeration_limit: u128,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            feas_tol: 1e-6,
            int_tol: 1e-6,
            mip_gap: 1e-6,
            max_nodes: 1_000_000,
            max_pivots: 2_000_000,
            qp_gap: 1e-10,
            enumeration_limit: 1 << 20,
        }
    }
}

/// Integer assignment used to seed branch-and-bound with an incumbent.
#[derive(Debug, Clone, Default)]
pub struct MipStart {
    pub values: Vec<(usize, f64)>,
}
