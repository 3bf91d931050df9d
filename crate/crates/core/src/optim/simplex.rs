//! Bounded-variable primal simplex with a composite (artificial-free) phase 1.
//!
//! The working form is `A x + s = b` with one slack per row; variables carry
//! lower/upper bounds (possibly infinite). The basis inverse is kept dense and
//! updated in product form, with periodic refactorization. Pivoting is
//! Dantzig's rule with ties broken by lowest column index, falling back to
//! Bland's rule after a run of degenerate pivots.

use super::{MipProblem, ProblemError, RowSense, SolveResult, SolveStatus, SolverConfig};

const REFACTOR_INTERVAL: usize = 64;
const PIVOT_ZERO: f64 = 1e-11;
const DEGENERATE_STEP: f64 = 1e-10;
const DEGENERATE_LIMIT: u32 = 300;

/// Variable status relative to the current basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum VStat {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable, held at zero.
    FreeZero,
}

/// Snapshot of a basis, sufficient to warm-start a later solve.
#[derive(Debug, Clone)]
pub struct Basis {
    states: Vec<u8>,
}

#[derive(Debug)]
pub(crate) enum LpStatus {
    Optimal,
    Infeasible,
    /// Improving ray with no blocking bound; carries the structural-space ray.
    Unbounded(Vec<(usize, f64)>),
    PivotLimit,
}

#[derive(Debug)]
pub(crate) struct LpSolution {
    pub status: LpStatus,
    /// Structural column values (valid for Optimal and PivotLimit).
    pub x: Vec<f64>,
    /// `c'x` over structural columns, without offset.
    pub objective: f64,
    /// Row duals in the original (unscaled) row space.
    pub duals: Vec<f64>,
    /// Reduced costs of structural columns.
    pub reduced_costs: Vec<f64>,
    pub iterations: u64,
}

/// Reusable LP state: scaled columns, bounds, basis, and the dense basis
/// inverse. Branch-and-bound mutates column bounds between solves; the
/// quadratic layer appends cut rows.
pub(crate) struct LpCore {
    m: usize,
    n_struct: usize,
    /// Scaled sparse structural columns.
    cols: Vec<Vec<(u32, f64)>>,
    costs: Vec<f64>,
    /// Bounds over structural columns then slacks.
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Scaled right-hand side.
    b: Vec<f64>,
    row_scale: Vec<f64>,
    feas_tol: f64,
    cost_tol: f64,

    vstat: Vec<VStat>,
    /// Column occupying each basis row.
    basic: Vec<u32>,
    /// Dense m x m basis inverse, row-major.
    binv: Vec<f64>,
    /// Values of basic variables by basis row.
    xb: Vec<f64>,
    /// Bound values of nonbasic variables (entries for basic vars are stale).
    xval: Vec<f64>,
    pivots_since_refactor: usize,
    needs_refactor: bool,

    // scratch
    work_w: Vec<f64>,
    work_y: Vec<f64>,
}

impl LpCore {
    /// Build from a problem, ignoring integrality and quadratic terms.
    pub fn new(p: &mut MipProblem, cfg: &SolverConfig) -> Result<Self, ProblemError> {
        p.validate()?;
        let m = p.num_rows();
        let n = p.num_cols();

        let mut cols: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        let mut row_max = vec![0.0f64; m];
        for &(r, _, v) in p.matrix().entries() {
            row_max[r as usize] = row_max[r as usize].max(v.abs());
        }
        let row_scale: Vec<f64> = row_max
            .iter()
            .map(|&mx| if mx > 0.0 { 1.0 / mx } else { 1.0 })
            .collect();
        for &(r, c, v) in p.matrix().entries() {
            cols[c as usize].push((r, v * row_scale[r as usize]));
        }

        let mut lower = Vec::with_capacity(n + m);
        let mut upper = Vec::with_capacity(n + m);
        let mut costs = Vec::with_capacity(n);
        for j in 0..n {
            let (lo, hi) = p.bounds(j);
            lower.push(lo);
            upper.push(hi);
            costs.push(p.cost(j));
        }
        let mut b = Vec::with_capacity(m);
        for i in 0..m {
            b.push(p.rhs(i) * row_scale[i]);
            let (slo, shi) = match p.sense(i) {
                RowSense::Le => (0.0, f64::INFINITY),
                RowSense::Eq => (0.0, 0.0),
                RowSense::Ge => (f64::NEG_INFINITY, 0.0),
            };
            lower.push(slo);
            upper.push(shi);
        }

        let bmax = (0..m).fold(0.0f64, |a, i| a.max(p.rhs(i).abs()));
        let cmax = costs.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        let mut core = LpCore {
            m,
            n_struct: n,
            cols,
            costs,
            lower,
            upper,
            b,
            row_scale,
            feas_tol: 0.1 * cfg.feas_tol * (1.0 + bmax),
            cost_tol: 1e-9 * (1.0 + cmax),
            vstat: Vec::new(),
            basic: Vec::new(),
            binv: Vec::new(),
            xb: Vec::new(),
            xval: Vec::new(),
            pivots_since_refactor: 0,
            needs_refactor: true,
            work_w: Vec::new(),
            work_y: Vec::new(),
        };
        core.reset_to_slack_basis();
        Ok(core)
    }

    pub fn num_struct(&self) -> usize {
        self.n_struct
    }

    pub fn num_rows(&self) -> usize {
        self.m
    }

    pub fn bounds(&self, col: usize) -> (f64, f64) {
        (self.lower[col], self.upper[col])
    }

    /// Mutate bounds of a structural column (branch-and-bound hook).
    pub fn set_bounds(&mut self, col: usize, lo: f64, hi: f64) {
        debug_assert!(col < self.n_struct);
        self.lower[col] = lo;
        self.upper[col] = hi;
    }

    /// Append a `<=` row; its slack joins the basis. Used for cutting planes.
    pub fn add_le_row(&mut self, coeffs: &[(usize, f64)], rhs: f64) {
        let mut mx = 0.0f64;
        for &(_, v) in coeffs {
            mx = mx.max(v.abs());
        }
        let scale = if mx > 0.0 { 1.0 / mx } else { 1.0 };
        let r = self.m as u32;
        for &(c, v) in coeffs {
            debug_assert!(c < self.n_struct);
            if v != 0.0 {
                self.cols[c].push((r, v * scale));
            }
        }
        self.b.push(rhs * scale);
        self.row_scale.push(scale);
        // slack bounds [0, inf)
        self.lower.insert(self.n_struct + self.m, 0.0);
        self.upper.insert(self.n_struct + self.m, f64::INFINITY);
        self.vstat.insert(self.n_struct + self.m, VStat::Basic);
        self.xval.insert(self.n_struct + self.m, 0.0);
        self.basic.push((self.n_struct + self.m) as u32);
        self.m += 1;
        self.needs_refactor = true;
    }

    pub fn snapshot_basis(&self) -> Basis {
        Basis {
            states: self
                .vstat
                .iter()
                .map(|s| match s {
                    VStat::AtLower => 0,
                    VStat::AtUpper => 1,
                    VStat::FreeZero => 2,
                    VStat::Basic => 3,
                })
                .collect(),
        }
    }

    pub fn restore_basis(&mut self, basis: &Basis) {
        let n_tot = self.n_struct + self.m;
        if basis.states.len() > n_tot {
            self.reset_to_slack_basis();
            return;
        }
        let mut vstat = Vec::with_capacity(n_tot);
        for j in 0..n_tot {
            let code = basis.states.get(j).copied().unwrap_or(3);
            vstat.push(match code {
                0 => VStat::AtLower,
                1 => VStat::AtUpper,
                2 => VStat::FreeZero,
                _ => VStat::Basic,
            });
        }
        // Snapshots taken before rows were appended leave the new slacks
        // basic; that keeps the basic count equal to m.
        let basic_count = vstat.iter().filter(|s| **s == VStat::Basic).count();
        if basic_count != self.m {
            self.reset_to_slack_basis();
            return;
        }
        self.vstat = vstat;
        self.basic = (0..n_tot)
            .filter(|&j| self.vstat[j] == VStat::Basic)
            .map(|j| j as u32)
            .collect();
        self.snap_nonbasic_to_bounds();
        self.needs_refactor = true;
    }

    pub fn reset_to_slack_basis(&mut self) {
        let n_tot = self.n_struct + self.m;
        self.vstat = Vec::with_capacity(n_tot);
        for j in 0..n_tot {
            if j >= self.n_struct {
                self.vstat.push(VStat::Basic);
            } else {
                self.vstat.push(initial_state(self.lower[j], self.upper[j]));
            }
        }
        self.basic = (self.n_struct..n_tot).map(|j| j as u32).collect();
        self.xval = vec![0.0; n_tot];
        self.snap_nonbasic_to_bounds();
        self.needs_refactor = true;
    }

    fn snap_nonbasic_to_bounds(&mut self) {
        self.xval.resize(self.n_struct + self.m, 0.0);
        for j in 0..self.xval.len() {
            match self.vstat[j] {
                VStat::Basic => {}
                VStat::AtLower => {
                    if self.lower[j].is_finite() {
                        self.xval[j] = self.lower[j];
                    } else if self.upper[j].is_finite() {
                        self.vstat[j] = VStat::AtUpper;
                        self.xval[j] = self.upper[j];
                    } else {
                        self.vstat[j] = VStat::FreeZero;
                        self.xval[j] = 0.0;
                    }
                }
                VStat::AtUpper => {
                    if self.upper[j].is_finite() {
                        self.xval[j] = self.upper[j];
                    } else if self.lower[j].is_finite() {
                        self.vstat[j] = VStat::AtLower;
                        self.xval[j] = self.lower[j];
                    } else {
                        self.vstat[j] = VStat::FreeZero;
                        self.xval[j] = 0.0;
                    }
                }
                VStat::FreeZero => {
                    if self.lower[j].is_finite() || self.upper[j].is_finite() {
                        // bound appeared since the snapshot
                        if self.lower[j].is_finite() {
                            self.vstat[j] = VStat::AtLower;
                            self.xval[j] = self.lower[j];
                        } else {
                            self.vstat[j] = VStat::AtUpper;
                            self.xval[j] = self.upper[j];
                        }
                    } else {
                        self.xval[j] = 0.0;
                    }
                }
            }
        }
    }

    /// Sparse column access; slacks are implicit unit vectors.
    fn col_entries<'a>(&'a self, j: usize, scratch: &'a mut Vec<(u32, f64)>) -> &'a [(u32, f64)] {
        if j < self.n_struct {
            &self.cols[j]
        } else {
            scratch.clear();
            scratch.push(((j - self.n_struct) as u32, 1.0));
            scratch
        }
    }

    /// Rebuild the dense basis inverse by Gauss-Jordan elimination.
    /// Returns false when the stored basis is numerically singular.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        // bmat holds B augmented into its inverse in place.
        let mut bmat = vec![0.0f64; m * m];
        let mut scratch = Vec::new();
        for (k, &bj) in self.basic.iter().enumerate() {
            let col = self.col_entries(bj as usize, &mut scratch);
            for &(r, v) in col {
                bmat[r as usize * m + k] = v;
            }
        }
        let mut inv = vec![0.0f64; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for k in 0..m {
            // partial pivot
            let mut piv_row = k;
            let mut piv_val = bmat[k * m + k].abs();
            for r in (k + 1)..m {
                let v = bmat[r * m + k].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = r;
                }
            }
            if piv_val < 1e-12 {
                return false;
            }
            if piv_row != k {
                // row swap on the augmented [B | I] system
                for c in 0..m {
                    bmat.swap(k * m + c, piv_row * m + c);
                    inv.swap(k * m + c, piv_row * m + c);
                }
            }
            let p = bmat[k * m + k];
            let pinv = 1.0 / p;
            for c in 0..m {
                bmat[k * m + c] *= pinv;
                inv[k * m + c] *= pinv;
            }
            for r in 0..m {
                if r != k {
                    let f = bmat[r * m + k];
                    if f != 0.0 {
                        for c in 0..m {
                            bmat[r * m + c] -= f * bmat[k * m + c];
                            inv[r * m + c] -= f * inv[k * m + c];
                        }
                    }
                }
            }
        }
        self.binv = inv;
        self.pivots_since_refactor = 0;
        self.needs_refactor = false;
        true
    }

    /// Recompute basic values from the nonbasic bound values.
    fn compute_xb(&mut self) {
        let m = self.m;
        let mut r = self.b.clone();
        let mut scratch = Vec::new();
        for j in 0..self.n_struct + m {
            if self.vstat[j] != VStat::Basic && self.xval[j] != 0.0 {
                let xj = self.xval[j];
                let col = self.col_entries(j, &mut scratch);
                for &(row, v) in col {
                    r[row as usize] -= v * xj;
                }
            }
        }
        let mut xb = vec![0.0f64; m];
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            let mut acc = 0.0;
            for k in 0..m {
                acc += row[k] * r[k];
            }
            xb[i] = acc;
        }
        self.xb = xb;
    }

    /// w = B^-1 a_j.
    fn ftran(&mut self, j: usize) {
        let m = self.m;
        self.work_w.clear();
        self.work_w.resize(m, 0.0);
        let mut scratch = Vec::new();
        // borrow dance: copy the sparse column first
        let col: Vec<(u32, f64)> = self.col_entries(j, &mut scratch).to_vec();
        for &(r, v) in &col {
            let r = r as usize;
            for i in 0..m {
                self.work_w[i] += self.binv[i * m + r] * v;
            }
        }
    }

    /// y = cb' B^-1 for the given basic costs.
    fn btran(&mut self, cb: &[f64]) {
        let m = self.m;
        self.work_y.clear();
        self.work_y.resize(m, 0.0);
        for i in 0..m {
            let ci = cb[i];
            if ci != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for k in 0..m {
                    self.work_y[k] += ci * row[k];
                }
            }
        }
    }

    fn reduced_cost(&self, j: usize, cost_j: f64) -> f64 {
        let mut d = cost_j;
        if j < self.n_struct {
            for &(r, v) in &self.cols[j] {
                d -= self.work_y[r as usize] * v;
            }
        } else {
            d -= self.work_y[j - self.n_struct];
        }
        d
    }

    fn infeasibility(&self, i: usize) -> f64 {
        let j = self.basic[i] as usize;
        let x = self.xb[i];
        if x < self.lower[j] - self.feas_tol {
            self.lower[j] - x
        } else if x > self.upper[j] + self.feas_tol {
            x - self.upper[j]
        } else {
            0.0
        }
    }

    fn total_infeasibility(&self) -> f64 {
        (0..self.m).map(|i| self.infeasibility(i)).sum()
    }

    /// One phase: price, ratio test, pivot, until no improving column.
    /// `phase1` switches the costs to the composite infeasibility gradient.
    fn run_phase(
        &mut self,
        phase1: bool,
        iterations: &mut u64,
        max_pivots: u64,
    ) -> Result<PhaseEnd, PhaseEnd> {
        let mut bland = false;
        let mut degen: u32 = 0;
        loop {
            if *iterations >= max_pivots {
                return Err(PhaseEnd::PivotLimit);
            }
            if self.needs_refactor
                || self.pivots_since_refactor >= REFACTOR_INTERVAL
            {
                if !self.refactor() {
                    self.reset_to_slack_basis();
                    if !self.refactor() {
                        // slack basis is the identity; cannot fail
                        unreachable!("identity basis refactor failed");
                    }
                }
                self.compute_xb();
            }
            if phase1 && self.total_infeasibility() <= self.feas_tol {
                return Ok(PhaseEnd::Done);
            }

            // basic costs for pricing
            let m = self.m;
            let mut cb = vec![0.0f64; m];
            for i in 0..m {
                let j = self.basic[i] as usize;
                if phase1 {
                    let x = self.xb[i];
                    if x < self.lower[j] - self.feas_tol {
                        cb[i] = -1.0;
                    } else if x > self.upper[j] + self.feas_tol {
                        cb[i] = 1.0;
                    }
                } else if j < self.n_struct {
                    cb[i] = self.costs[j];
                }
            }
            self.btran(&cb);

            let dtol = if phase1 { 1e-9 } else { self.cost_tol };
            let mut best: Option<(usize, i8, f64)> = None; // col, dir, |d|
            for j in 0..self.n_struct + m {
                match self.vstat[j] {
                    VStat::Basic => continue,
                    _ => {}
                }
                let cost_j = if phase1 {
                    0.0
                } else if j < self.n_struct {
                    self.costs[j]
                } else {
                    0.0
                };
                let d = self.reduced_cost(j, cost_j);
                let (elig, dir) = match self.vstat[j] {
                    VStat::AtLower => (d < -dtol, 1i8),
                    VStat::AtUpper => (d > dtol, -1i8),
                    VStat::FreeZero => (d.abs() > dtol, if d > 0.0 { -1 } else { 1 }),
                    VStat::Basic => unreachable!(),
                };
                if !elig {
                    continue;
                }
                if bland {
                    best = Some((j, dir, d.abs()));
                    break;
                }
                match best {
                    Some((_, _, mag)) if mag >= d.abs() => {}
                    _ => best = Some((j, dir, d.abs())),
                }
            }

            let Some((enter, dir, _)) = best else {
                if phase1 {
                    return if self.total_infeasibility() <= self.feas_tol {
                        Ok(PhaseEnd::Done)
                    } else {
                        Err(PhaseEnd::Infeasible)
                    };
                }
                return Ok(PhaseEnd::Done);
            };

            self.ftran(enter);
            let step = self.ratio_test(enter, dir, phase1);
            *iterations += 1;
            match step {
                Step::Unbounded => {
                    if phase1 {
                        // cannot happen in exact arithmetic; treat the column
                        // as unusable and fall back to Bland to make progress
                        if bland {
                            return Err(PhaseEnd::Infeasible);
                        }
                        bland = true;
                        continue;
                    }
                    return Err(PhaseEnd::Unbounded(self.extract_ray(enter, dir)));
                }
                Step::Flip(t) => {
                    self.apply_flip(enter, dir, t);
                    if t.abs() <= DEGENERATE_STEP {
                        degen += 1;
                    } else {
                        degen = 0;
                        bland = false;
                    }
                }
                Step::Pivot { row, t, to_upper } => {
                    self.apply_pivot(enter, dir, row, t, to_upper);
                    if t.abs() <= DEGENERATE_STEP {
                        degen += 1;
                    } else {
                        degen = 0;
                        bland = false;
                    }
                }
            }
            if degen > DEGENERATE_LIMIT {
                bland = true;
            }
        }
    }

    /// Ratio test for entering column `enter` moving in direction `dir`.
    /// `work_w` must hold B^-1 a_enter.
    fn ratio_test(&self, enter: usize, dir: i8, phase1: bool) -> Step {
        let sigma = dir as f64;
        let mut t_best = f64::INFINITY;
        let mut leave: Option<(usize, bool, f64)> = None; // row, to_upper, |w|

        for i in 0..self.m {
            let w = self.work_w[i];
            if w.abs() <= PIVOT_ZERO {
                continue;
            }
            let j = self.basic[i] as usize;
            let delta = sigma * w; // basic value changes by -delta * t
            let x = self.xb[i];
            let below = phase1 && x < self.lower[j] - self.feas_tol;
            let above = phase1 && x > self.upper[j] + self.feas_tol;
            let (target, to_upper) = if delta > 0.0 {
                // basic decreases
                if below {
                    continue; // already past the lower bound, no block downward
                } else if above {
                    (self.upper[j], true) // stops on reaching feasibility
                } else if self.lower[j].is_finite() {
                    (self.lower[j], false)
                } else {
                    continue;
                }
            } else {
                // basic increases
                if above {
                    continue;
                } else if below {
                    (self.lower[j], false)
                } else if self.upper[j].is_finite() {
                    (self.upper[j], true)
                } else {
                    continue;
                }
            };
            let t = ((x - target) / delta).max(0.0);
            if t < t_best - 1e-12 {
                t_best = t;
                leave = Some((i, to_upper, w.abs()));
            } else if t < t_best + 1e-12 {
                // tie: prefer the larger pivot magnitude, then lower row
                if let Some((_, _, mag)) = leave {
                    if w.abs() > mag {
                        leave = Some((i, to_upper, w.abs()));
                    }
                } else {
                    leave = Some((i, to_upper, w.abs()));
                }
            }
        }

        // entering variable's own opposing bound
        let range = self.upper[enter] - self.lower[enter];
        let t_flip = if range.is_finite() { range } else { f64::INFINITY };

        if t_flip <= t_best {
            if t_flip.is_infinite() {
                return Step::Unbounded;
            }
            return Step::Flip(t_flip);
        }
        match leave {
            Some((row, to_upper, _)) => Step::Pivot {
                row,
                t: t_best,
                to_upper,
            },
            None => Step::Unbounded,
        }
    }

    fn apply_flip(&mut self, enter: usize, dir: i8, t: f64) {
        let sigma = dir as f64;
        for i in 0..self.m {
            self.xb[i] -= sigma * t * self.work_w[i];
        }
        self.xval[enter] += sigma * t;
        self.vstat[enter] = match self.vstat[enter] {
            VStat::AtLower => VStat::AtUpper,
            VStat::AtUpper => VStat::AtLower,
            other => other,
        };
        self.pivots_since_refactor += 1;
    }

    fn apply_pivot(&mut self, enter: usize, dir: i8, row: usize, t: f64, to_upper: bool) {
        let m = self.m;
        let sigma = dir as f64;
        for i in 0..m {
            self.xb[i] -= sigma * t * self.work_w[i];
        }
        let entering_value = self.xval[enter] + sigma * t;
        let leaving = self.basic[row] as usize;
        self.vstat[leaving] = if to_upper { VStat::AtUpper } else { VStat::AtLower };
        self.xval[leaving] = if to_upper {
            self.upper[leaving]
        } else {
            self.lower[leaving]
        };
        self.basic[row] = enter as u32;
        self.vstat[enter] = VStat::Basic;
        self.xb[row] = entering_value;

        // product-form update of the inverse
        let p = self.work_w[row];
        let pinv = 1.0 / p;
        let (head, tail) = self.binv.split_at_mut(row * m);
        let (prow, rest) = tail.split_at_mut(m);
        for v in prow.iter_mut() {
            *v *= pinv;
        }
        for i in 0..row {
            let f = self.work_w[i];
            if f != 0.0 {
                let dst = &mut head[i * m..(i + 1) * m];
                for (d, &s) in dst.iter_mut().zip(prow.iter()) {
                    *d -= f * s;
                }
            }
        }
        for i in (row + 1)..m {
            let f = self.work_w[i];
            if f != 0.0 {
                let dst = &mut rest[(i - row - 1) * m..(i - row) * m];
                for (d, &s) in dst.iter_mut().zip(prow.iter()) {
                    *d -= f * s;
                }
            }
        }
        self.pivots_since_refactor += 1;
    }

    fn extract_ray(&mut self, enter: usize, dir: i8) -> Vec<(usize, f64)> {
        let sigma = dir as f64;
        let mut ray = Vec::new();
        if enter < self.n_struct {
            ray.push((enter, sigma));
        }
        for i in 0..self.m {
            let j = self.basic[i] as usize;
            let d = -sigma * self.work_w[i];
            if j < self.n_struct && d.abs() > PIVOT_ZERO {
                ray.push((j, d));
            }
        }
        ray.sort_unstable_by_key(|&(j, _)| j);
        ray
    }

    fn current_x(&self) -> Vec<f64> {
        let mut x = vec![0.0f64; self.n_struct];
        for j in 0..self.n_struct {
            if self.vstat[j] != VStat::Basic {
                x[j] = self.xval[j];
            }
        }
        for i in 0..self.m {
            let j = self.basic[i] as usize;
            if j < self.n_struct {
                x[j] = self.xb[i];
            }
        }
        x
    }

    /// Solve from the current basis state (or a restored snapshot).
    pub fn solve(&mut self, warm: Option<&Basis>, max_pivots: u64) -> LpSolution {
        if let Some(b) = warm {
            self.restore_basis(b);
        }
        let mut iterations: u64 = 0;
        if !self.needs_refactor {
            // bounds may have moved under nonbasic variables
            self.snap_nonbasic_to_bounds();
            self.compute_xb();
        }

        // phase 1 / phase 2 with a bounded number of clean-up rounds to
        // absorb numerical drift
        for _round in 0..4 {
            match self.run_phase(true, &mut iterations, max_pivots) {
                Ok(_) => {}
                Err(PhaseEnd::PivotLimit) => {
                    return self.finish(LpStatus::PivotLimit, iterations);
                }
                Err(_) => {
                    return self.finish(LpStatus::Infeasible, iterations);
                }
            }
            match self.run_phase(false, &mut iterations, max_pivots) {
                Ok(_) => {}
                Err(PhaseEnd::Unbounded(ray)) => {
                    return self.finish(LpStatus::Unbounded(ray), iterations);
                }
                Err(PhaseEnd::PivotLimit) => {
                    return self.finish(LpStatus::PivotLimit, iterations);
                }
                Err(_) => {
                    return self.finish(LpStatus::Infeasible, iterations);
                }
            }
            // verify feasibility with a fresh factorization
            if !self.refactor() {
                self.reset_to_slack_basis();
                continue;
            }
            self.compute_xb();
            if self.total_infeasibility() <= self.feas_tol {
                return self.finish(LpStatus::Optimal, iterations);
            }
        }
        // Could not stabilize; report the best effort as infeasible only if
        // the residual is genuinely large.
        if self.total_infeasibility() <= 100.0 * self.feas_tol {
            self.finish(LpStatus::Optimal, iterations)
        } else {
            self.finish(LpStatus::Infeasible, iterations)
        }
    }

    fn finish(&mut self, status: LpStatus, iterations: u64) -> LpSolution {
        let x = self.current_x();
        let objective: f64 = (0..self.n_struct).map(|j| self.costs[j] * x[j]).sum();

        // duals with real costs against the final basis
        let m = self.m;
        let mut cb = vec![0.0f64; m];
        for i in 0..m {
            let j = self.basic[i] as usize;
            if j < self.n_struct {
                cb[i] = self.costs[j];
            }
        }
        self.btran(&cb);
        let mut duals = vec![0.0f64; m];
        for i in 0..m {
            duals[i] = self.work_y[i] * self.row_scale[i];
        }
        let mut reduced = vec![0.0f64; self.n_struct];
        for j in 0..self.n_struct {
            reduced[j] = self.reduced_cost(j, self.costs[j]);
        }

        LpSolution {
            status,
            x,
            objective,
            duals,
            reduced_costs: reduced,
            iterations,
        }
    }
}

fn initial_state(lo: f64, hi: f64) -> VStat {
    if lo.is_finite() {
        VStat::AtLower
    } else if hi.is_finite() {
        VStat::AtUpper
    } else {
        VStat::FreeZero
    }
}

enum Step {
    Flip(f64),
    Pivot { row: usize, t: f64, to_upper: bool },
    Unbounded,
}

#[derive(Debug)]
pub(crate) enum PhaseEnd {
    Done,
    Infeasible,
    Unbounded(Vec<(usize, f64)>),
    PivotLimit,
}

/// Solve a pure LP. Integrality flags are ignored; quadratic costs must be
/// absent (use [`super::solve_qp`] for those).
pub fn solve_lp(p: &MipProblem, cfg: &SolverConfig) -> SolveResult {
    assert!(
        !p.has_quadratic(),
        "solve_lp requires q = 0; use solve_qp for quadratic objectives"
    );
    let mut p = p.clone();
    let mut core = match LpCore::new(&mut p, cfg) {
        Ok(c) => c,
        Err(e) => panic!("malformed problem: {e}"),
    };
    let sol = core.solve(None, cfg.max_pivots);
    lp_solution_to_result(&p, sol)
}

pub(crate) fn lp_solution_to_result(p: &MipProblem, sol: LpSolution) -> SolveResult {
    let status = match sol.status {
        LpStatus::Optimal => SolveStatus::Optimal,
        LpStatus::Infeasible => SolveStatus::Infeasible,
        LpStatus::Unbounded(_) => SolveStatus::Unbounded,
        LpStatus::PivotLimit => SolveStatus::IterationLimit,
    };
    SolveResult {
        status,
        x: sol.x,
        objective: sol.objective + p.offset(),
        duals: sol.duals,
        reduced_costs: sol.reduced_costs,
        iterations: sol.iterations,
        node_count: 0,
    }
}

