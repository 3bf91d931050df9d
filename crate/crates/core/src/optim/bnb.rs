//! Best-first branch-and-bound over the QP/LP engine.
//!
//! Nodes are ordered by relaxation bound with node id as the tie-break.
//! Branching picks the most fractional flagged column (ties to the lowest
//! column index). Warm starts restore the parent's final basis.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::qp::QpEngine;
use super::{MipProblem, MipStart, ProblemError, SolveResult, SolveStatus, SolverConfig};

struct HeapEntry {
    bound: f64,
    id: u64,
    record: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; invert for best-first (lowest bound).
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.id.cmp(&self.id))
    }
}

struct NodeRecord {
    parent: Option<usize>,
    /// Bound change that created this node.
    col: usize,
    lo: f64,
    hi: f64,
    /// Basis after the parent was solved (restored before solving this node).
    basis: super::simplex::Basis,
}

/// Branch-and-bound. Returns the proven optimum when the relative gap closes
/// below `cfg.mip_gap`; `IterationLimit` carries the incumbent if the node
/// budget runs out.
pub fn solve_mip(p: &MipProblem, cfg: &SolverConfig) -> SolveResult {
    solve_mip_with_start(p, cfg, None)
}

/// Like [`solve_mip`], seeding the incumbent from an integer assignment
/// (typically the previous solve in an iterative scheme).
pub fn solve_mip_with_start(
    p: &MipProblem,
    cfg: &SolverConfig,
    start: Option<&MipStart>,
) -> SolveResult {
    let int_cols: Vec<usize> = p.integer_cols().collect();
    if int_cols.is_empty() {
        return super::qp::solve_qp(p, cfg);
    }
    let mut engine = match QpEngine::new(p, cfg) {
        Ok(e) => e,
        Err(e) => panic!("malformed problem: {e}"),
    };

    // Integral tightening of integer bounds.
    let mut base_bounds: Vec<(f64, f64)> = Vec::with_capacity(int_cols.len());
    for &j in &int_cols {
        let (lo, hi) = engine.bounds(j);
        let tlo = if lo.is_finite() { (lo - cfg.int_tol).ceil() } else { lo };
        let thi = if hi.is_finite() { (hi + cfg.int_tol).floor() } else { hi };
        if tlo > thi {
            return SolveResult::empty(SolveStatus::Infeasible);
        }
        engine.set_bounds(j, tlo, thi);
        base_bounds.push((tlo, thi));
    }

    let mut iterations = 0u64;
    let mut node_count = 0u64;
    let mut incumbent: Option<(Vec<f64>, f64)> = None;

    if let Some(ms) = start {
        for &(col, val) in &ms.values {
            let v = val.round();
            let (lo, hi) = engine.bounds(col);
            engine.set_bounds(col, v.max(lo).min(hi), v.max(lo).min(hi));
        }
        let out = engine.solve(None, cfg);
        iterations += out.iterations;
        if out.status == SolveStatus::Optimal && integral_ok(&out.x, &int_cols, cfg.int_tol) {
            incumbent = Some((out.x, out.objective));
        }
        for (k, &j) in int_cols.iter().enumerate() {
            engine.set_bounds(j, base_bounds[k].0, base_bounds[k].1);
        }
    }

    let mut records: Vec<NodeRecord> = Vec::new();
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    let mut next_id = 0u64;
    let mut status = SolveStatus::Optimal;

    // Root node.
    let root = engine.solve(None, cfg);
    iterations += root.iterations;
    node_count += 1;
    match root.status {
        SolveStatus::Infeasible => {
            return SolveResult {
                status: SolveStatus::Infeasible,
                iterations,
                node_count,
                ..SolveResult::empty(SolveStatus::Infeasible)
            };
        }
        SolveStatus::Unbounded => {
            return SolveResult {
                status: SolveStatus::Unbounded,
                iterations,
                node_count,
                ..SolveResult::empty(SolveStatus::Unbounded)
            };
        }
        SolveStatus::IterationLimit => status = SolveStatus::IterationLimit,
        SolveStatus::Optimal => {}
    }
    if root.status == SolveStatus::Optimal {
        match pick_branch(&root.x, &int_cols, cfg.int_tol) {
            None => {
                let better = incumbent
                    .as_ref()
                    .map(|&(_, v)| root.objective < v)
                    .unwrap_or(true);
                if better {
                    incumbent = Some((root.x.clone(), root.objective));
                }
            }
            Some(col) => {
                let basis = engine.snapshot_basis();
                let x = root.x[col];
                let (lo, hi) = engine.bounds(col);
                records.push(NodeRecord {
                    parent: None,
                    col,
                    lo,
                    hi: x.floor(),
                    basis: basis.clone(),
                });
                heap.push(HeapEntry {
                    bound: root.bound,
                    id: next_id,
                    record: records.len() - 1,
                });
                next_id += 1;
                records.push(NodeRecord {
                    parent: None,
                    col,
                    lo: x.ceil(),
                    hi,
                    basis,
                });
                heap.push(HeapEntry {
                    bound: root.bound,
                    id: next_id,
                    record: records.len() - 1,
                });
                next_id += 1;
            }
        }
    }

    while let Some(entry) = heap.pop() {
        let cutoff = incumbent
            .as_ref()
            .map(|&(_, v)| v - cfg.mip_gap * (1.0 + v.abs()))
            .unwrap_or(f64::INFINITY);
        if entry.bound >= cutoff {
            // best-first: every remaining node is at least as bad
            break;
        }
        if node_count >= cfg.max_nodes {
            status = SolveStatus::IterationLimit;
            break;
        }
        node_count += 1;

        // Reset integer bounds, then intersect the chain of branch changes.
        for (k, &j) in int_cols.iter().enumerate() {
            engine.set_bounds(j, base_bounds[k].0, base_bounds[k].1);
        }
        let mut cursor = Some(entry.record);
        let mut infeasible_chain = false;
        while let Some(r) = cursor {
            let rec = &records[r];
            let (lo, hi) = engine.bounds(rec.col);
            let nlo = lo.max(rec.lo);
            let nhi = hi.min(rec.hi);
            if nlo > nhi {
                infeasible_chain = true;
                break;
            }
            engine.set_bounds(rec.col, nlo, nhi);
            cursor = rec.parent;
        }
        if infeasible_chain {
            continue;
        }

        let parent_basis = records[entry.record].basis.clone();
        let out = engine.solve(Some(&parent_basis), cfg);
        iterations += out.iterations;
        match out.status {
            SolveStatus::Infeasible => continue,
            SolveStatus::Unbounded => continue,
            SolveStatus::IterationLimit => {
                status = SolveStatus::IterationLimit;
                continue;
            }
            SolveStatus::Optimal => {}
        }
        if out.bound >= cutoff {
            continue;
        }
        match pick_branch(&out.x, &int_cols, cfg.int_tol) {
            None => {
                let better = incumbent
                    .as_ref()
                    .map(|&(_, v)| out.objective < v)
                    .unwrap_or(true);
                if better {
                    incumbent = Some((out.x.clone(), out.objective));
                }
            }
            Some(col) => {
                let basis = engine.snapshot_basis();
                let x = out.x[col];
                let (lo, hi) = engine.bounds(col);
                records.push(NodeRecord {
                    parent: Some(entry.record),
                    col,
                    lo,
                    hi: x.floor(),
                    basis: basis.clone(),
                });
                heap.push(HeapEntry {
                    bound: out.bound,
                    id: next_id,
                    record: records.len() - 1,
                });
                next_id += 1;
                records.push(NodeRecord {
                    parent: Some(entry.record),
                    col,
                    lo: x.ceil(),
                    hi,
                    basis,
                });
                heap.push(HeapEntry {
                    bound: out.bound,
                    id: next_id,
                    record: records.len() - 1,
                });
                next_id += 1;
            }
        }
    }

    match incumbent {
        Some((x, obj)) => SolveResult {
            status,
            x,
            objective: obj,
            duals: Vec::new(),
            reduced_costs: Vec::new(),
            iterations,
            node_count,
        },
        None => {
            let final_status = if status == SolveStatus::IterationLimit {
                SolveStatus::IterationLimit
            } else {
                SolveStatus::Infeasible
            };
            SolveResult {
                status: final_status,
                iterations,
                node_count,
                ..SolveResult::empty(final_status)
            }
        }
    }
}

fn integral_ok(x: &[f64], int_cols: &[usize], tol: f64) -> bool {
    int_cols.iter().all(|&j| (x[j] - x[j].round()).abs() <= tol)
}

/// Most fractional flagged column; ties go to the lowest column index.
fn pick_branch(x: &[f64], int_cols: &[usize], tol: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &j in int_cols {
        let frac = x[j] - x[j].floor();
        let dist = (frac - 0.5).abs();
        if (x[j] - x[j].round()).abs() <= tol {
            continue;
        }
        match best {
            Some((_, d)) if d <= dist => {}
            _ => best = Some((j, dist)),
        }
    }
    best.map(|(j, _)| j)
}

/// Exhaustive oracle: enumerate every integer assignment within bounds and
/// solve the continuous remainder. Errors when the enumeration would exceed
/// `cfg.enumeration_limit`.
pub fn brute_force_mip(p: &MipProblem, cfg: &SolverConfig) -> Result<SolveResult, ProblemError> {
    let int_cols: Vec<usize> = p.integer_cols().collect();
    if int_cols.is_empty() {
        return Ok(super::qp::solve_qp(p, cfg));
    }
    let mut ranges: Vec<(i64, i64)> = Vec::with_capacity(int_cols.len());
    let mut combos: u128 = 1;
    for &j in &int_cols {
        let (lo, hi) = p.bounds(j);
        if !lo.is_finite() || !hi.is_finite() {
            return Err(ProblemError::UnboundedInteger { col: j });
        }
        let a = (lo - cfg.int_tol).ceil() as i64;
        let b = (hi + cfg.int_tol).floor() as i64;
        if a > b {
            return Ok(SolveResult::empty(SolveStatus::Infeasible));
        }
        ranges.push((a, b));
        combos = combos.saturating_mul((b - a + 1) as u128);
        if combos > cfg.enumeration_limit {
            return Err(ProblemError::EnumerationTooLarge {
                combinations: combos,
                limit: cfg.enumeration_limit,
            });
        }
    }

    let mut engine = QpEngine::new(p, cfg)?;
    let mut assign: Vec<i64> = ranges.iter().map(|&(a, _)| a).collect();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut iterations = 0u64;
    let mut tested = 0u64;
    loop {
        for (k, &j) in int_cols.iter().enumerate() {
            engine.set_bounds(j, assign[k] as f64, assign[k] as f64);
        }
        let out = engine.solve(None, cfg);
        iterations += out.iterations;
        tested += 1;
        if out.status == SolveStatus::Optimal {
            let better = best.as_ref().map(|&(_, v)| out.objective < v).unwrap_or(true);
            if better {
                best = Some((out.x, out.objective));
            }
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == assign.len() {
                let result = match best {
                    Some((x, obj)) => SolveResult {
                        status: SolveStatus::Optimal,
                        x,
                        objective: obj,
                        duals: Vec::new(),
                        reduced_costs: Vec::new(),
                        iterations,
                        node_count: tested,
                    },
                    None => SolveResult {
                        status: SolveStatus::Infeasible,
                        iterations,
                        node_count: tested,
                        ..SolveResult::empty(SolveStatus::Infeasible)
                    },
                };
                return Ok(result);
            }
            if assign[k] < ranges[k].1 {
                assign[k] += 1;
                break;
            }
            assign[k] = ranges[k].0;
            k += 1;
        }
    }
}
