use super::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

#[test]
fn lp_two_var_vertex() {
    // min -3x - 2y  s.t. x + y <= 2, 0 <= x,y <= 2.
    // Vertex enumeration: (0,0)=0, (2,0)=-6, (0,2)=-4 -> optimum -6 at (2,0).
    let mut p = MipProblem::new();
    let x = p.add_col(-3.0, 0.0, 2.0, false);
    let y = p.add_col(-2.0, 0.0, 2.0, false);
    p.add_row(RowSense::Le, 2.0, &[(x, 1.0), (y, 1.0)]);
    let r = solve_lp(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.objective + 6.0).abs() < 1e-9, "objective {}", r.objective);
    assert!((r.x[x] - 2.0).abs() < 1e-9);
    assert!(r.x[y].abs() < 1e-9);
}

#[test]
fn lp_empty_constraints_stays_at_zero() {
    let mut p = MipProblem::new();
    p.add_col(1.0, 0.0, f64::INFINITY, false);
    p.add_col(0.5, 0.0, f64::INFINITY, false);
    let r = solve_lp(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Optimal);
    assert_eq!(r.x, vec![0.0, 0.0]);
}

#[test]
fn lp_contradictory_rows_infeasible() {
    let mut p = MipProblem::new();
    let x = p.add_col(1.0, f64::NEG_INFINITY, f64::INFINITY, false);
    p.add_row(RowSense::Le, 1.0, &[(x, 1.0)]);
    p.add_row(RowSense::Ge, 2.0, &[(x, 1.0)]);
    let r = solve_lp(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Infeasible);
}

#[test]
fn lp_unbounded_detected() {
    let mut p = MipProblem::new();
    let x = p.add_col(-1.0, 0.0, f64::INFINITY, false);
    let y = p.add_col(0.0, 0.0, f64::INFINITY, false);
    p.add_row(RowSense::Le, 5.0, &[(y, 1.0)]);
    let _ = x;
    let r = solve_lp(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Unbounded);
}

#[test]
fn lp_equality_and_ge_rows() {
    // min x + y  s.t. x + y = 3, x - y >= 1, x,y >= 0 -> (2,1) obj 3
    let mut p = MipProblem::new();
    let x = p.add_col(1.0, 0.0, f64::INFINITY, false);
    let y = p.add_col(1.0, 0.0, f64::INFINITY, false);
    p.add_row(RowSense::Eq, 3.0, &[(x, 1.0), (y, 1.0)]);
    p.add_row(RowSense::Ge, 1.0, &[(x, 1.0), (y, -1.0)]);
    let r = solve_lp(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.objective - 3.0).abs() < 1e-9);
    assert!((r.x[x] - 2.0).abs() < 1e-8 || (r.x[x] - 3.0).abs() < 1e-8);
}

#[test]
fn lp_free_variable() {
    // min x s.t. x >= -7 (via row), x free -> x = -7
    let mut p = MipProblem::new();
    let x = p.add_col(1.0, f64::NEG_INFINITY, f64::INFINITY, false);
    p.add_row(RowSense::Ge, -7.0, &[(x, 1.0)]);
    let r = solve_lp(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.x[x] + 7.0).abs() < 1e-9);
}

#[test]
fn qp_interior_minimum() {
    // min (x-3)^2 = x^2 - 6x + 9, x in [0,10] -> x = 3
    let mut p = MipProblem::new();
    let x = p.add_col(-6.0, 0.0, 10.0, false);
    p.set_quadratic(x, 1.0);
    p.set_offset(9.0);
    let r = solve_qp(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.x[x] - 3.0).abs() < 1e-5, "x = {}", r.x[x]);
    assert!(r.objective.abs() < 1e-9, "objective {}", r.objective);
}

#[test]
fn qp_active_bound() {
    // min (x-3)^2, x in [0,2] -> x = 2, objective 1
    let mut p = MipProblem::new();
    let x = p.add_col(-6.0, 0.0, 2.0, false);
    p.set_quadratic(x, 1.0);
    p.set_offset(9.0);
    let r = solve_qp(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.x[x] - 2.0).abs() < 1e-7);
    assert!((r.objective - 1.0).abs() < 1e-7);
}

#[test]
fn qp_with_row_constraint() {
    // min (x-3)^2 + (y-1)^2 s.t. x + y <= 2 -> (2, 0), objective 2
    let mut p = MipProblem::new();
    let x = p.add_col(-6.0, 0.0, 10.0, false);
    let y = p.add_col(-2.0, 0.0, 10.0, false);
    p.set_quadratic(x, 1.0);
    p.set_quadratic(y, 1.0);
    p.set_offset(10.0);
    p.add_row(RowSense::Le, 2.0, &[(x, 1.0), (y, 1.0)]);
    let r = solve_qp(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.objective - 2.0).abs() < 1e-6, "objective {}", r.objective);
    assert!((r.x[x] - 2.0).abs() < 1e-4, "x {}", r.x[x]);
    assert!(r.x[y].abs() < 1e-4, "y {}", r.x[y]);
}

#[test]
fn qp_zero_q_equals_lp() {
    let mut p = MipProblem::new();
    let x = p.add_col(-3.0, 0.0, 2.0, false);
    let y = p.add_col(-2.0, 0.0, 2.0, false);
    p.add_row(RowSense::Le, 2.0, &[(x, 1.0), (y, 1.0)]);
    let a = solve_lp(&p, &cfg());
    let b = solve_qp(&p, &cfg());
    assert_eq!(a.status, b.status);
    assert_eq!(a.x, b.x);
    assert_eq!(a.objective, b.objective);
}

/// Long-run projected gradient descent on a box-constrained diagonal QP.
fn projected_gradient_oracle(c: &[f64], q: &[f64], lo: &[f64], hi: &[f64]) -> Vec<f64> {
    let n = c.len();
    let qmax = q.iter().cloned().fold(0.0f64, f64::max);
    let step = 1.0 / (2.0 * qmax + 1.0);
    let mut x: Vec<f64> = (0..n).map(|j| 0.5 * (lo[j] + hi[j])).collect();
    for _ in 0..2_000_000 {
        let mut moved = 0.0f64;
        for j in 0..n {
            let g = c[j] + 2.0 * q[j] * x[j];
            let nx = (x[j] - step * g).clamp(lo[j], hi[j]);
            moved = moved.max((nx - x[j]).abs());
            x[j] = nx;
        }
        if moved < 1e-13 {
            break;
        }
    }
    x
}

#[test]
fn qp_random_box_matches_projected_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..50 {
        let n = rng.gen_range(1..=6);
        let mut p = MipProblem::new();
        let mut c = Vec::new();
        let mut q = Vec::new();
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for _ in 0..n {
            let cj: f64 = rng.gen_range(-5.0..5.0);
            let qj: f64 = rng.gen_range(0.1..3.0);
            let l: f64 = rng.gen_range(-4.0..0.0);
            let h: f64 = rng.gen_range(0.0..4.0);
            let col = p.add_col(cj, l, h, false);
            p.set_quadratic(col, qj);
            c.push(cj);
            q.push(qj);
            lo.push(l);
            hi.push(h);
        }
        let r = solve_qp(&p, &cfg());
        assert_eq!(r.status, SolveStatus::Optimal, "trial {trial}");
        let oracle = projected_gradient_oracle(&c, &q, &lo, &hi);
        let oracle_obj: f64 = (0..n).map(|j| c[j] * oracle[j] + q[j] * oracle[j] * oracle[j]).sum();
        assert!(
            (r.objective - oracle_obj).abs() <= 1e-6 * (1.0 + oracle_obj.abs()),
            "trial {trial}: objective {} vs oracle {}",
            r.objective,
            oracle_obj
        );
        for j in 0..n {
            assert!(
                (r.x[j] - oracle[j]).abs() < 1e-4,
                "trial {trial} col {j}: {} vs {}",
                r.x[j],
                oracle[j]
            );
        }
    }
}

#[test]
fn mip_two_var_enumeration() {
    // min -3x - 2y, x + y <= 2, x,y in {0,1,2}.
    // Enumeration: best is x=2,y=0 -> -6.
    let mut p = MipProblem::new();
    let x = p.add_col(-3.0, 0.0, 2.0, true);
    let y = p.add_col(-2.0, 0.0, 2.0, true);
    p.add_row(RowSense::Le, 2.0, &[(x, 1.0), (y, 1.0)]);
    let r = solve_mip(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.objective + 6.0).abs() < 1e-9);
}

#[test]
fn mip_all_continuous_delegates() {
    let mut p = MipProblem::new();
    let x = p.add_col(-6.0, 0.0, 2.0, false);
    p.set_quadratic(x, 1.0);
    p.set_offset(9.0);
    let a = solve_mip(&p, &cfg());
    let b = solve_qp(&p, &cfg());
    assert_eq!(a.status, b.status);
    assert_eq!(a.objective, b.objective);
}

#[test]
fn mip_fractional_equality_infeasible() {
    let mut p = MipProblem::new();
    let x = p.add_col(0.0, 0.0, 1.0, true);
    p.add_row(RowSense::Eq, 0.5, &[(x, 1.0)]);
    let r = solve_mip(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Infeasible);
}

#[test]
fn miqp_integer_quadratic() {
    // min (x - 1.3)^2, x integer in [0,5] -> x = 1, objective 0.09
    let mut p = MipProblem::new();
    let x = p.add_col(-2.6, 0.0, 5.0, true);
    p.set_quadratic(x, 1.0);
    p.set_offset(1.69);
    let r = solve_mip(&p, &cfg());
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.x[x] - 1.0).abs() < 1e-6);
    assert!((r.objective - 0.09).abs() < 1e-6, "objective {}", r.objective);
}

fn random_mip(rng: &mut ChaCha8Rng, with_quad: bool) -> MipProblem {
    let n_int = rng.gen_range(1..=6);
    let n_cont = rng.gen_range(0..=6);
    let mut p = MipProblem::new();
    for _ in 0..n_int {
        let lo = rng.gen_range(-2..=0) as f64;
        let span = rng.gen_range(1..=3) as f64;
        let c = rng.gen_range(-3.0..3.0);
        p.add_col(c, lo, lo + span, true);
    }
    for _ in 0..n_cont {
        let lo = rng.gen_range(-3.0..0.0);
        let hi = lo + rng.gen_range(0.5..4.0);
        let c = rng.gen_range(-3.0..3.0);
        let col = p.add_col(c, lo, hi, false);
        if with_quad && rng.gen_bool(0.5) {
            p.set_quadratic(col, rng.gen_range(0.05..2.0));
        }
    }
    let n = p.num_cols();
    // random feasible point to anchor row rhs
    let x0: Vec<f64> = (0..n)
        .map(|j| {
            let (lo, hi) = p.bounds(j);
            let v = rng.gen_range(lo..=hi);
            if p.is_integer(j) {
                v.round().clamp(lo, hi)
            } else {
                v
            }
        })
        .collect();
    let rows = rng.gen_range(1..=5);
    for _ in 0..rows {
        let mut coeffs = Vec::new();
        let mut act = 0.0;
        for j in 0..n {
            if rng.gen_bool(0.6) {
                let a = rng.gen_range(-2.0..2.0);
                coeffs.push((j, a));
                act += a * x0[j];
            }
        }
        if coeffs.is_empty() {
            continue;
        }
        let slack: f64 = rng.gen_range(0.0..2.0);
        match rng.gen_range(0..3) {
            0 => p.add_row(RowSense::Le, act + slack, &coeffs),
            1 => p.add_row(RowSense::Ge, act - slack, &coeffs),
            _ => p.add_row(RowSense::Eq, act, &coeffs),
        };
    }
    p
}

#[test]
fn mip_matches_brute_force_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..60 {
        let p = random_mip(&mut rng, trial % 2 == 0);
        let bb = solve_mip(&p, &cfg());
        let bf = brute_force_mip(&p, &cfg()).expect("within enumeration budget");
        assert_eq!(bb.status, bf.status, "trial {trial}: {:?}", p);
        if bb.status == SolveStatus::Optimal {
            assert!(
                (bb.objective - bf.objective).abs() <= 1e-6 * (1.0 + bf.objective.abs()),
                "trial {trial}: bb {} vs brute {}",
                bb.objective,
                bf.objective
            );
        }
    }
}

#[test]
fn lp_strong_duality_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..60 {
        let mut p = random_mip(&mut rng, false);
        // relax integrality -> pure LP
        for j in 0..p.num_cols() {
            p.set_integer(j, false);
        }
        let r = solve_lp(&p, &cfg());
        if r.status != SolveStatus::Optimal {
            continue;
        }
        let dual = r.dual_objective(&p);
        assert!(
            (r.objective - dual).abs() <= 1e-6 * (1.0 + r.objective.abs()),
            "trial {trial}: primal {} dual {}",
            r.objective,
            dual
        );
        assert!(p.feasibility_residual(&r.x) <= 1e-6);
    }
}

#[test]
fn solver_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let p = random_mip(&mut rng, true);
    let a = solve_mip(&p, &cfg());
    let b = solve_mip(&p, &cfg());
    assert_eq!(a.status, b.status);
    assert_eq!(a.x, b.x);
    assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    assert_eq!(a.iterations, b.iterations);
    assert_eq!(a.node_count, b.node_count);
}

#[test]
fn mip_warm_start_keeps_optimum() {
    let mut p = MipProblem::new();
    let x = p.add_col(-3.0, 0.0, 2.0, true);
    let y = p.add_col(-2.0, 0.0, 2.0, true);
    p.add_row(RowSense::Le, 2.0, &[(x, 1.0), (y, 1.0)]);
    let start = MipStart {
        values: vec![(x, 1.0), (y, 1.0)],
    };
    let r = solve_mip_with_start(&p, &cfg(), Some(&start));
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.objective + 6.0).abs() < 1e-9);
}

#[test]
fn brute_force_rejects_oversized_enumeration() {
    let mut p = MipProblem::new();
    for _ in 0..40 {
        p.add_col(1.0, 0.0, 3.0, true);
    }
    let err = brute_force_mip(&p, &cfg()).unwrap_err();
    assert!(matches!(err, ProblemError::EnumerationTooLarge { .. }));
}

#[test]
fn dump_load_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let p = random_mip(&mut rng, true);
        let text = io::dump_problem(&p);
        let q = io::load_problem(&text).expect("parse");
        assert_eq!(p.num_rows(), q.num_rows());
        assert_eq!(p.num_cols(), q.num_cols());
        let a = solve_mip(&p, &cfg());
        let b = solve_mip(&q, &cfg());
        assert_eq!(a.status, b.status);
        if a.status == SolveStatus::Optimal {
            assert!((a.objective - b.objective).abs() < 1e-12);
        }
    }
}

#[test]
fn sparse_matrix_rejects_duplicates() {
    let mut p = MipProblem::new();
    let x = p.add_col(1.0, 0.0, 1.0, false);
    p.add_row(RowSense::Le, 1.0, &[(x, 1.0), (x, 2.0)]);
    assert!(matches!(
        p.validate(),
        Err(ProblemError::DuplicateEntry { .. })
    ));
}

#[test]
fn problem_rejects_negative_quadratic() {
    let mut p = MipProblem::new();
    let x = p.add_col(1.0, 0.0, 1.0, false);
    p.set_quadratic(x, -1.0);
    assert!(matches!(p.validate(), Err(ProblemError::NonConvex { .. })));
}
// scratch debug — appended as a test
#[test]
fn qp_debug_trace() {
    let mut p = MipProblem::new();
    let x = p.add_col(-6.0, 0.0, 10.0, false);
    p.set_quadratic(x, 1.0);
    p.set_offset(9.0);
    let r = solve_qp(&p, &cfg());
    eprintln!("status {:?} x {} obj {} iters {}", r.status, r.x[x], r.objective, r.iterations);
}
