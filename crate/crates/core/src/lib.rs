//! Integrated space campaign planning and spacecraft sizing.
//!
//! The campaign is modeled as a time-expanded multicommodity network flow
//! whose vehicle designs are themselves decision variables. The integrated
//! problem is solved by decomposition: a mixed-integer quadratic mission
//! planning subproblem and per-vehicle nonlinear sizing subproblems are
//! coordinated through augmented Lagrangian penalties, seeded by a
//! piecewise-linear MILP initializer. A metaheuristic harness (GA / PSO over
//! vehicle capacities with an embedded MILP evaluation) serves as the
//! comparison baseline.

pub mod optim;
