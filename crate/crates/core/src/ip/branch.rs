use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use super::simplex::{solve_relaxation, LpOutcome};
use super::{
    satisfies, IntegerProgram, Sense, Solution, SolveStatus, SolverError, INTEGRALITY_TOLERANCE,
};

/// Objective values closer than this are treated as equal when pruning.
const OBJECTIVE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct SolveLimits {
    pub max_nodes: usize,
    pub time_limit: Option<Duration>,
}

impl Default for SolveLimits {
    fn default() -> Self {
        Self {
            max_nodes: 1_000_000,
            time_limit: None,
        }
    }
}

struct Node {
    /// Relaxation bound, expressed as a score to maximize.
    bound: f64,
    depth: usize,
    seq: u64,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // Max-heap: best bound first, then deepest, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

/// Solves `ip` to proven optimality with default limits.
pub fn solve(ip: &IntegerProgram) -> Result<Solution, SolverError> {
    solve_with(ip, &SolveLimits::default())
}

pub fn solve_with(ip: &IntegerProgram, limits: &SolveLimits) -> Result<Solution, SolverError> {
    ip.validate()?;
    let started = Instant::now();

    let rows = ip.nonempty_rows();
    for c in &ip.constraints {
        if c.coefficients.iter().all(|&(_, a)| a == 0.0) && !satisfies(0.0, c.relation, c.rhs) {
            return Ok(Solution::without_values(
                SolveStatus::Infeasible,
                Some(c.label.clone()),
            ));
        }
    }

    let score_sign = match ip.objective.sense {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };
    // With integral objective coefficients every integer point has an
    // integral objective, so relaxation bounds can be rounded down.
    let integral_objective = ip
        .objective
        .coefficients
        .iter()
        .all(|&(_, c)| c.fract() == 0.0);
    let to_bound = |objective: f64| {
        let s = score_sign * objective;
        if integral_objective {
            (s + INTEGRALITY_TOLERANCE).floor()
        } else {
            s
        }
    };

    let lower: Vec<f64> = ip.variables.iter().map(|v| v.lower as f64).collect();
    let upper: Vec<f64> = ip
        .variables
        .iter()
        .map(|v| v.upper.map_or(f64::INFINITY, |u| u as f64))
        .collect();

    let (root_x, root_obj) = match solve_relaxation(ip, &rows, &lower, &upper)? {
        LpOutcome::Optimal { x, objective } => (x, objective),
        LpOutcome::Infeasible { row } => {
            return Ok(Solution::without_values(
                SolveStatus::Infeasible,
                row.map(|r| ip.constraints[r].label.clone()),
            ))
        }
        LpOutcome::Unbounded => return Ok(Solution::without_values(SolveStatus::Unbounded, None)),
    };

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Node {
        bound: to_bound(root_obj),
        depth: 0,
        seq,
        lower,
        upper,
        x: root_x,
    });

    let mut incumbent: Option<(f64, Vec<i64>)> = None;
    let mut processed = 0usize;

    while let Some(node) = heap.pop() {
        if let Some((best, _)) = &incumbent {
            // Best-first: nothing left in the heap can beat the incumbent.
            if node.bound <= best + OBJECTIVE_TOLERANCE {
                break;
            }
        }
        processed += 1;
        if processed > limits.max_nodes {
            return Err(SolverError::NodeLimit(limits.max_nodes));
        }
        if let Some(limit) = limits.time_limit {
            if started.elapsed() > limit {
                return Err(SolverError::TimeLimit(limit));
            }
        }

        let mut branch_on = branching_variable(&node.x, INTEGRALITY_TOLERANCE);
        if branch_on.is_none() && !rounds_feasibly(ip, &rows, &node.x) {
            // Rounding an almost-integral point broke a row (money rows have
            // large coefficients); keep branching on the residual fractions.
            branch_on = branching_variable(&node.x, 0.0);
        }
        match branch_on {
            None => {
                let values: Vec<i64> = node.x.iter().map(|v| v.round() as i64).collect();
                let score = score_sign * ip.objective_value(&values);
                let improves = incumbent
                    .as_ref()
                    .is_none_or(|(best, _)| score > best + 1e-9);
                if improves {
                    incumbent = Some((score, values));
                }
            }
            Some(j) => {
                let value = node.x[j];
                let mut down_upper = node.upper.clone();
                down_upper[j] = value.floor();
                let mut up_lower = node.lower.clone();
                up_lower[j] = value.ceil();
                let children = [
                    (node.lower.clone(), down_upper),
                    (up_lower, node.upper.clone()),
                ];
                for (lo, hi) in children {
                    if let LpOutcome::Optimal { x, objective } =
                        solve_relaxation(ip, &rows, &lo, &hi)?
                    {
                        let bound = to_bound(objective);
                        let promising = incumbent
                            .as_ref()
                            .is_none_or(|(best, _)| bound > best + OBJECTIVE_TOLERANCE);
                        if promising {
                            seq += 1;
                            heap.push(Node {
                                bound,
                                depth: node.depth + 1,
                                seq,
                                lower: lo,
                                upper: hi,
                                x,
                            });
                        }
                    }
                }
            }
        }
    }

    Ok(match incumbent {
        Some((_, values)) => ip.optimal_solution(values),
        None => Solution::without_values(SolveStatus::Infeasible, None),
    })
}

/// Variable whose relaxed value is farthest from an integer; lowest index wins ties.
fn branching_variable(x: &[f64], tolerance: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, &v) in x.iter().enumerate() {
        let frac = v - v.floor();
        let dist = frac.min(1.0 - frac);
        if dist > tolerance && best.is_none_or(|(_, d)| dist > d) {
            best = Some((j, dist));
        }
    }
    best.map(|(j, _)| j)
}

fn rounds_feasibly(ip: &IntegerProgram, rows: &[usize], x: &[f64]) -> bool {
    let values: Vec<i64> = x.iter().map(|v| v.round() as i64).collect();
    rows.iter().all(|&r| {
        let c = &ip.constraints[r];
        satisfies(c.lhs(&values), c.relation, c.rhs)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ip::{brute_force_solve, validate_solution, LinearConstraint, Relation};

    #[test]
    fn saturates_single_row() {
        let mut ip = IntegerProgram::new(Sense::Maximize);
        let x1 = ip.add_variable("x1", 0, None);
        let x2 = ip.add_variable("x2", 0, None);
        ip.add_constraint(LinearConstraint::new("sum", [(x1, 1.0), (x2, 1.0)], Relation::Le, 3.0));
        ip.add_constraint(LinearConstraint::new("x1cap", [(x1, 1.0)], Relation::Le, 2.0));
        ip.set_objective([(x1, 1.0), (x2, 1.0)]);
        let sol = solve(&ip).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.objective, 3.0);
        assert!(validate_solution(&ip, &sol).is_empty());
    }

    #[test]
    fn bound_tight_minimum() {
        let mut ip = IntegerProgram::new(Sense::Minimize);
        let x = ip.add_variable("x", 0, None);
        ip.add_constraint(LinearConstraint::new("floor", [(x, 1.0)], Relation::Ge, 3.0));
        ip.set_objective([(x, 2.0)]);
        let sol = solve(&ip).unwrap();
        assert_eq!(sol.objective, 6.0);
        assert_eq!(sol.values, vec![3]);
    }

    #[test]
    fn knapsack_needs_branching() {
        // max 5a + 4b + 3c s.t. 2a + 3b + c <= 5, 4a + b + 2c <= 11, 3a + 4b + 2c <= 8
        let mut ip = IntegerProgram::new(Sense::Maximize);
        let a = ip.add_variable("a", 0, Some(3));
        let b = ip.add_variable("b", 0, Some(3));
        let c = ip.add_variable("c", 0, Some(3));
        ip.add_constraint(LinearConstraint::new("r1", [(a, 2.0), (b, 3.0), (c, 1.0)], Relation::Le, 5.0));
        ip.add_constraint(LinearConstraint::new("r2", [(a, 4.0), (b, 1.0), (c, 2.0)], Relation::Le, 11.0));
        ip.add_constraint(LinearConstraint::new("r3", [(a, 3.0), (b, 4.0), (c, 2.0)], Relation::Le, 8.0));
        ip.set_objective([(a, 5.0), (b, 4.0), (c, 3.0)]);
        let sol = solve(&ip).unwrap();
        let oracle = brute_force_solve(&ip).unwrap();
        assert_eq!(sol.objective, oracle.objective);
        assert_eq!(sol.objective, 13.0);
    }

    #[test]
    fn integer_infeasible_but_lp_feasible() {
        // 2x = 1 has no integer solution.
        let mut ip = IntegerProgram::new(Sense::Maximize);
        let x = ip.add_variable("x", 0, Some(5));
        ip.add_constraint(LinearConstraint::new("half", [(x, 2.0)], Relation::Eq, 1.0));
        ip.set_objective([(x, 1.0)]);
        assert_eq!(solve(&ip).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn node_limit_is_an_error() {
        let mut hard = IntegerProgram::new(Sense::Maximize);
        let vars: Vec<_> = (0..6).map(|i| hard.add_variable(format!("v{i}"), 0, Some(1))).collect();
        hard.add_constraint(LinearConstraint::new(
            "odd",
            vars.iter().map(|&v| (v, 2.0)),
            Relation::Le,
            7.0,
        ));
        hard.set_objective(vars.iter().map(|&v| (v, 1.5)));
        assert_eq!(
            solve_with(&hard, &SolveLimits { max_nodes: 1, time_limit: None }),
            Err(SolverError::NodeLimit(1))
        );
    }

    #[test]
    fn deterministic() {
        let mut ip = IntegerProgram::new(Sense::Maximize);
        let v: Vec<_> = (0..5).map(|i| ip.add_variable(format!("v{i}"), 0, Some(3))).collect();
        ip.add_constraint(LinearConstraint::new(
            "w",
            v.iter().enumerate().map(|(i, &x)| (x, 1.0 + i as f64 * 0.7)),
            Relation::Le,
            9.3,
        ));
        ip.set_objective(v.iter().enumerate().map(|(i, &x)| (x, 2.0 + (i % 3) as f64)));
        assert_eq!(solve(&ip).unwrap(), solve(&ip).unwrap());
    }

    fn random_ip(seed: u64) -> IntegerProgram {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let sense = if rng.gen_bool(0.5) { Sense::Maximize } else { Sense::Minimize };
        let mut ip = IntegerProgram::new(sense);
        let n = rng.gen_range(1..=8);
        let vars: Vec<_> = (0..n).map(|i| ip.add_variable(format!("x{i}"), 0, Some(rng.gen_range(0..=4)))).collect();
        for r in 0..rng.gen_range(0..=6) {
            let mut terms = Vec::new();
            for &v in &vars {
                if rng.gen_bool(0.6) {
                    terms.push((v, f64::from(rng.gen_range(-3..=4))));
                }
            }
            let rel = [Relation::Le, Relation::Ge, Relation::Eq][rng.gen_range(0..3)];
            ip.add_constraint(LinearConstraint::new(format!("r{r}"), terms, rel, f64::from(rng.gen_range(-2..=10))));
        }
        ip.set_objective(vars.iter().map(|&v| (v, f64::from(rng.gen_range(-3..=5)) * 0.5)));
        ip
    }

    #[test]
    fn root_relaxation_bounds_the_optimum() {
        for seed in 0..300 {
            let ip = random_ip(seed);
            let sol = solve(&ip).unwrap();
            if !sol.is_optimal() {
                continue;
            }
            let lower: Vec<f64> = ip.variables.iter().map(|v| v.lower as f64).collect();
            let upper: Vec<f64> = ip.variables.iter().map(|v| v.upper.unwrap() as f64).collect();
            let LpOutcome::Optimal { objective, .. } = solve_relaxation(&ip, &ip.nonempty_rows(), &lower, &upper).unwrap() else {
                panic!("seed {seed}: integer-feasible program has no LP optimum");
            };
            match ip.objective.sense {
                Sense::Maximize => assert!(objective >= sol.objective - 1e-7, "seed {seed}"),
                Sense::Minimize => assert!(objective <= sol.objective + 1e-7, "seed {seed}"),
            }
        }
    }
}
