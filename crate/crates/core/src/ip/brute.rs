use super::{satisfies, IntegerProgram, Sense, Solution, SolveStatus, SolverError};

/// Largest number of assignments [`brute_force_solve`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// Enumerates every integer assignment inside the variable bounds in
/// lexicographic order and keeps the first one with the best objective.
///
/// Intended as an oracle for small programs: every variable needs a finite
/// upper bound and the product of domain sizes must stay within
/// [`BRUTE_FORCE_LIMIT`].
pub fn brute_force_solve(ip: &IntegerProgram) -> Result<Solution, SolverError> {
    ip.validate()?;
    let mut size: u128 = 1;
    for v in &ip.variables {
        let upper = v
            .upper
            .ok_or_else(|| SolverError::UnboundedDomain(v.name.clone()))?;
        size = size.saturating_mul((upper - v.lower + 1) as u128);
        if size > BRUTE_FORCE_LIMIT {
            return Err(SolverError::SearchSpaceTooLarge {
                size,
                limit: BRUTE_FORCE_LIMIT,
            });
        }
    }

    let n = ip.num_vars();
    let lower: Vec<i64> = ip.variables.iter().map(|v| v.lower).collect();
    let upper: Vec<i64> = ip.variables.iter().map(|v| v.upper.unwrap_or(v.lower)).collect();
    let sign = match ip.objective.sense {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };

    let mut current = lower.clone();
    let mut best: Option<(f64, Vec<i64>)> = None;
    loop {
        let feasible = ip
            .constraints
            .iter()
            .all(|c| satisfies(c.lhs(&current), c.relation, c.rhs));
        if feasible {
            let score = sign * ip.objective_value(&current);
            if best.as_ref().is_none_or(|(b, _)| score > b + 1e-9) {
                best = Some((score, current.clone()));
            }
        }
        // Odometer increment, last variable fastest: lexicographic order.
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(match best {
                    Some((_, values)) => ip.optimal_solution(values),
                    None => Solution::without_values(SolveStatus::Infeasible, None),
                });
            }
            k -= 1;
            if current[k] < upper[k] {
                current[k] += 1;
                break;
            }
            current[k] = lower[k];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ip::{LinearConstraint, Relation};

    #[test]
    fn empty_feasible_set() {
        let mut ip = IntegerProgram::new(Sense::Maximize);
        let x = ip.add_variable("x", 0, Some(5));
        ip.add_constraint(LinearConstraint::new("hi", [(x, 1.0)], Relation::Le, 1.0));
        ip.add_constraint(LinearConstraint::new("lo", [(x, 1.0)], Relation::Ge, 2.0));
        assert_eq!(brute_force_solve(&ip).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn refuses_large_spaces() {
        let mut ip = IntegerProgram::new(Sense::Maximize);
        for i in 0..8 {
            ip.add_variable(format!("v{i}"), 0, Some(9));
        }
        assert!(matches!(
            brute_force_solve(&ip),
            Err(SolverError::SearchSpaceTooLarge { size, .. }) if size > BRUTE_FORCE_LIMIT
        ));
        let mut unbounded = IntegerProgram::new(Sense::Maximize);
        unbounded.add_variable("free", 0, None);
        assert!(matches!(brute_force_solve(&unbounded), Err(SolverError::UnboundedDomain(_))));
    }

    #[test]
    fn ties_prefer_lexicographically_smallest() {
        let mut ip = IntegerProgram::new(Sense::Maximize);
        let x = ip.add_variable("x", 0, Some(2));
        let y = ip.add_variable("y", 0, Some(2));
        ip.add_constraint(LinearConstraint::new("sum", [(x, 1.0), (y, 1.0)], Relation::Le, 2.0));
        ip.set_objective([(x, 1.0), (y, 1.0)]);
        assert_eq!(brute_force_solve(&ip).unwrap().values, vec![0, 2]);
    }
}
