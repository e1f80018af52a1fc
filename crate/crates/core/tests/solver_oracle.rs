//! Branch-and-bound against exhaustive enumeration on random small programs.

use proptest::prelude::*;
use routeplan_core::ip::{
    brute_force_solve, solve, to_lp_string, validate_solution, IntegerProgram, LinearConstraint, Relation, Sense,
    SolveStatus, VarId,
};

fn program() -> impl Strategy<Value = IntegerProgram> {
    let vars = prop::collection::vec(0i64..=4, 1..=8);
    (vars, any::<bool>()).prop_flat_map(|(uppers, maximize)| {
        let n = uppers.len();
        let row = (
            prop::collection::vec(prop::option::weighted(0.6, -3i32..=4), n),
            0usize..3,
            -2i32..=10,
        );
        (
            Just(uppers),
            Just(maximize),
            prop::collection::vec(row, 0..=6),
            prop::collection::vec(-6i32..=10, n),
        )
            .prop_map(|(uppers, maximize, rows, obj)| {
                let mut ip = IntegerProgram::new(if maximize { Sense::Maximize } else { Sense::Minimize });
                for (i, u) in uppers.iter().enumerate() {
                    ip.add_variable(format!("x{i}"), 0, Some(*u));
                }
                for (r, (coefs, rel, rhs)) in rows.into_iter().enumerate() {
                    let terms: Vec<_> = coefs
                        .into_iter()
                        .enumerate()
                        .filter_map(|(i, c)| c.map(|c| (VarId(i), f64::from(c))))
                        .collect();
                    let rel = [Relation::Le, Relation::Ge, Relation::Eq][rel];
                    ip.add_constraint(LinearConstraint::new(format!("r{r}"), terms, rel, f64::from(rhs)));
                }
                // Half-integer objective weights exercise the non-integral bound path.
                ip.set_objective(obj.into_iter().enumerate().map(|(i, c)| (VarId(i), f64::from(c) * 0.5)));
                ip
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn branch_and_bound_matches_enumeration(ip in program()) {
        let bb = solve(&ip).unwrap();
        let bf = brute_force_solve(&ip).unwrap();
        prop_assert_eq!(bb.status, bf.status, "{}", to_lp_string(&ip));
        if bb.status == SolveStatus::Optimal {
            prop_assert!((bb.objective - bf.objective).abs() < 1e-9, "{} vs {}\n{}", bb.objective, bf.objective, to_lp_string(&ip));
            prop_assert!(validate_solution(&ip, &bb).is_empty());
            prop_assert!(validate_solution(&ip, &bf).is_empty());
            prop_assert!((ip.objective_value(&bb.values) - bb.objective).abs() < 1e-9);
        }
    }

    #[test]
    fn solve_is_deterministic(ip in program()) {
        prop_assert_eq!(solve(&ip).unwrap(), solve(&ip).unwrap());
    }
}

#[test]
fn spec_examples_agree_with_oracle() {
    let mut ip = IntegerProgram::new(Sense::Maximize);
    let x1 = ip.add_variable("x1", 0, Some(10));
    let x2 = ip.add_variable("x2", 0, Some(10));
    ip.add_constraint(LinearConstraint::new("sum", [(x1, 1.0), (x2, 1.0)], Relation::Le, 3.0));
    ip.add_constraint(LinearConstraint::new("x1", [(x1, 1.0)], Relation::Le, 2.0));
    ip.set_objective([(x1, 1.0), (x2, 1.0)]);
    assert_eq!(brute_force_solve(&ip).unwrap().objective, 3.0);
    assert_eq!(solve(&ip).unwrap().objective, 3.0);

    let mut ip = IntegerProgram::new(Sense::Minimize);
    let x = ip.add_variable("x", 0, Some(10));
    ip.add_constraint(LinearConstraint::new("floor", [(x, 1.0)], Relation::Ge, 3.0));
    ip.set_objective([(x, 2.0)]);
    assert_eq!(brute_force_solve(&ip).unwrap().objective, 6.0);
    assert_eq!(solve(&ip).unwrap().values, vec![3]);

    let mut ip = IntegerProgram::new(Sense::Maximize);
    let x = ip.add_variable("x", 0, Some(5));
    ip.add_constraint(LinearConstraint::new("le", [(x, 1.0)], Relation::Le, 1.0));
    ip.add_constraint(LinearConstraint::new("ge", [(x, 1.0)], Relation::Ge, 2.0));
    assert_eq!(brute_force_solve(&ip).unwrap().status, SolveStatus::Infeasible);
    let sol = solve(&ip).unwrap();
    assert_eq!(sol.status, SolveStatus::Infeasible);
    assert!(sol.infeasible_hint.is_some());
}

#[test]
fn corrupted_value_is_reported() {
    let mut ip = IntegerProgram::new(Sense::Maximize);
    let x = ip.add_variable("x", 0, Some(5));
    let y = ip.add_variable("y", 0, Some(5));
    ip.add_constraint(LinearConstraint::new("cap", [(x, 1.0), (y, 1.0)], Relation::Le, 4.0));
    ip.set_objective([(x, 2.0), (y, 1.0)]);
    let mut sol = solve(&ip).unwrap();
    assert_eq!(sol.values, vec![4, 0]);
    sol.values[0] += 1;
    let v = validate_solution(&ip, &sol);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].label, "cap");
    assert_eq!((v[0].lhs, v[0].rhs), (5.0, 4.0));
}
