//! Linear programs with lazily generated constraints.

use minilp::{ComparisonOp, OptimizationDirection, Problem, Solution, Variable};

/// A constraint `sum coeffs[i].1 * x[coeffs[i].0] <= rhs`.
#[derive(Debug, Clone)]
pub(crate) struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// Maximizes `objective . x` over `bounds`, subject to `equalities` and to
/// the rows returned by `separate`, which is called on each intermediate
/// optimum and returns rows it violates (empty once the point is accepted).
/// Returns `None` when infeasible. After `max_rounds` the last optimum is
/// returned as is; callers verify it independently.
pub(crate) fn maximize_with_cuts(
    objective: &[f64],
    bounds: &[(f64, f64)],
    equalities: &[Row],
    initial: &[Row],
    mut separate: impl FnMut(&[f64]) -> Vec<Row>,
    max_rounds: usize,
) -> Option<(f64, Vec<f64>)> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<Variable> = objective.iter().zip(bounds).map(|(o, b)| lp.add_var(*o, *b)).collect();
    let expr = |row: &Row| row.coeffs.iter().map(|(i, a)| (vars[*i], *a)).collect::<Vec<_>>();
    for row in equalities {
        lp.add_constraint(expr(row).as_slice(), ComparisonOp::Eq, row.rhs);
    }
    for row in initial {
        lp.add_constraint(expr(row).as_slice(), ComparisonOp::Le, row.rhs);
    }
    let mut sol: Solution = lp.solve().ok()?;
    for _ in 0..max_rounds {
        let x: Vec<f64> = vars.iter().map(|v| *sol.var_value(*v)).collect();
        let cuts = separate(&x);
        if cuts.is_empty() {
            break;
        }
        for row in &cuts {
            sol = sol.add_constraint(expr(row).as_slice(), ComparisonOp::Le, row.rhs).ok()?;
        }
    }
    let x: Vec<f64> = vars.iter().map(|v| *sol.var_value(*v)).collect();
    Some((sol.objective(), x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cuts_approximate_a_disc() {
        // maximize x + y over the unit disc, cutting with tangent lines
        let (val, x) = maximize_with_cuts(
            &[1.0, 1.0],
            &[(-2.0, 2.0), (-2.0, 2.0)],
            &[],
            &[],
            |x| {
                let r = x[0].hypot(x[1]);
                if r <= 1.0 + 1e-10 {
                    vec![]
                } else {
                    vec![Row { coeffs: vec![(0, x[0] / r), (1, x[1] / r)], rhs: 1.0 }]
                }
            },
            500,
        )
        .unwrap();
        assert!((val - 2f64.sqrt()).abs() < 1e-6, "{val} {x:?}");
    }
}
