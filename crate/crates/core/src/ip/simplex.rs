//! Dense two-phase bounded-variable primal simplex.
//!
//! Nonbasic variables always sit at one of their bounds; a pivot either moves
//! a basic variable to a bound or flips the entering variable between its
//! bounds. Entering columns are chosen by Dantzig's rule. After a run of
//! degenerate pivots the solver switches to Bland's rule until it makes
//! progress again, which rules out cycling.

use super::{IntegerProgram, Relation, Sense, SolverError, PIVOT_TOLERANCE};

/// Consecutive zero-length steps tolerated before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 50;
/// Phase-one objective above this means the relaxation is infeasible.
const FEASIBILITY_TOLERANCE: f64 = 1e-7;
const RATIO_TIE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    /// `row` is the index (into `ip.constraints`) of a constraint that could
    /// not be satisfied, when phase one isolates one.
    Infeasible { row: Option<usize> },
    Unbounded,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Structural,
    Slack,
    Artificial(usize),
}

struct Tableau {
    m: usize,
    cols: usize,
    /// Row-major `m x cols`, always equal to `B^-1 A`.
    t: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    x: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    kind: Vec<ColumnKind>,
    iterations: usize,
    max_iterations: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

/// Solves the LP relaxation of `ip` restricted to `rows` with the given
/// per-variable bounds. `upper` entries may be `f64::INFINITY`.
pub(crate) fn solve_relaxation(
    ip: &IntegerProgram,
    rows: &[usize],
    lower: &[f64],
    upper: &[f64],
) -> Result<LpOutcome, SolverError> {
    let n = ip.num_vars();
    if lower.iter().zip(upper).any(|(l, u)| l > u) {
        return Ok(LpOutcome::Infeasible { row: None });
    }

    let m = rows.len();
    let slack_count = rows
        .iter()
        .filter(|&&r| ip.constraints[r].relation != Relation::Eq)
        .count();
    // Upper bound on column count; artificials are added only where needed.
    let max_cols = n + slack_count + m;

    let mut lo = Vec::with_capacity(max_cols);
    let mut hi = Vec::with_capacity(max_cols);
    let mut kind = Vec::with_capacity(max_cols);
    lo.extend_from_slice(lower);
    hi.extend_from_slice(upper);
    kind.extend(std::iter::repeat(ColumnKind::Structural).take(n));

    // Dense rows over structural + slack columns first.
    let mut dense: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut slack_of_row: Vec<Option<(usize, f64)>> = Vec::with_capacity(m);
    let mut next_col = n;
    for &r in rows {
        let c = &ip.constraints[r];
        let mut row = vec![0.0; n];
        for &(v, a) in &c.coefficients {
            row[v.0] += a;
        }
        dense.push(row);
        match c.relation {
            Relation::Eq => slack_of_row.push(None),
            Relation::Le | Relation::Ge => {
                let sign = if c.relation == Relation::Le { 1.0 } else { -1.0 };
                slack_of_row.push(Some((next_col, sign)));
                lo.push(0.0);
                hi.push(f64::INFINITY);
                kind.push(ColumnKind::Slack);
                next_col += 1;
            }
        }
    }

    let mut x: Vec<f64> = lo.clone();
    let mut basis = Vec::with_capacity(m);
    let mut basic_sign = Vec::with_capacity(m);
    for (i, &r) in rows.iter().enumerate() {
        let c = &ip.constraints[r];
        let activity: f64 = dense[i].iter().zip(&x[..n]).map(|(a, v)| a * v).sum();
        let residual = c.rhs - activity;
        match slack_of_row[i] {
            Some((col, sign)) if sign * residual >= 0.0 => {
                x[col] = sign * residual;
                basis.push(col);
                basic_sign.push(sign);
            }
            _ => {
                let sign = if residual >= 0.0 { 1.0 } else { -1.0 };
                lo.push(0.0);
                hi.push(f64::INFINITY);
                kind.push(ColumnKind::Artificial(r));
                x.push(residual.abs());
                basis.push(next_col);
                basic_sign.push(sign);
                next_col += 1;
            }
        }
    }

    let cols = next_col;
    let mut t = vec![0.0; m * cols];
    for i in 0..m {
        let sign = basic_sign[i];
        let row = &mut t[i * cols..(i + 1) * cols];
        for (j, &a) in dense[i].iter().enumerate() {
            row[j] = sign * a;
        }
        if let Some((col, s)) = slack_of_row[i] {
            row[col] = sign * s;
        }
        // Artificial columns only appear in their own row.
        if matches!(kind[basis[i]], ColumnKind::Artificial(_)) {
            row[basis[i]] = 1.0;
        }
    }
    let mut is_basic = vec![false; cols];
    for &b in &basis {
        is_basic[b] = true;
    }

    let mut tab = Tableau {
        m,
        cols,
        t,
        basis,
        is_basic,
        x,
        lo,
        hi,
        kind,
        iterations: 0,
        max_iterations: 200 * (m + cols).max(50),
    };

    // Phase one: drive artificials to zero.
    if tab.kind.iter().any(|k| matches!(k, ColumnKind::Artificial(_))) {
        let cost: Vec<f64> = tab
            .kind
            .iter()
            .map(|k| if matches!(k, ColumnKind::Artificial(_)) { 1.0 } else { 0.0 })
            .collect();
        // Phase one is bounded below by zero, so it cannot be unbounded.
        tab.run(&cost)?;
        let infeasibility: f64 = (0..cols)
            .filter(|&j| matches!(tab.kind[j], ColumnKind::Artificial(_)))
            .map(|j| tab.x[j])
            .sum();
        if infeasibility > FEASIBILITY_TOLERANCE {
            let row = (0..cols)
                .filter_map(|j| match tab.kind[j] {
                    ColumnKind::Artificial(r) if tab.x[j] > FEASIBILITY_TOLERANCE => Some(r),
                    _ => None,
                })
                .min();
            return Ok(LpOutcome::Infeasible { row });
        }
        for j in 0..cols {
            if matches!(tab.kind[j], ColumnKind::Artificial(_)) {
                tab.hi[j] = 0.0;
                tab.x[j] = tab.x[j].clamp(0.0, 0.0);
            }
        }
    }

    let sign = match ip.objective.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut cost = vec![0.0; cols];
    for &(v, c) in &ip.objective.coefficients {
        cost[v.0] += sign * c;
    }
    match tab.run(&cost)? {
        Phase::Unbounded => Ok(LpOutcome::Unbounded),
        Phase::Optimal => {
            let x: Vec<f64> = tab.x[..n].to_vec();
            let objective = ip
                .objective
                .coefficients
                .iter()
                .map(|&(v, c)| c * x[v.0])
                .sum();
            Ok(LpOutcome::Optimal { x, objective })
        }
    }
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.cols + j]
    }

    fn run(&mut self, cost: &[f64]) -> Result<Phase, SolverError> {
        let mut degenerate = 0usize;
        let mut bland = false;
        let mut dual = vec![0.0; self.m];
        loop {
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(SolverError::IterationLimit);
            }
            for (i, d) in dual.iter_mut().enumerate() {
                *d = cost[self.basis[i]];
            }

            // Entering column.
            let mut entering: Option<(usize, f64, f64)> = None; // (col, dir, |d|)
            for j in 0..self.cols {
                if self.is_basic[j] || self.hi[j] - self.lo[j] <= PIVOT_TOLERANCE {
                    continue;
                }
                let mut d = cost[j];
                for (i, &cb) in dual.iter().enumerate() {
                    if cb != 0.0 {
                        d -= cb * self.at(i, j);
                    }
                }
                let at_lower = self.x[j] <= self.lo[j] + PIVOT_TOLERANCE;
                let dir = if at_lower && d < -PIVOT_TOLERANCE {
                    1.0
                } else if !at_lower && d > PIVOT_TOLERANCE {
                    -1.0
                } else {
                    continue;
                };
                let score = d.abs();
                match entering {
                    None => entering = Some((j, dir, score)),
                    Some((_, _, best)) if !bland && score > best => entering = Some((j, dir, score)),
                    _ => {}
                }
                if bland {
                    break;
                }
            }
            let Some((j, dir, _)) = entering else {
                return Ok(Phase::Optimal);
            };

            // Ratio test. `leave` holds (row, goes_to_upper, |alpha|).
            let mut theta = self.hi[j] - self.lo[j];
            let mut leave: Option<(usize, bool, f64)> = None;
            for i in 0..self.m {
                let alpha = dir * self.at(i, j);
                let b = self.basis[i];
                let (limit, to_upper) = if alpha > PIVOT_TOLERANCE {
                    ((self.x[b] - self.lo[b]) / alpha, false)
                } else if alpha < -PIVOT_TOLERANCE && self.hi[b].is_finite() {
                    ((self.hi[b] - self.x[b]) / -alpha, true)
                } else {
                    continue;
                };
                let limit = limit.max(0.0);
                let better = if limit < theta - RATIO_TIE {
                    true
                } else if limit <= theta + RATIO_TIE {
                    match leave {
                        None => true,
                        Some((r, _, a)) => {
                            if bland {
                                b < self.basis[r]
                            } else {
                                alpha.abs() > a
                            }
                        }
                    }
                } else {
                    false
                };
                if better {
                    theta = limit;
                    leave = Some((i, to_upper, alpha.abs()));
                }
            }
            if theta.is_infinite() {
                return Ok(Phase::Unbounded);
            }

            if theta <= RATIO_TIE {
                degenerate += 1;
                if degenerate >= DEGENERATE_STREAK {
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
            }

            let step = dir * theta;
            if step != 0.0 {
                self.x[j] += step;
                for i in 0..self.m {
                    let a = self.at(i, j);
                    if a != 0.0 {
                        let b = self.basis[i];
                        self.x[b] -= step * a;
                    }
                }
            }

            match leave {
                None => {
                    // Bound flip: the entering variable crosses to its other bound.
                    self.x[j] = if dir > 0.0 { self.hi[j] } else { self.lo[j] };
                }
                Some((r, to_upper, _)) => {
                    let b = self.basis[r];
                    self.x[b] = if to_upper { self.hi[b] } else { self.lo[b] };
                    self.pivot(r, j);
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let cols = self.cols;
        let piv = self.at(r, j);
        {
            let row = &mut self.t[r * cols..(r + 1) * cols];
            for v in row.iter_mut() {
                *v /= piv;
            }
            row[j] = 1.0;
        }
        let (before, rest) = self.t.split_at_mut(r * cols);
        let (pivot_row, after) = rest.split_at_mut(cols);
        for row in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
            let f = row[j];
            if f != 0.0 {
                for (v, &p) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * p;
                }
                row[j] = 0.0;
            }
        }
        let old = self.basis[r];
        self.is_basic[old] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
    }
}
