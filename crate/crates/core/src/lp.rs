//! A small dense phase-1 simplex for the linear feasibility problems that
//! back the convexity machinery: positive-hull membership with Caratheodory
//! witnesses, and strict-interior witness search for half-space systems.
//!
//! Problems here have at most a few hundred variables, so a dense tableau
//! with Bland's rule is plenty.

/// Outcome of a feasibility solve.
#[derive(Clone, Debug)]
pub enum Feasibility {
    /// A feasible point, plus the phase-1 residual (0 up to roundoff).
    Feasible(Vec<f64>),
    /// No solution; the residual is the minimal attainable artificial sum.
    Infeasible(f64),
}

/// Solve `A x = b, x >= 0` by phase-1 simplex (minimize the sum of
/// artificial variables). Rows with negative b are flipped first.
pub fn solve_feasibility(a: &[Vec<f64>], b: &[f64]) -> Feasibility {
    let m = a.len();
    if m == 0 {
        return Feasibility::Feasible(vec![]);
    }
    let n = a[0].len();
    // tableau: m rows of [A | I | b], with sign flips for negative rhs
    let width = n + m + 1;
    let mut t = vec![vec![0.0; width]; m];
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = flip * a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][width - 1] = flip * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let scale: f64 = t
        .iter()
        .flat_map(|r| r.iter())
        .fold(1.0_f64, |mx, v| mx.max(v.abs()));
    let eps = 1e-12 * scale;

    // reduced-cost row rebuilt exactly from the current basis: the running
    // update drifts over hundreds of pivots, which both stalls the pivot
    // choice and corrupts the reported objective
    let refresh_cost = |t: &Vec<Vec<f64>>, basis: &[usize]| -> Vec<f64> {
        let mut cost = vec![0.0; width];
        for j in 0..width {
            let mut c = if (n..n + m).contains(&j) { 1.0 } else { 0.0 };
            for i in 0..m {
                if basis[i] >= n {
                    c -= t[i][j];
                }
            }
            cost[j] = c;
        }
        cost
    };
    let mut cost = refresh_cost(&t, &basis);

    let max_iter = 200 * (n + m).max(8);
    let mut iters = 0;
    'outer: loop {
        while iters < max_iter {
            // entering variable: Bland's rule (smallest index with negative
            // reduced cost)
            let mut enter = None;
            for (j, &c) in cost.iter().enumerate().take(n + m) {
                if c < -eps {
                    enter = Some(j);
                    break;
                }
            }
            let Some(enter) = enter else { break };
            // ratio test, again smallest index on ties
            let mut leave: Option<usize> = None;
            let mut best = f64::INFINITY;
            for i in 0..m {
                if t[i][enter] > eps {
                    let ratio = t[i][width - 1] / t[i][enter];
                    if ratio < best - eps
                        || (ratio < best + eps && leave.is_none_or(|l| basis[i] < basis[l]))
                    {
                        best = ratio;
                        leave = Some(i);
                    }
                }
            }
            let Some(leave) = leave else {
                break 'outer; // unbounded phase-1 cannot happen; stop
            };
            // pivot
            let piv = t[leave][enter];
            for v in t[leave].iter_mut() {
                *v /= piv;
            }
            for i in 0..m {
                if i != leave && t[i][enter].abs() > 0.0 {
                    let f = t[i][enter];
                    for j in 0..width {
                        t[i][j] -= f * t[leave][j];
                    }
                }
            }
            let f = cost[enter];
            if f.abs() > 0.0 {
                for j in 0..width {
                    cost[j] -= f * t[leave][j];
                }
            }
            basis[leave] = enter;
            iters += 1;
        }
        if iters >= max_iter {
            break;
        }
        // the running row says optimal; confirm against an exact rebuild
        cost = refresh_cost(&t, &basis);
        if !cost.iter().take(n + m).any(|&c| c < -eps) {
            break;
        }
    }

    // objective measured directly from the artificial basic values
    let residual: f64 = (0..m)
        .filter(|&i| basis[i] >= n)
        .map(|i| t[i][width - 1].max(0.0))
        .sum();
    if residual <= 1e-8 * scale.max(1.0) {
        let mut x = vec![0.0; n];
        for i in 0..m {
            if basis[i] < n {
                x[basis[i]] = t[i][width - 1].max(0.0);
            }
        }
        Feasibility::Feasible(x)
    } else {
        Feasibility::Infeasible(residual)
    }
}

/// Find x with `f_i . x >= 1` for every row f_i (a strict-interior witness
/// for the cone `f_i . x > 0`), or report infeasibility. Free variables are
/// split into positive and negative parts with slacks.
pub fn strict_interior_witness(rows: &[Vec<f64>]) -> Option<Vec<f64>> {
    let m = rows.len();
    if m == 0 {
        return None;
    }
    let d = rows[0].len();
    // F (p - q) - s = 1, p,q,s >= 0
    let mut a = vec![vec![0.0; 2 * d + m]; m];
    let b = vec![1.0; m];
    for i in 0..m {
        for j in 0..d {
            a[i][j] = rows[i][j];
            a[i][d + j] = -rows[i][j];
        }
        a[i][2 * d + i] = -1.0;
    }
    match solve_feasibility(&a, &b) {
        Feasibility::Feasible(x) => {
            let v: Vec<f64> = (0..d).map(|j| x[j] - x[d + j]).collect();
            // guard against tableau drift: re-check the margins directly
            let ok = rows
                .iter()
                .all(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() > 0.5);
            ok.then_some(v)
        }
        Feasibility::Infeasible(_) => None,
    }
}

/// Is `q` a nonnegative combination of the given points (as cone
/// generators)? Returns the coefficient vector when so; a basic solution has
/// at most `dim` nonzero entries, which is the Caratheodory witness.
pub fn cone_membership(points: &[Vec<f64>], q: &[f64]) -> Option<Vec<f64>> {
    if points.is_empty() {
        return None;
    }
    let d = q.len();
    let n = points.len();
    let mut a = vec![vec![0.0; n]; d];
    for (j, p) in points.iter().enumerate() {
        for i in 0..d {
            a[i][j] = p[i];
        }
    }
    match solve_feasibility(&a, q) {
        Feasibility::Feasible(x) => Some(x),
        Feasibility::Infeasible(_) => None,
    }
}

/// Residual distance of the cone-membership phase-1 problem; 0 when q is in
/// the cone. Used for the boundary band classification.
pub fn cone_membership_residual(points: &[Vec<f64>], q: &[f64]) -> f64 {
    if points.is_empty() {
        return f64::INFINITY;
    }
    let d = q.len();
    let n = points.len();
    let mut a = vec![vec![0.0; n]; d];
    for (j, p) in points.iter().enumerate() {
        for i in 0..d {
            a[i][j] = p[i];
        }
    }
    match solve_feasibility(&a, q) {
        Feasibility::Feasible(_) => 0.0,
        Feasibility::Infeasible(r) => r,
    }
}
