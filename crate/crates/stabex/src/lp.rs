//! Exact linear programming over the rationals.
//!
//! A small two-phase primal simplex on dense tableaus of `BigRational`
//! entries. Bland's smallest-index rule is used for both the entering and
//! the leaving variable, which rules out cycling, so termination is
//! unconditional. There are no tolerances anywhere: feasibility, optimality,
//! and the reported optimum are exact.
//!
//! This is deliberately not a performance-oriented solver. The polytopes in
//! this crate are desk-scale (tens of variables and rows), where exactness
//! matters far more than speed.

use crate::linalg::Rat;
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("malformed program: {0}")]
    Shape(String),
}

/// `maximize c . x` subject to `eq` rows (`a . x = b`), `ineq` rows
/// (`a . x <= b`), and `x_j >= 0` for each `j` with `nonneg[j]` set
/// (other variables are free).
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub maximize: Vec<Rat>,
    pub eq: Vec<(Vec<Rat>, Rat)>,
    pub ineq: Vec<(Vec<Rat>, Rat)>,
    pub nonneg: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// rows x (cols + 1); last column is the right-hand side.
    rows: Vec<Vec<Rat>>,
    cols: usize,
    basis: Vec<usize>,
    /// Reduced cost row, length cols + 1; last entry is the objective value.
    cost: Vec<Rat>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].clone();
        debug_assert!(!inv.is_zero());
        for x in self.rows[row].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for j in 0..=self.cols {
                let delta = &factor * &self.rows[row][j];
                self.rows[i][j] -= delta;
            }
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for j in 0..=self.cols {
                let delta = &factor * &self.rows[row][j];
                self.cost[j] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations until optimal or unbounded.
    /// Returns false on unboundedness.
    fn solve(&mut self) -> bool {
        loop {
            // Bland: entering variable is the smallest index with positive
            // reduced cost.
            let Some(col) = (0..self.cols).find(|&j| self.cost[j].is_positive()) else {
                return true;
            };
            // Ratio test; ties broken by smallest basis variable index.
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][self.cols] / a;
                let better = match &leave {
                    None => true,
                    Some((best_i, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*best_i])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, col);
        }
    }
}

/// Solves the program exactly.
pub fn lp_max(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    let n = lp.maximize.len();
    if lp.nonneg.len() != n {
        return Err(LpError::Shape(format!(
            "{} objective coefficients but {} sign constraints",
            n,
            lp.nonneg.len()
        )));
    }
    for (a, _) in lp.eq.iter().chain(lp.ineq.iter()) {
        if a.len() != n {
            return Err(LpError::Shape(format!(
                "constraint with {} coefficients in a program over {} variables",
                a.len(),
                n
            )));
        }
    }

    // Standard form: free variables split into differences of nonnegative
    // pairs, inequalities get slack variables, right-hand sides made
    // nonnegative, and one artificial variable per row for phase one.
    let mut col_of_var: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut cols = 0usize;
    for j in 0..n {
        if lp.nonneg[j] {
            col_of_var.push((cols, None));
            cols += 1;
        } else {
            col_of_var.push((cols, Some(cols + 1)));
            cols += 2;
        }
    }
    let m = lp.eq.len() + lp.ineq.len();
    let slack_base = cols;
    cols += lp.ineq.len();
    let art_base = cols;
    let total = cols + m;

    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (k, (a, b)) in lp.eq.iter().chain(lp.ineq.iter()).enumerate() {
        let mut row = vec![Rat::zero(); total + 1];
        for j in 0..n {
            let (pos, neg) = col_of_var[j];
            row[pos] = a[j].clone();
            if let Some(neg) = neg {
                row[neg] = -a[j].clone();
            }
        }
        if k >= lp.eq.len() {
            row[slack_base + (k - lp.eq.len())] = Rat::one();
        }
        row[total] = b.clone();
        if row[total].is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        row[art_base + k] = Rat::one();
        basis.push(art_base + k);
        rows.push(row);
    }

    // Phase one: maximize minus the sum of artificials.
    let mut cost = vec![Rat::zero(); total + 1];
    for k in 0..m {
        cost[art_base + k] = -Rat::one();
    }
    // Canonicalize: add every row (each has artificial cost -1 in basis).
    for row in &rows {
        for j in 0..=total {
            let add = row[j].clone();
            cost[j] += add;
        }
    }
    let mut tab = Tableau { rows, cols: total, basis, cost };
    let finished = tab.solve();
    assert!(finished, "phase one is bounded by construction");
    // Objective value is stored negated in the cost row's rhs slot.
    if !(-tab.cost[total].clone()).is_zero() {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive remaining artificials out of the basis; rows where that is
    // impossible are redundant and dropped.
    let mut i = 0;
    while i < tab.basis.len() {
        if tab.basis[i] >= art_base {
            if let Some(col) = (0..art_base).find(|&j| !tab.rows[i][j].is_zero()) {
                tab.pivot(i, col);
            } else {
                tab.rows.remove(i);
                tab.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    // Remove artificial columns entirely so they can never re-enter.
    for row in &mut tab.rows {
        let rhs = row[total].clone();
        row.truncate(art_base);
        row.push(rhs);
    }
    tab.cols = art_base;
    debug_assert!(tab.basis.iter().all(|&b| b < art_base));

    // Phase two on the original objective.
    let mut cost = vec![Rat::zero(); art_base + 1];
    for j in 0..n {
        let (pos, neg) = col_of_var[j];
        cost[pos] = lp.maximize[j].clone();
        if let Some(neg) = neg {
            cost[neg] = -lp.maximize[j].clone();
        }
    }
    for (i, &b) in tab.basis.iter().enumerate() {
        if cost[b].is_zero() {
            continue;
        }
        let factor = cost[b].clone();
        for j in 0..=art_base {
            let delta = &factor * &tab.rows[i][j];
            cost[j] -= delta;
        }
    }
    tab.cost = cost;
    if !tab.solve() {
        return Ok(LpOutcome::Unbounded);
    }

    let mut std_point = vec![Rat::zero(); art_base];
    for (i, &b) in tab.basis.iter().enumerate() {
        std_point[b] = tab.rows[i][tab.cols].clone();
    }
    let point: Vec<Rat> = (0..n)
        .map(|j| {
            let (pos, neg) = col_of_var[j];
            match neg {
                None => std_point[pos].clone(),
                Some(neg) => &std_point[pos] - &std_point[neg],
            }
        })
        .collect();
    let value = lp
        .maximize
        .iter()
        .zip(&point)
        .fold(Rat::zero(), |acc, (c, x)| acc + c * x);
    Ok(LpOutcome::Optimal { value, point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn rats(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn expect_opt(outcome: LpOutcome) -> (Rat, Vec<Rat>) {
        match outcome {
            LpOutcome::Optimal { value, point } => (value, point),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn fractional_vertex() {
        // max x + y, 2x + y <= 2, x + 2y <= 2, x,y >= 0: optimum 4/3.
        let lp = LinearProgram {
            maximize: rats(&[1, 1]),
            eq: vec![],
            ineq: vec![(rats(&[2, 1]), rat(2)), (rats(&[1, 2]), rat(2))],
            nonneg: vec![true, true],
        };
        let (value, point) = expect_opt(lp_max(&lp).unwrap());
        assert_eq!(value, ratio(4, 3));
        assert_eq!(point, vec![ratio(2, 3), ratio(2, 3)]);
    }

    #[test]
    fn free_variable() {
        // max x subject to x <= 5/2, x free.
        let lp = LinearProgram {
            maximize: rats(&[1]),
            eq: vec![],
            ineq: vec![(rats(&[1]), ratio(5, 2))],
            nonneg: vec![false],
        };
        let (value, _) = expect_opt(lp_max(&lp).unwrap());
        assert_eq!(value, ratio(5, 2));
        // And a free variable pushed negative: max -x, x >= -3.
        let lp = LinearProgram {
            maximize: rats(&[-1]),
            eq: vec![],
            ineq: vec![(rats(&[-1]), rat(3))],
            nonneg: vec![false],
        };
        let (value, point) = expect_opt(lp_max(&lp).unwrap());
        assert_eq!(value, rat(3));
        assert_eq!(point, vec![rat(-3)]);
    }

    #[test]
    fn equality_constraints() {
        // max x + 2y with x + y = 1, x, y >= 0: optimum 2 at (0, 1).
        let lp = LinearProgram {
            maximize: rats(&[1, 2]),
            eq: vec![(rats(&[1, 1]), rat(1))],
            ineq: vec![],
            nonneg: vec![true, true],
        };
        let (value, point) = expect_opt(lp_max(&lp).unwrap());
        assert_eq!(value, rat(2));
        assert_eq!(point, vec![rat(0), rat(1)]);
    }

    #[test]
    fn infeasible_program() {
        // x >= 0 and x <= -1.
        let lp = LinearProgram {
            maximize: rats(&[1]),
            eq: vec![],
            ineq: vec![(rats(&[1]), rat(-1))],
            nonneg: vec![true],
        };
        assert_eq!(lp_max(&lp).unwrap(), LpOutcome::Infeasible);
        // Contradicting equalities.
        let lp = LinearProgram {
            maximize: rats(&[0, 0]),
            eq: vec![(rats(&[1, 1]), rat(1)), (rats(&[1, 1]), rat(2))],
            ineq: vec![],
            nonneg: vec![true, true],
        };
        assert_eq!(lp_max(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_program() {
        let lp = LinearProgram {
            maximize: rats(&[1]),
            eq: vec![],
            ineq: vec![],
            nonneg: vec![true],
        };
        assert_eq!(lp_max(&lp).unwrap(), LpOutcome::Unbounded);
        // Free variable, only an upper bound on its negation.
        let lp = LinearProgram {
            maximize: rats(&[1]),
            eq: vec![],
            ineq: vec![(rats(&[-1]), rat(0))],
            nonneg: vec![false],
        };
        assert_eq!(lp_max(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // Same equation twice: still optimal, no infeasibility.
        let lp = LinearProgram {
            maximize: rats(&[1, 1]),
            eq: vec![(rats(&[1, 1]), rat(1)), (rats(&[2, 2]), rat(2))],
            ineq: vec![],
            nonneg: vec![true, true],
        };
        let (value, _) = expect_opt(lp_max(&lp).unwrap());
        assert_eq!(value, rat(1));
    }

    #[test]
    fn degenerate_cycling_candidate() {
        // A classical cycling example for naive pivot rules; Bland's rule
        // must terminate with optimum 1/20.
        let lp = LinearProgram {
            maximize: vec![ratio(3, 4), rat(-150), ratio(1, 50), rat(-6)],
            eq: vec![],
            ineq: vec![
                (vec![ratio(1, 4), rat(-60), ratio(-1, 25), rat(9)], rat(0)),
                (vec![ratio(1, 2), rat(-90), ratio(-1, 50), rat(3)], rat(0)),
                (vec![rat(0), rat(0), rat(1), rat(0)], rat(1)),
            ],
            nonneg: vec![true; 4],
        };
        let (value, _) = expect_opt(lp_max(&lp).unwrap());
        assert_eq!(value, ratio(1, 20));
    }

    #[test]
    fn stable_set_polytope_of_c5() {
        // max 1.x over the clique (edge) relaxation of C5: the optimum is
        // the fractional 5/2, strictly above the integral optimum 2.
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        let ineq = edges
            .iter()
            .map(|&(u, v)| {
                let mut a = vec![Rat::zero(); 5];
                a[u] = rat(1);
                a[v] = rat(1);
                (a, rat(1))
            })
            .collect();
        let lp = LinearProgram {
            maximize: rats(&[1; 5]),
            eq: vec![],
            ineq,
            nonneg: vec![true; 5],
        };
        let (value, point) = expect_opt(lp_max(&lp).unwrap());
        assert_eq!(value, ratio(5, 2));
        assert!(point.iter().all(|x| *x == ratio(1, 2)));
    }

    #[test]
    fn shape_errors() {
        let lp = LinearProgram {
            maximize: rats(&[1, 2]),
            eq: vec![(rats(&[1]), rat(0))],
            ineq: vec![],
            nonneg: vec![true, true],
        };
        assert!(lp_max(&lp).is_err());
        let lp = LinearProgram {
            maximize: rats(&[1]),
            eq: vec![],
            ineq: vec![],
            nonneg: vec![true, true],
        };
        assert!(lp_max(&lp).is_err());
    }
}
