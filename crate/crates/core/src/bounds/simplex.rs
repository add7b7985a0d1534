//! Exact rational simplex for `min c·x, Mx >= r, x >= 0` with `c >= 0`.
//!
//! The dual `max r·y, Mᵀy <= c, y >= 0` has the origin as a feasible basis,
//! so no phase one is needed. The primal optimum is read off the reduced
//! costs of the dual slack columns and then checked exactly against every
//! row.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::lp::{LpProblem, Row};
use crate::entropy::{PolymatroidFn, Source};
use crate::error::{Error, Result};
use crate::rational::Rational;

const MAX_PIVOTS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpSolution {
    pub optimum: Rational,
    /// One value per problem variable.
    pub x: Vec<Rational>,
    pub witness: PolymatroidFn,
    pub pivots: usize,
}

impl LpSolution {
    pub fn epigraph_value(&self, p: &LpProblem) -> Option<&Rational> {
        p.epigraph_var().map(|t| &self.x[t])
    }
}

/// Revised simplex on the dual with an explicit basis inverse. The dual has
/// one row per primal variable, so the inverse stays small while the
/// (sparse) columns are priced on demand.
struct Revised<'a> {
    /// Structural columns of the dual: the primal rows, with variable `v`
    /// at dual row `v - 1`.
    cols: Vec<&'a Row>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    pi: Vec<Rational>,
    basis: Vec<usize>,
    value: Rational,
    /// Devex reference weights, one per column. They only steer the choice
    /// of entering column; all arithmetic that determines the result is exact.
    weights: Vec<f64>,
}

impl Revised<'_> {
    fn m(&self) -> usize {
        self.cols.len()
    }

    fn reduced(&self, k: usize) -> Rational {
        match self.cols.get(k) {
            Some(row) => {
                let dot: Rational = row.coeffs.iter().map(|(v, c)| c * &self.pi[v - 1]).sum();
                &row.rhs - &dot
            }
            None => -&self.pi[k - self.m()],
        }
    }

    /// Devex pricing: largest `d_k^2 / w_k` among improving columns, lowest
    /// index on ties.
    fn entering(&self) -> Option<(usize, Rational)> {
        let mut best: Option<(usize, Rational, f64)> = None;
        for k in 0..self.m() + self.pi.len() {
            let d = self.reduced(k);
            if !d.is_positive() {
                continue;
            }
            let df = d.to_f64();
            let score = df * df / self.weights[k];
            if best.as_ref().is_none_or(|(_, _, b)| score > *b) {
                best = Some((k, d, score));
            }
        }
        best.map(|(k, d, _)| (k, d))
    }

    fn update_weights(&mut self, p: usize, q: usize, alpha_pq: &Rational) {
        let row: Vec<f64> = self.binv[p].iter().map(Rational::to_f64).collect();
        let apq = alpha_pq.to_f64();
        let wq = self.weights[q];
        let m = self.m();
        for k in 0..self.weights.len() {
            if k == q {
                continue;
            }
            let apk = match self.cols.get(k) {
                Some(r) => r.coeffs.iter().map(|(v, c)| c.to_f64() * row[v - 1]).sum(),
                None => row[k - m],
            };
            if apk != 0.0 {
                let ratio = apk / apq;
                self.weights[k] = self.weights[k].max(ratio * ratio * wq);
            }
        }
        let leaving = self.basis[p];
        self.weights[leaving] = (wq / (apq * apq)).max(1.0);
    }

    fn column(&self, k: usize) -> Vec<Rational> {
        match self.cols.get(k) {
            Some(row) => self
                .binv
                .iter()
                .map(|b| row.coeffs.iter().map(|(v, c)| c * &b[v - 1]).sum())
                .collect(),
            None => self.binv.iter().map(|b| b[k - self.m()].clone()).collect(),
        }
    }

    /// Minimum ratio test with lexicographic tie-breaking on the rows of the
    /// basis inverse, which rules out cycling.
    fn leaving(&self, alpha: &[Rational]) -> Option<usize> {
        let mut ties: Vec<usize> = Vec::new();
        let mut best: Option<Rational> = None;
        for (j, a) in alpha.iter().enumerate() {
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.xb[j] / a;
            match best.as_ref().map(|b| ratio.cmp(b)) {
                Some(Ordering::Greater) => {}
                Some(Ordering::Equal) => ties.push(j),
                _ => {
                    best = Some(ratio);
                    ties.clear();
                    ties.push(j);
                }
            }
        }
        let mut col = 0;
        while ties.len() > 1 && col < self.pi.len() {
            let scaled: Vec<Rational> = ties.iter().map(|&j| &self.binv[j][col] / &alpha[j]).collect();
            let min = scaled.iter().min().cloned().expect("non-empty");
            ties = ties
                .into_iter()
                .zip(scaled)
                .filter(|(_, x)| *x == min)
                .map(|(j, _)| j)
                .collect();
            col += 1;
        }
        ties.first().copied()
    }

    fn pivot(&mut self, p: usize, q: usize, d: &Rational, alpha: &[Rational]) {
        let mut prow = std::mem::take(&mut self.binv[p]);
        let a = &alpha[p];
        if *a != Rational::one() {
            for x in prow.iter_mut().filter(|x| !x.is_zero()) {
                *x = &*x / a;
            }
            self.xb[p] = &self.xb[p] / a;
        }
        let nz: Vec<usize> = (0..prow.len()).filter(|&k| !prow[k].is_zero()).collect();
        let xp = self.xb[p].clone();
        for (j, f) in alpha.iter().enumerate() {
            if j == p || f.is_zero() {
                continue;
            }
            let row = &mut self.binv[j];
            for &k in &nz {
                row[k] -= f * &prow[k];
            }
            self.xb[j] -= f * &xp;
        }
        for &k in &nz {
            self.pi[k] += d * &prow[k];
        }
        self.value += d * &xp;
        self.binv[p] = prow;
        self.basis[p] = q;
    }
}

/// Solves `p` exactly. Rows are put in a canonical order first, so the result
/// does not depend on the order they were generated in.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    if p.cost.iter().any(Rational::is_negative) {
        return Err(Error::Solver(
            "negative objective coefficients are not supported".into(),
        ));
    }
    let mut cols: Vec<&Row> = p.rows.iter().collect();
    cols.sort_by(|a, b| (&a.coeffs, &a.rhs).cmp(&(&b.coeffs, &b.rhs)));
    cols.dedup_by(|a, b| a.coeffs == b.coeffs && a.rhs == b.rhs);

    let m = cols.len();
    let nv = p.num_vars() - 1;
    let mut t = Revised {
        cols,
        binv: (0..nv)
            .map(|j| {
                let mut r = vec![Rational::zero(); nv];
                r[j] = Rational::one();
                r
            })
            .collect(),
        xb: p.cost[1..].to_vec(),
        pi: vec![Rational::zero(); nv],
        basis: (m..m + nv).collect(),
        value: Rational::zero(),
        weights: vec![1.0; m + nv],
    };

    let mut pivots = 0;
    while let Some((q, d)) = t.entering() {
        let alpha = t.column(q);
        let Some(leave) = t.leaving(&alpha) else {
            return Err(Error::Solver("the LP is infeasible (its dual is unbounded)".into()));
        };
        t.update_weights(leave, q, &alpha[leave]);
        t.pivot(leave, q, &d, &alpha);
        pivots += 1;
        if pivots > MAX_PIVOTS {
            return Err(Error::Solver(format!("no optimum after {MAX_PIVOTS} pivots")));
        }
    }

    let mut x = vec![Rational::zero(); p.num_vars()];
    x[1..].clone_from_slice(&t.pi);
    if let Some(v) = x.iter().position(Rational::is_negative) {
        return Err(Error::Solver(format!("extracted solution has {} < 0", p.var_name(v))));
    }
    if let Some((row, lhs)) = p.violations(&x).first() {
        return Err(Error::Solver(format!(
            "extracted solution violates {row:?} (lhs {lhs})"
        )));
    }
    let primal = p.objective_value(&x);
    if primal != t.value {
        return Err(Error::Solver(format!("duality gap: primal {primal}, dual {}", t.value)));
    }
    let witness = PolymatroidFn::new(p.n, x[..p.subset_vars()].to_vec(), Source::LpWitness)?;
    Ok(LpSolution {
        optimum: primal,
        x,
        witness,
        pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::lp::{Objective, RowKind};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn toy(cost: &[i64], rows: &[(&[(usize, i64)], i64)]) -> LpProblem {
        LpProblem {
            n: 1,
            objective: Objective::Average,
            cost: std::iter::once(0)
                .chain(cost.iter().copied())
                .map(Rational::from)
                .collect(),
            rows: rows
                .iter()
                .map(|(terms, rhs)| Row {
                    kind: RowKind::Monotone,
                    coeffs: terms.iter().map(|&(v, c)| (v, Rational::from(c))).collect(),
                    rhs: Rational::from(*rhs),
                })
                .collect(),
        }
    }

    #[test]
    fn small_problem() {
        // min x1 + 2 x2 + ... with x1 + x2 >= 3, x1 - x2 >= -1, 2 x2 >= 1
        let mut p = toy(
            &[1, 2, 0],
            &[(&[(1, 1), (2, 1)], 3), (&[(1, 1), (2, -1)], -1), (&[(2, 2)], 1)],
        );
        p.n = 1;
        let s = solve_lp(&p).unwrap();
        // x2 = 1/2, x1 = 5/2 -> 7/2.
        assert_eq!(s.optimum, r(7, 2));
        assert_eq!(&s.x[1..3], &[r(5, 2), r(1, 2)]);
    }

    #[test]
    fn infeasible_is_an_error() {
        let p = toy(&[1, 1, 0], &[(&[(1, -1)], 1)]);
        assert!(matches!(solve_lp(&p), Err(Error::Solver(_))));
    }

    #[test]
    fn row_order_does_not_matter() {
        let p = toy(
            &[1, 1, 1],
            &[(&[(1, 1), (2, 1)], 2), (&[(2, 1), (3, 1)], 2), (&[(1, 1), (3, 1)], 2)],
        );
        let mut q = p.clone();
        q.rows.reverse();
        let (a, b) = (solve_lp(&p).unwrap(), solve_lp(&q).unwrap());
        assert_eq!(a.optimum, Rational::from(3));
        assert_eq!(a.x, b.x);
    }
}
