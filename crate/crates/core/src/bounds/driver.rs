use serde::{Deserialize, Serialize};

use super::lp::{build_entropy_lp_with, LpOptions, Objective};
use super::simplex::{solve_lp, LpSolution};
use crate::entropy::{verify_axioms, Axiom};
use crate::error::{Error, Result};
use crate::graphs::{hypercube, Graph};
use crate::rational::Rational;

/// Largest cube [`symmetry_check`] solves.
pub const MAX_SYMMETRY_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpBound {
    pub objective: Objective,
    pub optimum: Rational,
    pub rows: usize,
    /// Set when the elemental LP's witness broke a general strong
    /// submodularity instance and the LP was re-solved with every instance.
    pub escalated: bool,
    pub solution: LpSolution,
}

/// Solves the entropy LP of `g`. The witness is then checked against all
/// axioms in general form; a strong submodularity violation triggers a
/// re-solve with the full family of those rows.
pub fn lp_bound(g: &Graph, objective: Objective) -> Result<LpBound> {
    let mut opts = LpOptions::default();
    loop {
        let p = build_entropy_lp_with(g, objective, opts)?;
        let solution = solve_lp(&p)?;
        let violations = verify_axioms(&solution.witness, g)?;
        if let Some(v) = violations.iter().find(|v| v.axiom != Axiom::E) {
            return Err(Error::Solver(format!("LP witness violates {v}")));
        }
        if !violations.is_empty() && !opts.full_strong_submodularity {
            opts.full_strong_submodularity = true;
            continue;
        }
        if let Some(v) = violations.first() {
            return Err(Error::Solver(format!("LP witness violates {v}")));
        }
        return Ok(LpBound {
            objective,
            optimum: solution.optimum.clone(),
            rows: p.rows.len(),
            escalated: opts.full_strong_submodularity,
            solution,
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub d: usize,
    pub average: Rational,
    pub worst: Rational,
    pub equal: bool,
}

/// Solves both objectives on `C^d` and compares the optima.
pub fn symmetry_check(d: usize) -> Result<SymmetryReport> {
    if d > MAX_SYMMETRY_DIM {
        return Err(Error::TooLarge {
            what: "cube dimension for the symmetry check",
            size: d as u128,
            cap: MAX_SYMMETRY_DIM as u128,
        });
    }
    let g = hypercube(d)?;
    let average = lp_bound(&g, Objective::Average)?.optimum;
    let worst = lp_bound(&g, Objective::Worst)?.optimum;
    Ok(SymmetryReport {
        d,
        equal: average == worst,
        average,
        worst,
    })
}
