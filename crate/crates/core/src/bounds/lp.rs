use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::rational::Rational;

/// Largest graph [`build_entropy_lp`] accepts.
pub const MAX_LP_VERTICES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Minimize the mean of `f(v)` over vertices.
    Average,
    /// Minimize `t` subject to `f(v) <= t` for every vertex.
    Worst,
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" | "avg" => Ok(Objective::Average),
            "worst" | "max" => Ok(Objective::Worst),
            _ => Err(Error::Parse(format!(
                "unknown objective {s:?}; expected average or worst"
            ))),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Average => "average",
            Objective::Worst => "worst",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    Monotone,
    Submodular,
    StrongMonotone,
    StrongSubmodular,
    Epigraph,
}

/// `Σ coeff·x >= rhs`, coefficients sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Row {
    pub kind: RowKind,
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

impl Row {
    fn new(kind: RowKind, terms: &[(usize, i64)], rhs: i64) -> Row {
        let mut coeffs: Vec<(usize, Rational)> = Vec::with_capacity(terms.len());
        let mut sorted = terms.to_vec();
        sorted.sort_unstable();
        for (var, c) in sorted {
            match coeffs.last_mut() {
                Some((v, acc)) if *v == var => *acc += Rational::from(c),
                _ => coeffs.push((var, Rational::from(c))),
            }
        }
        coeffs.retain(|(v, c)| *v != 0 && !c.is_zero());
        Row {
            kind,
            coeffs,
            rhs: Rational::from(rhs),
        }
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(v, c)| c * &x[*v]).sum()
    }
}

/// Options for [`build_entropy_lp_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LpOptions {
    /// Emit strong submodularity for every qualifying pair of sets rather
    /// than only elemental instances.
    pub full_strong_submodularity: bool,
}

/// Minimize `cost·x` subject to the rows and `x >= 0`.
///
/// Variable `S` (a bitmask) is `f(S)`; variable 0 is `f(∅)`, fixed at zero and
/// never referenced by a row. The worst objective appends `t` as variable
/// `2^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpProblem {
    pub n: usize,
    pub objective: Objective,
    pub cost: Vec<Rational>,
    pub rows: Vec<Row>,
}

impl LpProblem {
    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn subset_vars(&self) -> usize {
        1 << self.n
    }

    pub fn epigraph_var(&self) -> Option<usize> {
        (self.objective == Objective::Worst).then_some(1 << self.n)
    }

    pub fn count(&self, kind: RowKind) -> usize {
        self.rows.iter().filter(|r| r.kind == kind).count()
    }

    /// Checks that every row references an existing, non-fixed variable.
    pub fn validate(&self) -> Result<()> {
        for row in &self.rows {
            if let Some((v, _)) = row.coeffs.iter().find(|(v, _)| *v == 0 || *v >= self.num_vars()) {
                return Err(Error::Solver(format!("row references invalid variable {v}")));
            }
        }
        Ok(())
    }

    pub fn var_name(&self, v: usize) -> String {
        if Some(v) == self.epigraph_var() {
            "t".to_string()
        } else {
            format!("f{v}")
        }
    }

    /// Rows violated by `x` (a value per variable), with their left sides.
    pub fn violations<'a>(&'a self, x: &[Rational]) -> Vec<(&'a Row, Rational)> {
        self.rows
            .iter()
            .filter_map(|r| {
                let lhs = r.lhs(x);
                (lhs < r.rhs).then_some((r, lhs))
            })
            .collect()
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.cost.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// CPLEX-style LP text with coefficients written exactly as `num/den`.
    pub fn to_lp_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "\\ entropy LP: {} vertices, {} objective", self.n, self.objective);
        out.push_str("Minimize\n obj:");
        let terms: Vec<(usize, &Rational)> = self.cost.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        write_terms(&mut out, self, terms.into_iter());
        out.push_str("\nSubject To\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, " r{i}_{kind:?}:", kind = row.kind);
            write_terms(&mut out, self, row.coeffs.iter().map(|(v, c)| (*v, c)));
            let _ = writeln!(out, " >= {}", row.rhs);
        }
        out.push_str("Bounds\n f0 = 0\n");
        for v in 1..self.num_vars() {
            let _ = writeln!(out, " {} >= 0", self.var_name(v));
        }
        out.push_str("End\n");
        out
    }
}

fn write_terms<'a>(out: &mut String, p: &LpProblem, terms: impl Iterator<Item = (usize, &'a Rational)>) {
    for (i, (v, c)) in terms.enumerate() {
        match (c.is_negative(), i) {
            (true, _) => out.push_str(" -"),
            (false, 0) => {}
            (false, _) => out.push_str(" +"),
        }
        let mag = c.abs();
        if mag != Rational::one() {
            let _ = write!(out, " {mag}");
        }
        let _ = write!(out, " {}", p.var_name(v));
    }
}

/// The entropy-method LP for `g` in elemental form.
pub fn build_entropy_lp(g: &Graph, objective: Objective) -> Result<LpProblem> {
    build_entropy_lp_with(g, objective, LpOptions::default())
}

pub fn build_entropy_lp_with(g: &Graph, objective: Objective, opts: LpOptions) -> Result<LpProblem> {
    let n = g.n();
    if n > MAX_LP_VERTICES {
        return Err(Error::TooLarge {
            what: "graph for the entropy LP (use the certificate method)",
            size: n as u128,
            cap: MAX_LP_VERTICES as u128,
        });
    }
    let size = 1usize << n;
    let indep: Vec<bool> = (0..size).map(|m| g.is_independent_mask(m as u64)).collect();

    let mut rows: Vec<Row> = (0..size)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut out = Vec::new();
            let outside: Vec<usize> = (0..n).filter(|v| a >> v & 1 == 0).collect();
            for (j, &v) in outside.iter().enumerate() {
                let av = a | 1 << v;
                if indep[a] && !indep[av] {
                    out.push(Row::new(RowKind::StrongMonotone, &[(av, 1), (a, -1)], 1));
                } else if a != 0 {
                    // With a = ∅ this is x_v >= 0, already a bound.
                    out.push(Row::new(RowKind::Monotone, &[(av, 1), (a, -1)], 0));
                }
                for &w in &outside[j + 1..] {
                    let aw = a | 1 << w;
                    let terms = [(av, 1), (aw, 1), (a, -1), (av | 1 << w, -1)];
                    let strong = indep[a] && !indep[av] && !indep[aw];
                    if strong && !opts.full_strong_submodularity {
                        out.push(Row::new(RowKind::StrongSubmodular, &terms, 1));
                    } else if !strong {
                        out.push(Row::new(RowKind::Submodular, &terms, 0));
                    }
                }
            }
            out
        })
        .collect();

    if opts.full_strong_submodularity {
        let full: Vec<Row> = (0..size)
            .into_par_iter()
            .filter(|&a| !indep[a])
            .flat_map_iter(|a| {
                let indep = &indep;
                (a + 1..size).filter(move |&b| !indep[b] && indep[a & b]).map(move |b| {
                    Row::new(
                        RowKind::StrongSubmodular,
                        &[(a, 1), (b, 1), (a & b, -1), (a | b, -1)],
                        1,
                    )
                })
            })
            .collect();
        rows.extend(full);
    }

    let mut cost = vec![Rational::zero(); size];
    match objective {
        Objective::Average => {
            let w = Rational::new(1, n as i64);
            for v in 0..n {
                cost[1 << v] = w.clone();
            }
        }
        Objective::Worst => {
            cost.push(Rational::one());
            for v in 0..n {
                rows.push(Row::new(RowKind::Epigraph, &[(size, 1), (1 << v, -1)], 0));
            }
        }
    }
    let p = LpProblem {
        n,
        objective,
        cost,
        rows,
    };
    p.validate()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{hypercube, path};

    #[test]
    fn edge_lp() {
        let p = build_entropy_lp(&hypercube(1).unwrap(), Objective::Average).unwrap();
        assert_eq!(p.subset_vars(), 4);
        assert_eq!(p.num_vars(), 4);
        // f(ab) - f(a) >= 1
        let want = Row::new(RowKind::StrongMonotone, &[(0b11, 1), (0b01, -1)], 1);
        assert!(p.rows.contains(&want));
        assert_eq!(
            p.cost,
            vec![
                Rational::zero(),
                Rational::new(1, 2),
                Rational::new(1, 2),
                Rational::zero()
            ]
        );
    }

    #[test]
    fn sizes() {
        let c2 = build_entropy_lp(&hypercube(2).unwrap(), Objective::Worst).unwrap();
        assert_eq!(c2.subset_vars(), 16);
        assert_eq!(c2.epigraph_var(), Some(16));
        assert_eq!(c2.count(RowKind::Epigraph), 4);
        assert!(build_entropy_lp(&hypercube(4).unwrap(), Objective::Average).is_err());
    }

    #[test]
    fn strong_monotone_row_count() {
        for g in [hypercube(2).unwrap(), hypercube(3).unwrap(), path(5).unwrap()] {
            let p = build_entropy_lp(&g, Objective::Average).unwrap();
            let n = g.n();
            let expected = (0u64..1 << n)
                .filter(|&a| g.is_independent_mask(a))
                .map(|a| {
                    (0..n)
                        .filter(|&v| a >> v & 1 == 0 && !g.is_independent_mask(a | 1 << v))
                        .count()
                })
                .sum::<usize>();
            assert_eq!(p.count(RowKind::StrongMonotone), expected);
        }
    }

    #[test]
    fn full_strong_form_adds_rows() {
        let g = path(4).unwrap();
        let el = build_entropy_lp(&g, Objective::Average).unwrap();
        let full = build_entropy_lp_with(
            &g,
            Objective::Average,
            LpOptions {
                full_strong_submodularity: true,
            },
        )
        .unwrap();
        assert!(full.count(RowKind::StrongSubmodular) > el.count(RowKind::StrongSubmodular));
    }

    #[test]
    fn lp_text() {
        let p = build_entropy_lp(&hypercube(1).unwrap(), Objective::Worst).unwrap();
        let text = p.to_lp_text();
        assert!(text.contains("Minimize\n obj: t\n"));
        assert!(text.contains(": - f1 + f3 >= 1\n"));
        assert!(text.contains(": - f1 + t >= 0\n"));
        assert!(text.ends_with("End\n"));
        let avg = build_entropy_lp(&hypercube(1).unwrap(), Objective::Average)
            .unwrap()
            .to_lp_text();
        assert!(avg.contains("obj: 1/2 f1 + 1/2 f2"));
    }
}
