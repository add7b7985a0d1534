//! Entropy accounting for linear schemes.
//!
//! For a linear scheme with a uniform seed, the joint entropy of any set of
//! shares is `rank * log p`, so all normalized entropies are exact rationals
//! `rank(rows) / rank(secret rows)`. [`distribution_entropy`] recomputes the
//! same numbers by brute force over the seed space as an independent check.

mod axioms;
mod distribution;
mod perfect;

pub use axioms::{
    verify_axioms, Axiom, Violation, EXHAUSTIVE_AXIOM_VERTICES, MAX_AXIOM_VERTICES, MAX_RECORDED_VIOLATIONS,
    SAMPLED_INSTANCES,
};
pub use distribution::distribution_entropy;
pub use perfect::{check_perfect, for_each_maximal_independent_set, PerfectReport};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Echelon;
use crate::graphs::VertexSet;
use crate::rational::Rational;
use crate::scheme::LinearScheme;

/// Largest ground set tabulated by [`scheme_polymatroid`].
pub const MAX_POLYMATROID_VERTICES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    SchemeDerived,
    LpWitness,
    Synthetic,
}

/// A rational set function on the subsets of `0..n`, indexed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolymatroidFn {
    n: usize,
    values: Vec<Rational>,
    source: Source,
}

impl PolymatroidFn {
    /// Wraps a table of `2^n` values. The axioms are not enforced here; see
    /// [`verify_axioms`].
    pub fn new(n: usize, values: Vec<Rational>, source: Source) -> Result<Self> {
        if n > MAX_POLYMATROID_VERTICES {
            return Err(Error::TooLarge {
                what: "polymatroid ground set",
                size: n as u128,
                cap: MAX_POLYMATROID_VERTICES as u128,
            });
        }
        if values.len() != 1 << n {
            return Err(Error::SizeMismatch(format!(
                "{} values for a ground set of {n}",
                values.len()
            )));
        }
        Ok(PolymatroidFn { n, values, source })
    }

    /// Tabulates `f` over every subset.
    pub fn from_fn(n: usize, source: Source, f: impl Fn(u32) -> Rational) -> Result<Self> {
        let values = (0..1u32 << n).map(f).collect();
        PolymatroidFn::new(n, values, source)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    #[inline]
    pub fn value(&self, mask: u32) -> &Rational {
        &self.values[mask as usize]
    }

    pub fn value_of(&self, set: &VertexSet) -> Result<&Rational> {
        match set.to_mask() {
            Some(m) if m < 1 << self.n => Ok(&self.values[m as usize]),
            _ => Err(Error::InvalidSubset(format!(
                "{set:?} is not a subset of 0..{}",
                self.n
            ))),
        }
    }

    pub fn singleton_sum(&self) -> Rational {
        (0..self.n).map(|v| self.value(1 << v)).sum()
    }

    /// The function induced on `vertices`: local vertex `i` is
    /// `vertices[i]`. This is the function of the spanned subgraph.
    pub fn restrict(&self, vertices: &[usize]) -> Result<PolymatroidFn> {
        if let Some(&v) = vertices.iter().find(|&&v| v >= self.n) {
            return Err(Error::InvalidSubset(format!("vertex {v} outside 0..{}", self.n)));
        }
        PolymatroidFn::from_fn(vertices.len(), self.source, |local| {
            let global = vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| local >> i & 1 == 1)
                .fold(0u32, |m, (_, &v)| m | 1 << v);
            self.value(global).clone()
        })
    }
}

fn check_scheme_vertices(s: &LinearScheme, set: &VertexSet) -> Result<()> {
    if set.max().is_some_and(|m| m >= s.graph().n()) {
        return Err(Error::InvalidSubset(format!("{set:?} is not a vertex subset")));
    }
    Ok(())
}

fn subset_rank(s: &LinearScheme, vertices: impl Iterator<Item = usize>, include_secret: bool) -> usize {
    let mut ech = Echelon::new(s.field(), s.seed_dim());
    let mut rank = 0;
    for v in vertices {
        rank += s.share_rows(v).row_iter().filter(|r| ech.insert(r)).count();
    }
    if include_secret {
        rank += s.secret_rows().row_iter().filter(|r| ech.insert(r)).count();
    }
    rank
}

/// Normalized entropy of the shares of `subset` (and the secret, if asked):
/// `rank(stacked rows) / rank(secret rows)`.
pub fn rank_entropy(s: &LinearScheme, subset: &VertexSet, include_secret: bool) -> Result<Rational> {
    check_scheme_vertices(s, subset)?;
    let r = subset_rank(s, subset.iter(), include_secret);
    Ok(Rational::new(r as i64, s.secret_len() as i64))
}

/// The normalized entropy function of a scheme on all `2^n` subsets.
pub fn scheme_polymatroid(s: &LinearScheme) -> Result<PolymatroidFn> {
    let n = s.graph().n();
    if n > MAX_POLYMATROID_VERTICES {
        return Err(Error::TooLarge {
            what: "scheme graph for polymatroid tabulation",
            size: n as u128,
            cap: MAX_POLYMATROID_VERTICES as u128,
        });
    }
    let l = s.secret_len() as i64;
    let values = (0..1u32 << n)
        .into_par_iter()
        .map(|mask| {
            let members = (0..n).filter(move |v| mask >> v & 1 == 1);
            Rational::new(subset_rank(s, members, false) as i64, l)
        })
        .collect();
    PolymatroidFn::new(n, values, Source::SchemeDerived)
}

/// Per-vertex, average and worst-case information ratios.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioReport {
    pub per_vertex: Vec<Rational>,
    pub average: Rational,
    pub worst: Rational,
}

impl RatioReport {
    pub fn from_ratios(per_vertex: Vec<Rational>) -> Self {
        let total: Rational = per_vertex.iter().sum();
        let average = &total / &Rational::from(per_vertex.len().max(1));
        let worst = per_vertex.iter().cloned().max().unwrap_or_default();
        RatioReport {
            per_vertex,
            average,
            worst,
        }
    }

    /// Sum of all per-vertex ratios: the total share size in units of the
    /// secret.
    pub fn total(&self) -> Rational {
        self.per_vertex.iter().sum()
    }

    pub fn histogram(&self) -> BTreeMap<Rational, usize> {
        let mut h = BTreeMap::new();
        for r in &self.per_vertex {
            *h.entry(r.clone()).or_default() += 1;
        }
        h
    }
}

pub fn ratio_report(s: &LinearScheme) -> RatioReport {
    let l = s.secret_len() as i64;
    let per_vertex = (0..s.graph().n())
        .map(|v| Rational::new(subset_rank(s, std::iter::once(v), false) as i64, l))
        .collect();
    RatioReport::from_ratios(per_vertex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::scheme::{build_cube_scheme, build_edge_scheme};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rank_entropy_examples() {
        let c2 = build_cube_scheme(2, Some(Field::new(3).unwrap())).unwrap();
        assert_eq!(rank_entropy(&c2, &VertexSet::new(), false).unwrap(), Rational::zero());
        assert_eq!(
            rank_entropy(&c2, &VertexSet::from_mask(0b0011), false).unwrap(),
            r(2, 1)
        );
        for d in 2..=5 {
            let s = build_cube_scheme(d, None).unwrap();
            for v in [0, (1 << d) - 1] {
                let h = rank_entropy(&s, &VertexSet::from_mask(1 << v), false).unwrap();
                assert_eq!(h, r(d as i64, 2));
            }
        }
        assert!(rank_entropy(&c2, &VertexSet::from_mask(1 << 4), false).is_err());
    }

    #[test]
    fn tabulation_of_c2() {
        let c2 = build_cube_scheme(2, Some(Field::new(3).unwrap())).unwrap();
        let f = scheme_polymatroid(&c2).unwrap();
        assert_eq!(f.value(0), &Rational::zero());
        assert_eq!(f.value(0b1111), &r(2, 1));
        assert_eq!(f.value(0b1001), &r(1, 1), "opposite corners 00 and 11 both hold r");
        assert!(f.values().iter().all(|v| v.is_integer() && *v <= r(3, 1)));
    }

    #[test]
    fn monotone_exhaustive() {
        for s in [
            build_cube_scheme(2, None).unwrap(),
            build_cube_scheme(3, None).unwrap(),
            build_edge_scheme(Field::new(2).unwrap()),
        ] {
            let f = scheme_polymatroid(&s).unwrap();
            let full = (1u32 << f.n()) - 1;
            for b in 0..=full {
                let mut a = b;
                loop {
                    assert!(f.value(a) <= f.value(b));
                    if a == 0 {
                        break;
                    }
                    a = (a - 1) & b;
                }
            }
        }
    }

    #[test]
    fn ratio_reports() {
        let c3 = ratio_report(&build_cube_scheme(3, None).unwrap());
        assert!(c3.per_vertex.iter().all(|x| *x == r(3, 2)));
        assert_eq!((c3.average.clone(), c3.worst.clone()), (r(3, 2), r(3, 2)));
        let e = ratio_report(&build_edge_scheme(Field::new(5).unwrap()));
        assert_eq!((e.average, e.worst), (r(1, 1), r(1, 1)));
        let mixed = RatioReport::from_ratios(vec![r(1, 1), r(2, 1), r(2, 1)]);
        assert_eq!(mixed.average, r(5, 3));
        assert!(mixed.worst >= mixed.average);
        assert_eq!(mixed.histogram().get(&r(2, 1)), Some(&2));
    }

    #[test]
    fn restriction_matches_spanned_subgraph() {
        let f = scheme_polymatroid(&build_cube_scheme(3, None).unwrap()).unwrap();
        let g = f.restrict(&[0, 1, 3, 7]).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.value(0b0110), f.value(0b1010));
        assert!(f.restrict(&[8]).is_err());
    }

    #[test]
    fn polymatroid_serde() {
        let f = scheme_polymatroid(&build_cube_scheme(2, None).unwrap()).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.starts_with(r#"{"n":4,"values":[[0,1],"#));
        let back: PolymatroidFn = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
